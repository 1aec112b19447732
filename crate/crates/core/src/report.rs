//! JSON verdict reports and their offline re-validation.
//!
//! A report embeds the object its certificate speaks about (the matrix, the
//! failing hull vertex together with the hull, or the sequence), so
//! [`verify_report`] can re-check the certificate without repeating the
//! search. Indices in reports are 1-based.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::interval::{HullVerdict, IntervalHull, TestMatrix};
use crate::io::{matrix_from_json, matrix_to_value, sequence_from_json, sequence_to_json};
use crate::matrix::{AltVector, IndexPair, Matrix, Window};
use crate::minors::det;
use crate::polya::{validate_pf_certificate, SeqWindow};
use crate::positivity::{validate_certificate, Certificate, Location, Property, Stats, Verdict};
use crate::scalar::{parse_rational, Mode, Scalar};

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn strings<T: Scalar>(v: &[T]) -> Vec<String> {
    v.iter().map(Scalar::render).collect()
}

fn location_to_json(location: &Location) -> Value {
    match location {
        Location::Window(w) => {
            json!({ "window": { "row_start": w.row_start, "col_start": w.col_start, "size": w.size } })
        }
        Location::Minor(sel) => json!({ "rows": sel.rows(), "cols": sel.cols() }),
        Location::Toeplitz { l, size } => json!({ "toeplitz": { "l": l, "size": size } }),
    }
}

pub fn certificate_to_json<T: Scalar>(cert: &Certificate<T>) -> Value {
    match cert {
        Certificate::Pass => json!({ "type": "Pass" }),
        Certificate::FailingMinor { minor, value } => json!({
            "type": "FailingMinor", "rows": minor.rows(), "cols": minor.cols(), "value": value.render(),
        }),
        Certificate::FailingToeplitzMinor { rows, cols, value } => json!({
            "type": "FailingToeplitzMinor", "rows": rows, "cols": cols, "value": value.render(),
        }),
        Certificate::SignReversalWitness { location, x, products } => json!({
            "type": "SignReversalWitness", "location": location_to_json(location),
            "x": strings(x), "products": strings(products),
        }),
        Certificate::WeakReversalWitness { location, x, products } => json!({
            "type": "WeakReversalWitness", "location": location_to_json(location),
            "x": strings(x), "products": strings(products),
        }),
        Certificate::KernelWitness { location, x } => json!({
            "type": "KernelWitness", "location": location_to_json(location), "x": strings(x.entries()),
        }),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse { position: "report".into(), message: msg.into() }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| bad(format!("missing field '{name}'")))
}

fn usize_list(v: &Value, name: &str) -> Result<Vec<usize>> {
    serde_json::from_value(field(v, name)?.clone()).map_err(|e| bad(format!("{name}: {e}")))
}

fn i64_list(v: &Value, name: &str) -> Result<Vec<i64>> {
    serde_json::from_value(field(v, name)?.clone()).map_err(|e| bad(format!("{name}: {e}")))
}

fn scalar<T: Scalar>(v: &Value, name: &str) -> Result<T> {
    let s = field(v, name)?.as_str().ok_or_else(|| bad(format!("{name} must be a string")))?;
    scalar_str(s, name)
}

fn scalar_str<T: Scalar>(s: &str, name: &str) -> Result<T> {
    if T::MODE == Mode::Float {
        if let Ok(f) = s.parse::<f64>() {
            return Ok(T::from_rational(&num_rational::BigRational::from_float(f).ok_or_else(|| bad("non-finite"))?));
        }
    }
    parse_rational(s).map(|r| T::from_rational(&r)).map_err(|m| bad(format!("{name}: {m}")))
}

fn scalar_list<T: Scalar>(v: &Value, name: &str) -> Result<Vec<T>> {
    let items = field(v, name)?.as_array().ok_or_else(|| bad(format!("{name} must be an array")))?;
    items
        .iter()
        .map(|s| scalar_str(s.as_str().ok_or_else(|| bad(format!("{name} entries must be strings")))?, name))
        .collect()
}

fn location_from_json(v: &Value) -> Result<Location> {
    if let Some(w) = v.get("window") {
        let get = |k: &str| field(w, k)?.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("window.{k}")));
        return Ok(Location::Window(Window::new(get("row_start")?, get("col_start")?, get("size")?)));
    }
    if let Some(t) = v.get("toeplitz") {
        let l = field(t, "l")?.as_i64().ok_or_else(|| bad("toeplitz.l"))?;
        let size = field(t, "size")?.as_u64().ok_or_else(|| bad("toeplitz.size"))? as usize;
        return Ok(Location::Toeplitz { l, size });
    }
    Ok(Location::Minor(IndexPair::new(usize_list(v, "rows")?, usize_list(v, "cols")?)?))
}

pub fn certificate_from_json<T: Scalar>(v: &Value) -> Result<Certificate<T>> {
    let kind = field(v, "type")?.as_str().ok_or_else(|| bad("type must be a string"))?;
    Ok(match kind {
        "Pass" => Certificate::Pass,
        "FailingMinor" => Certificate::FailingMinor {
            minor: IndexPair::new(usize_list(v, "rows")?, usize_list(v, "cols")?)?,
            value: scalar(v, "value")?,
        },
        "FailingToeplitzMinor" => Certificate::FailingToeplitzMinor {
            rows: i64_list(v, "rows")?,
            cols: i64_list(v, "cols")?,
            value: scalar(v, "value")?,
        },
        "SignReversalWitness" => Certificate::SignReversalWitness {
            location: location_from_json(field(v, "location")?)?,
            x: scalar_list(v, "x")?,
            products: scalar_list(v, "products")?,
        },
        "WeakReversalWitness" => Certificate::WeakReversalWitness {
            location: location_from_json(field(v, "location")?)?,
            x: scalar_list(v, "x")?,
            products: scalar_list(v, "products")?,
        },
        "KernelWitness" => Certificate::KernelWitness {
            location: location_from_json(field(v, "location")?)?,
            x: AltVector::new(scalar_list(v, "x")?).map_err(|e| bad(e.to_string()))?,
        },
        other => return Err(bad(format!("unknown certificate type '{other}'"))),
    })
}

pub fn property_to_json(p: Property) -> Value {
    let (kind, k) = match p {
        Property::TotallyPositive { k } => ("tp", Some(k)),
        Property::TotallyNonNegative { k } => ("tn", Some(k)),
        Property::PMatrix => ("p-matrix", None),
        Property::PolyaFrequency { k } => ("pf", Some(k)),
        Property::TotallyPositivePolya { k } => ("tp-pf", Some(k)),
    };
    json!({ "name": p.name(), "kind": kind, "k": k })
}

pub fn property_from_json(v: &Value) -> Result<Property> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("property.kind"))?;
    let k = || field(v, "k")?.as_u64().map(|k| k as usize).ok_or_else(|| bad("property.k"));
    Ok(match kind {
        "tp" => Property::TotallyPositive { k: k()? },
        "tn" => Property::TotallyNonNegative { k: k()? },
        "p-matrix" => Property::PMatrix,
        "pf" => Property::PolyaFrequency { k: k()? },
        "tp-pf" => Property::TotallyPositivePolya { k: k()? },
        other => return Err(bad(format!("unknown property '{other}'"))),
    })
}

pub fn stats_to_json(stats: &Stats) -> Value {
    json!({
        "determinants": stats.determinants,
        "submatrices": stats.submatrices,
        "skipped": stats.skipped,
        "samples": stats.samples,
        "wall_time_ms": stats.elapsed.as_secs_f64() * 1e3,
    })
}

fn mode_string<T: Scalar>() -> String {
    T::MODE.to_string()
}

fn verdict_fields<T: Scalar>(v: &Verdict<T>) -> Value {
    json!({
        "property": property_to_json(v.property),
        "holds": v.holds,
        "conclusive": v.conclusive,
        "certificate": certificate_to_json(&v.certificate),
        "stats": stats_to_json(&v.stats),
    })
}

/// The witness submatrix and its determinant, for certificates that point at
/// a submatrix of `a`.
fn witness_minor<T: Scalar>(a: &Matrix<T>, cert: &Certificate<T>) -> Value {
    let location = match cert {
        Certificate::SignReversalWitness { location, .. }
        | Certificate::WeakReversalWitness { location, .. }
        | Certificate::KernelWitness { location, .. } => location,
        _ => return Value::Null,
    };
    let sel = match location {
        Location::Window(w) => w.to_index_pair(),
        Location::Minor(sel) => sel.clone(),
        Location::Toeplitz { .. } => return Value::Null,
    };
    match a.submatrix(&sel).and_then(|b| det(&b)) {
        Ok(value) => json!({ "rows": sel.rows(), "cols": sel.cols(), "value": value.render() }),
        Err(_) => Value::Null,
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

/// Report for a single-matrix verdict.
pub fn matrix_report<T: Scalar>(command: &str, input_digest: &str, a: &Matrix<T>, v: &Verdict<T>) -> Value {
    merge(
        json!({
            "command": command,
            "input_digest": input_digest,
            "mode": mode_string::<T>(),
            "subject": { "kind": "matrix", "matrix": matrix_to_value(a) },
            "witness_minor": witness_minor(a, &v.certificate),
        }),
        verdict_fields(v),
    )
}

fn test_matrix_to_json(id: &TestMatrix) -> Value {
    match id {
        TestMatrix::CPlus => json!({ "type": "C+" }),
        TestMatrix::CMinus => json!({ "type": "C-" }),
        TestMatrix::Vertex { z, z_prime } => json!({ "type": "I_zz", "z": z, "z_prime": z_prime }),
    }
}

fn test_matrix_from_json(v: &Value) -> Result<TestMatrix> {
    let signs = |name: &str| -> Result<Vec<i8>> {
        serde_json::from_value(field(v, name)?.clone()).map_err(|e| bad(format!("{name}: {e}")))
    };
    match field(v, "type")?.as_str() {
        Some("C+") => Ok(TestMatrix::CPlus),
        Some("C-") => Ok(TestMatrix::CMinus),
        Some("I_zz") => Ok(TestMatrix::Vertex { z: signs("z")?, z_prime: signs("z_prime")? }),
        _ => Err(bad("unknown test matrix type")),
    }
}

/// Report for a hull verdict; the inner verdict is about the failing test
/// matrix when there is one.
pub fn hull_report<T: Scalar>(command: &str, input_digest: &str, h: &IntervalHull<T>, v: &HullVerdict<T>) -> Value {
    let failing = v.failing.as_ref().map(|(id, c)| {
        json!({
            "test_matrix": test_matrix_to_json(id),
            "matrix": matrix_to_value(c),
            "member": v.failing_is_member,
            "witness_minor": witness_minor(c, &v.inner.certificate),
        })
    });
    merge(
        json!({
            "command": command,
            "input_digest": input_digest,
            "mode": mode_string::<T>(),
            "subject": { "kind": "hull", "a": matrix_to_value(h.a()), "b": matrix_to_value(h.b()), "failing": failing },
            "test_matrices_checked": v.matrices_checked,
        }),
        merge(verdict_fields(&v.inner), json!({ "holds": v.holds })),
    )
}

pub fn sequence_report<T: Scalar>(command: &str, input_digest: &str, s: &SeqWindow<T>, v: &Verdict<T>) -> Value {
    let seq: Value = serde_json::from_str(&sequence_to_json(s)).expect("valid json");
    merge(
        json!({
            "command": command,
            "input_digest": input_digest,
            "mode": mode_string::<T>(),
            "subject": { "kind": "sequence", "sequence": seq },
        }),
        verdict_fields(v),
    )
}

/// Result of re-validating a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    pub certificate_kind: String,
    /// False for passes, which carry no witness to check.
    pub witness_checked: bool,
}

/// Re-checks the embedded certificate of a report.
pub fn verify_report<T: Scalar>(report: &Value) -> Result<Verification> {
    let holds = field(report, "holds")?.as_bool().ok_or_else(|| bad("holds must be a boolean"))?;
    let property = property_from_json(field(report, "property")?)?;
    let cert: Certificate<T> = certificate_from_json(field(report, "certificate")?)?;
    if holds != cert.is_pass() {
        return Err(Error::InvalidCertificate(format!("holds = {holds} but certificate is {}", cert.kind())));
    }
    let subject = field(report, "subject")?;
    let matrix_of = |v: &Value| -> Result<Matrix<T>> { matrix_from_json(&v.to_string()) };
    match field(subject, "kind")?.as_str() {
        Some("matrix") => validate_certificate(&cert, &matrix_of(field(subject, "matrix")?)?, property)?,
        Some("hull") => {
            if let Some(failing) = subject.get("failing").filter(|f| !f.is_null()) {
                let hull = IntervalHull::new(matrix_of(field(subject, "a")?)?, matrix_of(field(subject, "b")?)?)?;
                let c = matrix_of(field(failing, "matrix")?)?;
                let expected = match test_matrix_from_json(field(failing, "test_matrix")?)? {
                    TestMatrix::CPlus => hull.c_pm().0,
                    TestMatrix::CMinus => hull.c_pm().1,
                    TestMatrix::Vertex { z, z_prime } => hull.vertex(&z, &z_prime)?,
                };
                if expected != c {
                    return Err(Error::InvalidCertificate("test matrix does not match the hull".into()));
                }
                if !hull.contains(&c)? {
                    return Err(Error::InvalidCertificate("test matrix is not a hull member".into()));
                }
                validate_certificate(&cert, &c, property)?;
            } else if !holds {
                return Err(Error::InvalidCertificate("refuted hull without a failing test matrix".into()));
            }
        }
        Some("sequence") => {
            let s: SeqWindow<T> = sequence_from_json(&field(subject, "sequence")?.to_string())?;
            validate_pf_certificate(&s, &cert, property)?;
        }
        _ => return Err(bad("unknown subject kind")),
    }
    Ok(Verification { holds, certificate_kind: cert.kind().to_string(), witness_checked: !cert.is_pass() })
}
