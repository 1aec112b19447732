//! Python module `tpcheck`: exact total positivity checks.
//!
//! Matrices are built from nested lists of ints, floats written as decimal
//! strings, or rational strings like `"3/4"`. Scalars come back as strings
//! so no precision is lost.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde_json::Value;

use tpcheck::generators::{generate as run_generator, Generated, GeneratorSpec};
use tpcheck::interval::{hull_is_tn_k_with, HullBudget};
use tpcheck::io::{corpus_entry_to_value, matrix_from_json, matrix_to_json, matrix_to_value};
use tpcheck::positivity::{bench_tp, is_tp_k_bruteforce, is_tp_k_contiguous, tn_certificate};
use tpcheck::report::{digest, hull_report, matrix_report, sequence_report, verify_report};
use tpcheck::scalar::parse_rational;
use tpcheck::{Exact, IntervalHull, Scalar, SeqWindow};

fn err(e: tpcheck::Error) -> PyErr {
    match e {
        tpcheck::Error::BudgetExceeded(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn scalar_from_py(obj: &Bound<'_, PyAny>) -> PyResult<Exact> {
    let text = if let Ok(s) = obj.cast::<PyString>() {
        s.to_str()?.to_owned()
    } else if let Ok(i) = obj.extract::<i64>() {
        i.to_string()
    } else if let Ok(f) = obj.extract::<f64>() {
        // Exact binary value of the float.
        return Exact::from_float(f).ok_or_else(|| PyValueError::new_err(format!("non-finite entry {f}")));
    } else {
        obj.str()?.to_str()?.to_owned()
    };
    parse_rational(&text).map_err(PyValueError::new_err)
}

fn to_json_obj(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (value.to_string(),))?.unbind())
}

/// Dense matrix of exact rationals.
#[pyclass(name = "Matrix", module = "tpcheck", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyMatrix {
    inner: tpcheck::Matrix<Exact>,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(scalar_from_py).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: tpcheck::Matrix::from_rows(rows).map_err(err)? })
    }

    /// Parses the JSON matrix format (or a corpus entry).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: matrix_from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        matrix_to_json(&self.inner)
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    /// Entries as rational strings.
    #[getter]
    fn entries(&self) -> Vec<Vec<String>> {
        self.inner.render_rows()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.inner.render_rows())
    }
}

/// A verdict together with its JSON report.
#[pyclass(name = "Verdict", module = "tpcheck", frozen)]
pub struct PyVerdict {
    report: Value,
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn holds(&self) -> bool {
        self.report["holds"].as_bool().unwrap_or(false)
    }

    /// False when a pass only means no counterexample was found.
    #[getter]
    fn conclusive(&self) -> bool {
        self.report["conclusive"].as_bool().unwrap_or(false)
    }

    #[getter]
    fn property(&self) -> String {
        self.report["property"]["name"].as_str().unwrap_or_default().to_owned()
    }

    #[getter]
    fn certificate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_json_obj(py, &self.report["certificate"])
    }

    #[getter]
    fn stats(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_json_obj(py, &self.report["stats"])
    }

    /// The full report as a JSON string, accepted by `verify_report`.
    fn report(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("json values serialize")
    }

    /// Re-checks the embedded certificate.
    fn validate(&self) -> PyResult<bool> {
        match verify_report::<Exact>(&self.report) {
            Ok(_) => Ok(true),
            Err(tpcheck::Error::InvalidCertificate(_)) => Ok(false),
            Err(e) => Err(err(e)),
        }
    }

    fn __bool__(&self) -> bool {
        self.holds()
    }

    fn __repr__(&self) -> String {
        let kind = self.report["certificate"]["type"].as_str().unwrap_or("?");
        format!("Verdict({}, holds={}, certificate={kind})", self.property(), self.holds())
    }
}

fn matrix_verdict(
    name: &str,
    a: &tpcheck::Matrix<Exact>,
    v: tpcheck::Result<tpcheck::Verdict<Exact>>,
) -> PyResult<PyVerdict> {
    let v = v.map_err(err)?;
    Ok(PyVerdict { report: matrix_report(name, &digest(matrix_to_json(a).as_bytes()), a, &v) })
}

#[pyfunction]
fn det(m: &PyMatrix) -> PyResult<String> {
    Ok(tpcheck::det(&m.inner).map_err(err)?.render())
}

#[pyfunction]
fn adjugate(m: &PyMatrix) -> PyResult<PyMatrix> {
    Ok(PyMatrix { inner: tpcheck::adjugate(&m.inner).map_err(err)? })
}

/// `det(B) adj(B) d_r` for a square matrix.
#[pyfunction]
fn z_vector(m: &PyMatrix) -> PyResult<Vec<String>> {
    Ok(tpcheck::z_vector(&m.inner).map_err(err)?.values().iter().map(Scalar::render).collect())
}

#[pyfunction]
#[pyo3(signature = (m, k, method = "certificate"))]
fn check_tp(m: &PyMatrix, k: usize, method: &str) -> PyResult<PyVerdict> {
    let v = match method {
        "brute" => is_tp_k_bruteforce(&m.inner, k),
        "contiguous" => is_tp_k_contiguous(&m.inner, k),
        "certificate" => tpcheck::tp_certificate(&m.inner, k),
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    };
    matrix_verdict("check-tp", &m.inner, v)
}

#[pyfunction]
fn check_tn(m: &PyMatrix, k: usize) -> PyResult<PyVerdict> {
    matrix_verdict("check-tn", &m.inner, tn_certificate(&m.inner, k))
}

#[pyfunction]
fn is_p_matrix(m: &PyMatrix) -> PyResult<PyVerdict> {
    matrix_verdict("p-matrix", &m.inner, tpcheck::is_p_matrix(&m.inner))
}

fn hull(a: &PyMatrix, b: &PyMatrix) -> PyResult<(IntervalHull<Exact>, String)> {
    let h = IntervalHull::new(a.inner.clone(), b.inner.clone()).map_err(err)?;
    let d = digest(format!("{}{}", matrix_to_json(&a.inner), matrix_to_json(&b.inner)).as_bytes());
    Ok((h, d))
}

#[pyfunction]
fn hull_tp(a: &PyMatrix, b: &PyMatrix, k: usize) -> PyResult<PyVerdict> {
    let (h, d) = hull(a, b)?;
    let v = tpcheck::hull_is_tp_k(&h, k).map_err(err)?;
    Ok(PyVerdict { report: hull_report("hull-tp", &d, &h, &v) })
}

#[pyfunction]
#[pyo3(signature = (a, b, k, budget = None))]
fn hull_tn(a: &PyMatrix, b: &PyMatrix, k: usize, budget: Option<u128>) -> PyResult<PyVerdict> {
    let (h, d) = hull(a, b)?;
    let mut hb = HullBudget::default();
    if budget.is_some() {
        hb.max_family = budget;
    }
    let v = hull_is_tn_k_with(&h, k, hb).map_err(err)?;
    Ok(PyVerdict { report: hull_report("hull-tn", &d, &h, &v) })
}

/// `(C+, C-)` of the hull spanned by `a` and `b`.
#[pyfunction]
fn c_pm(a: &PyMatrix, b: &PyMatrix) -> PyResult<(PyMatrix, PyMatrix)> {
    let (plus, minus) = hull(a, b)?.0.c_pm();
    Ok((PyMatrix { inner: plus }, PyMatrix { inner: minus }))
}

/// Toeplitz-minor check of the window `c_offset, ..., c_{offset+len-1}`.
#[pyfunction]
#[pyo3(signature = (values, k, offset = 0, finite_support = true, mode = "pf"))]
fn pf_check(
    values: Vec<Bound<'_, PyAny>>,
    k: usize,
    offset: i64,
    finite_support: bool,
    mode: &str,
) -> PyResult<PyVerdict> {
    let values = values.iter().map(scalar_from_py).collect::<PyResult<Vec<_>>>()?;
    let s = SeqWindow::new(offset, values, finite_support).map_err(err)?;
    let mode = mode.parse().map_err(err)?;
    let v = tpcheck::is_pf_k_window(&s, k, mode).map_err(err)?;
    let d = digest(tpcheck::io::sequence_to_json(&s).as_bytes());
    Ok(PyVerdict { report: sequence_report("pf-check", &d, &s, &v) })
}

/// Determinant counts and timings of the brute-force and contiguous checks.
#[pyfunction]
#[pyo3(name = "bench")]
fn bench_counts(py: Python<'_>, m: &PyMatrix, k: usize) -> PyResult<Py<PyAny>> {
    let r = bench_tp(&m.inner, k).map_err(err)?;
    let cost = |c: &tpcheck::positivity::MethodCost| serde_json::json!({ "determinants": c.determinants, "wall_time_ms": c.elapsed.as_secs_f64() * 1e3 });
    to_json_obj(
        py,
        &serde_json::json!({ "k": r.k, "brute_force": cost(&r.brute_force), "contiguous": cost(&r.contiguous) }),
    )
}

/// Runs a generator spec (JSON string); returns the generated JSON.
#[pyfunction]
#[pyo3(signature = (spec, seed = None))]
fn generate(spec: &str, seed: Option<u64>) -> PyResult<String> {
    let spec: GeneratorSpec = serde_json::from_str(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
    if spec.is_randomized() && seed.is_none() {
        return Err(PyValueError::new_err("randomized generator requires a seed"));
    }
    let value = match run_generator::<Exact>(&spec, seed).map_err(err)? {
        Generated::Matrix(entry) => corpus_entry_to_value(&entry),
        Generated::Hull(h) => serde_json::json!({ "a": matrix_to_value(h.a()), "b": matrix_to_value(h.b()) }),
    };
    Ok(value.to_string())
}

/// Re-validates a JSON report; False if its certificate is rejected.
#[pyfunction]
fn verify_report_json(text: &str) -> PyResult<bool> {
    let value: Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    match verify_report::<Exact>(&value) {
        Ok(_) => Ok(true),
        Err(tpcheck::Error::InvalidCertificate(_)) => Ok(false),
        Err(e) => Err(err(e)),
    }
}

#[pymodule]
#[pyo3(name = "tpcheck")]
fn tpcheck_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(det, m)?)?;
    m.add_function(wrap_pyfunction!(adjugate, m)?)?;
    m.add_function(wrap_pyfunction!(z_vector, m)?)?;
    m.add_function(wrap_pyfunction!(check_tp, m)?)?;
    m.add_function(wrap_pyfunction!(check_tn, m)?)?;
    m.add_function(wrap_pyfunction!(is_p_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(hull_tp, m)?)?;
    m.add_function(wrap_pyfunction!(hull_tn, m)?)?;
    m.add_function(wrap_pyfunction!(c_pm, m)?)?;
    m.add_function(wrap_pyfunction!(pf_check, m)?)?;
    m.add_function(wrap_pyfunction!(bench_counts, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_report_json, m)?)?;
    Ok(())
}
