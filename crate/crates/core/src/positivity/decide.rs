use std::time::Instant;

use crate::error::{Error, Result};
use crate::matrix::{
    all_selections, contiguous_windows, index_subsets, is_alternating, selection_count, validate_order, AltVector,
    IndexPair, Matrix,
};
use crate::minors::{adjugate, det, z_vector_at};
use crate::scalar::Scalar;

use super::certificate::{sign_products, Certificate, Location, Property, Stats, Verdict};

/// Default per-size cap on all-submatrix enumeration.
pub const DEFAULT_SUBMATRIX_CAP: u128 = 10_000_000;

/// Limit on how many `r x r` submatrices a non-contiguous scan may visit
/// for a single `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_per_size: Option<u128>,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self { max_per_size: Some(DEFAULT_SUBMATRIX_CAP) }
    }
}

impl EnumerationBudget {
    pub fn unlimited() -> Self {
        Self { max_per_size: None }
    }

    fn check(&self, m: usize, n: usize, k: usize) -> Result<()> {
        if let Some(cap) = self.max_per_size {
            if let Some(r) = (1..=k).find(|&r| selection_count(m, n, r) > cap) {
                return Err(Error::BudgetExceeded(format!(
                    "{} submatrices of size {r} exceed the cap of {cap}",
                    selection_count(m, n, r)
                )));
            }
        }
        Ok(())
    }
}

struct Scan {
    stats: Stats,
    started: Instant,
}

impl Scan {
    fn start() -> Self {
        Self { stats: Stats::default(), started: Instant::now() }
    }

    fn det<T: Scalar>(&mut self, b: &Matrix<T>) -> Result<T> {
        self.stats.submatrices += 1;
        self.stats.determinants += 1;
        det(b)
    }

    fn finish<T: Scalar>(mut self, property: Property, cert: Certificate<T>) -> Verdict<T> {
        self.stats.elapsed = self.started.elapsed();
        Verdict::new(property, cert, self.stats)
    }
}

fn brute_force<T: Scalar>(a: &Matrix<T>, property: Property, k: usize) -> Result<Verdict<T>> {
    let mut scan = Scan::start();
    for r in 1..=k {
        for sel in all_selections(a.rows(), a.cols(), r)? {
            let value = scan.det(&a.submatrix(&sel)?)?;
            if property.violated_by(value.sign()) {
                return Ok(scan.finish(property, Certificate::FailingMinor { minor: sel, value }));
            }
        }
    }
    Ok(scan.finish(property, Certificate::Pass))
}

/// TP_k by evaluating every minor of size `<= k`. Reports the first failing
/// minor in (size, rows, cols) order.
pub fn is_tp_k_bruteforce<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<Verdict<T>> {
    validate_order(a.rows(), a.cols(), k)?;
    brute_force(a, Property::TotallyPositive { k }, k)
}

/// TN_k by evaluating every minor of size `<= k`, under the default budget.
pub fn is_tn_k_bruteforce<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<Verdict<T>> {
    is_tn_k_bruteforce_with(a, k, EnumerationBudget::default())
}

pub fn is_tn_k_bruteforce_with<T: Scalar>(a: &Matrix<T>, k: usize, budget: EnumerationBudget) -> Result<Verdict<T>> {
    validate_order(a.rows(), a.cols(), k)?;
    budget.check(a.rows(), a.cols(), k)?;
    brute_force(a, Property::TotallyNonNegative { k }, k)
}

/// TP_k from contiguous windows only (Fekete-Schoenberg reduction).
pub fn is_tp_k_contiguous<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<Verdict<T>> {
    validate_order(a.rows(), a.cols(), k)?;
    let property = Property::TotallyPositive { k };
    let mut scan = Scan::start();
    for r in 1..=k {
        for w in contiguous_windows(a.rows(), a.cols(), r)? {
            let value = scan.det(&a.window(&w)?)?;
            if !value.sign().is_positive() {
                let cert = Certificate::FailingMinor { minor: w.to_index_pair(), value };
                return Ok(scan.finish(property, cert));
            }
        }
    }
    Ok(scan.finish(property, Certificate::Pass))
}

/// Leading-sign-positive copy of the first nonzero adjugate column.
fn kernel_vector<T: Scalar>(b: &Matrix<T>) -> Result<Option<Vec<T>>> {
    let adj = adjugate(b)?;
    let r = b.rows();
    for j in 0..r {
        let col: Vec<T> = (0..r).map(|i| adj[(i, j)].clone()).collect();
        if let Some(first) = col.iter().find(|v| !v.is_zero_scalar()) {
            let flip = first.sign().is_negative();
            return Ok(Some(col.into_iter().map(|v| if flip { -v } else { v }).collect()));
        }
    }
    Ok(None)
}

/// Certificate for a square `b` with `det(b) <= 0` whose proper minors
/// are positive, or `None` when the expected witness does not materialize
/// (only possible with float rounding).
fn tp_witness<T: Scalar>(
    a: &Matrix<T>,
    sel: &IndexPair,
    location: Location,
    b: &Matrix<T>,
    d: &T,
) -> Result<Option<Certificate<T>>> {
    if d.sign().is_negative() {
        let z = z_vector_at(a, sel)?.into_values();
        let products = sign_products(b, &z)?;
        if is_alternating(&z) && products.iter().all(|p| p.sign().is_negative()) {
            return Ok(Some(Certificate::SignReversalWitness { location, x: z, products }));
        }
        return Ok(None);
    }
    let Some(x) = kernel_vector(b)? else { return Ok(None) };
    let bx = b.mul_vec(&x)?;
    if is_alternating(&x) && bx.iter().all(Scalar::is_zero_scalar) {
        return Ok(Some(Certificate::KernelWitness { location, x: AltVector::new(x)? }));
    }
    Ok(None)
}

/// TP_k by ascending contiguous windows, certifying the first failure with
/// a vector witness: `z^B` when `det(B) < 0` (every `z_i (B z)_i` is
/// negative), an alternating kernel vector when `det(B) = 0`.
pub fn tp_certificate<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<Verdict<T>> {
    validate_order(a.rows(), a.cols(), k)?;
    let property = Property::TotallyPositive { k };
    let mut scan = Scan::start();
    for r in 1..=k {
        for w in contiguous_windows(a.rows(), a.cols(), r)? {
            let b = a.window(&w)?;
            let d = scan.det(&b)?;
            if d.sign().is_positive() {
                continue;
            }
            let sel = w.to_index_pair();
            let cert = tp_witness(a, &sel, Location::Window(w), &b, &d)?
                .unwrap_or(Certificate::FailingMinor { minor: sel, value: d });
            return Ok(scan.finish(property, cert));
        }
    }
    Ok(scan.finish(property, Certificate::Pass))
}

/// TN_k by ascending size over all submatrices. The first negative minor is
/// certified by `z^B` when it is a total strict reversal, else by the minor.
pub fn tn_certificate<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<Verdict<T>> {
    tn_certificate_with(a, k, EnumerationBudget::default())
}

pub fn tn_certificate_with<T: Scalar>(a: &Matrix<T>, k: usize, budget: EnumerationBudget) -> Result<Verdict<T>> {
    validate_order(a.rows(), a.cols(), k)?;
    budget.check(a.rows(), a.cols(), k)?;
    let property = Property::TotallyNonNegative { k };
    let mut scan = Scan::start();
    for r in 1..=k {
        for sel in all_selections(a.rows(), a.cols(), r)? {
            let b = a.submatrix(&sel)?;
            let d = scan.det(&b)?;
            if !d.sign().is_negative() {
                continue;
            }
            let z = z_vector_at(a, &sel)?.into_values();
            let products = sign_products(&b, &z)?;
            let cert = if products.iter().all(|p| p.sign().is_negative()) {
                Certificate::SignReversalWitness { location: Location::Minor(sel), x: z, products }
            } else {
                Certificate::FailingMinor { minor: sel, value: d }
            };
            return Ok(scan.finish(property, cert));
        }
    }
    Ok(scan.finish(property, Certificate::Pass))
}

/// All `2^n - 1` principal minors positive, scanned by size then
/// lexicographically.
pub fn is_p_matrix<T: Scalar>(a: &Matrix<T>) -> Result<Verdict<T>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "P-matrix test needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let property = Property::PMatrix;
    let mut scan = Scan::start();
    for r in 1..=a.rows() {
        for idx in index_subsets(a.rows(), r) {
            let sel = IndexPair::principal(idx)?;
            let value = scan.det(&a.submatrix(&sel)?)?;
            if !value.sign().is_positive() {
                return Ok(scan.finish(property, Certificate::FailingMinor { minor: sel, value }));
            }
        }
    }
    Ok(scan.finish(property, Certificate::Pass))
}
