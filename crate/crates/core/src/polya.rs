//! Polya frequency checks for finitely specified sequences.
//!
//! A sequence `(c_n)` is PF_k when every Toeplitz minor
//! `det(c_{m_i - n_j})` of size `<= k` is non-negative, and TP_k-PF when
//! they are all positive. Inputs are finite windows; terms outside the
//! window are unknown unless the sequence is declared finitely supported,
//! in which case they are zero.

use std::time::Instant;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{is_alternating, AltVector, Matrix};
use crate::minors::{adjugate, det, z_vector};
use crate::positivity::{
    check_kernel, check_minor_value, check_sign_reversal, check_weak_reversal, random_alternating, snr_strict_at,
    Certificate, Location, Property, Stats, Verdict,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SeqWindow<T> {
    offset: i64,
    values: Vec<T>,
    finite_support: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfMode {
    /// Minors `>= 0`.
    Pf,
    /// Minors `> 0`.
    Tp,
}

impl std::str::FromStr for PfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pf" => Ok(PfMode::Pf),
            "tp" => Ok(PfMode::Tp),
            other => Err(Error::InvalidArgument(format!("unknown PF mode '{other}' (expected pf or tp)"))),
        }
    }
}

impl PfMode {
    fn property(self, k: usize) -> Property {
        match self {
            PfMode::Pf => Property::PolyaFrequency { k },
            PfMode::Tp => Property::TotallyPositivePolya { k },
        }
    }
}

impl<T: Scalar> SeqWindow<T> {
    /// Terms `c_offset, ..., c_{offset + len - 1}`.
    pub fn new(offset: i64, values: Vec<T>, finite_support: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDimension("sequence window needs at least one term".into()));
        }
        Ok(Self { offset, values, finite_support })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn finite_support(&self) -> bool {
        self.finite_support
    }

    fn last_index(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    /// `c_n`, or `None` when it is not determined by the data.
    pub fn term(&self, n: i64) -> Option<T> {
        if (self.offset..=self.last_index()).contains(&n) {
            Some(self.values[(n - self.offset) as usize].clone())
        } else if self.finite_support {
            Some(T::zero())
        } else {
            None
        }
    }

    /// Index range enumerated by the checks: the window itself, or for a
    /// finitely supported sequence the support widened by `k` on each side.
    pub fn enumeration_range(&self, k: usize) -> (i64, i64) {
        if !self.finite_support {
            return (self.offset, self.last_index());
        }
        let nonzero: Vec<i64> = (self.offset..=self.last_index())
            .filter(|&n| !self.values[(n - self.offset) as usize].is_zero_scalar())
            .collect();
        let (lo, hi) = match (nonzero.first(), nonzero.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (self.offset, self.last_index()),
        };
        (lo - k as i64, hi + k as i64)
    }

    /// `det(c_{m_i - n_j})`, or `None` when some term is undetermined.
    pub fn toeplitz_minor_matrix(&self, rows: &[i64], cols: &[i64]) -> Option<Matrix<T>> {
        let entries: Option<Vec<T>> =
            rows.iter().flat_map(|&m| cols.iter().map(move |&n| m - n)).map(|d| self.term(d)).collect();
        Matrix::new(rows.len(), cols.len(), entries?).ok()
    }
}

/// The `r x r` block `(c_{l+i-j})`, or `None` when a needed term is unknown.
pub fn toeplitz_block<T: Scalar>(s: &SeqWindow<T>, l: i64, r: usize) -> Option<Matrix<T>> {
    if r == 0 {
        return None;
    }
    let entries: Option<Vec<T>> =
        (0..r as i64).flat_map(|i| (0..r as i64).map(move |j| l + i - j)).map(|idx| s.term(idx)).collect();
    Matrix::new(r, r, entries?).ok()
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::OrderOutOfRange { k, max: usize::MAX });
    }
    Ok(())
}

/// Checks every determined Toeplitz minor of size `<= k` in the enumeration
/// range. Minors are normalised to `n_1 = 0` (the matrix depends only on
/// index differences) and enumerated by size, then `m`, then `n`
/// lexicographically. Minors touching unknown terms are counted in
/// `stats.skipped`.
pub fn is_pf_k_window<T: Scalar>(s: &SeqWindow<T>, k: usize, mode: PfMode) -> Result<Verdict<T>> {
    check_k(k)?;
    let started = Instant::now();
    let property = mode.property(k);
    let (lo, hi) = s.enumeration_range(k);
    let span = hi - lo;
    let mut stats = Stats::default();
    for r in 1..=k {
        let col_sets: Vec<Vec<i64>> = if r == 1 {
            vec![vec![0]]
        } else {
            (1..=span).combinations(r - 1).map(|rest| std::iter::once(0).chain(rest).collect()).collect()
        };
        for rows in (lo..=hi).combinations(r) {
            for cols in &col_sets {
                let Some(b) = s.toeplitz_minor_matrix(&rows, cols) else {
                    stats.skipped += 1;
                    continue;
                };
                stats.submatrices += 1;
                stats.determinants += 1;
                let value = det(&b)?;
                if property.violated_by(value.sign()) {
                    stats.elapsed = started.elapsed();
                    let cert = Certificate::FailingToeplitzMinor { rows, cols: cols.clone(), value };
                    return Ok(Verdict::new(property, cert, stats));
                }
            }
        }
    }
    stats.elapsed = started.elapsed();
    Ok(Verdict::new(property, Certificate::Pass, stats))
}

/// Deterministic candidates tried before random sampling: `z^B` and the
/// first nonzero adjugate column (a kernel vector when `B` is singular).
fn candidate_vectors<T: Scalar>(b: &Matrix<T>) -> Result<Vec<Vec<T>>> {
    let mut out = Vec::new();
    let z = z_vector(b)?.into_values();
    if is_alternating(&z) {
        out.push(z);
    }
    let adj = adjugate(b)?;
    let r = b.rows();
    if let Some(col) = (0..r)
        .map(|j| (0..r).map(|i| adj[(i, j)].clone()).collect::<Vec<T>>())
        .find(|c| c.iter().any(|v| !v.is_zero_scalar()))
    {
        if is_alternating(&col) {
            out.push(col);
        }
    }
    Ok(out)
}

/// Tests strict sign non-reversal of every determined Toeplitz block of size
/// `<= k` with `l` in the enumeration range, first at deterministic candidate
/// vectors, then at `samples` random alternating vectors. A counterexample
/// refutes TP_k-PF; a pass is "no counterexample found".
pub fn pf_snr_check<T: Scalar>(s: &SeqWindow<T>, k: usize, samples: usize, seed: u64) -> Result<Verdict<T>> {
    check_k(k)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let started = Instant::now();
    let property = Property::TotallyPositivePolya { k };
    let (lo, hi) = s.enumeration_range(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = Stats::default();
    for r in 1..=k {
        for l in lo..=hi {
            let Some(b) = toeplitz_block(s, l, r) else {
                stats.skipped += 1;
                continue;
            };
            stats.submatrices += 1;
            let location = Location::Toeplitz { l, size: r };
            let mut tried = candidate_vectors(&b)?;
            tried.extend((0..samples).map(|_| random_alternating::<T, _>(&mut rng, r)));
            for x in tried {
                stats.samples += 1;
                let outcome = snr_strict_at(&b, &x)?;
                if outcome.holds {
                    continue;
                }
                let products = outcome.products;
                let cert = if products.iter().all(Scalar::is_zero_scalar) {
                    Certificate::KernelWitness { location, x: AltVector::new(x)? }
                } else if products.iter().all(|p| p.sign().is_negative()) {
                    Certificate::SignReversalWitness { location, x, products }
                } else {
                    Certificate::WeakReversalWitness { location, x, products }
                };
                stats.elapsed = started.elapsed();
                return Ok(Verdict::sampled(property, cert, stats));
            }
        }
    }
    stats.elapsed = started.elapsed();
    Ok(Verdict::sampled(property, Certificate::Pass, stats))
}

/// Re-checks a sequence certificate against the sequence.
pub fn validate_pf_certificate<T: Scalar>(s: &SeqWindow<T>, cert: &Certificate<T>, property: Property) -> Result<()> {
    let block_at = |location: &Location| -> Result<Matrix<T>> {
        match location {
            Location::Toeplitz { l, size } => toeplitz_block(s, *l, *size)
                .ok_or_else(|| Error::InvalidCertificate(format!("block at l = {l} is not determined"))),
            _ => Err(Error::InvalidCertificate("sequence certificates use Toeplitz locations".into())),
        }
    };
    match cert {
        Certificate::Pass => Ok(()),
        Certificate::FailingToeplitzMinor { rows, cols, value } => {
            let increasing = |v: &[i64]| v.windows(2).all(|w| w[0] < w[1]);
            if rows.len() != cols.len() || rows.is_empty() || !increasing(rows) || !increasing(cols) {
                return Err(Error::InvalidCertificate(
                    "index tuples must be strictly increasing and equal length".into(),
                ));
            }
            let b = s
                .toeplitz_minor_matrix(rows, cols)
                .ok_or_else(|| Error::InvalidCertificate("cited minor is not determined".into()))?;
            check_minor_value(&det(&b)?, value, property)
        }
        Certificate::SignReversalWitness { location, x, products } => {
            check_sign_reversal(&block_at(location)?, x, products)
        }
        Certificate::WeakReversalWitness { location, x, products } => {
            check_weak_reversal(&block_at(location)?, x, products)
        }
        Certificate::KernelWitness { location, x } => check_kernel(&block_at(location)?, x.entries()),
        Certificate::FailingMinor { .. } => Err(Error::InvalidCertificate("matrix minor cited for a sequence".into())),
    }
}
