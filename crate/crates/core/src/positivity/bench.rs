//! Cost comparison between all-minor and contiguous-window TP_k checks.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::matrix::{all_selections, contiguous_windows, validate_order, Matrix};
use crate::minors::det;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodCost {
    pub determinants: u64,
    pub elapsed: Duration,
    pub all_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub k: usize,
    pub brute_force: MethodCost,
    pub contiguous: MethodCost,
}

fn exhaustive<T: Scalar>(blocks: impl Iterator<Item = Result<Matrix<T>>>) -> Result<MethodCost> {
    let started = Instant::now();
    let mut determinants = 0;
    let mut all_positive = true;
    for b in blocks {
        determinants += 1;
        all_positive &= det(&b?)?.sign().is_positive();
    }
    Ok(MethodCost { determinants, elapsed: started.elapsed(), all_positive })
}

/// Evaluates every minor of size `<= k` and every contiguous window of size
/// `<= k` without early exit, so counts are the full cost of each method.
pub fn bench_tp<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<BenchReport> {
    validate_order(a.rows(), a.cols(), k)?;
    let (m, n) = a.shape();
    let mut selections = Vec::new();
    let mut windows = Vec::new();
    for r in 1..=k {
        selections.extend(all_selections(m, n, r)?);
        windows.extend(contiguous_windows(m, n, r)?);
    }
    let brute_force = exhaustive(selections.iter().map(|s| a.submatrix(s)))?;
    let contiguous = exhaustive(windows.iter().map(|w| a.window(w)))?;
    Ok(BenchReport { k, brute_force, contiguous })
}
