//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's determinant or enumeration code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use tpcheck::Matrix;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn rows_of(m: &Matrix<Q>) -> Vec<Vec<Q>> {
    m.to_rows()
}

/// Laplace expansion along the first row.
pub fn laplace_det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    if n == 0 {
        return Q::one();
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut total = Q::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Q>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = a[0][j].clone() * laplace_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// All increasing `r`-subsets of `0..n`, by recursion.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

pub fn sub(a: &[Vec<Q>], rows: &[usize], cols: &[usize]) -> Vec<Vec<Q>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

/// Every minor of size `1..=k` together with its 0-based index sets.
pub fn minors_upto(a: &[Vec<Q>], k: usize) -> Vec<(Vec<usize>, Vec<usize>, Q)> {
    let (m, n) = (a.len(), a[0].len());
    let mut out = Vec::new();
    for r in 1..=k {
        for rows in subsets(m, r) {
            for cols in subsets(n, r) {
                let d = laplace_det(&sub(a, &rows, &cols));
                out.push((rows.clone(), cols, d));
            }
        }
    }
    out
}

pub fn oracle_tp(a: &[Vec<Q>], k: usize) -> bool {
    minors_upto(a, k).iter().all(|(_, _, d)| d.is_positive())
}

pub fn oracle_tn(a: &[Vec<Q>], k: usize) -> bool {
    minors_upto(a, k).iter().all(|(_, _, d)| !d.is_negative())
}

/// Largest `k` with TP_k (0 if none), from a single minor list.
pub fn oracle_labels(a: &[Vec<Q>]) -> (usize, usize) {
    let full = a.len().min(a[0].len());
    let minors = minors_upto(a, full);
    let max_order = |bad: &dyn Fn(&Q) -> bool| {
        minors.iter().filter(|(_, _, d)| bad(d)).map(|(r, _, _)| r.len() - 1).min().unwrap_or(full)
    };
    (max_order(&|d: &Q| !d.is_positive()), max_order(&|d: &Q| d.is_negative()))
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter().map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (p, v)| acc + p.clone() * v.clone())).collect()
}

/// Sign changes after deleting zeros.
pub fn s_minus(x: &[Q]) -> usize {
    let signs: Vec<bool> = x.iter().filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}
