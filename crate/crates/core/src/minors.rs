//! Determinants, adjugates, minor enumeration and the `z^B` test vector.

use std::ops::{Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{all_selections, alt_vector, IndexPair, Matrix, MinorId};
use crate::scalar::{Mode, Scalar};

fn require_square<T: Scalar>(b: &Matrix<T>) -> Result<usize> {
    if !b.is_square() {
        return Err(Error::ShapeMismatch(format!("expected a square matrix, got {}x{}", b.rows(), b.cols())));
    }
    Ok(b.rows())
}

/// Determinant of a square matrix.
///
/// Exact scalars use fraction-free (Bareiss) elimination on the integer
/// matrix obtained by clearing each row's denominators, pivoting only to
/// skip zero pivots. Floats use LU with partial pivoting.
pub fn det<T: Scalar>(b: &Matrix<T>) -> Result<T> {
    require_square(b)?;
    Ok(match T::MODE {
        Mode::Exact => integer_det(b),
        Mode::Float => lu_det(b),
    })
}

fn integer_det<T: Scalar>(b: &Matrix<T>) -> T {
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        let row: Vec<BigRational> = b.row(i).iter().map(|v| v.to_rational().expect("exact scalar")).collect();
        let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        rows.push(row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect::<Vec<BigInt>>());
        scale *= lcm;
    }
    T::from_rational(&BigRational::new(bareiss(rows), scale))
}

/// Bareiss elimination; every division is exact.
fn bareiss<T: Clone + Zero + One + PartialEq + Neg<Output = T>>(mut a: Vec<Vec<T>>) -> T
where
    for<'x> &'x T: Mul<&'x T, Output = T> + Sub<&'x T, Output = T> + Div<&'x T, Output = T>,
{
    let n = a.len();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return T::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = &v / &prev;
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn lu_det<T: Scalar>(b: &Matrix<T>) -> T {
    let n = b.rows();
    let mut a = b.to_rows();
    let mut acc = T::one();
    for k in 0..n {
        let p =
            (k..n).max_by(|&x, &y| a[x][k].to_f64().abs().total_cmp(&a[y][k].to_f64().abs())).expect("non-empty range");
        if a[p][k].to_f64() == 0.0 {
            return T::zero();
        }
        if p != k {
            a.swap(p, k);
            acc = -acc;
        }
        let pivot = a[k][k].clone();
        acc = acc * pivot.clone();
        for i in k + 1..n {
            let factor = a[i][k].clone() / pivot.clone();
            for j in k + 1..n {
                a[i][j] = a[i][j].clone() - factor.clone() * a[k][j].clone();
            }
        }
    }
    acc
}

/// Laplace expansion along the first row. Exponential; kept as an
/// independent cross-check for small sizes.
pub fn det_by_cofactors<T: Scalar>(b: &Matrix<T>) -> Result<T> {
    require_square(b)?;
    Ok(laplace(b))
}

fn laplace<T: Scalar>(b: &Matrix<T>) -> T {
    let n = b.rows();
    if n == 1 {
        return b[(0, 0)].clone();
    }
    (0..n).fold(T::zero(), |acc, j| {
        if b[(0, j)].is_zero_scalar() {
            return acc;
        }
        let term = b[(0, j)].clone() * laplace(&b.without(0, j).expect("n >= 2"));
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Signed cofactor `(-1)^(i+j) det(B without row i, col j)`, 0-based.
pub fn cofactor<T: Scalar>(b: &Matrix<T>, i: usize, j: usize) -> Result<T> {
    let n = require_square(b)?;
    if i >= n || j >= n {
        return Err(Error::IndexOutOfRange(format!("cofactor ({i},{j}) of {n}x{n}")));
    }
    if n == 1 {
        return Ok(T::one());
    }
    let minor = det(&b.without(i, j).expect("n >= 2"))?;
    Ok(if (i + j) % 2 == 0 { minor } else { -minor })
}

/// Transposed cofactor matrix; `B adj(B) = det(B) I` holds for singular `B` too.
pub fn adjugate<T: Scalar>(b: &Matrix<T>) -> Result<Matrix<T>> {
    let n = require_square(b)?;
    if T::MODE == Mode::Float && n > 4 {
        let d = det(b)?;
        if !d.is_zero_scalar() {
            if let Some(inv) = float_inverse(b) {
                return Ok(inv.scale(&d));
            }
        }
    }
    let cof = Matrix::from_fn(n, n, |i, j| cofactor(b, i, j).expect("in range"))?;
    Ok(cof.transpose())
}

fn float_inverse<T: Scalar>(b: &Matrix<T>) -> Option<Matrix<T>> {
    let n = b.rows();
    let mut a = b.to_rows();
    let mut inv = Matrix::<T>::identity(n).ok()?.to_rows();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].to_f64().abs().total_cmp(&a[y][k].to_f64().abs()))?;
        if a[p][k].to_f64() == 0.0 {
            return None;
        }
        a.swap(p, k);
        inv.swap(p, k);
        let pivot = a[k][k].clone();
        for j in 0..n {
            a[k][j] = a[k][j].clone() / pivot.clone();
            inv[k][j] = inv[k][j].clone() / pivot.clone();
        }
        for i in (0..n).filter(|&i| i != k) {
            let f = a[i][k].clone();
            for j in 0..n {
                a[i][j] = a[i][j].clone() - f.clone() * a[k][j].clone();
                inv[i][j] = inv[i][j].clone() - f.clone() * inv[k][j].clone();
            }
        }
    }
    Matrix::from_rows(inv).ok()
}

/// Every `r x r` minor, in lexicographic `(rows, cols)` order.
pub fn all_minors<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<Vec<(MinorId, T)>> {
    all_selections(a.rows(), a.cols(), r)?
        .map(|sel| {
            let value = det(&a.submatrix(&sel)?)?;
            Ok((sel, value))
        })
        .collect()
}

pub fn minor<T: Scalar>(a: &Matrix<T>, id: &MinorId) -> Result<T> {
    det(&a.submatrix(id)?)
}

/// `z^B = det(B) adj(B) d_r` together with where `B` came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ZVector<T> {
    source: IndexPair,
    values: Vec<T>,
}

impl<T: Scalar> ZVector<T> {
    pub fn source(&self) -> &IndexPair {
        &self.source
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero_scalar)
    }

    /// Recomputes the vector from `a` and compares.
    pub fn verify(&self, a: &Matrix<T>) -> Result<bool> {
        let b = a.submatrix(&self.source)?;
        Ok(z_values(&b)? == self.values)
    }
}

fn z_values<T: Scalar>(b: &Matrix<T>) -> Result<Vec<T>> {
    let r = require_square(b)?;
    let d = det(b)?;
    if d.is_zero_scalar() {
        return Ok(vec![T::zero(); r]);
    }
    let adj = adjugate(b)?;
    let alt = alt_vector::<T>(r, true)?;
    Ok(adj.mul_vec(alt.entries())?.into_iter().map(|v| v * d.clone()).collect())
}

/// `z^B` for a square matrix `B` (source is the full index set of `B`).
pub fn z_vector<T: Scalar>(b: &Matrix<T>) -> Result<ZVector<T>> {
    let r = require_square(b)?;
    let full: Vec<usize> = (1..=r).collect();
    Ok(ZVector { source: IndexPair::new(full.clone(), full)?, values: z_values(b)? })
}

/// `z^B` for the submatrix of `a` selected by `source`.
pub fn z_vector_at<T: Scalar>(a: &Matrix<T>, source: &IndexPair) -> Result<ZVector<T>> {
    let b = a.submatrix(source)?;
    Ok(ZVector { source: source.clone(), values: z_values(&b)? })
}

/// Coordinatewise right-hand side of the cofactor-sum identity for `z^B`:
/// `(-1)^(i-1) det(B) sum_j det B[rows != j, cols != i]`.
pub fn z_vector_by_cofactor_sums<T: Scalar>(b: &Matrix<T>) -> Result<Vec<T>> {
    let r = require_square(b)?;
    let d = det(b)?;
    (0..r)
        .map(|i| {
            let sum = if r == 1 {
                T::one()
            } else {
                (0..r).try_fold(T::zero(), |acc, j| Ok::<_, Error>(acc + det(&b.without(j, i).expect("r >= 2"))?))?
            };
            let v = d.clone() * sum;
            Ok(if i % 2 == 0 { v } else { -v })
        })
        .collect()
}

/// Per-row sums `sum_j det B[rows != j, cols != i]`, which for a matrix with
/// all proper minors positive are all positive.
pub fn cofactor_row_sums<T: Scalar>(b: &Matrix<T>) -> Result<Vec<T>> {
    let r = require_square(b)?;
    (0..r)
        .map(|i| {
            if r == 1 {
                return Ok(T::one());
            }
            (0..r).try_fold(T::zero(), |acc, j| Ok(acc + det(&b.without(j, i).expect("r >= 2"))?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Exact};

    fn m(rows: &[[i64; 2]]) -> Matrix<Exact> {
        Matrix::from_i64_rows(rows)
    }

    fn ints(v: &[i64]) -> Vec<Exact> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&m(&[[3, 1], [2, 2]])).unwrap(), int(4));
        assert_eq!(det(&Matrix::<Exact>::identity(4).unwrap()).unwrap(), int(1));
        let singular: Matrix<Exact> = Matrix::from_i64_rows(&[[3, 1, 1], [2, 2, 2], [1, 1, 1]]);
        assert_eq!(det(&singular).unwrap(), int(0));
    }

    #[test]
    fn det_needs_row_swap() {
        let a: Matrix<Exact> = Matrix::from_i64_rows(&[[0, 1, 2], [1, 0, 3], [4, -3, 8]]);
        // 0*(0+9) - 1*(8-12) + 2*(-3-0) = -2
        assert_eq!(det(&a).unwrap(), int(-2));
        assert_eq!(det_by_cofactors(&a).unwrap(), int(-2));
    }

    #[test]
    fn det_rejects_rectangular() {
        let a: Matrix<Exact> = Matrix::from_i64_rows(&[[1, 2, 3]]);
        assert!(det(&a).is_err());
        assert!(adjugate(&a).is_err());
        assert!(z_vector(&a).is_err());
    }

    #[test]
    fn float_det_matches() {
        let a: Matrix<f64> = Matrix::from_i64_rows(&[[3, 1], [2, 2]]);
        assert!((det(&a).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(adjugate(&m(&[[1, 2], [3, 4]])).unwrap(), m(&[[4, -2], [-3, 1]]));
        let id = Matrix::<Exact>::identity(3).unwrap();
        assert_eq!(adjugate(&id).unwrap(), id);
        assert_eq!(adjugate(&m(&[[1, 1], [1, 1]])).unwrap(), m(&[[1, -1], [-1, 1]]));
        let one: Matrix<Exact> = Matrix::from_i64_rows(&[[7]]);
        assert_eq!(adjugate(&one).unwrap(), Matrix::from_i64_rows(&[[1]]));
    }

    #[test]
    fn z_vector_examples() {
        assert_eq!(z_vector(&m(&[[1, 2], [3, 4]])).unwrap().values(), ints(&[-12, 8]).as_slice());
        let zero = z_vector(&m(&[[1, 1], [1, 1]])).unwrap();
        assert!(zero.is_zero());
        assert_eq!(z_vector(&m(&[[2, 1], [1, 1]])).unwrap().values(), ints(&[2, -3]).as_slice());
    }

    #[test]
    fn z_vector_at_verifies() {
        let a: Matrix<Exact> = Matrix::from_i64_rows(&[[1, 2, 0], [3, 4, 1], [0, 1, 1]]);
        let sel = IndexPair::new(vec![1, 2], vec![1, 2]).unwrap();
        let z = z_vector_at(&a, &sel).unwrap();
        assert_eq!(z.values(), ints(&[-12, 8]).as_slice());
        assert!(z.verify(&a).unwrap());
    }

    #[test]
    fn cofactor_sum_identity_small() {
        let b = m(&[[1, 2], [3, 4]]);
        assert_eq!(z_vector_by_cofactor_sums(&b).unwrap(), z_vector(&b).unwrap().into_values());
    }

    #[test]
    fn minor_counts() {
        let a: Matrix<Exact> = Matrix::from_i64_rows(&[[1, 2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12]]);
        assert_eq!(all_minors(&a, 2).unwrap().len(), 18);
        let b = m(&[[1, 2], [3, 4]]);
        let minors = all_minors(&b, 2).unwrap();
        assert_eq!(minors.len(), 1);
        assert_eq!(minors[0].1, int(-2));
        assert!(all_minors(&b, 3).is_err());
    }

    #[test]
    fn zero_pattern_minors_of_order_three() {
        let a: Matrix<Exact> = Matrix::from_i64_rows(&[[3, 1, 0, 1], [2, 2, 0, 2], [1, 1, 0, 1]]);
        for (id, value) in all_minors(&a, 3).unwrap() {
            assert!(value >= int(0), "{id:?} -> {value}");
            if id.cols().contains(&3) {
                assert_eq!(value, int(0));
            }
        }
    }
}
