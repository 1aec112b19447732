//! Dense matrices and the index vocabulary shared by every checker.
//!
//! Storage is row-major and 0-based (`m[(i, j)]`), while [`Window`] and
//! [`IndexPair`] carry 1-based indices because they appear in certificates
//! and reports.

use std::fmt;
use std::ops::Index;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Sign};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!("matrix must be at least 1x1, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("row {} has {} entries, expected {n}", bad + 1, rows[bad].len())));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from small integers; panics on an empty or ragged
    /// input, so meant for fixtures and tests.
    pub fn from_i64_rows<const N: usize>(rows: &[[i64; N]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect())
            .expect("well-formed literal matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn min_dim(&self) -> usize {
        self.rows.min(self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        (i < self.rows && j < self.cols).then(|| &self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|a| a.clone() * factor.clone())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone()).expect("non-empty")
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, l| acc + self[(i, l)].clone() * other[(l, j)].clone())
        })
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    /// Entrywise `|A|`.
    pub fn abs(&self) -> Self {
        self.map(Scalar::abs_value)
    }

    /// Entrywise `self <= other` (sign-decided).
    pub fn entrywise_le(&self, other: &Self) -> Result<bool> {
        self.require_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).all(|(a, b)| !a.compare(b).is_positive()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|a| !a.sign().is_negative())
    }

    pub fn submatrix(&self, selection: &IndexPair) -> Result<Self> {
        selection.check_bounds(self.rows, self.cols)?;
        let rows = selection.rows();
        let cols = selection.cols();
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i] - 1, cols[j] - 1)].clone())
    }

    pub fn window(&self, w: &Window) -> Result<Self> {
        w.check_bounds(self.rows, self.cols)?;
        Matrix::from_fn(w.size, w.size, |i, j| self[(w.row_start - 1 + i, w.col_start - 1 + j)].clone())
    }

    /// Removes one row and one column (0-based); used for cofactors.
    pub fn without(&self, row: usize, col: usize) -> Option<Self> {
        if self.rows < 2 || self.cols < 2 {
            return None;
        }
        let data = (0..self.rows)
            .filter(|&i| i != row)
            .flat_map(|i| (0..self.cols).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self[(i, j)].clone())
            .collect();
        Some(Matrix { rows: self.rows - 1, cols: self.cols - 1, data })
    }

    /// Places `self` in the top-left corner of an `rows x cols` zero matrix.
    pub fn pad_to(&self, rows: usize, cols: usize) -> Result<Self> {
        self.embed(rows, cols, 0, 0)
    }

    /// Places `self` at 0-based offset `(row_off, col_off)` in a zero matrix.
    pub fn embed(&self, rows: usize, cols: usize, row_off: usize, col_off: usize) -> Result<Self> {
        if row_off + self.rows > rows || col_off + self.cols > cols {
            return Err(Error::InvalidDimension(format!(
                "cannot embed {}x{} at ({row_off},{col_off}) in {rows}x{cols}",
                self.rows, self.cols
            )));
        }
        Matrix::from_fn(rows, cols, |i, j| {
            if i >= row_off && j >= col_off && i - row_off < self.rows && j - col_off < self.cols {
                self[(i - row_off, j - col_off)].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn render_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(Scalar::render).collect()).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Contiguous `size x size` block at a 1-based offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Window {
    pub row_start: usize,
    pub col_start: usize,
    pub size: usize,
}

impl Window {
    pub fn new(row_start: usize, col_start: usize, size: usize) -> Self {
        Self { row_start, col_start, size }
    }

    pub fn check_bounds(&self, m: usize, n: usize) -> Result<()> {
        if self.size == 0 || self.row_start == 0 || self.col_start == 0 {
            return Err(Error::IndexOutOfRange(format!("window {self:?} is empty or not 1-based")));
        }
        if self.row_start + self.size - 1 > m || self.col_start + self.size - 1 > n {
            return Err(Error::IndexOutOfRange(format!("window {self:?} exceeds {m}x{n}")));
        }
        Ok(())
    }

    pub fn to_index_pair(&self) -> IndexPair {
        IndexPair {
            rows: (self.row_start..self.row_start + self.size).collect(),
            cols: (self.col_start..self.col_start + self.size).collect(),
        }
    }
}

/// Strictly increasing 1-based row and column index sets of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexPair {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl IndexPair {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::InvalidDimension(format!(
                "index sets must be non-empty and of equal size, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        for set in [&rows, &cols] {
            if set[0] == 0 || set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::IndexOutOfRange(format!(
                    "index set {set:?} must be 1-based and strictly increasing"
                )));
            }
        }
        Ok(Self { rows, cols })
    }

    /// Principal selection `{I} x {I}`.
    pub fn principal(indices: Vec<usize>) -> Result<Self> {
        Self::new(indices.clone(), indices)
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn check_bounds(&self, m: usize, n: usize) -> Result<()> {
        let row_ok = self.rows.last().is_some_and(|&r| r <= m);
        let col_ok = self.cols.last().is_some_and(|&c| c <= n);
        if !(row_ok && col_ok) {
            return Err(Error::IndexOutOfRange(format!("rows {:?} / cols {:?} exceed {m}x{n}", self.rows, self.cols)));
        }
        Ok(())
    }

    pub fn is_contiguous(&self) -> bool {
        let run = |s: &[usize]| s.windows(2).all(|w| w[1] == w[0] + 1);
        run(&self.rows) && run(&self.cols)
    }
}

impl From<Window> for IndexPair {
    fn from(w: Window) -> Self {
        w.to_index_pair()
    }
}

/// Identifies a minor by its row and column index sets.
pub type MinorId = IndexPair;

/// Nonzero entries with strictly alternating signs.
#[derive(Debug, Clone, PartialEq)]
pub struct AltVector<T> {
    entries: Vec<T>,
}

impl<T: Scalar> AltVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if !is_alternating(&entries) {
            return Err(Error::InvalidArgument(format!("vector {entries:?} is not nonzero with alternating signs")));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading_positive(&self) -> bool {
        self.entries[0].sign().is_positive()
    }
}

/// True for a non-empty vector with no zero entry and `x_i x_{i+1} < 0`.
pub fn is_alternating<T: Scalar>(x: &[T]) -> bool {
    !x.is_empty()
        && x.iter().all(|v| !v.sign().is_zero())
        && x.windows(2).all(|w| (w[0].sign() * w[1].sign()).is_negative())
}

/// `(+-1, -+1, ...)` of length `r`; with `leading_positive` this is `d_r`.
pub fn alt_vector<T: Scalar>(r: usize, leading_positive: bool) -> Result<AltVector<T>> {
    if r == 0 {
        return Err(Error::InvalidDimension("alternating vector needs length >= 1".into()));
    }
    let entries = (0..r).map(|i| if (i % 2 == 0) == leading_positive { T::one() } else { -T::one() }).collect();
    Ok(AltVector { entries })
}

/// `(1, -1, 1, ...)` as plain integers signs.
pub fn alternating_signs(len: usize, leading_positive: bool) -> Vec<i8> {
    (0..len).map(|i| if (i % 2 == 0) == leading_positive { 1 } else { -1 }).collect()
}

pub fn check_sign_vector(z: &[i8]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::InvalidDimension("sign vector must be non-empty".into()));
    }
    if let Some(bad) = z.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::InvalidArgument(format!("sign vector component {bad} is not +1 or -1")));
    }
    Ok(())
}

/// Diagonal matrix `D_z`.
pub fn sign_diag<T: Scalar>(z: &[i8]) -> Result<Matrix<T>> {
    check_sign_vector(z)?;
    Matrix::from_fn(z.len(), z.len(), |i, j| if i != j { T::zero() } else { T::from_i64(z[i] as i64) })
}

/// `S^-(x)`: sign changes after deleting zero entries.
pub fn count_sign_changes<T: Scalar>(x: &[T]) -> usize {
    x.iter().map(Scalar::sign).filter(|s| !s.is_zero()).tuple_windows().filter(|(a, b)| a != b).count()
}

pub fn first_nonzero_sign<T: Scalar>(x: &[T]) -> Option<Sign> {
    x.iter().map(Scalar::sign).find(|s| !s.is_zero())
}

pub fn last_nonzero_sign<T: Scalar>(x: &[T]) -> Option<Sign> {
    x.iter().rev().map(Scalar::sign).find(|s| !s.is_zero())
}

fn check_order(m: usize, n: usize, r: usize) -> Result<()> {
    let max = m.min(n);
    if r == 0 || r > max {
        return Err(Error::OrderOutOfRange { k: r, max });
    }
    Ok(())
}

/// All size-`r` windows of an `m x n` matrix, ordered by `(row_start, col_start)`.
pub fn contiguous_windows(m: usize, n: usize, r: usize) -> Result<Vec<Window>> {
    check_order(m, n, r)?;
    Ok((1..=m - r + 1).cartesian_product(1..=n - r + 1).map(|(i, j)| Window::new(i, j, r)).collect())
}

/// Strictly increasing 1-based `r`-subsets of `{1..n}` in lexicographic order.
pub fn index_subsets(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).combinations(r)
}

/// All `r x r` selections in lexicographic `(rows, cols)` order.
pub fn all_selections(m: usize, n: usize, r: usize) -> Result<impl Iterator<Item = IndexPair>> {
    check_order(m, n, r)?;
    Ok(index_subsets(m, r)
        .cartesian_product(index_subsets(n, r).collect::<Vec<_>>())
        .map(|(rows, cols)| IndexPair { rows, cols }))
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Number of `r x r` submatrices of an `m x n` matrix.
pub fn selection_count(m: usize, n: usize, r: usize) -> u128 {
    binomial(m, r) * binomial(n, r)
}

/// Number of size-`r` contiguous windows.
pub fn window_count(m: usize, n: usize, r: usize) -> u128 {
    if r == 0 || r > m.min(n) {
        return 0;
    }
    ((m - r + 1) * (n - r + 1)) as u128
}

pub(crate) fn validate_order(m: usize, n: usize, k: usize) -> Result<()> {
    check_order(m, n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Exact};

    fn ints(v: &[i64]) -> Vec<Exact> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn alt_vector_examples() {
        assert_eq!(alt_vector::<Exact>(3, true).unwrap().entries(), ints(&[1, -1, 1]).as_slice());
        assert_eq!(alt_vector::<Exact>(1, false).unwrap().entries(), ints(&[-1]).as_slice());
        assert_eq!(alt_vector::<Exact>(4, true).unwrap().entries(), ints(&[1, -1, 1, -1]).as_slice());
        assert!(matches!(alt_vector::<Exact>(0, true), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn alt_vector_rejects_non_alternating() {
        assert!(AltVector::new(ints(&[1, 1])).is_err());
        assert!(AltVector::new(ints(&[1, 0, 1])).is_err());
        assert!(AltVector::new(ints(&[2, -3, 5])).is_ok());
    }

    #[test]
    fn sign_diag_examples() {
        assert_eq!(sign_diag::<Exact>(&[1, -1]).unwrap(), Matrix::from_i64_rows(&[[1, 0], [0, -1]]));
        assert_eq!(sign_diag::<Exact>(&[1]).unwrap(), Matrix::from_i64_rows(&[[1]]));
        assert_eq!(sign_diag::<Exact>(&[-1, -1]).unwrap(), Matrix::from_i64_rows(&[[-1, 0], [0, -1]]));
        assert!(sign_diag::<Exact>(&[1, 0]).is_err());
        assert!(sign_diag::<Exact>(&[2]).is_err());
    }

    #[test]
    fn sign_change_examples() {
        assert_eq!(count_sign_changes(&ints(&[1, 0, -2, 3])), 2);
        assert_eq!(count_sign_changes(&ints(&[0, 0])), 0);
        assert_eq!(count_sign_changes(&ints(&[1, -1, 1, -1])), 3);
        assert_eq!(count_sign_changes::<Exact>(&[]), 0);
    }

    #[test]
    fn window_examples() {
        assert_eq!(contiguous_windows(3, 4, 3).unwrap().len(), 2);
        assert_eq!(contiguous_windows(2, 2, 2).unwrap(), vec![Window::new(1, 1, 2)]);
        // (10 - 5 + 1)^2 counted by hand.
        assert_eq!(contiguous_windows(10, 10, 5).unwrap().len(), 36);
        assert!(contiguous_windows(3, 4, 0).is_err());
        assert!(contiguous_windows(3, 4, 4).is_err());
        let ws = contiguous_windows(3, 3, 2).unwrap();
        assert_eq!(ws.first(), Some(&Window::new(1, 1, 2)));
        assert_eq!(ws.last(), Some(&Window::new(2, 2, 2)));
    }

    #[test]
    fn submatrix_examples() {
        let id = Matrix::<Exact>::identity(3).unwrap();
        let sel = IndexPair::new(vec![1, 2], vec![2, 3]).unwrap();
        assert_eq!(id.submatrix(&sel).unwrap(), Matrix::from_i64_rows(&[[0, 0], [1, 0]]));

        let a: Matrix<Exact> = Matrix::from_i64_rows(&[[3, 1, 0, 1], [2, 2, 0, 2], [1, 1, 0, 1]]);
        let full = Window::new(1, 1, 3);
        assert_eq!(a.window(&full).unwrap(), Matrix::from_i64_rows(&[[3, 1, 0], [2, 2, 0], [1, 1, 0]]));
        let sel = IndexPair::new(vec![1, 2, 3], vec![1, 2, 4]).unwrap();
        assert_eq!(a.submatrix(&sel).unwrap(), Matrix::from_i64_rows(&[[3, 1, 1], [2, 2, 2], [1, 1, 1]]));

        let sq: Matrix<Exact> = Matrix::from_i64_rows(&[[1, 2], [3, 4]]);
        assert_eq!(sq.window(&Window::new(1, 1, 2)).unwrap(), sq);
    }

    #[test]
    fn out_of_range_selections_rejected() {
        let a = Matrix::<Exact>::identity(3).unwrap();
        assert!(a.submatrix(&IndexPair::new(vec![1, 4], vec![1, 2]).unwrap()).is_err());
        assert!(a.window(&Window::new(2, 2, 3)).is_err());
        assert!(IndexPair::new(vec![2, 1], vec![1, 2]).is_err());
        assert!(IndexPair::new(vec![0, 1], vec![1, 2]).is_err());
        assert!(IndexPair::new(vec![1], vec![1, 2]).is_err());
    }

    #[test]
    fn selection_order_is_lexicographic() {
        let sels: Vec<_> = all_selections(3, 3, 2).unwrap().collect();
        assert_eq!(sels.len(), 9);
        assert_eq!(sels[0], IndexPair::new(vec![1, 2], vec![1, 2]).unwrap());
        assert_eq!(sels[1], IndexPair::new(vec![1, 2], vec![1, 3]).unwrap());
        assert_eq!(sels[3], IndexPair::new(vec![1, 3], vec![1, 2]).unwrap());
        assert!(sels.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(selection_count(3, 4, 2), 18);
    }

    #[test]
    fn matrix_construction_errors() {
        assert!(Matrix::<Exact>::new(0, 2, vec![]).is_err());
        assert!(Matrix::<Exact>::new(2, 2, ints(&[1, 2, 3])).is_err());
        assert!(Matrix::<Exact>::from_rows(vec![ints(&[1, 2]), ints(&[1])]).is_err());
    }
}
