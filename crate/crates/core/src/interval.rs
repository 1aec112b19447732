//! Interval hulls of matrices and their finite TP_k / TN_k test sets.
//!
//! A hull `I(A, B)` is every matrix lying entrywise between `A` and `B`.
//! TP_k of the whole hull reduces to the two vertices `C^+`, `C^-`; TN_k
//! needs the full family `I_{z,z'}` of `2^(m+n-1)` vertices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{alternating_signs, check_sign_vector, validate_order, Matrix};
use crate::positivity::{tn_certificate_with, tp_certificate, EnumerationBudget, Verdict};
use crate::scalar::{rat, Scalar};

/// `I(A, B)` with its derived corner, midpoint and radius matrices.
#[derive(Clone, PartialEq)]
pub struct IntervalHull<T> {
    a: Matrix<T>,
    b: Matrix<T>,
    lower: Matrix<T>,
    upper: Matrix<T>,
    center: Matrix<T>,
    radius: Matrix<T>,
}

impl<T: std::fmt::Display> std::fmt::Debug for IntervalHull<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntervalHull").field("a", &self.a).field("b", &self.b).finish_non_exhaustive()
    }
}

fn min_max<T: Scalar>(x: &T, y: &T) -> (T, T) {
    if x.compare(y).is_positive() {
        (y.clone(), x.clone())
    } else {
        (x.clone(), y.clone())
    }
}

impl<T: Scalar> IntervalHull<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>) -> Result<Self> {
        a.require_same_shape(&b)?;
        let lower = a.zip_with(&b, |x, y| min_max(x, y).0)?;
        let upper = a.zip_with(&b, |x, y| min_max(x, y).1)?;
        let two = T::from_i64(2);
        let center = a.add(&b)?.map(|v| v.clone() / two.clone());
        let radius = a.sub(&b)?.abs().map(|v| v.clone() / two.clone());
        Ok(Self { a, b, lower, upper, center, radius })
    }

    /// Hull containing exactly one matrix.
    pub fn singleton(a: Matrix<T>) -> Self {
        Self::new(a.clone(), a).expect("same shape")
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    /// Entrywise minimum `I_l`.
    pub fn lower(&self) -> &Matrix<T> {
        &self.lower
    }

    /// Entrywise maximum `I_u`.
    pub fn upper(&self) -> &Matrix<T> {
        &self.upper
    }

    /// `(A + B) / 2`.
    pub fn center(&self) -> &Matrix<T> {
        &self.center
    }

    /// `|A - B| / 2`.
    pub fn radius(&self) -> &Matrix<T> {
        &self.radius
    }

    pub fn shape(&self) -> (usize, usize) {
        self.a.shape()
    }

    /// `I_{z,z'} = center - D_z radius D_{z'}`.
    pub fn vertex(&self, z: &[i8], z_prime: &[i8]) -> Result<Matrix<T>> {
        let (m, n) = self.shape();
        check_sign_vector(z)?;
        check_sign_vector(z_prime)?;
        if z.len() != m || z_prime.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "sign vectors of length {}/{} for a {m}x{n} hull",
                z.len(),
                z_prime.len()
            )));
        }
        Matrix::from_fn(m, n, |i, j| {
            let r = self.radius[(i, j)].clone();
            let c = self.center[(i, j)].clone();
            if z[i] * z_prime[j] > 0 {
                c - r
            } else {
                c + r
            }
        })
    }

    /// `(C^+, C^-) = (I_{d_m, d_n}, I_{d_m, -d_n})`.
    pub fn c_pm(&self) -> (Matrix<T>, Matrix<T>) {
        let (m, n) = self.shape();
        let dm = alternating_signs(m, true);
        let plus = self.vertex(&dm, &alternating_signs(n, true)).expect("valid signs");
        let minus = self.vertex(&dm, &alternating_signs(n, false)).expect("valid signs");
        (plus, minus)
    }

    /// `I_l <= C <= I_u` entrywise.
    pub fn contains(&self, c: &Matrix<T>) -> Result<bool> {
        Ok(self.lower.entrywise_le(c)? && c.entrywise_le(&self.upper)?)
    }

    /// Membership via the checkerboard order: `C` lies between the two
    /// vertices `C^+ <=* C <=* C^-`. (`C^+` takes the lower corner at
    /// positions with `i + j` even, so it is the checkerboard minimum.)
    pub fn contains_checkerboard(&self, c: &Matrix<T>) -> Result<bool> {
        self.a.require_same_shape(c)?;
        let (plus, minus) = self.c_pm();
        let (m, n) = self.shape();
        Ok((0..m).all(|i| {
            (0..n).all(|j| {
                let above = minus[(i, j)].clone() - c[(i, j)].clone();
                let below = c[(i, j)].clone() - plus[(i, j)].clone();
                let (above, below) = if (i + j) % 2 == 0 { (above, below) } else { (-above, -below) };
                !above.sign().is_negative() && !below.sign().is_negative()
            })
        }))
    }
}

/// `I_{z,z'}(A, B)`.
pub fn i_zz<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, z: &[i8], z_prime: &[i8]) -> Result<Matrix<T>> {
    IntervalHull::new(a.clone(), b.clone())?.vertex(z, z_prime)
}

/// `(C^+(A, B), C^-(A, B))`.
pub fn c_pm<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    Ok(IntervalHull::new(a.clone(), b.clone())?.c_pm())
}

pub fn hull_contains<T: Scalar>(h: &IntervalHull<T>, c: &Matrix<T>) -> Result<bool> {
    h.contains(c)
}

/// Which test matrix of a hull a verdict refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestMatrix {
    CPlus,
    CMinus,
    Vertex { z: Vec<i8>, z_prime: Vec<i8> },
}

#[derive(Clone, PartialEq)]
pub struct HullVerdict<T> {
    pub holds: bool,
    /// The failing test matrix, if any.
    pub failing: Option<(TestMatrix, Matrix<T>)>,
    /// Whether the failing test matrix was checked to be a hull member.
    pub failing_is_member: Option<bool>,
    /// Verdict of the positivity check on the failing (or last) test matrix.
    pub inner: Verdict<T>,
    pub matrices_checked: u64,
}

impl<T: Scalar> std::fmt::Debug for HullVerdict<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HullVerdict")
            .field("holds", &self.holds)
            .field("failing", &self.failing)
            .field("failing_is_member", &self.failing_is_member)
            .field("inner", &self.inner)
            .field("matrices_checked", &self.matrices_checked)
            .finish()
    }
}

/// Whole hull TP_k iff both `C^+` and `C^-` are TP_k.
pub fn hull_is_tp_k<T: Scalar>(h: &IntervalHull<T>, k: usize) -> Result<HullVerdict<T>> {
    let (m, n) = h.shape();
    validate_order(m, n, k)?;
    let (plus, minus) = h.c_pm();
    let mut checked = 0;
    let mut last = None;
    for (id, c) in [(TestMatrix::CPlus, plus), (TestMatrix::CMinus, minus)] {
        let verdict = tp_certificate(&c, k)?;
        checked += 1;
        if !verdict.holds {
            let member = h.contains(&c)?;
            return Ok(HullVerdict {
                holds: false,
                failing: Some((id, c)),
                failing_is_member: Some(member),
                inner: verdict,
                matrices_checked: checked,
            });
        }
        last = Some(verdict);
    }
    Ok(HullVerdict {
        holds: true,
        failing: None,
        failing_is_member: None,
        inner: last.expect("two test matrices"),
        matrices_checked: checked,
    })
}

/// Default upper bound on the number of `I_{z,z'}` matrices examined.
pub const DEFAULT_FAMILY_BUDGET: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HullBudget {
    pub max_family: Option<u128>,
    pub submatrices: EnumerationBudget,
}

impl Default for HullBudget {
    fn default() -> Self {
        Self { max_family: Some(DEFAULT_FAMILY_BUDGET), submatrices: EnumerationBudget::default() }
    }
}

/// Sign vector number `counter` in binary order, `+1` before `-1`, the most
/// significant bit first.
fn signs_from_counter(counter: u128, len: usize) -> Vec<i8> {
    (0..len).map(|j| if counter >> (len - 1 - j) & 1 == 1 { -1 } else { 1 }).collect()
}

/// The deduplicated family `{I_{z,z'} : z_1 = +1}` in enumeration order:
/// `z` outer, `z'` inner, both in binary-counter order.
pub fn vertex_family(m: usize, n: usize) -> impl Iterator<Item = (Vec<i8>, Vec<i8>)> {
    (0..1u128 << (m - 1)).flat_map(move |zc| {
        let mut z = vec![1i8];
        z.extend(signs_from_counter(zc, m - 1));
        (0..1u128 << n).map(move |zpc| (z.clone(), signs_from_counter(zpc, n)))
    })
}

pub fn hull_is_tn_k<T: Scalar>(h: &IntervalHull<T>, k: usize) -> Result<HullVerdict<T>> {
    hull_is_tn_k_with(h, k, HullBudget::default())
}

/// Whole hull TN_k iff every `I_{z,z'}` is TN_k.
pub fn hull_is_tn_k_with<T: Scalar>(h: &IntervalHull<T>, k: usize, budget: HullBudget) -> Result<HullVerdict<T>> {
    let (m, n) = h.shape();
    validate_order(m, n, k)?;
    let exponent = m + n - 1;
    if let Some(cap) = budget.max_family {
        if exponent >= 127 || (1u128 << exponent) > cap {
            return Err(Error::BudgetExceeded(format!("2^{exponent} test matrices exceed the budget of {cap}")));
        }
    }
    let mut checked = 0;
    let mut last = None;
    for (z, z_prime) in vertex_family(m, n) {
        let c = h.vertex(&z, &z_prime)?;
        let verdict = tn_certificate_with(&c, k, budget.submatrices)?;
        checked += 1;
        if !verdict.holds {
            let member = h.contains(&c)?;
            return Ok(HullVerdict {
                holds: false,
                failing: Some((TestMatrix::Vertex { z, z_prime }, c)),
                failing_is_member: Some(member),
                inner: verdict,
                matrices_checked: checked,
            });
        }
        last = Some(verdict);
    }
    Ok(HullVerdict {
        holds: true,
        failing: None,
        failing_is_member: None,
        inner: last.expect("family is non-empty"),
        matrices_checked: checked,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RohnOutcome<T> {
    pub holds: bool,
    /// `x_i (Cx)_i - x_i (I_{z,z} x)_i`.
    pub margins: Vec<T>,
    /// `z_i = +1` where `x_i >= 0`, else `-1`.
    pub z: Vec<i8>,
}

/// Checks `x_i (Cx)_i >= x_i (I_{z,z} x)_i` for a member `C` of a square hull.
pub fn rohn_bound_check<T: Scalar>(h: &IntervalHull<T>, c: &Matrix<T>, x: &[T]) -> Result<RohnOutcome<T>> {
    let (m, n) = h.shape();
    if m != n {
        return Err(Error::ShapeMismatch(format!("bound check needs a square hull, got {m}x{n}")));
    }
    if !h.contains(c)? {
        return Err(Error::InvalidArgument("matrix is not a member of the hull".into()));
    }
    if x.len() != n {
        return Err(Error::ShapeMismatch(format!("vector of length {} for size {n}", x.len())));
    }
    if x.iter().all(Scalar::is_zero_scalar) {
        return Err(Error::InvalidArgument("bound check needs a nonzero vector".into()));
    }
    let z: Vec<i8> = x.iter().map(|v| if v.sign().is_negative() { -1 } else { 1 }).collect();
    let vertex = h.vertex(&z, &z)?;
    let cx = c.mul_vec(x)?;
    let vx = vertex.mul_vec(x)?;
    let margins: Vec<T> =
        x.iter().zip(cx.into_iter().zip(vx)).map(|(xi, (ci, vi))| xi.clone() * ci - xi.clone() * vi).collect();
    let holds = margins.iter().all(|v| !v.sign().is_negative());
    Ok(RohnOutcome { holds, margins, z })
}

/// Grid used for hull sampling parameters `t_ij`.
pub const SAMPLE_GRID: i64 = 64;

/// Random member `t_ij a_ij + (1 - t_ij) b_ij` with `t_ij` on a `1/64` grid.
pub fn sample_hull_with<T: Scalar, R: Rng>(h: &IntervalHull<T>, rng: &mut R) -> Matrix<T> {
    let (m, n) = h.shape();
    Matrix::from_fn(m, n, |i, j| {
        let t = T::from_rational(&rat(rng.gen_range(0..=SAMPLE_GRID), SAMPLE_GRID));
        t.clone() * h.a[(i, j)].clone() + (T::one() - t) * h.b[(i, j)].clone()
    })
    .expect("non-empty hull")
}

pub fn sample_hull<T: Scalar>(h: &IntervalHull<T>, seed: u64) -> Matrix<T> {
    sample_hull_with(h, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Whether entrywise and checkerboard membership agree at `c`.
pub fn checkerboard_equiv_at<T: Scalar>(h: &IntervalHull<T>, c: &Matrix<T>) -> Result<bool> {
    Ok(h.contains(c)? == h.contains_checkerboard(c)?)
}

/// Compares entrywise and checkerboard membership on `samples` random
/// matrices drawn from the hull stretched to twice its width, so both
/// members and non-members are exercised.
pub fn checkerboard_equiv<T: Scalar>(h: &IntervalHull<T>, samples: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = h.shape();
    for _ in 0..samples {
        let c = Matrix::from_fn(m, n, |i, j| {
            let t = T::from_rational(&rat(rng.gen_range(-SAMPLE_GRID / 2..=SAMPLE_GRID * 3 / 2), SAMPLE_GRID));
            t.clone() * h.a[(i, j)].clone() + (T::one() - t) * h.b[(i, j)].clone()
        })?;
        if !checkerboard_equiv_at(h, &c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IndexPair;
    use crate::positivity::{is_tn_k_bruteforce, Certificate};
    use crate::scalar::{int, Exact};

    fn hull_a() -> Matrix<Exact> {
        Matrix::from_i64_rows(&[[3, 1, 0, 1], [2, 2, 0, 2], [1, 1, 0, 1]])
    }

    fn hull_b() -> Matrix<Exact> {
        Matrix::from_i64_rows(&[[4, 2, 0, 2], [3, 2, 0, 2], [1, 1, 0, 1]])
    }

    fn zeros3x4() -> Matrix<Exact> {
        Matrix::from_i64_rows(&[[3, 2, 0, 1], [3, 2, 0, 2], [1, 1, 0, 1]])
    }

    fn one(v: i64) -> Matrix<Exact> {
        Matrix::from_i64_rows(&[[v]])
    }

    #[test]
    fn vertex_examples() {
        let a = hull_a();
        assert_eq!(i_zz(&a, &a, &[1, -1, 1], &[-1, -1, 1, 1]).unwrap(), a);
        let c_plus = i_zz(&hull_a(), &hull_b(), &[1, -1, 1], &[1, -1, 1, -1]).unwrap();
        assert_eq!(c_plus, Matrix::from_i64_rows(&[[3, 2, 0, 2], [3, 2, 0, 2], [1, 1, 0, 1]]));
        assert_eq!(i_zz(&one(2), &one(4), &[1], &[1]).unwrap(), one(2));
    }

    #[test]
    fn vertex_rejects_bad_signs() {
        let a = hull_a();
        assert!(i_zz(&a, &a, &[1, 0, 1], &[1, 1, 1, 1]).is_err());
        assert!(i_zz(&a, &a, &[1, 1], &[1, 1, 1, 1]).is_err());
        assert!(i_zz(&a, &Matrix::identity(3).unwrap(), &[1, 1, 1], &[1, 1, 1]).is_err());
    }

    #[test]
    fn c_pm_examples() {
        let a = hull_a();
        assert_eq!(c_pm(&a, &a).unwrap(), (a.clone(), a));
        assert_eq!(c_pm(&one(2), &one(4)).unwrap(), (one(2), one(4)));
        let (plus, minus) = c_pm(&hull_a(), &hull_b()).unwrap();
        assert!(is_tn_k_bruteforce(&plus, 3).unwrap().holds);
        assert!(is_tn_k_bruteforce(&minus, 3).unwrap().holds);
    }

    #[test]
    fn containment() {
        let h = IntervalHull::new(hull_a(), hull_b()).unwrap();
        assert!(h.contains(&hull_a()).unwrap());
        assert!(h.contains(&hull_b()).unwrap());
        assert!(h.contains(&zeros3x4()).unwrap());
        let mut rows = hull_b().to_rows();
        rows[0][0] = int(5);
        assert!(!h.contains(&Matrix::from_rows(rows).unwrap()).unwrap());
        assert!(h.contains(&Matrix::identity(3).unwrap()).is_err());
    }

    #[test]
    fn derived_matrices() {
        let h = IntervalHull::new(hull_b(), hull_a()).unwrap();
        assert_eq!(h.lower(), &hull_a());
        assert_eq!(h.upper(), &hull_b());
        assert_eq!(h.upper().sub(h.center()).unwrap(), *h.radius());
        assert_eq!(h.center().sub(h.lower()).unwrap(), *h.radius());
    }

    #[test]
    fn example_hull_fails_tn3_through_a_vertex() {
        let h = IntervalHull::new(hull_a(), hull_b()).unwrap();
        let v = hull_is_tn_k(&h, 3).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_is_member, Some(true));
        let (TestMatrix::Vertex { z, .. }, c) = v.failing.as_ref().unwrap() else { panic!("vertex expected") };
        assert_eq!(z[0], 1);
        v.inner.validate(c).unwrap();
        assert!(!is_tn_k_bruteforce(c, 3).unwrap().holds);
    }

    #[test]
    fn singleton_hulls() {
        let v: Matrix<Exact> = Matrix::from_i64_rows(&[[1, 1, 1], [1, 2, 4], [1, 3, 9]]);
        let h = IntervalHull::singleton(v.clone());
        assert!(hull_is_tp_k(&h, 3).unwrap().holds);
        assert!(hull_is_tn_k(&h, 3).unwrap().holds);
        assert_eq!(sample_hull(&h, 4), v);
    }

    #[test]
    fn one_by_one_tn_family() {
        let h = IntervalHull::new(one(0), one(1)).unwrap();
        let v = hull_is_tn_k(&h, 1).unwrap();
        assert!(v.holds);
        assert_eq!(v.matrices_checked, 2);
        let all: Vec<_> = [1i8, -1].iter().flat_map(|&z| [1i8, -1].map(|zp| h.vertex(&[z], &[zp]).unwrap())).collect();
        assert!(all.iter().all(|c| c == &one(0) || c == &one(1)));
    }

    #[test]
    fn tp_hull_failure_carries_reversal() {
        let base: Matrix<Exact> = Matrix::from_i64_rows(&[[1, 2], [3, 4]]);
        let eps = crate::scalar::rat(1, 1000);
        let upper = base.map(|v| v.clone() + eps.clone());
        let h = IntervalHull::new(base, upper).unwrap();
        let v = hull_is_tp_k(&h, 2).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.inner.certificate, Certificate::SignReversalWitness { .. }));
        assert_eq!(v.failing_is_member, Some(true));
    }

    #[test]
    fn family_order_and_size() {
        let fam: Vec<_> = vertex_family(2, 2).collect();
        assert_eq!(fam.len(), 8);
        assert_eq!(fam[0], (vec![1, 1], vec![1, 1]));
        assert_eq!(fam[1], (vec![1, 1], vec![1, -1]));
        assert_eq!(fam[4], (vec![1, -1], vec![1, 1]));
        assert!(fam.iter().all(|(z, _)| z[0] == 1));
    }

    #[test]
    fn family_budget_enforced() {
        let h = IntervalHull::singleton(Matrix::<Exact>::identity(3).unwrap());
        let tight = HullBudget { max_family: Some(16), ..HullBudget::default() };
        assert!(matches!(hull_is_tn_k_with(&h, 2, tight), Err(Error::BudgetExceeded(_))));
        let off = HullBudget { max_family: None, ..HullBudget::default() };
        assert!(hull_is_tn_k_with(&h, 2, off).unwrap().holds);
    }

    #[test]
    fn rohn_examples() {
        let a: Matrix<Exact> = Matrix::from_i64_rows(&[[2, -1], [0, 3]]);
        let h = IntervalHull::singleton(a.clone());
        let out = rohn_bound_check(&h, &a, &[int(1), int(-2)]).unwrap();
        assert!(out.holds);
        assert!(out.margins.iter().all(|m| m == &int(0)));

        let h = IntervalHull::new(hull_a(), hull_b()).unwrap();
        assert!(rohn_bound_check(&h, &zeros3x4(), &[int(1), int(0), int(1)]).is_err());
        let sq = IntervalHull::new(Matrix::from_i64_rows(&[[0, 1], [-1, 2]]), Matrix::from_i64_rows(&[[1, 2], [1, 2]]))
            .unwrap();
        let member = Matrix::from_i64_rows(&[[1, 1], [0, 2]]);
        let out = rohn_bound_check(&sq, &member, &[int(0), int(-1)]).unwrap();
        assert_eq!(out.z, vec![1, -1]);
        assert!(out.holds);
        assert!(rohn_bound_check(&sq, &member, &[int(0), int(0)]).is_err());
        assert!(rohn_bound_check(&sq, &Matrix::from_i64_rows(&[[5, 1], [0, 2]]), &[int(1), int(1)]).is_err());
    }

    #[test]
    fn checkerboard_on_vertices() {
        let h =
            IntervalHull::new(Matrix::<Exact>::zeros(2, 2).unwrap(), Matrix::from_i64_rows(&[[1, 1], [1, 1]])).unwrap();
        for mask in 0..16u32 {
            let c = Matrix::from_fn(2, 2, |i, j| int(((mask >> (2 * i + j)) & 1) as i64)).unwrap();
            assert!(h.contains(&c).unwrap());
            assert!(checkerboard_equiv_at(&h, &c).unwrap());
        }
        assert!(checkerboard_equiv(&IntervalHull::new(hull_a(), hull_b()).unwrap(), 200, 9).unwrap());
        assert!(checkerboard_equiv(&IntervalHull::singleton(hull_a()), 20, 1).unwrap());
    }

    #[test]
    fn zero_pattern_negative_minor_location() {
        let c = zeros3x4();
        let v = is_tn_k_bruteforce(&c, 3).unwrap();
        assert_eq!(
            v.certificate,
            Certificate::FailingMinor { minor: IndexPair::new(vec![1, 2, 3], vec![1, 2, 4]).unwrap(), value: int(-1) }
        );
    }
}
