//! Sign non-reversal tests at single vectors, sampled falsification, and
//! the variation-diminishing property check.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    all_selections, contiguous_windows, count_sign_changes, first_nonzero_sign, last_nonzero_sign, validate_order,
    IndexPair, Matrix,
};
use crate::scalar::{rat, Scalar, Sign};

use super::certificate::{sign_products, Certificate, Location, Property, Stats, Verdict};

/// Outcome of a sign non-reversal test at one vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrOutcome<T> {
    pub holds: bool,
    /// Least 1-based coordinate satisfying the condition.
    pub index: Option<usize>,
    pub products: Vec<T>,
}

fn snr_products<T: Scalar>(b: &Matrix<T>, x: &[T]) -> Result<Vec<T>> {
    if !b.is_square() {
        return Err(Error::ShapeMismatch(format!("expected a square matrix, got {}x{}", b.rows(), b.cols())));
    }
    if x.len() != b.rows() {
        return Err(Error::ShapeMismatch(format!("vector length {} vs size {}", x.len(), b.rows())));
    }
    if x.iter().all(Scalar::is_zero_scalar) {
        return Err(Error::InvalidArgument("sign non-reversal is tested at nonzero vectors".into()));
    }
    sign_products(b, x)
}

/// Some `i` with `x_i (Bx)_i > 0`.
pub fn snr_strict_at<T: Scalar>(b: &Matrix<T>, x: &[T]) -> Result<SnrOutcome<T>> {
    let products = snr_products(b, x)?;
    let index = products.iter().position(|p| p.sign().is_positive()).map(|i| i + 1);
    Ok(SnrOutcome { holds: index.is_some(), index, products })
}

/// Some `i` with `x_i != 0` and `x_i (Bx)_i >= 0`.
pub fn snr_nonstrict_at<T: Scalar>(b: &Matrix<T>, x: &[T]) -> Result<SnrOutcome<T>> {
    let products = snr_products(b, x)?;
    let index =
        products.iter().zip(x).position(|(p, xi)| !xi.is_zero_scalar() && !p.sign().is_negative()).map(|i| i + 1);
    Ok(SnrOutcome { holds: index.is_some(), index, products })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrMode {
    Strict,
    NonStrict,
}

impl std::str::FromStr for SnrMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(SnrMode::Strict),
            "nonstrict" | "non-strict" => Ok(SnrMode::NonStrict),
            other => Err(Error::InvalidArgument(format!("unknown sign non-reversal mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingOptions {
    pub samples: usize,
    pub seed: u64,
    /// Upper bound on submatrices visited in non-strict mode.
    pub submatrix_cap: usize,
}

impl SamplingOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, submatrix_cap: 100_000 }
    }
}

/// Grid resolution for magnitudes drawn from `[1, 2]`.
const MAGNITUDE_GRID: i64 = 1024;

/// Random alternating vector: magnitudes uniform on a rational grid over
/// `[1, 2]`, random leading sign.
pub fn random_alternating<T: Scalar, R: Rng>(rng: &mut R, len: usize) -> Vec<T> {
    let leading_positive = rng.gen_bool(0.5);
    (0..len)
        .map(|i| {
            let mag = T::from_rational(&(rat(1, 1) + rat(rng.gen_range(0..=MAGNITUDE_GRID), MAGNITUDE_GRID)));
            if (i % 2 == 0) == leading_positive {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Random nonzero vector with entries on a rational grid over `[-2, 2]`.
pub fn random_nonzero<T: Scalar, R: Rng>(rng: &mut R, len: usize) -> Vec<T> {
    loop {
        let v: Vec<i64> = (0..len).map(|_| rng.gen_range(-2 * MAGNITUDE_GRID..=2 * MAGNITUDE_GRID)).collect();
        if v.iter().any(|&e| e != 0) {
            return v.into_iter().map(|e| T::from_rational(&rat(e, MAGNITUDE_GRID))).collect();
        }
    }
}

/// Random vector with entries on `{-3, ..., 3}`, zeros included.
pub fn random_small_vector<T: Scalar, R: Rng>(rng: &mut R, len: usize) -> Vec<T> {
    (0..len).map(|_| T::from_i64(rng.gen_range(-3..=3))).collect()
}

/// Tries random alternating vectors against every contiguous window of size
/// `<= k` (strict) or every submatrix of size `<= k` up to a cap
/// (non-strict). A returned witness disproves TP_k / TN_k; a pass is only
/// "no counterexample found".
pub fn sampled_snr_falsify<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    mode: SnrMode,
    options: SamplingOptions,
) -> Result<Verdict<T>> {
    validate_order(a.rows(), a.cols(), k)?;
    if options.samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut stats = Stats::default();
    let property = match mode {
        SnrMode::Strict => Property::TotallyPositive { k },
        SnrMode::NonStrict => Property::TotallyNonNegative { k },
    };

    let locations: Vec<(Location, IndexPair)> = match mode {
        SnrMode::Strict => (1..=k)
            .map(|r| contiguous_windows(a.rows(), a.cols(), r))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .map(|w| (Location::Window(w), w.to_index_pair()))
            .collect(),
        SnrMode::NonStrict => {
            let mut out = Vec::new();
            'sizes: for r in 1..=k {
                for sel in all_selections(a.rows(), a.cols(), r)? {
                    if out.len() >= options.submatrix_cap {
                        break 'sizes;
                    }
                    out.push((Location::Minor(sel.clone()), sel));
                }
            }
            out
        }
    };

    for (location, sel) in locations {
        let b = a.submatrix(&sel)?;
        stats.submatrices += 1;
        for _ in 0..options.samples {
            let x: Vec<T> = random_alternating(&mut rng, sel.size());
            stats.samples += 1;
            let outcome = match mode {
                SnrMode::Strict => snr_strict_at(&b, &x)?,
                SnrMode::NonStrict => snr_nonstrict_at(&b, &x)?,
            };
            if outcome.holds {
                continue;
            }
            let products = outcome.products;
            let cert = if products.iter().all(|p| p.sign().is_negative()) {
                Certificate::SignReversalWitness { location, x, products }
            } else {
                Certificate::WeakReversalWitness { location, x, products }
            };
            stats.elapsed = started.elapsed();
            return Ok(Verdict::sampled(property, cert, stats));
        }
    }
    stats.elapsed = started.elapsed();
    Ok(Verdict::sampled(property, Certificate::Pass, stats))
}

/// Result of checking `S^-(Ax) <= S^-(x)` and the boundary-sign condition.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationOutcome<T> {
    pub holds: bool,
    pub changes_x: usize,
    pub changes_ax: usize,
    /// In the equality case with `Ax != 0`: whether the first and last
    /// nonzero signs of `Ax` agree with those of `x`.
    pub boundary_signs_agree: Option<bool>,
    pub image: Vec<T>,
}

/// Evaluates the variation-diminishing inequality at one vector.
pub fn variation_check<T: Scalar>(a: &Matrix<T>, x: &[T]) -> Result<VariationOutcome<T>> {
    let image = a.mul_vec(x)?;
    let changes_x = count_sign_changes(x);
    let changes_ax = count_sign_changes(&image);
    let image_nonzero = image.iter().any(|v| !v.is_zero_scalar());
    let boundary_signs_agree = (changes_x == changes_ax && image_nonzero).then(|| {
        let agree = |f: fn(&[T]) -> Option<Sign>| f(&image) == f(x);
        agree(first_nonzero_sign) && agree(last_nonzero_sign)
    });
    let holds = changes_ax <= changes_x && boundary_signs_agree.unwrap_or(true);
    Ok(VariationOutcome { holds, changes_x, changes_ax, boundary_signs_agree, image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Exact};

    fn ints(v: &[i64]) -> Vec<Exact> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn m2(rows: &[[i64; 2]]) -> Matrix<Exact> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn strict_examples() {
        let id = Matrix::<Exact>::identity(3).unwrap();
        let out = snr_strict_at(&id, &ints(&[0, -2, 1])).unwrap();
        assert_eq!((out.holds, out.index), (true, Some(2)));

        let out = snr_strict_at(&m2(&[[1, 2], [3, 4]]), &ints(&[-12, 8])).unwrap();
        assert!(!out.holds);
        assert_eq!(out.products, ints(&[-48, -32]));

        let out = snr_strict_at(&m2(&[[2, 1], [1, 1]]), &ints(&[2, -3])).unwrap();
        assert_eq!((out.holds, out.index), (true, Some(1)));
        assert_eq!(out.products[0], int(2));
    }

    #[test]
    fn nonstrict_examples() {
        let out = snr_nonstrict_at(&m2(&[[1, 1], [1, 1]]), &ints(&[1, -1])).unwrap();
        assert!(out.holds);
        assert_eq!(out.products, ints(&[0, 0]));
        assert!(!snr_nonstrict_at(&m2(&[[1, 2], [3, 4]]), &ints(&[-12, 8])).unwrap().holds);
        let five: Matrix<Exact> = Matrix::from_i64_rows(&[[5]]);
        let out = snr_nonstrict_at(&five, &ints(&[-1])).unwrap();
        assert!(out.holds);
        assert_eq!(out.products, ints(&[5]));
    }

    #[test]
    fn nonstrict_ignores_zero_coordinates() {
        // x_2 = 0 gives product 0 there, but it does not count.
        let b = m2(&[[1, 0], [0, 1]]).scale(&int(-1));
        assert!(!snr_nonstrict_at(&b, &ints(&[1, 0])).unwrap().holds);
    }

    #[test]
    fn zero_vector_rejected() {
        let id = Matrix::<Exact>::identity(2).unwrap();
        assert!(snr_strict_at(&id, &ints(&[0, 0])).is_err());
        assert!(snr_nonstrict_at(&id, &ints(&[0, 0])).is_err());
        assert!(snr_strict_at(&id, &ints(&[1])).is_err());
    }

    #[test]
    fn sampled_passes_on_tp_matrix() {
        let v: Matrix<Exact> = Matrix::from_i64_rows(&[[1, 1, 1], [1, 2, 4], [1, 3, 9]]);
        let verdict = sampled_snr_falsify(&v, 3, SnrMode::Strict, SamplingOptions::new(1000, 7)).unwrap();
        assert!(verdict.holds);
        assert!(!verdict.conclusive);
        assert_eq!(verdict.stats.samples, 1000 * (9 + 4 + 1));
    }

    #[test]
    fn sampled_zero_matrix_nonstrict_passes() {
        let z = Matrix::<Exact>::zeros(3, 3).unwrap();
        let verdict = sampled_snr_falsify(&z, 3, SnrMode::NonStrict, SamplingOptions::new(50, 1)).unwrap();
        assert!(verdict.holds);
    }

    #[test]
    fn sampled_finds_counterexample_and_it_validates() {
        let b = m2(&[[1, 2], [3, 4]]);
        let verdict = sampled_snr_falsify(&b, 2, SnrMode::Strict, SamplingOptions::new(5000, 3)).unwrap();
        if !verdict.holds {
            assert!(verdict.conclusive);
            verdict.validate(&b).unwrap();
        }
        let neg = m2(&[[-1, 2], [3, 4]]);
        let verdict = sampled_snr_falsify(&neg, 2, SnrMode::NonStrict, SamplingOptions::new(10, 3)).unwrap();
        assert!(!verdict.holds);
        verdict.validate(&neg).unwrap();
    }

    #[test]
    fn sampling_is_deterministic() {
        let b = m2(&[[1, 2], [3, 4]]);
        let opts = SamplingOptions::new(500, 11);
        let v1 = sampled_snr_falsify(&b, 2, SnrMode::Strict, opts).unwrap();
        let v2 = sampled_snr_falsify(&b, 2, SnrMode::Strict, opts).unwrap();
        assert_eq!(v1.certificate, v2.certificate);
        assert_eq!(v1.stats.samples, v2.stats.samples);
    }

    #[test]
    fn variation_examples() {
        let out = variation_check(&m2(&[[1, 1], [0, 1]]), &ints(&[1, -1])).unwrap();
        assert_eq!(out.image, ints(&[0, -1]));
        assert_eq!((out.changes_ax, out.changes_x), (0, 1));
        assert!(out.holds);

        let id = Matrix::<Exact>::identity(3).unwrap();
        let out = variation_check(&id, &ints(&[2, -1, 3])).unwrap();
        assert_eq!(out.boundary_signs_agree, Some(true));
        assert!(out.holds);

        let out = variation_check(&m2(&[[0, 1], [1, 0]]), &ints(&[1, -1])).unwrap();
        assert_eq!(out.image, ints(&[-1, 1]));
        assert_eq!(out.boundary_signs_agree, Some(false));
        assert!(!out.holds);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("strict".parse::<SnrMode>().unwrap(), SnrMode::Strict);
        assert_eq!("nonstrict".parse::<SnrMode>().unwrap(), SnrMode::NonStrict);
        assert!("loose".parse::<SnrMode>().is_err());
    }
}
