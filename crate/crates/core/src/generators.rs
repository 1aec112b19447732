//! Deterministic matrix and hull constructions for test corpora.
//!
//! Generators make no positivity claims of their own: every matrix admitted
//! to a corpus is labelled by the brute-force oracle.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalHull;
use crate::matrix::Matrix;
use crate::positivity::{is_tn_k_bruteforce_with, is_tp_k_bruteforce, Certificate, EnumerationBudget};
use crate::scalar::Scalar;

fn require_increasing_positive<T: Scalar>(what: &str, nodes: &[T]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidDimension(format!("{what} must be non-empty")));
    }
    if nodes.iter().any(|v| !v.sign().is_positive()) {
        return Err(Error::InvalidArgument(format!("{what} must be positive")));
    }
    if nodes.windows(2).any(|w| !w[1].compare(&w[0]).is_positive()) {
        return Err(Error::InvalidArgument(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

/// `(nodes_i^(j-1))`, one row per node.
pub fn vandermonde<T: Scalar>(nodes: &[T], cols: usize) -> Result<Matrix<T>> {
    require_increasing_positive("Vandermonde nodes", nodes)?;
    Matrix::from_fn(nodes.len(), cols, |i, j| (0..j).fold(T::one(), |acc, _| acc * nodes[i].clone()))
}

/// `(1 / (x_i + y_j))`.
pub fn cauchy<T: Scalar>(x: &[T], y: &[T]) -> Result<Matrix<T>> {
    require_increasing_positive("Cauchy x", x)?;
    require_increasing_positive("Cauchy y", y)?;
    Matrix::from_fn(x.len(), y.len(), |i, j| T::one() / (x[i].clone() + y[j].clone()))
}

/// `I(base - eps J, base + eps J)`; `eps = 0` gives the singleton hull.
pub fn perturbed_hull<T: Scalar>(base: &Matrix<T>, eps: &T) -> Result<IntervalHull<T>> {
    if eps.sign().is_negative() {
        return Err(Error::InvalidArgument(format!("perturbation must be >= 0, got {eps}")));
    }
    let lower = base.map(|v| v.clone() - eps.clone());
    let upper = base.map(|v| v.clone() + eps.clone());
    IntervalHull::new(lower, upper)
}

/// `base` placed at a 0-based offset inside an `rows x cols` zero matrix.
pub fn zero_padded<T: Scalar>(
    base: &Matrix<T>,
    rows: usize,
    cols: usize,
    row_off: usize,
    col_off: usize,
) -> Result<Matrix<T>> {
    base.embed(rows, cols, row_off, col_off)
}

/// Integer entries drawn uniformly from `[-bound, bound]`.
pub fn random_signed<T: Scalar>(rows: usize, cols: usize, bound: i64, seed: u64) -> Result<Matrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_signed_with(rows, cols, -bound, bound, &mut rng)
}

/// Integer entries drawn uniformly from `[lo, hi]`.
pub fn random_signed_with<T: Scalar, R: Rng>(
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
    rng: &mut R,
) -> Result<Matrix<T>> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty entry range [{lo}, {hi}]")));
    }
    Matrix::from_fn(rows, cols, |_, _| T::from_i64(rng.gen_range(lo..=hi)))
}

/// Largest orders for which a matrix is TP_k / TN_k (0 when not even TP_1 /
/// TN_1), as found by brute force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub tp: usize,
    pub tn: usize,
}

impl Labels {
    pub fn is_tp(&self, k: usize) -> bool {
        k <= self.tp
    }

    pub fn is_tn(&self, k: usize) -> bool {
        k <= self.tn
    }
}

fn max_order<T: Scalar>(full: usize, cert: &Certificate<T>) -> usize {
    match cert {
        Certificate::Pass => full,
        Certificate::FailingMinor { minor, .. } => minor.size() - 1,
        other => unreachable!("brute force only emits minors, got {}", other.kind()),
    }
}

/// Brute-force classification of `a`.
pub fn classify<T: Scalar>(a: &Matrix<T>) -> Result<Labels> {
    let full = a.min_dim();
    let tp = is_tp_k_bruteforce(a, full)?;
    let tn = is_tn_k_bruteforce_with(a, full, EnumerationBudget::unlimited())?;
    Ok(Labels { tp: max_order(full, &tp.certificate), tn: max_order(full, &tn.certificate) })
}

#[derive(Clone, PartialEq)]
pub struct CorpusEntry<T> {
    pub matrix: Matrix<T>,
    pub labels: Labels,
}

impl<T: std::fmt::Display> std::fmt::Debug for CorpusEntry<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CorpusEntry").field("matrix", &self.matrix).field("labels", &self.labels).finish()
    }
}

impl<T: Scalar> CorpusEntry<T> {
    pub fn labelled(matrix: Matrix<T>) -> Result<Self> {
        let labels = classify(&matrix)?;
        Ok(Self { matrix, labels })
    }
}

/// Serializable description of a construction. Numbers are rational strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Vandermonde {
        nodes: Vec<String>,
        cols: usize,
    },
    Cauchy {
        x: Vec<String>,
        y: Vec<String>,
    },
    ZeroPaddedTn {
        base: Box<GeneratorSpec>,
        rows: usize,
        cols: usize,
        #[serde(default)]
        row_offset: usize,
        #[serde(default)]
        col_offset: usize,
    },
    PerturbedHull {
        base: Box<GeneratorSpec>,
        epsilon: String,
    },
    RandomSigned {
        rows: usize,
        cols: usize,
        #[serde(default = "default_bound")]
        bound: i64,
    },
}

fn default_bound() -> i64 {
    5
}

impl GeneratorSpec {
    pub fn is_randomized(&self) -> bool {
        match self {
            GeneratorSpec::RandomSigned { .. } => true,
            GeneratorSpec::ZeroPaddedTn { base, .. } | GeneratorSpec::PerturbedHull { base, .. } => {
                base.is_randomized()
            }
            _ => false,
        }
    }
}

#[derive(Clone, PartialEq)]
pub enum Generated<T> {
    Matrix(CorpusEntry<T>),
    Hull(IntervalHull<T>),
}

impl<T: std::fmt::Display> std::fmt::Debug for Generated<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generated::Matrix(e) => f.debug_tuple("Matrix").field(e).finish(),
            Generated::Hull(h) => f.debug_tuple("Hull").field(h).finish(),
        }
    }
}

fn parse_list<T: Scalar>(field: &str, items: &[String]) -> Result<Vec<T>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            crate::scalar::parse_rational(s)
                .map(|r: BigRational| T::from_rational(&r))
                .map_err(|message| Error::Parse { position: format!("{field}[{i}]"), message })
        })
        .collect()
}

fn build_matrix<T: Scalar>(spec: &GeneratorSpec, seed: Option<u64>) -> Result<Matrix<T>> {
    match spec {
        GeneratorSpec::Vandermonde { nodes, cols } => vandermonde(&parse_list::<T>("nodes", nodes)?, *cols),
        GeneratorSpec::Cauchy { x, y } => cauchy(&parse_list::<T>("x", x)?, &parse_list::<T>("y", y)?),
        GeneratorSpec::ZeroPaddedTn { base, rows, cols, row_offset, col_offset } => {
            zero_padded(&build_matrix(base, seed)?, *rows, *cols, *row_offset, *col_offset)
        }
        GeneratorSpec::RandomSigned { rows, cols, bound } => {
            let seed = seed.ok_or_else(|| Error::InvalidArgument("random-signed requires a seed".into()))?;
            random_signed(*rows, *cols, *bound, seed)
        }
        GeneratorSpec::PerturbedHull { .. } => {
            Err(Error::InvalidArgument("perturbed-hull produces a hull, not a matrix".into()))
        }
    }
}

/// Runs a generator spec. Randomized kinds need `seed`.
pub fn generate<T: Scalar>(spec: &GeneratorSpec, seed: Option<u64>) -> Result<Generated<T>> {
    match spec {
        GeneratorSpec::PerturbedHull { base, epsilon } => {
            let eps = parse_list::<T>("epsilon", std::slice::from_ref(epsilon))?.remove(0);
            if !eps.sign().is_positive() {
                return Err(Error::InvalidArgument(format!("epsilon must be > 0, got {eps}")));
            }
            let base = build_matrix::<T>(base, seed)?;
            if classify(&base)?.tp < base.min_dim() {
                return Err(Error::InvalidArgument("perturbed-hull base must be totally positive".into()));
            }
            Ok(Generated::Hull(perturbed_hull(&base, &eps)?))
        }
        other => Ok(Generated::Matrix(CorpusEntry::labelled(build_matrix(other, seed)?)?)),
    }
}
