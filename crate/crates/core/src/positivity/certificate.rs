//! Verdicts and independently re-checkable certificates.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::matrix::{is_alternating, AltVector, IndexPair, Matrix, MinorId, Window};
use crate::minors::det;
use crate::scalar::{Mode, Scalar, Sign};

/// Where a vector witness lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Window(Window),
    Minor(IndexPair),
    /// `size x size` Toeplitz block `(c_{l+i-j})` of a sequence.
    Toeplitz {
        l: i64,
        size: usize,
    },
}

impl Location {
    /// Extracts the square submatrix of `a` this location names.
    pub fn resolve<T: Scalar>(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        match self {
            Location::Window(w) => a.window(w),
            Location::Minor(sel) => a.submatrix(sel),
            Location::Toeplitz { .. } => Err(Error::InvalidCertificate(
                "Toeplitz locations are resolved against a sequence, not a matrix".into(),
            )),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Location::Window(w) => w.size,
            Location::Minor(sel) => sel.size(),
            Location::Toeplitz { size, .. } => *size,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate<T> {
    Pass,
    /// A minor whose sign violates the property.
    FailingMinor {
        minor: MinorId,
        value: T,
    },
    /// A Toeplitz minor `det(c_{m_i - n_j})` of a sequence.
    FailingToeplitzMinor {
        rows: Vec<i64>,
        cols: Vec<i64>,
        value: T,
    },
    /// `x_i (Bx)_i < 0` for every `i`: total strict sign reversal.
    SignReversalWitness {
        location: Location,
        x: Vec<T>,
        products: Vec<T>,
    },
    /// Alternating `x` with `x_i (Bx)_i <= 0` for all `i` (strict
    /// non-reversal fails but some product is zero). Refutes TP only.
    WeakReversalWitness {
        location: Location,
        x: Vec<T>,
        products: Vec<T>,
    },
    /// Alternating `x` with `Bx = 0`. Refutes TP only.
    KernelWitness {
        location: Location,
        x: AltVector<T>,
    },
}

impl<T> Certificate<T> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Certificate::Pass)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Pass => "Pass",
            Certificate::FailingMinor { .. } => "FailingMinor",
            Certificate::FailingToeplitzMinor { .. } => "FailingToeplitzMinor",
            Certificate::SignReversalWitness { .. } => "SignReversalWitness",
            Certificate::WeakReversalWitness { .. } => "WeakReversalWitness",
            Certificate::KernelWitness { .. } => "KernelWitness",
        }
    }
}

/// Which property a verdict decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    TotallyPositive {
        k: usize,
    },
    TotallyNonNegative {
        k: usize,
    },
    PMatrix,
    /// Polya frequency of order `k` (minors `>= 0`).
    PolyaFrequency {
        k: usize,
    },
    /// TP_k Polya frequency (minors `> 0`).
    TotallyPositivePolya {
        k: usize,
    },
}

impl Property {
    /// Whether the property requires strictly positive minors.
    pub fn strict(self) -> bool {
        matches!(self, Property::TotallyPositive { .. } | Property::PMatrix | Property::TotallyPositivePolya { .. })
    }

    pub fn order(self) -> Option<usize> {
        match self {
            Property::TotallyPositive { k }
            | Property::TotallyNonNegative { k }
            | Property::PolyaFrequency { k }
            | Property::TotallyPositivePolya { k } => Some(k),
            Property::PMatrix => None,
        }
    }

    pub fn name(self) -> String {
        match self {
            Property::TotallyPositive { k } => format!("TP_{k}"),
            Property::TotallyNonNegative { k } => format!("TN_{k}"),
            Property::PMatrix => "P-matrix".into(),
            Property::PolyaFrequency { k } => format!("PF_{k}"),
            Property::TotallyPositivePolya { k } => format!("TP_{k}-PF"),
        }
    }

    /// Whether a minor value violates the property.
    pub fn violated_by(self, sign: Sign) -> bool {
        if self.strict() {
            !sign.is_positive()
        } else {
            sign.is_negative()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub determinants: u64,
    pub submatrices: u64,
    /// Minors skipped because their data was undetermined.
    pub skipped: u64,
    /// Random test vectors tried.
    pub samples: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<T> {
    pub property: Property,
    pub holds: bool,
    pub certificate: Certificate<T>,
    pub stats: Stats,
    /// False when a pass only means "no counterexample found".
    pub conclusive: bool,
    pub mode: Mode,
}

impl<T: Scalar> Verdict<T> {
    pub(crate) fn new(property: Property, certificate: Certificate<T>, stats: Stats) -> Self {
        Self { property, holds: certificate.is_pass(), certificate, stats, conclusive: true, mode: T::MODE }
    }

    pub(crate) fn sampled(property: Property, certificate: Certificate<T>, stats: Stats) -> Self {
        let conclusive = !certificate.is_pass();
        Self { conclusive, ..Self::new(property, certificate, stats) }
    }

    /// Re-checks the certificate against the matrix it was issued for.
    pub fn validate(&self, a: &Matrix<T>) -> Result<()> {
        validate_certificate(&self.certificate, a, self.property)
    }
}

/// Independent re-check of a certificate for `property` against `a`.
/// `Pass` carries no witness and always validates.
pub fn validate_certificate<T: Scalar>(cert: &Certificate<T>, a: &Matrix<T>, property: Property) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidCertificate(msg));
    let check_order = |size: usize| -> Result<()> {
        match property.order() {
            Some(k) if size > k => bad(format!("witness of size {size} exceeds order {k}")),
            _ => Ok(()),
        }
    };
    match cert {
        Certificate::Pass => Ok(()),
        Certificate::FailingMinor { minor, value } => {
            check_order(minor.size())?;
            if property == Property::PMatrix && minor.rows() != minor.cols() {
                return bad("P-matrix certificate must cite a principal minor".into());
            }
            let actual = det(&a.submatrix(minor)?)?;
            check_minor_value(&actual, value, property)
        }
        Certificate::FailingToeplitzMinor { .. } => bad("Toeplitz minors are validated against their sequence".into()),
        Certificate::SignReversalWitness { location, x, products } => {
            check_order(location.size())?;
            check_sign_reversal(&location.resolve(a)?, x, products)
        }
        Certificate::WeakReversalWitness { location, x, products } => {
            check_order(location.size())?;
            if !property.strict() {
                return bad("weak reversal does not refute a non-strict property".into());
            }
            check_weak_reversal(&location.resolve(a)?, x, products)
        }
        Certificate::KernelWitness { location, x } => {
            check_order(location.size())?;
            if !property.strict() {
                return bad("kernel witness does not refute a non-strict property".into());
            }
            check_kernel(&location.resolve(a)?, x.entries())
        }
    }
}

pub(crate) fn check_minor_value<T: Scalar>(actual: &T, claimed: &T, property: Property) -> Result<()> {
    if !actual.compare(claimed).is_zero() {
        return Err(Error::InvalidCertificate(format!("claimed minor {claimed}, recomputed {actual}")));
    }
    if !property.violated_by(actual.sign()) {
        return Err(Error::InvalidCertificate(format!("minor value {actual} does not violate {}", property.name())));
    }
    Ok(())
}

/// Per-coordinate `x_i (Bx)_i`.
pub fn sign_products<T: Scalar>(b: &Matrix<T>, x: &[T]) -> Result<Vec<T>> {
    let bx = b.mul_vec(x)?;
    Ok(x.iter().zip(bx).map(|(xi, yi)| xi.clone() * yi).collect())
}

fn check_products<T: Scalar>(b: &Matrix<T>, x: &[T], products: &[T]) -> Result<Vec<T>> {
    if !b.is_square() {
        return Err(Error::InvalidCertificate("witness location is not square".into()));
    }
    let actual = sign_products(b, x).map_err(|e| Error::InvalidCertificate(e.to_string()))?;
    if actual.len() != products.len() || actual.iter().zip(products).any(|(p, q)| !p.compare(q).is_zero()) {
        return Err(Error::InvalidCertificate("cited products do not match recomputation".into()));
    }
    Ok(actual)
}

pub(crate) fn check_sign_reversal<T: Scalar>(b: &Matrix<T>, x: &[T], products: &[T]) -> Result<()> {
    if !is_alternating(x) {
        return Err(Error::InvalidCertificate("reversal vector is not alternating".into()));
    }
    let actual = check_products(b, x, products)?;
    if let Some(i) = actual.iter().position(|p| !p.sign().is_negative()) {
        return Err(Error::InvalidCertificate(format!("product at coordinate {} is not negative", i + 1)));
    }
    Ok(())
}

pub(crate) fn check_weak_reversal<T: Scalar>(b: &Matrix<T>, x: &[T], products: &[T]) -> Result<()> {
    if !is_alternating(x) {
        return Err(Error::InvalidCertificate("reversal vector is not alternating".into()));
    }
    let actual = check_products(b, x, products)?;
    if let Some(i) = actual.iter().position(|p| p.sign().is_positive()) {
        return Err(Error::InvalidCertificate(format!("product at coordinate {} is positive", i + 1)));
    }
    Ok(())
}

pub(crate) fn check_kernel<T: Scalar>(b: &Matrix<T>, x: &[T]) -> Result<()> {
    if !is_alternating(x) {
        return Err(Error::InvalidCertificate("kernel vector is not alternating".into()));
    }
    if !b.is_square() {
        return Err(Error::InvalidCertificate("witness location is not square".into()));
    }
    let bx = b.mul_vec(x).map_err(|e| Error::InvalidCertificate(e.to_string()))?;
    if let Some(i) = bx.iter().position(|v| !v.is_zero_scalar()) {
        return Err(Error::InvalidCertificate(format!("(Bx)_{} = {} is not zero", i + 1, bx[i])));
    }
    Ok(())
}
