//! Scalar field abstraction.
//!
//! Every sign decision in the crate goes through [`Scalar::sign`]. The exact
//! field is [`BigRational`]; `f64` is available for numerical benchmarking and
//! decides signs against a session-wide tolerance.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar used by default.
pub type Exact = BigRational;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "numerical(eps={:e})", float_tolerance()),
        }
    }
}

/// Sign of a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

const DEFAULT_TOLERANCE: f64 = 1e-9;

static FLOAT_TOLERANCE: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Sets the tolerance used by `f64` sign decisions for the whole process.
pub fn set_float_tolerance(eps: f64) -> Result<(), Error> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("float tolerance must be a finite value >= 0, got {eps}")));
    }
    FLOAT_TOLERANCE.store(eps.to_bits(), Ordering::Relaxed);
    Ok(())
}

pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOLERANCE.load(Ordering::Relaxed))
}

pub fn default_float_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// A field element the decision procedures can work over.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const MODE: Mode;

    fn sign(&self) -> Sign;

    fn from_rational(value: &BigRational) -> Self;

    fn from_i64(value: i64) -> Self;

    /// Exact value when one exists (always for rationals; floats convert
    /// their binary value).
    fn to_rational(&self) -> Option<BigRational>;

    fn to_f64(&self) -> f64;

    /// String form used in reports and files.
    fn render(&self) -> String;

    fn abs_value(&self) -> Self {
        if self.sign().is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Sign of `self - other`.
    fn compare(&self, other: &Self) -> Sign {
        (self.clone() - other.clone()).sign()
    }

    fn is_zero_scalar(&self) -> bool {
        self.sign().is_zero()
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;

    fn sign(&self) -> Sign {
        if self.is_zero() {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn sign(&self) -> Sign {
        let eps = float_tolerance();
        if self.abs() <= eps {
            Sign::Zero
        } else if *self > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn from_rational(value: &BigRational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn render(&self) -> String {
        format!("{self:e}")
    }
}

/// Parses `"p/q"`, an integer, or a decimal (optionally with exponent) into
/// an exact rational. Decimals are converted exactly, so `"0.1"` is `1/10`.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| format!("invalid numerator in '{s}'"))?;
        let den = BigInt::from_str(den.trim()).map_err(|_| format!("invalid denominator in '{s}'"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        return Ok(BigRational::new(num, den));
    }
    parse_decimal(s).ok_or_else(|| format!("invalid rational '{s}'"))
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str_radix(if all_digits.is_empty() { "0" } else { &all_digits }, 10).ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Convenience constructor for small exact constants.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}
