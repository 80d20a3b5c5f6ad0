//! Numeric abstraction shared by the exact and floating evaluation modes.
//!
//! All analyses run over a [`Scalar`]: either [`Rational`] (arbitrary-precision,
//! canonical fractions) for certified verdicts, or `f64` for inputs that have no
//! rational representation, such as points on the 10/11-block independence curve.
//! Float verdicts are tolerance-based and documented as such.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar: reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

/// Absolute tolerance under which a float value counts as zero in a verdict.
pub const FLOAT_VERDICT_TOL: f64 = 1e-9;

/// Relative tolerance for float pivots and internal consistency checks.
pub const FLOAT_PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{text}` as a number: {reason}")]
pub struct NumberParseError {
    pub text: String,
    pub reason: String,
}

impl NumberParseError {
    fn new(text: &str, reason: impl Into<String>) -> Self {
        NumberParseError {
            text: text.to_owned(),
            reason: reason.into(),
        }
    }
}

/// Arithmetic required by the analyses. Implemented by [`Rational`] and `f64`.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic is exact. Exact scalars certify verdicts; floats only
    /// check them up to [`FLOAT_VERDICT_TOL`].
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn ratio(num: i64, den: i64) -> Self;

    fn is_zero(&self) -> bool;

    /// Zero test used in verdicts: exact for rationals, `|x| <= 1e-9` for floats.
    fn is_verdict_zero(&self) -> bool;

    /// Zero test for elimination pivots, relative to the matrix scale.
    fn is_negligible(&self, scale: &Self) -> bool;

    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;

    /// Exact value when the scalar is a rational, `None` for floats.
    fn as_rational(&self) -> Option<Rational>;

    /// Parses `p/q`, decimal, or integer notation. Decimals are exact in the
    /// rational mode (`0.25` becomes `1/4`).
    fn parse(text: &str) -> Result<Self, NumberParseError>;

    /// Rendering used in reports: `p/q` for rationals, shortest round-trip
    /// decimal for floats.
    fn render(&self) -> String;
}

fn parse_decimal_rational(text: &str) -> Result<Rational, NumberParseError> {
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(NumberParseError::new(text, "no digits"));
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(NumberParseError::new(text, "expected decimal digits"));
    }
    let mut num: BigInt = if whole.is_empty() {
        BigInt::zero()
    } else {
        whole.parse().unwrap()
    };
    let mut den = BigInt::one();
    for c in frac.chars() {
        num = num * 10 + c.to_digit(10).unwrap();
        den *= 10;
    }
    Ok(Rational::new(BigInt::from(sign) * num, den))
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as One>::one()
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero(&self) -> bool {
        <Rational as Zero>::is_zero(self)
    }

    fn is_verdict_zero(&self) -> bool {
        <Rational as Zero>::is_zero(self)
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        <Rational as Zero>::is_zero(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn parse(text: &str) -> Result<Self, NumberParseError> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| NumberParseError::new(text, "bad numerator"))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| NumberParseError::new(text, "bad denominator"))?;
            if den.is_zero() {
                return Err(NumberParseError::new(text, "denominator is zero"));
            }
            return Ok(Rational::new(num, den));
        }
        parse_decimal_rational(text)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_verdict_zero(&self) -> bool {
        f64::abs(*self) <= FLOAT_VERDICT_TOL
    }

    fn is_negligible(&self, scale: &Self) -> bool {
        f64::abs(*self) <= FLOAT_PIVOT_TOL * f64::max(1.0, f64::abs(*scale))
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn as_rational(&self) -> Option<Rational> {
        None
    }

    fn parse(text: &str) -> Result<Self, NumberParseError> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num = f64::from_str(num.trim())
                .map_err(|_| NumberParseError::new(text, "bad numerator"))?;
            let den = f64::from_str(den.trim())
                .map_err(|_| NumberParseError::new(text, "bad denominator"))?;
            if den == 0.0 {
                return Err(NumberParseError::new(text, "denominator is zero"));
            }
            return Ok(num / den);
        }
        f64::from_str(text).map_err(|e| NumberParseError::new(text, e.to_string()))
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

/// Sums an iterator of scalars.
pub fn total<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().fold(S::zero(), |a, b| a + b)
}
