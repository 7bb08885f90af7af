//! Coordinate arithmetic shared by the IET and suspension code.
//!
//! Two backends: `f64` with a fixed coincidence tolerance of `1e-12`, and
//! arbitrary-precision rationals where coincidence is exact equality.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational coordinate.
pub type Rational = BigRational;

/// Absolute tolerance used by the floating backend for coincidence tests.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when equality tests are exact.
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    /// Exact binary value for rationals.
    fn from_f64(x: f64) -> Option<Self>;

    fn from_int(n: i64) -> Self;

    /// Parses a decimal (`0.25`, `-1e-3`) or a fraction (`3/7`).
    fn parse(text: &str) -> Option<Self>;

    /// Coincidence within the backend tolerance.
    fn coincides(&self, other: &Self) -> bool;

    /// Record representation; round-trips through [`Scalar::parse`].
    fn to_record(&self) -> String;

    fn is_positive_strict(&self) -> bool {
        *self > Self::zero() && !self.coincides(&Self::zero())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        let value = match text.split_once('/') {
            Some((num, den)) => num.trim().parse::<f64>().ok()? / den.trim().parse::<f64>().ok()?,
            None => text.parse::<f64>().ok()?,
        };
        value.is_finite().then_some(value)
    }

    fn coincides(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOLERANCE
    }

    fn to_record(&self) -> String {
        // Shortest representation that parses back to the same bits.
        format!("{self}")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().ok()?;
                let den: BigInt = den.trim().parse().ok()?;
                (!den.is_zero()).then(|| BigRational::new(num, den))
            }
            None => parse_decimal(text),
        }
    }

    fn coincides(&self, other: &Self) -> bool {
        self == other
    }

    fn to_record(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Exact value of a decimal literal such as `-12.375e-2`.
fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
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
    let mut numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}
