//! Scalar fields used throughout: exact rationals and `f64` with an explicit tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalars.
pub type Rational = BigRational;

/// Default numerical tolerance for float computations.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Numerical tolerance carried alongside float computations.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub tau: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { tau: DEFAULT_TAU }
    }
}

impl Tolerance {
    pub fn new(tau: f64) -> Self {
        assert!(tau >= f64::EPSILON, "tolerance below machine epsilon");
        Tolerance { tau }
    }
}

/// A field of scalars. Rational arithmetic is exact; `f64` is approximate and
/// relies on a [`Tolerance`] wherever a decision has to be made.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact zero test. Used for sparse storage; never a tolerance decision.
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn to_decimal_string(&self) -> String;
    fn parse_scalar(s: &str) -> Result<Self>;
    fn is_exact() -> bool;
    /// Pivot decision: exact zero for rationals, `|x| <= 1e-13·scale` for floats.
    fn negligible(&self, scale: f64) -> bool;
    /// Square root when it exists in the field (always for non-negative floats).
    fn sqrt_exact(&self) -> Option<Self>;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_decimal_string(&self) -> String {
        // shortest round-trip representation
        format!("{self:?}")
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            return Ok(n / d);
        }
        s.trim().parse().map_err(|_| Error::Parse(s.to_string()))
    }
    fn is_exact() -> bool {
        false
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-13 * scale.max(1.0)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
    fn to_decimal_string(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(s.to_string()))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(s.to_string()))?;
            if Zero::is_zero(&d) {
                return Err(Error::Parse(s.to_string()));
            }
            return Ok(BigRational::new(n, d));
        }
        BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|_| Error::Parse(s.to_string()))
    }
    fn is_exact() -> bool {
        true
    }
    fn negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| BigRational::new(n, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        let x = <BigRational as Scalar>::from_ratio(-3, 6);
        assert_eq!(x.to_decimal_string(), "-1/2");
        assert_eq!(BigRational::parse_scalar("-1/2").unwrap(), x);
        assert_eq!(BigRational::parse_scalar("7").unwrap().to_decimal_string(), "7");
        assert!(BigRational::parse_scalar("1/0").is_err());
    }

    #[test]
    fn exact_square_roots() {
        let q = |n, d| <BigRational as Scalar>::from_ratio(n, d);
        assert_eq!(q(9, 4).sqrt_exact(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-1, 1).sqrt_exact(), None);
    }

    #[test]
    fn float_string_round_trip() {
        let x = 0.1f64 + 0.2;
        assert_eq!(f64::parse_scalar(&x.to_decimal_string()).unwrap(), x);
        assert_eq!(f64::parse_scalar("1/4").unwrap(), 0.25);
    }
}
