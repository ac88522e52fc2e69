//! Exact scalars and truncated power series.
//!
//! Everything combinatorial stays in [`Rational`] (arbitrary precision).
//! [`PhasedScalar`] is the formal rig of nonnegative rationals tensored with
//! U(1) phases; [`h`](PhasedScalar::h) maps it onto the complex numbers.
//! Floating point only appears in [`Complex64`] values used for evolution.

mod angle;
mod phased;
mod roottwo;
mod series;

pub use angle::Angle;
pub use phased::PhasedScalar;
pub use roottwo::{RootTwo, RootTwoComplex};
pub use series::PowerSeries;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default truncation order for series-valued constructors in the front end.
pub const DEFAULT_TRUNCATION: usize = 16;

/// A commutative semiring of coefficients.
///
/// Method names avoid `add`/`mul` so that they never shadow the operator
/// traits implemented by the concrete number types.
pub trait Semiring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn from_natural(n: &BigUint) -> Self;

    fn from_u64(n: u64) -> Self {
        Self::from_natural(&BigUint::from(n))
    }
}

/// Semirings with additive inverses.
pub trait Ring: Semiring {
    fn negate(&self) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }
}

/// Coefficients that can be evaluated numerically.
pub trait ToComplex {
    fn to_complex(&self) -> Complex64;
}

/// JSON rendering of scalars (exact values as fraction strings).
pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl Semiring for Rational {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn from_natural(n: &BigUint) -> Self {
        Rational::from_integer(BigInt::from(n.clone()))
    }
}

impl Ring for Rational {
    fn negate(&self) -> Self {
        -self
    }
}

impl ToComplex for Rational {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

impl ToJson for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

impl Semiring for Complex64 {
    fn zero_elem() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_elem() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero_elem(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn from_natural(n: &BigUint) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }
}

impl Ring for Complex64 {
    fn negate(&self) -> Self {
        -self
    }
}

impl ToComplex for Complex64 {
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl ToJson for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Input(format!("not a fraction: {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

pub(crate) fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(15, 720)), "1/48");
        assert_eq!(format_rational(&rat(6, 1)), "6");
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(6), BigUint::from(720u32));
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
    }
}
