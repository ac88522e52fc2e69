use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{format_rational, rational_to_f64, Rational, Ring, Semiring, ToComplex, ToJson};

/// `a + b·√2` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootTwo {
    pub rational: Rational,
    pub root: Rational,
}

impl RootTwo {
    pub fn new(rational: Rational, root: Rational) -> Self {
        RootTwo { rational, root }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.root.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        RootTwo::new(&self.rational + &o.rational, &self.root + &o.root)
    }

    fn mul(&self, o: &Self) -> Self {
        let two = Rational::from_integer(2.into());
        RootTwo::new(&self.rational * &o.rational + two * &self.root * &o.root, &self.rational * &o.root + &self.root * &o.rational)
    }

    fn neg(&self) -> Self {
        RootTwo::new(-&self.rational, -&self.root)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational) + std::f64::consts::SQRT_2 * rational_to_f64(&self.root)
    }
}

impl fmt::Display for RootTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.root.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.rational)),
            (true, false) => write!(f, "{}√2", format_rational(&self.root)),
            (false, false) => write!(f, "({} + {}√2)", format_rational(&self.rational), format_rational(&self.root)),
        }
    }
}

/// Complex numbers over `ℚ(√2)`: enough to write the position and momentum
/// generators `q = (a+a*)/√2`, `p = (a−a*)/(√2 i)` without rounding.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootTwoComplex {
    pub re: RootTwo,
    pub im: RootTwo,
}

impl RootTwoComplex {
    pub fn new(re: RootTwo, im: RootTwo) -> Self {
        RootTwoComplex { re, im }
    }

    pub fn rational(r: Rational) -> Self {
        RootTwoComplex::new(RootTwo::new(r, Rational::zero()), RootTwo::default())
    }

    pub fn i() -> Self {
        RootTwoComplex::new(RootTwo::default(), RootTwo::new(Rational::from_integer(1.into()), Rational::zero()))
    }

    pub fn sqrt2() -> Self {
        RootTwoComplex::new(RootTwo::new(Rational::zero(), Rational::from_integer(1.into())), RootTwo::default())
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        RootTwoComplex::new(RootTwo::new(Rational::zero(), Rational::new(1.into(), 2.into())), RootTwo::default())
    }
}

impl Semiring for RootTwoComplex {
    fn zero_elem() -> Self {
        RootTwoComplex::default()
    }
    fn one_elem() -> Self {
        RootTwoComplex::rational(Rational::from_integer(1.into()))
    }
    fn is_zero_elem(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        RootTwoComplex::new(self.re.add(&o.re), self.im.add(&o.im))
    }
    fn times(&self, o: &Self) -> Self {
        RootTwoComplex::new(self.re.mul(&o.re).add(&self.im.mul(&o.im).neg()), self.re.mul(&o.im).add(&self.im.mul(&o.re)))
    }
    fn from_natural(n: &BigUint) -> Self {
        RootTwoComplex::rational(Rational::from_integer(BigInt::from(n.clone())))
    }
}

impl Ring for RootTwoComplex {
    fn negate(&self) -> Self {
        RootTwoComplex::new(self.re.neg(), self.im.neg())
    }
}

impl ToComplex for RootTwoComplex {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl ToJson for RootTwoComplex {
    fn to_json(&self) -> Value {
        json!({ "re": self.re.to_string(), "im": self.im.to_string() })
    }
}

impl fmt::Display for RootTwoComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = RootTwoComplex::sqrt2();
        assert_eq!(s.times(&s), RootTwoComplex::from_u64(2));
        assert_eq!(s.times(&RootTwoComplex::inv_sqrt2()), RootTwoComplex::one_elem());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = RootTwoComplex::i();
        assert_eq!(i.times(&i), RootTwoComplex::one_elem().negate());
        assert_eq!(i.to_complex(), Complex64::new(0.0, 1.0));
    }
}
