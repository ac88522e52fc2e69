use serde_json::{json, Value};

use super::{Ring, Semiring, ToJson};
use crate::error::{Error, Result};

/// A formal power series known through `z^truncation`.
///
/// Binary operations on series with different truncations use the smaller one.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Semiring> PowerSeries<C> {
    /// Pads with zeros (or drops trailing terms) to exactly `truncation + 1` coefficients.
    pub fn new(mut coeffs: Vec<C>, truncation: usize) -> Self {
        coeffs.resize(truncation + 1, C::zero_elem());
        PowerSeries { coeffs }
    }

    pub fn zero(truncation: usize) -> Self {
        Self::new(Vec::new(), truncation)
    }

    pub fn one(truncation: usize) -> Self {
        Self::monomial(0, C::one_elem(), truncation)
    }

    /// `c·zⁿ` (the zero series when `n` exceeds the truncation).
    pub fn monomial(n: usize, c: C, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if n <= truncation {
            s.coeffs[n] = c;
        }
        s
    }

    /// Builds coefficient `n` from `f(n)` for `n = 0..=truncation`.
    pub fn from_fn(truncation: usize, f: impl FnMut(usize) -> C) -> Self {
        PowerSeries { coeffs: (0..=truncation).map(f).collect() }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `zⁿ`, or `None` past the truncation.
    pub fn coeff(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let t = truncation.min(self.truncation());
        PowerSeries { coeffs: self.coeffs[..=t].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero_elem)
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation().min(other.truncation());
        Self::from_fn(t, |n| self.coeffs[n].plus(&other.coeffs[n]))
    }

    pub fn scale(&self, c: &C) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| c.times(x)).collect() }
    }

    /// Cauchy product, truncated.
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.truncation().min(other.truncation());
        Self::from_fn(t, |n| {
            (0..=n).fold(C::zero_elem(), |acc, k| {
                if self.coeffs[k].is_zero_elem() || other.coeffs[n - k].is_zero_elem() {
                    acc
                } else {
                    acc.plus(&self.coeffs[k].times(&other.coeffs[n - k]))
                }
            })
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.truncation()), |acc, _| acc.mul(self))
    }

    /// `d/dz`. The result is known one order less than the input.
    pub fn derivative(&self) -> Self {
        let t = self.truncation().saturating_sub(1);
        if self.truncation() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(t, |n| C::from_u64(n as u64 + 1).times(&self.coeffs[n + 1]))
    }

    /// Multiplication by `z`. The result is known one order further.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero_elem());
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs }
    }

    /// `f(g(z))` by Horner's rule over truncated polynomials.
    ///
    /// `g` must have zero constant term, otherwise every coefficient of the
    /// composite would involve infinitely many terms of `f`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero_elem() {
            return Err(Error::ComposeConstant { constant: g.coeffs[0].to_string() });
        }
        let t = self.truncation().min(g.truncation());
        let g = g.truncate(t);
        let mut acc = Self::monomial(0, self.coeffs[t].clone(), t);
        for k in (0..t).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = acc.coeffs[0].plus(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Value of the truncated polynomial at `x`.
    pub fn eval(&self, x: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero_elem(), |acc, c| acc.times(x).plus(c))
    }

    pub fn map<D: Semiring>(&self, f: impl Fn(&C) -> D) -> PowerSeries<D> {
        PowerSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<C: Ring> PowerSeries<C> {
    pub fn sub(&self, other: &Self) -> Self {
        let t = self.truncation().min(other.truncation());
        Self::from_fn(t, |n| self.coeffs[n].minus(&other.coeffs[n]))
    }
}

impl<C: Semiring + ToJson> PowerSeries<C> {
    pub fn to_json(&self) -> Value {
        json!({
            "truncation": self.truncation(),
            "coeffs": self.coeffs.iter().map(ToJson::to_json).collect::<Vec<_>>(),
        })
    }
}
