//! Structure types (combinatorial species) stored as labelled counting
//! sequences `n ↦ |F_n|`, with generating function `Σ |F_n| zⁿ/n!`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, PowerSeries, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    counts: Vec<BigUint>,
}

impl Species {
    /// Counts for sizes `0..=truncation`; missing entries are zero.
    pub fn from_counts(mut counts: Vec<BigUint>, truncation: usize) -> Self {
        counts.resize(truncation + 1, BigUint::zero());
        Species { counts }
    }

    pub fn from_fn(truncation: usize, f: impl FnMut(usize) -> BigUint) -> Self {
        Species { counts: (0..=truncation).map(f).collect() }
    }

    /// The species with no structures at all.
    pub fn zero(truncation: usize) -> Self {
        Self::from_counts(Vec::new(), truncation)
    }

    /// `k` structures on the empty set, none elsewhere (`1` is "being the empty set").
    pub fn constant(k: u64, truncation: usize) -> Self {
        Self::from_counts(vec![BigUint::from(k)], truncation)
    }

    pub fn one(truncation: usize) -> Self {
        Self::constant(1, truncation)
    }

    /// `Z`: being a one-element set.
    pub fn singleton(truncation: usize) -> Self {
        Self::from_fn(truncation, |n| BigUint::from((n == 1) as u8))
    }

    /// `E`: being a finite set (one structure on every set).
    pub fn sets(truncation: usize) -> Self {
        Self::from_fn(truncation, |_| BigUint::one())
    }

    /// `E_{≥1}`: being a nonempty finite set.
    pub fn nonempty_sets(truncation: usize) -> Self {
        Self::from_fn(truncation, |n| BigUint::from((n >= 1) as u8))
    }

    /// `E_n`: being an `n`-element set.
    pub fn sets_of_size(size: usize, truncation: usize) -> Self {
        Self::from_fn(truncation, |n| BigUint::from((n == size) as u8))
    }

    /// `O`: total orders, `n!` on an `n`-element set.
    pub fn orders(truncation: usize) -> Self {
        Self::from_fn(truncation, factorial)
    }

    /// Sets of even size (generating function `cosh z`).
    pub fn even_sets(truncation: usize) -> Self {
        Self::from_fn(truncation, |n| BigUint::from((n % 2 == 0) as u8))
    }

    /// Sets of odd size (generating function `sinh z`).
    pub fn odd_sets(truncation: usize) -> Self {
        Self::from_fn(truncation, |n| BigUint::from((n % 2 == 1) as u8))
    }

    pub fn truncation(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, n: usize) -> Option<&BigUint> {
        self.counts.get(n)
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let t = truncation.min(self.truncation());
        Species { counts: self.counts[..=t].to_vec() }
    }

    /// Exponential generating function `Σ |F_n| zⁿ/n!`.
    pub fn gf(&self) -> PowerSeries<Rational> {
        PowerSeries::from_fn(self.truncation(), |n| Rational::new(BigInt::from(self.counts[n].clone()), BigInt::from(factorial(n))))
    }

    /// Recovers counts `n!·f_n`, failing if any is not a nonnegative integer.
    pub fn from_gf(series: &PowerSeries<Rational>) -> Result<Self> {
        let counts = series
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let scaled = c * Rational::from_integer(BigInt::from(factorial(n)));
                if !scaled.is_integer() || scaled < Rational::zero() {
                    return Err(Error::NonIntegral { size: n, value: scaled.to_string() });
                }
                Ok(scaled.to_integer().to_biguint().expect("checked nonnegative"))
            })
            .collect::<Result<_>>()?;
        Ok(Species { counts })
    }

    pub fn sum(&self, other: &Species) -> Species {
        let t = self.truncation().min(other.truncation());
        Self::from_fn(t, |n| &self.counts[n] + &other.counts[n])
    }

    /// `(F·G)_n = Σ_k C(n,k)·F_k·G_{n−k}`: split the set, put an F-structure
    /// on one part and a G-structure on the other.
    pub fn product(&self, other: &Species) -> Species {
        let t = self.truncation().min(other.truncation());
        Self::from_fn(t, |n| (0..=n).fold(BigUint::zero(), |acc, k| acc + binomial(n, k) * &self.counts[k] * &other.counts[n - k]))
    }

    pub fn pow(&self, k: u32) -> Species {
        (0..k).fold(Species::one(self.truncation()), |acc, _| acc.product(self))
    }

    /// `F ∘ G`, computed through generating functions and checked for integrality.
    pub fn compose(&self, inner: &Species) -> Result<Species> {
        if !inner.counts[0].is_zero() {
            return Err(Error::ComposeConstant { constant: inner.counts[0].to_string() });
        }
        Species::from_gf(&self.gf().compose(&inner.gf())?)
    }

    /// `A F`: structures on `S + {∗}`. Known one order less than `F`.
    pub fn derivative(&self) -> Species {
        if self.truncation() == 0 {
            return Species::zero(0);
        }
        Species { counts: self.counts[1..].to_vec() }
    }

    /// `A* F = Z·F`: pick the distinguished element, an F-structure on the rest.
    /// Known one order further than `F`.
    pub fn shift(&self) -> Species {
        let t = self.truncation() + 1;
        Self::from_fn(t, |n| if n == 0 { BigUint::zero() } else { BigUint::from(n) * &self.counts[n - 1] })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "truncation": self.truncation(),
            "counts": self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Input(format!("species JSON: {what}"));
        let truncation = value["truncation"].as_u64().and_then(|t| t.to_usize()).ok_or_else(|| bad("missing truncation"))?;
        let counts = value["counts"]
            .as_array()
            .ok_or_else(|| bad("missing counts"))?
            .iter()
            .map(|c| c.as_str().and_then(|s| s.parse::<BigUint>().ok()).ok_or_else(|| bad("count is not a decimal string")))
            .collect::<Result<Vec<_>>>()?;
        if counts.len() != truncation + 1 {
            return Err(bad("counts length must be truncation + 1"));
        }
        Ok(Species { counts })
    }
}

/// Solves `F = rhs(F)` by iterating from the zero species.
///
/// Coefficient `n` must be final after `n + 1` iterations; a later change
/// means the definition is not contractive and yields [`Error::Diverged`].
pub fn solve_fixed_point<R>(rhs: R, truncation: usize) -> Result<Species>
where
    R: Fn(&Species) -> Result<Species>,
{
    let mut current = Species::zero(truncation);
    let mut history: Vec<Species> = Vec::with_capacity(truncation + 2);
    // the final pass only verifies that nothing moves any more
    for iteration in 1..=truncation + 2 {
        let next = rhs(&current)?;
        if next.truncation() < truncation {
            return Err(Error::Input(format!("right-hand side is only known through order {}, need {truncation}", next.truncation())));
        }
        let next = next.truncate(truncation);
        for n in 0..=truncation {
            let settled_at = n + 1;
            if iteration > settled_at && next.counts[n] != history[settled_at - 1].counts[n] {
                return Err(Error::Diverged { index: n, settled_at });
            }
        }
        history.push(next.clone());
        current = next;
    }
    Ok(current)
}
