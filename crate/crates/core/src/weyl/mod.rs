//! The Weyl algebra generated by `a`, `a*` with `a a* − a* a = 1`.
//!
//! Elements are kept in normal order, `Σ c_{ij} a*^i a^j`. In the Fock
//! representation on power series, `a = d/dz` and `a* = z·`.

mod matrix;

pub use matrix::{matrix_exp, FockMatrix};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, PowerSeries, Rational, Ring, RootTwoComplex, Semiring, ToComplex};

/// A ladder generator in a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// annihilation `a`
    A,
    /// creation `a*`
    AStar,
}

/// `Σ c_{ij} a*^i a^j` with nonzero coefficients, keyed by `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement<C> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Ring> Default for WeylElement<C> {
    fn default() -> Self {
        WeylElement { terms: BTreeMap::new() }
    }
}

impl<C: Ring> WeylElement<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::scalar(C::one_elem())
    }

    /// `c·a*^creations a^annihilations`.
    pub fn monomial(creations: u32, annihilations: u32, c: C) -> Self {
        let mut out = Self::default();
        out.accumulate((creations, annihilations), c);
        out
    }

    pub fn annihilation() -> Self {
        Self::monomial(0, 1, C::one_elem())
    }

    pub fn creation() -> Self {
        Self::monomial(1, 0, C::one_elem())
    }

    /// `N = a* a`.
    pub fn number() -> Self {
        Self::monomial(1, 1, C::one_elem())
    }

    /// `φ = a + a*`.
    pub fn field() -> Self {
        Self::annihilation().add(&Self::creation())
    }

    fn accumulate(&mut self, key: (u32, u32), c: C) {
        if c.is_zero_elem() {
            return;
        }
        let next = match self.terms.remove(&key) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !next.is_zero_elem() {
            self.terms.insert(key, next);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, creations: u32, annihilations: u32) -> Option<&C> {
        self.terms.get(&(creations, annihilations))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::one_elem().negate()))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::default();
        for (k, x) in &self.terms {
            out.accumulate(*k, c.times(x));
        }
        out
    }

    /// Normal-ordered product, using
    /// `a^j a*^p = Σ_r C(j,r) C(p,r) r! a*^{p−r} a^{j−r}`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(i, j), x) in &self.terms {
            for (&(p, q), y) in &other.terms {
                let xy = x.times(y);
                for r in 0..=j.min(p) {
                    let (ju, pu, ru) = (j as usize, p as usize, r as usize);
                    let weight = binomial(ju, ru) * binomial(pu, ru) * factorial(ru);
                    out.accumulate((i + p - r, j - r + q), C::from_natural(&weight).times(&xy));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Highest creation and annihilation powers present.
    pub fn degree(&self) -> (u32, u32) {
        self.terms.keys().fold((0, 0), |(ci, cj), &(i, j)| (ci.max(i), cj.max(j)))
    }

    /// Acts on a polynomial state of degree at most its truncation:
    /// `a` differentiates, `a*` multiplies by `z`. A result with a nonzero
    /// coefficient beyond the truncation is a cutoff error.
    pub fn apply(&self, state: &PowerSeries<C>) -> Result<PowerSeries<C>> {
        let t = state.truncation();
        let mut out = vec![C::zero_elem(); t + 1];
        for (&(i, j), c) in &self.terms {
            for (n, s) in state.coeffs().iter().enumerate() {
                if s.is_zero_elem() || n < j as usize {
                    continue;
                }
                // d^j z^n = n!/(n−j)! z^{n−j}
                let falling = factorial(n) / factorial(n - j as usize);
                let target = n - j as usize + i as usize;
                let value = c.times(&C::from_natural(&falling)).times(s);
                if value.is_zero_elem() {
                    continue;
                }
                if target > t {
                    return Err(Error::Cutoff { cutoff: t, reason: format!("a*^{i} a^{j} maps z^{n} to z^{target}") });
                }
                out[target] = out[target].plus(&value);
            }
        }
        Ok(PowerSeries::new(out, t))
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> WeylElement<D> {
        let mut out = WeylElement::<D>::default();
        for (k, c) in &self.terms {
            out.accumulate(*k, f(c));
        }
        out
    }
}

impl<C: Ring + ToComplex> WeylElement<C> {
    /// Matrix in the orthonormal basis `e_n = zⁿ/√n!`, `n = 0..=cutoff`.
    pub fn to_matrix(&self, cutoff: usize) -> Result<FockMatrix> {
        let (ci, cj) = self.degree();
        if cutoff < 1 || ci as usize > cutoff || cj as usize > cutoff {
            return Err(Error::Cutoff { cutoff, reason: format!("monomials up to a*^{ci} a^{cj} do not fit") });
        }
        let mut m = FockMatrix::zeros(cutoff);
        for (&(i, j), c) in &self.terms {
            let c = c.to_complex();
            for n in (j as usize)..=cutoff {
                let mid = n - j as usize;
                let target = mid + i as usize;
                if target > cutoff {
                    continue;
                }
                // a^j e_n = √(n!/mid!) e_mid ; a*^i e_mid = √(target!/mid!) e_target
                let amp = falling_sqrt(n, mid) * falling_sqrt(target, mid);
                m.add_entry(target, n, c * amp);
            }
        }
        Ok(m)
    }
}

/// `√(hi!/lo!)` for `lo ≤ hi`.
fn falling_sqrt(hi: usize, lo: usize) -> f64 {
    ((lo + 1)..=hi).map(|k| (k as f64).sqrt()).product()
}

/// Normal-orders a word (leftmost generator acts last), scaled by `coeff`.
pub fn normal_order<C: Ring>(word: &[Generator], coeff: C) -> WeylElement<C> {
    word.iter().fold(WeylElement::scalar(coeff), |acc, g| {
        let gen = match g {
            Generator::A => WeylElement::annihilation(),
            Generator::AStar => WeylElement::creation(),
        };
        acc.mul(&gen)
    })
}

/// `⟨z^k, φ^m z^l⟩` with `⟨zⁿ, zᵐ⟩ = n!·δ`.
pub fn field_power_expect(k: usize, m: u32, l: usize) -> Rational {
    if (k + l + m as usize) % 2 == 1 {
        return Rational::from_integer(0.into());
    }
    let phi_m = WeylElement::<Rational>::field().pow(m);
    let state = PowerSeries::monomial(l, Rational::one_elem(), l + m as usize);
    let image = phi_m.apply(&state).expect("truncation covers l + m");
    match image.coeff(k) {
        Some(c) => c * Rational::from_integer(BigInt::from(factorial(k))),
        None => Rational::from_integer(0.into()),
    }
}

/// Momentum and position, `p = (a − a*)/(√2 i)` and `q = (a + a*)/√2`.
pub fn pq_generators() -> (WeylElement<RootTwoComplex>, WeylElement<RootTwoComplex>) {
    let a = WeylElement::<RootTwoComplex>::annihilation();
    let a_star = WeylElement::<RootTwoComplex>::creation();
    let inv = RootTwoComplex::inv_sqrt2();
    // 1/(√2 i) = −i/√2
    let minus_i = RootTwoComplex::i().negate();
    let p = a.sub(&a_star).scale(&inv.times(&minus_i));
    let q = a.add(&a_star).scale(&inv);
    (p, q)
}

impl<C: Ring> fmt::Display for WeylElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match i {
                0 => {}
                1 => write!(f, "·a*")?,
                _ => write!(f, "·a*^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "·a")?,
                _ => write!(f, "·a^{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use proptest::prelude::*;
    use std::collections::HashMap;

    type W = WeylElement<Rational>;

    /// Rewrites the first `a a*` into `a* a + 1` until no such pair is left.
    fn rewrite_oracle(word: &[Generator]) -> HashMap<(u32, u32), i64> {
        let mut pending: Vec<(Vec<Generator>, i64)> = vec![(word.to_vec(), 1)];
        let mut done: HashMap<(u32, u32), i64> = HashMap::new();
        while let Some((w, c)) = pending.pop() {
            match w.windows(2).position(|p| p == [Generator::A, Generator::AStar]) {
                Some(pos) => {
                    let mut swapped = w.clone();
                    swapped.swap(pos, pos + 1);
                    let mut removed = w.clone();
                    removed.drain(pos..pos + 2);
                    pending.push((swapped, c));
                    pending.push((removed, c));
                }
                None => {
                    let i = w.iter().filter(|g| **g == Generator::AStar).count() as u32;
                    *done.entry((i, w.len() as u32 - i)).or_default() += c;
                }
            }
        }
        done.retain(|_, c| *c != 0);
        done
    }

    fn as_map(w: &W) -> HashMap<(u32, u32), i64> {
        w.terms().map(|(k, c)| (*k, c.to_integer().try_into().unwrap())).collect()
    }

    use Generator::{AStar, A};

    #[test]
    fn defining_relation() {
        let w = normal_order(&[A, AStar], rat_int(1));
        assert_eq!(w, W::number().add(&W::one()));
    }

    #[test]
    fn a_squared_a_star_squared() {
        let w = normal_order(&[A, A, AStar, AStar], rat_int(1));
        let expected = W::monomial(2, 2, rat_int(1)).add(&W::monomial(1, 1, rat_int(4))).add(&W::scalar(rat_int(2)));
        assert_eq!(w, expected);
        assert_eq!(as_map(&w), rewrite_oracle(&[A, A, AStar, AStar]));
    }

    #[test]
    fn already_normal() {
        assert_eq!(normal_order(&[AStar, A], rat_int(1)), W::number());
    }

    #[test]
    fn number_operator_counts_quanta() {
        for n in 0..6 {
            let zn = PowerSeries::monomial(n, rat_int(1), 8);
            let out = W::number().apply(&zn).unwrap();
            assert_eq!(out, PowerSeries::monomial(n, rat_int(n as i64), 8));
        }
    }

    #[test]
    fn field_operator_on_states() {
        let one = PowerSeries::monomial(0, rat_int(1), 4);
        assert_eq!(W::field().apply(&one).unwrap(), PowerSeries::monomial(1, rat_int(1), 4));
        let z = PowerSeries::monomial(1, rat_int(1), 4);
        let expected = PowerSeries::new(vec![rat_int(0), rat_int(3), rat_int(0), rat_int(1)], 4);
        assert_eq!(W::field().pow(2).apply(&z).unwrap(), expected);
    }

    #[test]
    fn apply_reports_overflow() {
        let z = PowerSeries::monomial(2, rat_int(1), 2);
        assert_eq!(W::creation().apply(&z).unwrap_err().code(), "CUTOFF");
    }

    #[test]
    fn expectation_values() {
        assert_eq!(field_power_expect(0, 6, 0), rat_int(15));
        assert_eq!(field_power_expect(1, 2, 1), rat_int(3));
        assert_eq!(field_power_expect(1, 3, 1), rat_int(0));
        assert_eq!(field_power_expect(2, 0, 2), rat_int(2));
        assert_eq!(field_power_expect(2, 0, 1), rat_int(0));
    }

    #[test]
    fn position_and_momentum() {
        let (p, q) = pq_generators();
        let c = p.commutator(&q);
        let minus_i = RootTwoComplex::i().negate();
        assert_eq!(c, WeylElement::scalar(minus_i));
        let phi = WeylElement::<RootTwoComplex>::field().scale(&RootTwoComplex::inv_sqrt2());
        assert_eq!(q, phi);
        let m = p.to_matrix(6).unwrap();
        assert!(m.is_hermitian(1e-14));
    }

    #[test]
    fn ladder_matrices() {
        let a = W::annihilation().to_matrix(5).unwrap();
        let a_star = W::creation().to_matrix(5).unwrap();
        assert!(a.adjoint().approx_eq(&a_star, 0.0));
        let n = W::number().to_matrix(5).unwrap();
        for r in 0..=5 {
            for c in 0..=5 {
                let expected = if r == c { r as f64 } else { 0.0 };
                assert!((n.entry(r, c).re - expected).abs() < 1e-12);
            }
        }
        assert!(W::monomial(0, 3, rat_int(1)).to_matrix(2).is_err());
    }

    fn arb_word() -> impl Strategy<Value = Vec<Generator>> {
        prop::collection::vec(prop_oneof![Just(A), Just(AStar)], 0..=8)
    }

    proptest! {
        #[test]
        fn normal_order_matches_rewriting(w in arb_word()) {
            prop_assert_eq!(as_map(&normal_order(&w, rat_int(1))), rewrite_oracle(&w));
        }

        #[test]
        fn normal_order_is_multiplicative(u in arb_word(), v in arb_word()) {
            let uv: Vec<_> = u.iter().chain(v.iter()).copied().collect();
            let lhs = normal_order(&uv, rat(1, 1));
            let rhs = normal_order(&u, rat_int(1)).mul(&normal_order(&v, rat_int(1)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
