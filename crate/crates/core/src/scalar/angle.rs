use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{format_rational, rational_to_f64, Rational};

/// An element of U(1).
///
/// `Turns(t)` is the exact phase `exp(2πi·t)` with `t` reduced into `[0, 1)`.
/// `Radians(x)` holds an arbitrary real phase (normalized into `[0, 2π)`),
/// used for evolution times that are not rational fractions of a turn.
#[derive(Debug, Clone)]
pub enum Angle {
    Turns(Rational),
    Radians(f64),
}

impl Angle {
    pub fn zero() -> Self {
        Angle::Turns(Rational::zero())
    }

    pub fn turns(t: Rational) -> Self {
        Angle::Turns(reduce_turns(t))
    }

    /// A real phase. A phase of exactly zero becomes the exact identity.
    pub fn radians(x: f64) -> Self {
        let x = x.rem_euclid(TAU);
        if x == 0.0 {
            Angle::zero()
        } else {
            Angle::Radians(x)
        }
    }

    pub fn half_turn() -> Self {
        Angle::turns(Rational::new(1.into(), 2.into()))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Angle::Turns(t) => t.is_zero(),
            Angle::Radians(x) => *x == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Turns(_))
    }

    pub fn to_radians(&self) -> f64 {
        match self {
            Angle::Turns(t) => rational_to_f64(t) * TAU,
            Angle::Radians(x) => *x,
        }
    }

    /// Composition in U(1). Exact plus exact stays exact.
    pub fn add(&self, other: &Angle) -> Angle {
        match (self, other) {
            (Angle::Turns(a), Angle::Turns(b)) => Angle::turns(a + b),
            (a, b) if a.is_zero() => b.clone(),
            (a, b) if b.is_zero() => a.clone(),
            (a, b) => Angle::radians(a.to_radians() + b.to_radians()),
        }
    }

    pub fn neg(&self) -> Angle {
        match self {
            Angle::Turns(t) => Angle::turns(-t),
            Angle::Radians(x) => Angle::radians(-x),
        }
    }

    /// `n·θ`, the phase picked up by `n` quanta.
    pub fn scale(&self, n: i64) -> Angle {
        match self {
            Angle::Turns(t) => Angle::turns(t * Rational::from_integer(BigInt::from(n))),
            Angle::Radians(x) => Angle::radians(x * n as f64),
        }
    }

    /// `exp(iθ)`. Quarter turns map to complexes with exact components.
    pub fn cis(&self) -> Complex64 {
        if let Angle::Turns(t) = self {
            if let Some(q) = quarter_index(t) {
                return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)][q];
            }
        }
        Complex64::from_polar(1.0, self.to_radians())
    }

    /// Index `q` with `θ = q/4` turns, when the angle is an exact quarter turn.
    pub fn quarter(&self) -> Option<usize> {
        match self {
            Angle::Turns(t) => quarter_index(t),
            Angle::Radians(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Angle::Turns(t) => json!(format_rational(t)),
            Angle::Radians(x) => json!(x),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Angle::Turns(_) => 0,
            Angle::Radians(_) => 1,
        }
    }
}

fn reduce_turns(t: Rational) -> Rational {
    let (_, rem) = t.numer().div_mod_floor(t.denom());
    Rational::new(rem, t.denom().clone())
}

fn quarter_index(t: &Rational) -> Option<usize> {
    let four = t * Rational::from_integer(4.into());
    if four.is_integer() {
        four.to_integer().to_usize()
    } else {
        None
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::zero()
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Angle {}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Angle::Turns(a), Angle::Turns(b)) => a.cmp(b),
            (Angle::Radians(a), Angle::Radians(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Turns(t) => write!(f, "{} turn", format_rational(t)),
            Angle::Radians(x) => write!(f, "{x} rad"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn turns_reduce_into_unit_interval() {
        assert_eq!(Angle::turns(rat(5, 4)), Angle::turns(rat(1, 4)));
        assert_eq!(Angle::turns(rat(-1, 4)), Angle::turns(rat(3, 4)));
        assert!(Angle::turns(rat(2, 1)).is_zero());
    }

    #[test]
    fn exact_addition_stays_exact() {
        let a = Angle::half_turn().add(&Angle::half_turn());
        assert!(a.is_exact() && a.is_zero());
        let mixed = Angle::turns(rat(1, 4)).add(&Angle::radians(0.5));
        assert!(!mixed.is_exact());
        assert!((mixed.to_radians() - (TAU / 4.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(Angle::turns(rat(1, 4)).cis(), Complex64::new(0.0, 1.0));
        assert_eq!(Angle::half_turn().cis(), Complex64::new(-1.0, 0.0));
        let z = Angle::turns(rat(1, 3)).cis();
        assert!((z.re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn scale_counts_quanta() {
        assert_eq!(Angle::turns(rat(1, 3)).scale(3), Angle::zero());
        assert_eq!(Angle::radians(0.25).scale(0), Angle::zero());
    }
}
