use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::{Complex, Complex64};
use num_traits::Zero;
use serde_json::{json, Value};

use super::{format_rational, is_nonnegative, Angle, Rational, Semiring, ToComplex, ToJson};
use crate::error::{Error, Result};

/// A formal sum `Σ rᵢ ⊗ θᵢ` in `ℝ⁺ ⊗ U(1)` with rational magnitudes.
///
/// Terms with equal angles merge; zero magnitudes are dropped. No other
/// rewriting happens, so cancellation between opposite phases is only
/// visible after applying [`h`](PhasedScalar::h).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhasedScalar {
    terms: BTreeMap<Angle, Rational>,
}

impl PhasedScalar {
    pub fn term(magnitude: Rational, angle: Angle) -> Result<Self> {
        if !is_nonnegative(&magnitude) {
            return Err(Error::Input(format!("phased scalar magnitude must be nonnegative, got {}", format_rational(&magnitude))));
        }
        let mut out = PhasedScalar::default();
        out.push(magnitude, angle);
        Ok(out)
    }

    /// A phase-free nonnegative rational.
    pub fn real(magnitude: Rational) -> Result<Self> {
        Self::term(magnitude, Angle::zero())
    }

    /// Builds from raw terms, merging equal angles.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Angle)>,
    {
        let mut out = PhasedScalar::default();
        for (mag, angle) in terms {
            out = out.plus(&PhasedScalar::term(mag, angle)?);
        }
        Ok(out)
    }

    fn push(&mut self, magnitude: Rational, angle: Angle) {
        if magnitude.is_zero() {
            return;
        }
        let slot = self.terms.entry(angle).or_insert_with(Rational::zero);
        *slot += magnitude;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Angle, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when every term has zero phase.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (angle, mag) = self.terms.iter().next()?;
                angle.is_zero().then(|| mag.clone())
            }
            _ => None,
        }
    }

    /// The homomorphism `h : ℝ⁺⊗U(1) → ℂ`.
    pub fn h(&self) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, (angle, mag)| acc + angle.cis() * super::rational_to_f64(mag))
    }

    /// Exact image under `h` when every angle is a multiple of a quarter turn.
    pub fn h_exact(&self) -> Option<Complex<Rational>> {
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        for (angle, mag) in &self.terms {
            match angle.quarter()? {
                0 => re += mag,
                1 => im += mag,
                2 => re -= mag,
                _ => im -= mag,
            }
        }
        Some(Complex::new(re, im))
    }

    /// Negates every phase (complex conjugation after `h`).
    pub fn conjugate(&self) -> Self {
        let mut out = PhasedScalar::default();
        for (angle, mag) in &self.terms {
            out.push(mag.clone(), angle.neg());
        }
        out
    }

    /// Multiplies by the pure phase `m`.
    pub fn rotate(&self, m: &Angle) -> Self {
        let mut out = PhasedScalar::default();
        for (angle, mag) in &self.terms {
            out.push(mag.clone(), angle.add(m));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Result<Self> {
        if !is_nonnegative(r) {
            return Err(Error::Input("cannot scale a phased scalar by a negative rational".into()));
        }
        let mut out = PhasedScalar::default();
        for (angle, mag) in &self.terms {
            out.push(mag * r, angle.clone());
        }
        Ok(out)
    }

    /// Sum of magnitudes; the cardinality with all phases forgotten.
    pub fn total_magnitude(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, m| acc + m)
    }
}

impl Semiring for PhasedScalar {
    fn zero_elem() -> Self {
        PhasedScalar::default()
    }

    fn one_elem() -> Self {
        let mut out = PhasedScalar::default();
        out.push(Rational::from_integer(1.into()), Angle::zero());
        out
    }

    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (angle, mag) in &other.terms {
            out.push(mag.clone(), angle.clone());
        }
        out
    }

    fn times(&self, other: &Self) -> Self {
        let mut out = PhasedScalar::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.push(x * y, a.add(b));
            }
        }
        out
    }

    fn from_natural(n: &BigUint) -> Self {
        let mut out = PhasedScalar::default();
        out.push(Rational::from_integer(BigInt::from(n.clone())), Angle::zero());
        out
    }
}

impl ToComplex for PhasedScalar {
    fn to_complex(&self) -> Complex64 {
        self.h()
    }
}

impl ToJson for PhasedScalar {
    fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(angle, mag)| match angle {
                    Angle::Turns(_) => json!({
                        "magnitude": format_rational(mag),
                        "phase_turns": angle.to_json(),
                    }),
                    Angle::Radians(x) => json!({
                        "magnitude": format_rational(mag),
                        "phase_radians": x,
                    }),
                })
                .collect(),
        )
    }
}

impl From<Rational> for PhasedScalar {
    /// Panics on a negative rational.
    fn from(r: Rational) -> Self {
        PhasedScalar::real(r).expect("phased scalars carry nonnegative magnitudes")
    }
}

impl fmt::Display for PhasedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (angle, mag) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if angle.is_zero() {
                write!(f, "{}", format_rational(mag))?;
            } else {
                write!(f, "{}⊗[{}]", format_rational(mag), angle)?;
            }
        }
        Ok(())
    }
}
