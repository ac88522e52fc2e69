//! Stuff types: groupoids fibered over finite sets, stored as one skeletal
//! fiber per set size. Fibers are post-quotient, so a species `F` appears as
//! `|F_n|` points of mass `1/n!` over `n`.
//!
//! The encoding is cardinality-faithful: everything here (inner products,
//! evaluation, composition, the ladder operators) depends only on the
//! masses and phases of fiber points, not on how automorphisms map into `S_n`.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::groupoid::{GroupoidRepr, SkeletalGroupoid, StackyPoint};
use crate::scalar::{factorial, Angle, PhasedScalar, PowerSeries, Rational, Semiring};
use crate::species::Species;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuffType {
    fibers: Vec<SkeletalGroupoid>,
}

fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(factorial(n)))
}

impl StuffType {
    /// Fibers over sizes `0..=truncation`; missing fibers are empty.
    pub fn from_fibers(mut fibers: Vec<SkeletalGroupoid>, truncation: usize) -> Self {
        fibers.resize(truncation + 1, SkeletalGroupoid::empty());
        StuffType { fibers }
    }

    pub fn from_fn(truncation: usize, f: impl FnMut(usize) -> SkeletalGroupoid) -> Self {
        StuffType { fibers: (0..=truncation).map(f).collect() }
    }

    pub fn empty(truncation: usize) -> Self {
        Self::from_fibers(Vec::new(), truncation)
    }

    /// `|F_n|` points of mass `1/n!` over each `n`.
    pub fn from_species(species: &Species) -> Self {
        Self::from_fn(species.truncation(), |n| {
            let point = StackyPoint::new(inv_factorial(n), Angle::zero(), None).expect("positive mass");
            SkeletalGroupoid::from_weighted(vec![(point, species.counts()[n].clone())])
        })
    }

    /// `k`-tuples of equal-sized finite sets: over `n`, one point with
    /// automorphism group `S_n^k`, so cardinality `(1/n!)^k`.
    pub fn k_tuples(k: u32, truncation: usize) -> Self {
        Self::from_fn(truncation, |n| {
            let mass = (0..k).fold(Rational::from_integer(1.into()), |acc, _| acc * inv_factorial(n));
            SkeletalGroupoid::from_points(vec![StackyPoint::new(mass, Angle::zero(), None).expect("positive mass")])
        })
    }

    /// Singletons coloured by objects of `colours`: the fiber over `1` is `colours`.
    pub fn coloured_singleton(colours: &SkeletalGroupoid, truncation: usize) -> Self {
        Self::from_fn(truncation, |n| if n == 1 { colours.clone() } else { SkeletalGroupoid::empty() })
    }

    pub fn truncation(&self) -> usize {
        self.fibers.len() - 1
    }

    pub fn fibers(&self) -> &[SkeletalGroupoid] {
        &self.fibers
    }

    pub fn fiber(&self, n: usize) -> Option<&SkeletalGroupoid> {
        self.fibers.get(n)
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let t = truncation.min(self.truncation());
        StuffType { fibers: self.fibers[..=t].to_vec() }
    }

    /// Generating function: coefficient `n` is the groupoid cardinality of the fiber.
    pub fn cardinality(&self) -> PowerSeries<PhasedScalar> {
        PowerSeries::from_fn(self.truncation(), |n| self.fibers[n].cardinality())
    }

    pub fn sum(&self, other: &StuffType) -> StuffType {
        let t = self.truncation().min(other.truncation());
        Self::from_fn(t, |n| self.fibers[n].sum(&other.fibers[n]))
    }

    /// Over `n`: `⊔_k Ψ_k × Φ_{n−k}` (split the set, stuff each part).
    pub fn product(&self, other: &StuffType) -> StuffType {
        let t = self.truncation().min(other.truncation());
        Self::from_fn(t, |n| (0..=n).fold(SkeletalGroupoid::empty(), |acc, k| acc.sum(&self.fibers[k].product(&other.fibers[n - k]))))
    }

    pub fn pow(&self, k: u32) -> StuffType {
        let one = StuffType::from_species(&Species::one(self.truncation()));
        (0..k).fold(one, |acc, _| acc.product(self))
    }

    /// Annihilation `A`: adjoin a distinguished element. Over `n` there is one
    /// copy of `Ψ_{n+1}` per choice of that element; known one order less.
    pub fn annihilate(&self) -> StuffType {
        if self.truncation() == 0 {
            return StuffType::empty(0);
        }
        Self::from_fn(self.truncation() - 1, |n| self.fibers[n + 1].repeat(n + 1))
    }

    /// Creation `A* = Z·`: over `n`, the fiber `Ψ_{n−1}`; known one order further.
    pub fn create(&self) -> StuffType {
        Self::from_fn(self.truncation() + 1, |n| if n == 0 { SkeletalGroupoid::empty() } else { self.fibers[n - 1].clone() })
    }

    /// Field operator `Φ = A + A*`.
    pub fn field(&self) -> StuffType {
        self.annihilate().sum(&self.create())
    }

    /// Number operator `N = A*A`.
    pub fn number(&self) -> StuffType {
        self.annihilate().create()
    }

    pub fn conjugate(&self) -> StuffType {
        StuffType { fibers: self.fibers.iter().map(SkeletalGroupoid::conjugate).collect() }
    }

    /// Left action of a phase: every point gains `m`.
    pub fn phase_scale(&self, m: &Angle) -> StuffType {
        StuffType { fibers: self.fibers.iter().map(|f| f.rotate(m)).collect() }
    }

    /// Scalar product by a groupoid: each fiber is multiplied by `g`.
    pub fn groupoid_scale(&self, g: &SkeletalGroupoid) -> StuffType {
        StuffType { fibers: self.fibers.iter().map(|f| f.product(g)).collect() }
    }

    /// Phase `n·θ` on the fiber over `n`.
    pub fn rotate_by_size(&self, theta: &Angle) -> StuffType {
        StuffType { fibers: self.fibers.iter().enumerate().map(|(n, f)| f.rotate(&theta.scale(n as i64))).collect() }
    }

    /// `Ψ ∘ Φ` at the level of cardinalities. The fibers of the result are
    /// synthesized: one generalized point per term of each coefficient.
    pub fn compose(&self, inner: &StuffType) -> Result<StuffType> {
        if !inner.fibers[0].is_empty() {
            return Err(Error::ComposeConstant { constant: inner.fibers[0].cardinality().to_string() });
        }
        let series = self.cardinality().compose(&inner.cardinality())?;
        Ok(Self::from_cardinality(&series))
    }

    /// Synthesizes a stuff type whose fiber cardinalities are the given coefficients.
    pub fn from_cardinality(series: &PowerSeries<PhasedScalar>) -> StuffType {
        Self::from_fn(series.truncation(), |n| {
            let points = series.coeffs()[n]
                .terms()
                .map(|(angle, mag)| StackyPoint::new(mag.clone(), angle.clone(), None).expect("nonzero terms"))
                .collect();
            SkeletalGroupoid::from_points(points)
        })
    }

    /// Cardinality of `Ψ(Z₀)`, computed as `|Ψ|(|Z₀|)` on the truncated series.
    pub fn evaluate(&self, colours: &SkeletalGroupoid) -> PhasedScalar {
        self.cardinality().eval(&colours.cardinality())
    }

    pub fn to_json(&self) -> Value {
        let repr = StuffRepr {
            truncation: self.truncation(),
            fibers: self.fibers.iter().enumerate().map(|(n, f)| FiberRepr { n, points: GroupoidRepr::from(f).points }).collect(),
        };
        serde_json::to_value(repr).expect("plain data")
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let repr: StuffRepr = serde_json::from_value(value.clone()).map_err(|e| Error::Input(format!("stuff type JSON: {e}")))?;
        let mut fibers = vec![SkeletalGroupoid::empty(); repr.truncation + 1];
        for fiber in repr.fibers {
            if fiber.n > repr.truncation {
                return Err(Error::Input(format!("fiber n = {} beyond truncation", fiber.n)));
            }
            fibers[fiber.n] = GroupoidRepr { points: fiber.points }.try_into()?;
        }
        Ok(StuffType { fibers })
    }
}

#[derive(Serialize, Deserialize)]
struct FiberRepr {
    n: usize,
    points: Vec<crate::groupoid::PointRepr>,
}

#[derive(Serialize, Deserialize)]
struct StuffRepr {
    truncation: usize,
    fibers: Vec<FiberRepr>,
}

/// An inner-product groupoid, graded by the size of the shared underlying set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedGroupoid {
    grades: Vec<SkeletalGroupoid>,
}

impl GradedGroupoid {
    pub fn grades(&self) -> &[SkeletalGroupoid] {
        &self.grades
    }

    pub fn summed(&self) -> SkeletalGroupoid {
        self.grades.iter().fold(SkeletalGroupoid::empty(), |acc, g| acc.sum(g))
    }

    pub fn cardinality(&self) -> PhasedScalar {
        self.grades.iter().fold(PhasedScalar::zero_elem(), |acc, g| acc.plus(&g.cardinality()))
    }
}

/// The weak pullback `⟨Ψ, Φ⟩` of the two projections to finite sets.
///
/// Over `n`, a pair of points with automorphism groups `K_x`, `K_y` gives the
/// component `S_n//(K_x × K_y)` of cardinality `n!/(|K_x||K_y|)`; phases add.
pub fn inner_product(left: &StuffType, right: &StuffType) -> GradedGroupoid {
    let t = left.truncation().min(right.truncation());
    let grades = (0..=t)
        .map(|n| {
            let torsor = Rational::from_integer(BigInt::from(factorial(n)));
            left.fibers[n].product(&right.fibers[n]).scale_masses(&torsor)
        })
        .collect();
    GradedGroupoid { grades }
}

/// `⟨Ψ|Φ⟩ = ⟨Ψ̄, Φ⟩`, conjugate-linear in the left argument.
pub fn fock_inner(left: &StuffType, right: &StuffType) -> GradedGroupoid {
    inner_product(&left.conjugate(), right)
}

/// `Σ_n n!·aₙ·bₙ` on cardinality series: the decategorified inner product.
pub fn series_inner(a: &PowerSeries<PhasedScalar>, b: &PowerSeries<PhasedScalar>) -> PhasedScalar {
    let t = a.truncation().min(b.truncation());
    (0..=t).fold(PhasedScalar::zero_elem(), |acc, n| {
        acc.plus(&PhasedScalar::from_natural(&factorial(n)).times(&a.coeffs()[n].times(&b.coeffs()[n])))
    })
}

impl StuffType {
    /// Whether every fiber is empty.
    pub fn is_empty(&self) -> bool {
        self.fibers.iter().all(SkeletalGroupoid::is_empty)
    }

    /// Cardinality series of a phase-free stuff type as rationals.
    pub fn rational_cardinality(&self) -> Option<PowerSeries<Rational>> {
        let coeffs = self.fibers.iter().map(|f| f.cardinality().as_rational()).collect::<Option<Vec<_>>>()?;
        Some(PowerSeries::new(coeffs, self.truncation()))
    }

    pub fn point_count(&self) -> BigUint {
        self.fibers.iter().map(SkeletalGroupoid::point_count).fold(BigUint::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{weak_quotient, PermAction, Permutation};
    use crate::scalar::{rat, rat_int};
    use num_complex::Complex64;

    fn series(v: Vec<Rational>) -> PowerSeries<PhasedScalar> {
        let t = v.len() - 1;
        PowerSeries::new(v.into_iter().map(PhasedScalar::from).collect(), t)
    }

    fn swap_quotient() -> SkeletalGroupoid {
        let action = PermAction::new(3, vec![Permutation::transposition(3, 0, 1).unwrap()]).unwrap();
        weak_quotient(3, &action).unwrap()
    }

    #[test]
    fn sets_have_exponential_cardinality() {
        let e = StuffType::from_species(&Species::sets(8));
        assert_eq!(e.cardinality(), series((0..=8).map(inv_factorial).collect()));
    }

    #[test]
    fn k_tuples() {
        let t = StuffType::k_tuples(3, 5);
        let expected: Vec<_> = (0..=5).map(|n| inv_factorial(n) * inv_factorial(n) * inv_factorial(n)).collect();
        assert_eq!(t.cardinality(), series(expected));
        assert!(StuffType::empty(4).cardinality().is_zero());
    }

    #[test]
    fn species_embedding() {
        let z = StuffType::from_species(&Species::singleton(4));
        assert_eq!(z.fibers()[1], SkeletalGroupoid::point());
        let z3 = StuffType::from_species(&Species::singleton(6).pow(3));
        assert_eq!(z3.fibers()[3].point_count(), BigUint::from(6u8));
        assert_eq!(z3.fibers()[3].rational_cardinality(), Some(rat_int(1)));
    }

    #[test]
    fn inner_product_of_powers_of_z() {
        let z = Species::singleton(8);
        for n in 0..=6u32 {
            for m in 0..=6u32 {
                let a = StuffType::from_species(&z.pow(n));
                let b = StuffType::from_species(&z.pow(m));
                let card = inner_product(&a, &b).cardinality();
                let expected = if n == m { rat_int(BigInt::from(factorial(n as usize))) } else { rat_int(0) };
                assert_eq!(card.as_rational(), Some(expected));
            }
        }
    }

    #[test]
    fn cosh_and_sinh_are_orthogonal() {
        let even = StuffType::from_species(&Species::even_sets(10));
        let odd = StuffType::from_species(&Species::odd_sets(10));
        let ip = inner_product(&even, &odd);
        assert!(ip.summed().is_empty());
    }

    #[test]
    fn single_size_sets() {
        let e3 = StuffType::from_species(&Species::sets_of_size(3, 5));
        assert_eq!(inner_product(&e3, &e3).cardinality().as_rational(), Some(rat(1, 6)));
    }

    #[test]
    fn evaluation() {
        let colours = swap_quotient();
        let e = StuffType::from_species(&Species::sets(12));
        let expected = e.cardinality().map(|c| c.as_rational().unwrap()).eval(&rat(3, 2));
        assert_eq!(e.evaluate(&colours).as_rational(), Some(expected));

        let psi = StuffType::k_tuples(2, 4);
        assert_eq!(psi.evaluate(&SkeletalGroupoid::empty()).as_rational(), Some(rat_int(1)));

        let z = StuffType::from_species(&Species::singleton(4));
        assert_eq!(z.evaluate(&colours).as_rational(), Some(rat(3, 2)));
    }

    /// Explicit `E_n(X//G)`: `n`-tuples of colours modulo `Gⁿ ⋊ S_n`.
    fn coloured_sets_explicit(n: usize, x: usize, gens: &[Permutation]) -> Rational {
        let size = x.pow(n as u32);
        let digit = |idx: usize, i: usize| (idx / x.pow(i as u32)) % x;
        let encode = |ds: &[usize]| ds.iter().enumerate().map(|(i, d)| d * x.pow(i as u32)).sum::<usize>();
        let mut action_gens = Vec::new();
        for i in 0..n {
            for g in gens {
                action_gens.push(
                    Permutation::new(
                        (0..size)
                            .map(|idx| {
                                let mut ds: Vec<usize> = (0..n).map(|k| digit(idx, k)).collect();
                                ds[i] = g.apply(ds[i]);
                                encode(&ds)
                            })
                            .collect(),
                    )
                    .unwrap(),
                );
            }
        }
        for i in 0..n.saturating_sub(1) {
            action_gens.push(
                Permutation::new(
                    (0..size)
                        .map(|idx| {
                            let mut ds: Vec<usize> = (0..n).map(|k| digit(idx, k)).collect();
                            ds.swap(i, i + 1);
                            encode(&ds)
                        })
                        .collect(),
                )
                .unwrap(),
            );
        }
        let action = PermAction::new(size, action_gens).unwrap();
        weak_quotient(size, &action).unwrap().rational_cardinality().unwrap()
    }

    #[test]
    fn evaluation_matches_explicit_coloured_sets() {
        let swap = vec![Permutation::transposition(3, 0, 1).unwrap()];
        let e = StuffType::from_species(&Species::sets(4));
        let card = e.cardinality();
        for n in 0..=3 {
            let explicit = coloured_sets_explicit(n, 3, &swap);
            let power = (0..n).fold(rat_int(1), |acc, _| acc * rat(3, 2));
            assert_eq!(card.coeffs()[n].as_rational().map(|c| c * power), Some(explicit));
        }
    }

    #[test]
    fn composition_gives_bell_numbers() {
        let e = StuffType::from_species(&Species::sets(8));
        let e_plus = StuffType::from_species(&Species::nonempty_sets(8));
        let c = e.compose(&e_plus).unwrap();
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, b) in bell.iter().enumerate() {
            assert_eq!(c.cardinality().coeffs()[n].as_rational(), Some(rat_int(*b) * inv_factorial(n)));
        }
    }

    #[test]
    fn composition_identity_and_colouring() {
        let psi = StuffType::k_tuples(2, 6);
        let z = StuffType::from_species(&Species::singleton(6));
        assert_eq!(psi.compose(&z).unwrap().cardinality(), psi.cardinality());

        let colours = swap_quotient();
        let e = StuffType::from_species(&Species::sets(6));
        let c = e.compose(&StuffType::coloured_singleton(&colours, 6)).unwrap();
        for n in 0..=6 {
            let expected = (0..n).fold(rat_int(1), |acc, _| acc * rat(3, 2)) * inv_factorial(n);
            assert_eq!(c.cardinality().coeffs()[n].as_rational(), Some(expected));
        }
    }

    #[test]
    fn composition_needs_empty_inner_fiber() {
        let e = StuffType::from_species(&Species::sets(4));
        assert_eq!(e.compose(&e).unwrap_err().code(), "COMPOSE_CONST");
    }

    #[test]
    fn conjugation_and_fock_inner() {
        let z3 = StuffType::from_species(&Species::singleton(5).pow(3));
        let theta = Angle::turns(rat(1, 7));
        let phased = z3.phase_scale(&theta);
        assert_eq!(phased.conjugate().conjugate(), phased);
        let ip = fock_inner(&phased, &phased).cardinality();
        assert_eq!(ip.as_rational(), Some(rat_int(6)));
    }

    #[test]
    fn opposite_phases_interfere() {
        let point = |turns| StackyPoint::new(rat_int(1), Angle::turns(turns), None).unwrap();
        let fiber = SkeletalGroupoid::from_points(vec![point(rat_int(0)), point(rat(1, 2))]);
        let psi = StuffType::from_fibers(vec![SkeletalGroupoid::empty(), SkeletalGroupoid::empty(), fiber], 3);
        let card = psi.cardinality();
        let c2 = &card.coeffs()[2];
        assert_eq!(c2.len(), 2);
        assert_eq!(c2.h(), Complex64::new(0.0, 0.0));
        let z2 = StuffType::from_species(&Species::singleton(3).pow(2));
        assert_eq!(fock_inner(&z2, &psi).cardinality().h(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn scalar_actions() {
        let psi = StuffType::k_tuples(2, 5).phase_scale(&Angle::turns(rat(1, 5)));
        assert_eq!(psi.phase_scale(&Angle::zero()), psi);
        assert_eq!(psi.groupoid_scale(&SkeletalGroupoid::point()), psi);
        let m = Angle::turns(rat(1, 3));
        let lhs = psi.phase_scale(&m).cardinality();
        let rhs = psi.cardinality().scale(&PhasedScalar::term(rat_int(1), m).unwrap());
        assert_eq!(lhs, rhs);
        let g = swap_quotient();
        let scaled = psi.groupoid_scale(&g).cardinality();
        assert_eq!(scaled, psi.cardinality().scale(&g.cardinality()));
    }

    #[test]
    fn ladder_operators_commute_up_to_identity() {
        let psi = StuffType::k_tuples(2, 10).phase_scale(&Angle::turns(rat(1, 6)));
        let lhs = psi.create().annihilate().cardinality();
        let rhs = psi.annihilate().create().cardinality().add(&psi.cardinality());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn species_ladder_agrees_with_stuff_ladder() {
        let o = Species::orders(8);
        assert_eq!(StuffType::from_species(&o.derivative()).cardinality(), StuffType::from_species(&o).annihilate().cardinality());
        assert_eq!(StuffType::from_species(&o.shift()).cardinality(), StuffType::from_species(&o).create().cardinality());
    }

    #[test]
    fn json_round_trip() {
        let psi = StuffType::from_species(&Species::orders(4)).phase_scale(&Angle::turns(rat(1, 4)));
        let v = psi.to_json();
        assert_eq!(v["fibers"][3]["points"][0]["mass"], "1/6");
        assert_eq!(v["fibers"][3]["points"][0]["multiplicity"], "6");
        assert_eq!(StuffType::from_json(&v).unwrap(), psi);
    }
}
