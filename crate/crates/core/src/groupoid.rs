//! Finite groupoids in skeletal form.
//!
//! A groupoid is recorded by its isomorphism classes only: each class is a
//! [`StackyPoint`] carrying the mass `1/|Aut(x)|` and a U(1) phase. Explicit
//! groupoids enter as action groupoids `X//G` of permutation actions, whose
//! skeleton is computed by orbit–stabilizer.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Angle, PhasedScalar, Rational, Semiring};

/// Closure of a generating set is refused past this many group elements.
pub const GROUP_ORDER_CAP: usize = 1_000_000;

/// One isomorphism class: mass `1/|Aut|` (any positive rational for
/// synthesized points) and a phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackyPoint {
    mass: Rational,
    phase: Angle,
    tag: Option<String>,
}

impl StackyPoint {
    pub fn new(mass: Rational, phase: Angle, tag: Option<String>) -> Result<Self> {
        if mass <= Rational::zero() {
            return Err(Error::Input(format!("stacky point mass must be positive, got {}", format_rational(&mass))));
        }
        Ok(StackyPoint { mass, phase, tag })
    }

    /// A point with automorphism group of order `aut_order`.
    pub fn with_aut_order(aut_order: u64) -> Result<Self> {
        if aut_order == 0 {
            return Err(Error::Input("automorphism group order must be positive".into()));
        }
        Self::new(Rational::new(BigInt::one(), BigInt::from(aut_order)), Angle::zero(), None)
    }

    pub fn mass(&self) -> &Rational {
        &self.mass
    }

    pub fn phase(&self) -> &Angle {
        &self.phase
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn rotated(&self, m: &Angle) -> Self {
        StackyPoint { phase: self.phase.add(m), ..self.clone() }
    }

    pub fn conjugate(&self) -> Self {
        StackyPoint { phase: self.phase.neg(), ..self.clone() }
    }

    /// Mass scaled by a positive rational.
    pub(crate) fn scaled(&self, factor: &Rational) -> Self {
        StackyPoint { mass: &self.mass * factor, ..self.clone() }
    }

    /// The product point: `Aut(x,y) = Aut(x)×Aut(y)`, phases compose.
    pub fn product(&self, other: &StackyPoint) -> StackyPoint {
        let tag = match (&self.tag, &other.tag) {
            (Some(a), Some(b)) => Some(format!("{a}×{b}")),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        StackyPoint { mass: &self.mass * &other.mass, phase: self.phase.add(&other.phase), tag }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.mass.cmp(&other.mass).then_with(|| self.phase.cmp(&other.phase)).then_with(|| self.tag.cmp(&other.tag))
    }
}

/// A finite multiset of stacky points in canonical order.
///
/// Identical points (same mass, phase and tag) are stored once with a
/// multiplicity, so fibers such as `n!` total orders stay small.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkeletalGroupoid {
    classes: Vec<(StackyPoint, BigUint)>,
}

impl SkeletalGroupoid {
    pub fn empty() -> Self {
        SkeletalGroupoid::default()
    }

    /// The terminal groupoid: one object, no nontrivial automorphisms.
    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// A discrete groupoid with `n` objects.
    pub fn discrete(n: usize) -> Self {
        Self::from_weighted(vec![(StackyPoint::with_aut_order(1).expect("order 1"), BigUint::from(n))])
    }

    pub fn from_points(points: Vec<StackyPoint>) -> Self {
        Self::from_weighted(points.into_iter().map(|p| (p, BigUint::one())).collect())
    }

    /// Points with multiplicities; equal points merge, zero multiplicities vanish.
    pub fn from_weighted(mut classes: Vec<(StackyPoint, BigUint)>) -> Self {
        classes.retain(|(_, m)| !m.is_zero());
        classes.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let mut merged: Vec<(StackyPoint, BigUint)> = Vec::with_capacity(classes.len());
        for (p, m) in classes {
            match merged.last_mut() {
                Some((q, k)) if *q == p => *k += m,
                _ => merged.push((p, m)),
            }
        }
        SkeletalGroupoid { classes: merged }
    }

    /// Distinct points with their multiplicities, in canonical order.
    pub fn classes(&self) -> &[(StackyPoint, BigUint)] {
        &self.classes
    }

    /// Every point, repeated by multiplicity.
    pub fn iter_points(&self) -> impl Iterator<Item = &StackyPoint> {
        self.classes.iter().flat_map(|(p, m)| std::iter::repeat_n(p, m.to_usize().expect("multiplicity fits in memory")))
    }

    /// Number of isomorphism classes, counted with multiplicity.
    pub fn point_count(&self) -> BigUint {
        self.classes.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `Σ phase·mass` over isomorphism classes.
    pub fn cardinality(&self) -> PhasedScalar {
        PhasedScalar::from_terms(
            self.classes.iter().map(|(p, m)| (&p.mass * Rational::from_integer(BigInt::from(m.clone())), p.phase.clone())),
        )
        .expect("masses are positive")
    }

    /// Disjoint union.
    pub fn sum(&self, other: &SkeletalGroupoid) -> SkeletalGroupoid {
        let mut classes = self.classes.clone();
        classes.extend(other.classes.iter().cloned());
        Self::from_weighted(classes)
    }

    /// Cartesian product; masses multiply and phases add.
    pub fn product(&self, other: &SkeletalGroupoid) -> SkeletalGroupoid {
        let mut classes = Vec::with_capacity(self.classes.len() * other.classes.len());
        for (p, m) in &self.classes {
            for (q, k) in &other.classes {
                classes.push((p.product(q), m * k));
            }
        }
        Self::from_weighted(classes)
    }

    /// Applies `f` to every point, keeping multiplicities.
    pub fn map_points(&self, f: impl Fn(&StackyPoint) -> StackyPoint) -> SkeletalGroupoid {
        Self::from_weighted(self.classes.iter().map(|(p, m)| (f(p), m.clone())).collect())
    }

    pub fn rotate(&self, m: &Angle) -> SkeletalGroupoid {
        self.map_points(|p| p.rotated(m))
    }

    pub fn conjugate(&self) -> SkeletalGroupoid {
        self.map_points(StackyPoint::conjugate)
    }

    /// `n` disjoint copies.
    pub fn repeat(&self, n: usize) -> SkeletalGroupoid {
        let n = BigUint::from(n);
        Self::from_weighted(self.classes.iter().map(|(p, m)| (p.clone(), m * &n)).collect())
    }

    pub(crate) fn scale_masses(&self, factor: &Rational) -> SkeletalGroupoid {
        self.map_points(|p| p.scaled(factor))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GroupoidRepr::from(self)).expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let repr: GroupoidRepr = serde_json::from_value(value.clone()).map_err(|e| Error::Input(format!("groupoid JSON: {e}")))?;
        repr.try_into()
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct PointRepr {
    pub mass: String,
    pub phase_turns: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_radians: Option<f64>,
    #[serde(default)]
    pub tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<String>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GroupoidRepr {
    pub points: Vec<PointRepr>,
}

impl PointRepr {
    pub(crate) fn new(p: &StackyPoint, multiplicity: &BigUint) -> Self {
        let (phase_turns, phase_radians) = match &p.phase {
            a if a.is_zero() => (None, None),
            Angle::Turns(t) => (Some(format_rational(t)), None),
            Angle::Radians(x) => (None, Some(*x)),
        };
        PointRepr {
            mass: format_rational(&p.mass),
            phase_turns,
            phase_radians,
            tag: p.tag.clone(),
            multiplicity: (!multiplicity.is_one()).then(|| multiplicity.to_string()),
        }
    }

    pub(crate) fn into_class(self) -> Result<(StackyPoint, BigUint)> {
        let phase = match (self.phase_turns, self.phase_radians) {
            (Some(t), None) => Angle::turns(parse_rational(&t)?),
            (None, Some(x)) => Angle::radians(x),
            (None, None) => Angle::zero(),
            (Some(_), Some(_)) => return Err(Error::Input("point has both phase_turns and phase_radians".into())),
        };
        let multiplicity = match self.multiplicity {
            Some(m) => m.parse::<BigUint>().map_err(|_| Error::Input(format!("bad multiplicity {m:?}")))?,
            None => BigUint::one(),
        };
        Ok((StackyPoint::new(parse_rational(&self.mass)?, phase, self.tag)?, multiplicity))
    }
}

impl From<&SkeletalGroupoid> for GroupoidRepr {
    fn from(g: &SkeletalGroupoid) -> Self {
        GroupoidRepr { points: g.classes.iter().map(|(p, m)| PointRepr::new(p, m)).collect() }
    }
}

impl TryFrom<GroupoidRepr> for SkeletalGroupoid {
    type Error = Error;

    fn try_from(r: GroupoidRepr) -> Result<Self> {
        let classes = r.points.into_iter().map(PointRepr::into_class).collect::<Result<_>>()?;
        Ok(SkeletalGroupoid::from_weighted(classes))
    }
}

/// A permutation of `0..n` in one-line notation: `i ↦ images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Input(format!("not a bijection of 0..{n}: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Transposition of `a` and `b` on `0..n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::Input(format!("transposition ({a} {b}) outside 0..{n}")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Permutation(images))
    }

    /// The cycle `c[0] → c[1] → … → c[0]` on `0..n`.
    pub fn cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &from) in cycle.iter().enumerate() {
            let to = cycle[(i + 1) % cycle.len()];
            if from >= n || to >= n {
                return Err(Error::Input(format!("cycle {cycle:?} outside 0..{n}")));
            }
            images[from] = to;
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }
}

/// A permutation group acting on `0..domain_size`, given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermAction {
    domain_size: usize,
    generators: Vec<Permutation>,
}

impl PermAction {
    pub fn new(domain_size: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != domain_size) {
            return Err(Error::Input(format!("generator {:?} does not act on a {domain_size}-element set", g.images())));
        }
        Ok(PermAction { domain_size, generators })
    }

    /// Validates raw image lists and builds the action.
    pub fn from_images(domain_size: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        let gens = generators.into_iter().map(Permutation::new).collect::<Result<_>>()?;
        Self::new(domain_size, gens)
    }

    pub fn trivial(domain_size: usize) -> Self {
        PermAction { domain_size, generators: Vec::new() }
    }

    /// The full symmetric group on the domain.
    pub fn symmetric(domain_size: usize) -> Self {
        let mut gens = Vec::new();
        if domain_size >= 2 {
            gens.push(Permutation::transposition(domain_size, 0, 1).expect("in range"));
            let cycle: Vec<usize> = (0..domain_size).collect();
            gens.push(Permutation::cycle(domain_size, &cycle).expect("in range"));
        }
        PermAction { domain_size, generators: gens }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All group elements by breadth-first closure over generator products.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.domain_size);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id.clone()]);
        let mut out = vec![id];
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose(&g);
                if seen.insert(h.clone()) {
                    if seen.len() > GROUP_ORDER_CAP {
                        return Err(Error::Size(format!("generated group exceeds {GROUP_ORDER_CAP} elements")));
                    }
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(out)
    }

    pub fn group_order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    /// Orbits in order of their smallest element; each orbit sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.domain_size];
        let mut orbits = Vec::new();
        for start in 0..self.domain_size {
            if assigned[start] {
                continue;
            }
            assigned[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for g in &self.generators {
                    let y = g.apply(x);
                    if !assigned[y] {
                        assigned[y] = true;
                        orbit.push(y);
                        queue.push_back(y);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }
}

/// Skeleton of the action groupoid `objects // G`: one point per orbit with
/// mass `|orbit|/|G| = 1/|Stab|`, tagged by the orbit representative.
pub fn skeletonize(objects: &[String], action: &PermAction) -> Result<SkeletalGroupoid> {
    if objects.len() != action.domain_size() {
        return Err(Error::Input(format!("{} objects but the action is on {} points", objects.len(), action.domain_size())));
    }
    let order = action.group_order()?;
    let points = action
        .orbits()
        .into_iter()
        .map(|orbit| {
            let stabilizer = order / orbit.len();
            StackyPoint::with_aut_order(stabilizer as u64).map(|p| p.with_tag(objects[orbit[0]].clone()))
        })
        .collect::<Result<_>>()?;
    Ok(SkeletalGroupoid::from_points(points))
}

/// The weak quotient `X//G` of an untagged `set_size`-element set.
pub fn weak_quotient(set_size: usize, action: &PermAction) -> Result<SkeletalGroupoid> {
    if set_size != action.domain_size() {
        return Err(Error::Input(format!("set of size {set_size} but the action is on {} points", action.domain_size())));
    }
    let order = action.group_order()?;
    let points =
        action.orbits().into_iter().map(|orbit| StackyPoint::with_aut_order((order / orbit.len()) as u64)).collect::<Result<_>>()?;
    Ok(SkeletalGroupoid::from_points(points))
}

/// `|G|` as a rational, for cardinality identities.
pub fn group_order_rational(action: &PermAction) -> Result<Rational> {
    Ok(Rational::from_integer(BigInt::from(action.group_order()?)))
}

impl SkeletalGroupoid {
    /// Cardinality as a rational, when all phases vanish.
    pub fn rational_cardinality(&self) -> Option<Rational> {
        self.cardinality().as_rational()
    }

    /// Cardinality with phases forgotten.
    pub fn total_mass(&self) -> Rational {
        self.cardinality().total_magnitude()
    }

    /// Whether the cardinality is zero as a formal phased scalar.
    pub fn is_null(&self) -> bool {
        self.cardinality().is_zero_elem()
    }
}
