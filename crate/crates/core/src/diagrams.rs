//! Feynman diagrams as objects of the inner-product groupoid
//! `⟨Z^k, (Φ^{m_1}//S_{m_1}) ⋯ (Φ^{m_v}//S_{m_v}) Z^l⟩`.
//!
//! A labelled diagram is a perfect matching on the half-edges: `l` incoming
//! points, the legs of each vertex, and `k` outgoing points. Incoming points
//! never pair with each other, nor do outgoing points; legs pair freely
//! (self-loops included). Vertices act in list order, the first one next to
//! the incoming points.
//!
//! The leg relabelling group `Π S_{m_i}` acts on matchings, external points
//! stay fixed. An orbit is determined by its multigraph: where each external
//! point goes, and how many edges join each pair of vertices (loops
//! included). For that multigraph
//! `|Aut| = Π_v 2^{loops_v}·loops_v! · Π_{v<w} e_{vw}!`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, format_rational, Rational};

pub const MAX_EXTERNAL: usize = 8;
pub const MAX_HALF_EDGES: usize = 24;

/// One half-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    In(usize),
    Vertex(usize, usize),
    Out(usize),
}

/// A perfect matching of half-edges, one pair per edge.
pub type Matching = Vec<(Endpoint, Endpoint)>;

impl Endpoint {
    fn to_json(self) -> Value {
        match self {
            Endpoint::In(i) => json!(["in", i]),
            Endpoint::Out(i) => json!(["out", i]),
            Endpoint::Vertex(v, leg) => json!(["v", v, leg]),
        }
    }

    /// Time layer: 0 for incoming points, `v + 1` for vertex `v`, `V + 1` for outgoing.
    fn layer(self, vertices: usize) -> usize {
        match self {
            Endpoint::In(_) => 0,
            Endpoint::Vertex(v, _) => v + 1,
            Endpoint::Out(_) => vertices + 1,
        }
    }
}

/// Where an external point is attached, up to leg relabelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Attachment {
    Vertex(usize),
    External(usize),
}

/// Isomorphism-class data of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Shape {
    /// target of each incoming point
    ins: Vec<Attachment>,
    /// source vertex of each outgoing point not fed directly by an incoming one
    outs: Vec<Option<usize>>,
    loops: Vec<usize>,
    /// edge multiplicities `between[v][w - v - 1]` for `v < w`
    between: Vec<Vec<usize>>,
}

/// One isomorphism class of diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramClass {
    /// A representative matching, each edge ordered by time layer.
    pub edges: Matching,
    pub aut_order: BigUint,
    /// Number of leg-labelled matchings in the class.
    pub orbit_size: BigUint,
    /// Strands alive in each of the `V + 1` intervals between layers,
    /// from the incoming side (`l`) to the outgoing side (`k`).
    pub occupation: Vec<usize>,
}

impl DiagramClass {
    pub fn weight(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.aut_order.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramGroupoid {
    pub k: usize,
    pub l: usize,
    pub valences: Vec<usize>,
    pub classes: Vec<DiagramClass>,
    /// Count of leg-labelled matchings, from the closed-form pairing count.
    pub labelled_count: BigUint,
}

impl DiagramGroupoid {
    /// `Σ 1/|Aut|` over classes.
    pub fn cardinality(&self) -> Rational {
        self.classes.iter().fold(Rational::zero(), |acc, c| acc + c.weight())
    }

    /// `labelled_count / Π m_i!`.
    pub fn cardinality_from_count(&self) -> Rational {
        Rational::new(BigInt::from(self.labelled_count.clone()), BigInt::from(leg_group_order(&self.valences)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "l": self.l,
            "valences": self.valences,
            "classes": self.classes.iter().map(|c| json!({
                "edges": c.edges.iter().map(|(a, b)| json!([a.to_json(), b.to_json()])).collect::<Vec<_>>(),
                "aut": big_json(&c.aut_order),
                "orbit_size": big_json(&c.orbit_size),
                "occupation": c.occupation,
            })).collect::<Vec<_>>(),
            "labelled_count": big_json(&self.labelled_count),
            "cardinality": format_rational(&self.cardinality()),
        })
    }
}

fn big_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

/// `Π m_i!`, the order of the leg relabelling group.
pub fn leg_group_order(valences: &[usize]) -> BigUint {
    valences.iter().map(|&m| factorial(m)).product()
}

fn check_scale(k: usize, l: usize, valences: &[usize]) -> Result<()> {
    let half_edges = k + l + valences.iter().sum::<usize>();
    if k > MAX_EXTERNAL || l > MAX_EXTERNAL {
        return Err(Error::Size(format!("at most {MAX_EXTERNAL} external points per side, got k={k}, l={l}")));
    }
    if half_edges > MAX_HALF_EDGES {
        return Err(Error::Size(format!("{half_edges} half-edges exceed the limit of {MAX_HALF_EDGES}")));
    }
    Ok(())
}

fn double_factorial_odd(n: usize) -> BigUint {
    // (n−1)!! for even n: number of perfect matchings on n points
    (1..n).step_by(2).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Number of leg-labelled diagrams:
/// `Σ_p C(k,p)·C(l,p)·p! · M!/(M−r)! · (M−r−1)!!` with `r = k + l − 2p`
/// external points attached to the `M` legs.
pub fn labelled_count(k: usize, l: usize, valences: &[usize]) -> BigUint {
    let legs: usize = valences.iter().sum();
    let mut total = BigUint::zero();
    for p in 0..=k.min(l) {
        let r = k + l - 2 * p;
        if r > legs || (legs - r) % 2 == 1 {
            continue;
        }
        let externals = binomial(k, p) * binomial(l, p) * factorial(p);
        let attach = factorial(legs) / factorial(legs - r);
        total += externals * attach * double_factorial_odd(legs - r);
    }
    total
}

/// Enumerates the isomorphism classes of diagrams with `l` incoming and
/// `k` outgoing points and vertices of the given valences.
pub fn enumerate(k: usize, l: usize, valences: &[usize]) -> Result<DiagramGroupoid> {
    check_scale(k, l, valences)?;
    let count = labelled_count(k, l, valences);
    let mut classes = Vec::new();
    if (k + l + valences.iter().sum::<usize>()).is_multiple_of(2) {
        let mut shapes = Vec::new();
        enumerate_shapes(k, l, valences, &mut shapes);
        classes = shapes.iter().map(|s| build_class(s, k, l, valences)).collect::<Vec<_>>();
        classes.sort_by(|a, b| a.edges.cmp(&b.edges));
    }
    let groupoid = DiagramGroupoid { k, l, valences: valences.to_vec(), classes, labelled_count: count };
    let orbit_total: BigUint = groupoid.classes.iter().map(|c| &c.orbit_size).sum();
    assert_eq!(
        orbit_total, groupoid.labelled_count,
        "orbit sizes must add up to the labelled count for k={k}, l={l}, valences={valences:?}"
    );
    Ok(groupoid)
}

/// Groupoid cardinality of the diagram groupoid, `labelled_count/Π m_i!`,
/// cross-checked against `Σ 1/|Aut|` over the enumerated classes.
pub fn vev(k: usize, l: usize, valences: &[usize]) -> Result<Rational> {
    let g = enumerate(k, l, valences)?;
    let card = g.cardinality();
    assert_eq!(card, g.cardinality_from_count(), "double count must agree");
    Ok(card)
}

fn enumerate_shapes(k: usize, l: usize, valences: &[usize], out: &mut Vec<Shape>) {
    let mut ins = Vec::with_capacity(l);
    let mut out_used = vec![false; k];
    let mut remaining = valences.to_vec();
    assign_ins(0, k, l, valences, &mut ins, &mut out_used, &mut remaining, out);
}

#[allow(clippy::too_many_arguments)]
fn assign_ins(
    i: usize,
    k: usize,
    l: usize,
    valences: &[usize],
    ins: &mut Vec<Attachment>,
    out_used: &mut Vec<bool>,
    remaining: &mut Vec<usize>,
    out: &mut Vec<Shape>,
) {
    if i == l {
        let mut outs = vec![None; k];
        assign_outs(0, valences, ins, out_used, &mut outs, remaining, out);
        return;
    }
    for j in 0..k {
        if !out_used[j] {
            out_used[j] = true;
            ins.push(Attachment::External(j));
            assign_ins(i + 1, k, l, valences, ins, out_used, remaining, out);
            ins.pop();
            out_used[j] = false;
        }
    }
    for v in 0..valences.len() {
        if remaining[v] > 0 {
            remaining[v] -= 1;
            ins.push(Attachment::Vertex(v));
            assign_ins(i + 1, k, l, valences, ins, out_used, remaining, out);
            ins.pop();
            remaining[v] += 1;
        }
    }
}

fn assign_outs(
    j: usize,
    valences: &[usize],
    ins: &[Attachment],
    out_used: &[bool],
    outs: &mut Vec<Option<usize>>,
    remaining: &mut Vec<usize>,
    out: &mut Vec<Shape>,
) {
    if j == outs.len() {
        let n = valences.len();
        let mut loops = vec![0; n];
        let mut between: Vec<Vec<usize>> = (0..n).map(|v| vec![0; n - v - 1]).collect();
        internal_edges(0, 0, remaining, &mut loops, &mut between, &mut |loops, between| {
            out.push(Shape { ins: ins.to_vec(), outs: outs.clone(), loops: loops.to_vec(), between: between.to_vec() });
        });
        return;
    }
    if out_used[j] {
        assign_outs(j + 1, valences, ins, out_used, outs, remaining, out);
        return;
    }
    for v in 0..valences.len() {
        if remaining[v] > 0 {
            remaining[v] -= 1;
            outs[j] = Some(v);
            assign_outs(j + 1, valences, ins, out_used, outs, remaining, out);
            outs[j] = None;
            remaining[v] += 1;
        }
    }
}

type ShapeSink<'a> = dyn FnMut(&[usize], &[Vec<usize>]) + 'a;

/// Distributes the remaining legs into loops and vertex–vertex edges.
/// `w` is the current partner of vertex `v` (`w == v` means loops).
fn internal_edges(
    v: usize,
    w: usize,
    remaining: &mut Vec<usize>,
    loops: &mut Vec<usize>,
    between: &mut Vec<Vec<usize>>,
    emit: &mut ShapeSink,
) {
    let n = remaining.len();
    if v == n {
        emit(loops, between);
        return;
    }
    if w == n {
        // every leg of v must be used by now
        if remaining[v] == 0 {
            internal_edges(v + 1, v + 1, remaining, loops, between, emit);
        }
        return;
    }
    if w == v {
        for count in 0..=remaining[v] / 2 {
            remaining[v] -= 2 * count;
            loops[v] = count;
            internal_edges(v, w + 1, remaining, loops, between, emit);
            loops[v] = 0;
            remaining[v] += 2 * count;
        }
        return;
    }
    let max = remaining[v].min(remaining[w]);
    for count in 0..=max {
        remaining[v] -= count;
        remaining[w] -= count;
        between[v][w - v - 1] = count;
        internal_edges(v, w + 1, remaining, loops, between, emit);
        between[v][w - v - 1] = 0;
        remaining[v] += count;
        remaining[w] += count;
    }
}

fn build_class(shape: &Shape, k: usize, l: usize, valences: &[usize]) -> DiagramClass {
    let n = valences.len();
    let mut next_leg = vec![0usize; n];
    let mut take = |v: usize| {
        let leg = next_leg[v];
        next_leg[v] += 1;
        Endpoint::Vertex(v, leg)
    };
    let mut edges = Vec::new();
    for (i, target) in shape.ins.iter().enumerate() {
        match *target {
            Attachment::External(j) => edges.push((Endpoint::In(i), Endpoint::Out(j))),
            Attachment::Vertex(v) => edges.push((Endpoint::In(i), take(v))),
        }
    }
    for (j, source) in shape.outs.iter().enumerate() {
        if let Some(v) = source {
            edges.push((take(*v), Endpoint::Out(j)));
        }
    }
    for v in 0..n {
        for _ in 0..shape.loops[v] {
            let a = take(v);
            let b = take(v);
            edges.push((a, b));
        }
        for (offset, &count) in shape.between[v].iter().enumerate() {
            let w = v + offset + 1;
            for _ in 0..count {
                let a = take(v);
                let b = take(w);
                edges.push((a, b));
            }
        }
    }
    edges.sort();

    let mut aut = BigUint::one();
    for &c in &shape.loops {
        aut *= BigUint::from(2u8).pow(c as u32) * factorial(c);
    }
    for row in &shape.between {
        for &c in row {
            aut *= factorial(c);
        }
    }
    let orbit_size = leg_group_order(valences) / &aut;

    let mut occupation = vec![0usize; n + 1];
    for (a, b) in &edges {
        let (la, lb) = (a.layer(n), b.layer(n));
        let (lo, hi) = (la.min(lb), la.max(lb));
        for slot in occupation.iter_mut().take(hi).skip(lo) {
            *slot += 1;
        }
    }
    debug_assert_eq!(occupation[0], l);
    debug_assert_eq!(occupation[n], k);

    DiagramClass { edges, aut_order: aut, orbit_size, occupation }
}

/// Leg-labelled matchings in lexicographic order, for small sizes.
///
/// Used to verify orbit sizes by brute force; exponential in the number of
/// half-edges.
pub fn labelled_matchings(k: usize, l: usize, valences: &[usize]) -> Result<Vec<Matching>> {
    check_scale(k, l, valences)?;
    let mut points: Vec<Endpoint> = (0..l).map(Endpoint::In).collect();
    for (v, &m) in valences.iter().enumerate() {
        points.extend((0..m).map(|leg| Endpoint::Vertex(v, leg)));
    }
    points.extend((0..k).map(Endpoint::Out));
    let mut used = vec![false; points.len()];
    let mut current = Vec::new();
    let mut out = Vec::new();
    match_rec(&points, &mut used, &mut current, &mut out);
    Ok(out)
}

fn match_rec(points: &[Endpoint], used: &mut Vec<bool>, current: &mut Matching, out: &mut Vec<Matching>) {
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(current.clone());
        return;
    };
    used[first] = true;
    for second in first + 1..points.len() {
        if used[second] || !may_pair(points[first], points[second]) {
            continue;
        }
        used[second] = true;
        current.push((points[first], points[second]));
        match_rec(points, used, current, out);
        current.pop();
        used[second] = false;
    }
    used[first] = false;
}

fn may_pair(a: Endpoint, b: Endpoint) -> bool {
    !matches!((a, b), (Endpoint::In(_), Endpoint::In(_)) | (Endpoint::Out(_), Endpoint::Out(_)))
}

/// Orbit sizes of the labelled matchings, grouped by their multigraph.
pub fn brute_force_orbits(k: usize, l: usize, valences: &[usize]) -> Result<Vec<(Matching, BigUint)>> {
    let matchings = labelled_matchings(k, l, valences)?;
    let n = valences.len();
    let mut orbits: BTreeMap<Matching, BigUint> = BTreeMap::new();
    for m in matchings {
        let shape = shape_of(&m, k, l, n);
        let rep = build_class(&shape, k, l, valences).edges;
        *orbits.entry(rep).or_insert_with(BigUint::zero) += 1u32;
    }
    Ok(orbits.into_iter().collect())
}

/// Representative of the class containing a leg-labelled matching.
pub fn canonical_representative(k: usize, l: usize, valences: &[usize], matching: &[(Endpoint, Endpoint)]) -> Result<Matching> {
    check_scale(k, l, valences)?;
    let mut seen = std::collections::BTreeSet::new();
    for &(a, b) in matching {
        if !may_pair(a.min(b), a.max(b)) {
            return Err(Error::Input(format!("{a:?} cannot pair with {b:?}")));
        }
        for e in [a, b] {
            let valid = match e {
                Endpoint::In(i) => i < l,
                Endpoint::Out(j) => j < k,
                Endpoint::Vertex(v, leg) => v < valences.len() && leg < valences[v],
            };
            if !valid || !seen.insert(e) {
                return Err(Error::Input(format!("endpoint {e:?} is out of range or used twice")));
            }
        }
    }
    if seen.len() != k + l + valences.iter().sum::<usize>() {
        return Err(Error::Input("the matching leaves half-edges unpaired".into()));
    }
    Ok(build_class(&shape_of(matching, k, l, valences.len()), k, l, valences).edges)
}

/// Outcome of [`random_checks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomChecks {
    pub count: usize,
    pub passed: usize,
}

/// Samples leg-labelled matchings and checks that each one, and a random
/// relabelling of its legs, lands on the same enumerated class.
pub fn random_checks<R: Rng>(k: usize, l: usize, valences: &[usize], count: usize, rng: &mut R) -> Result<RandomChecks> {
    let g = enumerate(k, l, valences)?;
    if g.classes.is_empty() {
        return Ok(RandomChecks { count: 0, passed: 0 });
    }
    let representatives: std::collections::BTreeSet<_> = g.classes.iter().map(|c| c.edges.clone()).collect();
    let mut passed = 0;
    for _ in 0..count {
        let matching = random_matching(k, l, valences, rng);
        let relabel: Vec<Vec<usize>> = valences
            .iter()
            .map(|&m| {
                let mut p: Vec<usize> = (0..m).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        let moved: Vec<_> = matching
            .iter()
            .map(|&(a, b)| {
                let f = |e: Endpoint| match e {
                    Endpoint::Vertex(v, leg) => Endpoint::Vertex(v, relabel[v][leg]),
                    other => other,
                };
                (f(a), f(b))
            })
            .collect();
        let rep = canonical_representative(k, l, valences, &matching)?;
        if representatives.contains(&rep) && canonical_representative(k, l, valences, &moved)? == rep {
            passed += 1;
        }
    }
    Ok(RandomChecks { count, passed })
}

fn random_matching<R: Rng>(k: usize, l: usize, valences: &[usize], rng: &mut R) -> Matching {
    let mut points: Vec<Endpoint> = (0..l).map(Endpoint::In).collect();
    for (v, &m) in valences.iter().enumerate() {
        points.extend((0..m).map(|leg| Endpoint::Vertex(v, leg)));
    }
    points.extend((0..k).map(Endpoint::Out));
    loop {
        let mut free = points.clone();
        free.shuffle(rng);
        let mut matching = Vec::new();
        while let Some(a) = free.pop() {
            let partners: Vec<usize> = (0..free.len()).filter(|&i| may_pair(a.min(free[i]), a.max(free[i]))).collect();
            let Some(&i) = partners.choose(rng) else { break };
            let b = free.swap_remove(i);
            matching.push((a.min(b), a.max(b)));
        }
        if free.is_empty() && matching.len() * 2 == points.len() {
            return matching;
        }
    }
}

fn shape_of(matching: &[(Endpoint, Endpoint)], k: usize, l: usize, n: usize) -> Shape {
    let mut ins = vec![Attachment::External(usize::MAX); l];
    let mut outs = vec![None; k];
    let mut loops = vec![0; n];
    let mut between: Vec<Vec<usize>> = (0..n).map(|v| vec![0; n - v - 1]).collect();
    for &(a, b) in matching {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        match (a, b) {
            (Endpoint::In(i), Endpoint::Out(j)) => ins[i] = Attachment::External(j),
            (Endpoint::In(i), Endpoint::Vertex(v, _)) => ins[i] = Attachment::Vertex(v),
            (Endpoint::Vertex(v, _), Endpoint::Out(j)) => outs[j] = Some(v),
            (Endpoint::Vertex(v, _), Endpoint::Vertex(w, _)) if v == w => loops[v] += 1,
            (Endpoint::Vertex(v, _), Endpoint::Vertex(w, _)) => between[v][w - v - 1] += 1,
            _ => unreachable!("in–in and out–out pairs are never generated"),
        }
    }
    Shape { ins, outs, loops, between }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn six_legged_vacuum_bubble() {
        let g = enumerate(0, 0, &[6]).unwrap();
        assert_eq!(g.labelled_count, BigUint::from(15u8));
        assert_eq!(g.classes.len(), 1);
        assert_eq!(g.classes[0].aut_order, BigUint::from(48u8));
        assert_eq!(g.cardinality(), rat(1, 48));
        assert_eq!(g.cardinality_from_count(), rat(15, 720));
    }

    #[test]
    fn four_legged_vacuum_bubble() {
        let g = enumerate(0, 0, &[4]).unwrap();
        assert_eq!(g.labelled_count, BigUint::from(3u8));
        assert_eq!(g.classes.len(), 1);
        assert_eq!(g.classes[0].aut_order, BigUint::from(8u8));
        assert_eq!(g.cardinality(), rat(1, 8));
    }

    #[test]
    fn odd_half_edges_give_nothing() {
        let g = enumerate(0, 0, &[3]).unwrap();
        assert!(g.classes.is_empty());
        assert_eq!(g.cardinality(), rat_int(0));
        assert_eq!(g.labelled_count, BigUint::zero());
    }

    #[test]
    fn single_quadratic_vertex_between_one_quanta() {
        let g = enumerate(1, 1, &[2]).unwrap();
        assert_eq!(g.labelled_count, BigUint::from(3u8));
        assert_eq!(vev(1, 1, &[2]).unwrap(), rat(3, 2));
        // pass-through with a loop (aut 2), and through the vertex (aut 1)
        let mut auts: Vec<_> = g.classes.iter().map(|c| c.aut_order.to_u64().unwrap()).collect();
        auts.sort();
        assert_eq!(auts, vec![1, 2]);
    }

    #[test]
    fn bare_inner_products() {
        for k in 0..=5 {
            for l in 0..=5 {
                let expected = if k == l { rat_int(BigInt::from(factorial(k))) } else { rat_int(0) };
                assert_eq!(vev(k, l, &[]).unwrap(), expected);
            }
        }
    }

    #[test]
    fn orbit_sizes_match_brute_force() {
        let cases: &[(usize, usize, &[usize])] = &[
            (0, 0, &[6]),
            (1, 1, &[2]),
            (2, 1, &[3]),
            (1, 1, &[3, 3]),
            (2, 2, &[2, 4]),
            (0, 2, &[4, 2]),
            (3, 1, &[2, 2, 2]),
            (0, 0, &[4, 4]),
            (1, 3, &[6]),
        ];
        for &(k, l, vs) in cases {
            let g = enumerate(k, l, vs).unwrap();
            let brute = brute_force_orbits(k, l, vs).unwrap();
            assert_eq!(brute.len(), g.classes.len(), "class count for {k},{l},{vs:?}");
            for (class, (rep, size)) in g.classes.iter().zip(&brute) {
                assert_eq!(&class.edges, rep);
                assert_eq!(&class.orbit_size, size);
            }
            let total: usize = labelled_matchings(k, l, vs).unwrap().len();
            assert_eq!(BigUint::from(total), g.labelled_count);
        }
    }

    #[test]
    fn representatives_respect_degrees() {
        let g = enumerate(2, 3, &[3, 4, 2]).unwrap();
        for class in &g.classes {
            let mut degree = vec![0usize; 3];
            for (a, b) in &class.edges {
                for e in [a, b] {
                    if let Endpoint::Vertex(v, _) = e {
                        degree[*v] += 1;
                    }
                }
            }
            assert_eq!(degree, vec![3, 4, 2]);
        }
    }

    #[test]
    fn agrees_with_normal_ordered_field_powers() {
        for k in 0..=4 {
            for l in 0..=4 {
                for m in 0..=6u32 {
                    let expected = crate::weyl::field_power_expect(k, m, l) / Rational::from_integer(BigInt::from(factorial(m as usize)));
                    assert_eq!(vev(k, l, &[m as usize]).unwrap(), expected, "k={k} l={l} m={m}");
                }
            }
        }
    }

    #[test]
    fn two_vertices_factor_through_a_resolution_of_identity() {
        for k in 0..=3 {
            for l in 0..=3 {
                for m1 in 0..=4usize {
                    for m2 in 0..=4usize {
                        let mut sum = Rational::zero();
                        for j in 0..=(l + m1) {
                            let inner = Rational::from_integer(BigInt::from(factorial(j)));
                            sum += vev(k, j, &[m2]).unwrap() * vev(j, l, &[m1]).unwrap() / inner;
                        }
                        assert_eq!(vev(k, l, &[m1, m2]).unwrap(), sum, "k={k} l={l} m={m1},{m2}");
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_random_checks_pass() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let report = random_checks(2, 1, &[3, 4, 2], 200, &mut rng).unwrap();
        assert_eq!(report, RandomChecks { count: 200, passed: 200 });
        assert!(canonical_representative(0, 0, &[2], &[(Endpoint::Vertex(0, 0), Endpoint::Vertex(0, 0))]).is_err());
    }

    #[test]
    fn scale_limits() {
        assert_eq!(enumerate(9, 0, &[]).unwrap_err().code(), "SIZE");
        assert_eq!(enumerate(0, 0, &[13, 12]).unwrap_err().code(), "SIZE");
    }

    #[test]
    fn occupation_profiles() {
        let g = enumerate(0, 0, &[3, 3]).unwrap();
        // theta graph (3 edges between) and dumbbell (loop + edge + loop)
        let mut profiles: Vec<_> = g.classes.iter().map(|c| (c.occupation.clone(), c.aut_order.clone())).collect();
        profiles.sort();
        assert_eq!(profiles, vec![(vec![0, 1, 0], BigUint::from(4u8)), (vec![0, 3, 0], BigUint::from(6u8))]);
    }

    #[test]
    fn json_dump_shape() {
        let v = enumerate(0, 0, &[6]).unwrap().to_json();
        assert_eq!(v["cardinality"], "1/48");
        assert_eq!(v["labelled_count"], 15);
        assert_eq!(v["classes"][0]["aut"], 48);
        assert_eq!(v["classes"][0]["edges"][0], json!([["v", 0, 0], ["v", 0, 1]]));
    }
}
