//! Time evolution in Fock space.
//!
//! Free evolution rotates the fiber over `n` by `n·θ`. The perturbed
//! oscillator `H = N + V` with `V = Σ g_m φ^m/m!` is handled numerically:
//! a matrix exponential serves as the reference, and the Dyson series is
//! evaluated with iterated Gauss–Legendre quadrature over ordered simplices.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::diagrams;
use crate::error::{Error, Result};
use crate::scalar::{factorial, format_rational, rational_to_f64, Angle, Rational};
use crate::stufftype::StuffType;
use crate::weyl::{matrix_exp, FockMatrix, WeylElement};

pub const DEFAULT_QUADRATURE_NODES: usize = 32;
pub const MAX_DYSON_ORDER: usize = 4;
pub const MAX_DIAGRAM_ORDER: usize = 2;
const CUTOFF_PROBE: usize = 4;
const CUTOFF_SENSITIVITY: f64 = 1e-6;
const UNITARITY_TOLERANCE: f64 = 1e-8;

/// Sign of the exponent in the evolution operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `exp(−iTH)`
    #[default]
    Physics,
    /// `exp(+iTH)`
    Positive,
}

impl Convention {
    pub fn sign(self) -> f64 {
        match self {
            Convention::Physics => -1.0,
            Convention::Positive => 1.0,
        }
    }

    /// `±i`, the factor accompanying each insertion of `V` in the Dyson series.
    fn unit(self) -> Complex64 {
        Complex64::new(0.0, self.sign())
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Physics => "exp(-iTH)",
            Convention::Positive => "exp(+iTH)",
        }
    }
}

/// Free propagation: phase `θ` per quantum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeEvolution {
    pub time_angle: Angle,
}

impl FreeEvolution {
    pub fn new(time_angle: Angle) -> Self {
        FreeEvolution { time_angle }
    }

    /// Evolution for time `T` with unit frequency per quantum.
    pub fn for_time(time: f64, convention: Convention) -> Self {
        FreeEvolution { time_angle: Angle::radians(convention.sign() * time) }
    }

    pub fn inverse(&self) -> Self {
        FreeEvolution { time_angle: self.time_angle.neg() }
    }

    pub fn then(&self, other: &FreeEvolution) -> Self {
        FreeEvolution { time_angle: self.time_angle.add(&other.time_angle) }
    }

    pub fn apply(&self, psi: &StuffType) -> StuffType {
        free_evolve(psi, &self.time_angle)
    }
}

pub fn free_evolve(psi: &StuffType, theta: &Angle) -> StuffType {
    psi.rotate_by_size(theta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    /// `g_m` keyed by degree `m`.
    pub potential: BTreeMap<u32, f64>,
    pub total_time: f64,
    pub dyson_order: usize,
    pub fock_cutoff: usize,
    pub quadrature_nodes: usize,
    pub convention: Convention,
    /// Permits potentials with terms of degree below 3.
    pub allow_low_degree: bool,
}

impl PerturbationSpec {
    pub fn new(potential: BTreeMap<u32, f64>, total_time: f64, dyson_order: usize, fock_cutoff: usize) -> Self {
        PerturbationSpec {
            potential,
            total_time,
            dyson_order,
            fock_cutoff,
            quadrature_nodes: DEFAULT_QUADRATURE_NODES,
            convention: Convention::Physics,
            allow_low_degree: false,
        }
    }

    /// `V = g φ^m/m!`.
    pub fn monomial(degree: u32, coupling: f64, total_time: f64, dyson_order: usize, fock_cutoff: usize) -> Self {
        Self::new(BTreeMap::from([(degree, coupling)]), total_time, dyson_order, fock_cutoff)
    }

    pub fn max_degree(&self) -> u32 {
        self.active_terms().map(|(m, _)| m).max().unwrap_or(0)
    }

    fn active_terms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.potential.iter().filter(|(_, g)| **g != 0.0).map(|(m, g)| (*m, *g))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.total_time.is_finite() {
            return Err(Error::Input(format!("total time {} is not finite", self.total_time)));
        }
        if let Some((m, g)) = self.potential.iter().find(|(_, g)| !g.is_finite()) {
            return Err(Error::Input(format!("coupling g_{m} = {g} is not finite")));
        }
        if !self.allow_low_degree {
            if let Some((m, _)) = self.active_terms().find(|(m, _)| *m < 3) {
                return Err(Error::Input(format!("potential term of degree {m}; the minimum degree is 3")));
            }
        }
        if self.quadrature_nodes == 0 {
            return Err(Error::Input("at least one quadrature node is required".into()));
        }
        Ok(())
    }

    /// Matrix of `V` with entries exact up to rounding for every pair of
    /// basis states within the cutoff.
    pub fn potential_matrix(&self, cutoff: usize) -> Result<FockMatrix> {
        let mut v = FockMatrix::zeros(cutoff);
        for (m, g) in self.active_terms() {
            let inv = Rational::new(1.into(), BigInt::from(factorial(m as usize)));
            let term = WeylElement::<Rational>::field().pow(m).scale(&inv);
            let matrix = if m == 0 { FockMatrix::identity(cutoff) } else { term.to_matrix(cutoff)? };
            v = v.add(&matrix.scale(Complex64::new(g, 0.0)));
        }
        Ok(v)
    }

    pub fn hamiltonian(&self, cutoff: usize) -> Result<FockMatrix> {
        let number: Vec<Complex64> = (0..=cutoff).map(|n| Complex64::new(n as f64, 0.0)).collect();
        Ok(FockMatrix::diagonal(&number).add(&self.potential_matrix(cutoff)?))
    }

    /// The truncated evolution operator at the given cutoff.
    pub fn evolution_matrix(&self, cutoff: usize) -> Result<FockMatrix> {
        self.validate()?;
        let h = self.hamiltonian(cutoff)?;
        let u = matrix_exp(&h.scale(self.convention.unit()), self.total_time);
        let deviation = u.adjoint().mul(&u).add(&FockMatrix::identity(cutoff).scale(Complex64::new(-1.0, 0.0))).norm_inf();
        if deviation > UNITARITY_TOLERANCE {
            return Err(Error::Cutoff { cutoff, reason: format!("truncated evolution deviates from unitarity by {deviation:.3e}") });
        }
        Ok(u)
    }
}

fn check_external(k: usize, l: usize, cutoff: usize) -> Result<()> {
    if k > cutoff || l > cutoff {
        return Err(Error::Cutoff { cutoff, reason: format!("amplitude ⟨{k}|U|{l}⟩ lies outside the truncated space") });
    }
    Ok(())
}

/// `⟨e_k, U e_l⟩` from the matrix exponential. The cutoff is accepted only if
/// raising it by 4 moves the amplitude by at most `1e−6`.
pub fn exact_amplitude(k: usize, l: usize, spec: &PerturbationSpec) -> Result<Complex64> {
    check_external(k, l, spec.fock_cutoff)?;
    let amp = spec.evolution_matrix(spec.fock_cutoff)?.entry(k, l);
    let probe = spec.evolution_matrix(spec.fock_cutoff + CUTOFF_PROBE)?.entry(k, l);
    let shift = (amp - probe).norm();
    if shift > CUTOFF_SENSITIVITY {
        return Err(Error::Cutoff {
            cutoff: spec.fock_cutoff,
            reason: format!("amplitude moves by {shift:.3e} when the cutoff grows by {CUTOFF_PROBE}"),
        });
    }
    Ok(amp)
}

/// `Σ_k |⟨e_k, U e_l⟩|²` over the truncated space.
pub fn column_norm(l: usize, spec: &PerturbationSpec) -> Result<f64> {
    check_external(0, l, spec.fock_cutoff)?;
    let u = spec.evolution_matrix(spec.fock_cutoff)?;
    Ok((0..=spec.fock_cutoff).map(|k| u.entry(k, l).norm_sqr()).sum())
}

/// Nodes and weights of Gauss–Legendre quadrature on `[-1, 1]`.
struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    fn new(nodes: usize) -> Rule {
        let n = NonZeroUsize::new(nodes).expect("validated node count");
        Rule { pairs: GaussLegendre::new(n).as_node_weight_pairs().to_vec() }
    }

    /// `∫_{lower ≤ t_1 ≤ … ≤ t_n ≤ upper}` by iterated quadrature.
    ///
    /// `step(state, level, previous_time, time)` advances the state past
    /// insertion `level`; `finish(state, last_time)` closes the integrand.
    fn nested<S>(
        &self,
        n: usize,
        upper: f64,
        initial: S,
        step: &dyn Fn(&S, usize, f64, f64) -> S,
        finish: &dyn Fn(&S, f64) -> Complex64,
    ) -> Complex64 {
        self.level(0, n, 0.0, upper, &initial, step, finish)
    }

    #[allow(clippy::too_many_arguments)]
    fn level<S>(
        &self,
        level: usize,
        n: usize,
        lower: f64,
        upper: f64,
        state: &S,
        step: &dyn Fn(&S, usize, f64, f64) -> S,
        finish: &dyn Fn(&S, f64) -> Complex64,
    ) -> Complex64 {
        if level == n {
            return finish(state, lower);
        }
        let half = 0.5 * (upper - lower);
        let mid = 0.5 * (upper + lower);
        let mut acc = Complex64::zero();
        for &(x, w) in &self.pairs {
            let t = mid + half * x;
            let next = step(state, level, lower, t);
            acc += self.level(level + 1, n, t, upper, &next, step, finish) * (w * half);
        }
        acc
    }
}

fn phase(sign: f64, energy: f64, duration: f64) -> Complex64 {
    Complex64::from_polar(1.0, sign * energy * duration)
}

fn free_propagate(v: &[Complex64], sign: f64, duration: f64) -> Vec<Complex64> {
    v.iter().enumerate().map(|(n, z)| z * phase(sign, n as f64, duration)).collect()
}

fn check_dyson(k: usize, l: usize, spec: &PerturbationSpec) -> Result<()> {
    spec.validate()?;
    if spec.dyson_order > MAX_DYSON_ORDER {
        return Err(Error::Size(format!("Dyson order {} exceeds {MAX_DYSON_ORDER}", spec.dyson_order)));
    }
    check_external(k, l, spec.fock_cutoff)?;
    let needed = k + l + spec.dyson_order * spec.max_degree() as usize;
    if spec.fock_cutoff < needed {
        return Err(Error::Cutoff {
            cutoff: spec.fock_cutoff,
            reason: format!("order {} with degree {} needs a cutoff of at least {needed}", spec.dyson_order, spec.max_degree()),
        });
    }
    Ok(())
}

/// The order-`n` Dyson term
/// `(±i)ⁿ ∫_{0≤t₁≤…≤tₙ≤T} ⟨e_k| D(T−tₙ) V ⋯ V D(t₁) |e_l⟩`.
pub fn dyson_term(k: usize, l: usize, n: usize, spec: &PerturbationSpec) -> Result<Complex64> {
    check_dyson(k, l, spec)?;
    let v = spec.potential_matrix(spec.fock_cutoff)?;
    let rule = Rule::new(spec.quadrature_nodes);
    Ok(dyson_term_with(&rule, &v, k, l, n, spec))
}

fn dyson_term_with(rule: &Rule, v: &FockMatrix, k: usize, l: usize, n: usize, spec: &PerturbationSpec) -> Complex64 {
    let sign = spec.convention.sign();
    let mut start = vec![Complex64::zero(); v.dimension()];
    start[l] = Complex64::new(1.0, 0.0);
    let step = |psi: &Vec<Complex64>, _level: usize, prev: f64, t: f64| v.apply(&free_propagate(psi, sign, t - prev));
    let finish = |psi: &Vec<Complex64>, last: f64| psi[k] * phase(sign, k as f64, spec.total_time - last);
    let integral = rule.nested(n, spec.total_time, start, &step, &finish);
    spec.convention.unit().powi(n as i32) * integral
}

/// Dyson series through `spec.dyson_order`.
pub fn dyson_amplitude(k: usize, l: usize, spec: &PerturbationSpec) -> Result<Complex64> {
    check_dyson(k, l, spec)?;
    let v = spec.potential_matrix(spec.fock_cutoff)?;
    let rule = Rule::new(spec.quadrature_nodes);
    Ok((0..=spec.dyson_order).map(|n| dyson_term_with(&rule, &v, k, l, n, spec)).sum())
}

/// `∫_{0≤t₁≤…≤tₙ≤T} Π_j exp(±i (t_{j+1} − t_j) occupation_j)` with
/// `t₀ = 0`, `t_{n+1} = T`.
pub fn phase_integral(occupation: &[usize], spec: &PerturbationSpec) -> Complex64 {
    let rule = Rule::new(spec.quadrature_nodes);
    phase_integral_with(&rule, occupation, spec)
}

fn phase_integral_with(rule: &Rule, occupation: &[usize], spec: &PerturbationSpec) -> Complex64 {
    let sign = spec.convention.sign();
    let n = occupation.len() - 1;
    let step = |acc: &Complex64, level: usize, prev: f64, t: f64| acc * phase(sign, occupation[level] as f64, t - prev);
    let finish = |acc: &Complex64, last: f64| acc * phase(sign, occupation[n] as f64, spec.total_time - last);
    rule.nested(n, spec.total_time, Complex64::new(1.0, 0.0), &step, &finish)
}

/// Diagram classes sharing one occupation profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    pub occupation: Vec<usize>,
    pub aut_orders: Vec<u64>,
    /// `Σ 1/|Aut|` over the classes.
    pub diagram_weight: Rational,
    /// `√(k! l!)/gⁿ · ⟨e_k| V P_{j_{n−1}} V ⋯ P_{j_1} V |e_l⟩`, with `P_j`
    /// projecting onto `e_j`.
    pub operator_weight: f64,
    pub phase_integral: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub order: usize,
    pub dyson_term: Complex64,
    pub diagram_term: Complex64,
    pub profiles: Vec<ProfileReport>,
}

impl OrderReport {
    pub fn delta(&self) -> f64 {
        (self.dyson_term - self.diagram_term).norm()
    }

    pub fn max_weight_delta(&self) -> f64 {
        self.profiles.iter().map(|p| (rational_to_f64(&p.diagram_weight) - p.operator_weight).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub k: usize,
    pub l: usize,
    pub valence: u32,
    pub coupling: f64,
    pub total_time: f64,
    pub convention: Convention,
    pub orders: Vec<OrderReport>,
}

impl ExpansionReport {
    pub fn dyson_total(&self) -> Complex64 {
        self.orders.iter().map(|o| o.dyson_term).sum()
    }

    pub fn diagram_total(&self) -> Complex64 {
        self.orders.iter().map(|o| o.diagram_term).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "l": self.l,
            "valence": self.valence,
            "coupling": self.coupling,
            "total_time": self.total_time,
            "convention": self.convention.name(),
            "orders": self.orders.iter().map(|o| json!({
                "order": o.order,
                "dyson_term": complex_json(o.dyson_term),
                "diagram_term": complex_json(o.diagram_term),
                "delta": o.delta(),
                "profiles": o.profiles.iter().map(|p| json!({
                    "occupation": p.occupation,
                    "aut": p.aut_orders,
                    "diagram_weight": format_rational(&p.diagram_weight),
                    "operator_weight": p.operator_weight,
                    "phase_integral": complex_json(p.phase_integral),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "dyson_total": complex_json(self.dyson_total()),
            "diagram_total": complex_json(self.diagram_total()),
        })
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Cross-tabulates each Dyson term against the diagrams with `n` vertices
/// of the potential's valence.
pub fn perturbation_diagram_expansion(k: usize, l: usize, spec: &PerturbationSpec) -> Result<ExpansionReport> {
    check_dyson(k, l, spec)?;
    let mut active = spec.active_terms();
    let (valence, coupling) = match (active.next(), active.next()) {
        (Some(term), None) => term,
        (None, _) => return Err(Error::Unsupported("the expansion needs a nonzero potential".into())),
        _ => return Err(Error::Unsupported("the expansion is implemented for monomial potentials only".into())),
    };
    if spec.dyson_order > MAX_DIAGRAM_ORDER {
        return Err(Error::Size(format!("diagram expansion supports order ≤ {MAX_DIAGRAM_ORDER}")));
    }
    let v = spec.potential_matrix(spec.fock_cutoff)?;
    let rule = Rule::new(spec.quadrature_nodes);
    let norm = (factorial(k) * factorial(l)).to_f64().unwrap_or(f64::NAN).sqrt();
    let unit = spec.convention.unit();

    let mut orders = Vec::new();
    for n in 0..=spec.dyson_order {
        let groupoid = diagrams::enumerate(k, l, &vec![valence as usize; n])?;
        let mut by_profile: BTreeMap<Vec<usize>, Vec<&diagrams::DiagramClass>> = BTreeMap::new();
        for class in &groupoid.classes {
            by_profile.entry(class.occupation.clone()).or_default().push(class);
        }
        let scale = unit.powi(n as i32) * coupling.powi(n as i32) / norm;
        let mut diagram_term = Complex64::zero();
        let mut profiles = Vec::new();
        for (occupation, classes) in by_profile {
            let diagram_weight = classes.iter().fold(Rational::zero(), |acc, c| acc + c.weight());
            let operator_weight = projected_product(&v, &occupation) * norm / coupling.powi(n as i32);
            let integral = phase_integral_with(&rule, &occupation, spec);
            diagram_term += scale * rational_to_f64(&diagram_weight) * integral;
            profiles.push(ProfileReport {
                occupation,
                aut_orders: classes.iter().map(|c| c.aut_order.to_u64().unwrap_or(u64::MAX)).collect(),
                diagram_weight,
                operator_weight,
                phase_integral: integral,
            });
        }
        orders.push(OrderReport { order: n, dyson_term: dyson_term_with(&rule, &v, k, l, n, spec), diagram_term, profiles });
    }
    Ok(ExpansionReport { k, l, valence, coupling, total_time: spec.total_time, convention: spec.convention, orders })
}

/// `⟨e_{j_n}| V |e_{j_{n−1}}⟩ ⋯ ⟨e_{j_1}| V |e_{j_0}⟩`, real for real couplings.
fn projected_product(v: &FockMatrix, occupation: &[usize]) -> f64 {
    occupation.windows(2).map(|w| v.entry(w[1], w[0]).re).product()
}

/// Errors `|dyson − exact|` over the given couplings, with the least-squares
/// slope of `log error` against `log g`.
pub fn coupling_sweep(
    k: usize,
    l: usize,
    degree: u32,
    couplings: &[f64],
    total_time: f64,
    dyson_order: usize,
    fock_cutoff: usize,
) -> Result<(Vec<f64>, f64)> {
    let mut errors = Vec::with_capacity(couplings.len());
    for &g in couplings {
        let spec = PerturbationSpec::monomial(degree, g, total_time, dyson_order, fock_cutoff);
        errors.push((dyson_amplitude(k, l, &spec)? - exact_amplitude(k, l, &spec)?).norm());
    }
    let xs: Vec<f64> = couplings.iter().map(|g| g.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    Ok((errors, least_squares_slope(&xs, &ys)))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}
