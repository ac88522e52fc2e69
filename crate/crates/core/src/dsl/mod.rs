//! Expression language and query evaluation.
//!
//! Results are JSON objects carrying the query kind under `"query"` and the
//! normalized query text under `"input"`. Exact values are fraction strings;
//! complex values are `[re, im]` pairs accompanied by a `"tolerance"`.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};

pub use ast::{DysonQuery, Expr, Query};
pub use eval::{eval_expr, eval_operator, Env, Value};
pub use parser::{parse_angle, parse_equation, parse_expr, parse_expr_with_vars, parse_potential, parse_query};

use crate::diagrams;
use crate::error::{Error, Result};
use crate::evolution::{self, complex_json, PerturbationSpec};
use crate::scalar::{factorial, format_rational, PhasedScalar, Rational};
use crate::species::{solve_fixed_point, Species};
use crate::stufftype::{fock_inner, inner_product, GradedGroupoid, StuffType};
use crate::weyl::WeylElement;

pub const DEFAULT_ORDER: usize = 10;
pub const MAX_ORDER: usize = 200;
/// Tolerance attached to complex values obtained from exact phases.
pub const PHASE_TOLERANCE: f64 = 1e-12;
/// Tolerance attached to Dyson and matrix-exponential amplitudes.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-6;

/// Parses and evaluates a query in one step.
pub fn run(text: &str) -> Result<Json> {
    eval_query(&parse_query(text)?)
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::Size(format!("order {order} exceeds the limit of {MAX_ORDER}")));
    }
    Ok(())
}

pub fn eval_query(query: &Query) -> Result<Json> {
    let mut body = match query {
        Query::Gf { expr, order } => {
            check_order(*order)?;
            series_fields(&eval_expr(expr, *order, &Env::new())?)
        }
        Query::Inner { left, right, order } => inner_fields(left, right, *order, false)?,
        Query::FockInner { left, right, order } => inner_fields(left, right, *order, true)?,
        Query::Vev { k, l, valences } => {
            let g = diagrams::enumerate(*k, *l, valences)?;
            let mut m = Map::new();
            m.insert("k".into(), json!(k));
            m.insert("l".into(), json!(l));
            m.insert("valences".into(), json!(valences));
            m.insert("cardinality".into(), json!(format_rational(&g.cardinality())));
            m.insert("labelled_count".into(), g.to_json()["labelled_count"].clone());
            m.insert("classes".into(), json!(g.classes.len()));
            m
        }
        Query::Diagrams { k, l, valences } => match diagrams::enumerate(*k, *l, valences)?.to_json() {
            Json::Object(m) => m,
            _ => unreachable!("diagram dumps are objects"),
        },
        Query::Expect { k, operator, l } => {
            let w = eval_operator(operator)?;
            let mut m = Map::new();
            m.insert("k".into(), json!(k));
            m.insert("l".into(), json!(l));
            m.insert("normal_order".into(), json!(w.to_string()));
            m.insert("value".into(), json!(format_rational(&expectation(&w, *k, *l))));
            m
        }
        Query::Solve { var, rhs, order } => {
            check_order(*order)?;
            let solution = solve_fixed_point(
                |current| {
                    let mut env = Env::new();
                    env.bind(var.clone(), Value::Species(current.clone()));
                    match eval_expr(rhs, *order, &env)? {
                        Value::Species(s) => Ok(s),
                        Value::Stuff(_) => Err(Error::Unsupported("solve handles phase-free equations only".into())),
                    }
                },
                *order,
            )?;
            let mut m = series_fields(&Value::Species(solution));
            m.insert("var".into(), json!(var));
            m
        }
        Query::Evolve { expr, angle, order } => {
            check_order(*order)?;
            let psi = eval_expr(expr, *order, &Env::new())?.into_stuff();
            let mut m = series_fields(&Value::Stuff(evolution::free_evolve(&psi, angle)));
            m.insert("angle".into(), angle.to_json());
            m
        }
        Query::Dyson(d) => dyson_fields(d)?,
    };
    let mut out = Map::new();
    out.insert("query".into(), json!(query.name()));
    out.insert("input".into(), json!(query.to_string()));
    out.append(&mut body);
    Ok(Json::Object(out))
}

fn series_fields(value: &Value) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("order".into(), json!(value.truncation()));
    match value {
        Value::Species(s) => {
            m.insert("type".into(), json!("species"));
            m.insert("coeffs".into(), json!(s.gf().coeffs().iter().map(format_rational).collect::<Vec<_>>()));
            m.insert("counts".into(), json!(s.counts().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
        }
        Value::Stuff(s) => {
            let series = s.cardinality();
            m.insert("type".into(), json!("stuff"));
            m.insert("coeffs".into(), json!(series.coeffs().iter().map(phased_string).collect::<Vec<_>>()));
            m.insert("complex".into(), json!(series.coeffs().iter().map(|c| complex_json(c.h())).collect::<Vec<_>>()));
            m.insert("tolerance".into(), json!(PHASE_TOLERANCE));
        }
    }
    m
}

fn phased_string(c: &PhasedScalar) -> String {
    match c.as_rational() {
        Some(r) => format_rational(&r),
        None => c.to_string(),
    }
}

fn inner_fields(left: &Expr, right: &Expr, order: usize, conjugate_left: bool) -> Result<Map<String, Json>> {
    check_order(order)?;
    let a: StuffType = eval_expr(left, order, &Env::new())?.into_stuff();
    let b: StuffType = eval_expr(right, order, &Env::new())?.into_stuff();
    let groupoid: GradedGroupoid = if conjugate_left { fock_inner(&a, &b) } else { inner_product(&a, &b) };
    let total = groupoid.cardinality();
    let mut m = Map::new();
    m.insert("order".into(), json!(order));
    m.insert("cardinality".into(), json!(phased_string(&total)));
    m.insert("complex".into(), complex_json(total.h()));
    m.insert("tolerance".into(), json!(PHASE_TOLERANCE));
    m.insert("grades".into(), json!(groupoid.grades().iter().map(|g| phased_string(&g.cardinality())).collect::<Vec<_>>()));
    Ok(m)
}

/// `⟨z^k, W z^l⟩` with `⟨zⁿ, zᵐ⟩ = n!·δ`.
pub fn expectation(w: &WeylElement<Rational>, k: usize, l: usize) -> Rational {
    let mut total = Rational::from_integer(0.into());
    for (&(i, j), c) in w.terms() {
        let (i, j) = (i as usize, j as usize);
        if j > l || l - j + i != k {
            continue;
        }
        let falling = factorial(l) / factorial(l - j);
        total += c * Rational::from_integer((falling * factorial(k)).into());
    }
    total
}

fn dyson_fields(d: &DysonQuery) -> Result<Map<String, Json>> {
    let mut potential = BTreeMap::new();
    for &(m, g) in &d.potential {
        if potential.insert(m, g).is_some() {
            return Err(Error::Input(format!("degree {m} appears twice in the potential")));
        }
    }
    let mut spec = PerturbationSpec::new(potential, d.time, d.order, d.cutoff);
    spec.convention = d.convention;
    let dyson = evolution::dyson_amplitude(d.k, d.l, &spec)?;
    let exact = evolution::exact_amplitude(d.k, d.l, &spec)?;
    let terms = (0..=d.order).map(|n| evolution::dyson_term(d.k, d.l, n, &spec).map(complex_json)).collect::<Result<Vec<_>>>()?;
    let expansion = if d.potential.iter().filter(|(_, g)| *g != 0.0).count() == 1 && d.order <= evolution::MAX_DIAGRAM_ORDER {
        evolution::perturbation_diagram_expansion(d.k, d.l, &spec).map(|r| r.to_json()).unwrap_or(Json::Null)
    } else {
        Json::Null
    };
    let mut m = Map::new();
    m.insert("convention".into(), json!(spec.convention.name()));
    m.insert("dyson".into(), complex_json(dyson));
    m.insert("exact".into(), complex_json(exact));
    m.insert("delta".into(), json!((dyson - exact).norm()));
    m.insert("terms".into(), json!(terms));
    m.insert("tolerance".into(), json!(AMPLITUDE_TOLERANCE));
    m.insert("diagram_expansion".into(), expansion);
    Ok(m)
}

/// Convenience for callers holding a species directly.
pub fn species_json(s: &Species) -> Json {
    Json::Object(series_fields(&Value::Species(s.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_solve() {
        let out = run("solve(B = Z + B^2, 8)").unwrap();
        let coeffs: Vec<&str> = out["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        assert_eq!(coeffs, vec!["0", "1", "1", "2", "5", "14", "42", "132", "429"]);
        assert_eq!(out["query"], "solve");
        assert_eq!(out["input"], "solve(B = Z + B^2, 8)");
    }

    #[test]
    fn inner_of_powers() {
        assert_eq!(run("inner(Z^3, Z^3, 5)").unwrap()["cardinality"], "6");
        assert_eq!(run("inner(Z^2, Z^3, 6)").unwrap()["cardinality"], "0");
    }

    #[test]
    fn vev_query() {
        let out = run("vev(0, 0, [6])").unwrap();
        assert_eq!(out["cardinality"], "1/48");
        assert_eq!(out["labelled_count"], 15);
        assert_eq!(out["classes"], 1);
    }

    #[test]
    fn expect_matches_field_powers() {
        for (k, m, l) in [(0usize, 4u32, 0usize), (1, 3, 2), (2, 2, 2), (3, 1, 2)] {
            let out = run(&format!("expect({k}, PHI^{m}, {l})")).unwrap();
            let expected = crate::weyl::field_power_expect(k, m, l);
            assert_eq!(out["value"], format_rational(&expected));
        }
        assert_eq!(run("expect(3, N, 3)").unwrap()["value"], "18");
    }

    #[test]
    fn compose_constant_is_reported() {
        assert_eq!(run("gf(E of E, 6)").unwrap_err().code(), "COMPOSE_CONST");
    }

    #[test]
    fn evolve_and_fock_inner() {
        let out = run("evolve(Z^2, 1/8, 3)").unwrap();
        let c = &out["complex"][2];
        assert!((c[0].as_f64().unwrap() - 0.0).abs() < 1e-12);
        assert!((c[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
        let inner = run("fock_inner(Phase(Z, 1/4), Phase(Z, 1/4), 2)").unwrap();
        assert_eq!(inner["cardinality"], "1");
    }

    #[test]
    fn dyson_query() {
        let out = run("dyson(1, 0, [3: 0.05], 0.5, 2, 16)").unwrap();
        assert!(out["delta"].as_f64().unwrap() < 1e-4);
        assert_eq!(out["terms"].as_array().unwrap().len(), 3);
        assert!(out["diagram_expansion"].is_object());
        assert_eq!(run("dyson(1, 0, [2: 0.05], 0.5, 2, 16)").unwrap_err().code(), "INPUT");
    }

    #[test]
    fn positive_convention_conjugates_amplitudes() {
        let physics = run("dyson(1, 0, [3: 0.1], 0.5, 2, 16)").unwrap();
        let positive = run("dyson(1, 0, [3: 0.1], 0.5, 2, 16, positive)").unwrap();
        assert_eq!(positive["input"], "dyson(1, 0, [3: 0.1], 0.5, 2, 16, positive)");
        assert_eq!(positive["convention"], "exp(+iTH)");
        for key in ["dyson", "exact"] {
            let (p, q) = (&physics[key], &positive[key]);
            assert!((p[0].as_f64().unwrap() - q[0].as_f64().unwrap()).abs() < 1e-12);
            assert!((p[1].as_f64().unwrap() + q[1].as_f64().unwrap()).abs() < 1e-12);
        }
        assert_eq!(run("dyson(1, 0, [3: 0.1], 0.5, 2, 16, sideways)").unwrap_err().code(), "PARSE");
    }

    #[test]
    fn size_limits() {
        assert_eq!(run("gf(E, 100000)").unwrap_err().code(), "SIZE");
        assert_eq!(run("vev(9, 0, [1])").unwrap_err().code(), "SIZE");
    }
}
