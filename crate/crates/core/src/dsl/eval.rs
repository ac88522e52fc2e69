use std::collections::HashMap;

use super::ast::Expr;
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::species::Species;
use crate::stufftype::StuffType;
use crate::weyl::WeylElement;

/// A species when no phases are involved, a stuff type otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Species(Species),
    Stuff(StuffType),
}

impl Value {
    pub fn truncation(&self) -> usize {
        match self {
            Value::Species(s) => s.truncation(),
            Value::Stuff(s) => s.truncation(),
        }
    }

    pub fn truncate(&self, t: usize) -> Value {
        match self {
            Value::Species(s) => Value::Species(s.truncate(t)),
            Value::Stuff(s) => Value::Stuff(s.truncate(t)),
        }
    }

    pub fn into_stuff(self) -> StuffType {
        match self {
            Value::Species(s) => StuffType::from_species(&s),
            Value::Stuff(s) => s,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Env {
    vars: HashMap<String, Value>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: Value) {
        self.vars.insert(name.into(), value);
    }
}

/// Evaluates through `order`. Atoms are built with enough headroom that
/// derivatives still leave every requested coefficient known.
pub fn eval_expr(expr: &Expr, order: usize, env: &Env) -> Result<Value> {
    let value = eval_at(expr, order + expr.derivative_depth(), env)?;
    if value.truncation() < order {
        return Err(Error::Input(format!("expression is only determined through order {}, {order} requested", value.truncation())));
    }
    Ok(value.truncate(order))
}

fn operator_atom(expr: &Expr) -> Error {
    Error::Type(format!("`{expr}` is an operator; use it inside expect(...)"))
}

fn eval_at(expr: &Expr, t: usize, env: &Env) -> Result<Value> {
    use Value::{Species as Sp, Stuff as St};
    Ok(match expr {
        Expr::Z => Sp(Species::singleton(t)),
        Expr::E => Sp(Species::sets(t)),
        Expr::Eplus => Sp(Species::nonempty_sets(t)),
        Expr::O => Sp(Species::orders(t)),
        Expr::En(n) => Sp(Species::sets_of_size(*n as usize, t)),
        Expr::Nat(n) => Sp(Species::constant(*n, t)),
        Expr::Var(name) => env.vars.get(name).cloned().ok_or_else(|| Error::UnknownIdentifier { name: name.clone(), offset: 0 })?,
        Expr::Derivative(x) => match eval_at(x, t, env)? {
            Sp(s) => Sp(s.derivative()),
            St(s) => St(s.annihilate()),
        },
        Expr::Create(x) => match eval_at(x, t, env)? {
            Sp(s) => Sp(s.shift()),
            St(s) => St(s.create()),
        },
        Expr::Conj(x) => match eval_at(x, t, env)? {
            Sp(s) => Sp(s),
            St(s) => St(s.conjugate()),
        },
        Expr::Phase(x, angle) => St(eval_at(x, t, env)?.into_stuff().phase_scale(angle)),
        Expr::Sum(a, b) => match (eval_at(a, t, env)?, eval_at(b, t, env)?) {
            (Sp(x), Sp(y)) => Sp(x.sum(&y)),
            (x, y) => St(x.into_stuff().sum(&y.into_stuff())),
        },
        Expr::Product(a, b) => match (eval_at(a, t, env)?, eval_at(b, t, env)?) {
            (Sp(x), Sp(y)) => Sp(x.product(&y)),
            (x, y) => St(x.into_stuff().product(&y.into_stuff())),
        },
        Expr::Pow(a, n) => match eval_at(a, t, env)? {
            Sp(x) => Sp(x.pow(*n)),
            St(x) => St(x.pow(*n)),
        },
        Expr::Compose(a, b) => match (eval_at(a, t, env)?, eval_at(b, t, env)?) {
            (Sp(x), Sp(y)) => Sp(x.compose(&y)?),
            (x, y) => St(x.into_stuff().compose(&y.into_stuff())?),
        },
        Expr::OpA | Expr::OpAstar | Expr::OpPhi | Expr::OpN => return Err(operator_atom(expr)),
    })
}

/// Evaluates an operator expression built from `A`, `ASTAR`, `PHI`, `N`
/// and natural-number scalars.
pub fn eval_operator(expr: &Expr) -> Result<WeylElement<Rational>> {
    Ok(match expr {
        Expr::OpA => WeylElement::annihilation(),
        Expr::OpAstar => WeylElement::creation(),
        Expr::OpPhi => WeylElement::field(),
        Expr::OpN => WeylElement::number(),
        Expr::Nat(n) => WeylElement::scalar(Rational::from_integer((*n).into())),
        Expr::Sum(a, b) => eval_operator(a)?.add(&eval_operator(b)?),
        Expr::Product(a, b) => eval_operator(a)?.mul(&eval_operator(b)?),
        Expr::Pow(a, n) => eval_operator(a)?.pow(*n),
        other => {
            return Err(Error::Type(format!("`{other}` is not an operator expression (allowed: A, ASTAR, PHI, N, naturals, +, *, ^)")))
        }
    })
}
