use std::fmt;

use crate::evolution::Convention;
use crate::scalar::{format_rational, Angle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// The singleton `Z`.
    Z,
    /// Finite sets.
    E,
    /// Nonempty finite sets.
    Eplus,
    /// Total orders.
    O,
    /// Sets of exactly `n` elements.
    En(u32),
    Nat(u64),
    Var(String),
    Derivative(Box<Expr>),
    Create(Box<Expr>),
    Conj(Box<Expr>),
    Phase(Box<Expr>, Angle),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Compose(Box<Expr>, Box<Expr>),
    OpA,
    OpAstar,
    OpPhi,
    OpN,
}

impl Expr {
    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Expr, b: Expr) -> Expr {
        Expr::Product(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: u32) -> Expr {
        Expr::Pow(Box::new(a), n)
    }

    pub fn compose(a: Expr, b: Expr) -> Expr {
        Expr::Compose(Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Sum(..) => 1,
            Expr::Product(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Compose(..) => 4,
            _ => 5,
        }
    }

    /// Longest chain of nested derivatives; each one costs an order of truncation.
    pub fn derivative_depth(&self) -> usize {
        match self {
            Expr::Derivative(x) => 1 + x.derivative_depth(),
            Expr::Create(x) | Expr::Conj(x) | Expr::Phase(x, _) | Expr::Pow(x, _) => x.derivative_depth(),
            Expr::Sum(a, b) | Expr::Product(a, b) | Expr::Compose(a, b) => a.derivative_depth().max(b.derivative_depth()),
            _ => 0,
        }
    }

    pub fn has_phase(&self) -> bool {
        match self {
            Expr::Phase(..) => true,
            Expr::Derivative(x) | Expr::Create(x) | Expr::Conj(x) | Expr::Pow(x, _) => x.has_phase(),
            Expr::Sum(a, b) | Expr::Product(a, b) | Expr::Compose(a, b) => a.has_phase() || b.has_phase(),
            _ => false,
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    fn write_binary(&self, f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr) -> fmt::Result {
        let p = self.precedence();
        a.write_operand(f, a.precedence() < p)?;
        write!(f, "{op}")?;
        b.write_operand(f, b.precedence() <= p)
    }
}

pub fn render_angle(angle: &Angle) -> String {
    match angle {
        Angle::Turns(t) => format_rational(t),
        Angle::Radians(r) => format!("{r:?} rad"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Z => write!(f, "Z"),
            Expr::E => write!(f, "E"),
            Expr::Eplus => write!(f, "Eplus"),
            Expr::O => write!(f, "O"),
            Expr::En(n) => write!(f, "En({n})"),
            Expr::Nat(n) => write!(f, "{n}"),
            Expr::Var(name) => write!(f, "{name}"),
            Expr::Derivative(x) => write!(f, "D({x})"),
            Expr::Create(x) => write!(f, "Astar({x})"),
            Expr::Conj(x) => write!(f, "Conj({x})"),
            Expr::Phase(x, a) => write!(f, "Phase({x}, {})", render_angle(a)),
            Expr::Sum(a, b) => self.write_binary(f, a, " + ", b),
            Expr::Product(a, b) => self.write_binary(f, a, "*", b),
            Expr::Compose(a, b) => self.write_binary(f, a, " ∘ ", b),
            Expr::Pow(a, n) => {
                a.write_operand(f, a.precedence() < self.precedence())?;
                write!(f, "^{n}")
            }
            Expr::OpA => write!(f, "A"),
            Expr::OpAstar => write!(f, "ASTAR"),
            Expr::OpPhi => write!(f, "PHI"),
            Expr::OpN => write!(f, "N"),
        }
    }
}

/// A computation request.
#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Gf { expr: Expr, order: usize },
    Inner { left: Expr, right: Expr, order: usize },
    FockInner { left: Expr, right: Expr, order: usize },
    Vev { k: usize, l: usize, valences: Vec<usize> },
    Diagrams { k: usize, l: usize, valences: Vec<usize> },
    Expect { k: usize, operator: Expr, l: usize },
    Solve { var: String, rhs: Expr, order: usize },
    Evolve { expr: Expr, angle: Angle, order: usize },
    Dyson(DysonQuery),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DysonQuery {
    pub k: usize,
    pub l: usize,
    /// `(m, g_m)` pairs for `V = Σ g_m φ^m/m!`.
    pub potential: Vec<(u32, f64)>,
    pub time: f64,
    pub order: usize,
    pub cutoff: usize,
    pub convention: Convention,
}

impl Query {
    pub fn name(&self) -> &'static str {
        match self {
            Query::Gf { .. } => "gf",
            Query::Inner { .. } => "inner",
            Query::FockInner { .. } => "fock_inner",
            Query::Vev { .. } => "vev",
            Query::Diagrams { .. } => "diagrams",
            Query::Expect { .. } => "expect",
            Query::Solve { .. } => "solve",
            Query::Evolve { .. } => "evolve",
            Query::Dyson(_) => "dyson",
        }
    }
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Gf { expr, order } => write!(f, "gf({expr}, {order})"),
            Query::Inner { left, right, order } => write!(f, "inner({left}, {right}, {order})"),
            Query::FockInner { left, right, order } => write!(f, "fock_inner({left}, {right}, {order})"),
            Query::Vev { k, l, valences } => write!(f, "vev({k}, {l}, [{}])", list(valences)),
            Query::Diagrams { k, l, valences } => write!(f, "diagrams({k}, {l}, [{}])", list(valences)),
            Query::Expect { k, operator, l } => write!(f, "expect({k}, {operator}, {l})"),
            Query::Solve { var, rhs, order } => write!(f, "solve({var} = {rhs}, {order})"),
            Query::Evolve { expr, angle, order } => write!(f, "evolve({expr}, {}, {order})", render_angle(angle)),
            Query::Dyson(d) => {
                let potential: Vec<String> = d.potential.iter().map(|(m, g)| format!("{m}: {g:?}")).collect();
                write!(f, "dyson({}, {}, [{}], {:?}, {}, {}", d.k, d.l, potential.join(", "), d.time, d.order, d.cutoff)?;
                match d.convention {
                    Convention::Physics => write!(f, ")"),
                    Convention::Positive => write!(f, ", positive)"),
                }
            }
        }
    }
}
