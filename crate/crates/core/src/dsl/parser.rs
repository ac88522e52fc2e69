//! Recursive-descent parser.
//!
//! Binding strength from loosest to tightest: `+`, `*`, `^`, `∘`/`of`.
//! All binary operators associate to the left.

use num_bigint::BigInt;
use num_traits::Pow;

use super::ast::{DysonQuery, Expr, Query};
use super::lexer::{tokenize, Token, TokenKind};
use super::DEFAULT_ORDER;
use crate::error::{Error, Result};
use crate::evolution::Convention;
use crate::scalar::{Angle, Rational};

const RESERVED: &[&str] = &["Z", "E", "Eplus", "O", "En", "D", "A", "Astar", "Conj", "Phase", "ASTAR", "PHI", "N", "rad", "turns"];

const OPERAND_START: &[&str] = &["number", "identifier", "("];
const CONTINUATIONS: &[&str] = &["+", "*", "^", "∘"];

pub fn parse_expr(text: &str) -> Result<Expr> {
    parse_expr_with_vars(text, &[])
}

/// Parses an expression in which the given names are bound variables.
pub fn parse_expr_with_vars(text: &str, vars: &[&str]) -> Result<Expr> {
    let mut p = Parser::new(text, vars.iter().map(|v| v.to_string()).collect())?;
    let e = p.expr()?;
    p.expect_end(CONTINUATIONS)?;
    Ok(e)
}

pub fn parse_query(text: &str) -> Result<Query> {
    let mut p = Parser::new(text, Vec::new())?;
    let q = p.query()?;
    p.expect_end(&[])?;
    Ok(q)
}

/// `NAME = expr`, the unknown bound inside `expr`.
pub fn parse_equation(text: &str) -> Result<(String, Expr)> {
    let mut p = Parser::new(text, Vec::new())?;
    let eq = p.equation()?;
    p.expect_end(CONTINUATIONS)?;
    Ok(eq)
}

/// An angle literal: exact turns (`1/8`, `0.25`, `-1/3 turns`) or radians (`0.5 rad`).
pub fn parse_angle(text: &str) -> Result<Angle> {
    let mut p = Parser::new(text, Vec::new())?;
    let a = p.angle()?;
    p.expect_end(&["rad", "turns"])?;
    Ok(a)
}

/// Potential terms `m: g`, comma separated, optionally in brackets.
pub fn parse_potential(text: &str) -> Result<Vec<(u32, f64)>> {
    let mut p = Parser::new(text, Vec::new())?;
    let terms = if p.peek().kind == TokenKind::LBracket { p.potential()? } else { p.potential_terms(&TokenKind::Eof)? };
    p.expect_end(&[","])?;
    Ok(terms)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    vars: Vec<String>,
}

impl Parser {
    fn new(text: &str, vars: Vec<String>) -> Result<Parser> {
        Ok(Parser { tokens: tokenize(text)?, pos: 0, vars })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> Error {
        Error::Parse { offset: self.peek().offset, message: message.into(), expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn unexpected(&self, expected: &[&str]) -> Error {
        self.error(format!("unexpected {}", self.peek().kind.describe()), expected)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, alternatives: &[&str]) -> Result<()> {
        if self.eat(&kind) {
            return Ok(());
        }
        let mut expected = vec![kind.symbol()];
        expected.extend_from_slice(alternatives);
        Err(self.unexpected(&expected))
    }

    fn expect_end(&self, alternatives: &[&str]) -> Result<()> {
        if self.peek().kind == TokenKind::Eof {
            return Ok(());
        }
        let mut expected = alternatives.to_vec();
        expected.push("end of input");
        Err(self.unexpected(&expected))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut left = self.product()?;
        while self.eat(&TokenKind::Plus) {
            left = Expr::sum(left, self.product()?);
        }
        Ok(left)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut left = self.power()?;
        while self.eat(&TokenKind::Star) {
            left = Expr::product(left, self.power()?);
        }
        Ok(left)
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.composition()?;
        while self.eat(&TokenKind::Caret) {
            let n = self.natural("exponent")?;
            let n = u32::try_from(n).map_err(|_| self.error("exponent too large", &["number"]))?;
            base = Expr::pow(base, n);
        }
        Ok(base)
    }

    fn composition(&mut self) -> Result<Expr> {
        let mut left = self.primary()?;
        while self.eat(&TokenKind::Compose) {
            left = Expr::compose(left, self.primary()?);
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<Expr> {
        let token = self.peek().clone();
        match token.kind {
            TokenKind::Number(_) => Ok(Expr::Nat(self.natural("literal")?)),
            TokenKind::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(TokenKind::RParen, CONTINUATIONS)?;
                Ok(e)
            }
            TokenKind::Ident(name) => {
                self.advance();
                self.identifier(&name, token.offset)
            }
            _ => Err(self.unexpected(OPERAND_START)),
        }
    }

    fn identifier(&mut self, name: &str, offset: usize) -> Result<Expr> {
        let call = self.peek().kind == TokenKind::LParen;
        let unary = |ctor: fn(Box<Expr>) -> Expr, p: &mut Parser| -> Result<Expr> {
            p.expect(TokenKind::LParen, &[])?;
            let inner = p.expr()?;
            p.expect(TokenKind::RParen, CONTINUATIONS)?;
            Ok(ctor(Box::new(inner)))
        };
        match name {
            "Z" => Ok(Expr::Z),
            "E" => Ok(Expr::E),
            "Eplus" => Ok(Expr::Eplus),
            "O" => Ok(Expr::O),
            "ASTAR" => Ok(Expr::OpAstar),
            "PHI" => Ok(Expr::OpPhi),
            "N" => Ok(Expr::OpN),
            "A" if !call => Ok(Expr::OpA),
            "A" | "D" => unary(Expr::Derivative, self),
            "Astar" => unary(Expr::Create, self),
            "Conj" => unary(Expr::Conj, self),
            "En" => {
                self.expect(TokenKind::LParen, &[])?;
                let n = self.natural("set size")?;
                let n = u32::try_from(n).map_err(|_| self.error("set size too large", &["number"]))?;
                self.expect(TokenKind::RParen, &[])?;
                Ok(Expr::En(n))
            }
            "Phase" => {
                self.expect(TokenKind::LParen, &[])?;
                let inner = self.expr()?;
                self.expect(TokenKind::Comma, CONTINUATIONS)?;
                let angle = self.angle()?;
                self.expect(TokenKind::RParen, &[])?;
                Ok(Expr::Phase(Box::new(inner), angle))
            }
            "rad" | "turns" => Err(Error::Parse {
                offset,
                message: format!("`{name}` is an angle unit, not an expression"),
                expected: OPERAND_START.iter().map(|s| s.to_string()).collect(),
            }),
            _ if self.vars.iter().any(|v| v == name) => Ok(Expr::Var(name.to_string())),
            _ => Err(Error::UnknownIdentifier { name: name.to_string(), offset }),
        }
    }

    fn convention(&mut self) -> Result<Convention> {
        let convention = match &self.peek().kind {
            TokenKind::Ident(name) if name == "physics" => Convention::Physics,
            TokenKind::Ident(name) if name == "positive" => Convention::Positive,
            _ => return Err(self.unexpected(&["physics", "positive"])),
        };
        self.advance();
        Ok(convention)
    }

    fn natural(&mut self, what: &str) -> Result<u64> {
        match &self.peek().kind {
            TokenKind::Number(text) if text.bytes().all(|b| b.is_ascii_digit()) => {
                let value = text.parse::<u64>().map_err(|_| self.error(format!("{what} {text} is too large"), &["number"]))?;
                self.advance();
                Ok(value)
            }
            TokenKind::Number(text) => Err(self.error(format!("{what} must be a natural number, got {text}"), &["natural number"])),
            _ => Err(self.error(format!("expected a {what}, found {}", self.peek().kind.describe()), &["natural number"])),
        }
    }

    fn usize_arg(&mut self, what: &str) -> Result<usize> {
        let n = self.natural(what)?;
        usize::try_from(n).map_err(|_| self.error(format!("{what} too large"), &["number"]))
    }

    /// `['-'] number ['/' number]`, both exactly and as the nearest float.
    fn rational(&mut self) -> Result<(Rational, f64)> {
        let negative = self.eat(&TokenKind::Minus);
        let (mut exact, mut float) = self.number_literal(&["number", "-"])?;
        if self.eat(&TokenKind::Slash) {
            let (den, den_float) = self.number_literal(&["number"])?;
            if den == Rational::from_integer(0.into()) {
                return Err(self.error("zero denominator", &["nonzero number"]));
            }
            exact /= den;
            float /= den_float;
        }
        Ok(if negative { (-exact, -float) } else { (exact, float) })
    }

    fn number_literal(&mut self, expected: &[&str]) -> Result<(Rational, f64)> {
        let TokenKind::Number(text) = &self.peek().kind else {
            return Err(self.unexpected(expected));
        };
        let parsed = decimal(text).zip(text.parse::<f64>().ok());
        let value = parsed.ok_or_else(|| self.error("malformed number", &["number"]))?;
        self.advance();
        Ok(value)
    }

    fn real(&mut self) -> Result<f64> {
        let negative = self.eat(&TokenKind::Minus);
        let value = match &self.peek().kind {
            TokenKind::Number(text) => text.parse::<f64>().ok(),
            _ => return Err(self.unexpected(&["number", "-"])),
        };
        let value = value.ok_or_else(|| self.error("malformed number", &["number"]))?;
        self.advance();
        Ok(if negative { -value } else { value })
    }

    /// Exact turns by default; a `rad` suffix gives radians.
    fn angle(&mut self) -> Result<Angle> {
        let (value, float) = self.rational()?;
        match &self.peek().kind {
            TokenKind::Ident(unit) if unit == "rad" => {
                self.advance();
                Ok(Angle::radians(float))
            }
            TokenKind::Ident(unit) if unit == "turns" => {
                self.advance();
                Ok(Angle::turns(value))
            }
            _ => Ok(Angle::turns(value)),
        }
    }

    fn naturals_list(&mut self) -> Result<Vec<usize>> {
        self.expect(TokenKind::LBracket, &[])?;
        let mut items = Vec::new();
        if !self.eat(&TokenKind::RBracket) {
            loop {
                items.push(self.usize_arg("valence")?);
                if self.eat(&TokenKind::RBracket) {
                    break;
                }
                self.expect(TokenKind::Comma, &["]"])?;
            }
        }
        Ok(items)
    }

    fn potential(&mut self) -> Result<Vec<(u32, f64)>> {
        self.expect(TokenKind::LBracket, &[])?;
        let items = self.potential_terms(&TokenKind::RBracket)?;
        self.expect(TokenKind::RBracket, &[","])?;
        Ok(items)
    }

    fn potential_terms(&mut self, close: &TokenKind) -> Result<Vec<(u32, f64)>> {
        let mut items = Vec::new();
        if &self.peek().kind == close {
            return Ok(items);
        }
        loop {
            let m = self.natural("degree")?;
            let m = u32::try_from(m).map_err(|_| self.error("degree too large", &["number"]))?;
            self.expect(TokenKind::Colon, &[])?;
            items.push((m, self.real()?));
            if &self.peek().kind == close || !self.eat(&TokenKind::Comma) {
                return Ok(items);
            }
        }
    }

    fn equation(&mut self) -> Result<(String, Expr)> {
        let var = match self.peek().kind.clone() {
            TokenKind::Ident(v) if !RESERVED.contains(&v.as_str()) => v,
            TokenKind::Ident(v) => return Err(self.error(format!("`{v}` is reserved and cannot be the unknown"), &["identifier"])),
            _ => return Err(self.unexpected(&["identifier"])),
        };
        self.advance();
        self.expect(TokenKind::Equals, &[])?;
        self.vars.push(var.clone());
        let rhs = self.expr();
        self.vars.pop();
        Ok((var, rhs?))
    }

    fn optional_order(&mut self) -> Result<usize> {
        if self.eat(&TokenKind::Comma) {
            self.usize_arg("order")
        } else {
            Ok(DEFAULT_ORDER)
        }
    }

    fn query(&mut self) -> Result<Query> {
        const QUERIES: &[&str] = &["gf", "inner", "fock_inner", "vev", "diagrams", "expect", "solve", "evolve", "dyson"];
        let token = self.peek().clone();
        let TokenKind::Ident(name) = token.kind else {
            return Err(self.unexpected(QUERIES));
        };
        if !QUERIES.contains(&name.as_str()) {
            return Err(Error::Parse {
                offset: token.offset,
                message: format!("unknown query `{name}`"),
                expected: QUERIES.iter().map(|s| s.to_string()).collect(),
            });
        }
        self.advance();
        self.expect(TokenKind::LParen, &[])?;
        let q = match name.as_str() {
            "gf" => {
                let expr = self.expr()?;
                let order = self.optional_order()?;
                Query::Gf { expr, order }
            }
            "inner" | "fock_inner" => {
                let left = self.expr()?;
                self.expect(TokenKind::Comma, CONTINUATIONS)?;
                let right = self.expr()?;
                let order = self.optional_order()?;
                if name == "inner" {
                    Query::Inner { left, right, order }
                } else {
                    Query::FockInner { left, right, order }
                }
            }
            "vev" | "diagrams" => {
                let k = self.usize_arg("out-point count")?;
                self.expect(TokenKind::Comma, &[])?;
                let l = self.usize_arg("in-point count")?;
                self.expect(TokenKind::Comma, &[])?;
                let valences = self.naturals_list()?;
                if name == "vev" {
                    Query::Vev { k, l, valences }
                } else {
                    Query::Diagrams { k, l, valences }
                }
            }
            "expect" => {
                let k = self.usize_arg("out-state size")?;
                self.expect(TokenKind::Comma, &[])?;
                let operator = self.expr()?;
                self.expect(TokenKind::Comma, CONTINUATIONS)?;
                let l = self.usize_arg("in-state size")?;
                Query::Expect { k, operator, l }
            }
            "solve" => {
                let (var, rhs) = self.equation()?;
                let order = self.optional_order()?;
                Query::Solve { var, rhs, order }
            }
            "evolve" => {
                let expr = self.expr()?;
                self.expect(TokenKind::Comma, CONTINUATIONS)?;
                let angle = self.angle()?;
                let order = self.optional_order()?;
                Query::Evolve { expr, angle, order }
            }
            "dyson" => {
                let k = self.usize_arg("out-state size")?;
                self.expect(TokenKind::Comma, &[])?;
                let l = self.usize_arg("in-state size")?;
                self.expect(TokenKind::Comma, &[])?;
                let potential = self.potential()?;
                self.expect(TokenKind::Comma, &[])?;
                let time = self.real()?;
                self.expect(TokenKind::Comma, &[])?;
                let order = self.usize_arg("Dyson order")?;
                self.expect(TokenKind::Comma, &[])?;
                let cutoff = self.usize_arg("Fock cutoff")?;
                let convention = if self.eat(&TokenKind::Comma) { self.convention()? } else { Convention::Physics };
                Query::Dyson(DysonQuery { k, l, potential, time, order, cutoff, convention })
            }
            _ => unreachable!("query names are checked above"),
        };
        self.expect(TokenKind::RParen, &[","])?;
        Ok(q)
    }
}

/// Exact value of a decimal literal such as `12`, `0.25` or `1.5e-3`.
fn decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exponent.checked_sub(i32::try_from(frac.len()).ok()?)?;
    let ten = BigInt::from(10);
    let power = Pow::pow(&ten, scale.unsigned_abs());
    Some(if scale >= 0 { Rational::from_integer(digits * power) } else { Rational::new(digits, power) })
}
