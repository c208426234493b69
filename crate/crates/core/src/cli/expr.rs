//! Polynomial expressions on the command line.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' uint)?
//! base   := uint | ident | '(' expr ')'
//! ```
//!
//! The identifier `p` is the uniformizer π (the ring's own `p^{1/p^a}`, or
//! `ζ_p - 1` over the cyclotomic base); integer literals are plain integers.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::Prime;
use crate::fpt::max_terms_limit;
use crate::poly::{MixedPoly, Monomial, Uniformizer};

/// Reserved name of the uniformizer.
pub const UNIFORMIZER: &str = "p";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Int(BigInt),
    Uniformizer,
    Var { name: String, offset: usize },
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Dot,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Num(src[start..i].parse().expect("digits")),
                    offset: start,
                });
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    offset: start,
                });
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'.' => Tok::Dot,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push(Token { tok, offset: start });
        i += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        offset: src.len(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(PolyExpr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<PolyExpr> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let n = self.exponent()?;
        if self.peek().tok == Tok::Caret {
            return Err(syntax(self.peek().offset, "chained exponents need parentheses"));
        }
        Ok(PolyExpr::Pow(Box::new(base), n))
    }

    fn exponent(&mut self) -> Result<u32> {
        let t = self.bump();
        let bad = |kind| Error::BadExponent { offset: t.offset, kind };
        match &t.tok {
            Tok::Num(n) => {
                if matches!(self.peek().tok, Tok::Slash | Tok::Dot) {
                    return Err(bad("fractional"));
                }
                u32::try_from(n).map_err(|_| Error::Overflow("an exponent"))
            }
            Tok::Minus => Err(bad("negative")),
            Tok::Ident(_) => Err(bad("symbolic")),
            Tok::LParen => {
                // classify the parenthesized group before rejecting it
                let start = self.pos;
                let mut depth = 1;
                while depth > 0 {
                    match self.bump().tok {
                        Tok::LParen => depth += 1,
                        Tok::RParen => depth -= 1,
                        Tok::Eof => return Err(syntax(t.offset, "unclosed `(` in exponent")),
                        _ => {}
                    }
                }
                let inner: Vec<&Tok> = self.toks[start..self.pos - 1].iter().map(|t| &t.tok).collect();
                match inner.as_slice() {
                    [Tok::Num(n)] => u32::try_from(n).map_err(|_| Error::Overflow("an exponent")),
                    s if s.iter().any(|t| matches!(t, Tok::Slash | Tok::Dot)) => Err(bad("fractional")),
                    [Tok::Minus, ..] => Err(bad("negative")),
                    _ => Err(bad("symbolic")),
                }
            }
            Tok::Eof => Err(syntax(t.offset, "expected an exponent, found end of input")),
            _ => Err(syntax(t.offset, "expected an exponent")),
        }
    }

    fn base(&mut self) -> Result<PolyExpr> {
        let t = self.bump();
        match t.tok {
            Tok::Num(n) => Ok(PolyExpr::Int(n)),
            Tok::Ident(name) if name == UNIFORMIZER => Ok(PolyExpr::Uniformizer),
            Tok::Ident(name) => Ok(PolyExpr::Var { name, offset: t.offset }),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(syntax(close.offset, "expected `)`"));
                }
                Ok(e)
            }
            Tok::Eof => Err(syntax(t.offset, "unexpected end of input")),
            _ => Err(syntax(t.offset, "expected a number, a variable or `(`")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<PolyExpr> {
    let toks = tokenize(src)?;
    let mut parser = Parser { toks, pos: 0 };
    if parser.peek().tok == Tok::Eof {
        return Err(syntax(0, "empty expression"));
    }
    let e = parser.expr()?;
    let t = parser.peek();
    if t.tok != Tok::Eof {
        return Err(syntax(t.offset, "unexpected token"));
    }
    Ok(e)
}

impl PolyExpr {
    /// Variable names in sorted order, without the uniformizer.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            PolyExpr::Var { name, .. } => {
                out.insert(name.clone());
            }
            PolyExpr::Neg(a) | PolyExpr::Pow(a, _) => a.collect_vars(out),
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            PolyExpr::Int(_) | PolyExpr::Uniformizer => {}
        }
    }

    pub fn lower(&self, p: Prime, unif: Uniformizer, vars: &[String]) -> Result<MixedPoly> {
        let n = vars.len();
        let leaf = |pi: u64, m: Monomial, c: BigInt| MixedPoly::from_terms(p, unif, vars.to_vec(), [(pi, m, c)]);
        Ok(match self {
            PolyExpr::Int(c) => leaf(0, Monomial::one(n), c.clone()),
            PolyExpr::Uniformizer => leaf(1, Monomial::one(n), BigInt::from(1)),
            PolyExpr::Var { name, offset } => {
                let i = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::UnknownVariable {
                        name: name.clone(),
                        offset: *offset,
                    })?;
                leaf(0, Monomial::var(n, i, 1), BigInt::from(1))
            }
            PolyExpr::Neg(a) => a.lower(p, unif, vars)?.neg(),
            PolyExpr::Add(a, b) => a.lower(p, unif, vars)?.add(&b.lower(p, unif, vars)?),
            PolyExpr::Sub(a, b) => a.lower(p, unif, vars)?.sub(&b.lower(p, unif, vars)?),
            PolyExpr::Mul(a, b) => a.lower(p, unif, vars)?.mul(&b.lower(p, unif, vars)?),
            PolyExpr::Pow(a, k) => {
                let base = a.lower(p, unif, vars)?;
                guard_power(base.len(), *k)?;
                base.pow(*k)
            }
        })
    }
}

/// A power of a `t`-term polynomial has at most `C(k + t - 1, t - 1)` terms.
fn guard_power(t: usize, k: u32) -> Result<()> {
    let limit = max_terms_limit();
    let mut est: u128 = 1;
    for j in 1..t as u128 {
        est = est.saturating_mul(k as u128 + j) / j;
        if est > limit {
            return Err(Error::ResourceLimit { estimate: est, limit });
        }
    }
    Ok(())
}

/// Parse `src` into a polynomial. Without `vars`, the variables are the
/// identifiers of `src` in sorted order.
pub fn parse_poly(src: &str, p: Prime, unif: Uniformizer, vars: Option<&[String]>) -> Result<MixedPoly> {
    let e = parse_expr(src)?;
    let vars: Vec<String> = match vars {
        Some(v) => {
            if v.iter().any(|s| s == UNIFORMIZER) {
                return Err(Error::invalid("`p` is reserved for the uniformizer"));
            }
            let set: BTreeSet<&String> = v.iter().collect();
            if set.len() != v.len() {
                return Err(Error::invalid("variable names must be distinct"));
            }
            v.to_vec()
        }
        None => e.variables().into_iter().collect(),
    };
    e.lower(p, unif, &vars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    const U0: Uniformizer = Uniformizer::Root { level: 0 };

    #[test]
    fn parses_and_prints() {
        let f = parse_poly("p^3 + x^3 + y^3", pr(2), U0, None).unwrap();
        assert_eq!(f.vars(), ["x", "y"]);
        assert_eq!(f.len(), 3);
        let g = parse_poly("(x + y)^2 + 4*g", pr(2), U0, None).unwrap();
        assert_eq!(g.vars(), ["g", "x", "y"]);
        assert_eq!(parse_poly(&g.to_string(), pr(2), U0, Some(g.vars())).unwrap(), g);
        let h = parse_poly("-x^2 - -3*p", pr(3), U0, None).unwrap();
        assert_eq!(h, parse_poly("3*p - x^2", pr(3), U0, None).unwrap());
    }

    #[test]
    fn uniformizer_is_not_a_variable() {
        let f = parse_poly("p^2", pr(5), Uniformizer::Root { level: 1 }, None).unwrap();
        assert!(f.vars().is_empty());
        assert_eq!(f.terms().keys().next().unwrap().pi, 2);
    }

    #[test]
    fn exponent_errors() {
        let kind = |src: &str| match parse_expr(src) {
            Err(Error::BadExponent { kind, offset }) => (kind, offset),
            other => panic!("{src}: {other:?}"),
        };
        assert_eq!(kind("x^(1/2)"), ("fractional", 2));
        assert_eq!(kind("x^1/2"), ("fractional", 2));
        assert_eq!(kind("x^0.5"), ("fractional", 2));
        assert_eq!(kind("x^-1"), ("negative", 2));
        assert_eq!(kind("x^(-1)"), ("negative", 2));
        assert_eq!(kind("x^n"), ("symbolic", 2));
        assert_eq!(kind("x^(n+1)"), ("symbolic", 2));
        assert_eq!(parse_expr("x^(3)").unwrap(), parse_expr("x^3").unwrap());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let off = |src: &str| match parse_expr(src) {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("{src}: {other:?}"),
        };
        assert_eq!(off(""), 0);
        assert_eq!(off("x +"), 3);
        assert_eq!(off("(x + y"), 6);
        assert_eq!(off("x $ y"), 2);
        assert_eq!(off("x y"), 2);
        assert_eq!(off("x^2^3"), 3);
        assert_eq!(off("x / y"), 2);
    }

    #[test]
    fn unknown_variables() {
        let vars = vec!["x".to_string()];
        match parse_poly("x + yy", pr(3), U0, Some(&vars)) {
            Err(Error::UnknownVariable { name, offset }) => assert_eq!((name.as_str(), offset), ("yy", 4)),
            other => panic!("{other:?}"),
        }
        let bad = vec!["p".to_string()];
        assert!(parse_poly("x", pr(3), U0, Some(&bad)).is_err());
    }

    #[test]
    fn power_guard() {
        assert!(matches!(
            parse_poly("(x+y+z+w+u+v)^100000", pr(3), U0, None),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
