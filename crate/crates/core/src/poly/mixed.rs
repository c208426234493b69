use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fp::SparsePolyFp;
use super::monomial::{format_monomial, Monomial};
use crate::error::{Error, Result};
use crate::exact::Prime;
use crate::padic::valuation_big;

/// The distinguished uniformizer of the coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Uniformizer {
    /// `π = p^{1/p^a}`, so `π^{p^a} = p`.
    Root { level: u32 },
    /// `ϖ = ζ_p - 1`, with `ϖ^{p-1}` equal to `p` times a unit.
    Cyclotomic,
}

/// Key of a term: the power of the uniformizer and the monomial in the
/// x-variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub pi: u64,
    pub mono: Monomial,
}

impl TermKey {
    pub fn new(pi: u64, mono: Monomial) -> Self {
        TermKey { pi, mono }
    }

    pub fn mul(&self, other: &TermKey) -> TermKey {
        TermKey {
            pi: self.pi + other.pi,
            mono: self.mono.mul(&other.mono),
        }
    }
}

/// Polynomial in x-variables and one uniformizer, with integer coefficients.
///
/// Models elements of `W(k)[p^{1/p^a}][x...]` (or `Z[ζ_p][x...]`). The
/// effective π-order of a term `c π^k x^m` is `k + w * v_p(c)` where `w` is
/// the π-order of `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct MixedPoly {
    p: Prime,
    unif: Uniformizer,
    vars: Vec<String>,
    terms: BTreeMap<TermKey, BigInt>,
}

impl MixedPoly {
    pub fn zero(p: Prime, unif: Uniformizer, vars: Vec<String>) -> Self {
        MixedPoly {
            p,
            unif,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I, C>(p: Prime, unif: Uniformizer, vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut f = MixedPoly::zero(p, unif, vars);
        for (pi, m, c) in terms {
            assert_eq!(m.nvars(), f.vars.len(), "monomial arity mismatch");
            f.add_term(TermKey::new(pi, m), c.into());
        }
        f
    }

    pub fn one(p: Prime, unif: Uniformizer, vars: Vec<String>) -> Self {
        let n = vars.len();
        MixedPoly::from_terms(p, unif, vars, [(0, Monomial::one(n), 1)])
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn uniformizer(&self) -> Uniformizer {
        self.unif
    }

    pub fn is_cyclotomic(&self) -> bool {
        self.unif == Uniformizer::Cyclotomic
    }

    /// `a` for `π = p^{1/p^a}`; 0 for the cyclotomic uniformizer.
    pub fn ram_level(&self) -> u32 {
        match self.unif {
            Uniformizer::Root { level } => level,
            Uniformizer::Cyclotomic => 0,
        }
    }

    /// The π-order of `p`.
    pub fn weight(&self) -> u64 {
        match self.unif {
            Uniformizer::Root { level } => self.p.get().pow(level),
            Uniformizer::Cyclotomic => self.p.get() - 1,
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub(crate) fn add_term(&mut self, key: TermKey, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Effective π-order of the term `c * key`.
    pub fn effective_order(&self, key: &TermKey, c: &BigInt) -> u64 {
        let v = valuation_big(c, self.p).expect("stored coefficients are nonzero");
        key.pi + self.weight() * v as u64
    }

    /// Same ring, no terms.
    pub fn like_zero(&self) -> MixedPoly {
        MixedPoly::zero(self.p, self.unif, self.vars.clone())
    }

    pub fn add(&self, other: &MixedPoly) -> MixedPoly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MixedPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &MixedPoly) -> MixedPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MixedPoly) -> MixedPoly {
        self.check_compatible(other);
        let mut out = self.like_zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(ka.mul(kb), ca * cb);
            }
        }
        out
    }

    /// Exact `f^n` by repeated squaring.
    pub fn pow(&self, n: u32) -> MixedPoly {
        let mut result = MixedPoly::one(self.p, self.unif, self.vars.clone());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Value at `π = 1`, `x_i = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Image modulo the uniformizer: drop every term of positive effective
    /// π-order and reduce the rest mod `p`.
    pub fn reduce_mod_pi(&self) -> SparsePolyFp {
        let pv = BigInt::from(self.p.get());
        let terms = self.terms.iter().filter(|(k, _)| k.pi == 0).map(|(k, c)| {
            let r = c.mod_floor(&pv).to_i64().expect("residue below p");
            (k.mono.clone(), r)
        });
        SparsePolyFp::from_terms(self.p, self.vars.clone(), terms)
    }

    /// For `π = p^{1/p^a}`, move every factor of `p` out of the coefficients
    /// and into the π-exponent, so each coefficient is a `p`-adic unit. Terms
    /// that then share a key are merged and the process repeats. The
    /// cyclotomic uniformizer is left unchanged since `p` is only a unit
    /// multiple of `ϖ^{p-1}`.
    pub fn canonical(&self) -> MixedPoly {
        if self.is_cyclotomic() {
            return self.clone();
        }
        let w = self.weight();
        let pv = BigInt::from(self.p.get());
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            let mut next = self.like_zero();
            for (k, c) in cur.terms {
                let mut c = c;
                let mut pi = k.pi;
                loop {
                    let (q, r) = c.div_rem(&pv);
                    if !r.is_zero() {
                        break;
                    }
                    c = q;
                    pi += w;
                    changed = true;
                }
                next.add_term(TermKey::new(pi, k.mono), c);
            }
            cur = next;
            if !changed {
                return cur;
            }
        }
    }

    /// Re-express over `W(k)[p^{1/p^{a+delta}}]`: π-exponents scale by `p^delta`.
    pub fn lift(&self, delta: u32) -> Result<MixedPoly> {
        let Uniformizer::Root { level } = self.unif else {
            return Err(Error::invalid(
                "cannot change the ramification level of a cyclotomic polynomial",
            ));
        };
        let s = self.p.pow(delta)?;
        let mut out = MixedPoly::zero(self.p, Uniformizer::Root { level: level + delta }, self.vars.clone());
        for (k, c) in &self.terms {
            let pi = k.pi.checked_mul(s).ok_or(Error::Overflow("a lifted π-exponent"))?;
            out.add_term(TermKey::new(pi, k.mono.clone()), c.clone());
        }
        Ok(out)
    }

    /// The smallest level `b <= a` over which the polynomial is defined, i.e.
    /// every π-exponent is divisible by `p^{a-b}`.
    pub fn definition_level(&self) -> u32 {
        let Uniformizer::Root { level } = self.unif else {
            return 0;
        };
        let p = self.p.get();
        let mut b = level;
        while b > 0 {
            let step = p.pow(level - b + 1);
            if self.terms.keys().all(|k| k.pi % step == 0) {
                b -= 1;
            } else {
                break;
            }
        }
        b
    }

    /// The same element written over level `b`. Fails if `b` is below the
    /// definition level.
    pub fn at_level(&self, b: u32) -> Result<MixedPoly> {
        let a = self.ram_level();
        if self.is_cyclotomic() {
            return Err(Error::invalid("cyclotomic polynomials have no ramification level"));
        }
        if b >= a {
            return self.lift(b - a);
        }
        let s = self.p.pow(a - b)?;
        let mut out = MixedPoly::zero(self.p, Uniformizer::Root { level: b }, self.vars.clone());
        for (k, c) in &self.terms {
            if k.pi % s != 0 {
                return Err(Error::invalid(format!("the polynomial is not defined over level {b}")));
            }
            out.add_term(TermKey::new(k.pi / s, k.mono.clone()), c.clone());
        }
        Ok(out)
    }

    /// Does some term have a constant monomial and effective π-order 0?
    pub fn has_unit_constant(&self) -> bool {
        self.terms
            .iter()
            .any(|(k, c)| k.mono.is_one() && self.effective_order(k, c) == 0)
    }

    fn check_compatible(&self, other: &MixedPoly) {
        assert_eq!(self.p, other.p, "polynomials over different primes");
        assert_eq!(self.unif, other.unif, "polynomials over different rings");
        assert_eq!(self.vars.len(), other.vars.len(), "variable universes differ");
    }

    /// Terms in printing order: descending by total degree (π counted as a
    /// variable), then lexicographically with π first.
    pub fn ordered_terms(&self) -> Vec<(&TermKey, &BigInt)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da = a.pi + a.mono.degree();
            let db = b.pi + b.mono.degree();
            db.cmp(&da)
                .then_with(|| b.pi.cmp(&a.pi))
                .then_with(|| b.mono.exps().cmp(a.mono.exps()))
        });
        ts
    }
}

impl fmt::Display for MixedPoly {
    /// Uses `p` for the uniformizer; the output parses back to the same
    /// polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.ordered_terms().into_iter().enumerate() {
            let mut factors = Vec::new();
            match k.pi {
                0 => {}
                1 => factors.push("p".to_string()),
                e => factors.push(format!("p^{e}")),
            }
            let mono = format_monomial(&k.mono, &self.vars);
            if !mono.is_empty() {
                factors.push(mono);
            }
            let mag = c.abs();
            if !mag.is_one() || factors.is_empty() {
                factors.insert(0, mag.to_string());
            }
            let body = factors.join("*");
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MixedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.unif {
            Uniformizer::Root { level } => write!(f, "{} (p={}, level {})", self, self.p, level),
            Uniformizer::Cyclotomic => write!(f, "{} (p={}, cyclotomic)", self, self.p),
        }
    }
}
