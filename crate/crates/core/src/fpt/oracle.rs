//! Brute-force F-pure threshold brackets from truncated Frobenius powers.
//!
//! `ν_e(f)` is the largest `ν` with `f^ν ∉ (x_1^{p^e}, ..., x_n^{p^e})`, and
//! `fpt(f)` lies in `[ν_e/p^e, (ν_e + 1)/p^e]`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::poly::SparsePolyFp;

/// Default bound on `p^{e n}`, the number of monomials below the Frobenius cap.
pub const DEFAULT_MAX_TERMS: u128 = 100_000_000;

pub const MAX_TERMS_ENV: &str = "THRESHOLD_LAB_MAX_TERMS";

/// The active resource guard: [`DEFAULT_MAX_TERMS`] unless overridden by the
/// `THRESHOLD_LAB_MAX_TERMS` environment variable.
pub fn max_terms_limit() -> u128 {
    std::env::var(MAX_TERMS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_TERMS)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FptBracket {
    pub e: u32,
    pub nu: u64,
    pub lower: Rat,
    pub upper: Rat,
}

impl FptBracket {
    fn new(p: u64, e: u32, nu: u64) -> Self {
        let q = BigInt::from(p).pow(e);
        FptBracket {
            e,
            nu,
            lower: Rat::new(nu, q.clone()),
            upper: Rat::new(nu + 1, q),
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lower <= x && x <= &self.upper
    }
}

/// A polynomial over `F_p` restricted to the monomials with every exponent
/// below `cap`, each monomial packed into one integer in mixed radix `cap`.
/// Terms are sorted by key.
struct Packed {
    cap: u64,
    strides: Vec<u64>,
    terms: Vec<(u64, u32)>,
}

/// One term of the multiplier, pre-decoded for the truncation test.
struct Factor {
    offset: u64,
    coeff: u64,
    support: Vec<(u64, u64)>, // (stride, exponent)
}

struct Engine {
    p: u64,
    n: usize,
    /// exponent vectors over the occurring variables
    f: Vec<(Vec<u64>, u64)>,
}

impl Engine {
    fn new(f: &SparsePolyFp, e: u32) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::invalid("the zero polynomial has no F-pure threshold"));
        }
        if f.has_constant_term() {
            return Err(Error::invalid(
                "the polynomial has a nonzero constant term, so every power avoids the ideal",
            ));
        }
        if e == 0 {
            return Err(Error::invalid("the Frobenius level must be at least 1"));
        }
        let p = f.p().get();
        let occurring = f.occurring_vars();
        let n = occurring.len();
        let estimate = (p as u128).checked_pow(e.saturating_mul(n as u32)).unwrap_or(u128::MAX);
        let limit = max_terms_limit();
        if estimate > limit || estimate > u64::MAX as u128 {
            return Err(Error::ResourceLimit { estimate, limit });
        }
        let terms = f
            .terms()
            .iter()
            .map(|(m, &c)| (occurring.iter().map(|&i| m.exps()[i] as u64).collect(), c))
            .collect();
        Ok(Engine { p, n, f: terms })
    }

    fn strides(&self, cap: u64) -> Vec<u64> {
        let mut s = Vec::with_capacity(self.n);
        let mut acc = 1u64;
        for _ in 0..self.n {
            s.push(acc);
            acc = acc.saturating_mul(cap);
        }
        s
    }

    fn one(&self, cap: u64) -> Packed {
        Packed {
            cap,
            strides: self.strides(cap),
            terms: vec![(0, 1)],
        }
    }

    fn factors(&self, g: &Packed) -> Vec<Factor> {
        self.f
            .iter()
            .filter(|(exps, _)| exps.iter().all(|&d| d < g.cap))
            .map(|(exps, c)| Factor {
                offset: exps.iter().zip(&g.strides).map(|(d, s)| d * s).sum(),
                coeff: *c,
                support: exps
                    .iter()
                    .zip(&g.strides)
                    .filter(|(d, _)| **d > 0)
                    .map(|(d, s)| (*s, *d))
                    .collect(),
            })
            .collect()
    }

    /// `g * f` with monomials outside the cap dropped.
    fn mul_f(&self, g: &Packed) -> Packed {
        let cap = g.cap;
        let mut out: Vec<(u64, u32)> = Vec::with_capacity(g.terms.len() * self.f.len());
        for t in self.factors(g) {
            for &(key, c) in &g.terms {
                if t.support.iter().all(|&(s, d)| (key / s) % cap + d < cap) {
                    out.push((key + t.offset, ((c as u64 * t.coeff) % self.p) as u32));
                }
            }
        }
        out.sort_unstable_by_key(|&(k, _)| k);
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(out.len());
        for (k, c) in out {
            match merged.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = ((*lc as u64 + c as u64) % self.p) as u32,
                _ => merged.push((k, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        Packed {
            cap,
            strides: g.strides.clone(),
            terms: merged,
        }
    }

    /// `g^p` read at cap `p * cap`: multiply every exponent by `p`.
    fn frobenius(&self, g: &Packed) -> Packed {
        let cap = g.cap * self.p;
        let strides = self.strides(cap);
        let terms = g
            .terms
            .iter()
            .map(|&(key, c)| {
                let k = g
                    .strides
                    .iter()
                    .zip(&strides)
                    .map(|(&s_old, &s_new)| ((key / s_old) % g.cap) * self.p * s_new)
                    .sum();
                (k, c)
            })
            .collect();
        // mixed-radix encoding is order preserving, so terms stay sorted
        Packed { cap, strides, terms }
    }

    /// Multiply by `f` until the truncated power vanishes; returns the last
    /// nonzero power and the number of multiplications that kept it nonzero.
    fn run(&self, start: Packed, max_steps: Option<u64>) -> Result<(Packed, u64)> {
        let mut g = start;
        let mut steps = 0u64;
        loop {
            let next = self.mul_f(&g);
            if next.terms.is_empty() {
                return Ok((g, steps));
            }
            g = next;
            steps += 1;
            if let Some(m) = max_steps {
                if steps > m {
                    return Err(Error::InternalInconsistency {
                        first: "frobenius_lift".into(),
                        second: "frobenius_bound".into(),
                        detail: format!("more than {m} further powers survived the Frobenius cap"),
                    });
                }
            }
        }
    }
}

/// `ν_1, ..., ν_{e_max}` computed level by level.
///
/// Level one starts from `1`; level `e + 1` starts from the Frobenius image of
/// `f^{ν_e}` truncated at `p^e`, which is `f^{p ν_e}` truncated at
/// `p^{e+1}`, and needs at most `p - 1` further multiplications since
/// `f^{ν_e + 1}` lies in the smaller Frobenius power.
pub fn frobenius_nus(f: &SparsePolyFp, e_max: u32) -> Result<Vec<u64>> {
    let eng = Engine::new(f, e_max)?;
    let p = eng.p;
    let (mut g, mut nu) = eng.run(eng.one(p), None)?;
    let mut nus = vec![nu];
    for _ in 1..e_max {
        let (h, extra) = eng.run(eng.frobenius(&g), Some(p - 1))?;
        nu = nu * p + extra;
        g = h;
        nus.push(nu);
    }
    Ok(nus)
}

/// `ν_e(f)`.
pub fn frobenius_nu(f: &SparsePolyFp, e: u32) -> Result<u64> {
    Ok(*frobenius_nus(f, e)?.last().expect("e >= 1"))
}

/// `ν_e(f)` by multiplying by `f` from scratch at the final cap. Slower;
/// kept as an independent check on the level-by-level route.
pub fn frobenius_nu_direct(f: &SparsePolyFp, e: u32) -> Result<u64> {
    let eng = Engine::new(f, e)?;
    let cap = eng.p.pow(e);
    let bound = eng.n as u64 * (cap - 1);
    let (_, nu) = eng.run(eng.one(cap), Some(bound))?;
    Ok(nu)
}

pub fn oracle_bracket(f: &SparsePolyFp, e: u32) -> Result<FptBracket> {
    let nu = frobenius_nu(f, e)?;
    Ok(FptBracket::new(f.p().get(), e, nu))
}

/// Brackets at every level `1..=e_max`.
pub fn oracle_brackets(f: &SparsePolyFp, e_max: u32) -> Result<Vec<FptBracket>> {
    let p = f.p().get();
    Ok(frobenius_nus(f, e_max)?
        .into_iter()
        .enumerate()
        .map(|(i, nu)| FptBracket::new(p, i as u32 + 1, nu))
        .collect())
}
