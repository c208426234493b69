use num_bigint::BigInt;
use num_traits::One;

use super::mixed::{MixedPoly, TermKey};
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Ideal generated by terms `π^k x^m`, with the π-power measured in the
/// polynomial's units. The generating set is kept minimal under divisibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedMonomialIdeal {
    gens: Vec<TermKey>,
}

impl WeightedMonomialIdeal {
    pub fn new(gens: impl IntoIterator<Item = TermKey>) -> Self {
        let mut all: Vec<TermKey> = gens.into_iter().collect();
        all.sort();
        all.dedup();
        let mut minimal: Vec<TermKey> = Vec::new();
        for g in &all {
            if !all.iter().any(|h| h != g && divides(h, g)) {
                minimal.push(g.clone());
            }
        }
        WeightedMonomialIdeal { gens: minimal }
    }

    /// `(π^q, x_1^q, ..., x_n^q)`.
    pub fn frobenius_power(nvars: usize, q: u64) -> Result<Self> {
        let q32 = u32::try_from(q).map_err(|_| Error::Overflow("a Frobenius exponent"))?;
        let mut gens = vec![TermKey::new(q, Monomial::one(nvars))];
        gens.extend((0..nvars).map(|i| TermKey::new(0, Monomial::var(nvars, i, q32))));
        Ok(WeightedMonomialIdeal::new(gens))
    }

    pub fn generators(&self) -> &[TermKey] {
        &self.gens
    }

    /// The generator dividing a term of effective π-order `order`, if any.
    pub fn witness(&self, order: u64, mono: &Monomial) -> Option<&TermKey> {
        self.gens.iter().find(|g| g.pi <= order && g.mono.divides(mono))
    }

    pub fn contains_term(&self, order: u64, mono: &Monomial) -> bool {
        self.witness(order, mono).is_some()
    }

    /// Smallest `k` with `π^k` in the ideal, if a pure π-power generates.
    pub fn pure_pi_generator(&self) -> Option<u64> {
        self.gens.iter().filter(|g| g.mono.is_one()).map(|g| g.pi).min()
    }

    /// Is `other` contained in `self`?
    pub fn contains_ideal(&self, other: &WeightedMonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains_term(g.pi, &g.mono))
    }
}

fn divides(h: &TermKey, g: &TermKey) -> bool {
    h.pi <= g.pi && h.mono.divides(&g.mono)
}

/// Outcome for one term of a membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermWitness {
    pub key: TermKey,
    pub coeff: BigInt,
    pub effective_order: u64,
    /// `None` marks a term outside the ideal.
    pub generator: Option<TermKey>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub holds: bool,
    pub witnesses: Vec<TermWitness>,
}

impl Membership {
    pub fn failing(&self) -> impl Iterator<Item = &TermWitness> {
        self.witnesses.iter().filter(|w| w.generator.is_none())
    }
}

/// Termwise membership of `f` in `ideal`, counting the `p`-adic valuation of
/// each coefficient toward its π-order.
///
/// Over `p^{1/p^a}` the test runs on the canonical form, where it is exact.
/// Over the cyclotomic uniformizer it is a sufficient condition.
pub fn weighted_membership(f: &MixedPoly, ideal: &WeightedMonomialIdeal) -> Membership {
    let g = f.canonical();
    let witnesses: Vec<TermWitness> = g
        .terms()
        .iter()
        .map(|(k, c)| {
            let order = g.effective_order(k, c);
            TermWitness {
                key: k.clone(),
                coeff: c.clone(),
                effective_order: order,
                generator: ideal.witness(order, &k.mono).cloned(),
            }
        })
        .collect();
    Membership {
        holds: witnesses.iter().all(|w| w.generator.is_some()),
        witnesses,
    }
}

/// Decide `f^n ∈ ideal` without forming `f^n` in full.
///
/// Powers are built one factor at a time; after each step every term already
/// in the ideal is discarded (the ideal absorbs its multiples). When the ideal
/// contains `π^g`, coefficients only matter modulo `p^M` with `M * w >= g`.
/// `max_terms` bounds the size of any intermediate result.
pub fn power_in_ideal(f: &MixedPoly, n: u32, ideal: &WeightedMonomialIdeal, max_terms: usize) -> Result<bool> {
    let w = f.weight();
    let modulus = ideal.pure_pi_generator().map(|g| {
        let m = g.div_ceil(w) as u32;
        BigInt::from(f.p().get()).pow(m)
    });
    let prune = |h: MixedPoly| -> MixedPoly {
        let mut h = h;
        loop {
            let c = h.canonical();
            let mut out = c.like_zero();
            let mut reduced = false;
            for (k, coeff) in c.terms() {
                if ideal.contains_term(c.effective_order(k, coeff), &k.mono) {
                    continue;
                }
                let r = match &modulus {
                    Some(m) => coeff % m,
                    None => coeff.clone(),
                };
                reduced |= &r != coeff;
                out.add_term(k.clone(), r);
            }
            // a reduced coefficient may have picked up factors of p
            if !reduced {
                return out;
            }
            h = out;
        }
    };
    let base = prune(f.clone());
    let mut acc = prune(MixedPoly::one(f.p(), f.uniformizer(), f.vars().to_vec()));
    for _ in 0..n {
        if acc.is_zero() {
            return Ok(true);
        }
        acc = prune(acc.mul(&base));
        if acc.len() > max_terms {
            return Err(Error::ResourceLimit {
                estimate: acc.len() as u128,
                limit: max_terms as u128,
            });
        }
    }
    Ok(acc.is_zero())
}

/// Exact route: expand `f^n` and test it termwise.
pub fn power_in_ideal_exact(f: &MixedPoly, n: u32, ideal: &WeightedMonomialIdeal) -> Membership {
    weighted_membership(&f.pow(n), ideal)
}

/// `true` when every coefficient of `f` is `±1`.
pub fn has_unit_coefficients(f: &MixedPoly) -> bool {
    f.terms().values().all(|c| c.magnitude().is_one())
}
