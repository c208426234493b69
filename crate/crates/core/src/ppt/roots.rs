use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::cyclotomic;
use crate::error::{Error, Result};
use crate::poly::{MixedPoly, Monomial, TermKey, Uniformizer};

/// The π-power modulo which a `p`-th root yields an upper bound: `p^2` over
/// the unramified base and `ϖ^p` over the cyclotomic one, in π-units.
pub fn pth_root_upper_modulus(f: &MixedPoly) -> Option<u64> {
    match f.uniformizer() {
        Uniformizer::Cyclotomic => Some(f.p().get()),
        Uniformizer::Root { level: 0 } => Some(2),
        Uniformizer::Root { .. } => None,
    }
}

/// Some `h` with `f ≡ h^p` modulo `π^t`, or `None` if there is none.
///
/// `h` is determined modulo π by the unique `p`-th root of `f mod π`, and
/// `h^p mod π^t` only depends on `h mod π` as long as `t <= p` (cyclotomic)
/// or `t <= 2` (over `W(k)`), so the canonical lift with coefficients in
/// `[0, p)` decides the question.
pub fn pth_root_modulo(f: &MixedPoly, t: u64) -> Result<Option<MixedPoly>> {
    let p = f.p().get();
    match f.uniformizer() {
        Uniformizer::Cyclotomic if t > p => {
            return Err(Error::invalid(format!("modulus ϖ^{t} exceeds ϖ^{p}")));
        }
        Uniformizer::Root { level } if t > 2 * p.pow(level) => {
            return Err(Error::invalid(format!("modulus π^{t} exceeds p^2")));
        }
        _ => {}
    }
    let Some(hbar) = f.reduce_mod_pi().pth_root() else {
        return Ok(None);
    };
    let h = MixedPoly::from_terms(
        f.p(),
        f.uniformizer(),
        f.vars().to_vec(),
        hbar.terms().iter().map(|(m, &c)| (0u64, m.clone(), c as i64)),
    );
    let p32 = u32::try_from(p).map_err(|_| Error::Overflow("the prime as an exponent"))?;
    let diff = f.sub(&h.pow(p32));
    let ok = match f.uniformizer() {
        Uniformizer::Root { .. } => {
            let c = diff.canonical();
            c.terms().iter().all(|(k, v)| c.effective_order(k, v) >= t)
        }
        Uniformizer::Cyclotomic => {
            let mut by_mono: BTreeMap<&Monomial, BTreeMap<u64, BigInt>> = BTreeMap::new();
            for (TermKey { pi, mono }, c) in diff.terms() {
                *by_mono.entry(mono).or_default().entry(*pi).or_default() += c;
            }
            by_mono
                .values()
                .all(|cs| cyclotomic::valuation_of(f.p(), cs).is_none_or(|v| v >= t))
        }
    };
    Ok(ok.then_some(h))
}
