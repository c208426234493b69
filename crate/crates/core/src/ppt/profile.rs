use serde::Serialize;

use super::certificate::Bound;
use super::context::RingContext;
use super::engine::{certify, CertifyOptions};
use super::rules::ReductionFpt;
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::poly::json::PolyJson;
use crate::poly::MixedPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub level: u32,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    pub exact: Option<Rat>,
    pub upper_rule: Option<&'static str>,
}

/// Certified bounds on `ppt(f)` as the base is ramified further, next to the
/// limit value `fpt(f mod π)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitProfile {
    pub input: PolyJson,
    pub limit: Option<Rat>,
    pub limit_bracket: Option<(Rat, Rat)>,
    pub entries: Vec<ProfileEntry>,
    pub notes: Vec<String>,
}

/// Certify `f` at ramification levels `0..=max_level`, skipping levels below
/// the one `f` is defined over.
pub fn limit_profile(f: &MixedPoly, max_level: u32, opts: &CertifyOptions) -> Result<LimitProfile> {
    if f.is_cyclotomic() {
        return Err(Error::invalid("limit profiles need the base W(k)[p^{1/p^a}]"));
    }
    let def = f.definition_level();
    let red = ReductionFpt::compute(f, opts);
    let mut notes = Vec::new();
    if def > 0 {
        notes.push(format!("f is only defined from level {def} on"));
    }
    let mut entries = Vec::new();
    for a in def..=max_level.max(def) {
        if a > max_level {
            break;
        }
        let g = f.at_level(a)?;
        let c = certify(&g, RingContext::of(&g), opts)?;
        entries.push(ProfileEntry {
            level: a,
            lower: c.lower,
            upper: c.upper,
            exact: c.exact,
            upper_rule: c.upper_rule,
        });
    }
    for w in entries.windows(2) {
        if let (Some(u0), Some(u1)) = (&w[0].upper, &w[1].upper) {
            if u1.value > u0.value {
                return Err(Error::InternalInconsistency {
                    first: format!("level {}", w[1].level),
                    second: format!("level {}", w[0].level),
                    detail: format!("upper bound rose from {} to {}", u0.value, u1.value),
                });
            }
        }
    }
    let limit = red.exact.clone();
    let limit_bracket = red.brackets.last().map(|b| (b.lower.clone(), b.upper.clone()));
    if let Some(r) = &limit {
        match entries.iter().find(|e| e.exact.as_ref() == Some(r)) {
            Some(e) => notes.push(format!("limit {r} attained from level {} on", e.level)),
            None => {
                let above = |e: &ProfileEntry| {
                    e.lower
                        .as_ref()
                        .is_some_and(|l| l.value > *r || (l.value == *r && l.strict))
                };
                if !entries.is_empty() && entries.iter().all(above) {
                    notes.push(format!("limit {r} not attained at any computed level"));
                }
            }
        }
    }
    Ok(LimitProfile {
        input: PolyJson::from(f),
        limit,
        limit_bracket,
        entries,
        notes,
    })
}
