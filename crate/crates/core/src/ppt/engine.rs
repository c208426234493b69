use rayon::prelude::*;

use super::certificate::{Bound, BoundCertificate, RuleRecord};
use super::context::RingContext;
use super::rules::{Input, ReductionFpt, RULES};
use super::shapes::{all_vars_occur, match_diagonal, match_elliptic, Family};
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::fpt::max_terms_limit;
use crate::poly::MixedPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Declared family; the input must match it.
    pub family: Option<Family>,
    /// Deepest Frobenius level used to bracket `fpt(f mod π)` when no closed
    /// form applies.
    pub oracle_level: u32,
    /// Monomial budget for the Frobenius-power oracle.
    pub max_terms: u128,
    /// Work budget (term products) for expanding `f^b` in containment checks.
    pub containment_budget: u64,
    /// Also certify at every lower ramification level over which `f` is
    /// defined and keep the best upper bound.
    pub descent: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            family: None,
            oracle_level: 4,
            max_terms: max_terms_limit(),
            containment_budget: 4_000_000,
            descent: true,
        }
    }
}

fn validate(f: &MixedPoly, ctx: &RingContext) -> Result<()> {
    ctx.check(f)?;
    if f.is_zero() {
        return Err(Error::invalid("the zero polynomial has no threshold"));
    }
    if f.has_unit_constant() {
        return Err(Error::invalid("f is a unit"));
    }
    Ok(())
}

/// Certify bounds on `ppt(f)` over the ring described by `ctx`.
pub fn certify(f: &MixedPoly, ctx: RingContext, opts: &CertifyOptions) -> Result<BoundCertificate> {
    validate(f, &ctx)?;
    if let Some(fam) = opts.family {
        if !fam.matches(f) {
            return Err(Error::invalid(format!(
                "input does not match the declared family `{fam}`"
            )));
        }
    }
    let red = ReductionFpt::compute(f, opts);
    let mut records = run_rules(f, ctx, &red, opts)?;
    if opts.descent && !ctx.cyclotomic {
        if let Some(r) = descent(f, ctx, &red, opts)? {
            records.push(r);
        }
    }
    let mut cert = BoundCertificate::empty(f, ctx);
    combine(&mut cert, records)?;
    add_notes(&mut cert, f, &red);
    match opts.family {
        Some(fam) => {
            cert.family = Some(fam.name().to_string());
            cert.notes.push(format!("declared family {fam}"));
        }
        None => {
            let found = Family::detect(f);
            if found.is_empty() {
                cert.notes.push("no registered family matched".into());
            }
            for fam in found {
                cert.notes.push(format!("matches family {fam}"));
            }
        }
    }
    Ok(cert)
}

/// Whether `cert` holds a bound beyond the trivial one: for a declared family
/// one of its rules must have fired.
pub fn has_required_bound(cert: &BoundCertificate, family: Option<Family>) -> bool {
    match family {
        Some(fam) => fam.rules().iter().any(|id| cert.fired(id)),
        None => cert.rules.iter().any(|r| r.id != "unit_upper"),
    }
}

fn run_rules(f: &MixedPoly, ctx: RingContext, red: &ReductionFpt, opts: &CertifyOptions) -> Result<Vec<RuleRecord>> {
    let input = Input {
        f,
        ctx,
        red,
        def_level: f.definition_level(),
        diag: match_diagonal(f),
        vars_occur: all_vars_occur(f),
        opts,
    };
    let outcomes: Vec<_> = RULES.par_iter().map(|r| (r.run)(&input)).collect();
    let mut records = Vec::new();
    for (def, out) in RULES.iter().zip(outcomes) {
        if let Some(o) = out? {
            records.push(RuleRecord {
                id: def.id,
                reference: def.reference,
                statement: def.statement,
                hypotheses: o.hypotheses,
                lower: o.lower,
                upper: o.upper,
            });
        }
    }
    Ok(records)
}

/// Upper bounds certified over smaller bases carry over: adjoining roots of
/// the uniformizer can only lower the threshold.
fn descent(f: &MixedPoly, ctx: RingContext, red: &ReductionFpt, opts: &CertifyOptions) -> Result<Option<RuleRecord>> {
    let a = ctx.ram_level;
    let def = f.definition_level();
    let mut best: Option<(Bound, u32, &'static str)> = None;
    for b in def..a {
        let g = f.at_level(b)?;
        for r in run_rules(&g, ctx.at_level(b), red, opts)? {
            let Some(u) = r.upper else { continue };
            if u.value >= Rat::one() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((cur, _, _)) => u.value < cur.value || (u.value == cur.value && u.strict && !cur.strict),
            };
            if better {
                best = Some((u, b, r.id));
            }
        }
    }
    Ok(best.map(|(u, b, id)| RuleRecord {
        id: "ramification_descent",
        reference: "monotonicity under ramification",
        statement: "an upper bound for ppt(f) over W(k)[p^{1/p^b}] holds over W(k)[p^{1/p^a}] for a >= b",
        hypotheses: vec![
            format!("f is defined over level {def}"),
            format!("upper bound {} certified at level {b} by {id}", u.value),
        ],
        lower: None,
        upper: Some(u),
    }))
}

fn combine(cert: &mut BoundCertificate, records: Vec<RuleRecord>) -> Result<()> {
    let mut lower: Option<(Bound, &'static str)> = None;
    let mut upper: Option<(Bound, &'static str)> = None;
    for r in &records {
        if let Some(b) = &r.lower {
            let better = match &lower {
                None => true,
                Some((cur, _)) => b.value > cur.value || (b.value == cur.value && b.strict && !cur.strict),
            };
            if better {
                lower = Some((b.clone(), r.id));
            }
        }
        if let Some(b) = &r.upper {
            let better = match &upper {
                None => true,
                Some((cur, _)) => b.value < cur.value || (b.value == cur.value && b.strict && !cur.strict),
            };
            if better {
                upper = Some((b.clone(), r.id));
            }
        }
    }
    if let (Some((l, lid)), Some((u, uid))) = (&lower, &upper) {
        if l.value > u.value || (l.value == u.value && (l.strict || u.strict)) {
            return Err(Error::InternalInconsistency {
                first: lid.to_string(),
                second: uid.to_string(),
                detail: format!(
                    "lower bound {}{} against upper bound {}{}",
                    l.value,
                    if l.strict { " (strict)" } else { "" },
                    u.value,
                    if u.strict { " (strict)" } else { "" }
                ),
            });
        }
        if l.value == u.value {
            cert.exact = Some(l.value.clone());
        }
    }
    cert.lower_rule = lower.as_ref().map(|(_, id)| *id);
    cert.upper_rule = upper.as_ref().map(|(_, id)| *id);
    cert.lower = lower.map(|(b, _)| b);
    cert.upper = upper.map(|(b, _)| b);
    cert.rules = records;
    Ok(())
}

fn add_notes(cert: &mut BoundCertificate, f: &MixedPoly, red: &ReductionFpt) {
    let p = f.p().get();
    if let Some(n) = &red.note {
        cert.notes.push(n.clone());
    }
    if let Some(u) = cert.rule("lct_upper").and_then(|r| r.upper.as_ref()) {
        cert.notes.push(format!("lct(f) = {}", u.value));
    }
    if let (Some(l), Some(u)) = (&cert.lower, &cert.upper) {
        if l.strict {
            let pl = l.value.clone() * Rat::int(p);
            let k = pl.floor();
            let pu = u.value.clone() * Rat::int(p);
            if k >= 1.into() && pu <= Rat::int(k.clone()) + l.value.clone() {
                cert.notes.push(format!(
                    "p·ppt(f) is not a jumping number: it lies in ({k}, {k} + ppt(f))"
                ));
            }
        }
    }
    if p > 2 && cert.fired("elliptic") && match_elliptic(f).is_some() {
        cert.notes.push(format!("whether ppt(f) > 1 - 1/{p} is not decided"));
    }
}
