//! The certification rules. Each rule checks its hypotheses mechanically and
//! either abstains or reports bounds together with what it checked.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::certificate::Bound;
use super::context::RingContext;
use super::engine::CertifyOptions;
use super::roots::{pth_root_modulo, pth_root_upper_modulus};
use super::shapes::{floor_log_p, log_p, match_elliptic, match_extremal, DiagonalShape, EllipticForm, Family};
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::fpt::{
    compute_l, fpt_closed_form, fpt_diagonal, fpt_numerator, oracle_brackets, DiagonalData, FptBracket, LValue,
};
use crate::padic::lucas_residue;
use crate::poly::{power_in_ideal, weighted_membership, MixedPoly, SparsePolyFp, WeightedMonomialIdeal};

/// What is known about `fpt(f mod π)`.
#[derive(Debug, Clone)]
pub(crate) struct ReductionFpt {
    pub fbar: SparsePolyFp,
    pub exact: Option<Rat>,
    pub brackets: Vec<FptBracket>,
    pub note: Option<String>,
}

impl ReductionFpt {
    pub fn compute(f: &MixedPoly, opts: &CertifyOptions) -> Self {
        let fbar = f.reduce_mod_pi();
        let mut out = ReductionFpt {
            fbar,
            exact: None,
            brackets: Vec::new(),
            note: None,
        };
        if out.fbar.is_zero() {
            out.note = Some("f vanishes modulo the uniformizer".into());
            return out;
        }
        if let Some(x) = fpt_closed_form(&out.fbar) {
            out.exact = Some(x);
            return out;
        }
        let n = out.fbar.occurring_vars().len() as u32;
        let p = out.fbar.p().get() as u128;
        let mut e = opts.oracle_level;
        while e > 0 && p.checked_pow(e * n).is_none_or(|s| s > opts.max_terms) {
            e -= 1;
        }
        if e == 0 {
            out.note = Some("fpt of the reduction not bracketed: resource guard".into());
            return out;
        }
        match oracle_brackets(&out.fbar, e) {
            Ok(b) => out.brackets = b,
            Err(err) => out.note = Some(format!("fpt of the reduction not bracketed: {err}")),
        }
        out
    }

    fn describe(&self) -> String {
        match (&self.exact, self.brackets.last()) {
            (Some(x), _) => format!("fpt(f mod π) = {x} (closed form)"),
            (None, Some(b)) => format!("fpt(f mod π) in [{}, {}] (ν_{} = {})", b.lower, b.upper, b.e, b.nu),
            _ => "fpt(f mod π) unknown".into(),
        }
    }

    pub fn lower(&self) -> Option<Rat> {
        match (&self.exact, self.brackets.last()) {
            (Some(x), _) => Some(x.clone()),
            (None, Some(b)) if b.lower.is_positive() => Some(b.lower.clone()),
            _ => None,
        }
    }

    /// The least `b / p^e` with `e <= d` certified to be at least the fpt.
    /// Returns `(b, e)`.
    pub fn upper_at(&self, d: u32) -> Option<(BigInt, u32)> {
        let p = BigInt::from(self.fbar.p().get());
        if let Some(x) = &self.exact {
            let scaled = x.clone() * Rat::int(p.pow(d));
            return Some((scaled.ceil(), d));
        }
        let e = (d as usize).min(self.brackets.len());
        if e == 0 {
            return None;
        }
        let b = &self.brackets[e - 1];
        Some((BigInt::from(b.nu + 1), b.e))
    }
}

/// Everything a rule may look at.
pub(crate) struct Input<'a> {
    pub f: &'a MixedPoly,
    pub ctx: RingContext,
    pub red: &'a ReductionFpt,
    pub def_level: u32,
    pub diag: Option<DiagonalShape>,
    pub vars_occur: bool,
    pub opts: &'a CertifyOptions,
}

impl Input<'_> {
    fn p(&self) -> u64 {
        self.ctx.p.get()
    }

    fn a(&self) -> u32 {
        self.ctx.ram_level
    }

    fn ramified_root(&self) -> bool {
        !self.ctx.cyclotomic
    }

    /// Diagonal with a π-term, every variable present.
    fn diag_with_pi(&self) -> Option<&DiagonalShape> {
        self.diag
            .as_ref()
            .filter(|d| self.vars_occur && d.pi_exp.is_some() && !d.xs.is_empty())
    }

    /// The two blow-up shapes: `π^a + x^b`, or `π^d + x_2^d + ... + x_n^d`.
    fn blowup_shape(&self) -> Option<(&DiagonalShape, &'static str)> {
        let d = self.diag_with_pi()?;
        if d.xs.len() == 1 {
            Some((d, "π^a + x^b"))
        } else if d.all_equal().is_some() {
            Some((d, "π^d + x_2^d + ... + x_n^d"))
        } else {
            None
        }
    }
}

/// Result of a rule that fired.
#[derive(Debug, Clone, Default)]
pub(crate) struct Outcome {
    pub hypotheses: Vec<String>,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
}

pub(crate) struct RuleDef {
    pub id: &'static str,
    pub reference: &'static str,
    pub statement: &'static str,
    pub run: fn(&Input) -> Result<Option<Outcome>>,
}

/// Rules in output order.
pub(crate) const RULES: &[RuleDef] = &[
    RuleDef {
        id: "unit_upper",
        reference: "threshold of a non-unit",
        statement: "ppt(f) <= 1 for 0 != f in the maximal ideal",
        run: unit_upper,
    },
    RuleDef {
        id: "fpt_lower",
        reference: "reduction modulo the uniformizer",
        statement: "ppt(f) >= fpt(f mod π)",
        run: fpt_lower,
    },
    RuleDef {
        id: "blowup_lower",
        reference: "blow-up comparison for diagonal forms",
        statement: "fpt(f_0) <= ppt(f) for f = π^a + x^b or f = π^d + Σ x_i^d, with π replaced by a new variable in f_0",
        run: blowup_lower,
    },
    RuleDef {
        id: "lct_upper",
        reference: "blow-up comparison for diagonal forms",
        statement: "ppt(f) <= lct(f) = min(1, Σ 1/s_i) for the same two shapes",
        run: lct_upper,
    },
    RuleDef {
        id: "ramified_upper",
        reference: "bound after adjoining p^e-th roots of the uniformizer",
        statement: "fpt(f mod ϖ) <= b/p^e and ϖ^{1/p^e} in the base imply ppt(f) <= b/p^e",
        run: ramified_upper,
    },
    RuleDef {
        id: "pth_power_ramified",
        reference: "p^e-th powers after ramification",
        statement: "f mod ϖ a p^e-th power and ϖ^{1/p^e} in the base imply ppt(f) <= 1/p^e",
        run: pth_power_ramified,
    },
    RuleDef {
        id: "exact_ramified",
        reference: "equality once the base is ramified enough",
        statement: "a terminating lower bound b/p^e with f^b in (π^{p^e}, x^{p^e}) and e <= a is the exact value",
        run: exact_ramified,
    },
    RuleDef {
        id: "diagonal_ramified",
        reference: "diagonal hypersurfaces over a ramified base",
        statement: "n < p, s_i > 1, L < ∞, a >= L imply ppt(π^{s_1} + Σ x_i^{s_i}) <= fpt(Σ x_i^{s_i}), with equality if n = 2 or all s_i agree",
        run: diagonal_ramified,
    },
    RuleDef {
        id: "high_degree_ramified",
        reference: "high-degree diagonal forms over a ramified base",
        statement: "p^s <= d and a >= s imply ppt(π^d + Σ x_i^d) <= 1/p^s",
        run: high_degree_ramified,
    },
    RuleDef {
        id: "extremal_strict",
        reference: "extremal reductions over an unramified base",
        statement: "f = x^a y^b + x^b y^a + f' with (a, b) in {(q+1, 0), (q, 1)}, q = p^e, f' in (p^q, x^q, y^q, z^q) and no pure x,y-term in f' imply ppt(f) > 1/q",
        run: extremal_strict,
    },
    RuleDef {
        id: "frobenius_sum_strict",
        reference: "sums of p^e-th powers over an unramified base",
        statement: "p > 2 and f = p^q + x_2^q + ... + x_n^q with q = p^e imply ppt(f) > 1/q",
        run: frobenius_sum_strict,
    },
    RuleDef {
        id: "elliptic",
        reference: "supersingular cubic with a p-term",
        statement: "p = 2 mod 3 and f = p^3 + x y (u x + v y) (or p^3 + x^3 + y^3) imply ppt(f) <= 1 - 1/p^2",
        run: elliptic,
    },
    RuleDef {
        id: "pth_root_upper",
        reference: "p-th roots modulo a power of the uniformizer",
        statement: "f = h^p mod p^2 over W(k) implies ppt(f) <= 1 - 1/p; f = h^p mod (ζ - 1)^p over W(k)[ζ_p] implies ppt(f) <= 1/p",
        run: pth_root_upper,
    },
    RuleDef {
        id: "registry",
        reference: "table of known values",
        statement: "exact values for x^3 + y^3 + z^3 and for x^2 + 4 over Z_2",
        run: registry,
    },
];

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rat {
    Rat::new(n, d)
}

fn unit_upper(_: &Input) -> Result<Option<Outcome>> {
    Ok(Some(Outcome {
        hypotheses: vec!["f is nonzero and not a unit".into()],
        upper: Some(Bound::closed(Rat::one())),
        ..Outcome::default()
    }))
}

fn fpt_lower(i: &Input) -> Result<Option<Outcome>> {
    let Some(x) = i.red.lower() else {
        return Ok(None);
    };
    Ok(Some(Outcome {
        hypotheses: vec![format!("f mod π = {}", i.red.fbar), i.red.describe()],
        lower: Some(Bound::closed(x)),
        ..Outcome::default()
    }))
}

/// `fpt` of the diagonal form with the given exponents; exponent 1 makes
/// the form smooth.
fn diagonal_fpt(p: crate::exact::Prime, exps: &[u64]) -> Result<Rat> {
    if exps.contains(&1) {
        return Ok(Rat::one());
    }
    let exps: Vec<u32> = exps
        .iter()
        .map(|&s| u32::try_from(s).map_err(|_| Error::Overflow("a diagonal exponent")))
        .collect::<Result<_>>()?;
    Ok(fpt_diagonal(&DiagonalData::new(p, exps)?))
}

fn blowup_lower(i: &Input) -> Result<Option<Outcome>> {
    let Some((d, shape)) = i.blowup_shape() else {
        return Ok(None);
    };
    let exps = d.exponents();
    let x = diagonal_fpt(i.ctx.p, &exps)?;
    Ok(Some(Outcome {
        hypotheses: vec![
            format!("shape {shape}"),
            format!("f_0 diagonal with exponents {exps:?}, fpt(f_0) = {x}"),
        ],
        lower: Some(Bound::closed(x)),
        ..Outcome::default()
    }))
}

fn lct_upper(i: &Input) -> Result<Option<Outcome>> {
    let Some((d, shape)) = i.blowup_shape() else {
        return Ok(None);
    };
    let exps = d.exponents();
    let sum: Rat = exps.iter().map(|&s| rat(1, s)).sum();
    let lct = sum.min(Rat::one());
    Ok(Some(Outcome {
        hypotheses: vec![format!("shape {shape}"), format!("lct = min(1, Σ 1/s_i) = {lct}")],
        upper: Some(Bound::closed(lct)),
        ..Outcome::default()
    }))
}

pub(crate) enum Check {
    Holds(&'static str),
    Fails,
    Skipped,
}

/// Decide `f^b ∈ (π^q, x_1^q, ..., x_n^q)` when affordable.
pub(crate) fn frobenius_containment(f: &MixedPoly, b: &BigInt, q: u64, budget: u64) -> Result<Check> {
    let ideal = WeightedMonomialIdeal::frobenius_power(f.nvars(), q)?;
    if b.is_one() {
        return Ok(if weighted_membership(f, &ideal).holds {
            Check::Holds("termwise membership")
        } else {
            Check::Fails
        });
    }
    if let Some(d) = super::shapes::match_diagonal(f) {
        // any multi-index summing to b has some l_i with s_i l_i >= q
        let room: BigInt = d.exponents().iter().map(|&s| BigInt::from((q - 1) / s)).sum();
        if &room < b {
            return Ok(Check::Holds("pigeonhole on exponents"));
        }
    }
    let Some(bu) = b.to_u64() else {
        return Ok(Check::Skipped);
    };
    let nocc = (0..f.nvars())
        .filter(|&i| f.terms().keys().any(|k| k.mono.exps()[i] > 0))
        .count() as u32;
    let size = (q as u128).checked_pow(nocc + 1).unwrap_or(u128::MAX);
    let cost = size.saturating_mul(bu as u128).saturating_mul(f.len() as u128);
    if cost > budget as u128 {
        return Ok(Check::Skipped);
    }
    match power_in_ideal(f, bu as u32, &ideal, size as usize + 1) {
        Ok(true) => Ok(Check::Holds("truncated expansion")),
        Ok(false) => Ok(Check::Fails),
        Err(Error::ResourceLimit { .. }) => Ok(Check::Skipped),
        Err(e) => Err(e),
    }
}

fn containment_note(check: &Check, b: &BigInt, q: u64) -> String {
    match check {
        Check::Holds(how) => format!("f^{b} in (π^{q}, x^{q}) verified by {how}"),
        Check::Fails => format!("f^{b} not in (π^{q}, x^{q})"),
        Check::Skipped => format!("f^{b} in (π^{q}, x^{q}) not re-checked (size guard)"),
    }
}

fn alarm(rule: &str, detail: String) -> Error {
    Error::InternalInconsistency {
        first: rule.to_string(),
        second: "containment check".to_string(),
        detail,
    }
}

fn ramified_upper(i: &Input) -> Result<Option<Outcome>> {
    if !i.ramified_root() || i.red.fbar.is_zero() || i.a() <= i.def_level {
        return Ok(None);
    }
    let d = i.a() - i.def_level;
    let Some((b, e)) = i.red.upper_at(d) else {
        return Ok(None);
    };
    if e == 0 {
        return Ok(None);
    }
    let q = i.ctx.p.pow(e)?;
    let value = Rat::new(b.clone(), BigInt::from(q));
    if value >= Rat::one() {
        return Ok(None);
    }
    let check = frobenius_containment(i.f, &b, q, i.opts.containment_budget)?;
    if let Check::Fails = check {
        return Err(alarm("ramified_upper", containment_note(&check, &b, q)));
    }
    Ok(Some(Outcome {
        hypotheses: vec![
            format!(
                "f is defined over level {}, the ring is at level {}",
                i.def_level,
                i.a()
            ),
            i.red.describe(),
            format!("fpt(f mod π) <= {b}/{q} with {e} <= {d}"),
            containment_note(&check, &b, q),
        ],
        upper: Some(Bound::closed(value)),
        ..Outcome::default()
    }))
}

fn pth_power_ramified(i: &Input) -> Result<Option<Outcome>> {
    if !i.ramified_root() || i.red.fbar.is_zero() || i.a() <= i.def_level {
        return Ok(None);
    }
    let d = i.a() - i.def_level;
    let mut g = i.red.fbar.clone();
    let mut e = 0u32;
    while e < d {
        match g.pth_root() {
            Some(h) => {
                g = h;
                e += 1;
            }
            None => break,
        }
    }
    if e == 0 {
        return Ok(None);
    }
    let q = i.ctx.p.pow(e)?;
    let check = frobenius_containment(i.f, &BigInt::one(), q, i.opts.containment_budget)?;
    if let Check::Fails = check {
        return Err(alarm("pth_power_ramified", containment_note(&check, &BigInt::one(), q)));
    }
    Ok(Some(Outcome {
        hypotheses: vec![
            format!("f mod π = ({g})^{q}"),
            format!(
                "f is defined over level {}, the ring is at level {}",
                i.def_level,
                i.a()
            ),
            containment_note(&check, &BigInt::one(), q),
        ],
        upper: Some(Bound::closed(Rat::inv_pow(i.p(), e))),
        ..Outcome::default()
    }))
}

fn exact_ramified(i: &Input) -> Result<Option<Outcome>> {
    if !i.ramified_root() {
        return Ok(None);
    }
    let mut candidates: Vec<(Rat, bool, String)> = Vec::new();
    if let Some(x) = &i.red.exact {
        candidates.push((x.clone(), true, format!("lower bound fpt(f mod π) = {x}")));
    }
    if let Some((d, shape)) = i.blowup_shape() {
        let x = diagonal_fpt(i.ctx.p, &d.exponents())?;
        candidates.push((
            x.clone(),
            false,
            format!("lower bound fpt(f_0) = {x} from the blow-up shape {shape}"),
        ));
    }
    for (x, from_reduction, why) in candidates {
        let Some(e) = x.p_power_denominator(i.p()) else {
            continue;
        };
        if e > i.a() {
            continue;
        }
        let q = i.ctx.p.pow(e)?;
        let b = (x.clone() * Rat::int(q)).floor();
        let mut hyps = vec![
            why,
            format!("{x} = {b}/{q} terminates after {e} digits, e <= a = {}", i.a()),
        ];
        // over the definition level the containment follows from the
        // reduction; otherwise it has to be verified here
        let guaranteed = from_reduction && e <= i.a() - i.def_level;
        if e == 0 {
            hyps.push("value 1 meets the trivial upper bound".into());
        } else {
            let check = frobenius_containment(i.f, &b, q, i.opts.containment_budget)?;
            match (&check, guaranteed) {
                (Check::Fails, true) => return Err(alarm("exact_ramified", containment_note(&check, &b, q))),
                (Check::Fails, false) | (Check::Skipped, false) => continue,
                _ => {}
            }
            if guaranteed {
                hyps.push(format!(
                    "f is defined over level {}, so {e} <= a - {}",
                    i.def_level, i.def_level
                ));
            }
            hyps.push(containment_note(&check, &b, q));
        }
        return Ok(Some(Outcome {
            hypotheses: hyps,
            lower: Some(Bound::closed(x.clone())),
            upper: Some(Bound::closed(x)),
        }));
    }
    Ok(None)
}

fn diagonal_ramified(i: &Input) -> Result<Option<Outcome>> {
    if !i.ramified_root() || i.a() == 0 {
        return Ok(None);
    }
    let Some(d) = i.diag_with_pi() else {
        return Ok(None);
    };
    let exps = d.exponents();
    let n = exps.len() as u64;
    if n >= i.p() || exps.iter().any(|&s| s < 2) {
        return Ok(None);
    }
    let exps32: Vec<u32> = match exps.iter().map(|&s| u32::try_from(s)).collect() {
        Ok(v) => v,
        Err(_) => return Ok(None),
    };
    let data = DiagonalData::new(i.ctx.p, exps32)?;
    let LValue::Finite(l) = compute_l(&data) else {
        return Ok(None);
    };
    if i.a() < l {
        return Ok(None);
    }
    let (_, num) = fpt_numerator(&data).expect("L is finite");
    let fpt = fpt_diagonal(&data);
    let q = i.ctx.p.pow(l)?;
    let check = frobenius_containment(i.f, &num, q, i.opts.containment_budget)?;
    let mut hyps = vec![
        format!("exponents {exps:?} (π first), n = {n} < p = {}", i.p()),
        format!("L = {l} <= a = {}", i.a()),
        format!("fpt(f_0) = {num}/{q} = {fpt}"),
        containment_note(&check, &num, q),
    ];
    if let Check::Fails = check {
        return Err(alarm("diagonal_ramified", containment_note(&check, &num, q)));
    }
    let exact = n == 2 || d.all_equal().is_some();
    if exact {
        hyps.push("n = 2 or all exponents equal: the blow-up bound matches".into());
    }
    Ok(Some(Outcome {
        hypotheses: hyps,
        lower: exact.then(|| Bound::closed(fpt.clone())),
        upper: Some(Bound::closed(fpt)),
    }))
}

fn high_degree_ramified(i: &Input) -> Result<Option<Outcome>> {
    if !i.ramified_root() {
        return Ok(None);
    }
    let Some(d) = i.diag.as_ref().filter(|d| d.pi_exp.is_some() && !d.xs.is_empty()) else {
        return Ok(None);
    };
    let Some(deg) = d.all_equal() else {
        return Ok(None);
    };
    let s = floor_log_p(deg, i.p());
    if s == 0 || i.a() < s {
        return Ok(None);
    }
    let q = i.ctx.p.pow(s)?;
    let check = frobenius_containment(i.f, &BigInt::one(), q, i.opts.containment_budget)?;
    if !matches!(check, Check::Holds(_)) {
        return Err(alarm(
            "high_degree_ramified",
            containment_note(&check, &BigInt::one(), q),
        ));
    }
    Ok(Some(Outcome {
        hypotheses: vec![
            format!("all exponents equal d = {deg}, {q} <= d < {}", q * i.p()),
            format!("s = {s} <= a = {}", i.a()),
            containment_note(&check, &BigInt::one(), q),
        ],
        upper: Some(Bound::closed(Rat::inv_pow(i.p(), s))),
        ..Outcome::default()
    }))
}

fn extremal_strict(i: &Input) -> Result<Option<Outcome>> {
    let Some(m) = match_extremal(i.f) else {
        return Ok(None);
    };
    let vars = i.f.vars();
    Ok(Some(Outcome {
        hypotheses: vec![
            format!("(a,b)=({},{}) with q = p^{} = {}", m.ab.0, m.ab.1, m.e, m.q),
            format!("x = {}, y = {}", vars[m.x], vars[m.y]),
            format!("f' = {} in (p^{q}, x^{q}, y^{q}, z^{q})", m.rest, q = m.q),
            "every term of f' has a factor p or a z variable".into(),
        ],
        lower: Some(Bound::open(Rat::inv_pow(i.p(), m.e))),
        ..Outcome::default()
    }))
}

fn frobenius_sum_strict(i: &Input) -> Result<Option<Outcome>> {
    if i.p() == 2 || i.ctx.cyclotomic || i.a() != 0 {
        return Ok(None);
    }
    let Some(d) = i.diag_with_pi() else {
        return Ok(None);
    };
    let Some(q) = d.all_equal() else {
        return Ok(None);
    };
    let Some(e) = log_p(q, i.p()) else {
        return Ok(None);
    };
    Ok(Some(Outcome {
        hypotheses: vec![
            format!("p = {} > 2, unramified base", i.p()),
            format!("f = p^{q} + sum of {} {q}-th powers, q = p^{e}", d.xs.len()),
        ],
        lower: Some(Bound::open(Rat::inv_pow(i.p(), e))),
        ..Outcome::default()
    }))
}

fn elliptic(i: &Input) -> Result<Option<Outcome>> {
    if i.p() % 3 != 2 {
        return Ok(None);
    }
    let Some((form, x, y)) = match_elliptic(i.f) else {
        return Ok(None);
    };
    let p = i.p();
    let k = (p * p - 1) / 3;
    if lucas_residue(2 * k, k, i.ctx.p) != 0 {
        return Err(Error::InternalInconsistency {
            first: "elliptic".into(),
            second: "lucas_residue".into(),
            detail: format!("C({}, {k}) is a unit mod {p}", 2 * k),
        });
    }
    let vars = i.f.vars();
    let mut hyps = vec![
        format!("p = {p} = 2 mod 3, unramified base"),
        format!("C(2k, k) = 0 mod p for k = (p^2 - 1)/3 = {k}"),
    ];
    match form {
        EllipticForm::NodalProduct => {
            hyps.push(format!("f - p^3 lies in ({0}^2 {1}, {0} {1}^2)", vars[x], vars[y]));
        }
        EllipticForm::DiagonalCubic => {
            hyps.push("f = p^3 + x^3 + y^3".into());
            if p != 2 {
                hyps.push(
                    "x^3 + y^3 = x y (-ξ x + (ξ + 1) y) after x -> x + y, y -> x + ξ y over W(k[ξ]), ξ^3 = 1".into(),
                );
            } else {
                hyps.push("x^3 + y^3 = (x + y)(x + ξ y)(x + ξ^2 y) over W(F_4)".into());
            }
        }
    }
    Ok(Some(Outcome {
        hypotheses: hyps,
        upper: Some(Bound::closed(Rat::one() - Rat::new(1, p * p))),
        ..Outcome::default()
    }))
}

fn pth_root_upper(i: &Input) -> Result<Option<Outcome>> {
    let Some(t) = pth_root_upper_modulus(i.f) else {
        return Ok(None);
    };
    let Some(h) = pth_root_modulo(i.f, t)? else {
        return Ok(None);
    };
    let p = i.p();
    let (value, hyp) = if i.ctx.cyclotomic {
        (Rat::new(1, p), format!("f = ({h})^{p} mod ϖ^{p}, ϖ = ζ - 1"))
    } else if p == 2 {
        (Rat::new(1, 2), format!("f = ({h})^2 mod 4 = (ζ - 1)^2 with ζ = -1"))
    } else {
        (Rat::one() - Rat::new(1, p), format!("f = ({h})^{p} mod p^2"))
    };
    Ok(Some(Outcome {
        hypotheses: vec![hyp],
        upper: Some(Bound::closed(value)),
        ..Outcome::default()
    }))
}

fn registry(i: &Input) -> Result<Option<Outcome>> {
    let p = i.p();
    let value = if i.ctx.cyclotomic {
        None
    } else if Family::FermatCubic.matches(i.f) && p != 3 {
        match (p % 3, i.a()) {
            (1, _) => Some((Rat::one(), "x^3 + y^3 + z^3, ordinary reduction".to_string())),
            (_, 0) => Some((
                Rat::one(),
                "x^3 + y^3 + z^3 over W(k), p = 2 mod 3: perfectoid pure".to_string(),
            )),
            (_, _) => Some((
                Rat::one() - Rat::new(1, p),
                "x^3 + y^3 + z^3 over a base containing p^{1/p}, supersingular reduction".to_string(),
            )),
        }
    } else if Family::PiSquare.matches(i.f) && p == 2 && i.a() == 0 && i.f.nvars() == 1 {
        Some((Rat::new(1, 2), "x^2 + 4 over Z_2".to_string()))
    } else {
        None
    };
    Ok(value.map(|(x, why)| Outcome {
        hypotheses: vec![why],
        lower: Some(Bound::closed(x.clone())),
        upper: Some(Bound::closed(x)),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Prime;
    use crate::poly::{Monomial, Uniformizer};

    fn mp(p: u64, a: u32, vars: &[&str], terms: &[(u64, &[u32], i64)]) -> MixedPoly {
        MixedPoly::from_terms(
            Prime::new(p).unwrap(),
            Uniformizer::Root { level: a },
            vars.iter().map(|s| s.to_string()).collect(),
            terms
                .iter()
                .map(|(pi, e, c)| (*pi, Monomial::from_exps(e.to_vec()), *c)),
        )
    }

    #[test]
    fn containment_routes_agree() {
        // (π^3 + x^3)^3 against (π^5, x^5) at p = 5, a = 1
        let f = mp(5, 1, &["x"], &[(3, &[0], 1), (0, &[3], 1)]);
        let b = BigInt::from(3);
        assert!(matches!(
            frobenius_containment(&f, &b, 5, 1 << 20).unwrap(),
            Check::Holds("pigeonhole on exponents")
        ));
        // a non-diagonal polynomial goes through the truncated expansion
        let g = mp(5, 1, &["x"], &[(3, &[0], 1), (0, &[3], 1), (1, &[2], 1)]);
        assert!(matches!(
            frobenius_containment(&g, &b, 5, 1 << 20).unwrap(),
            Check::Holds("truncated expansion")
        ));
        let h = mp(5, 1, &["x"], &[(1, &[0], 1), (0, &[1], 1)]);
        assert!(matches!(
            frobenius_containment(&h, &b, 5, 1 << 20).unwrap(),
            Check::Fails
        ));
    }

    #[test]
    fn reduction_upper_rounds_up() {
        let opts = CertifyOptions::default();
        let f = mp(5, 0, &["x"], &[(2, &[0], 1), (0, &[2], 1)]);
        let r = ReductionFpt::compute(&f, &opts);
        assert_eq!(r.exact, Some(Rat::new(1, 2)));
        assert_eq!(r.upper_at(1), Some((BigInt::from(3), 1)));
        assert_eq!(r.upper_at(2), Some((BigInt::from(13), 2)));
    }

    #[test]
    fn oracle_route_for_non_diagonal_reductions() {
        let opts = CertifyOptions::default();
        // x^2 + x y + y^3 over F_3 has a linear-free non-diagonal reduction
        let f = mp(3, 0, &["x", "y"], &[(0, &[2, 0], 1), (0, &[1, 1], 1), (0, &[0, 3], 1)]);
        let r = ReductionFpt::compute(&f, &opts);
        assert!(r.exact.is_none());
        assert_eq!(r.brackets.len(), opts.oracle_level as usize);
        assert!(r.lower().is_some());
    }
}
