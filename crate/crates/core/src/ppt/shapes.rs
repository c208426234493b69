//! Structural matchers for the polynomial shapes the certification rules
//! understand. Matching is literal: no change of coordinates is attempted.

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{MixedPoly, Monomial, TermKey, WeightedMonomialIdeal};

/// `π^{s_0} + x_{i_1}^{s_1} + ... + x_{i_m}^{s_m}` with every coefficient 1,
/// pairwise distinct variables and an optional π-term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalShape {
    pub pi_exp: Option<u64>,
    pub xs: Vec<(usize, u32)>,
}

impl DiagonalShape {
    /// Exponents with the π-exponent first when present.
    pub fn exponents(&self) -> Vec<u64> {
        self.pi_exp
            .into_iter()
            .chain(self.xs.iter().map(|&(_, s)| s as u64))
            .collect()
    }

    /// Number of summands.
    pub fn n(&self) -> usize {
        self.xs.len() + usize::from(self.pi_exp.is_some())
    }

    pub fn all_equal(&self) -> Option<u64> {
        let e = self.exponents();
        e.iter().all(|&s| s == e[0]).then_some(e[0])
    }
}

/// The form matched on: canonical for `π = p^{1/p^a}`, as given otherwise.
pub(crate) fn normal_form(f: &MixedPoly) -> MixedPoly {
    f.canonical()
}

pub fn match_diagonal(f: &MixedPoly) -> Option<DiagonalShape> {
    let g = normal_form(f);
    let mut pi_exp = None;
    let mut xs = Vec::new();
    for (k, c) in g.terms() {
        if !c.is_one() {
            return None;
        }
        if k.mono.is_one() {
            if k.pi == 0 || pi_exp.is_some() {
                return None;
            }
            pi_exp = Some(k.pi);
            continue;
        }
        if k.pi != 0 {
            return None;
        }
        let mut support = k.mono.support();
        let (i, s) = support.next()?;
        if support.next().is_some() {
            return None;
        }
        xs.push((i, s));
    }
    xs.sort_unstable();
    if xs.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    if xs.is_empty() && pi_exp.is_none() {
        return None;
    }
    Some(DiagonalShape { pi_exp, xs })
}

/// Does every declared variable occur in `f`?
pub fn all_vars_occur(f: &MixedPoly) -> bool {
    (0..f.nvars()).all(|i| f.terms().keys().any(|k| k.mono.exps()[i] > 0))
}

/// `x^A y^B + x^B y^A + f'` with `(A, B)` one of `(q+1, 0)`, `(q, 1)` for
/// `q = p^e`, and the remainder `f'` checked separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalMatch {
    pub e: u32,
    pub q: u64,
    pub x: usize,
    pub y: usize,
    pub ab: (u32, u32),
    pub rest: MixedPoly,
}

/// Find an extremal split at the unramified level. Every term of the
/// remainder must lie in `(p^q, x^q, y^q, z^q)` and involve either a factor
/// of `p` or one of the other variables `z`.
pub fn match_extremal(f: &MixedPoly) -> Option<ExtremalMatch> {
    if f.is_cyclotomic() || f.ram_level() != 0 {
        return None;
    }
    let g = normal_form(f);
    let p = f.p().get();
    let n = f.nvars();
    let max_deg = g.terms().keys().map(|k| k.mono.degree()).max().unwrap_or(0);
    let mut q = p;
    let mut e = 1u32;
    while q < max_deg {
        for x in 0..n {
            for y in x + 1..n {
                for ab in [(q as u32 + 1, 0u32), (q as u32, 1u32)] {
                    if let Some(m) = try_extremal(&g, e, q, x, y, ab) {
                        return Some(m);
                    }
                }
            }
        }
        q = q.checked_mul(p)?;
        e += 1;
    }
    None
}

fn try_extremal(g: &MixedPoly, e: u32, q: u64, x: usize, y: usize, ab: (u32, u32)) -> Option<ExtremalMatch> {
    let n = g.nvars();
    let mono = |a: u32, b: u32| {
        let mut v = vec![0u32; n];
        v[x] = a;
        v[y] = b;
        TermKey::new(0, Monomial::from_exps(v))
    };
    let k1 = mono(ab.0, ab.1);
    let k2 = mono(ab.1, ab.0);
    if !g.terms().get(&k1)?.is_one() || !g.terms().get(&k2)?.is_one() {
        return None;
    }
    let mut rest = g.like_zero();
    for (k, c) in g.terms() {
        if k != &k1 && k != &k2 {
            rest.add_term(k.clone(), c.clone());
        }
    }
    let ideal = WeightedMonomialIdeal::frobenius_power(n, q).ok()?;
    for (k, c) in rest.terms() {
        let order = rest.effective_order(k, c);
        if !ideal.contains_term(order, &k.mono) {
            return None;
        }
        let z_degree: u32 = (0..n).filter(|&i| i != x && i != y).map(|i| k.mono.exps()[i]).sum();
        if order == 0 && z_degree == 0 {
            return None;
        }
    }
    Some(ExtremalMatch { e, q, x, y, ab, rest })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipticForm {
    /// `π^3 + x^3 + y^3` in two variables.
    DiagonalCubic,
    /// `π^3 + x y (u x + v y)` for some `u, v`.
    NodalProduct,
}

/// Matches the two cubic shapes over the unramified base. Returns the form
/// and the pair of variables playing `x, y`.
pub fn match_elliptic(f: &MixedPoly) -> Option<(EllipticForm, usize, usize)> {
    if f.is_cyclotomic() || f.ram_level() != 0 {
        return None;
    }
    let g = normal_form(f);
    let n = g.nvars();
    let pi3 = TermKey::new(3, Monomial::one(n));
    if !g.terms().get(&pi3)?.is_one() {
        return None;
    }
    if let Some(d) = match_diagonal(&g) {
        if n == 2 && d.pi_exp == Some(3) && d.xs.len() == 2 && d.xs.iter().all(|&(_, s)| s == 3) {
            return Some((EllipticForm::DiagonalCubic, 0, 1));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let mut x2y = vec![0u32; n];
            x2y[x] = 2;
            x2y[y] = 1;
            let mut xy2 = vec![0u32; n];
            xy2[x] = 1;
            xy2[y] = 2;
            let (a, b) = (Monomial::from_exps(x2y), Monomial::from_exps(xy2));
            let others = g.terms().keys().filter(|k| **k != pi3);
            let mut any = false;
            let mut ok = true;
            for k in others {
                any = true;
                if !(a.divides(&k.mono) || b.divides(&k.mono)) {
                    ok = false;
                    break;
                }
            }
            if ok && any && x < y {
                return Some((EllipticForm::NodalProduct, x, y));
            }
        }
    }
    None
}

/// Declared polynomial families. A declared family must match the input
/// literally; undeclared input is matched against every family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `p^3 + x^3 + y^3`
    DiagCubicP3,
    /// `p^3 + x y (u x + v y)`
    HXyLinear,
    /// `x^3 + y^3 + z^3`
    FermatCubic,
    /// `x^2 + p^2`
    PiSquare,
    /// `π^q + x_2^q + ... + x_n^q` with `q = p^e`
    FrobeniusSum,
    /// Extremal reduction plus a remainder in the Frobenius power
    Extremal,
    /// `π^d + x_2^d + ... + x_n^d` with `d >= p`
    HighDegreeFermat,
    /// `π^{s_1} + x_2^{s_2} + ... + x_n^{s_n}`
    Diagonal,
    /// `h^p` modulo `p^2` (or modulo `ϖ^p` over the cyclotomic base)
    PthRoot,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::DiagCubicP3,
        Family::HXyLinear,
        Family::FermatCubic,
        Family::PiSquare,
        Family::FrobeniusSum,
        Family::Extremal,
        Family::HighDegreeFermat,
        Family::Diagonal,
        Family::PthRoot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::DiagCubicP3 => "diag_cubic_p3",
            Family::HXyLinear => "h_xy_linear",
            Family::FermatCubic => "fermat_cubic",
            Family::PiSquare => "pi_square",
            Family::FrobeniusSum => "frobenius_sum",
            Family::Extremal => "extremal",
            Family::HighDegreeFermat => "high_degree_fermat",
            Family::Diagonal => "diagonal",
            Family::PthRoot => "pth_root",
        }
    }

    /// Rules whose firing counts as a bound for this family.
    pub fn rules(self) -> &'static [&'static str] {
        match self {
            Family::DiagCubicP3 | Family::HXyLinear => &["elliptic"],
            Family::FermatCubic => &["registry", "exact_ramified"],
            Family::PiSquare => &["registry"],
            Family::FrobeniusSum => &["frobenius_sum_strict", "high_degree_ramified"],
            Family::Extremal => &["extremal_strict"],
            Family::HighDegreeFermat => &["high_degree_ramified", "exact_ramified"],
            Family::Diagonal => &["blowup_lower", "diagonal_ramified"],
            Family::PthRoot => &["pth_root_upper"],
        }
    }

    /// Structural test. `PthRoot` is decided by the root computation itself.
    pub fn matches(self, f: &MixedPoly) -> bool {
        let p = f.p().get();
        let diag = match_diagonal(f);
        let nvars = f.nvars();
        match self {
            Family::DiagCubicP3 => matches!(match_elliptic(f), Some((EllipticForm::DiagonalCubic, _, _))),
            Family::HXyLinear => matches!(match_elliptic(f), Some((EllipticForm::NodalProduct, _, _))),
            Family::FermatCubic => diag.is_some_and(|d| {
                d.pi_exp.is_none() && d.xs.len() == 3 && nvars == 3 && d.xs.iter().all(|&(_, s)| s == 3)
            }),
            Family::PiSquare => diag.is_some_and(|d| d.pi_exp == Some(2) && d.xs.len() == 1 && d.xs[0].1 == 2),
            Family::FrobeniusSum => diag.is_some_and(|d| {
                d.pi_exp.is_some() && !d.xs.is_empty() && d.all_equal().is_some_and(|q| is_power_of(q, p))
            }),
            Family::Extremal => match_extremal(f).is_some(),
            Family::HighDegreeFermat => {
                diag.is_some_and(|d| d.pi_exp.is_some() && !d.xs.is_empty() && d.all_equal().is_some_and(|s| s >= p))
            }
            Family::Diagonal => diag.is_some_and(|d| d.pi_exp.is_some() && !d.xs.is_empty()),
            Family::PthRoot => super::roots::pth_root_upper_modulus(f)
                .and_then(|t| super::roots::pth_root_modulo(f, t).ok().flatten())
                .is_some(),
        }
    }

    /// Every family `f` matches, in declaration order.
    pub fn detect(f: &MixedPoly) -> Vec<Family> {
        Family::ALL.into_iter().filter(|fam| fam.matches(f)).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
            Error::invalid(format!("unknown family `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

/// `Some(e)` when `q = p^e` with `e >= 1`.
pub fn log_p(q: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    let mut x = q;
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    (x == 1 && e >= 1).then_some(e)
}

fn is_power_of(q: u64, p: u64) -> bool {
    log_p(q, p).is_some()
}

/// The unique `s >= 0` with `p^s <= d < p^{s+1}`.
pub fn floor_log_p(d: u64, p: u64) -> u32 {
    let mut s = 0;
    let mut q = p;
    while q <= d {
        s += 1;
        match q.checked_mul(p) {
            Some(n) => q = n,
            None => break,
        }
    }
    s
}
