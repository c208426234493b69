use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::monomial::{format_monomial, Monomial};
use crate::exact::Prime;

/// Sparse multivariate polynomial over `F_p`. Coefficients are kept in
/// `[1, p - 1]`; zero terms are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePolyFp {
    p: Prime,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, u64>,
}

impl SparsePolyFp {
    pub fn zero(p: Prime, vars: Vec<String>) -> Self {
        SparsePolyFp {
            p,
            vars,
            terms: BTreeMap::new(),
        }
    }

    /// Build from integer-coefficient terms, reducing mod `p` and merging.
    pub fn from_terms<I>(p: Prime, vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut f = SparsePolyFp::zero(p, vars);
        let pv = p.get() as i64;
        for (m, c) in terms {
            assert_eq!(m.nvars(), f.vars.len(), "monomial arity mismatch");
            f.add_term(m, c.rem_euclid(pv) as u64);
        }
        f
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
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

    pub fn has_constant_term(&self) -> bool {
        self.terms.keys().any(Monomial::is_one)
    }

    pub fn has_linear_term(&self) -> bool {
        self.terms.keys().any(|m| m.degree() == 1)
    }

    /// Indices of the variables that actually occur.
    pub fn occurring_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.exps()[i] > 0))
            .collect()
    }

    /// Add `c * m` with `c` already reduced into `[0, p)`.
    pub(crate) fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let p = self.p.get();
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let v = (*o.get() + c) % p;
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &SparsePolyFp) -> SparsePolyFp {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &SparsePolyFp) -> SparsePolyFp {
        self.mul_filtered(other, |_| true)
    }

    /// Product with every monomial having some exponent `>= cap` deleted.
    /// The result agrees with the full product modulo `(x_1^cap, ..., x_n^cap)`.
    pub fn mul_truncated(&self, other: &SparsePolyFp, cap: u32) -> SparsePolyFp {
        self.mul_filtered(other, |m| m.exps().iter().all(|&e| e < cap))
    }

    fn mul_filtered(&self, other: &SparsePolyFp, keep: impl Fn(&Monomial) -> bool) -> SparsePolyFp {
        self.check_compatible(other);
        let p = self.p.get();
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let m = ma.mul(mb);
                if keep(&m) {
                    let slot = acc.entry(m).or_insert(0);
                    *slot = (*slot + ca * cb) % p;
                }
            }
        }
        acc.retain(|_, c| *c != 0);
        SparsePolyFp {
            p: self.p,
            vars: self.vars.clone(),
            terms: acc,
        }
    }

    pub fn pow(&self, n: u32) -> SparsePolyFp {
        let mut acc = SparsePolyFp::from_terms(self.p, self.vars.clone(), [(Monomial::one(self.nvars()), 1)]);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f^p`, computed as the Frobenius: every exponent multiplied by `p`.
    pub fn frobenius(&self) -> SparsePolyFp {
        let p = self.p.get() as u32;
        SparsePolyFp {
            p: self.p,
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, &c)| (m.scale(p), c)).collect(),
        }
    }

    /// The `h` with `h^p = f`, which exists exactly when every exponent is
    /// divisible by `p` (coefficients in `F_p` are Frobenius-fixed).
    pub fn pth_root(&self) -> Option<SparsePolyFp> {
        let p = self.p.get() as u32;
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            terms.insert(m.exact_div(p)?, c);
        }
        Some(SparsePolyFp {
            p: self.p,
            vars: self.vars.clone(),
            terms,
        })
    }

    /// If `f = sum_i c_i x_i^{s_i}` over pairwise distinct variables, the
    /// pairs `(i, s_i)` in variable order.
    pub fn diagonal_exponents(&self) -> Option<Vec<(usize, u32)>> {
        let mut out = Vec::with_capacity(self.len());
        for m in self.terms.keys() {
            let mut support = m.support();
            let (i, s) = support.next()?;
            if support.next().is_some() {
                return None;
            }
            out.push((i, s));
        }
        out.sort_unstable();
        if out.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(out)
    }

    fn check_compatible(&self, other: &SparsePolyFp) {
        assert_eq!(self.p, other.p, "polynomials over different primes");
        assert_eq!(self.vars.len(), other.vars.len(), "variable universes differ");
    }
}

impl fmt::Display for SparsePolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono = format_monomial(m, &self.vars);
            match (c, mono.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{mono}")?,
                (_, false) => write!(f, "{c}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vars(n: usize) -> Vec<String> {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn poly(p: u64, terms: &[(&[u32], i64)]) -> SparsePolyFp {
        let n = terms[0].0.len();
        SparsePolyFp::from_terms(
            Prime::new(p).unwrap(),
            vars(n),
            terms.iter().map(|(e, c)| (Monomial::from_exps(e.to_vec()), *c)),
        )
    }

    #[test]
    fn truncated_products() {
        let xy2 = poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert!(xy2.mul_truncated(&xy2, 2).is_zero());

        let xy3 = poly(3, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(
            xy3.mul_truncated(&xy3, 3),
            poly(3, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)])
        );

        let f = poly(5, &[(&[2, 0], 1), (&[1, 1], 1)]);
        let g = poly(5, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(f.mul_truncated(&g, 3), poly(5, &[(&[2, 1], 2), (&[1, 2], 1)]));
    }

    #[test]
    fn pth_roots() {
        let f = poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(f.pth_root().unwrap(), poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]));
        let f = poly(3, &[(&[3, 0], 1), (&[0, 3], 1)]);
        assert_eq!(f.pth_root().unwrap(), poly(3, &[(&[1, 0], 1), (&[0, 1], 1)]));
        let f = poly(3, &[(&[3, 0], 1), (&[0, 1], 1)]);
        assert!(f.pth_root().is_none());
    }

    #[test]
    fn diagonal_detection() {
        let f = poly(5, &[(&[3, 0, 0], 1), (&[0, 3, 0], 2), (&[0, 0, 4], 1)]);
        assert_eq!(f.diagonal_exponents(), Some(vec![(0, 3), (1, 3), (2, 4)]));
        let g = poly(5, &[(&[3, 0], 1), (&[1, 1], 1)]);
        assert_eq!(g.diagonal_exponents(), None);
        let h = poly(5, &[(&[3, 0], 1), (&[2, 0], 1)]);
        assert_eq!(h.diagonal_exponents(), None);
    }

    #[test]
    fn display() {
        let f = poly(5, &[(&[2, 0], 1), (&[1, 1], 3), (&[0, 0], 4)]);
        assert_eq!(f.to_string(), "x^2 + 3*x*y + 4");
    }

    fn arb_poly(p: u64, n: usize, max_terms: usize) -> impl Strategy<Value = SparsePolyFp> {
        prop::collection::vec((prop::collection::vec(0u32..4, n), 1i64..p as i64), 1..=max_terms).prop_map(move |ts| {
            SparsePolyFp::from_terms(
                Prime::new(p).unwrap(),
                vars(n),
                ts.into_iter().map(|(e, c)| (Monomial::from_exps(e), c)),
            )
        })
    }

    fn truncate(f: &SparsePolyFp, cap: u32) -> SparsePolyFp {
        let mut out = SparsePolyFp::zero(f.p, f.vars.clone());
        for (m, &c) in &f.terms {
            if m.exps().iter().all(|&e| e < cap) {
                out.add_term(m.clone(), c);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn truncation_commutes_with_product(f in arb_poly(5, 3, 6), g in arb_poly(5, 3, 6), cap in 1u32..6) {
            prop_assert_eq!(f.mul_truncated(&g, cap), truncate(&f.mul(&g), cap));
        }

        #[test]
        fn pth_root_inverts_frobenius(h in arb_poly(3, 3, 8)) {
            let f = h.pow(3);
            prop_assert_eq!(f.clone(), h.frobenius());
            prop_assert_eq!(f.pth_root().unwrap(), h);
        }
    }
}
