use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::{BasePExpansion, Prime, Rat};

/// Exponents of a diagonal hypersurface `x_1^{s_1} + ... + x_n^{s_n}` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalData {
    p: Prime,
    exps: Vec<u32>,
}

impl DiagonalData {
    pub fn new(p: Prime, exps: Vec<u32>) -> Result<Self> {
        if exps.is_empty() {
            return Err(Error::invalid("a diagonal hypersurface needs at least one exponent"));
        }
        if let Some(s) = exps.iter().find(|&&s| s < 2) {
            return Err(Error::invalid(format!("exponent {s} is below 2")));
        }
        Ok(DiagonalData { p, exps })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn expansions(&self) -> Vec<BasePExpansion> {
        self.exps
            .iter()
            .map(|&s| BasePExpansion::new(&Rat::new(1, s), self.p).expect("1/s lies in (0, 1]"))
            .collect()
    }

    /// `sum_i 1/s_i`.
    pub fn reciprocal_sum(&self) -> Rat {
        self.exps.iter().map(|&s| Rat::new(1, s)).sum()
    }
}

/// First digit position `e >= 0` at which the digits of the `1/s_i` in
/// position `e + 1` sum to at least `p`, or `Infinite` if none exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LValue {
    Finite(u32),
    Infinite,
}

impl fmt::Display for LValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LValue::Finite(l) => write!(f, "{l}"),
            LValue::Infinite => write!(f, "infinite"),
        }
    }
}

pub fn compute_l(d: &DiagonalData) -> LValue {
    let exps = d.expansions();
    let p = d.p.get();
    // digit sums are periodic after the longest preperiod with period the
    // lcm of the period lengths, so one full period decides the question
    let pre = exps.iter().map(|x| x.preperiod().len() as u64).max().unwrap_or(0);
    let per = exps.iter().fold(1u64, |acc, x| acc.lcm(&(x.period().len() as u64)));
    for e in 1..=pre + per {
        let s: u64 = exps.iter().map(|x| x.digit_at(e)).sum();
        if s >= p {
            return LValue::Finite((e - 1) as u32);
        }
    }
    LValue::Infinite
}

/// For finite `L`, the pair `(L, a_L)` with `fpt = a_L / p^L`.
pub fn fpt_numerator(d: &DiagonalData) -> Option<(u32, BigInt)> {
    let LValue::Finite(l) = compute_l(d) else {
        return None;
    };
    let exps = d.expansions();
    let p = BigInt::from(d.p.get());
    let mut num = BigInt::from(0);
    for e in 1..=l {
        let s: u64 = exps.iter().map(|x| x.digit_at(e as u64)).sum();
        num += p.pow(l - e) * s;
    }
    Some((l, num + 1))
}

/// F-pure threshold of `x_1^{s_1} + ... + x_n^{s_n}` over `F_p`.
pub fn fpt_diagonal(d: &DiagonalData) -> Rat {
    match fpt_numerator(d) {
        Some((l, num)) => Rat::new(num, BigInt::from(d.p.get()).pow(l)),
        None => d.reciprocal_sum(),
    }
}

/// F-pure threshold of the Fermat hypersurface `x_1^d + ... + x_d^d`.
///
/// `1/p^s` when `p^s <= d < p^{s+1}` with `s >= 1`, and `1 - (α - 1)/p` when
/// `d < p`, where `α` is the least positive residue of `p` mod `d`.
pub fn fpt_fermat(p: Prime, d: u32) -> Result<Rat> {
    let pv = p.get();
    let dv = d as u64;
    if d < 2 {
        return Err(Error::invalid(format!("degree {d} has no Fermat threshold formula")));
    }
    if dv >= pv {
        let mut s = 0u32;
        let mut q = 1u64;
        while q * pv <= dv {
            q *= pv;
            s += 1;
        }
        return Ok(Rat::inv_pow(pv, s));
    }
    let alpha = pv % dv;
    Ok(Rat::one() - Rat::new((alpha - 1) as i64, pv as i64))
}

/// `min(1, sum_i 1/s_i)`.
pub fn lct_diagonal(d: &DiagonalData) -> Rat {
    d.reciprocal_sum().min(Rat::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(p: u64, s: &[u32]) -> DiagonalData {
        DiagonalData::new(Prime::new(p).unwrap(), s.to_vec()).unwrap()
    }

    #[test]
    fn l_values() {
        assert_eq!(compute_l(&dd(3, &[18, 2])), LValue::Infinite);
        assert_eq!(compute_l(&dd(3, &[3, 3, 3])), LValue::Finite(1));
        assert_eq!(compute_l(&dd(5, &[2, 2])), LValue::Infinite);
        assert_eq!(compute_l(&dd(2, &[3, 3])), LValue::Finite(1));
    }

    #[test]
    fn thresholds() {
        assert_eq!(fpt_diagonal(&dd(5, &[3, 3, 3])), Rat::new(4, 5));
        assert_eq!(fpt_diagonal(&dd(3, &[18, 2])), Rat::new(5, 9));
        assert_eq!(fpt_diagonal(&dd(5, &[2, 2])), Rat::one());
        assert_eq!(fpt_diagonal(&dd(2, &[3, 3])), Rat::new(1, 2));
        assert_eq!(fpt_diagonal(&dd(3, &[3, 3, 3])), Rat::new(1, 3));
        assert_eq!(fpt_diagonal(&dd(2, &[3, 3, 3])), Rat::new(1, 2));
    }

    #[test]
    fn fermat() {
        let p = |v| Prime::new(v).unwrap();
        assert_eq!(fpt_fermat(p(2), 3).unwrap(), Rat::new(1, 2));
        assert_eq!(fpt_fermat(p(3), 9).unwrap(), Rat::new(1, 9));
        assert_eq!(fpt_fermat(p(7), 3).unwrap(), Rat::one());
        assert!(fpt_fermat(p(7), 1).is_err());
        for pv in [2, 3, 5, 7] {
            for d in 2..=9u32 {
                let fermat = fpt_fermat(p(pv), d).unwrap();
                let diag = fpt_diagonal(&dd(pv, &vec![d; d as usize]));
                assert_eq!(fermat, diag, "p={pv} d={d}");
            }
        }
    }

    #[test]
    fn lct() {
        assert_eq!(lct_diagonal(&dd(7, &[3, 3, 3])), Rat::one());
        assert_eq!(lct_diagonal(&dd(7, &[2, 3])), Rat::new(5, 6));
        assert_eq!(lct_diagonal(&dd(7, &[2, 2, 5])), Rat::one());
    }

    #[test]
    fn rejects_degenerate_data() {
        assert!(DiagonalData::new(Prime::new(3).unwrap(), vec![]).is_err());
        assert!(DiagonalData::new(Prime::new(3).unwrap(), vec![1, 2]).is_err());
    }

    #[test]
    fn floor_identity_fails_for_p_power_exponents() {
        // 1/3 = 0.0222... in base 3: fpt(x^3 + y^3) = 1/3 but floor(2 * 3/3) = 2
        let d = dd(3, &[3, 3]);
        assert_eq!(fpt_numerator(&d), Some((1, BigInt::from(1))));
        assert_eq!(fpt_diagonal(&d), Rat::new(1, 3));
    }

    #[test]
    fn sandwich_and_extremal_floor() {
        for pv in [2u64, 3, 5, 7, 11] {
            for a in 2..=7u32 {
                for b in 2..=7u32 {
                    for c in 2..=7u32 {
                        let d = dd(pv, &[a, b, c]);
                        let f = fpt_diagonal(&d);
                        assert!(f <= lct_diagonal(&d));
                        assert!(f.is_positive());
                        if a == b && b == c && !(a as u64).is_multiple_of(pv) {
                            assert!(f >= Rat::new(1, a - 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn digit_and_floor_identity() {
        // with n < p, L finite and no s_i a power of p,
        // a_L = floor(sum_i p^L / s_i)
        let is_p_power = |mut s: u32, p: u32| {
            while s.is_multiple_of(p) {
                s /= p;
            }
            s == 1
        };
        for pv in [3u64, 5, 7] {
            for a in 2..=8u32 {
                for b in 2..=8u32 {
                    if is_p_power(a, pv as u32) || is_p_power(b, pv as u32) {
                        continue;
                    }
                    let d = dd(pv, &[a, b]);
                    if let Some((l, num)) = fpt_numerator(&d) {
                        let scaled = d.reciprocal_sum() * Rat::int(BigInt::from(pv).pow(l));
                        assert_eq!(scaled.floor(), num, "p={pv} s=({a},{b})");
                    }
                }
            }
        }
    }
}
