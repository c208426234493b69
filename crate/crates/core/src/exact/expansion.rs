use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Prime, Rat};
use crate::error::{Error, Result};

/// Eventually periodic base-`p` expansion `0.d_1 d_2 d_3 ...` of a rational in `(0, 1]`.
///
/// Expansions are never eventually zero: a terminating expansion is rewritten
/// with a trailing run of `p - 1`, so `1 = 0.(p-1)(p-1)...`. The preperiod is
/// minimal and the period is the minimal repeating block.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasePExpansion {
    p: Prime,
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl BasePExpansion {
    /// Expand `x` in base `p`. Fails unless `0 < x <= 1`.
    pub fn new(x: &Rat, p: Prime) -> Result<Self> {
        if !x.is_positive() || *x > Rat::one() {
            return Err(Error::invalid(format!("{x} is not in (0, 1]")));
        }
        let d = x.denom().clone();
        let pb = BigInt::from(p.get());
        // Remainders live in (0, d]; a zero remainder never occurs, which is
        // what makes the expansion non-terminating.
        let mut r = x.numer().clone();
        let mut seen: HashMap<BigInt, usize> = HashMap::new();
        let mut digits = Vec::new();
        loop {
            if let Some(&start) = seen.get(&r) {
                let period = digits.split_off(start);
                return Ok(BasePExpansion {
                    p,
                    preperiod: digits,
                    period,
                });
            }
            seen.insert(r.clone(), digits.len());
            let t = &r * &pb;
            let digit = (&t - 1u32).div_floor(&d);
            r = t - &digit * &d;
            digits.push(digit.to_u64().expect("digit below p"));
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// The digit `d_e`, for `e >= 1`.
    pub fn digit_at(&self, e: u64) -> u64 {
        assert!(e >= 1, "digit positions start at 1");
        let i = (e - 1) as usize;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// `sum_{e=1}^{l} d_e p^{-e}`.
    pub fn truncation(&self, l: u32) -> Rat {
        let p = BigInt::from(self.p.get());
        let mut num = BigInt::zero();
        for e in 1..=l {
            num = num * &p + self.digit_at(e as u64);
        }
        Rat::new(num, p.pow(l))
    }

    /// The represented rational, re-summed from the digit data.
    pub fn value(&self) -> Rat {
        let p = BigInt::from(self.p.get());
        let k = self.preperiod.len() as u32;
        let m = self.period.len() as u32;
        let pre = self.preperiod.iter().fold(BigInt::zero(), |acc, &d| acc * &p + d);
        let per = self.period.iter().fold(BigInt::zero(), |acc, &d| acc * &p + d);
        // 0.A(B) = (A + B / (p^m - 1)) / p^k
        let pm1 = p.pow(m) - BigInt::one();
        Rat::new(pre * &pm1 + per, pm1 * p.pow(k))
    }
}

impl fmt::Debug for BasePExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BasePExpansion(p={}, pre={:?}, period={:?})",
            self.p, self.preperiod, self.period
        )
    }
}

impl fmt::Display for BasePExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ds: &[u64]| ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "0.[{}]([{}]) base {}",
            join(&self.preperiod),
            join(&self.period),
            self.p
        )
    }
}
