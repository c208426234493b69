//! Base-`p` digit combinatorics: digit sums, Kummer valuations of binomial
//! coefficients, Lucas residues.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::Prime;

/// Base-`p` digits of a nonnegative integer, least significant first, with no
/// trailing (most significant) zeros. Zero has no digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    pub p: Prime,
    pub digits: Vec<u64>,
}

impl DigitVector {
    pub fn value(&self) -> u128 {
        let p = self.p.get() as u128;
        self.digits.iter().rev().fold(0u128, |acc, &d| acc * p + d as u128)
    }

    pub fn sum(&self) -> u64 {
        self.digits.iter().sum()
    }
}

pub fn digits_of(mut n: u64, p: Prime) -> DigitVector {
    let pv = p.get();
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % pv);
        n /= pv;
    }
    DigitVector { p, digits }
}

/// `S_p(n)`, the sum of the base-`p` digits of `n`.
pub fn digit_sum(n: u64, p: Prime) -> u64 {
    digits_of(n, p).sum()
}

/// `v_p(n)` for `n > 0`.
pub fn valuation(n: u64, p: Prime) -> Result<u32> {
    if n == 0 {
        return Err(Error::invalid("the valuation of 0 is not defined"));
    }
    Ok(valuation_nonzero(n, p.get()))
}

#[inline]
pub(crate) fn valuation_nonzero(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `v_p(n)` for a nonzero big integer.
pub fn valuation_big(n: &BigInt, p: Prime) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::invalid("the valuation of 0 is not defined"));
    }
    if let Some(small) = n.to_i64() {
        return Ok(valuation_nonzero(small.unsigned_abs(), p.get()));
    }
    let pb = BigInt::from(p.get());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return Ok(v);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(C(n, m))` via `(S_p(m) + S_p(n - m) - S_p(n)) / (p - 1)`.
pub fn kummer_valuation(n: u64, m: u64, p: Prime) -> Result<u64> {
    if m > n {
        return Err(Error::invalid(format!("m = {m} exceeds n = {n}")));
    }
    let carries = digit_sum(m, p) + digit_sum(n - m, p) - digit_sum(n, p);
    Ok(carries / (p.get() - 1))
}

/// `v_p(C(p^e, i)) = e - v_p(i)` for `1 <= i <= p^e`.
pub fn binomial_valuation_prime_power(e: u32, i: u64, p: Prime) -> Result<u64> {
    let pe = p.pow(e)?;
    if i == 0 || i > pe {
        return Err(Error::invalid(format!("i = {i} is outside [1, {pe}]")));
    }
    Ok((e - valuation_nonzero(i, p.get())) as u64)
}

/// `C(n, m) mod p` by Lucas' theorem. `C(n, m) = 0` when `m > n`.
pub fn lucas_residue(n: u64, m: u64, p: Prime) -> u64 {
    if m > n {
        return 0;
    }
    let pv = p.get();
    let nd = digits_of(n, p).digits;
    let md = digits_of(m, p).digits;
    let mut acc = 1u64;
    for (i, &ni) in nd.iter().enumerate() {
        let mi = md.get(i).copied().unwrap_or(0);
        if mi > ni {
            return 0;
        }
        acc = acc * small_binomial_mod(ni, mi, pv) % pv;
    }
    acc
}

fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    // n < p, so every factor of k! is invertible mod p.
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for j in 0..k {
        num = num * (n - j) % p;
        den = den * (j + 1) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// The digit vectors of `(2p^2 - 2)/3` and `(p^2 - 1)/3` for `p ≡ 2 mod 3`.
pub fn magic_expansions(p: Prime) -> Result<(DigitVector, DigitVector)> {
    let pv = p.get();
    if pv % 3 != 2 {
        return Err(Error::invalid(format!("{pv} is not congruent to 2 mod 3")));
    }
    let hi = (2 * pv - 1) / 3;
    let lo = (pv - 2) / 3;
    let trim = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        DigitVector { p, digits: v }
    };
    Ok((trim(vec![lo, hi]), trim(vec![hi, lo])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn binom(n: u64, k: u64) -> BigUint {
        let mut acc = BigUint::one();
        for j in 0..k {
            acc = acc * (n - j) / (j + 1);
        }
        acc
    }

    fn factor_valuation(mut x: BigUint, p: u64) -> u64 {
        let mut v = 0;
        while (&x % p).is_zero() {
            x /= p;
            v += 1;
        }
        v
    }

    #[test]
    fn digits() {
        assert_eq!(digits_of(16, pr(5)).digits, vec![1, 3]);
        assert!(digits_of(0, pr(7)).digits.is_empty());
        assert_eq!(digits_of(8, pr(2)).digits, vec![0, 0, 0, 1]);
        assert_eq!(digit_sum(80, pr(3)), 8);
        assert_eq!(digit_sum(16, pr(5)), 4);
        assert_eq!(digit_sum(8, pr(2)), 1);
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_valuation(9, 3, pr(3)).unwrap(), 1);
        assert_eq!(kummer_valuation(41, 0, pr(7)).unwrap(), 0);
        assert_eq!(kummer_valuation(10, 5, pr(5)).unwrap(), 0);
        assert_eq!(kummer_valuation(16, 8, pr(5)).unwrap(), 1);
        assert!(kummer_valuation(3, 4, pr(2)).is_err());
    }

    #[test]
    fn kummer_matches_factorisation() {
        for p in [2, 3, 5, 7, 11, 13] {
            for n in 0..=300u64 {
                let mut row = BigUint::one();
                for m in 0..=n {
                    if m > 0 {
                        row = row * (n - m + 1) / m;
                    }
                    assert_eq!(
                        kummer_valuation(n, m, pr(p)).unwrap(),
                        factor_valuation(row.clone(), p),
                        "n={n} m={m} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn binomial_valuation_examples() {
        assert_eq!(binomial_valuation_prime_power(3, 9, pr(3)).unwrap(), 1);
        assert_eq!(binomial_valuation_prime_power(2, 25, pr(5)).unwrap(), 0);
        assert_eq!(binomial_valuation_prime_power(2, 3, pr(2)).unwrap(), 2);
        assert!(binomial_valuation_prime_power(2, 0, pr(2)).is_err());
        assert!(binomial_valuation_prime_power(2, 5, pr(2)).is_err());
    }

    #[test]
    fn binomial_valuation_agrees_with_kummer() {
        for p in Prime::up_to(13) {
            for e in 1..=4 {
                let pe = p.pow(e).unwrap();
                for i in 1..=pe {
                    assert_eq!(
                        binomial_valuation_prime_power(e, i, p).unwrap(),
                        kummer_valuation(pe, i, p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn divisibility_regime_for_small_indices() {
        for p in [3, 5, 7] {
            for e in 1..=4u32 {
                for i in 2..=e as u64 {
                    let v = valuation(i, pr(p)).unwrap() as u64;
                    assert!(v <= i - 2);
                    assert!(binomial_valuation_prime_power(e, i, pr(p)).unwrap() >= e as u64 + 2 - i);
                }
            }
        }
    }

    #[test]
    fn lucas_examples_and_oracle() {
        assert_eq!(lucas_residue(16, 8, pr(5)), 0);
        assert_eq!(lucas_residue(7, 3, pr(2)), 1);
        assert_eq!(lucas_residue(3, 5, pr(7)), 0);
        for p in [2, 3, 5, 7, 11] {
            for n in 0..=100 {
                assert_eq!(lucas_residue(n, n, pr(p)), 1);
                for m in 0..=n {
                    let direct = (binom(n, m) % p).to_u64().unwrap();
                    assert_eq!(lucas_residue(n, m, pr(p)), direct, "C({n},{m}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn lucas_corollary() {
        for p in Prime::up_to(200) {
            let pv = p.get();
            if pv > 3 && pv % 3 == 2 {
                let k = (pv * pv - 1) / 3;
                assert_eq!(lucas_residue(2 * k, k, p), 0, "p={pv}");
            }
        }
    }

    #[test]
    fn magic() {
        let (a, b) = magic_expansions(pr(5)).unwrap();
        assert_eq!((a.digits, b.digits), (vec![1, 3], vec![3, 1]));
        let (a, b) = magic_expansions(pr(11)).unwrap();
        assert_eq!((a.digits, b.digits), (vec![3, 7], vec![7, 3]));
        let (a, b) = magic_expansions(pr(2)).unwrap();
        assert_eq!((a.digits, b.digits), (vec![0, 1], vec![1]));
        assert!(magic_expansions(pr(7)).is_err());
        for p in Prime::up_to(200) {
            if let Ok((a, b)) = magic_expansions(p) {
                let pv = p.get();
                assert_eq!(a, digits_of((2 * pv * pv - 2) / 3, p));
                assert_eq!(b, digits_of((pv * pv - 1) / 3, p));
            }
        }
    }

    #[test]
    fn valuation_rejects_zero() {
        assert!(valuation(0, pr(3)).is_err());
        assert!(valuation_big(&BigInt::zero(), pr(3)).is_err());
        assert_eq!(valuation_big(&BigInt::from(-54), pr(3)).unwrap(), 3);
        let big = BigInt::from(7).pow(40) * 2;
        assert_eq!(valuation_big(&big, pr(7)).unwrap(), 40);
    }
}
