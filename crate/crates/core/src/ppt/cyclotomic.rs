//! Valuations in `Z[ζ_p]` at the prime `ϖ = ζ_p - 1`.
//!
//! `Z[ζ_p] = Z[ϖ]` has basis `1, ϖ, ..., ϖ^{p-2}`. Since `ϖ^{p-1}` is `p` times
//! a unit, the basis elements have pairwise distinct valuations mod `p - 1`,
//! so `v(Σ a_j ϖ^j) = min_j ((p-1) v_p(a_j) + j)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;

use crate::exact::Prime;
use crate::padic::valuation_big;

/// Coordinates of `Σ_k c_k ϖ^k` in the basis `1, ϖ, ..., ϖ^{p-2}`.
pub fn reduce(p: Prime, coeffs: &BTreeMap<u64, BigInt>) -> Vec<BigInt> {
    let pv = p.get() as usize;
    let top = coeffs.keys().next_back().map_or(0, |&k| k as usize);
    let mut v = vec![BigInt::zero(); (top + 1).max(pv - 1)];
    for (&k, c) in coeffs {
        v[k as usize] += c;
    }
    // ϖ^{p-1} = -Σ_{i=1}^{p-1} C(p, i) ϖ^{i-1}, from Φ_p(ϖ + 1) = 0
    let rel: Vec<BigInt> = (1..pv).map(|i| binomial(BigInt::from(pv), BigInt::from(i))).collect();
    for k in (pv - 1..v.len()).rev() {
        let c = std::mem::take(&mut v[k]);
        if c.is_zero() {
            continue;
        }
        let base = k + 1 - pv;
        for (i, r) in rel.iter().enumerate() {
            v[base + i] -= &c * r;
        }
    }
    v.truncate(pv - 1);
    v
}

/// `ϖ`-adic valuation of an element given in basis coordinates; `None` for 0.
pub fn valuation(p: Prime, coords: &[BigInt]) -> Option<u64> {
    coords
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(j, a)| (p.get() - 1) * valuation_big(a, p).expect("nonzero") as u64 + j as u64)
        .min()
}

/// Valuation of `Σ_k c_k ϖ^k`.
pub fn valuation_of(p: Prime, coeffs: &BTreeMap<u64, BigInt>) -> Option<u64> {
    valuation(p, &reduce(p, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single(k: u64, c: i64) -> BTreeMap<u64, BigInt> {
        BTreeMap::from([(k, BigInt::from(c))])
    }

    #[test]
    fn powers_of_the_uniformizer() {
        for p in [2u64, 3, 5, 7] {
            let p = Prime::new(p).unwrap();
            for k in 0..20 {
                assert_eq!(valuation_of(p, &single(k, 1)), Some(k), "p={p} k={k}");
            }
            // p itself has valuation p - 1
            assert_eq!(valuation_of(p, &single(0, p.get() as i64)), Some(p.get() - 1));
        }
    }

    #[test]
    fn p_equals_two_is_plain_2_adic() {
        let p = Prime::new(2).unwrap();
        // ϖ = -2
        assert_eq!(reduce(p, &single(3, 1)), vec![BigInt::from(-8)]);
        assert_eq!(valuation_of(p, &single(0, 12)), Some(2));
    }

    #[test]
    fn zeta_is_a_unit_and_norm_check() {
        // ζ = 1 + ϖ; ζ^p = 1, so (1 + ϖ)^p - 1 = 0
        for p in [3u64, 5, 7] {
            let pr = Prime::new(p).unwrap();
            let mut c: BTreeMap<u64, BigInt> = (1..=p)
                .map(|i| (i, binomial(BigInt::from(p), BigInt::from(i))))
                .collect();
            assert_eq!(valuation_of(pr, &c), None);
            c.insert(0, BigInt::from(1));
            assert_eq!(valuation_of(pr, &c), Some(0));
        }
    }

    proptest! {
        #[test]
        fn valuation_is_additive(pi in prop::sample::select(vec![2u64, 3, 5, 7]),
                                 a in prop::collection::vec(-20i64..20, 1..5),
                                 b in prop::collection::vec(-20i64..20, 1..5)) {
            let p = Prime::new(pi).unwrap();
            let to_map = |v: &[i64]| -> BTreeMap<u64, BigInt> {
                v.iter().enumerate().map(|(k, &c)| (k as u64, BigInt::from(c))).collect()
            };
            let (ma, mb) = (to_map(&a), to_map(&b));
            let mut prod: BTreeMap<u64, BigInt> = BTreeMap::new();
            for (i, x) in &ma {
                for (j, y) in &mb {
                    *prod.entry(i + j).or_default() += x * y;
                }
            }
            let (va, vb) = (valuation_of(p, &ma), valuation_of(p, &mb));
            match (va, vb) {
                (Some(x), Some(y)) => prop_assert_eq!(valuation_of(p, &prod), Some(x + y)),
                _ => prop_assert_eq!(valuation_of(p, &prod), None),
            }
        }
    }
}
