//! Self-check batteries run by `threshold-lab verify`.

use clap::ValueEnum;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::expr::parse_poly;
use crate::error::Error;
use crate::exact::{Prime, Rat};
use crate::fpt::{fpt_diagonal, oracle_bracket, DiagonalData};
use crate::padic::{binomial_valuation_prime_power, kummer_valuation, lucas_residue, magic_expansions};
use crate::poly::{MixedPoly, Monomial, Uniformizer};
use crate::ppt::{certify, limit_profile, CertifyOptions, RingContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Combinatorics,
    Oracle,
    Certify,
}

impl Suite {
    pub fn default_prime_max(self) -> u64 {
        match self {
            Suite::Combinatorics => 200,
            Suite::Oracle | Suite::Certify => 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Check = (String, Box<dyn Fn() -> Result<String, String> + Send + Sync>);

fn check(name: impl Into<String>, f: impl Fn() -> Result<String, String> + Send + Sync + 'static) -> Check {
    (name.into(), Box::new(f))
}

/// Run every check of `suite` in parallel; results come back in a fixed order.
pub fn run_suite(suite: Suite, prime_max: Option<u64>) -> Vec<CheckResult> {
    let pmax = prime_max.unwrap_or(suite.default_prime_max());
    let checks = match suite {
        Suite::Combinatorics => combinatorics(pmax),
        Suite::Oracle => oracle(pmax),
        Suite::Certify => certify_suite(pmax),
    };
    checks
        .par_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name: name.clone(),
                passed,
                detail,
            }
        })
        .collect()
}

fn valuation_of(mut n: BigUint, p: u64) -> u64 {
    let p = BigUint::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Rows `0..=n` of Pascal's triangle.
fn pascal(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![BigUint::one(); k + 1];
        for j in 1..k {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

fn combinatorics(pmax: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for p in Prime::up_to(pmax) {
        out.push(check(format!("kummer p={p} n<=300"), move || {
            let rows = pascal(300);
            for (n, row) in rows.iter().enumerate() {
                for (m, c) in row.iter().enumerate() {
                    let k = kummer_valuation(n as u64, m as u64, p).map_err(|e| e.to_string())?;
                    let d = valuation_of(c.clone(), p.get());
                    if k != d {
                        return Err(format!("v_{p}(C({n},{m})): kummer {k}, direct {d}"));
                    }
                }
            }
            Ok("45451 binomials".into())
        }));
        out.push(check(format!("lucas p={p} n<200"), move || {
            let rows = pascal(199);
            let pb = BigUint::from(p.get());
            for (n, row) in rows.iter().enumerate() {
                for (m, c) in row.iter().enumerate() {
                    let l = lucas_residue(n as u64, m as u64, p);
                    let d = c % &pb;
                    if BigUint::from(l) != d {
                        return Err(format!("C({n},{m}) mod {p}: lucas {l}, direct {d}"));
                    }
                }
            }
            Ok("20100 binomials".into())
        }));
        let pv = p.get();
        if pv % 3 == 2 {
            out.push(check(format!("lucas corollary p={p}"), move || {
                let k = (pv * pv - 1) / 3;
                match lucas_residue(2 * k, k, p) {
                    0 => Ok(format!("C({}, {k}) = 0 mod {pv}", 2 * k)),
                    r => Err(format!("C({}, {k}) = {r} mod {pv}", 2 * k)),
                }
            }));
            out.push(check(format!("magic expansions p={p}"), move || {
                let (hi, lo) = magic_expansions(p).map_err(|e| e.to_string())?;
                let (h, l) = ((2 * pv * pv - 2) / 3, (pv * pv - 1) / 3);
                if hi.value() == h as u128 && lo.value() == l as u128 {
                    Ok(format!("{h} and {l}"))
                } else {
                    Err(format!("got {} and {}", hi.value(), lo.value()))
                }
            }));
        }
        if pv <= 7 {
            out.push(check(format!("binomial valuation p={p} e<=4"), move || {
                for e in 1..=4u32 {
                    let q = pv.pow(e) as usize;
                    let mut c = BigUint::one();
                    for i in 1..=q {
                        c = c * BigUint::from(q - i + 1) / BigUint::from(i);
                        let v = binomial_valuation_prime_power(e, i as u64, p).map_err(|e| e.to_string())?;
                        let d = valuation_of(c.clone(), pv);
                        if v != d {
                            return Err(format!("v_{pv}(C({q},{i})): formula {v}, direct {d}"));
                        }
                    }
                }
                Ok("all i".into())
            }));
        }
    }
    out
}

/// Nondecreasing exponent vectors of length `1..=3` with entries in `[2, 6]`.
pub fn small_exponent_vectors() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 2..=6 {
        out.push(vec![a]);
        for b in a..=6 {
            out.push(vec![a, b]);
            for c in b..=6 {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn oracle(pmax: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for p in Prime::up_to(pmax) {
        for exps in small_exponent_vectors() {
            out.push(check(format!("diagonal p={p} s={exps:?}"), move || {
                let data = DiagonalData::new(p, exps.clone()).map_err(|e| e.to_string())?;
                let x = fpt_diagonal(&data);
                let f = super::diagonal_fp(p, &exps);
                let b = oracle_bracket(&f, 3).map_err(|e| e.to_string())?;
                if !b.contains(&x) {
                    return Err(format!("{x} outside [{}, {}]", b.lower, b.upper));
                }
                if x.p_power_denominator(p.get()).is_some_and(|e| e <= 3) && x != b.upper {
                    return Err(format!("{x} terminates but the bracket top is {}", b.upper));
                }
                Ok(format!("{x} in [{}, {}]", b.lower, b.upper))
            }));
        }
    }
    out.push(check("x^4+y^4+z^4+x^2y^2z^2 p=3 e=4", || {
        let f = parse_poly(
            "x^4+y^4+z^4+x^2*y^2*z^2",
            Prime::new(3).unwrap(),
            Uniformizer::Root { level: 0 },
            None,
        )
        .map_err(|e| e.to_string())?
        .reduce_mod_pi();
        let b = oracle_bracket(&f, 4).map_err(|e| e.to_string())?;
        if b.nu == 40 {
            Ok(format!("[{}, {}]", b.lower, b.upper))
        } else {
            Err(format!("nu_4 = {}", b.nu))
        }
    }));
    for p in [3u64, 5, 7].into_iter().filter(|&p| p <= pmax) {
        for e in 1..=2u32 {
            out.push(check(format!("non-stabilizing p={p} e={e}"), move || {
                let q = p.pow(e);
                let data =
                    DiagonalData::new(Prime::new(p).unwrap(), vec![2 * q as u32, 2]).map_err(|e| e.to_string())?;
                let x = fpt_diagonal(&data);
                let want = Rat::new(1, 2 * q) + Rat::new(1, 2);
                if x == want {
                    Ok(format!("{x}"))
                } else {
                    Err(format!("{x} != {want}"))
                }
            }));
        }
    }
    out
}

/// Inputs with known certificates, written in interval notation.
pub const GOLDEN: &[(u64, u32, bool, &str, &str)] = &[
    (2, 0, false, "p^3+x^3+y^3", "(1/2, 3/4]"),
    (5, 0, false, "p^3+x^3+y^3", "[4/5, 24/25]"),
    (5, 0, false, "x^3+y^3+z^3", "= 1"),
    (5, 1, false, "x^3+y^3+z^3", "= 4/5"),
    (3, 0, false, "p^3+x^3+y^3", "(1/3, 1]"),
    (2, 0, false, "p^3+x^3+y^3+z^3", "(1/2, 1]"),
    (2, 0, false, "(x+y)^2+4*g", "= 1/2"),
    (2, 0, false, "x^2+p^2", "= 1/2"),
    (3, 0, true, "x^3+p^3", "= 1/3"),
    (2, 1, false, "p^3+x^3+y^3", "= 1/2"),
    (3, 1, false, "p^4+x^4+y^4+z^4", "= 1/3"),
    (5, 1, false, "p^6+a^6+b^6+c^6+d^6+e^6", "= 1/5"),
];

fn certify_src(p: u64, ram: u32, cyclotomic: bool, src: &str) -> Result<crate::ppt::BoundCertificate, Error> {
    let unif = if cyclotomic {
        Uniformizer::Cyclotomic
    } else {
        Uniformizer::Root { level: ram }
    };
    let f = parse_poly(src, Prime::new(p)?, unif, None)?;
    let ctx = RingContext::new(f.p(), ram, f.nvars(), cyclotomic)?;
    certify(&f, ctx, &CertifyOptions::default())
}

fn certify_suite(pmax: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for &(p, ram, cyc, src, want) in GOLDEN.iter().filter(|g| g.0 <= pmax) {
        let name = format!("certify {src} p={p} a={ram}{}", if cyc { " cyclotomic" } else { "" });
        out.push(check(name, move || {
            let c = certify_src(p, ram, cyc, src).map_err(|e| e.to_string())?;
            let got = c.to_string();
            if got == want {
                Ok(got)
            } else {
                Err(format!("got {got}, expected {want}"))
            }
        }));
    }
    if pmax >= 5 {
        out.push(check("limit profile p^2+x^2 p=5", || {
            let f = parse_poly("p^2+x^2", Prime::new(5).unwrap(), Uniformizer::Root { level: 0 }, None)
                .map_err(|e| e.to_string())?;
            let prof = limit_profile(&f, 4, &CertifyOptions::default()).map_err(|e| e.to_string())?;
            let uppers: Vec<String> = prof
                .entries
                .iter()
                .map(|e| e.upper.as_ref().map_or("?".into(), |u| u.value.to_string()))
                .collect();
            let attained = prof.notes.iter().any(|n| n.contains("not attained"));
            if uppers == ["1", "3/5", "13/25", "63/125", "313/625"] && attained {
                Ok(uppers.join(", "))
            } else {
                Err(format!("uppers {uppers:?}, notes {:?}", prof.notes))
            }
        }));
    }
    out.push(check("random diagonal consistency", move || {
        random_diagonals(pmax, 500, 0x5eed)
    }));
    out
}

/// A random diagonal instance `π^{s_0} + Σ x_i^{s_i}` at a random level.
pub fn random_diagonal(rng: &mut StdRng, primes: &[Prime]) -> MixedPoly {
    let p = primes[rng.gen_range(0..primes.len())];
    let a = rng.gen_range(0..=3u32);
    let n = rng.gen_range(1..=3usize);
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut terms = vec![(rng.gen_range(1..=8u64), Monomial::one(n), 1)];
    for i in 0..n {
        terms.push((0, Monomial::var(n, i, rng.gen_range(1..=8u32)), 1));
    }
    MixedPoly::from_terms(p, Uniformizer::Root { level: a }, vars, terms)
}

/// Certify `count` random diagonal instances; only a consistency alarm fails.
pub fn random_diagonals(pmax: u64, count: usize, seed: u64) -> Result<String, String> {
    let primes = Prime::up_to(pmax.min(7));
    let mut rng = StdRng::seed_from_u64(seed);
    let polys: Vec<MixedPoly> = (0..count).map(|_| random_diagonal(&mut rng, &primes)).collect();
    let results: Vec<_> = polys
        .par_iter()
        .map(|f| (f, certify(f, RingContext::of(f), &CertifyOptions::default())))
        .collect();
    let mut other = 0;
    for (f, r) in results {
        match r {
            Err(e @ Error::InternalInconsistency { .. }) => return Err(format!("{f:?}: {e}")),
            Err(_) => other += 1,
            Ok(_) => {}
        }
    }
    Ok(format!("{count} instances, {other} rejected by resource guards"))
}
