//! Acceptance battery. Prints one line per criterion and exits nonzero if any
//! fails. All comparisons are exact (tolerance 0).

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use threshold_lab::cli::expr::parse_poly;
use threshold_lab::fpt::{fpt_diagonal, oracle_bracket, DiagonalData};
use threshold_lab::padic::{binomial_valuation_prime_power, kummer_valuation, lucas_residue};
use threshold_lab::poly::{weighted_membership, MixedPoly, Monomial, SparsePolyFp, Uniformizer, WeightedMonomialIdeal};
use threshold_lab::ppt::{certify, limit_profile, BoundCertificate, CertifyOptions, RingContext};
use threshold_lab::{Error, Prime, Rat};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn diagonal_fp(p: Prime, exps: &[u32]) -> SparsePolyFp {
    let n = exps.len();
    let vars = (0..n).map(|i| format!("x{i}")).collect();
    SparsePolyFp::from_terms(
        p,
        vars,
        exps.iter().enumerate().map(|(i, &s)| (Monomial::var(n, i, s), 1)),
    )
}

/// ν_e of a diagonal polynomial by brute force: the largest `Σ k_i` with
/// `s_i k_i < p^e` whose multinomial coefficient is nonzero mod p, i.e. the
/// `k_i` add without carries in base p.
fn brute_nu(p: u64, e: u32, exps: &[u32]) -> u64 {
    let q = p.pow(e);
    let caps: Vec<u64> = exps.iter().map(|&s| (q - 1) / s as u64).collect();
    let digits = |mut k: u64| {
        let mut d = vec![0u64; e as usize + 1];
        for x in d.iter_mut() {
            *x = k % p;
            k /= p;
        }
        d
    };
    fn go(
        i: usize,
        caps: &[u64],
        acc: &mut Vec<u64>,
        sum: u64,
        p: u64,
        digits: &dyn Fn(u64) -> Vec<u64>,
        best: &mut u64,
    ) {
        if i == caps.len() {
            *best = (*best).max(sum);
            return;
        }
        // the remaining caps bound what this branch can still reach
        if sum + caps[i..].iter().sum::<u64>() <= *best {
            return;
        }
        for k in (0..=caps[i]).rev() {
            let d = digits(k);
            if d.iter().zip(acc.iter()).all(|(a, b)| a + b < p) {
                let saved = acc.clone();
                for (x, y) in acc.iter_mut().zip(&d) {
                    *x += y;
                }
                go(i + 1, caps, acc, sum + k, p, digits, best);
                *acc = saved;
            }
        }
    }
    let mut best = 0;
    let mut acc = vec![0u64; e as usize + 1];
    go(0, &caps, &mut acc, 0, p, &digits, &mut best);
    best
}

fn exponent_vectors() -> Vec<Vec<u32>> {
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

fn ac1() -> Outcome {
    let cases: Vec<(u64, Vec<u32>)> = [2u64, 3, 5, 7]
        .into_iter()
        .flat_map(|p| exponent_vectors().into_iter().map(move |s| (p, s)))
        .collect();
    let bad: Vec<String> = cases
        .par_iter()
        .filter_map(|(p, s)| {
            let pr = prime(*p);
            let x = fpt_diagonal(&DiagonalData::new(pr, s.clone()).unwrap());
            let b = oracle_bracket(&diagonal_fp(pr, s), 3).unwrap();
            let nu = brute_nu(*p, 3, s);
            if b.nu != nu {
                return Some(format!("p={p} s={s:?}: oracle nu {} vs brute {nu}", b.nu));
            }
            if !b.contains(&x) {
                return Some(format!("p={p} s={s:?}: {x} outside [{}, {}]", b.lower, b.upper));
            }
            let q = BigInt::from(p.pow(3));
            if (&q % x.denom()).is_zero() && x != b.upper {
                return Some(format!("p={p} s={s:?}: {x} != (nu+1)/p^3 = {}", b.upper));
            }
            None
        })
        .collect();
    if bad.is_empty() {
        Ok(format!(
            "{} diagonal cases, oracle and brute-force nu_3 agree",
            cases.len()
        ))
    } else {
        Err(bad.join("; "))
    }
}

fn ac2() -> Outcome {
    let f = parse_poly(
        "x^4+y^4+z^4+x^2*y^2*z^2",
        prime(3),
        Uniformizer::Root { level: 0 },
        None,
    )
    .unwrap()
    .reduce_mod_pi();
    let b = oracle_bracket(&f, 4).map_err(|e| e.to_string())?;
    if b.nu == 40 && b.lower == Rat::new(40, 81) && b.upper == Rat::new(41, 81) {
        Ok("nu_4 = 40, bracket [40/81, 41/81]".into())
    } else {
        Err(format!("nu_4 = {}", b.nu))
    }
}

fn ac3() -> Outcome {
    let mut seen = Vec::new();
    for p in [3u64, 5, 7] {
        for e in 1..=2u32 {
            let q = p.pow(e);
            let x = fpt_diagonal(&DiagonalData::new(prime(p), vec![2 * q as u32, 2]).unwrap());
            let want = Rat::new(1, 2 * q) + Rat::new(1, 2);
            if x != want {
                return Err(format!("p={p} e={e}: {x} != {want}"));
            }
            seen.push(x.to_string());
        }
    }
    Ok(seen.join(", "))
}

/// Legendre: `v_p(n!) = Σ floor(n / p^i)`.
fn legendre(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = p;
    while q <= n {
        v += n / q;
        q = match q.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
    }
    v
}

fn valuation(mut n: BigUint, p: u64) -> u64 {
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

fn ac4() -> Outcome {
    let mut count = 0;
    for p in Prime::up_to(200)
        .into_iter()
        .filter(|p| p.get() > 3 && p.get() % 3 == 2)
    {
        let pv = p.get();
        let k = (pv * pv - 1) / 3;
        let direct = legendre(2 * k, pv) - 2 * legendre(k, pv);
        if lucas_residue(2 * k, k, p) != 0 || direct == 0 {
            return Err(format!(
                "p={pv}: residue {}, v_p = {direct}",
                lucas_residue(2 * k, k, p)
            ));
        }
        count += 1;
    }
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for n in 1..=300usize {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::one(); n + 1];
        for j in 1..n {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    let primes = Prime::up_to(300);
    let bad: Vec<String> = primes
        .par_iter()
        .filter_map(|&p| {
            for (n, row) in rows.iter().enumerate() {
                for (m, c) in row.iter().enumerate() {
                    let k = kummer_valuation(n as u64, m as u64, p).unwrap();
                    if k != valuation(c.clone(), p.get()) {
                        return Some(format!("v_{p}(C({n},{m}))"));
                    }
                }
            }
            None
        })
        .collect();
    if bad.is_empty() {
        Ok(format!(
            "{count} primes = 2 mod 3; kummer over {} primes, n <= 300",
            primes.len()
        ))
    } else {
        Err(bad.join("; "))
    }
}

fn ac5() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        for e in 1..=4u32 {
            let q = p.pow(e);
            let mut c = BigUint::one();
            for i in 1..=q {
                c = c * BigUint::from(q - i + 1) / BigUint::from(i);
                let v = binomial_valuation_prime_power(e, i, prime(p)).unwrap();
                if v != valuation(c.clone(), p) {
                    return Err(format!("p={p} e={e} i={i}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} binomials"))
}

fn cert(p: u64, a: u32, cyclotomic: bool, src: &str) -> Result<BoundCertificate, Error> {
    let unif = if cyclotomic {
        Uniformizer::Cyclotomic
    } else {
        Uniformizer::Root { level: a }
    };
    let f = parse_poly(src, prime(p), unif, None)?;
    certify(
        &f,
        RingContext::new(f.p(), a, f.nvars(), cyclotomic)?,
        &CertifyOptions::default(),
    )
}

fn ac6() -> Outcome {
    struct Row {
        p: u64,
        a: u32,
        src: &'static str,
        lower: (i64, i64, bool),
        upper: Option<(i64, i64)>,
    }
    let rows = [
        Row {
            p: 2,
            a: 0,
            src: "p^3+x^3+y^3",
            lower: (1, 2, true),
            upper: Some((3, 4)),
        },
        Row {
            p: 5,
            a: 0,
            src: "p^3+x^3+y^3",
            lower: (4, 5, false),
            upper: Some((24, 25)),
        },
        Row {
            p: 5,
            a: 0,
            src: "x^3+y^3+z^3",
            lower: (1, 1, false),
            upper: Some((1, 1)),
        },
        Row {
            p: 5,
            a: 1,
            src: "x^3+y^3+z^3",
            lower: (4, 5, false),
            upper: Some((4, 5)),
        },
        Row {
            p: 3,
            a: 0,
            src: "p^3+x^3+y^3",
            lower: (1, 3, true),
            upper: None,
        },
        Row {
            p: 2,
            a: 0,
            src: "p^3+x^3+y^3+z^3",
            lower: (1, 2, true),
            upper: None,
        },
        Row {
            p: 2,
            a: 0,
            src: "(x+y)^2+4*g",
            lower: (1, 2, false),
            upper: Some((1, 2)),
        },
        Row {
            p: 2,
            a: 0,
            src: "x^2+p^2",
            lower: (1, 2, false),
            upper: Some((1, 2)),
        },
    ];
    let mut lines = Vec::new();
    for r in rows {
        let c = cert(r.p, r.a, false, r.src).map_err(|e| format!("{} p={}: {e}", r.src, r.p))?;
        let l = c.lower.clone().ok_or(format!("{}: no lower bound", r.src))?;
        if l.value != Rat::new(r.lower.0, r.lower.1) || l.strict != r.lower.2 {
            return Err(format!("{} p={} a={}: got {c}", r.src, r.p, r.a));
        }
        if let Some((n, d)) = r.upper {
            let u = c.upper.clone().ok_or(format!("{}: no upper bound", r.src))?;
            if u.value != Rat::new(n, d) || u.strict {
                return Err(format!("{} p={} a={}: got {c}", r.src, r.p, r.a));
            }
        }
        if r.src == "p^3+x^3+y^3" && r.p == 2 && !c.notes.iter().any(|n| n == "lct(f) = 1") {
            return Err("missing lct note".into());
        }
        lines.push(format!("{}@{}: {c}", r.src, r.p));
    }
    Ok(format!("{} rows, no alarm", lines.len()))
}

fn ac7() -> Outcome {
    let mut out = Vec::new();
    for (p, d, s) in [(2u64, 3u32, 1u32), (3, 4, 1), (5, 6, 1)] {
        let vars: Vec<String> = (1..d).map(|i| format!("x{i}")).collect();
        let src = std::iter::once(format!("p^{d}"))
            .chain(vars.iter().map(|v| format!("{v}^{d}")))
            .collect::<Vec<_>>()
            .join("+");
        for a in s..=s + 1 {
            let f = parse_poly(&src, prime(p), Uniformizer::Root { level: a }, None).unwrap();
            let c = certify(&f, RingContext::of(&f), &CertifyOptions::default()).map_err(|e| e.to_string())?;
            let want = Rat::new(1, p.pow(s));
            let rule = c
                .rule("exact_ramified")
                .ok_or(format!("{src} a={a}: exact_ramified abstained"))?;
            if rule.lower.as_ref().map(|b| &b.value) != Some(&want) || c.exact.as_ref() != Some(&want) {
                return Err(format!("{src} a={a}: got {c}"));
            }
            // f ∈ (π^{p^s}, x^{p^s}) checked termwise
            let ideal = WeightedMonomialIdeal::frobenius_power(f.nvars(), p.pow(s)).unwrap();
            if !weighted_membership(&f, &ideal).holds {
                return Err(format!("{src} a={a}: containment fails"));
            }
        }
        out.push(format!("(p,d)=({p},{d}) -> 1/{}", p.pow(s)));
    }
    Ok(out.join(", "))
}

fn ac8() -> Outcome {
    let f = parse_poly("p^2+x^2", prime(5), Uniformizer::Root { level: 0 }, None).unwrap();
    let prof = limit_profile(&f, 4, &CertifyOptions::default()).map_err(|e| e.to_string())?;
    if prof.limit != Some(Rat::new(1, 2)) {
        return Err(format!("limit {:?}", prof.limit));
    }
    let mut prev: Option<Rat> = None;
    let mut shown = Vec::new();
    for e in &prof.entries {
        let u = e.upper.as_ref().ok_or("missing upper")?.value.clone();
        // the round-up of 1/2 to p^a-ths, computed directly
        let q = 5i64.pow(e.level);
        let want = if e.level == 0 {
            Rat::one()
        } else {
            Rat::new((q + 1) / 2, q)
        };
        if u != want {
            return Err(format!("level {}: upper {u}, expected {want}", e.level));
        }
        if prev.as_ref().is_some_and(|p| &u > p) || u <= Rat::new(1, 2) {
            return Err(format!("level {}: upper {u} breaks monotone descent to 1/2", e.level));
        }
        shown.push(u.to_string());
        prev = Some(u);
    }
    if !prof.notes.iter().any(|n| n.contains("not attained")) {
        return Err(format!("no non-attainment note: {:?}", prof.notes));
    }
    Ok(shown.join(", "))
}

fn ac9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20261015);
    let primes = [2u64, 3, 5, 7];
    let polys: Vec<MixedPoly> = (0..500)
        .map(|_| {
            let p = primes[rng.gen_range(0..primes.len())];
            let a = rng.gen_range(0..=3u32);
            let n = rng.gen_range(1..=3usize);
            let vars = (0..n).map(|i| format!("x{i}")).collect();
            let mut terms = vec![(rng.gen_range(1..=9u64), Monomial::one(n), 1)];
            for i in 0..n {
                terms.push((0, Monomial::var(n, i, rng.gen_range(2..=9u32)), 1));
            }
            MixedPoly::from_terms(prime(p), Uniformizer::Root { level: a }, vars, terms)
        })
        .collect();
    let results: Vec<_> = polys
        .par_iter()
        .map(|f| (f, certify(f, RingContext::of(f), &CertifyOptions::default())))
        .collect();
    let mut strict = 0;
    for (f, r) in results {
        match r {
            Ok(c) => {
                let (l, u) = (c.lower.as_ref(), c.upper.as_ref());
                if let (Some(l), Some(u)) = (l, u) {
                    if l.value > u.value || (l.value == u.value && (l.strict || u.strict)) {
                        return Err(format!("{f:?}: {c}"));
                    }
                }
                strict += usize::from(c.lower_strict());
            }
            Err(e) => return Err(format!("{f:?}: {e}")),
        }
    }
    Ok(format!("500 instances, {strict} with strict lower bounds, no alarm"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC-1", "diagonal fpt inside the e=3 oracle bracket", ac1),
        ("AC-2", "x^4+y^4+z^4+x^2y^2z^2 at p=3 has nu_4 = 40", ac2),
        ("AC-3", "fpt(x^{2p^e}+y^2) = 1/(2p^e) + 1/2", ac3),
        ("AC-4", "C(2k,k) = 0 mod p and Kummer vs factorization", ac4),
        ("AC-5", "v_p(C(p^e,i)) = e - v_p(i)", ac5),
        ("AC-6", "certification golden table", ac6),
        ("AC-7", "ramified Fermat forms are exact", ac7),
        ("AC-8", "limit profile of p^2+x^2 at p=5", ac8),
        ("AC-9", "no consistency alarm on random diagonals", ac9),
    ];
    let mut failed = 0;
    for (id, what, f) in criteria {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("[PASS] {id} {what}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {what}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("tolerance: exact rational equality");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
