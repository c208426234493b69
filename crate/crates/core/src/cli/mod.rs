//! The `threshold-lab` command line.
//!
//! Exit codes: 0 success, 1 no bound beyond the trivial one under
//! `--require-bound`, 2 bad input or a resource guard, 3 internal
//! inconsistency or a failed self-check.

pub mod expr;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{expand_base_p, Prime, Rat};
use crate::fpt::{compute_l, fpt_closed_form, fpt_diagonal, lct_diagonal, oracle_brackets, DiagonalData, FptBracket};
use crate::padic::{kummer_valuation, lucas_residue, magic_expansions};
use crate::poly::{Monomial, SparsePolyFp, Uniformizer};
use crate::ppt::{certify, has_required_bound, limit_profile, BoundCertificate, CertifyOptions, Family, RingContext};
use expr::parse_poly;
use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABSTAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "threshold-lab",
    version,
    about = "F-pure thresholds over F_p and certified plus-pure threshold bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// fpt of x_1^{s_1} + ... + x_n^{s_n} over F_p
    FptDiagonal {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Brackets for the fpt of a polynomial over F_p from Frobenius powers
    FptSearch {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        json: bool,
    },
    /// Base-p digit combinatorics
    Padic {
        #[command(subcommand)]
        command: PadicCommand,
    },
    /// Certify bounds on the plus-pure threshold
    Certify {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        ram: u32,
        #[arg(long)]
        cyclotomic: bool,
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        json: bool,
        /// Exit 1 unless a rule beyond the trivial bound fired
        #[arg(long)]
        require_bound: bool,
        #[arg(long, default_value_t = 4)]
        oracle_level: u32,
    },
    /// Certified bounds as the base is ramified further
    LimitProfile {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        ram: u32,
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long)]
        max_level: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run a self-check battery
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        prime_max: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum PadicCommand {
    /// Base-p expansion of a rational in (0, 1]
    Expand {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        value: String,
    },
    /// v_p(C(n, m)) by counting carries
    Kummer {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        prime: u64,
    },
    /// C(n, m) mod p
    Lucas {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        prime: u64,
    },
    /// Digits of (2p^2 - 2)/3 and (p^2 - 1)/3 for p = 2 mod 3
    Magic {
        #[arg(long)]
        prime: u64,
    },
}

/// Run the command line on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InternalInconsistency { .. } => EXIT_INTERNAL,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::invalid(format!("cannot write output: {e}"))
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("output types are serializable")
}

/// `x_1^{s_1} + ... + x_n^{s_n}` over `F_p`.
pub fn diagonal_fp(p: Prime, exps: &[u32]) -> SparsePolyFp {
    let n = exps.len();
    let vars = (1..=n).map(|i| format!("x{i}")).collect();
    SparsePolyFp::from_terms(
        p,
        vars,
        exps.iter().enumerate().map(|(i, &s)| (Monomial::var(n, i, s), 1)),
    )
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::FptDiagonal {
            prime,
            exponents,
            json: as_json,
        } => {
            let data = DiagonalData::new(Prime::new(prime)?, exponents.clone())?;
            let fpt = fpt_diagonal(&data);
            if as_json {
                #[derive(Serialize)]
                struct Out {
                    p: u64,
                    exponents: Vec<u32>,
                    fpt: Rat,
                    l: Option<u32>,
                    lct: Rat,
                }
                let l = match compute_l(&data) {
                    crate::fpt::LValue::Finite(l) => Some(l),
                    crate::fpt::LValue::Infinite => None,
                };
                let o = Out {
                    p: prime,
                    exponents,
                    fpt,
                    l,
                    lct: lct_diagonal(&data),
                };
                writeln!(out, "{}", json(&o)).map_err(io)?;
            } else {
                writeln!(out, "{fpt}").map_err(io)?;
            }
        }
        Command::FptSearch {
            prime,
            poly,
            vars,
            level,
            json: as_json,
        } => {
            if level == 0 {
                return Err(Error::invalid("--level must be at least 1"));
            }
            let p = Prime::new(prime)?;
            let f = parse_poly(&poly, p, Uniformizer::Root { level: 0 }, vars.as_deref())?.reduce_mod_pi();
            let closed = fpt_closed_form(&f);
            let brackets = oracle_brackets(&f, level)?;
            if as_json {
                #[derive(Serialize)]
                struct Out {
                    p: u64,
                    poly: String,
                    closed_form: Option<Rat>,
                    brackets: Vec<FptBracket>,
                }
                let o = Out {
                    p: prime,
                    poly: f.to_string(),
                    closed_form: closed,
                    brackets,
                };
                writeln!(out, "{}", json(&o)).map_err(io)?;
            } else {
                writeln!(out, "f = {f} over F_{prime}").map_err(io)?;
                for b in &brackets {
                    writeln!(out, "e={}: nu={}, fpt in [{}, {}]", b.e, b.nu, b.lower, b.upper).map_err(io)?;
                }
                if let Some(x) = closed {
                    writeln!(out, "closed form: {x}").map_err(io)?;
                }
            }
        }
        Command::Padic { command } => padic(command, out)?,
        Command::Certify {
            prime,
            ram,
            cyclotomic,
            poly,
            vars,
            family,
            json: as_json,
            require_bound,
            oracle_level,
        } => {
            let p = Prime::new(prime)?;
            let ctx_unif = if cyclotomic {
                Uniformizer::Cyclotomic
            } else {
                Uniformizer::Root { level: ram }
            };
            let f = parse_poly(&poly, p, ctx_unif, vars.as_deref())?;
            let ctx = RingContext::new(p, ram, f.nvars(), cyclotomic)?;
            let family: Option<Family> = family.as_deref().map(str::parse).transpose()?;
            let opts = CertifyOptions {
                family,
                oracle_level,
                ..CertifyOptions::default()
            };
            let cert = certify(&f, ctx, &opts)?;
            if as_json {
                writeln!(out, "{}", cert.to_json_pretty()).map_err(io)?;
            } else {
                write_certificate(&cert, out).map_err(io)?;
            }
            if require_bound && !has_required_bound(&cert, family) {
                return Ok(EXIT_ABSTAIN);
            }
        }
        Command::LimitProfile {
            prime,
            ram,
            poly,
            vars,
            max_level,
            json: as_json,
        } => {
            let p = Prime::new(prime)?;
            let f = parse_poly(&poly, p, Uniformizer::Root { level: ram }, vars.as_deref())?;
            let prof = limit_profile(&f, max_level, &CertifyOptions::default())?;
            if as_json {
                writeln!(out, "{}", json(&prof)).map_err(io)?;
            } else {
                match (&prof.limit, &prof.limit_bracket) {
                    (Some(x), _) => writeln!(out, "limit fpt(f mod π) = {x}"),
                    (None, Some((l, u))) => writeln!(out, "limit fpt(f mod π) in [{l}, {u}]"),
                    _ => writeln!(out, "limit fpt(f mod π) unknown"),
                }
                .map_err(io)?;
                for e in &prof.entries {
                    let span = match (&e.exact, &e.lower, &e.upper) {
                        (Some(x), _, _) => format!("= {x}"),
                        (None, l, u) => format!(
                            "{}, {}",
                            l.as_ref().map_or("(0".into(), |b| format!(
                                "{}{}",
                                if b.strict { "(" } else { "[" },
                                b.value
                            )),
                            u.as_ref().map_or("?)".into(), |b| format!(
                                "{}{}",
                                b.value,
                                if b.strict { ")" } else { "]" }
                            ))
                        ),
                    };
                    writeln!(out, "a={}: {span} (upper by {})", e.level, e.upper_rule.unwrap_or("-")).map_err(io)?;
                }
                for n in &prof.notes {
                    writeln!(out, "note: {n}").map_err(io)?;
                }
            }
        }
        Command::Verify { suite, prime_max } => {
            let results = verify::run_suite(suite, prime_max);
            let failed = results.iter().filter(|r| !r.passed).count();
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                writeln!(out, "[{tag}] {}: {}", r.name, r.detail).map_err(io)?;
            }
            writeln!(out, "{} of {} checks passed", results.len() - failed, results.len()).map_err(io)?;
            if failed > 0 {
                return Ok(EXIT_INTERNAL);
            }
        }
    }
    Ok(EXIT_OK)
}

fn padic(cmd: PadicCommand, out: &mut dyn Write) -> Result<()> {
    match cmd {
        PadicCommand::Expand { prime, value } => {
            let p = Prime::new(prime)?;
            let x: Rat = value.parse()?;
            let exp = expand_base_p(&x, p)?;
            let join = |d: &[u64]| d.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            let pre = join(exp.preperiod());
            let sep = if pre.is_empty() { "" } else { "," };
            writeln!(out, "0.{pre}{sep}({})", join(exp.period())).map_err(io)?;
        }
        PadicCommand::Kummer { n, m, prime } => {
            writeln!(out, "{}", kummer_valuation(n, m, Prime::new(prime)?)?).map_err(io)?;
        }
        PadicCommand::Lucas { n, m, prime } => {
            writeln!(out, "{}", lucas_residue(n, m, Prime::new(prime)?)).map_err(io)?;
        }
        PadicCommand::Magic { prime } => {
            let (hi, lo) = magic_expansions(Prime::new(prime)?)?;
            let show = |d: &[u64]| d.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            writeln!(out, "(2p^2-2)/3 = {} digits [{}]", hi.value(), show(&hi.digits)).map_err(io)?;
            writeln!(out, "(p^2-1)/3 = {} digits [{}]", lo.value(), show(&lo.digits)).map_err(io)?;
        }
    }
    Ok(())
}

fn write_certificate(c: &BoundCertificate, out: &mut dyn Write) -> std::io::Result<()> {
    let f = &c.input.poly;
    let base = if c.input.ctx.cyclotomic {
        format!("W(k)[ζ_{}]", f.p)
    } else if c.input.ctx.ram_level == 0 {
        format!("W(k), p = {}", f.p)
    } else {
        format!("W(k)[p^(1/{}^{})]", f.p, c.input.ctx.ram_level)
    };
    match &c.exact {
        Some(x) => writeln!(out, "ppt(f) = {x}")?,
        None => writeln!(out, "ppt(f) in {c}")?,
    }
    writeln!(out, "base: {base}")?;
    if let (Some(b), Some(r)) = (&c.lower, c.lower_rule) {
        writeln!(
            out,
            "lower: {}{} by {r}",
            b.value,
            if b.strict { " (strict)" } else { "" }
        )?;
    }
    if let (Some(b), Some(r)) = (&c.upper, c.upper_rule) {
        writeln!(
            out,
            "upper: {}{} by {r}",
            b.value,
            if b.strict { " (strict)" } else { "" }
        )?;
    }
    writeln!(out, "rules:")?;
    for r in &c.rules {
        let mut parts = Vec::new();
        if let Some(b) = &r.lower {
            parts.push(format!("lower {} {}", if b.strict { ">" } else { ">=" }, b.value));
        }
        if let Some(b) = &r.upper {
            parts.push(format!("upper {} {}", if b.strict { "<" } else { "<=" }, b.value));
        }
        writeln!(out, "  {}: {}", r.id, parts.join(", "))?;
        for h in &r.hypotheses {
            writeln!(out, "    - {h}")?;
        }
    }
    for n in &c.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}
