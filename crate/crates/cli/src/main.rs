use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use etalift::arith::{hasse_exponent, is_prime, is_suitable_numeric};
use etalift::forms::{cphi_series, cphi_series_mod, EtaQuotient};
use etalift::frobenius::{build_fl, classify_table, scan_congruence, CongruenceReport};
use etalift::hecke::{t_p2_eta, HalfIntegralMeta};
use etalift::lift::{compare_lifts, newness_checks, shimura_lift};
use etalift::multipliers::{nu_eta, nu_theta, GL2Int};
use etalift::qseries::{parse_rational, rational_to_string, FracSeries, SeriesJson};
use etalift::verify::{self, SuiteReport};

#[derive(Parser)]
#[command(name = "etalift", version, about = "Shimura lifts of eta-multiplier forms and Frobenius partition congruences")]
struct Cli {
    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; overrides ETALIFT_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A form given as a sum of eta quotients, each optionally prefixed by a
/// rational coefficient: `--eta "13 1^2" --eta "13/7:13^3"`.
#[derive(Args, Clone)]
struct FormArgs {
    #[arg(long = "eta")]
    eta: Vec<String>,
    /// Steps of q to expand.
    #[arg(long, default_value_t = 100)]
    prec: usize,
}

impl FormArgs {
    fn expand(&self) -> etalift::Result<FracSeries> {
        let mut acc: Option<FracSeries> = None;
        for term in &self.eta {
            let (c, spec) = match term.split_once(':') {
                Some((c, s)) => (parse_rational(c.trim())?, s),
                None => (BigRational::from_integer(1.into()), term.as_str()),
            };
            let s = EtaQuotient::parse(spec)?.expand(self.prec).scale(&c);
            acc = Some(match acc {
                None => s,
                Some(a) => a.add(&s)?,
            });
        }
        acc.ok_or_else(|| etalift::Error::InvalidInput("--eta is required here".into()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expand an eta quotient (or a combination) as exact or reduced coefficients.
    Expand {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Apply T_{p²} to a form, or run the Hecke suite.
    Hecke {
        #[command(flatten)]
        form: FormArgs,
        /// `{"lambda":2,"N":1,"psi":"1","r":5}`
        #[arg(long)]
        meta: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        suite: bool,
    },
    /// The lift 𝒮_t of a form, or the newness suite over all examples.
    Lift {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        meta: Option<String>,
        #[arg(long)]
        t: Option<u64>,
        /// Also check the Atkin-Lehner relations the signs predict.
        #[arg(long)]
        newness: bool,
        #[arg(long)]
        suite: bool,
    },
    /// Compare 𝒮_t(F) with Shimura's lift of F|V_D.
    CompareLifts {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        meta: Option<String>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, default_value_t = 100)]
        terms: usize,
        /// Every example form.
        #[arg(long)]
        all: bool,
    },
    /// Lift identities for one worked example, all of them, or the printed expansions.
    VerifyExample {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        n: Option<u8>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        golden: bool,
        #[arg(long, default_value_t = 200)]
        terms: usize,
    },
    /// ν_η or ν_θ at a matrix, or the multiplier suite.
    CheckMultiplier {
        /// `a,b,c,d`
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        matrix: Option<Vec<i64>>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// F_ℓ modulo ℓ, or the F_ℓ suite.
    BuildFl {
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long, default_value_t = 100)]
        prec: usize,
        #[arg(long)]
        check: bool,
    },
    /// cφ_m coefficients, or the cφ / A₅ suites.
    Cphi {
        #[arg(long, default_value_t = 5)]
        m: u32,
        #[arg(long, default_value_t = 100)]
        prec: usize,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        a5_check: bool,
    },
    /// cφ₅((13Q²n+5)/24) ≡ 0 (mod 13) for (n/Q) = ε, or the scan suite.
    ScanCongruence {
        #[arg(long, default_value_t = 13)]
        ell: u64,
        #[arg(long = "Q", alias = "q")]
        q: Option<u64>,
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<i32>,
        #[arg(long)]
        nmax: Option<u64>,
        #[arg(long)]
        suite: bool,
    },
    /// Primes Q < lmax with ε_Q = ±1.
    Table {
        #[arg(long, default_value_t = 2000)]
        lmax: u64,
        /// Fail unless the rows match the published table.
        #[arg(long)]
        check: bool,
    },
    /// Suitability of (k, ℓ) and the Hasse exponent, or the predicate suite.
    Suitability {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long)]
        check: bool,
    },
}

enum Outcome {
    Pass,
    Fail,
}

// a closed pipe (e.g. `| head`) is not an error worth a panic
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn emit<T: Serialize>(value: &T) {
    let s = serde_json::to_string_pretty(value).expect("serializable");
    out!("{s}");
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_suite(rep: &SuiteReport, format: Format) -> Outcome {
    eprintln!("{}: {:.1} s", rep.name, rep.elapsed_ms / 1e3);
    match format {
        Format::Json => emit(&json!({ "suite": rep.name, "passed": rep.passed(), "checks": rep.checks })),
        Format::Csv => {
            out!("label,passed,detail");
            for c in &rep.checks {
                out!("{},{},{}", csv_field(&c.label), c.passed, csv_field(&c.detail));
            }
        }
    }
    if rep.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn emit_congruence(r: &CongruenceReport, format: Format) -> Outcome {
    match format {
        Format::Json => emit(r),
        Format::Csv => {
            out!("ell,Q,eps_Q,n_checked,violations,passed");
            out!("{},{},{},{},{},{}", r.ell, r.q, r.eps_q, r.n_checked, r.violations.len(), r.passed());
            if !r.violations.is_empty() {
                out!("n,argument,residue");
                for (n, a, v) in &r.violations {
                    out!("{n},{a},{v}");
                }
            }
        }
    }
    if r.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn need<T>(x: Option<T>, flag: &str) -> etalift::Result<T> {
    x.ok_or_else(|| etalift::Error::InvalidInput(format!("--{flag} is required here")))
}

fn parse_meta(meta: Option<String>) -> etalift::Result<HalfIntegralMeta> {
    HalfIntegralMeta::from_json(&need(meta, "meta")?)
}

fn run(cli: Cli) -> etalift::Result<Outcome> {
    let format = cli.format;
    let seed = cli.seed;
    match cli.command {
        Command::Expand { form, modulus } => {
            let s = form.expand()?;
            match modulus {
                Some(m) => emit(&SeriesJson::from_mod(&s.reduce_mod(m)?)),
                None => emit(&SeriesJson::from_frac(&s)),
            }
            Ok(Outcome::Pass)
        }
        Command::Hecke { suite: true, .. } => Ok(emit_suite(&verify::hecke_suite(seed, 100), format)),
        Command::Hecke { form, meta, p, .. } => {
            let meta = parse_meta(meta)?;
            let f = meta.normalize(&form.expand()?)?;
            emit(&SeriesJson::from_frac(&t_p2_eta(&meta, &f, need(p, "p")?)?));
            Ok(Outcome::Pass)
        }
        Command::Lift { suite: true, .. } => Ok(emit_suite(&verify::newness_suite(200), format)),
        Command::Lift { form, meta, t, newness, .. } => {
            let meta = parse_meta(meta)?;
            let f = form.expand()?;
            let lift = shimura_lift(&meta, &f, need(t, "t")?)?;
            let checks = if newness { newness_checks(&lift)? } else { Vec::new() };
            let passed = checks.iter().all(|c| c.passed);
            emit(&json!({
                "target_weight": lift.target_weight,
                "target_level": lift.target_level,
                "eps": lift.eps,
                "class_mismatch": lift.class_mismatch,
                "series": SeriesJson::from_frac(&lift.coeffs),
                "checks": checks,
            }));
            Ok(if passed { Outcome::Pass } else { Outcome::Fail })
        }
        Command::CompareLifts { all: true, terms, .. } => Ok(emit_suite(&verify::shcompare_suite(terms), format)),
        Command::CompareLifts { form, meta, t, terms, .. } => {
            let meta = parse_meta(meta)?;
            let f = form.expand()?;
            let d = compare_lifts(&meta, &f, need(t, "t")?, terms)?;
            let zero = d == BigRational::from_integer(0.into());
            emit(&json!({ "terms": terms, "max_difference": rational_to_string(&d), "passed": zero }));
            Ok(if zero { Outcome::Pass } else { Outcome::Fail })
        }
        Command::VerifyExample { golden: true, .. } => Ok(emit_suite(&verify::golden_suite(), format)),
        Command::VerifyExample { n, all, terms, .. } => {
            let which: Vec<u8> = if all { Vec::new() } else { vec![need(n, "n")?] };
            Ok(emit_suite(&verify::lift_identity_suite(&which, terms), format))
        }
        Command::CheckMultiplier { matrix: Some(m), .. } => {
            if m.len() != 4 {
                return Err(etalift::Error::InvalidInput("--matrix takes exactly a,b,c,d".into()));
            }
            let g = GL2Int::new(m[0], m[1], m[2], m[3]);
            let eta = nu_eta(&g)?;
            let theta = if g.c % 4 == 0 { nu_theta(&g).ok().map(|x| x.to_string()) } else { None };
            emit(&json!({ "matrix": g.to_string(), "nu_eta": eta.to_string(), "nu_theta": theta }));
            Ok(Outcome::Pass)
        }
        Command::CheckMultiplier { samples, .. } => {
            Ok(emit_suite(&verify::multiplier_suite(seed, samples, 100, 500, 999), format))
        }
        Command::BuildFl { check: true, prec, .. } => Ok(emit_suite(&verify::fl_suite(prec, 500), format)),
        Command::BuildFl { ell, prec, .. } => {
            emit(&SeriesJson::from_mod(&build_fl(need(ell, "ell")?, prec)?));
            Ok(Outcome::Pass)
        }
        Command::Cphi { check: true, .. } => Ok(emit_suite(&verify::cphi_suite(1000, 100_000), format)),
        Command::Cphi { a5_check: true, .. } => Ok(emit_suite(&verify::a5_suite(1_000_000), format)),
        Command::Cphi { m, prec, modulus, .. } => {
            match modulus {
                Some(p) => emit(&SeriesJson::from_mod(&cphi_series_mod(m, prec, p)?)),
                None => emit(&SeriesJson::from_frac(&cphi_series(m, prec)?)),
            }
            Ok(Outcome::Pass)
        }
        Command::ScanCongruence { suite: true, .. } => Ok(emit_suite(&verify::scan_suite(2_000_000), format)),
        Command::ScanCongruence { ell, q, eps, nmax, .. } => {
            if ell != 13 {
                return Err(etalift::Error::Unsupported("quadratic scans are implemented for ℓ = 13".into()));
            }
            let r = scan_congruence(ell, need(q, "Q")?, need(eps, "eps")?, need(nmax, "nmax")?)?;
            Ok(emit_congruence(&r, format))
        }
        Command::Table { lmax, check } => {
            let t = classify_table(lmax)?;
            let expected = |row: &[u64]| row.iter().copied().filter(|&x| x < lmax).collect::<Vec<_>>();
            let matches = t.plus == expected(&verify::TABLE_PLUS) && t.minus == expected(&verify::TABLE_MINUS);
            match format {
                Format::Csv => {
                    let row = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                    out!("eps_Q,Q");
                    out!("1,{}", row(&t.plus));
                    out!("-1,{}", row(&t.minus));
                }
                Format::Json => emit(&json!({ "lmax": lmax, "plus": t.plus, "minus": t.minus, "no_congruence": t.none })),
            }
            Ok(if check && !matches { Outcome::Fail } else { Outcome::Pass })
        }
        Command::Suitability { check: true, .. } => {
            Ok(emit_suite(&verify::predicate_suite(40, 300, 1_000_000), format))
        }
        Command::Suitability { k, ell, .. } => {
            let ell = need(ell, "ell")?;
            if ell < 5 || !is_prime(ell) {
                return Err(etalift::Error::InvalidInput(format!("ℓ = {ell} must be a prime ≥ 5")));
            }
            let suitable = match k {
                Some(k) if k == 0 || k % 2 == 1 => {
                    return Err(etalift::Error::InvalidInput(format!("k = {k} must be even and positive")))
                }
                Some(k) => Some(is_suitable_numeric(k, ell)),
                None => None,
            };
            emit(&json!({ "k": k, "ell": ell, "suitable": suitable, "hasse_exponent": hasse_exponent(ell) }));
            Ok(Outcome::Pass)
        }
    }
}

fn thread_count(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var("ETALIFT_THREADS").ok()?.parse().ok()).filter(|&n| n > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = thread_count(cli.threads) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    let code = match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            emit(&json!({ "error": e.to_string() }));
            ExitCode::from(1)
        }
    };
    let _ = std::io::stdout().flush();
    code
}
