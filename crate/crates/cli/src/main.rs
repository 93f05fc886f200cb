use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use bispec_core::bispectral::{builtin_recursion, solve_free_params_with};
use bispec_core::families::{
    eigen_poly, family_operator, hermite_bundle_member, psi, series_basis, series_family, FamilyId,
};
use bispec_core::parallel::Execution;
use bispec_core::rational::{self, Rational};
use bispec_core::verify::{verify, Status, Suite, VerificationReport, VerifyConfig};
use chrono::{DateTime, SecondsFormat, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// `println!` that treats a closed stdout (e.g. `| head`) as a normal end of output.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Largest truncation order accepted by `show` and `params`.
const MAX_ORDER: usize = 400;

#[derive(Parser)]
#[command(name = "bispec", version)]
#[command(about = "Exact checks for the Hermite operator and its Darboux descendants")]
struct Cli {
    /// Run every sweep on the current thread
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an operator, polynomial eigenfunction or series eigenfunction
    Show(ShowArgs),
    /// Run verification suites and report
    Verify(VerifyArgs),
    /// Find the linear constraints on the free seeds for an n-window
    Params(ParamsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Op,
    Poly,
    Series,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Hermite,
    HermitePsi,
    OneGap,
    TwoGap,
}

impl Family {
    fn id(self) -> FamilyId {
        match self {
            Family::Hermite | Family::HermitePsi => FamilyId::Hermite,
            Family::OneGap => FamilyId::OneGap,
            Family::TwoGap => FamilyId::TwoGap,
        }
    }
}

#[derive(Args)]
struct ShowArgs {
    kind: Kind,
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Truncation order for series
    #[arg(long, default_value_t = 10)]
    order: usize,
    /// Coefficient of the even solution (of H_n for hermite)
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    /// Coefficient of the odd solution (of psi_n for hermite)
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    beta: Option<Rational>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Factorization,
    Intertwine,
    Eigen,
    Recursion,
    Params,
    Hyp,
    Gauge,
    Adcond,
    Oracle,
    Algebra,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        let one = match self {
            SuiteArg::All => return Suite::ALL.to_vec(),
            SuiteArg::Factorization => Suite::Factorization,
            SuiteArg::Intertwine => Suite::Intertwine,
            SuiteArg::Eigen => Suite::Eigen,
            SuiteArg::Recursion => Suite::Recursion,
            SuiteArg::Params => Suite::Params,
            SuiteArg::Hyp => Suite::Hyp,
            SuiteArg::Gauge => Suite::Gauge,
            SuiteArg::Adcond => Suite::Adcond,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Algebra => Suite::Algebra,
        };
        vec![one]
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long = "n-max", visible_alias = "nMax", default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(20..=MAX_ORDER as u64))]
    order: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Inclusive n-window, e.g. `6..20`
    #[arg(long, value_parser = parse_window)]
    window: RangeInclusive<usize>,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..=MAX_ORDER as u64))]
    order: u64,
    #[arg(long)]
    json: bool,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_window(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad window start `{lo}`"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad window end `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn print_json(v: &impl serde::Serialize) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("BISPEC_MAX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("BISPEC_MAX_THREADS must be a non-negative integer, got `{raw}`"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

/// `SOURCE_DATE_EPOCH` if set (reproducible reports), otherwise now.
fn timestamp() -> Result<String, String> {
    let when: DateTime<Utc> = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(raw) => {
            let secs: i64 = raw
                .trim()
                .parse()
                .map_err(|_| format!("SOURCE_DATE_EPOCH must be an integer, got `{raw}`"))?;
            DateTime::from_timestamp(secs, 0).ok_or("SOURCE_DATE_EPOCH out of range")?
        }
        Err(_) => Utc::now(),
    };
    Ok(when.to_rfc3339_opts(SecondsFormat::Secs, true))
}

fn cmd_show(args: ShowArgs) -> ExitCode {
    if args.order > MAX_ORDER {
        return usage_error(format!("order must be at most {MAX_ORDER}"));
    }
    let f = args.family.id();
    match args.kind {
        Kind::Op => {
            if args.family == Family::HermitePsi {
                return usage_error("hermite-psi names a series family; use --family hermite");
            }
            let op = family_operator(f);
            if args.json {
                print_json(&op);
            } else {
                out!("{op}");
            }
        }
        Kind::Poly => {
            if args.family == Family::HermitePsi {
                return usage_error("psi_n is not a polynomial; use `show series`");
            }
            let p = eigen_poly(f, args.n);
            if args.json {
                print_json(&p);
            } else {
                out!("{p}");
            }
        }
        Kind::Series => return show_series(&args),
    }
    ExitCode::SUCCESS
}

fn show_series(args: &ShowArgs) -> ExitCode {
    let (n, order) = (args.n, args.order);
    let one = || Rational::from_integer(1.into());
    let zero = || Rational::from_integer(0.into());
    match args.family {
        Family::HermitePsi | Family::Hermite => {
            let s = if args.family == Family::HermitePsi {
                psi(n, order)
            } else {
                let a0 = args.alpha.clone().unwrap_or_else(one);
                let b0 = args.beta.clone().unwrap_or_else(zero);
                hermite_bundle_member(n, &a0, &b0, order)
            };
            if args.json {
                print_json(&s);
            } else {
                out!("{s}");
            }
        }
        Family::OneGap | Family::TwoGap => {
            let f = args.family.id();
            if args.alpha.is_none() && args.beta.is_none() {
                let (even, odd) = match series_basis(f, n, order) {
                    Ok(b) => b,
                    Err(e) => return usage_error(e),
                };
                if args.json {
                    print_json(&json!({"family": f, "n": n, "even": even, "odd": odd}));
                } else {
                    out!("even: {even}");
                    out!("odd:  {odd}");
                }
            } else {
                let a = args.alpha.clone().unwrap_or_else(zero);
                let b = args.beta.clone().unwrap_or_else(zero);
                let el = match series_family(f, n, &a, &b, order) {
                    Ok(el) => el,
                    Err(e) => return usage_error(e),
                };
                if args.json {
                    print_json(&el);
                } else {
                    out!("{}", el.series);
                }
            }
        }
    }
    ExitCode::SUCCESS
}

fn print_report(r: &VerificationReport) {
    for s in &r.sections {
        out!(
            "{:<14} passed {:>3}  failed {:>3}  skipped {:>3}",
            s.name.to_string(),
            s.tally.passed,
            s.tally.failed,
            s.tally.skipped
        );
        for c in &s.checks {
            let tag = match c.status {
                Status::Pass => continue,
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            match &c.detail {
                Some(d) => out!("  {tag} {}: {d}", c.name),
                None => out!("  {tag} {}", c.name),
            }
        }
    }
    out!(
        "overall: passed {}, failed {}, skipped {}",
        r.overall.passed,
        r.overall.failed,
        r.overall.skipped
    );
}

fn cmd_verify(args: VerifyArgs, exec: Execution) -> ExitCode {
    let cfg = VerifyConfig {
        n_max: args.n_max as usize,
        order: args.order as usize,
        seed: args.seed,
        exec,
    };
    let stamp = match timestamp() {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let report = match verify(&args.suite.suites(), &cfg, stamp) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    if let Some(path) = &args.out {
        if let Err(e) = fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    }
    if args.json {
        out!("{text}");
    } else {
        print_report(&report);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn cmd_params(args: ParamsArgs, exec: Execution) -> ExitCode {
    if args.family == Family::HermitePsi {
        return usage_error("params takes hermite, one-gap or two-gap");
    }
    let f = args.family.id();
    let rec = builtin_recursion(f);
    let set = match solve_free_params_with(exec, f, &rec, args.window.clone(), args.order as usize) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    if args.json {
        print_json(&set);
    } else if set.is_empty() {
        out!("no constraints");
    } else {
        for c in &set.constraints {
            out!("{} = {}", c.lhs, c.rhs);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return usage_error(e);
    }
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Show(args) => cmd_show(args),
        Command::Verify(args) => cmd_verify(args, exec),
        Command::Params(args) => cmd_params(args, exec),
    }
}
