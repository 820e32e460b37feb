//! The `bjortho` command line: `check`, `classify` and `selftest`.
//!
//! Exit codes: 0 true / all suites pass, 1 false / a suite failed, 2 bad
//! input or flags, 3 (`check --oracle`) when the oracle lands in its margin
//! band or contradicts the analytic verdict.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::input::InputDocument;
use crate::oracle::{oracle_orthogonal, OracleResult, OracleVerdict};
use crate::selftest::{run_plan, Plan, SuiteConfig, SuiteReport};
use crate::space::{Field, SpaceKind, Tolerances};
use crate::strategy::{FamilyParams, Registry};
use crate::verdict::{AdditivityWitness, Side, SymmetryVerdict, Verdict, Witness};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bjortho", version, about = "Birkhoff-James orthogonality on finite atomic sup, L1 and Lp spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether f is Birkhoff-James orthogonal to g.
    Check(CheckArgs),
    /// Report smoothness and left/right symmetry of f.
    Classify(ClassifyArgs),
    /// Cross-check the analytic criteria against the oracle on random instances.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Sup,
    L1,
    Lp,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: Family,
    /// Exponent for `--space lp`, 1 < p < inf.
    #[arg(long)]
    p: Option<f64>,
    /// JSON document, or CSV when the name ends in `.csv`.
    #[arg(long)]
    input: PathBuf,
    /// Name of the function f in the input.
    #[arg(long)]
    f: String,
}

#[derive(Debug, Args)]
struct TolArgs {
    #[arg(long, default_value_t = Tolerances::default().rel_attain)]
    tol_rel_attain: f64,
    #[arg(long, default_value_t = Tolerances::default().hull_eps)]
    tol_hull_eps: f64,
    #[arg(long, default_value_t = Tolerances::default().oracle_margin)]
    tol_oracle_margin: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Result<Tolerances> {
        let tol = Tolerances {
            rel_attain: self.tol_rel_attain,
            hull_eps: self.tol_hull_eps,
            oracle_margin: self.tol_oracle_margin,
        };
        tol.validate()?;
        Ok(tol)
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Name of the function g in the input.
    #[arg(long)]
    g: String,
    /// Also run the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Attach oracle-verified witnesses for every property that fails.
    #[arg(long)]
    witness: bool,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, env = "BJORTHO_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    dim_max: usize,
    /// Comma-separated families to test.
    #[arg(long, value_delimiter = ',', default_value = "sup,l1,lp")]
    spaces: Vec<String>,
    /// Comma-separated exponents for the lp family.
    #[arg(long, value_delimiter = ',', default_value = "1.2,1.5,3,4,7")]
    p_list: Vec<f64>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Debug, Serialize)]
struct Report<T: Serialize> {
    command: Vec<String>,
    #[serde(flatten)]
    body: T,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    exit_code: i32,
}

#[derive(Debug, Serialize)]
struct CheckBody {
    space: SpaceKind,
    field: Field,
    f: String,
    g: String,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleResult>,
}

#[derive(Debug, Default, Serialize)]
struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    non_smooth: Option<AdditivityWitness>,
}

#[derive(Debug, Serialize)]
struct ClassifyBody {
    space: SpaceKind,
    field: Field,
    f: String,
    verdict: SymmetryVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Witnesses>,
}

#[derive(Debug, Serialize)]
struct SelftestBody {
    trials: u64,
    dim_max: usize,
    spaces: Vec<String>,
    p_list: Vec<f64>,
    band_rate: f64,
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn space_kind(args: &SpaceArgs) -> Result<SpaceKind> {
    match (args.space, args.p) {
        (Family::Lp, Some(p)) => SpaceKind::lp(p),
        (Family::Lp, None) => Err(Error::Input("--space lp needs --p".into())),
        (_, Some(_)) => Err(Error::Input("--p only applies to --space lp".into())),
        (Family::Sup, None) => Ok(SpaceKind::Sup),
        (Family::L1, None) => Ok(SpaceKind::L1),
    }
}

fn criterion(kind: SpaceKind) -> Result<Box<dyn crate::strategy::OrthogonalityCriterion>> {
    let p = match kind {
        SpaceKind::Lp { p } => Some(p),
        _ => None,
    };
    Registry::builtin().create(kind.name(), &FamilyParams { p })
}

fn emit<T: Serialize>(out: &mut dyn Write, report: &Report<T>) -> i32 {
    let text = serde_json::to_string_pretty(report).expect("reports always serialize");
    if writeln!(out, "{text}").is_err() {
        return EXIT_USAGE;
    }
    report.exit_code
}

fn check(args: &CheckArgs, command: Vec<String>, out: &mut dyn Write) -> Result<i32> {
    let kind = space_kind(&args.space)?;
    let tol = args.tol.tolerances()?;
    let doc = InputDocument::read(&args.space.input)?;
    let space = doc.space()?;
    let (f, g) = (doc.function(&args.space.f)?, doc.function(&args.g)?);
    let verdict = criterion(kind)?.orthogonal(&space, &f, &g, &tol)?;
    let oracle = if args.oracle { Some(oracle_orthogonal(&space, kind, &f, &g, &tol)?) } else { None };
    let exit_code = match (&oracle, verdict.orthogonal) {
        (Some(o), _) if o.verdict == OracleVerdict::MarginBand => EXIT_ORACLE,
        (Some(o), true) if o.verdict != OracleVerdict::Orthogonal => EXIT_ORACLE,
        (Some(o), false) if o.verdict != OracleVerdict::NotOrthogonal => EXIT_ORACLE,
        (_, true) => EXIT_TRUE,
        (_, false) => EXIT_FALSE,
    };
    let body = CheckBody {
        space: kind,
        field: space.field(),
        f: args.space.f.clone(),
        g: args.g.clone(),
        verdict,
        oracle,
    };
    Ok(emit(out, &Report { command, body, tolerances: tol, seed: None, exit_code }))
}

fn classify(args: &ClassifyArgs, command: Vec<String>, out: &mut dyn Write) -> Result<i32> {
    let kind = space_kind(&args.space)?;
    let tol = args.tol.tolerances()?;
    let doc = InputDocument::read(&args.space.input)?;
    let space = doc.space()?;
    let f = doc.function(&args.space.f)?;
    let c = criterion(kind)?;
    let verdict = c.classify(&space, &f, &tol)?;
    let witnesses = if args.witness {
        let mut w = Witnesses::default();
        if !verdict.is_left_symmetric {
            w.left = c.asymmetry_witness(&space, &f, &tol, Side::Left)?;
        }
        if !verdict.is_right_symmetric {
            w.right = c.asymmetry_witness(&space, &f, &tol, Side::Right)?;
        }
        if !verdict.is_smooth {
            w.non_smooth = c.additivity_violation(&space, &f, &tol)?;
        }
        Some(w)
    } else {
        None
    };
    let body = ClassifyBody { space: kind, field: space.field(), f: args.space.f.clone(), verdict, witnesses };
    Ok(emit(out, &Report { command, body, tolerances: tol, seed: None, exit_code: EXIT_TRUE }))
}

fn selftest(args: &SelftestArgs, command: Vec<String>, out: &mut dyn Write) -> Result<i32> {
    let tol = args.tol.tolerances()?;
    if args.trials == 0 || args.dim_max == 0 {
        return Err(Error::Input("--trials and --dim-max must be positive".into()));
    }
    let plan = Plan {
        families: args.spaces.clone(),
        p_list: args.p_list.clone(),
        ..Plan::new(args.trials)
    };
    let cfg = SuiteConfig { seed: args.seed, dim_max: args.dim_max, tol };
    let suites = run_plan(&plan, &cfg)?;
    let trials: u64 = suites.iter().map(|s| s.trials).sum();
    let band: u64 = suites.iter().map(|s| s.band_hits).sum();
    let passed = suites.iter().all(|s| s.ok);
    let body = SelftestBody {
        trials: args.trials,
        dim_max: args.dim_max,
        spaces: args.spaces.clone(),
        p_list: args.p_list.clone(),
        band_rate: if trials == 0 { 0.0 } else { band as f64 / trials as f64 },
        passed,
        suites,
    };
    let exit_code = if passed { EXIT_TRUE } else { EXIT_FALSE };
    Ok(emit(out, &Report { command, body, tolerances: tol, seed: Some(args.seed), exit_code }))
}

/// Runs the CLI on `args` (program name first), writing the report to `out`
/// and diagnostics to `err`; returns the exit code.
pub fn run(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match &cli.command {
        Command::Check(a) => check(a, command, out),
        Command::Classify(a) => classify(a, command, out),
        Command::Selftest(a) => selftest(a, command, out),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "bjortho: {e}");
        EXIT_USAGE
    })
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os().collect(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let args = std::iter::once("bjortho").chain(args.iter().copied()).map(OsString::from).collect();
        let code = run(args, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bad_flags_exit_two() {
        assert_eq!(run_str(&["check", "--space", "hilbert"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        let (code, out, err) = run_str(&["check", "--space", "sup", "--input", "/nonexistent.json", "--f", "f", "--g", "g"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty() && err.contains("nonexistent"));
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_str(&["--help"]).0, EXIT_TRUE);
    }
}
