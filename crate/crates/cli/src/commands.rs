//! Subcommand definitions and their implementations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use separability::criteria::{run_criteria, CriterionVerdict};
use separability::{
    classify, generate, ClassifyConfig, CriterionOutcome, CutMode, SearchConfig, StateSpec,
    Tolerances,
};

use crate::error::CliError;
use crate::report::{exit_code, Report, Timing};
use crate::state_file::StateFile;

#[derive(Debug, Parser)]
#[command(
    name = "separability",
    version,
    about = "Decide separability of density matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a state and write a JSON report.
    Analyze(AnalyzeArgs),
    /// Write a state from a named family.
    Gen(GenArgs),
    /// Run only the necessary criteria.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest accepted purity defect of a product vector.
    #[arg(long)]
    pub tol_defect: Option<f64>,
    /// Largest accepted reconstruction error of a decomposition.
    #[arg(long)]
    pub tol_decomp: Option<f64>,
    /// Number of random starts (default 64 per unit of rank).
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Omit timing and timestamp so reruns are byte-identical.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    BellPhiPlus,
    BellPhiMinus,
    BellPsiPlus,
    BellPsiMinus,
    #[value(name = "paper-example-1")]
    PaperExample1,
    #[value(name = "paper-example-2")]
    PaperExample2,
    #[value(name = "paper-example-3")]
    PaperExample3,
    Werner,
    Ghz,
    RandomSeparable,
    RandomDensity,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub parties: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub terms: usize,
    /// Rank of a random density (default: full rank).
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutsArg {
    All,
    Single,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = CutsArg::Single)]
    pub cuts: CutsArg,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

pub fn analyze_config(args: &AnalyzeArgs) -> ClassifyConfig {
    let mut cfg = ClassifyConfig {
        search: SearchConfig {
            starts: args.starts,
            seed: args.seed,
            ..SearchConfig::default()
        },
        ..ClassifyConfig::default()
    };
    if let Some(t) = args.tol_defect {
        cfg.search.defect_tol = t;
    }
    if let Some(t) = args.tol_decomp {
        cfg.decomposition.decomp_tol = t;
    }
    cfg
}

pub fn analyze(args: &AnalyzeArgs) -> Result<u8, CliError> {
    let cfg = analyze_config(args);
    let rho = StateFile::read(&args.input)?.to_density(&cfg.tolerances)?;
    let verdict = classify(&rho, &cfg)?;
    let mut report = Report::new(&rho, &verdict, &cfg);
    if !args.deterministic {
        report.timing = Some(Timing {
            elapsed_ms: verdict.diagnostics.elapsed.as_secs_f64() * 1e3,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        });
    }
    emit(&report.to_json(), args.out.as_deref())?;
    Ok(exit_code(verdict.outcome))
}

fn require(value: Option<f64>, family: &str, flag: &'static str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::MissingParameter {
        family: family.to_string(),
        flag,
    })
}

pub fn family_spec(args: &GenArgs) -> Result<StateSpec, CliError> {
    let dims = vec![args.dim; args.parties];
    Ok(match args.family {
        Family::BellPhiPlus => StateSpec::BellPhiPlus,
        Family::BellPhiMinus => StateSpec::BellPhiMinus,
        Family::BellPsiPlus => StateSpec::BellPsiPlus,
        Family::BellPsiMinus => StateSpec::BellPsiMinus,
        Family::PaperExample1 => StateSpec::PhiPlusMinusMix {
            lambda: require(args.lambda, "paper-example-1", "lambda")?,
        },
        Family::PaperExample2 => StateSpec::ComplexRank2Separable,
        Family::PaperExample3 => StateSpec::QutritShiftMix {
            lambda: require(args.lambda, "paper-example-3", "lambda")?,
        },
        Family::Werner => StateSpec::Werner {
            p: require(args.p, "werner", "p")?,
        },
        Family::Ghz => StateSpec::Ghz {
            parties: args.parties,
            dim: args.dim,
        },
        Family::RandomSeparable => StateSpec::RandomSeparable {
            seed: args.seed,
            dims,
            terms: args.terms,
        },
        Family::RandomDensity => {
            let full = dims.iter().product();
            StateSpec::RandomDensity {
                seed: args.seed,
                dims,
                rank: args.rank.unwrap_or(full),
            }
        }
    })
}

pub fn gen(args: &GenArgs) -> Result<u8, CliError> {
    let rho = generate(&family_spec(args)?)?;
    emit(
        &StateFile::from_density(&rho).to_json(),
        args.out.as_deref(),
    )?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct CheckReport<'a> {
    dims: &'a [usize],
    criteria: &'a [CriterionVerdict],
    summary: &'static str,
}

/// Exit 2 on any violation, 0 when PPT is sufficient on a 2x2 or 2x3
/// cut, 3 otherwise.
pub fn check(args: &CheckArgs) -> Result<u8, CliError> {
    let tol = Tolerances::default();
    let rho = StateFile::read(&args.input)?.to_density(&tol)?;
    let mode = match args.cuts {
        CutsArg::All => CutMode::All,
        CutsArg::Single => CutMode::Single,
    };
    let criteria = run_criteria(&rho, mode, &tol)?;
    let (summary, code) = if criteria.iter().any(|v| v.is_violation()) {
        ("entangled", 2)
    } else if criteria
        .iter()
        .any(|v| v.outcome == CriterionOutcome::SufficientSeparable)
    {
        ("ppt_sufficient", 0)
    } else {
        ("no_violation", 3)
    };
    let report = CheckReport {
        dims: rho.structure().dims(),
        criteria: &criteria,
        summary,
    };
    emit(
        &serde_json::to_string_pretty(&report).expect("check reports always serialize"),
        None,
    )?;
    Ok(code)
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Gen(g) => gen(g),
        Command::Check(c) => check(c),
    }
}
