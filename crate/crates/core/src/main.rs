use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use asymcert::asymlp::{asym_feasible, feasible_at, sample_points, SolveError, SolveOptions};
use asymcert::certificate::{build_omega, ScalarSet};
use asymcert::decide::{decide_plinear, verify_decision, DecideError, DecideOptions, SubsetQuery};
use asymcert::linsys::LinearSystem;
use asymcert::ratfield::parse_rational;
use asymcert::report::{
    to_json, CertifyReport, DecideReport, OmegaReport, OracleSampleJson, SolveReport, VerdictJson,
};
use asymcert::selftest::run_selftest;
use asymcert::transform::{strict_to_nonstrict, AsymSystem, AsymSystemJson};

#[derive(Parser)]
#[command(name = "asymcert", version, about = "Exact non-triviality certificates and asymptotic feasibility for linear systems")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Fixed-K oracle checks per asymptotic verdict.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    samples: u32,
    /// Maximum simplex pivots per solve.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pivot_ceiling: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Certificate data for a list of rational scalars.
    Certify {
        #[arg(required = true, allow_negative_numbers = true)]
        scalars: Vec<String>,
    },
    /// Decide feasibility and subset non-triviality, then audit the answer.
    Decide(DecideArgs),
    /// Decide and print every audit check.
    Audit(DecideArgs),
    /// Asymptotic feasibility of a system (text or JSON; an asymptotic JSON
    /// system is solved as is, anything else after the strict gadget).
    SolveAsym {
        input: PathBuf,
    },
    /// Print the Ω reduction chain for N scalars.
    Omega {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        n: u64,
    },
    /// Run the randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(Args)]
struct DecideArgs {
    /// System file, or `-` for standard input.
    input: PathBuf,
    #[arg(long, num_args = 1.., required = true)]
    subset: Vec<String>,
    /// Run part 2 on the system as given, without homogenizing.
    #[arg(long)]
    literal: bool,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<DecideError> for Failure {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::Solve(e) => e.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit<T: Serialize + std::fmt::Display>(format: Format, report: &T) {
    let text = match format {
        Format::Json => format!("{}\n", to_json(report)),
        Format::Text => report.to_string(),
    };
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let config = cli.config;
    let solve = SolveOptions {
        pivot_ceiling: config.pivot_ceiling.map(|p| p as usize),
    };
    match cli.command {
        Command::Certify { scalars } => {
            let values = scalars
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| Failure::Input(format!("`{s}` is not a rational number"))))
                .collect::<Result<Vec<_>, _>>()?;
            let x = ScalarSet::new(values).map_err(|e| Failure::Input(e.to_string()))?;
            let report = CertifyReport::new(&x).map_err(|e| Failure::Internal(e.to_string()))?;
            emit(config.format, &report);
            Ok(true)
        }
        Command::Decide(args) => decide(&config, solve, args, false),
        Command::Audit(args) => decide(&config, solve, args, true),
        Command::SolveAsym { input } => {
            let text = read_input(&input)?;
            let sys = parse_asym(&text)?;
            let verdict = asym_feasible(&sys, &solve)?;
            let oracle_samples = sample_points(&verdict.threshold, config.samples as usize)
                .into_iter()
                .map(|k0| {
                    let fixed = feasible_at(&sys, &k0, &solve)?.feasible;
                    Ok(OracleSampleJson {
                        stage: "part1".into(),
                        k0: k0.to_string(),
                        asymptotic: verdict.feasible,
                        fixed,
                        agree: fixed == verdict.feasible,
                    })
                })
                .collect::<Result<Vec<_>, SolveError>>()?;
            let agree = oracle_samples.iter().all(|s| s.agree);
            emit(
                config.format,
                &SolveReport {
                    verdict: VerdictJson::from(&verdict),
                    oracle_samples,
                },
            );
            Ok(agree)
        }
        Command::Omega { n } => {
            let omega = build_omega(n as usize).map_err(|e| Failure::Input(e.to_string()))?;
            let report = OmegaReport::new(&omega).map_err(|e| Failure::Internal(e.to_string()))?;
            emit(config.format, &report);
            Ok(true)
        }
        Command::Selftest { seed, trials } => {
            let report = run_selftest(seed, trials);
            emit(config.format, &report);
            Ok(report.passed())
        }
    }
}

fn parse_asym(text: &str) -> Result<AsymSystem, Failure> {
    if text.trim_start().starts_with('{') {
        if let Ok(j) = serde_json::from_str::<AsymSystemJson>(text) {
            return AsymSystem::from_json(&j).map_err(|e| Failure::Input(e.to_string()));
        }
    }
    let sys = LinearSystem::parse_any(text).map_err(|e| Failure::Input(e.to_string()))?;
    strict_to_nonstrict(&sys).map_err(|e| Failure::Input(e.to_string()))
}

fn decide(config: &RunConfig, solve: SolveOptions, args: DecideArgs, full_audit: bool) -> Result<bool, Failure> {
    let text = read_input(&args.input)?;
    let sys = LinearSystem::parse_any(&text).map_err(|e| Failure::Input(e.to_string()))?;
    let subset = SubsetQuery::new(args.subset.clone()).map_err(|e| Failure::Input(e.to_string()))?;
    let opts = DecideOptions {
        solve,
        oracle_samples: config.samples as usize,
        literal: args.literal,
    };
    let decision = decide_plinear(&sys, &subset, &opts)?;
    let audit = verify_decision(&sys, &subset, &decision, &opts)?;
    let ok = audit.passed() && decision.oracle_agrees();
    if full_audit && config.format == Format::Text {
        let verdict = if audit.passed() { "passed" } else { "FAILED" };
        let _ = writeln!(io::stdout().lock(), "{audit}audit {verdict}");
    } else {
        emit(config.format, &DecideReport::new(subset.names(), &decision, Some(&audit)));
    }
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: internal consistency check failed");
            ExitCode::from(3)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
