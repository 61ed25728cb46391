//! `pstrat`: periodic strategy analysis from the command line.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use periodic_strategies::bayes::TransformKind;
use periodic_strategies::periodicity::TiePolicy;
use periodic_strategies_cli::analyze::{analyze, quad_preset_report, transform_file, AnalyzeOptions};
use periodic_strategies_cli::error::CliError;
use periodic_strategies_cli::format::{parse_game_file, to_json_string};
use periodic_strategies_cli::selftest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    /// Fail with the full list of payoff ties.
    Strict,
    /// Break every tie toward the lowest index and record it.
    FirstIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformArg {
    /// One aggregated player per original player, strategies are maps from
    /// types to actions.
    ExAnte,
    /// One player per type instance, expectations conditional on own type.
    InterimIndependent,
    /// Like interim-independent, but single-typed games keep their players
    /// and become the state-averaged game.
    InterimCorrelated,
}

impl From<TransformArg> for TransformKind {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::ExAnte => TransformKind::ExAnte,
            TransformArg::InterimIndependent => TransformKind::InterimIndependent,
            TransformArg::InterimCorrelated => TransformKind::InterimCorrelated,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pstrat",
    about = "Periodic strategy analysis for strategic, incomplete-information, and quadratic games",
    version
)]
struct Cli {
    /// How payoff ties inside the direct maps are handled.
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Strict)]
    tie_policy: PolicyArg,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Bound on enumerated cycle length in the multiplayer graph scan.
    #[arg(long, global = true)]
    max_cycle_len: Option<usize>,

    /// Seed for the randomized selftest pass.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every applicable analysis on a game file and print the report.
    Analyze {
        /// Path to a JSON game file.
        file: PathBuf,
    },
    /// Convert an incomplete-information game into an ordinary game.
    Transform {
        /// Path to a JSON game file of kind bayesian.
        file: PathBuf,
        #[arg(long, value_enum)]
        transform: TransformArg,
        /// Also analyze the transformed game.
        #[arg(long)]
        then_analyze: bool,
    },
    /// Analyze a built-in parametric game.
    Quad {
        /// cournot (parameters P, A, B, M) or public-good (parameters A, B, C).
        #[arg(long)]
        preset: String,
        /// Comma-separated key=value pairs, e.g. P=10,A=1,B=1,M=0.
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Check the embedded fixtures against their golden reports.
    Selftest,
}

fn parse_params(text: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for piece in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter {piece:?} is not key=value")))?;
        let num: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("parameter {key} has non-numeric value {value:?}")))?;
        if out.insert(key.trim().to_string(), num).is_some() {
            return Err(CliError::Usage(format!("parameter {key} given twice")));
        }
    }
    Ok(out)
}

fn read_game_file(path: &PathBuf) -> Result<periodic_strategies_cli::format::GameFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_game_file(&text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = AnalyzeOptions {
        policy: match cli.tie_policy {
            PolicyArg::Strict => TiePolicy::Strict,
            PolicyArg::FirstIndex => TiePolicy::FirstIndex,
        },
        max_cycle_len: cli.max_cycle_len,
    };
    match cli.command {
        Command::Analyze { file } => {
            let parsed = read_game_file(&file)?;
            let report = analyze(&parsed, &opts)?;
            match cli.format {
                FormatArg::Text => print!("{}", report.to_text()),
                FormatArg::Json => print!("{}", report.to_json()),
            }
            Ok(())
        }
        Command::Transform {
            file,
            transform,
            then_analyze,
        } => {
            let parsed = read_game_file(&file)?;
            let (out, analysis) = transform_file(&parsed, transform.into(), then_analyze, &opts)?;
            match cli.format {
                FormatArg::Json => match analysis {
                    Some(report) => {
                        let wrapper = serde_json::json!({
                            "game_file": serde_json::to_value(&out).expect("file serializes"),
                            "analysis": serde_json::to_value(&report).expect("report serializes"),
                        });
                        print!("{}", to_json_string(&wrapper));
                    }
                    None => print!("{}", to_json_string(&out)),
                },
                FormatArg::Text => {
                    print!("{}", to_json_string(&out));
                    if let Some(report) = analysis {
                        print!("{}", report.to_text());
                    }
                }
            }
            Ok(())
        }
        Command::Quad { preset, params } => {
            let params = parse_params(&params)?;
            let report = quad_preset_report(&preset, &params)?;
            match cli.format {
                FormatArg::Text => print!("{}", report.to_text()),
                FormatArg::Json => print!("{}", report.to_json()),
            }
            Ok(())
        }
        Command::Selftest => {
            let failures = selftest::run(cli.seed);
            if failures == 0 {
                Ok(())
            } else {
                Err(CliError::Usage(format!(
                    "selftest: {failures} check(s) failed"
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
