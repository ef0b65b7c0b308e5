//! `mwtree`: build, invert and verify matrix-weighted tree operators from
//! JSON graph files.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 unreadable input or
//! bad flags, 3 the input does not meet the command's hypotheses, 4 the
//! distance matrix is not invertible.

mod commands;
mod graph_file;
mod report;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mwtree_core::gen::WeightKind;
use mwtree_core::LaplacianMode;

use commands::{Failure, Input, Options, RandomSpec, Suite, Which};

#[derive(Debug, Parser)]
#[command(name = "mwtree", version, about = "Matrix-weighted tree operators and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the default tolerance of every measured check
    #[arg(long, global = true, value_parser = positive_f64)]
    tolerance: Option<f64>,

    /// Seed for g-inverses, rank probes and the random generator
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Random reweightings tried by the rank probe on trees
    #[arg(long, global = true, default_value_t = 8)]
    trials: usize,

    /// Include the matrices involved in the report
    #[arg(long, global = true)]
    emit_matrices: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble D, L or Q
    Build {
        /// Graph file, or `-` for stdin
        input: String,
        #[arg(long, value_enum)]
        which: WhichArg,
        /// Laplacian weighting (L only)
        #[arg(long, value_enum, default_value_t = ModeArg::Inverted)]
        mode: ModeArg,
    },
    /// Closed-form inverse of a tree distance matrix
    Invert { input: String },
    /// Closed-form determinant of a tree distance matrix, checked against LU
    Det { input: String },
    /// Run the identity, g-inverse, spectral and rank checks
    Verify {
        input: String,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Write seeded random graph files
    Random {
        /// Vertex count, `N` or `LO..HI`
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        /// Block size, `S` or `LO..HI`
        #[arg(long, value_parser = parse_range)]
        s: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value_t = KindArg::Spd)]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Connected graphs with at least one cycle instead of trees
        #[arg(long)]
        nontree: bool,
        #[arg(long, default_value_t = 100.0, value_parser = positive_f64)]
        condition_cap: f64,
    },
    /// Scalar weighting that collapses the Laplacian rank of a non-tree
    Deficient {
        input: String,
        /// Edge to reweight, `U-V`; chosen automatically if absent
        #[arg(long, value_parser = parse_edge)]
        edge: Option<(usize, usize)>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhichArg {
    #[value(alias = "D")]
    D,
    #[value(alias = "L")]
    L,
    #[value(alias = "Q")]
    Q,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Raw,
    Inverted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Identities,
    Ginverse,
    Spectrum,
    Rank,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Spd,
    Nonsingular,
    ScalarPositive,
    ScalarAnyNonzero,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `N` or `LO..HI`, got `{s}`");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected `U-V`, got `{s}`");
    let (u, v) = s.split_once(['-', ',']).ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?))
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    let opts = Options {
        tolerance: cli.tolerance,
        seed: cli.seed,
        trials: cli.trials,
        emit_matrices: cli.emit_matrices,
    };
    let report = match cli.command {
        Command::Build { input, which, mode } => {
            let which = match which {
                WhichArg::D => Which::D,
                WhichArg::L => Which::L,
                WhichArg::Q => Which::Q,
            };
            let mode = match mode {
                ModeArg::Raw => LaplacianMode::Raw,
                ModeArg::Inverted => LaplacianMode::Inverted,
            };
            commands::build(Input::load(&input)?, which, mode)?
        }
        Command::Invert { input } => commands::invert(Input::load(&input)?, &opts)?,
        Command::Det { input } => commands::det(Input::load(&input)?, &opts)?,
        Command::Verify { input, suite } => {
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Ginverse => Suite::Ginverse,
                SuiteArg::Spectrum => Suite::Spectrum,
                SuiteArg::Rank => Suite::Rank,
            };
            commands::verify(Input::load(&input)?, suite, &opts)?
        }
        Command::Deficient { input, edge } => commands::deficient(Input::load(&input)?, edge)?,
        Command::Random {
            n,
            s,
            kind,
            count,
            out,
            nontree,
            condition_cap,
        } => {
            let kind = match kind {
                KindArg::Spd => WeightKind::Spd,
                KindArg::Nonsingular => WeightKind::Nonsingular,
                KindArg::ScalarPositive => WeightKind::ScalarPositive,
                KindArg::ScalarAnyNonzero => WeightKind::ScalarAnyNonzero,
            };
            let spec = RandomSpec {
                n,
                s,
                kind,
                condition_cap,
                count,
                out,
                nontree,
            };
            let manifest = commands::random(&spec, cli.seed)?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
                Format::Text => manifest["files"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|f| format!("{} seed={} n={} s={}", f["path"].as_str().unwrap_or(""), f["seed"], f["n"], f["s"]))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            return Ok((text, true));
        }
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Ok((text, report.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, passed)) => {
            println!("{}", text.trim_end());
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
