use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use smoothjoin::commands::{self, to_pretty, write};
use smoothjoin::json::MatrixJson;
use smoothjoin::{CliError, GridFile};

#[derive(Parser)]
#[command(name = "smoothjoin", version, about = "Exact C^r continuity conditions between Bernstein patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate conditions and the stacked matrix.
    Conditions {
        grid: PathBuf,
        /// Overrides the grid's order.
        #[arg(long)]
        order: Option<u32>,
        /// Directory for conditions.json and matrix.json; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check random conditioned coefficients against derivatives on each facet.
    Verify {
        grid: PathBuf,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify the rows of this matrix.json instead of freshly generated ones.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export domain points of every patch.
    Bnet {
        grid: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        render_float: bool,
    },
    /// Export circumscribed simplices of patches and adjacent pairs.
    Circumscribe {
        grid: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        render_float: bool,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Conditions { grid, order, out } => {
            let g = GridFile::load(&grid)?;
            let res = commands::conditions(&g, order.unwrap_or(g.order))?;
            match out {
                Some(dir) => {
                    res.write_to(&dir)?;
                }
                None => print!("{}", to_pretty(&serde_json::json!({ "conditions": res.conditions, "matrix": res.matrix }))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { grid, order, samples, seed, matrix, out } => {
            let g = GridFile::load(&grid)?;
            let m: Option<MatrixJson> = match matrix {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Read { path: path.clone(), source })?;
                    Some(serde_json::from_str(&text).map_err(|source| CliError::Json { path, source })?)
                }
                None => None,
            };
            let report = commands::verify(&g, order.unwrap_or(g.order), samples, seed, m.as_ref())?;
            emit(out.as_ref(), &to_pretty(&report))?;
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Bnet { grid, out, render_float } => {
            let v = commands::bnet(&GridFile::load(&grid)?, render_float)?;
            emit(out.as_ref(), &to_pretty(&v))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Circumscribe { grid, out, render_float } => {
            let v = commands::circumscribe(&GridFile::load(&grid)?, render_float)?;
            emit(out.as_ref(), &to_pretty(&v))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
