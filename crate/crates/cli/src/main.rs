use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use bottleneck_cli::commands::{builtin, CliError};
use bottleneck_cli::record::{write_single, write_table};
use bottleneck_cli::{oracle, run, sweep, write_path_file, OracleMode, RunOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "btt",
    version,
    about = "Bottleneck-tree planner over implicit random geometric graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Base random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radius slack; the connection radius grows with 1 + eta.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Edge collision-check resolution.
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    #[arg(long, hide = true)]
    radius: Option<f64>,
}

impl Common {
    fn options(&self, n: usize) -> RunOptions {
        RunOptions {
            scenario: self.scenario.clone(),
            n,
            seed: self.seed,
            eta: self.eta,
            h: self.h,
            radius: self.radius,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Explicit,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// Plan once; print the record as CSV and optionally write the path.
    Run {
        #[command(flatten)]
        common: Common,
        /// Number of random samples.
        #[arg(long)]
        n: usize,
        /// Path file to write when a path is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan for every sample count and repetition; emit a CSV table.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated sample counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// CSV file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write 0 in the wall-time column so output is reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Run a brute-force reference solver.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Number of random samples (explicit mode).
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Grid size per curve (grid mode).
        #[arg(long, default_value_t = 801)]
        k: usize,
        /// Path file to write when a path is found (explicit mode).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in scenario (p1, p2, p2-enclosed, p3) as JSON.
    Export {
        name: String,
        /// Number of curves for p1.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run { common, n, out } => {
            let (record, path) = run(&common.options(n))?;
            if let (Some(file), Some(p)) = (&out, &path) {
                write_path_file(file, &p.vertices)?;
            }
            write_single(io::stdout().lock(), &record)?;
            Ok(record.solved())
        }
        Command::Sweep {
            common,
            n_list,
            reps,
            out,
            no_timing,
        } => {
            let records = sweep(&common.options(0), &n_list, reps)?;
            match &out {
                Some(file) => write_table(create(file)?, &records, !no_timing)?,
                None => write_table(io::stdout().lock(), &records, !no_timing)?,
            }
            Ok(true)
        }
        Command::Oracle {
            common,
            mode,
            n,
            k,
            out,
        } => {
            let mode = match mode {
                Mode::Explicit => OracleMode::Explicit,
                Mode::Grid => OracleMode::Grid,
            };
            let (record, path) = oracle(&common.options(n), mode, k)?;
            if let (Some(file), Some(p)) = (&out, &path) {
                write_path_file(file, &p.vertices)?;
            }
            write_single(io::stdout().lock(), &record)?;
            Ok(record.solved())
        }
        Command::Export { name, d, out } => {
            let text = builtin(&name, d)?.save() + "\n";
            match &out {
                Some(file) => std::fs::write(file, text)
                    .map_err(|e| CliError::Io(file.display().to_string(), e))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("btt: {e}");
            ExitCode::from(2)
        }
    }
}
