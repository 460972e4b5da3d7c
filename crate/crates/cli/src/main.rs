use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvwerner::verify::{checks, VerifyConfig};
use cvwerner::{compute, Error, Measure, Param, PointInputs};
use cvwerner_cli::config::Config;
use cvwerner_cli::figures::{write_figure, Figure};
use cvwerner_cli::format::report_json;
use cvwerner_cli::sweep::{parse_range, run_sweep, SweepSpec};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_ROWS_FAILED: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "cvwerner",
    version,
    about = "Discord and related correlations of two-mode Werner states"
)]
struct Cli {
    #[command(flatten)]
    numerics: Numerics,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Numerics {
    /// key = value file presetting cutoffs and tolerances
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Fixed Fock cutoff n_max instead of the automatic choice
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Trace deficit allowed by the automatic cutoff
    #[arg(long, global = true)]
    eps_tail: Option<f64>,
    /// Tolerance on the normalization of the outcome-plane quadrature
    #[arg(long, global = true)]
    eps_int: Option<f64>,
    /// Seed of the Monte-Carlo estimate and the random test points
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    phi: Option<String>,
}

impl PointArgs {
    fn given(&self) -> Vec<(Param, &str)> {
        [
            (Param::P, &self.p),
            (Param::Lambda, &self.lambda),
            (Param::Mu, &self.mu),
            (Param::T, &self.t),
            (Param::Phi, &self.phi),
        ]
        .into_iter()
        .filter_map(|(p, v)| v.as_deref().map(|v| (p, v)))
        .collect()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure at one point and print a JSON report
    Compute {
        measure: String,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Evaluate a measure over a grid; ranges are start:stop:step, a comma list or a value
    Sweep {
        measure: String,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file; standard output if absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the dataset and a plotting stub of a figure
    Figure {
        name: Figure,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// Run the acceptance checks
    Verify,
}

/// Prints a line; a closed pipe downstream is not an error.
fn say(line: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{line}").and_then(|_| out.flush());
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn exit_code_of(err: &Error) -> u8 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::UnknownMeasure(_) | Error::MissingParameter { .. } | Error::Parse { .. } => {
            EXIT_USAGE
        }
        _ => EXIT_DOMAIN,
    }
}

fn measure_usage() -> String {
    let names: Vec<&str> = Measure::ALL.iter().map(|m| m.name()).collect();
    format!("known measures: {}", names.join(", "))
}

fn parse_measure(name: &str) -> Result<Measure, ExitCode> {
    name.parse::<Measure>()
        .map_err(|e| fail(EXIT_USAGE, format!("{e}\n{}", measure_usage())))
}

fn load_config(numerics: &Numerics) -> Result<Config, Error> {
    let file = match &numerics.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let env_threads = std::env::var("CVW_THREADS")
        .ok()
        .and_then(|v| v.parse().ok());
    let flags = Config {
        cutoff: numerics.cutoff,
        eps_tail: numerics.eps_tail,
        eps_int: numerics.eps_int,
        seed: numerics.seed,
        threads: env_threads,
        ..Config::default()
    };
    Ok(file.overridden_by(flags))
}

fn run(cli: Cli) -> ExitCode {
    let config = match load_config(&cli.numerics) {
        Ok(c) => c,
        Err(e) => return fail(exit_code_of(&e), e),
    };
    if let Some(n) = config.threads.filter(|&n| n > 0) {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let settings = match config.settings() {
        Ok(s) => s,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };

    match cli.command {
        Command::Compute { measure, point } => {
            let measure = match parse_measure(&measure) {
                Ok(m) => m,
                Err(code) => return code,
            };
            let mut inputs = PointInputs::default();
            for (param, text) in point.given() {
                match text.parse::<f64>() {
                    Ok(v) => inputs.set(param, v),
                    Err(_) => {
                        return fail(
                            EXIT_USAGE,
                            format!("--{} expects a number, got `{text}`", param.name()),
                        )
                    }
                }
            }
            match compute(measure, &inputs, &settings) {
                Ok(report) => {
                    say(&report_json(&report));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(exit_code_of(&e), e),
            }
        }
        Command::Sweep {
            measure,
            point,
            format,
            out,
        } => {
            let measure = match parse_measure(&measure) {
                Ok(m) => m,
                Err(code) => return code,
            };
            let mut ranges = BTreeMap::new();
            for (param, text) in point.given() {
                match parse_range(text) {
                    Ok(values) => ranges.insert(param, values),
                    Err(e) => return fail(EXIT_USAGE, e),
                };
            }
            let spec = SweepSpec {
                measure,
                ranges,
                settings,
            };
            let table = match run_sweep(&spec) {
                Ok(t) => t,
                Err(e) => return fail(exit_code_of(&e), e),
            };
            let written = match &out {
                Some(path) => File::create(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
                    .and_then(|f| write_table(&table, format, BufWriter::new(f))),
                None => write_table(&table, format, io::stdout().lock()),
            };
            if let Err(e) = written {
                return fail(EXIT_IO, e);
            }
            match table.failures() {
                0 => ExitCode::SUCCESS,
                n => fail(
                    EXIT_ROWS_FAILED,
                    format!("{n} of {} rows failed", table.rows.len()),
                ),
            }
        }
        Command::Figure { name, outdir } => match write_figure(name, &outdir, &settings) {
            Ok(output) => {
                for f in &output.files {
                    say(&f.display().to_string());
                }
                match output.failed_rows {
                    0 => ExitCode::SUCCESS,
                    n => fail(EXIT_ROWS_FAILED, format!("{n} rows failed")),
                }
            }
            Err(e) => fail(exit_code_of(&e), e),
        },
        Command::Verify => {
            let verify = VerifyConfig {
                truncation: settings.truncation,
                eps_int: settings.optimizer.eps_int,
                grid: settings.grid,
                seed: config.seed.unwrap_or(VerifyConfig::default().seed),
            };
            let mut failed = 0;
            let all = checks();
            for check in &all {
                let result = check.run(&verify);
                say(&result.to_string());
                failed += usize::from(!result.passed);
            }
            say(&format!(
                "{} of {} checks passed",
                all.len() - failed,
                all.len()
            ));
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}

fn write_table<W: Write>(
    table: &cvwerner_cli::sweep::SweepTable,
    format: Format,
    out: W,
) -> Result<(), Error> {
    match format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json(out),
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
