//! Command-line front end: `fetch`, `analyze` and `sensitivity`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 ingestion or
//! output I/O error, 3 computation error.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcmeasure::ingest::{assemble_matrix, parse_fixture_csv, serialize_fixture_csv, Transport};
use gcmeasure::report::{emit_analysis, emit_loo, emit_perturbation, render_svg, Format};
use gcmeasure::robustness::{leave_one_out, perturb};
use gcmeasure::{run_pipeline, Execution, IngestError, MeasureError, ObservationMatrix};

pub use config::{RunConfig, API_BASE_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "gcmeasure",
    version,
    about = "Zero-unitarization development measures for EU countries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Md,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Md => Format::Md,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Loo,
    Perturb,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration; the shipped EU-28/2019 config when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write output here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble the configured indicators and write them as fixture CSV.
    Fetch {
        #[command(flatten)]
        common: Common,
    },
    /// Compute the measure, ranks and groups.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "md")]
        format: FormatArg,
        /// Fixture CSV to analyze instead of the configured source.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also write an SVG bar chart of w.
        #[arg(long)]
        chart: Option<PathBuf>,
    },
    /// Leave-one-indicator-out or noise-perturbation diagnostics.
    Sensitivity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "md")]
        format: FormatArg,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Relative noise amplitude for perturb mode.
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Compute(#[from] MeasureError),
    #[error("{path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Ingest(IngestError::Model(_)) => 3,
            CliError::Ingest(_) | CliError::Output { .. } => 2,
            CliError::Compute(_) => 3,
        }
    }
}

/// Process-level inputs, injectable for tests.
pub struct Context<'a> {
    pub transport: &'a dyn Transport,
    /// Value of [`API_BASE_ENV`], if set.
    pub api_base_env: Option<String>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, ctx: &Context, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
                if !rendered.contains("Usage:") {
                    use clap::CommandFactory;
                    let _ = writeln!(err, "\n{}", Cli::command().render_usage());
                }
            }
            return code;
        }
    };
    match execute(cli.command, ctx, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig, CliError> {
    match &common.config {
        Some(p) => RunConfig::load(p).map_err(CliError::Usage),
        None => Ok(RunConfig::shipped()),
    }
}

fn obtain_matrix(
    config: &RunConfig,
    input: Option<&Path>,
    ctx: &Context,
) -> Result<ObservationMatrix, CliError> {
    match input {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| {
                IngestError::Cache(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", path.display()),
                ))
            })?;
            Ok(parse_fixture_csv(&bytes, config.year, &config.specs())?)
        }
        None => {
            let source = config
                .source(ctx.api_base_env.as_deref())
                .map_err(CliError::Usage)?;
            Ok(assemble_matrix(
                &config.specs(),
                config.year,
                &config.geos,
                &source,
                ctx.transport,
            )?)
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(common: &Common, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &common.output {
        Some(path) => write_file(path, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn execute(command: Command, ctx: &Context, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Fetch { common } => {
            let config = load_config(&common)?;
            let matrix = obtain_matrix(&config, None, ctx)?;
            emit(&common, &serialize_fixture_csv(&matrix), out)?;
            if common.output.is_some() {
                let _ = writeln!(
                    out,
                    "{}: {} units x {} indicators, {} missing cells",
                    config.name,
                    matrix.n_units(),
                    matrix.n_indicators(),
                    matrix.missing_cells().len()
                );
            }
            Ok(())
        }
        Command::Analyze {
            common,
            format,
            input,
            chart,
        } => {
            let config = load_config(&common)?;
            let matrix = obtain_matrix(&config, input.as_deref(), ctx)?;
            let result = run_pipeline(&matrix, &config.settings())?;
            emit(&common, &emit_analysis(&result, format.into()), out)?;
            if let Some(path) = chart {
                let title = format!("{} (year {})", config.name, matrix.year);
                write_file(&path, &render_svg(&result, &title))?;
            }
            Ok(())
        }
        Command::Sensitivity {
            common,
            format,
            input,
            mode,
            noise,
            trials,
            seed,
            serial,
        } => {
            let config = load_config(&common)?;
            let execution = if serial {
                Execution::Serial
            } else {
                Execution::Parallel
            };
            let settings = config.settings().with_execution(execution);
            match mode {
                Mode::Loo => {
                    let matrix = obtain_matrix(&config, input.as_deref(), ctx)?;
                    let report = leave_one_out(&matrix, &settings)?;
                    emit(&common, &emit_loo(&report, format.into()), out)
                }
                Mode::Perturb => {
                    if !(noise > 0.0 && noise.is_finite()) {
                        return Err(CliError::Usage(format!(
                            "--noise must be positive, got {noise}"
                        )));
                    }
                    if trials == 0 {
                        return Err(CliError::Usage("--trials must be at least 1".into()));
                    }
                    let matrix = obtain_matrix(&config, input.as_deref(), ctx)?;
                    let report = perturb(&matrix, noise, trials, seed, &settings)?;
                    emit(&common, &emit_perturbation(&report, format.into()), out)
                }
            }
        }
    }
}
