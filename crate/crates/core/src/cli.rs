//! The `coupler` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 a causal
//! claim that does not follow from its premises.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::causal::{self, CausalError, ScriptError};
use crate::config::{validate_config, Config};
use crate::dynamics::{self, CoupledOscillatorSystem, Integrator, SimulationOptions, State};
use crate::error::Error;
use crate::linear;
use crate::oracle;
use crate::report::{build_report, format_float, to_stable_json, ModelSelector, ReportFormat, RunReport};
use crate::sweep::{self, Scale, SweepParameter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CAUSAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Causal(#[from] CausalError),
    #[error(transparent)]
    Script(#[from] ScriptError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.exit_code(),
            _ => EXIT_VALIDATION,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "coupler", version, about = "Ion-ion coupling through a floating conductor")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the linear and/or lumped model for one configuration.
    Compute(ComputeArgs),
    /// Evaluate both models over a grid of one parameter (CSV).
    Sweep(SweepArgs),
    /// Integrate the coupled oscillators and measure the exchange time (CSV).
    Simulate(SimulateArgs),
    /// Compare the plane-window and finite-disk induced charge (CSV).
    Oracle(OracleArgs),
    /// Causal-equality tools.
    Causal {
        #[command(subcommand)]
        command: CausalCommand,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Linear,
    Lumped,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParamArg {
    #[value(name = "r1_m")]
    R1,
    #[value(name = "r2_m")]
    R2,
    #[value(name = "d_eq1_m")]
    DEq1,
    #[value(name = "d_eq2_m")]
    DEq2,
    #[value(name = "wire_length_m")]
    WireLength,
    #[value(name = "frequency_hz")]
    Frequency,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum IntegratorArg {
    Yoshida4,
    VelocityVerlet,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// JSON configuration file.
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Leave the timestamp out of the provenance block.
    #[arg(long)]
    pub no_timestamp: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub config: PathBuf,
    #[arg(long, value_enum)]
    pub param: ParamArg,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub scale: ScaleArg,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Configuration providing masses, trap frequencies and γ (defaults to
    /// the built-in example).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Replace γ by this multiple of k₁. Physical couplings need ~10⁹ steps
    /// per exchange; 1e-3 gives a desk-scale run.
    #[arg(long)]
    pub gamma_ratio: Option<f64>,
    /// Initial displacement of ion 1, m.
    #[arg(long, default_value_t = 1e-8)]
    pub amplitude: f64,
    /// Integration steps per period of the fastest mode.
    #[arg(long, default_value_t = 1000)]
    pub steps_per_period: u32,
    /// Simulated time, s. Defaults to 1.25 exchange times.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Write every n-th step. Locating the exchange needs at least ~20
    /// samples per trap period.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    #[arg(long, value_enum, default_value = "yoshida4")]
    pub integrator: IntegratorArg,
    /// Refuse runs longer than this many steps.
    #[arg(long, default_value_t = 200_000_000)]
    pub max_steps: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Disk (window) radius, m. Defaults to geometry.r1_m.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Comma-separated source heights, m. Defaults to radius × {1/50, 1/10, 1/2, 1}.
    #[arg(long, value_delimiter = ',')]
    pub heights: Vec<f64>,
    #[arg(long, default_value_t = 256)]
    pub rings: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CausalCommand {
    /// Check the claims of a derivation script.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compose two relations that share a variable.
    Compose { first: String, second: String },
}

/// What a command produced: text for stdout (or `--output`) and an exit code.
pub struct Outcome {
    pub text: String,
    pub output: Option<PathBuf>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(text: String, output: Option<PathBuf>) -> Self {
        Self {
            text,
            output,
            exit_code: EXIT_OK,
        }
    }
}

fn load(path: &Path) -> CliResult<Config> {
    Ok(Config::load(path)?)
}

fn load_or_example(path: Option<&Path>) -> CliResult<Config> {
    path.map_or_else(|| Ok(Config::example()), load)
}

pub fn run_compute(config: &Path, model: ModelSelector, format: ReportFormat, with_timestamp: bool) -> CliResult<(RunReport, String)> {
    let c = load(config)?;
    let v = validate_config(&c)?;
    let report = build_report(&c, &v, model, with_timestamp)?;
    let text = report.emit(format)?;
    Ok((report, text))
}

pub fn run_sweep(config: &Path, parameter: SweepParameter, from: f64, to: f64, steps: usize, scale: Scale) -> CliResult<String> {
    let c = load(config)?;
    validate_config(&c)?;
    let values = sweep::grid(from, to, steps, scale)?;
    let rows = sweep::run_sweep(&c, parameter, &values)?;
    Ok(sweep::sweep_csv(parameter, &rows)?)
}

fn simulate(args: &SimulateArgs) -> CliResult<String> {
    let c = load_or_example(args.config.as_deref())?;
    let v = validate_config(&c)?;
    let gamma = match args.gamma_ratio {
        Some(r) => r * v.k1(),
        None => linear::coupling_factors(&v, &linear::CapacitanceRatio)?.gamma,
    };
    let system = CoupledOscillatorSystem::new(
        v.ion1.mass_kg,
        v.ion2.mass_kg,
        v.k1(),
        v.k2(),
        gamma,
        State {
            x1: args.amplitude,
            ..State::default()
        },
    )?;
    if args.steps_per_period < 100 {
        return Err(Error::Validation(crate::Violation::new("steps_per_period", "must be >= 100")).into());
    }
    let dt = system.fastest_period() / f64::from(args.steps_per_period);
    let (hi, lo) = system.eigenfrequencies();
    let beat = std::f64::consts::PI / (hi - lo);
    let duration = match args.duration {
        Some(d) => d,
        None if beat.is_finite() => 1.25 * beat,
        None => {
            return Err(Error::Validation(crate::Violation::new("duration", "gamma is zero; give --duration explicitly")).into())
        }
    };
    let steps = duration / dt;
    if steps > args.max_steps as f64 {
        return Err(Error::Validation(crate::Violation::new(
            "duration",
            format!(
                "{steps:.3e} steps exceed --max-steps {}; raise the coupling with --gamma-ratio or shorten --duration",
                args.max_steps
            ),
        ))
        .into());
    }
    let options = SimulationOptions {
        integrator: match args.integrator {
            IntegratorArg::Yoshida4 => Integrator::Yoshida4,
            IntegratorArg::VelocityVerlet => Integrator::VelocityVerlet,
        },
        record_stride: args.stride,
    };
    let trajectory = dynamics::simulate_with(&system, duration, dt, options)?;
    match dynamics::exchange_time(&trajectory) {
        Ok(t) => {
            log::info!("exchange time {t:e} s, analytic {beat:e} s");
            eprintln!(
                "exchange time {} s (normal-mode prediction {} s, relative difference {:.3e}); energy drift {:.3e}",
                format_float(t),
                format_float(beat),
                (t - beat) / beat,
                trajectory.max_energy_drift()
            );
        }
        Err(e) => log::warn!("{e}"),
    }
    let mut out = String::from("t_s,x1_m,v1_mps,x2_m,v2_mps,e1_j,e2_j,etot_j\n");
    for s in &trajectory.samples {
        let row = [s.t, s.x1, s.v1, s.x2, s.v2, s.e1, s.e2, s.e_total].map(format_float);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn oracle_csv(args: &OracleArgs) -> CliResult<String> {
    let c = load_or_example(args.config.as_deref())?;
    let v = validate_config(&c)?;
    let radius = args.radius.unwrap_or(v.geometry.r1);
    let heights = if args.heights.is_empty() {
        vec![radius / 50.0, radius / 10.0, radius / 2.0, radius]
    } else {
        args.heights.clone()
    };
    let q = v.q1();
    let rows = heights
        .par_iter()
        .map(|&d| oracle::compare(q, d, radius, args.rings))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut out = String::from("d_m,r_m,q_c,q_analytic_c,q_bem_c,rel_diff\n");
    for r in rows {
        let row = [r.d_m, r.r_m, r.q_c, r.q_analytic_c, r.q_bem_c, r.rel_diff].map(format_float);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn causal_command(command: &CausalCommand) -> CliResult<Outcome> {
    match command {
        CausalCommand::Check { file, json } => {
            let script = std::fs::read_to_string(file).map_err(|source| Error::Io {
                path: file.display().to_string(),
                source,
            })?;
            let report = causal::check_derivation(&script)?;
            let text = if *json {
                to_stable_json(&report)?
            } else {
                report.render_text()
            };
            Ok(Outcome {
                text,
                output: None,
                exit_code: if report.all_derivable() { EXIT_OK } else { EXIT_CAUSAL },
            })
        }
        CausalCommand::Compose { first, second } => {
            let a = causal::parse_relation(first).map_err(CausalError::from)?;
            let b = causal::parse_relation(second).map_err(CausalError::from)?;
            let c = causal::compose(&a, &b)?;
            Ok(Outcome::ok(format!("{c}\n"), None))
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Compute(a) => {
            let model = match a.model {
                ModelArg::Linear => ModelSelector::Linear,
                ModelArg::Lumped => ModelSelector::Lumped,
                ModelArg::Both => ModelSelector::Both,
            };
            let format = match a.format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Text => ReportFormat::Text,
            };
            let (_, text) = run_compute(&a.config, model, format, !a.no_timestamp)?;
            Ok(Outcome::ok(text, a.output.clone()))
        }
        Command::Sweep(a) => {
            let parameter = match a.param {
                ParamArg::R1 => SweepParameter::R1,
                ParamArg::R2 => SweepParameter::R2,
                ParamArg::DEq1 => SweepParameter::DEq1,
                ParamArg::DEq2 => SweepParameter::DEq2,
                ParamArg::WireLength => SweepParameter::WireLength,
                ParamArg::Frequency => SweepParameter::Frequency,
            };
            let scale = match a.scale {
                ScaleArg::Linear => Scale::Linear,
                ScaleArg::Log => Scale::Log,
            };
            let text = run_sweep(&a.config, parameter, a.from, a.to, a.steps, scale)?;
            Ok(Outcome::ok(text, a.output.clone()))
        }
        Command::Simulate(a) => Ok(Outcome::ok(simulate(a)?, a.output.clone())),
        Command::Oracle(a) => Ok(Outcome::ok(oracle_csv(a)?, a.output.clone())),
        Command::Causal { command } => causal_command(command),
    }
}

fn write_outcome(outcome: &Outcome) -> CliResult<()> {
    match &outcome.output {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
            let _ = stdout.flush();
        }
    }
    Ok(())
}

fn init_logging() {
    let env = env_logger::Env::new()
        .filter_or("COUPLER_LOG", "warn")
        .write_style("COUPLER_LOG_STYLE");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    init_logging();
    match execute(&cli).and_then(|o| write_outcome(&o).map(|()| o.exit_code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn sweep_names_match_library() {
        for p in ParamArg::value_variants() {
            let name = p.to_possible_value().unwrap().get_name().to_string();
            assert!(name.parse::<SweepParameter>().is_ok(), "{name}");
        }
    }
}
