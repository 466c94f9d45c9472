use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qubus_core::protocols::specific_example_omega;
use qubus_core::sweeps::{
    compare_methods, run_sweep, specific_maximum_amplitude, square_maximum_amplitude, write_compare_csv,
    write_sweep_csv,
};
use qubus_core::{
    BranchState, GateMetrics, GateSequence, Metric, PerturbationMode, ProtocolSpec, QubusError, SweepConfig,
    SweepRange,
};
use qubus_fock::{verify_oracle, OracleError, VerifyOptions};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qubus", version, about = "Qubus controlled-phase gate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol and print its gate metrics and final state.
    Simulate {
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Initial qubit coefficients as eight numbers: re,im for 00, 01, 10, 11.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter and fit the curvature of the metric.
    Sweep {
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long)]
        vary: String,
        /// MIN:MAX:STEPS, in units of the perturbation mode.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value = "concurrence-sq")]
        metric: String,
        /// absolute or relative; defaults to relative for amplitudes, absolute for angles.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the specific example with the square path at the same θ.
    Compare {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0.08)]
        theta: f64,
        #[arg(long, default_value_t = 0.08)]
        phi: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the branch simulator against the truncated Fock oracle.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Compare without applying any gate.
        #[arg(long)]
        identity: bool,
        /// Debug: override the automatic Fock cutoff.
        #[arg(long)]
        force_cutoff: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Protocol {
    Specific,
    Square,
    Geometric,
    Custom,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(long, value_enum, default_value_t = Protocol::Specific)]
    protocol: Protocol,
    /// Bus amplitude; defaults to the first concurrence maximum.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    alpha_im: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.08)]
    theta: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.08)]
    phi: f64,
    #[arg(long, allow_negative_numbers = true)]
    omega_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega_im: Option<f64>,
    /// Gate sequence JSON for the custom protocol.
    #[arg(long)]
    sequence: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] QubusError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write output: {0}")]
    Write(io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("oracle verification failed: {failures} of {trials} trials, max trace distance {max:e}")]
    Verification { failures: usize, trials: usize, max: f64 },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => core_kind(e),
            CliError::Oracle(OracleError::CutoffTooSmall { .. }) => "cutoff_too_small",
            CliError::Oracle(OracleError::Core(e)) => core_kind(e),
            CliError::Read { .. } => "read",
            CliError::Write(_) => "write",
            CliError::Usage(_) => "usage",
            CliError::Verification { .. } => "verification_failed",
        }
    }

    fn exit_code(&self) -> u8 {
        let input = match self {
            CliError::Core(e) | CliError::Oracle(OracleError::Core(e)) => e.is_input_error(),
            CliError::Read { .. } | CliError::Usage(_) => true,
            _ => false,
        };
        if input {
            1
        } else {
            2
        }
    }
}

fn core_kind(e: &QubusError) -> &'static str {
    match e {
        QubusError::Norm { .. } => "norm",
        QubusError::DegenerateAngle { .. } => "degenerate_angle",
        QubusError::DegenerateGeometry(_) => "degenerate_geometry",
        QubusError::NotDisentangled { .. } => "not_disentangled",
        QubusError::PhaseUndefined { .. } => "phase_undefined",
        QubusError::NumericalFailure(_) => "numerical_failure",
        QubusError::FitFailed { .. } => "fit_failed",
        QubusError::InvalidConfig(_) => "invalid_config",
        QubusError::Parse(_) => "parse",
    }
}

impl ProtocolArgs {
    fn resolve(&self) -> Result<ProtocolSpec, CliError> {
        let (theta, phi) = (self.theta, self.phi);
        Ok(match self.protocol {
            Protocol::Specific => {
                let alpha = self.alpha.unwrap_or_else(|| specific_maximum_amplitude(theta, phi));
                ProtocolSpec::SpecificExample { alpha, beta: self.beta.unwrap_or(alpha), theta, phi }
            }
            Protocol::Square => {
                ProtocolSpec::SquarePath { alpha: self.alpha.unwrap_or_else(|| square_maximum_amplitude(theta)), theta }
            }
            Protocol::Geometric => {
                let re = self.alpha.unwrap_or_else(|| specific_maximum_amplitude(theta, phi));
                let omega = match (self.omega_re, self.omega_im) {
                    (Some(x), Some(y)) => Complex64::new(x, y),
                    (None, None) => specific_example_omega(re, self.beta.unwrap_or(re), theta),
                    _ => return Err(CliError::Usage("give both --omega-re and --omega-im".into())),
                };
                ProtocolSpec::GeometricGeneral { alpha: Complex64::new(re, self.alpha_im), theta, phi, omega }
            }
            Protocol::Custom => {
                let path = self
                    .sequence
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("--protocol custom needs --sequence FILE".into()))?;
                let sequence = GateSequence::from_json(&read(path)?)?;
                ProtocolSpec::Custom { sequence, alpha: Complex64::new(self.alpha.unwrap_or(0.0), self.alpha_im) }
            }
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn emit(out: Option<&Path>, body: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(CliError::Write),
        None => io::stdout().write_all(body).map_err(CliError::Write),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_vec_pretty(value).expect("report serializes");
    text.push(b'\n');
    text
}

fn parse_coeffs(text: &str) -> Result<[Complex64; 4], CliError> {
    let bad = || CliError::Usage(format!("--coeffs needs eight comma-separated numbers, got {text:?}"));
    let values = text.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
    if values.len() != 8 {
        return Err(bad());
    }
    Ok(std::array::from_fn(|i| Complex64::new(values[2 * i], values[2 * i + 1])))
}

fn simulate(protocol: &ProtocolArgs, coeffs: Option<&str>, out: Option<&Path>) -> Result<(), CliError> {
    let spec = protocol.resolve()?;
    let sequence = spec.build()?;
    let initial_bus = spec.initial_bus();
    let initial = match coeffs {
        Some(c) => BranchState::make_initial(parse_coeffs(c)?, initial_bus)?,
        None => BranchState::equal_superposition(initial_bus),
    };
    let state = initial.apply_sequence(&sequence);
    if !state.is_finite() {
        return Err(QubusError::NumericalFailure("simulation produced non-finite values".into()).into());
    }
    let metrics = GateMetrics::evaluate(initial_bus, &state)?;
    let state_json: serde_json::Value = serde_json::from_str(&state.to_json()).expect("state JSON is valid");
    let sequence_json: serde_json::Value = serde_json::from_str(&sequence.to_json()).expect("sequence JSON is valid");
    emit(out, &to_json(&json!({ "metrics": metrics, "state": state_json, "sequence": sequence_json })))
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    protocol: &ProtocolArgs,
    vary: &str,
    range: &str,
    metric: &str,
    mode: Option<&str>,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let range: SweepRange = range.parse()?;
    let metric: Metric = metric.parse()?;
    let mode = match mode {
        Some(m) => m.parse()?,
        None => PerturbationMode::default_for(vary),
    };
    let cfg = SweepConfig::new(protocol.resolve()?, vary, range, metric).with_mode(mode);
    let result = run_sweep(&cfg)?;
    match format {
        Format::Json => emit(out, &to_json(&result)),
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&result, &mut buf)?;
            emit(out, &buf)
        }
    }
}

fn compare(alpha: Option<f64>, beta: Option<f64>, theta: f64, phi: f64, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let alpha = alpha.unwrap_or_else(|| specific_maximum_amplitude(theta, phi));
    let report = compare_methods(alpha, beta.unwrap_or(alpha), theta, phi)?;
    match format {
        Format::Json => emit(out, &to_json(&report)),
        Format::Csv => {
            let mut buf = Vec::new();
            write_compare_csv(&report, &mut buf)?;
            emit(out, &buf)
        }
    }
}

fn verify(trials: usize, seed: u64, identity: bool, force_cutoff: Option<usize>, out: Option<&Path>) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let report = verify_oracle(&VerifyOptions { trials, seed, identity, forced_cutoff: force_cutoff, ..Default::default() });
    emit(out, &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification { failures: report.failures, trials, max: report.max_trace_distance })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { protocol, coeffs, out } => simulate(&protocol, coeffs.as_deref(), out.as_deref()),
        Command::Sweep { protocol, vary, range, metric, mode, format, out } => {
            sweep(&protocol, &vary, &range, &metric, mode.as_deref(), format, out.as_deref())
        }
        Command::Compare { alpha, beta, theta, phi, format, out } => compare(alpha, beta, theta, phi, format, out.as_deref()),
        Command::Verify { trials, seed, identity, force_cutoff, out } => verify(trials, seed, identity, force_cutoff, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(e.exit_code())
        }
    }
}
