//! Robustness sweeps over single-parameter miscalibrations.
//!
//! A sweep perturbs one builder input, rebuilds the whole sequence (so every
//! operation derived from that input sees the same error), simulates it from the
//! equal superposition and records the gate metrics. Near a concurrence maximum
//! the squared concurrence is fitted to `1 − k·ε²`.

use std::f64::consts::PI;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QubusError, Result};
use crate::metrics::{branch_concurrence, bus_spread, concurrence_traced, entangling_phase, pair_distance, reduce_to_qubits};
use crate::protocols::{build_specific_example, build_square_path, solve_general_geometry, square_path_start};
use crate::sequence::GateSequence;
use crate::state::BranchState;

/// Fraction of the sweep range, centred on its midpoint, used for the curvature fit.
pub const FIT_WINDOW: f64 = 0.2;
pub const MIN_FIT_ROWS: usize = 5;

/// A protocol together with its base parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum ProtocolSpec {
    SpecificExample { alpha: f64, beta: f64, theta: f64, phi: f64 },
    SquarePath { alpha: f64, theta: f64 },
    GeometricGeneral { alpha: Complex64, theta: f64, phi: f64, omega: Complex64 },
    Custom { sequence: GateSequence, alpha: Complex64 },
}

impl ProtocolSpec {
    /// Specific example at the first concurrence maximum with `α = β`.
    pub fn specific_at_maximum(theta: f64, phi: f64) -> Self {
        let alpha = specific_maximum_amplitude(theta, phi);
        ProtocolSpec::SpecificExample { alpha, beta: alpha, theta, phi }
    }

    /// Square path at the first maximum of `½ − ½cos(12α²θ²)` for the given `θ`.
    pub fn square_at_maximum(theta: f64) -> Self {
        ProtocolSpec::SquarePath { alpha: square_maximum_amplitude(theta), theta }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            ProtocolSpec::SpecificExample { .. } => &["alpha", "beta", "theta", "phi"],
            ProtocolSpec::SquarePath { .. } => &["alpha", "theta"],
            ProtocolSpec::GeometricGeneral { .. } => &["alpha", "alpha_im", "theta", "phi", "omega_re", "omega_im"],
            ProtocolSpec::Custom { .. } => &[],
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        match (self, name) {
            (ProtocolSpec::SpecificExample { alpha, .. }, "alpha") => Some(*alpha),
            (ProtocolSpec::SpecificExample { beta, .. }, "beta") => Some(*beta),
            (ProtocolSpec::SpecificExample { theta, .. }, "theta") => Some(*theta),
            (ProtocolSpec::SpecificExample { phi, .. }, "phi") => Some(*phi),
            (ProtocolSpec::SquarePath { alpha, .. }, "alpha") => Some(*alpha),
            (ProtocolSpec::SquarePath { theta, .. }, "theta") => Some(*theta),
            (ProtocolSpec::GeometricGeneral { alpha, .. }, "alpha") => Some(alpha.re),
            (ProtocolSpec::GeometricGeneral { alpha, .. }, "alpha_im") => Some(alpha.im),
            (ProtocolSpec::GeometricGeneral { theta, .. }, "theta") => Some(*theta),
            (ProtocolSpec::GeometricGeneral { phi, .. }, "phi") => Some(*phi),
            (ProtocolSpec::GeometricGeneral { omega, .. }, "omega_re") => Some(omega.re),
            (ProtocolSpec::GeometricGeneral { omega, .. }, "omega_im") => Some(omega.im),
            _ => None,
        }
    }

    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut out = self.clone();
        let slot = match (&mut out, name) {
            (ProtocolSpec::SpecificExample { alpha, .. }, "alpha") => alpha,
            (ProtocolSpec::SpecificExample { beta, .. }, "beta") => beta,
            (ProtocolSpec::SpecificExample { theta, .. }, "theta") => theta,
            (ProtocolSpec::SpecificExample { phi, .. }, "phi") => phi,
            (ProtocolSpec::SquarePath { alpha, .. }, "alpha") => alpha,
            (ProtocolSpec::SquarePath { theta, .. }, "theta") => theta,
            (ProtocolSpec::GeometricGeneral { alpha, .. }, "alpha") => &mut alpha.re,
            (ProtocolSpec::GeometricGeneral { alpha, .. }, "alpha_im") => &mut alpha.im,
            (ProtocolSpec::GeometricGeneral { theta, .. }, "theta") => theta,
            (ProtocolSpec::GeometricGeneral { phi, .. }, "phi") => phi,
            (ProtocolSpec::GeometricGeneral { omega, .. }, "omega_re") => &mut omega.re,
            (ProtocolSpec::GeometricGeneral { omega, .. }, "omega_im") => &mut omega.im,
            _ => {
                return Err(QubusError::InvalidConfig(format!(
                    "protocol has no parameter {name:?} (expected one of {:?})",
                    self.param_names()
                )))
            }
        };
        *slot = value;
        Ok(out)
    }

    pub fn build(&self) -> Result<GateSequence> {
        match self {
            ProtocolSpec::SpecificExample { alpha, beta, theta, phi } => build_specific_example(*alpha, *beta, *theta, *phi),
            ProtocolSpec::SquarePath { alpha, theta } => build_square_path(*alpha, *theta),
            ProtocolSpec::GeometricGeneral { alpha, theta, phi, omega } => {
                solve_general_geometry(*alpha, *theta, *phi, *omega).map(|(_, seq)| seq)
            }
            ProtocolSpec::Custom { sequence, .. } => Ok(sequence.clone()),
        }
    }

    /// Bus amplitude the protocol expects at its input.
    pub fn initial_bus(&self) -> Complex64 {
        match self {
            ProtocolSpec::SpecificExample { alpha, .. } => Complex64::new(*alpha, 0.0),
            ProtocolSpec::SquarePath { alpha, .. } => square_path_start(*alpha),
            ProtocolSpec::GeometricGeneral { alpha, .. } | ProtocolSpec::Custom { alpha, .. } => *alpha,
        }
    }

    /// Build and run the protocol on the equal superposition.
    pub fn simulate(&self) -> Result<BranchState> {
        let seq = self.build()?;
        let out = BranchState::equal_superposition(self.initial_bus()).apply_sequence(&seq);
        if !out.is_finite() {
            return Err(QubusError::NumericalFailure("simulation produced non-finite values".into()));
        }
        Ok(out)
    }

    fn method_name(&self) -> &'static str {
        match self {
            ProtocolSpec::SpecificExample { .. } => "specific",
            ProtocolSpec::SquarePath { .. } => "square",
            ProtocolSpec::GeometricGeneral { .. } => "geometric",
            ProtocolSpec::Custom { .. } => "custom",
        }
    }
}

/// `α = √(π / (4 sinθ tanφ))`: the `α = β` solution of `αβ sinθ tanφ = π/4`.
pub fn specific_maximum_amplitude(theta: f64, phi: f64) -> f64 {
    (PI / (4.0 * theta.sin() * phi.tan())).sqrt()
}

/// `α = √(π/12) / θ`: the first maximum of the square-path concurrence.
pub fn square_maximum_amplitude(theta: f64) -> f64 {
    (PI / 12.0).sqrt() / theta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Concurrence,
    ConcurrenceSquared,
    BusSpread,
    EntanglingPhase,
}

impl Metric {
    /// Metrics that peak at a concurrence maximum and so admit a curvature fit.
    pub fn has_interior_maximum(self) -> bool {
        matches!(self, Metric::Concurrence | Metric::ConcurrenceSquared)
    }
}

impl FromStr for Metric {
    type Err = QubusError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concurrence" | "c" => Ok(Metric::Concurrence),
            "concurrence-sq" | "concurrence_sq" | "c2" => Ok(Metric::ConcurrenceSquared),
            "bus-spread" | "bus_spread" => Ok(Metric::BusSpread),
            "entangling-phase" | "entangling_phase" => Ok(Metric::EntanglingPhase),
            other => Err(QubusError::InvalidConfig(format!("unknown metric {other:?}"))),
        }
    }
}

/// How a grid value `ε` turns into a parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationMode {
    /// `base + ε`
    Absolute,
    /// `base · (1 + ε)`
    Relative,
}

impl PerturbationMode {
    /// Amplitudes are perturbed relatively, angles absolutely.
    pub fn default_for(param: &str) -> Self {
        match param {
            "alpha" | "beta" => PerturbationMode::Relative,
            _ => PerturbationMode::Absolute,
        }
    }

    pub fn apply(self, base: f64, epsilon: f64) -> f64 {
        match self {
            PerturbationMode::Absolute => base + epsilon,
            PerturbationMode::Relative => base * (1.0 + epsilon),
        }
    }
}

impl FromStr for PerturbationMode {
    type Err = QubusError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" | "abs" => Ok(PerturbationMode::Absolute),
            "relative" | "rel" => Ok(PerturbationMode::Relative),
            other => Err(QubusError::InvalidConfig(format!("unknown perturbation mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let r = Self { min, max, steps };
        r.validate()?;
        Ok(r)
    }

    pub fn symmetric(half_width: f64, steps: usize) -> Result<Self> {
        Self::new(-half_width, half_width, steps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(QubusError::InvalidConfig(format!("steps must be at least 2, got {}", self.steps)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(QubusError::InvalidConfig(format!("need min < max, got {}:{}", self.min, self.max)));
        }
        Ok(())
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.point(i)).collect()
    }
}

impl FromStr for SweepRange {
    type Err = QubusError;

    /// Parses `MIN:MAX:STEPS`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || QubusError::InvalidConfig(format!("range must be MIN:MAX:STEPS, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
        let max = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
        let steps = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        SweepRange::new(min, max, steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub protocol: ProtocolSpec,
    pub vary: String,
    pub range: SweepRange,
    pub metric: Metric,
    pub mode: PerturbationMode,
}

impl SweepConfig {
    pub fn new(protocol: ProtocolSpec, vary: &str, range: SweepRange, metric: Metric) -> Self {
        Self { protocol, vary: vary.to_string(), range, metric, mode: PerturbationMode::default_for(vary) }
    }

    pub fn with_mode(mut self, mode: PerturbationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<f64> {
        self.range.validate()?;
        self.protocol.param(&self.vary).ok_or_else(|| {
            QubusError::InvalidConfig(format!(
                "cannot vary {:?}; protocol parameters are {:?}",
                self.vary,
                self.protocol.param_names()
            ))
        })
    }
}

/// Metrics recorded at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMetrics {
    pub concurrence: f64,
    pub concurrence_sq: f64,
    pub bus_spread: f64,
    pub entangling_phase: Option<f64>,
}

impl PointMetrics {
    pub fn from_state(s: &BranchState) -> Self {
        let concurrence = branch_concurrence(s);
        Self {
            concurrence,
            concurrence_sq: concurrence * concurrence,
            bus_spread: bus_spread(s),
            entangling_phase: entangling_phase(s).ok(),
        }
    }

    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Concurrence => Some(self.concurrence),
            Metric::ConcurrenceSquared => Some(self.concurrence_sq),
            Metric::BusSpread => Some(self.bus_spread),
            Metric::EntanglingPhase => self.entangling_phase,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub param_value: f64,
    pub metrics: Option<PointMetrics>,
    /// Set when building or simulating this point failed.
    pub error: Option<String>,
}

impl SweepRow {
    pub fn value(&self, metric: Metric) -> Option<f64> {
        self.metrics.and_then(|m| m.get(metric))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
    /// `k` in `metric ≈ 1 − k·ε²`.
    pub fitted_curvature: Option<f64>,
    /// RMS deviation of the fitted rows from the model.
    pub fit_residual: Option<f64>,
}

impl SweepResult {
    pub fn values(&self) -> Vec<(f64, Option<f64>)> {
        self.rows.iter().map(|r| (r.epsilon, r.value(self.config.metric))).collect()
    }
}

fn evaluate_point(protocol: &ProtocolSpec, vary: &str, value: f64) -> Result<PointMetrics> {
    let spec = protocol.with_param(vary, value)?;
    Ok(PointMetrics::from_state(&spec.simulate()?))
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    let base = cfg.validate()?;
    let rows: Vec<SweepRow> = cfg
        .range
        .points()
        .into_par_iter()
        .map(|epsilon| {
            let param_value = cfg.mode.apply(base, epsilon);
            match evaluate_point(&cfg.protocol, &cfg.vary, param_value) {
                Ok(m) => SweepRow { epsilon, param_value, metrics: Some(m), error: None },
                Err(e) => SweepRow { epsilon, param_value, metrics: None, error: Some(e.to_string()) },
            }
        })
        .collect();

    let (fitted_curvature, fit_residual) = if cfg.metric.has_interior_maximum() {
        let mid = 0.5 * (cfg.range.min + cfg.range.max);
        let half_window = 0.5 * FIT_WINDOW * (cfg.range.max - cfg.range.min) * (1.0 + 1e-12);
        let central: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| (r.epsilon - mid).abs() <= half_window)
            .filter_map(|r| r.value(cfg.metric).map(|v| (r.epsilon - mid, v)))
            .collect();
        let (k, residual) = fit_curvature(&central)?;
        (Some(k), Some(residual))
    } else {
        (None, None)
    };
    Ok(SweepResult { config: cfg.clone(), rows, fitted_curvature, fit_residual })
}

/// Least-squares `k` in `y ≈ 1 − k·ε²`, plus the RMS residual.
pub fn fit_curvature(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < MIN_FIT_ROWS {
        return Err(QubusError::FitFailed { valid: points.len() });
    }
    let num: f64 = points.iter().map(|&(e, y)| (1.0 - y) * e * e).sum();
    let den: f64 = points.iter().map(|&(e, _)| e.powi(4)).sum();
    if den <= 0.0 {
        return Err(QubusError::FitFailed { valid: 0 });
    }
    let k = num / den;
    let sse: f64 = points.iter().map(|&(e, y)| (y - (1.0 - k * e * e)).powi(2)).sum();
    Ok((k, (sse / points.len() as f64).sqrt()))
}

/// Smallest `|ε|` on either side of the base point at which the concurrence
/// falls to `threshold`.
pub fn tolerance_radius(protocol: &ProtocolSpec, vary: &str, mode: PerturbationMode, threshold: f64) -> Result<f64> {
    const STEP: f64 = 0.002;
    const LIMIT: f64 = 0.9;
    let base = protocol
        .param(vary)
        .ok_or_else(|| QubusError::InvalidConfig(format!("cannot vary {vary:?}")))?;
    let conc = |eps: f64| -> Result<f64> { Ok(evaluate_point(protocol, vary, mode.apply(base, eps))?.concurrence) };
    if conc(0.0)? < threshold {
        return Err(QubusError::InvalidConfig(format!("base point is already below C = {threshold}")));
    }
    let mut radius = f64::INFINITY;
    for sign in [1.0, -1.0] {
        let mut inside = 0.0;
        let mut outside = None;
        let mut eps = STEP;
        while eps <= LIMIT {
            if conc(sign * eps)? < threshold {
                outside = Some(eps);
                break;
            }
            inside = eps;
            eps += STEP;
        }
        let Some(mut hi) = outside else { continue };
        let mut lo = inside;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if conc(sign * mid)? < threshold {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        radius = radius.min(0.5 * (lo + hi));
    }
    if radius.is_finite() {
        Ok(radius)
    } else {
        Err(QubusError::NumericalFailure(format!("concurrence never fell below {threshold} within ±{LIMIT}")))
    }
}

/// Robustness summary of one protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    pub alpha: f64,
    pub theta: f64,
    pub concurrence: f64,
    /// Curvature of `C²` against relative errors in α and θ.
    pub curvature_alpha: f64,
    pub curvature_theta: f64,
    /// Relative error keeping `C > 0.97`.
    pub tolerance_alpha: f64,
    pub tolerance_theta: f64,
    pub bus_spread: f64,
    pub traced_concurrence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub method: String,
    pub param: String,
    pub epsilon: f64,
    pub concurrence: f64,
    pub concurrence_sq: f64,
    pub bus_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub specific: MethodReport,
    pub square: MethodReport,
    /// Square path run with the specific example's α and θ.
    pub square_spread_at_specific_alpha: f64,
    pub square_pair_spreads_at_specific_alpha: PairSpreads,
    /// `C − C_traced` for the square path at its own maximum.
    pub square_traced_deficit: f64,
    pub advantage_alpha: f64,
    pub advantage_theta: f64,
    pub rows: Vec<CompareRow>,
}

/// Distances between final buses of selected branch pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSpreads {
    pub d00_01: f64,
    pub d00_11: f64,
    pub d01_10: f64,
}

impl PairSpreads {
    pub fn of(s: &BranchState) -> Self {
        Self { d00_01: pair_distance(s, 0, 1), d00_11: pair_distance(s, 0, 3), d01_10: pair_distance(s, 1, 2) }
    }
}

pub const COMPARE_THRESHOLD: f64 = 0.97;
const COMPARE_HALF_WIDTH: f64 = 0.05;
const COMPARE_STEPS: usize = 101;

fn method_report(spec: &ProtocolSpec, rows: &mut Vec<CompareRow>) -> Result<MethodReport> {
    let mut curvature = [0.0; 2];
    let mut tolerance = [0.0; 2];
    for (slot, param) in ["alpha", "theta"].into_iter().enumerate() {
        let cfg = SweepConfig::new(
            spec.clone(),
            param,
            SweepRange::symmetric(COMPARE_HALF_WIDTH, COMPARE_STEPS)?,
            Metric::ConcurrenceSquared,
        )
        .with_mode(PerturbationMode::Relative);
        let result = run_sweep(&cfg)?;
        curvature[slot] = result.fitted_curvature.expect("concurrence sweeps are fitted");
        tolerance[slot] = tolerance_radius(spec, param, PerturbationMode::Relative, COMPARE_THRESHOLD)?;
        rows.extend(result.rows.iter().filter_map(|r| {
            r.metrics.map(|m| CompareRow {
                method: spec.method_name().to_string(),
                param: param.to_string(),
                epsilon: r.epsilon,
                concurrence: m.concurrence,
                concurrence_sq: m.concurrence_sq,
                bus_spread: m.bus_spread,
            })
        }));
    }
    let out = spec.simulate()?;
    let point = PointMetrics::from_state(&out);
    Ok(MethodReport {
        method: spec.method_name().to_string(),
        alpha: spec.param("alpha").unwrap_or(f64::NAN),
        theta: spec.param("theta").unwrap_or(f64::NAN),
        concurrence: point.concurrence,
        curvature_alpha: curvature[0],
        curvature_theta: curvature[1],
        tolerance_alpha: tolerance[0],
        tolerance_theta: tolerance[1],
        bus_spread: point.bus_spread,
        traced_concurrence: concurrence_traced(&reduce_to_qubits(&out))?,
    })
}

/// Compare the specific example against the square path at matching `θ`.
///
/// The square path is placed at its own maximum `α²θ² = π/12`; its residual bus
/// spread is additionally reported at the specific example's `α`.
pub fn compare_methods(alpha_spec: f64, beta: f64, theta: f64, phi: f64) -> Result<CompareReport> {
    let specific = ProtocolSpec::SpecificExample { alpha: alpha_spec, beta, theta, phi };
    let square = ProtocolSpec::square_at_maximum(theta);
    let mut rows = Vec::new();
    let specific_report = method_report(&specific, &mut rows)?;
    let square_report = method_report(&square, &mut rows)?;
    let at_spec = ProtocolSpec::SquarePath { alpha: alpha_spec, theta }.simulate()?;
    Ok(CompareReport {
        square_spread_at_specific_alpha: bus_spread(&at_spec),
        square_pair_spreads_at_specific_alpha: PairSpreads::of(&at_spec),
        square_traced_deficit: square_report.concurrence - square_report.traced_concurrence,
        advantage_alpha: specific_report.tolerance_alpha / square_report.tolerance_alpha,
        advantage_theta: specific_report.tolerance_theta / square_report.tolerance_theta,
        specific: specific_report,
        square: square_report,
        rows,
    })
}

/// Twelve significant digits, period decimal separator.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn opt(x: Option<f64>) -> String {
    format_value(x.unwrap_or(f64::NAN))
}

pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| QubusError::NumericalFailure(format!("csv write failed: {e}"));
    w.write_record(["param", "epsilon", "concurrence", "concurrence_sq", "bus_spread", "entangling_phase"])
        .map_err(io)?;
    for row in &result.rows {
        let m = row.metrics;
        w.write_record([
            format_value(row.param_value),
            format_value(row.epsilon),
            opt(m.map(|m| m.concurrence)),
            opt(m.map(|m| m.concurrence_sq)),
            opt(m.map(|m| m.bus_spread)),
            opt(m.and_then(|m| m.entangling_phase)),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| QubusError::NumericalFailure(e.to_string()))
}

pub fn write_compare_csv<W: Write>(report: &CompareReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| QubusError::NumericalFailure(format!("csv write failed: {e}"));
    w.write_record(["method", "param", "epsilon", "concurrence", "concurrence_sq", "bus_spread"]).map_err(io)?;
    for row in &report.rows {
        w.write_record([
            row.method.clone(),
            row.param.clone(),
            format_value(row.epsilon),
            format_value(row.concurrence),
            format_value(row.concurrence_sq),
            format_value(row.bus_spread),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| QubusError::NumericalFailure(e.to_string()))
}
