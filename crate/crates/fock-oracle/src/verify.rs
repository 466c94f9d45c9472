//! Randomized cross-check of the branch simulator against the Fock oracle.

use num_complex::Complex64;
use qubus_core::metrics::{reduce_to_qubits, trace_distance};
use qubus_core::{BranchState, GateOp, Qubit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fock::{fock_apply_all, fock_initial, fock_reduce, accurate_cutoff};
use crate::OracleError;

/// Trace distance above which a trial counts as a disagreement.
pub const TRACE_DISTANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub max_alpha: f64,
    pub max_shift: f64,
    pub max_ops: usize,
    /// Random ops are redrawn until every bus stays inside this radius.
    pub path_bound: f64,
    /// Overrides the automatic cutoff.
    pub forced_cutoff: Option<usize>,
    /// Compare states without applying any gate.
    pub identity: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            max_alpha: 3.0,
            max_shift: 3.0,
            max_ops: 10,
            path_bound: 5.0,
            forced_cutoff: None,
            identity: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub ops: usize,
    pub cutoff: usize,
    pub trace_distance: Option<f64>,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump: Option<serde_json::Value>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        matches!(self.trace_distance, Some(d) if d <= TRACE_DISTANCE_TOL)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub tolerance: f64,
    pub max_trace_distance: f64,
    pub failures: usize,
    pub passed: bool,
    pub outcomes: Vec<TrialOutcome>,
}

pub struct Trial {
    pub coeffs: [Complex64; 4],
    pub alpha: Complex64,
    pub ops: Vec<GateOp>,
}

fn disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

fn max_bus(state: &BranchState) -> f64 {
    state.buses().iter().map(|b| b.norm()).fold(0.0, f64::max)
}

/// Draw a random normalized qubit state, bus amplitude and gate sequence.
pub fn random_trial(rng: &mut impl Rng, opts: &VerifyOptions) -> Trial {
    let mut coeffs = [Complex64::new(0.0, 0.0); 4];
    for c in coeffs.iter_mut() {
        *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    coeffs.iter_mut().for_each(|c| *c /= norm);
    let alpha = disk_point(rng, opts.max_alpha.min(opts.path_bound));

    let mut ops = Vec::new();
    if !opts.identity {
        let mut state = BranchState::make_initial(coeffs, alpha).expect("normalized");
        let count = rng.gen_range(1..=opts.max_ops.max(1));
        while ops.len() < count {
            let op = if rng.gen_bool(0.5) {
                let qubit = if rng.gen_bool(0.5) { Qubit::One } else { Qubit::Two };
                GateOp::rotation(qubit, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            } else {
                GateOp::displacement(disk_point(rng, opts.max_shift))
            };
            let next = state.apply(&op);
            if max_bus(&next) <= opts.path_bound {
                state = next;
                ops.push(op);
            }
        }
    }
    Trial { coeffs, alpha, ops }
}

/// Cutoff covering the largest bus amplitude reached along the sequence, found by
/// a dry run in the branch representation.
pub fn trial_cutoff(trial: &Trial) -> usize {
    let mut state = BranchState::make_initial(trial.coeffs, trial.alpha).expect("normalized");
    let mut peak = max_bus(&state);
    for op in &trial.ops {
        state = state.apply(op);
        peak = peak.max(max_bus(&state));
    }
    accurate_cutoff(peak)
}

/// Trace distance between the two reduced qubit states, plus the final Fock state.
pub fn compare_trial(trial: &Trial, cutoff: usize) -> Result<(f64, crate::FockState), OracleError> {
    let branch = BranchState::make_initial(trial.coeffs, trial.alpha)?.apply_ops(&trial.ops);
    let fock = fock_apply_all(&fock_initial(trial.coeffs, trial.alpha, cutoff)?, &trial.ops)?;
    let d = trace_distance(&reduce_to_qubits(&branch), &fock_reduce(&fock))?;
    Ok((d, fock))
}

pub fn verify_oracle(opts: &VerifyOptions) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let trials: Vec<Trial> = (0..opts.trials).map(|_| random_trial(&mut rng, opts)).collect();
    let outcomes: Vec<TrialOutcome> = trials
        .iter()
        .enumerate()
        .map(|(i, trial)| {
            let cutoff = opts.forced_cutoff.unwrap_or_else(|| trial_cutoff(trial));
            let mut outcome = TrialOutcome {
                trial: i,
                ops: trial.ops.len(),
                cutoff,
                trace_distance: None,
                error: None,
                dump: None,
            };
            match compare_trial(trial, cutoff) {
                Ok((d, fock)) => {
                    outcome.trace_distance = Some(d);
                    if d > TRACE_DISTANCE_TOL {
                        outcome.dump = Some(fock.debug_json());
                    }
                }
                Err(e) => outcome.error = Some(e.to_string()),
            }
            outcome
        })
        .collect();
    let max_trace_distance = outcomes
        .iter()
        .map(|o| o.trace_distance.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let failures = outcomes.iter().filter(|o| !o.passed()).count();
    VerifyReport {
        options: opts.clone(),
        tolerance: TRACE_DISTANCE_TOL,
        max_trace_distance,
        failures,
        passed: failures == 0,
        outcomes,
    }
}
