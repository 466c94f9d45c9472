//! Truncated Fock-space simulation of the qubit pair and the bus.
//!
//! Amplitudes are stored as four blocks of `cutoff` photon-number amplitudes,
//! one block per two-qubit basis state in the order 00, 01, 10, 11. Nothing here
//! uses the branch representation: rotations are diagonal phases `e^{∓iθn}` and
//! displacements are matrix exponentials of `β a† − β* a`.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use qubus_core::{GateOp, QubitDensityMatrix, Qubit};
use serde::Serialize;

use crate::OracleError;

/// Largest coherent-state truncation loss accepted at construction.
pub const MAX_TRUNCATION_LOSS: f64 = 1e-8;
/// Smallest norm accepted after an operation.
pub const MIN_NORM: f64 = 1.0 - 1e-6;

/// `⌈|α|² + 6|α| + 10⌉`: mean photon number plus six standard deviations and a margin.
pub fn required_cutoff(max_amplitude: f64) -> usize {
    let a = max_amplitude.abs();
    (a * a + 6.0 * a + 10.0).ceil() as usize
}

/// Coherent-state probability allowed beyond the cutoff by [`accurate_cutoff`].
pub const TAIL_PROBABILITY: f64 = 1e-18;

/// Poisson mass `Σ_{k≥n} e^{−λ} λᵏ/k!`.
pub fn poisson_tail(lambda: f64, n: usize) -> f64 {
    if lambda == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let mut log_p = -lambda + n as f64 * lambda.ln() - (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
    let mut total = 0.0;
    for k in n.. {
        let p = log_p.exp();
        total += p;
        if k as f64 > lambda && p < total * 1e-17 {
            break;
        }
        log_p += lambda.ln() - ((k + 1) as f64).ln();
    }
    total
}

/// At least [`required_cutoff`], raised until the discarded probability is below
/// [`TAIL_PROBABILITY`]. Truncation errors enter reduced states at amplitude level,
/// so a 1e-8 agreement needs a tail far smaller than the heuristic's.
pub fn accurate_cutoff(max_amplitude: f64) -> usize {
    let lambda = max_amplitude * max_amplitude;
    let mut n = required_cutoff(max_amplitude);
    while poisson_tail(lambda, n) >= TAIL_PROBABILITY {
        n += 1;
    }
    n
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    cutoff: usize,
    amplitudes: DVector<Complex64>,
    truncation_loss: f64,
}

/// Truncated expansion `e^{−|α|²/2} Σ αⁿ/√(n!) |n⟩`.
pub fn coherent_vector(alpha: Complex64, cutoff: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(cutoff);
    if cutoff == 0 {
        return v;
    }
    v[0] = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 1..cutoff {
        v[n] = v[n - 1] * alpha / (n as f64).sqrt();
    }
    v
}

fn qubit_bit(basis: usize, qubit: Qubit) -> usize {
    // basis = 2·(qubit 1 bit) + (qubit 2 bit)
    match qubit {
        Qubit::One => basis / 2,
        Qubit::Two => basis % 2,
    }
}

impl FockState {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Amplitude of `|basis⟩ ⊗ |n⟩`.
    pub fn amplitude(&self, basis: usize, n: usize) -> Complex64 {
        self.amplitudes[basis * self.cutoff + n]
    }

    /// `⟨a†a⟩` over the whole state.
    pub fn mean_photon_number(&self) -> f64 {
        (0..4)
            .flat_map(|b| (0..self.cutoff).map(move |n| (b, n)))
            .map(|(b, n)| n as f64 * self.amplitude(b, n).norm_sqr())
            .sum()
    }

    fn block(&self, basis: usize) -> DVector<Complex64> {
        self.amplitudes.rows(basis * self.cutoff, self.cutoff).into_owned()
    }

    /// Amplitude vectors as JSON, for failure triage.
    pub fn debug_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump {
            cutoff: usize,
            truncation_loss: f64,
            norm_sqr: f64,
            blocks: Vec<Vec<[f64; 2]>>,
        }
        let blocks = (0..4)
            .map(|b| self.block(b).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        serde_json::to_value(Dump {
            cutoff: self.cutoff,
            truncation_loss: self.truncation_loss,
            norm_sqr: self.norm_sqr(),
            blocks,
        })
        .expect("dump serializes")
    }
}

/// Qubit coefficients ⊗ truncated coherent state, renormalized.
pub fn fock_initial(coeffs: [Complex64; 4], alpha: Complex64, cutoff: usize) -> Result<FockState, OracleError> {
    let bus = coherent_vector(alpha, cutoff);
    let kept: f64 = bus.iter().map(|z| z.norm_sqr()).sum();
    let truncation_loss = 1.0 - kept;
    if truncation_loss > MAX_TRUNCATION_LOSS {
        return Err(OracleError::CutoffTooSmall { cutoff, loss: truncation_loss });
    }
    let qubit_norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let scale = (kept * qubit_norm).sqrt().recip();
    let mut amplitudes = DVector::zeros(4 * cutoff);
    for (b, c) in coeffs.iter().enumerate() {
        for n in 0..cutoff {
            amplitudes[b * cutoff + n] = c * bus[n] * scale;
        }
    }
    Ok(FockState { cutoff, amplitudes, truncation_loss })
}

/// Generator `β a† − β* a` on the first `dim` number states.
pub fn displacement_generator(beta: Complex64, dim: usize) -> DMatrix<Complex64> {
    let mut g = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let s = ((n + 1) as f64).sqrt();
        g[(n + 1, n)] = beta * s;
        g[(n, n + 1)] = -beta.conj() * s;
    }
    g
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

const TAYLOR_DEGREE: usize = 16;
const SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring.
///
/// The scaled matrix has 1-norm at most 1/2, where a degree-16 Taylor polynomial
/// is accurate to well below machine precision; the polynomial is evaluated with
/// the Paterson–Stockmeyer scheme in blocks of four.
pub fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let dim = m.nrows();
    let norm = one_norm(m);
    let squarings = if norm > SCALED_NORM { (norm / SCALED_NORM).log2().ceil() as i32 } else { 0 };
    let x = m.scale(0.5f64.powi(squarings));

    let mut coeff = [0.0; TAYLOR_DEGREE + 1];
    coeff[0] = 1.0;
    for k in 1..=TAYLOR_DEGREE {
        coeff[k] = coeff[k - 1] / k as f64;
    }
    let identity = DMatrix::<Complex64>::identity(dim, dim);
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let x4 = &x2 * &x2;
    let powers = [&identity, &x, &x2, &x3];
    let block = |j: usize| -> DMatrix<Complex64> {
        let mut b = DMatrix::zeros(dim, dim);
        for (i, p) in powers.iter().enumerate() {
            b += p.scale(coeff[4 * j + i]);
        }
        b
    };
    let mut result = block(3) + x4.scale(coeff[16]);
    for j in (0..3).rev() {
        result = block(j) + &x4 * result;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Truncated displacement matrix: `exp` of the generator on a padded space,
/// restricted to the first `cutoff` number states. Amplitude pushed past the
/// cutoff is lost, so the norm of the result measures truncation leakage.
pub fn displacement_matrix(beta: Complex64, cutoff: usize) -> DMatrix<Complex64> {
    let padded = cutoff + (cutoff / 4).max(10);
    expm(&displacement_generator(beta, padded)).view((0, 0), (cutoff, cutoff)).into_owned()
}

pub fn fock_apply(s: &FockState, op: &GateOp) -> Result<FockState, OracleError> {
    let n_max = s.cutoff;
    let mut out = s.clone();
    match *op {
        GateOp::ControlledRotation { qubit, angle } => {
            // exp(−iθσ_z n): σ_z = +1 on bit 0, −1 on bit 1
            for basis in 0..4 {
                let sigma = if qubit_bit(basis, qubit) == 0 { 1.0 } else { -1.0 };
                for n in 0..n_max {
                    out.amplitudes[basis * n_max + n] *= Complex64::cis(-angle * sigma * n as f64);
                }
            }
        }
        GateOp::Displacement { shift } => {
            if shift == Complex64::new(0.0, 0.0) {
                return Ok(out);
            }
            let d = displacement_matrix(shift, n_max);
            for basis in 0..4 {
                let moved = &d * s.block(basis);
                out.amplitudes.rows_mut(basis * n_max, n_max).copy_from(&moved);
            }
        }
    }
    let norm = out.norm_sqr() / s.norm_sqr();
    if norm < MIN_NORM {
        return Err(OracleError::CutoffTooSmall { cutoff: n_max, loss: 1.0 - norm });
    }
    Ok(out)
}

pub fn fock_apply_all<'a>(s: &FockState, ops: impl IntoIterator<Item = &'a GateOp>) -> Result<FockState, OracleError> {
    ops.into_iter().try_fold(s.clone(), |acc, op| fock_apply(&acc, op))
}

/// Partial trace over the photon number.
pub fn fock_reduce(s: &FockState) -> QubitDensityMatrix {
    let blocks: Vec<DVector<Complex64>> = (0..4).map(|b| s.block(b)).collect();
    QubitDensityMatrix(Matrix4::from_fn(|r, c| blocks[r].dotc(&blocks[c]).conj()))
}
