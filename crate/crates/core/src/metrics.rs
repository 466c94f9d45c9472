//! Gate-quality measures on branch states.
//!
//! Two concurrences are available. [`branch_concurrence`] evaluates
//! `2|c00·c11 − c01·c10|` on the fused branch coefficients; it is the exact
//! pure-state concurrence once the bus has merged, and for an unmerged bus it
//! is the value implied by the accumulated geometric phases alone.
//! [`concurrence_traced`] is the Wootters concurrence of the qubit state left
//! after tracing out the bus, including the coherent-state overlaps.

use nalgebra::{Matrix4, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QubusError, Result};
use crate::state::{BranchState, LABELS, POPULATED_EPS};

/// Eigenvalues of a density matrix below this are treated as roundoff.
const EIGEN_FLOOR: f64 = 1e-12;
/// Most negative eigenvalue tolerated before a matrix is rejected as non-PSD.
const PSD_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const EIGEN_MAX_ITER: usize = 10_000;

/// Reduced two-qubit state, indexed `(jk, lm)` in the order 00, 01, 10, 11.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix(pub Matrix4<Complex64>);

impl QubitDensityMatrix {
    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Result<[f64; 4]> {
        let eig = hermitian_eigen(&self.0)?;
        let mut values = [0.0; 4];
        values.copy_from_slice(eig.eigenvalues.as_slice());
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    /// Check Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(QubusError::NumericalFailure(format!("density matrix not Hermitian ({herm:e})")));
        }
        let trace = self.trace();
        if (trace - 1.0).norm() > HERMITIAN_TOL {
            return Err(QubusError::NumericalFailure(format!("density matrix trace {trace}")));
        }
        let min = self.eigenvalues()?[3];
        if min < -PSD_TOL {
            return Err(QubusError::NumericalFailure(format!("density matrix eigenvalue {min:e} < 0")));
        }
        Ok(())
    }

    /// Matrix square root with eigenvalues below the roundoff floor set to zero.
    fn sqrt(&self) -> Result<Matrix4<Complex64>> {
        let eig = hermitian_eigen(&self.0)?;
        let v = eig.eigenvectors;
        let mut scaled = v;
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let root = if lambda > EIGEN_FLOOR { lambda.sqrt() } else { 0.0 };
            scaled.column_mut(k).scale_mut(root);
        }
        Ok(scaled * v.adjoint())
    }
}

fn hermitian_eigen(m: &Matrix4<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::U4>> {
    let sym = (m + m.adjoint()).scale(0.5);
    SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| QubusError::NumericalFailure("Hermitian eigendecomposition did not converge".into()))
}

impl Serialize for QubitDensityMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[f64; 2]> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| [self.0[(i, j)].re, self.0[(i, j)].im])
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QubitDensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        if pairs.len() != 16 {
            return Err(D::Error::custom(format!("expected 16 entries, got {}", pairs.len())));
        }
        Ok(QubitDensityMatrix(Matrix4::from_row_iterator(
            pairs.iter().map(|&[re, im]| Complex64::new(re, im)),
        )))
    }
}

/// Summary of one simulated gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateMetrics {
    /// `2|c00·c11 − c01·c10|` on the branch coefficients.
    pub concurrence: f64,
    /// `(η00 + η11) − (η01 + η10)` in `(−π, π]`; `None` if a branch is empty.
    pub entangling_phase: Option<f64>,
    /// Largest distance between populated branch buses.
    pub bus_spread: f64,
    /// Largest distance of a populated branch bus from the initial amplitude.
    pub bus_return_error: f64,
    /// Wootters concurrence after tracing out the bus.
    pub traced_concurrence: f64,
}

impl GateMetrics {
    pub fn evaluate(initial_bus: Complex64, state: &BranchState) -> Result<Self> {
        let bus_return_error = state
            .populated()
            .map(|i| (state.branches[i].bus - initial_bus).norm())
            .fold(0.0, f64::max);
        Ok(Self {
            concurrence: branch_concurrence(state),
            entangling_phase: entangling_phase(state).ok(),
            bus_spread: bus_spread(state),
            bus_return_error,
            traced_concurrence: concurrence_traced(&reduce_to_qubits(state))?,
        })
    }
}

/// `2|c00·c11 − c01·c10|` before clamping.
pub fn branch_concurrence_raw(s: &BranchState) -> f64 {
    let c = s.coeffs();
    2.0 * (c[0] * c[3] - c[1] * c[2]).norm()
}

/// Concurrence implied by the branch coefficients, clamped to `[0, 1]`.
pub fn branch_concurrence(s: &BranchState) -> f64 {
    branch_concurrence_raw(s).clamp(0.0, 1.0)
}

/// Pure-state concurrence; requires the bus to be disentangled.
pub fn concurrence_pure(s: &BranchState) -> Result<f64> {
    let spread = bus_spread(s);
    let populated: Vec<usize> = s.populated().collect();
    let mean = if populated.is_empty() {
        0.0
    } else {
        populated.iter().map(|&i| s.branches[i].bus.norm()).sum::<f64>() / populated.len() as f64
    };
    if spread >= 1e-6 * mean.max(1.0) {
        return Err(QubusError::NotDisentangled { spread });
    }
    Ok(branch_concurrence(s))
}

/// Largest phase-space distance between the buses of populated branches.
pub fn bus_spread(s: &BranchState) -> f64 {
    let idx: Vec<usize> = s.populated().collect();
    let mut spread: f64 = 0.0;
    for (n, &i) in idx.iter().enumerate() {
        for &j in &idx[n + 1..] {
            spread = spread.max((s.branches[i].bus - s.branches[j].bus).norm());
        }
    }
    spread
}

/// Distance between the buses of branches `i` and `j` (storage indices).
pub fn pair_distance(s: &BranchState, i: usize, j: usize) -> f64 {
    (s.branches[i].bus - s.branches[j].bus).norm()
}

pub fn entangling_phase(s: &BranchState) -> Result<f64> {
    let c = s.coeffs();
    if let Some(i) = (0..4).find(|&i| c[i].norm() < POPULATED_EPS) {
        return Err(QubusError::PhaseUndefined { label: LABELS[i], magnitude: c[i].norm() });
    }
    Ok((c[0] * c[3] * c[1].conj() * c[2].conj()).arg())
}

/// Trace out the bus: `ρ[jk, lm] = c_jk c̄_lm ⟨α_lm|α_jk⟩`.
pub fn reduce_to_qubits(s: &BranchState) -> QubitDensityMatrix {
    let b = &s.branches;
    let m = Matrix4::from_fn(|r, c| {
        let (x, y) = (b[r].bus, b[c].bus);
        // −|x|²/2 − |y|²/2 + ȳx written so large amplitudes do not cancel
        let overlap = Complex64::new(-0.5 * (x - y).norm_sqr(), (y.conj() * x).im).exp();
        b[r].coeff * b[c].coeff.conj() * overlap
    });
    QubitDensityMatrix(m)
}

fn spin_flip() -> Matrix4<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut yy = Matrix4::zeros();
    yy[(0, 3)] = -one;
    yy[(1, 2)] = one;
    yy[(2, 1)] = one;
    yy[(3, 0)] = -one;
    yy
}

/// Wootters `λ1 − λ2 − λ3 − λ4` before clamping.
///
/// The `λ` are the singular values of `√ρ·√ρ̃`, which equal the eigenvalues of
/// `√(√ρ ρ̃ √ρ)` without square-rooting roundoff-sized eigenvalues.
pub fn concurrence_traced_raw(rho: &QubitDensityMatrix) -> Result<f64> {
    let root = rho.sqrt()?;
    let yy = spin_flip();
    let root_tilde = yy * root.conjugate() * yy;
    let svd = SVD::try_new(root * root_tilde, false, false, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| QubusError::NumericalFailure("SVD did not converge".into()))?;
    let mut lambda: Vec<f64> = svd.singular_values.iter().copied().collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok(lambda[0] - lambda[1] - lambda[2] - lambda[3])
}

pub fn concurrence_traced(rho: &QubitDensityMatrix) -> Result<f64> {
    Ok(concurrence_traced_raw(rho)?.clamp(0.0, 1.0))
}

/// `½ Σ |eig(ρ − σ)|`.
pub fn trace_distance(a: &QubitDensityMatrix, b: &QubitDensityMatrix) -> Result<f64> {
    let eig = hermitian_eigen(&(a.0 - b.0))?;
    Ok(0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}
