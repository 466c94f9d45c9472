//! Branch representation of the two-qubit + coherent-bus state.
//!
//! Every state reachable from a product input under conditional rotations and
//! displacements has the form `Σ_jk coeff_jk |jk⟩ |α_jk⟩`, so four complex
//! coefficients and four coherent amplitudes describe it exactly. Branches are
//! always stored densely in the order 00, 01, 10, 11, where the left bit belongs
//! to qubit 1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QubusError, Result};
use crate::sequence::GateSequence;

/// Basis labels in storage order.
pub const LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// Magnitude below which a branch is treated as unpopulated.
pub const POPULATED_EPS: f64 = 1e-15;

const NORM_TOL: f64 = 1e-6;

/// One of the two computational qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Qubit {
    One,
    Two,
}

impl Qubit {
    /// Value of this qubit's bit in the basis state with storage index `index`.
    #[inline]
    pub fn bit(self, index: usize) -> usize {
        match self {
            Qubit::One => (index >> 1) & 1,
            Qubit::Two => index & 1,
        }
    }
}

impl TryFrom<u8> for Qubit {
    type Error = String;

    fn try_from(value: u8) -> std::result::Result<Self, Self::Error> {
        match value {
            1 => Ok(Qubit::One),
            2 => Ok(Qubit::Two),
            other => Err(format!("qubit must be 1 or 2, got {other}")),
        }
    }
}

impl From<Qubit> for u8 {
    fn from(q: Qubit) -> u8 {
        match q {
            Qubit::One => 1,
            Qubit::Two => 2,
        }
    }
}

/// A primitive bus operation.
///
/// `ControlledRotation { qubit, angle }` is `exp(-i·angle·σ_z(qubit)·a†a)`; with
/// `|0⟩` the `+1` eigenstate of `σ_z`, a branch whose control bit is 0 has its bus
/// amplitude multiplied by `e^{-i·angle}` and a branch with bit 1 by `e^{+i·angle}`.
///
/// `Displacement { shift }` is the unitary `D(β) = exp(β a† − β* a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum GateOp {
    #[serde(rename = "rotation")]
    ControlledRotation { qubit: Qubit, angle: f64 },
    #[serde(rename = "displacement")]
    Displacement { shift: Complex64 },
}

impl GateOp {
    pub fn rotation(qubit: Qubit, angle: f64) -> Self {
        GateOp::ControlledRotation { qubit, angle }
    }

    pub fn displacement(shift: Complex64) -> Self {
        GateOp::Displacement { shift }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            GateOp::ControlledRotation { angle, .. } => angle.is_finite(),
            GateOp::Displacement { shift } => shift.re.is_finite() && shift.im.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    /// Fused amplitude `c_jk · e^{iη_jk}`.
    pub coeff: Complex64,
    /// Coherent amplitude of the bus in this branch.
    pub bus: Complex64,
}

/// Per-branch polar decomposition returned by [`BranchState::extract_phases`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPhase {
    /// `arg(coeff)` in `(−π, π]`; 0 when undefined.
    pub phase: f64,
    pub magnitude: f64,
    /// Set when `|coeff| < 1e-15`, in which case `phase` is reported as 0.
    pub undefined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchState {
    pub branches: [Branch; 4],
}

impl BranchState {
    /// Product input `Σ c_jk |jk⟩ ⊗ |alpha⟩`.
    ///
    /// Coefficients whose squared norm is within `1e-6` of one are renormalized;
    /// anything further away is rejected.
    pub fn make_initial(coeffs: [Complex64; 4], alpha: Complex64) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(QubusError::InvalidConfig("bus amplitude must be finite".into()));
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(QubusError::Norm { norm });
        }
        let scale = norm.sqrt().recip();
        Ok(Self {
            branches: coeffs.map(|c| Branch { coeff: c * scale, bus: alpha }),
        })
    }

    /// The equal superposition `|++⟩` with the bus at `alpha`.
    pub fn equal_superposition(alpha: Complex64) -> Self {
        let half = Complex64::new(0.5, 0.0);
        Self { branches: [Branch { coeff: half, bus: alpha }; 4] }
    }

    pub fn coeffs(&self) -> [Complex64; 4] {
        self.branches.map(|b| b.coeff)
    }

    pub fn buses(&self) -> [Complex64; 4] {
        self.branches.map(|b| b.bus)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.branches.iter().map(|b| b.coeff.norm_sqr()).sum()
    }

    pub fn apply_controlled_rotation(&self, qubit: Qubit, angle: f64) -> Self {
        let down = Complex64::cis(-angle);
        let up = Complex64::cis(angle);
        let mut out = *self;
        for (index, branch) in out.branches.iter_mut().enumerate() {
            branch.bus *= if qubit.bit(index) == 0 { down } else { up };
        }
        out
    }

    /// `D(β)|α⟩ = e^{i Im(β ᾱ)} |α + β⟩` applied branch by branch.
    pub fn apply_displacement(&self, shift: Complex64) -> Self {
        let mut out = *self;
        for branch in out.branches.iter_mut() {
            let phase = (shift * branch.bus.conj()).im;
            branch.coeff *= Complex64::cis(phase);
            branch.bus += shift;
        }
        out
    }

    pub fn apply(&self, op: &GateOp) -> Self {
        match *op {
            GateOp::ControlledRotation { qubit, angle } => self.apply_controlled_rotation(qubit, angle),
            GateOp::Displacement { shift } => self.apply_displacement(shift),
        }
    }

    pub fn apply_ops<'a>(&self, ops: impl IntoIterator<Item = &'a GateOp>) -> Self {
        ops.into_iter().fold(*self, |s, op| s.apply(op))
    }

    pub fn apply_sequence(&self, seq: &GateSequence) -> Self {
        self.apply_ops(seq.ops())
    }

    pub fn extract_phases(&self) -> [BranchPhase; 4] {
        self.branches.map(|b| {
            let magnitude = b.coeff.norm();
            if magnitude < POPULATED_EPS {
                BranchPhase { phase: 0.0, magnitude, undefined: true }
            } else {
                BranchPhase { phase: wrap_phase(b.coeff.arg()), magnitude, undefined: false }
            }
        })
    }

    /// Indices of branches with `|coeff| > 1e-15`.
    pub fn populated(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).filter(|&i| self.branches[i].coeff.norm() > POPULATED_EPS)
    }

    pub fn is_finite(&self) -> bool {
        self.branches.iter().all(|b| {
            b.coeff.re.is_finite() && b.coeff.im.is_finite() && b.bus.re.is_finite() && b.bus.im.is_finite()
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("branch state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Wrap an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

#[derive(Serialize, Deserialize)]
struct WireBranch {
    label: String,
    coeff: Complex64,
    bus: Complex64,
}

#[derive(Serialize, Deserialize)]
struct WireState {
    branches: Vec<WireBranch>,
}

impl Serialize for BranchState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = WireState {
            branches: self
                .branches
                .iter()
                .zip(LABELS)
                .map(|(b, label)| WireBranch { label: label.to_string(), coeff: b.coeff, bus: b.bus })
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BranchState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let wire = WireState::deserialize(deserializer)?;
        if wire.branches.len() != 4 {
            return Err(D::Error::custom(format!("expected 4 branches, got {}", wire.branches.len())));
        }
        let mut branches = [Branch { coeff: Complex64::default(), bus: Complex64::default() }; 4];
        for (slot, (wb, label)) in branches.iter_mut().zip(wire.branches.iter().zip(LABELS)) {
            if wb.label != label {
                return Err(D::Error::custom(format!("expected label {label}, got {}", wb.label)));
            }
            *slot = Branch { coeff: wb.coeff, bus: wb.bus };
        }
        Ok(BranchState { branches })
    }
}
