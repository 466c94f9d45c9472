//! Gate-sequence builders.
//!
//! Three constructions are provided:
//!
//! * [`solve_general_geometry`]: the exact disentangling protocol for an arbitrary
//!   first displacement `ω`. After the first three operations the four branch
//!   buses sit at distinct points; two pairs of opposite conditional rotations,
//!   each about a carefully chosen centre, merge them back into one point.
//! * [`build_specific_example`]: the closed form of that protocol when `ω` is
//!   chosen so the merge point `e` lies on the imaginary axis.
//! * [`build_square_path`]: the earlier measurement-free scheme in which the bus
//!   walks a square around the origin with a conditional rotation at each corner.
//!   It only disentangles the bus approximately.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{QubusError, Result};
use crate::geometry::{bisector_intersection, circumcenter, signed_angle};
use crate::sequence::{GateSequence, ParamValue, Provenance};
use crate::state::{BranchState, GateOp, Qubit};

const ANGLE_EPS: f64 = 1e-12;
const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Emit the last displacement returning the bus to its initial amplitude.
    pub include_final_displacement: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { include_final_displacement: true }
    }
}

/// Derived quantities of the general protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySolution {
    /// Merge point: equidistant from α01, α10 and from α00, α11.
    pub e: Complex64,
    /// Centre of the circle through α01, α10 and `e`.
    pub o1: Complex64,
    /// Centre of the circle through α00, α11 and `e`.
    pub o2: Complex64,
    /// Rotation angle of the first merging pair.
    pub psi: f64,
    /// Rotation angle of the second merging pair.
    pub eta: f64,
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(QubusError::InvalidConfig(format!("{name} must be positive and finite, got {x}")))
    }
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(QubusError::InvalidConfig(format!("{name} must be finite, got {x}")))
    }
}

fn params(entries: &[(&str, ParamValue)]) -> BTreeMap<String, ParamValue> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn build_specific_example(alpha: f64, beta: f64, theta: f64, phi: f64) -> Result<GateSequence> {
    build_specific_example_with(alpha, beta, theta, phi, BuildOptions::default())
}

/// Closed-form protocol for a real initial bus amplitude `alpha`.
///
/// Produces ten operations (nine without the final displacement). For an
/// equal-superposition input the resulting concurrence obeys
/// `C² = ½ − ½ cos(4αβ sinθ tanφ)`.
pub fn build_specific_example_with(
    alpha: f64,
    beta: f64,
    theta: f64,
    phi: f64,
    opts: BuildOptions,
) -> Result<GateSequence> {
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    check_finite("theta", theta)?;
    check_finite("phi", phi)?;
    let (sin_phi, cos_phi) = phi.sin_cos();
    if sin_phi.abs() < ANGLE_EPS || cos_phi.abs() < ANGLE_EPS {
        return Err(QubusError::DegenerateAngle { name: "phi", value: phi });
    }
    let (sin_theta, cos_theta) = theta.sin_cos();
    let half_x = alpha * sin_theta / (2.0 * sin_phi);
    let half_y = beta / (2.0 * cos_phi);

    let mut ops = vec![
        GateOp::rotation(Qubit::One, theta),
        GateOp::displacement(Complex64::new(-alpha * cos_theta, beta)),
        GateOp::rotation(Qubit::Two, phi),
        GateOp::displacement(Complex64::new(-half_x, -half_y)),
        GateOp::rotation(Qubit::One, phi),
        GateOp::rotation(Qubit::Two, -phi),
        GateOp::displacement(Complex64::new(2.0 * half_x, 0.0)),
        GateOp::rotation(Qubit::One, -phi),
        GateOp::rotation(Qubit::Two, -phi),
    ];
    if opts.include_final_displacement {
        ops.push(GateOp::displacement(Complex64::new(alpha - half_x, -half_y)));
    }
    GateSequence::new(
        ops,
        Provenance::SpecificExample,
        params(&[
            ("alpha", alpha.into()),
            ("beta", beta.into()),
            ("theta", theta.into()),
            ("phi", phi.into()),
        ]),
    )
}

pub fn solve_general_geometry(
    alpha: Complex64,
    theta: f64,
    phi: f64,
    omega: Complex64,
) -> Result<(GeometrySolution, GateSequence)> {
    solve_general_geometry_with(alpha, theta, phi, omega, BuildOptions::default())
}

/// General disentangling protocol for arbitrary complex `alpha` and first shift `omega`.
///
/// Rotation directions of the two merging pairs are read off the actual point
/// positions, and the merge is verified on the emitted sequence before returning.
pub fn solve_general_geometry_with(
    alpha: Complex64,
    theta: f64,
    phi: f64,
    omega: Complex64,
    opts: BuildOptions,
) -> Result<(GeometrySolution, GateSequence)> {
    for (name, x) in [("alpha", alpha.re), ("alpha", alpha.im), ("omega", omega.re), ("omega", omega.im)] {
        check_finite(name, x)?;
    }
    check_finite("theta", theta)?;
    check_finite("phi", phi)?;
    if theta.sin().abs() < ANGLE_EPS {
        return Err(QubusError::DegenerateAngle { name: "theta", value: theta });
    }
    if phi.sin().abs() < ANGLE_EPS {
        return Err(QubusError::DegenerateAngle { name: "phi", value: phi });
    }
    // ω must not be a real multiple of α
    if (omega * alpha.conj()).im.abs() <= 1e-9 * omega.norm() * alpha.norm() {
        return Err(QubusError::DegenerateGeometry(format!(
            "omega {omega} is a real multiple of alpha {alpha}"
        )));
    }

    let lower = alpha * Complex64::cis(-theta) + omega;
    let upper = alpha * Complex64::cis(theta) + omega;
    let a00 = lower * Complex64::cis(-phi);
    let a01 = lower * Complex64::cis(phi);
    let a10 = upper * Complex64::cis(-phi);
    let a11 = upper * Complex64::cis(phi);

    let e = bisector_intersection(a01, a10, a00, a11)?;
    let o1 = circumcenter(a01, a10, e)?;
    // the pair R1(ψ)R2(−ψ) multiplies α01 by e^{−2iψ} and α10 by e^{+2iψ}
    let psi = -0.5 * signed_angle(o1, a01, e);
    let o2 = circumcenter(a00, a11, e)?;
    // the pair R1(−η)R2(−η) multiplies α00 by e^{+2iη} and α11 by e^{−2iη}
    let eta = 0.5 * signed_angle(o2, a00, e);

    let solution = GeometrySolution { e, o1, o2, psi, eta };
    let scale = [a00, a01, a10, a11, e, o1, o2].iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = MERGE_TOL * scale;
    if ((e - a01).norm() - (e - a10).norm()).abs() > tol || ((e - a00).norm() - (e - a11).norm()).abs() > tol {
        return Err(QubusError::NumericalFailure("merge point is not equidistant".into()));
    }

    let mut ops = vec![
        GateOp::rotation(Qubit::One, theta),
        GateOp::displacement(omega),
        GateOp::rotation(Qubit::Two, phi),
        GateOp::displacement(-o1),
        GateOp::rotation(Qubit::One, psi),
        GateOp::rotation(Qubit::Two, -psi),
        GateOp::displacement(o1 - o2),
        GateOp::rotation(Qubit::One, -eta),
        GateOp::rotation(Qubit::Two, -eta),
    ];
    if opts.include_final_displacement {
        ops.push(GateOp::displacement(alpha - e + o2));
    }

    let probe = BranchState::equal_superposition(alpha).apply_ops(&ops);
    let buses = probe.buses();
    let spread = buses
        .iter()
        .flat_map(|a| buses.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    if spread > tol {
        return Err(QubusError::NumericalFailure(format!("branches failed to merge (spread {spread:e})")));
    }

    let seq = GateSequence::new(
        ops,
        Provenance::GeometricGeneral,
        params(&[
            ("alpha", alpha.into()),
            ("theta", theta.into()),
            ("phi", phi.into()),
            ("omega", omega.into()),
            ("psi", psi.into()),
            ("eta", eta.into()),
            ("e", e.into()),
            ("o1", o1.into()),
            ("o2", o2.into()),
        ]),
    )?;
    Ok((solution, seq))
}

/// The `ω` for which the general protocol reduces to [`build_specific_example`].
pub fn specific_example_omega(alpha: f64, beta: f64, theta: f64) -> Complex64 {
    Complex64::new(-alpha * theta.cos(), beta)
}

/// Initial bus amplitude `α e^{iπ/4}` expected by [`build_square_path`].
pub fn square_path_start(alpha: f64) -> Complex64 {
    let s = alpha * FRAC_1_SQRT_2;
    Complex64::new(s, s)
}

/// Square-path scheme: four conditional rotations of equal magnitude, each
/// followed by one side of the square with corners `α e^{i(2k+1)π/4}`, walked
/// counterclockwise from `α e^{iπ/4}`.
///
/// Rotations alternate qubit 1, qubit 2 with angles `θ, −θ, θ, −θ`. The side
/// displacements sum to exactly zero, so with `θ = 0` the bus closes the loop.
pub fn build_square_path(alpha: f64, theta: f64) -> Result<GateSequence> {
    check_positive("alpha", alpha)?;
    check_finite("theta", theta)?;
    let side = 2.0 * alpha * FRAC_1_SQRT_2;
    let sides = [
        Complex64::new(-side, 0.0),
        Complex64::new(0.0, -side),
        Complex64::new(side, 0.0),
        Complex64::new(0.0, side),
    ];
    let rotations = [
        GateOp::rotation(Qubit::One, theta),
        GateOp::rotation(Qubit::Two, -theta),
        GateOp::rotation(Qubit::One, theta),
        GateOp::rotation(Qubit::Two, -theta),
    ];
    let ops = rotations
        .into_iter()
        .zip(sides)
        .flat_map(|(r, d)| [r, GateOp::displacement(d)])
        .collect();
    GateSequence::new(
        ops,
        Provenance::SquarePath,
        params(&[("alpha", alpha.into()), ("theta", theta.into())]),
    )
}
