//! Exact simulation of measurement-free two-qubit phase gates mediated by a
//! coherent-state bus.
//!
//! The joint state is kept in branch form (one coefficient and one coherent
//! amplitude per two-qubit basis state), which is closed under the two
//! primitives used by these gates: qubit-controlled rotations of the bus and
//! unconditional bus displacements.

pub mod error;
pub mod geometry;
pub mod metrics;
pub mod protocols;
pub mod sequence;
pub mod state;
pub mod sweeps;

pub use error::{QubusError, Result};
pub use metrics::{GateMetrics, QubitDensityMatrix};
pub use num_complex::Complex64;
pub use protocols::{BuildOptions, GeometrySolution};
pub use sequence::{GateSequence, ParamValue, Provenance};
pub use state::{Branch, BranchState, GateOp, Qubit};
pub use sweeps::{Metric, PerturbationMode, ProtocolSpec, SweepConfig, SweepRange, SweepResult};
