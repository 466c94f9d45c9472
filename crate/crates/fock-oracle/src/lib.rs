//! Independent truncated-Fock reference for the branch simulator.

pub mod fock;
pub mod verify;

use qubus_core::QubusError;

pub use fock::{fock_apply, fock_apply_all, fock_initial, fock_reduce, required_cutoff, accurate_cutoff, FockState};
pub use verify::{verify_oracle, TrialOutcome, VerifyOptions, VerifyReport};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("cutoff {cutoff} too small: lost probability {loss:.3e}")]
    CutoffTooSmall { cutoff: usize, loss: f64 },
    #[error(transparent)]
    Core(#[from] QubusError),
}
