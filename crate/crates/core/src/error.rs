use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QubusError {
    #[error("qubit coefficients have squared norm {norm}, expected 1")]
    Norm { norm: f64 },

    #[error("degenerate angle {name} = {value}: its sine or cosine vanishes")]
    DegenerateAngle { name: &'static str, value: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("bus is not disentangled (spread {spread:e}); use the traced concurrence")]
    NotDisentangled { spread: f64 },

    #[error("phase of branch {label} is undefined (|coeff| = {magnitude:e})")]
    PhaseUndefined { label: &'static str, magnitude: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("curvature fit needs at least 5 valid central rows, got {valid}")]
    FitFailed { valid: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl QubusError {
    /// True for errors caused by bad user input rather than a numerical problem.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            QubusError::Norm { .. }
                | QubusError::DegenerateAngle { .. }
                | QubusError::DegenerateGeometry(_)
                | QubusError::InvalidConfig(_)
                | QubusError::Parse(_)
        )
    }
}

impl From<serde_json::Error> for QubusError {
    fn from(e: serde_json::Error) -> Self {
        QubusError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QubusError>;
