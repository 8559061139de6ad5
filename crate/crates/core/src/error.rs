use thiserror::Error;

/// Errors shared across the solver, verifier and simulator.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: String, reason: String },

    /// Dimensions of vectors, grids or reaction outputs disagree.
    #[error("structural error: {0}")]
    Structural(String),

    /// Wave speed below the threshold where the characteristic roots are real.
    #[error("subcritical wave speed c = {c}: {reason}")]
    SubcriticalSpeed { c: f64, reason: String },

    /// Model parameters yield a non-positive coexistence state.
    #[error("equilibrium error: {0}")]
    Equilibrium(String),

    /// An operator was applied to a profile outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A sweep output escaped the bracket far beyond discretization noise,
    /// which signals an invalid input pair or an undersized Lipschitz bound.
    #[error("iteration integrity violated: {0}")]
    IterationIntegrity(String),

    /// Bad run configuration (missing evaluators, inconsistent grids, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The simulated front reached the edge of the spatial domain.
    #[error("spatial domain too small: {0}")]
    DomainTooSmall(String),

    /// The explicit time stepper produced a non-finite value.
    #[error("simulation blow-up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl CoreError {
    pub fn parameter(name: &str, reason: impl Into<String>) -> Self {
        CoreError::Parameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
