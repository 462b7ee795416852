//! Error type for experiment-design problems and the solver.

use fisher_information::InformationError;
use maneuver_signals::SignalError;
use thiserror::Error;

/// Failures raised while posing or solving a design problem.
#[derive(Debug, Error)]
pub enum OedError {
    /// Parameter scaling divides by the nominal value, which must be nonzero.
    #[error("parameter {name} has a zero nominal value and cannot be scaled")]
    ZeroNominal { name: String },

    /// The initial guess violates a bound beyond the feasibility tolerance.
    #[error("initial guess violates bound on {variable} by {violation:.3e}")]
    InfeasibleGuess { variable: String, violation: f64 },

    /// The initial guess carries no usable information for the parameter set.
    #[error("initial guess is uninformative: {reason}")]
    UninformativeGuess { reason: String },

    /// The problem statement is internally inconsistent.
    #[error("invalid problem: {reason}")]
    InvalidProblem { reason: String },

    #[error(transparent)]
    Information(#[from] InformationError),

    #[error(transparent)]
    Signal(#[from] SignalError),
}
