//! Error types for model construction, evaluation, and trim solving.

use thiserror::Error;

/// Errors raised while evaluating or constructing dynamics models.
#[derive(Debug, Error)]
pub enum DynamicsError {
    /// A physical property that must be strictly positive was not.
    #[error("airframe property `{name}` must be positive, got {value}")]
    NonPositiveProperty { name: &'static str, value: f64 },

    /// The inertia tensor restricted to the (x, z) plane must be invertible.
    #[error("roll/yaw inertia submatrix is singular (Jx*Jz - Jxz^2 = {determinant})")]
    SingularInertia { determinant: f64 },

    /// Airspeed at or below zero makes the wind-axis kinematics meaningless.
    #[error("airspeed must be positive, got {airspeed} m/s")]
    NonPositiveAirspeed { airspeed: f64 },

    /// The wind-axis equations are singular where cos(beta) or cos(theta) vanish.
    #[error("state is too close to a kinematic singularity: {which} = {angle} rad")]
    KinematicSingularity { which: &'static str, angle: f64 },

    /// A model slot that the caller asked to vary is not part of the model.
    #[error("unknown parameter `{name}`")]
    UnknownParameter { name: String },

    /// A dimensional derivative with no counterpart in the sparse
    /// coefficient build-up (it is fixed at zero).
    #[error("derivative `{name}` = {value} has no slot in the sparse coefficient model")]
    UnrepresentableDerivative { name: &'static str, value: f64 },
}

/// Errors raised by the trim solver.
#[derive(Debug, Error)]
pub enum TrimError {
    /// The target airspeed was not positive.
    #[error("trim airspeed must be positive, got {airspeed} m/s")]
    NonPositiveAirspeed { airspeed: f64 },

    /// Newton iteration did not reach the residual tolerance.
    #[error("trim iteration did not converge: residual {residual} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    /// The Newton step matrix became singular.
    #[error("trim Jacobian is singular at iteration {iteration}")]
    SingularJacobian { iteration: usize },

    /// A fixed-flight-path solve converged on the pitch-axis residuals but the
    /// airspeed rate stayed nonzero, so the result is not an equilibrium.
    #[error("no equilibrium on the requested flight path: residual airspeed rate {airspeed_rate} m/s^2")]
    NotEquilibrium { airspeed_rate: f64 },

    /// The converged trim point sits outside the admissible attitude or
    /// deflection range.
    #[error("trim out of range: alpha {alpha} rad, elevator {elevator} rad")]
    OutOfRange { alpha: f64, elevator: f64 },

    /// An underlying model evaluation failed.
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Errors raised while reading or writing airframe definition files.
#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("failed to read airframe file: {0}")]
    Io(#[from] std::io::Error),

    #[error("failed to parse airframe file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("airframe file is invalid: {0}")]
    Invalid(#[from] DynamicsError),
}
