//! Error type for information computations.

use thiserror::Error;

/// Failures while simulating, assembling, or validating information measures.
#[derive(Debug, Error)]
pub enum InformationError {
    /// Signal channels do not cover the model inputs, or dimensions disagree.
    #[error("dimension mismatch: {reason}")]
    DimensionMismatch { reason: String },
    /// A requested parameter is not in the model's parameter map.
    #[error("unknown parameter {name}")]
    UnknownParameter { name: String },
    /// A sensor channel does not name a model state.
    #[error("sensor measures unknown state {name}")]
    UnknownState { name: String },
    /// Sensor noise or rate is non-positive.
    #[error("invalid sensor {field}: {value}")]
    InvalidSensor { field: &'static str, value: f64 },
    /// The signal grid and the sensor rate disagree.
    #[error("signal period {signal_period} s does not match sensor period {sensor_period} s")]
    GridMismatch {
        signal_period: f64,
        sensor_period: f64,
    },
    /// The excitation produced no information on any parameter.
    #[error("all {parameters} parameter(s) are unidentifiable under this excitation")]
    NoInformation { parameters: usize },
    /// The Fisher matrix is rank-deficient where full rank is required.
    #[error("information matrix rank {rank} < {required} required")]
    RankDeficient { rank: usize, required: usize },
    /// Too many Monte-Carlo estimator runs failed to converge.
    #[error("{diverged} of {runs} estimator runs diverged (limit {limit})")]
    EstimatorDivergence {
        diverged: usize,
        runs: usize,
        limit: usize,
    },
}
