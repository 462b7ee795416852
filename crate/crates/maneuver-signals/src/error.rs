//! Error type for signal construction and serialization.

use thiserror::Error;

/// Failures while building, transforming, or (de)serializing signals.
#[derive(Debug, Error)]
pub enum SignalError {
    /// A scalar argument was outside its valid range.
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    /// The requested maneuver does not fit in the sample grid.
    #[error("maneuver needs {needed_s} s but the grid ends at {horizon_s} s")]
    HorizonOverflow { needed_s: f64, horizon_s: f64 },
    /// Channel arrays disagree in length, or labels collide.
    #[error("inconsistent channels: {reason}")]
    InconsistentChannels { reason: String },
    /// A sample was NaN or infinite.
    #[error("non-finite sample in channel {channel} at index {index}")]
    NonFiniteSample { channel: String, index: usize },
    /// The safety window does not lie inside the signal horizon.
    #[error("window [{begin_s}, {end_s}] s outside horizon {horizon_s} s")]
    WindowOutOfRange {
        begin_s: f64,
        end_s: f64,
        horizon_s: f64,
    },
    /// Underlying file I/O failed.
    #[error("signal I/O failed")]
    Io(#[from] std::io::Error),
    /// A CSV line could not be parsed.
    #[error("CSV parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
