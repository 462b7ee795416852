//! Candidate excitation signals for identification maneuvers.
//!
//! Represents sampled multi-channel control-deflection histories relative to
//! trim, generates the classic alternating pulse trains (3-2-1-1 and doublet)
//! with rate-limited transitions, approximates arbitrary signals as flight
//! computer step schedules, and imports/exports signals as CSV.

mod error;
mod generate;
mod io;
mod quantize;
mod signal;

pub use error::SignalError;
pub use generate::{gen_3211, gen_doublet, DEFAULT_RATE_LIMIT};
pub use io::{read_signal_csv, write_signal_csv};
pub use quantize::{quantize_to_fcc_steps, FccStep};
pub use signal::{
    merge_channels, truncate_for_safety, InputSignal, SampleGrid, SignalKind, SignalMetadata,
};
