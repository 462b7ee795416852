//! Constrained optimal design of excitation maneuvers.
//!
//! Given a rate-augmented linear flight-dynamics model, a sensor suite, and
//! the envelope limits of the test aircraft, this crate searches for the
//! surface deflection history that minimizes the scaled A-criterion of the
//! parameter covariance: the average squared relative uncertainty predicted
//! by the Fisher information of the experiment. Designs are parameterized by
//! piecewise-constant surface rates on a coarse control grid, which keeps
//! every candidate realizable by a rate-limited actuator, and the flight
//! condition is boxed by per-state design bounds held safely inside the
//! flight envelope.
//!
//! The entry point is [`solve_oed`], which validates an [`OedProblem`],
//! reduces it to precomputed quadratic forms, and runs a multistart
//! augmented-Lagrangian search. [`bang_bang_metric`] scores how much of the
//! time a design holds the flight condition against its limits.

pub mod bang_bang;
pub mod constraints;
pub mod error;
pub mod problem;
pub mod solve;
pub mod transcribe;

pub use bang_bang::{bang_bang_metric, CONTACT_BAND};
pub use constraints::{EnvelopeConstraints, VariableBounds, DEFAULT_SAFETY_MARGIN};
pub use error::OedError;
pub use problem::{GradientMode, OedProblem, DEFAULT_CONTROL_PERIOD, DEFAULT_HORIZON};
pub use solve::{solve_oed, OedSolution, SolveStatus};
pub use transcribe::{Multipliers, Transcription, FEASIBILITY_TOLERANCE};
