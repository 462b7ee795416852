//! Mode characteristics of small-perturbation flight-dynamics models.
//!
//! Eigen-decomposes the state matrix of a linear model, folds conjugate roots
//! into oscillatory modes, and derives the handbook quantities for each mode:
//! natural frequency, damping ratio, time constant, overshoot, and oscillation
//! period. For the two canonical 4-state models the modes are also labeled
//! (Phugoid, Short period, Dutch roll, Roll subsidence, Spiral).

mod error;
mod report;

pub use error::ModalError;
pub use report::{modal_report, ModeCharacteristics, ModeLabel};
