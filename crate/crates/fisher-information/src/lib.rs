//! Information content of identification maneuvers.
//!
//! Simulates linear models with exact zero-order-hold discretization,
//! propagates output sensitivities with respect to the mapped derivatives,
//! assembles the Fisher information matrix under a Gaussian sensor model, and
//! derives the design-quality measures built on it: parameter covariance,
//! Cramer-Rao lower bounds, the A-criterion, identifiability diagnostics,
//! design comparisons, and a Monte-Carlo validation of the bound.

mod error;
mod monte_carlo;
mod report;
mod sensor;
mod zoh;

pub use error::InformationError;
pub use monte_carlo::{monte_carlo_crlb_check, MonteCarloReport};
pub use report::{
    compare_designs, fisher_matrix, information_report, DesignComparison, InformationReport,
};
pub use sensor::SensorModel;
pub use zoh::{
    input_matrix, sensitivity_trajectories, simulate_lti, SensitivitySet, StateTrajectory,
    ZohPropagator,
};
