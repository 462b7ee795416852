//! Flight dynamics core for excitation-maneuver design.
//!
//! This crate models a small unmanned fixed-wing aircraft for parameter
//! identification work. It provides:
//!
//! * the nonlinear nine-state rigid-body model with a sparse dimensionless
//!   aerodynamic coefficient build-up ([`model`], [`coefficients`]);
//! * steady wings-level trim solving ([`trim`]);
//! * construction of the decoupled longitudinal/lateral small-perturbation
//!   LTI models with a per-derivative parameter map, plus actuator-rate
//!   augmentation ([`linear`]);
//! * exact conversion between dimensional derivatives and dimensionless
//!   coefficients ([`convert`]);
//! * the JSON airframe definition format ([`schema`]).
//!
//! Internal units are SI with radians throughout; degrees appear only at
//! file boundaries.

pub mod airframe;
pub mod coefficients;
pub mod convert;
pub mod derivatives;
pub mod error;
pub mod linear;
pub mod model;
pub mod schema;
pub mod state;
pub mod trim;

pub use airframe::AirframeProperties;
pub use coefficients::{AeroCoefficients, AeroModel, AirspeedSlopes};
pub use convert::{coefficients_from_dimensional, dimensional_from_coefficients};
pub use derivatives::{
    DimensionalDerivatives, LateralDerivatives, LongitudinalDerivatives, FIXED_PARAMETERS,
    FREE_LATERAL, FREE_LONGITUDINAL,
};
pub use error::{DynamicsError, SchemaError, TrimError};
pub use linear::{
    augment_actuator_rate, build_lateral_lti, build_longitudinal_lti, KinematicCoupling, LtiModel,
    MatrixSlot, ParameterEntry, VariableKind,
};
pub use model::{aero_forces_moments, gravity_components, nonlinear_rhs};
pub use schema::{load_airframe, save_airframe, AirframeFile};
pub use state::{ControlSurfaces, RigidBodyState, STATE_LABELS};
pub use trim::{
    trim_solve, FlightPathMode, TrimCondition, REFERENCE_AIRSPEED, REFERENCE_FLIGHT_PATH,
};
