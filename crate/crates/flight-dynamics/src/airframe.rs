//! Mass, geometry, and environment properties of the test aircraft.

use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;

/// Mass properties, reference geometry, and environment constants.
///
/// The default value describes the unmanned demonstrator used throughout this
/// project: a 36.8 kg fixed-wing aircraft trimmed at 20 m/s. Products of
/// inertia other than `inertia_xz` are zero by symmetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AirframeProperties {
    /// Total mass, kg.
    pub mass: f64,
    /// Roll inertia about the body x axis, kg m^2.
    pub inertia_x: f64,
    /// Pitch inertia about the body y axis, kg m^2.
    pub inertia_y: f64,
    /// Yaw inertia about the body z axis, kg m^2.
    pub inertia_z: f64,
    /// Roll/yaw product of inertia, kg m^2.
    pub inertia_xz: f64,
    /// Wing reference area, m^2.
    pub wing_area: f64,
    /// Wing span, m.
    pub wing_span: f64,
    /// Mean aerodynamic chord, m.
    pub mean_chord: f64,
    /// Air density, kg/m^3.
    pub air_density: f64,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
}

impl Default for AirframeProperties {
    fn default() -> Self {
        Self {
            mass: 36.8,
            inertia_x: 25.0,
            inertia_y: 32.0,
            inertia_z: 56.0,
            inertia_xz: 0.47,
            wing_area: 3.0,
            wing_span: 5.5,
            mean_chord: 0.55,
            air_density: 1.225,
            gravity: 9.81,
        }
    }
}

impl AirframeProperties {
    /// Dynamic pressure 0.5 * rho * V^2 at the given airspeed, Pa.
    pub fn dynamic_pressure(&self, airspeed: f64) -> f64 {
        0.5 * self.air_density * airspeed * airspeed
    }

    /// Determinant of the roll/yaw inertia submatrix, kg^2 m^4.
    pub fn roll_yaw_inertia_determinant(&self) -> f64 {
        self.inertia_x * self.inertia_z - self.inertia_xz * self.inertia_xz
    }

    /// Checks that every property that must be positive is, and that the
    /// roll/yaw inertia submatrix is invertible.
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let positive = [
            ("mass", self.mass),
            ("inertia_x", self.inertia_x),
            ("inertia_y", self.inertia_y),
            ("inertia_z", self.inertia_z),
            ("wing_area", self.wing_area),
            ("wing_span", self.wing_span),
            ("mean_chord", self.mean_chord),
            ("air_density", self.air_density),
            ("gravity", self.gravity),
        ];
        for (name, value) in positive {
            if !(value > 0.0) {
                return Err(DynamicsError::NonPositiveProperty { name, value });
            }
        }
        let determinant = self.roll_yaw_inertia_determinant();
        if determinant.abs() < 1e-12 {
            return Err(DynamicsError::SingularInertia { determinant });
        }
        Ok(())
    }
}
