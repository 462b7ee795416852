//! Airframe definition file (`airframe.schema`): a JSON document carrying
//! the physical properties, reference trim, and dimensional derivatives.
//!
//! Keys mirror the conventional symbol names (`m`, `Jx`, `cbar`, `X_V`,
//! `Lp_prime`, ...). Angles are degrees in the file and radians in memory;
//! everything else is SI.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::airframe::AirframeProperties;
use crate::derivatives::DimensionalDerivatives;
use crate::error::SchemaError;
use crate::trim::TrimCondition;

fn default_air_density() -> f64 {
    1.225
}

fn default_gravity() -> f64 {
    9.81
}

/// Trim block of the airframe file, angles in degrees.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrimRecord {
    #[serde(rename = "V_Te")]
    pub airspeed: f64,
    #[serde(rename = "alpha_e_deg")]
    pub alpha_deg: f64,
    #[serde(rename = "theta_e_deg")]
    pub pitch_deg: f64,
    #[serde(rename = "deltae_e_deg")]
    pub elevator_deg: f64,
    #[serde(rename = "flap_deg", default)]
    pub flap_deg: f64,
}

/// On-disk airframe document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AirframeFile {
    #[serde(rename = "m")]
    pub mass: f64,
    #[serde(rename = "Jx")]
    pub inertia_x: f64,
    #[serde(rename = "Jy")]
    pub inertia_y: f64,
    #[serde(rename = "Jz")]
    pub inertia_z: f64,
    #[serde(rename = "Jxz")]
    pub inertia_xz: f64,
    #[serde(rename = "S")]
    pub wing_area: f64,
    #[serde(rename = "b")]
    pub wing_span: f64,
    #[serde(rename = "cbar")]
    pub mean_chord: f64,
    #[serde(rename = "rho", default = "default_air_density")]
    pub air_density: f64,
    #[serde(rename = "g", default = "default_gravity")]
    pub gravity: f64,
    pub trim: TrimRecord,
    pub derivatives: DimensionalDerivatives,
}

impl AirframeFile {
    /// Builds the document from in-memory types.
    pub fn from_parts(
        props: &AirframeProperties,
        trim: &TrimCondition,
        derivatives: &DimensionalDerivatives,
    ) -> Self {
        Self {
            mass: props.mass,
            inertia_x: props.inertia_x,
            inertia_y: props.inertia_y,
            inertia_z: props.inertia_z,
            inertia_xz: props.inertia_xz,
            wing_area: props.wing_area,
            wing_span: props.wing_span,
            mean_chord: props.mean_chord,
            air_density: props.air_density,
            gravity: props.gravity,
            trim: TrimRecord {
                airspeed: trim.airspeed,
                alpha_deg: trim.alpha.to_degrees(),
                pitch_deg: trim.pitch.to_degrees(),
                elevator_deg: trim.elevator.to_degrees(),
                flap_deg: trim.flap.to_degrees(),
            },
            derivatives: *derivatives,
        }
    }

    /// Splits the document into validated in-memory types.
    pub fn into_parts(
        self,
    ) -> Result<(AirframeProperties, TrimCondition, DimensionalDerivatives), SchemaError> {
        let props = AirframeProperties {
            mass: self.mass,
            inertia_x: self.inertia_x,
            inertia_y: self.inertia_y,
            inertia_z: self.inertia_z,
            inertia_xz: self.inertia_xz,
            wing_area: self.wing_area,
            wing_span: self.wing_span,
            mean_chord: self.mean_chord,
            air_density: self.air_density,
            gravity: self.gravity,
        };
        props.validate()?;
        let trim = TrimCondition {
            airspeed: self.trim.airspeed,
            alpha: self.trim.alpha_deg.to_radians(),
            pitch: self.trim.pitch_deg.to_radians(),
            elevator: self.trim.elevator_deg.to_radians(),
            flap: self.trim.flap_deg.to_radians(),
        };
        Ok((props, trim, self.derivatives))
    }

    /// The built-in reference airframe document.
    pub fn reference() -> Self {
        Self::from_parts(
            &AirframeProperties::default(),
            &TrimCondition::default(),
            &DimensionalDerivatives::default(),
        )
    }
}

/// Loads and validates an airframe file.
pub fn load_airframe(
    path: &Path,
) -> Result<(AirframeProperties, TrimCondition, DimensionalDerivatives), SchemaError> {
    let text = std::fs::read_to_string(path)?;
    let file: AirframeFile = serde_json::from_str(&text)?;
    file.into_parts()
}

/// Writes an airframe file with stable, human-reviewable formatting.
pub fn save_airframe(path: &Path, file: &AirframeFile) -> Result<(), SchemaError> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
