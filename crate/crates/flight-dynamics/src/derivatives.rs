//! Dimensional stability and control derivatives of the decoupled
//! small-perturbation models.
//!
//! The longitudinal set populates the 4-state (airspeed, alpha, pitch,
//! pitch-rate) model, the lateral set the 4-state (sideslip, roll, roll-rate,
//! yaw-rate) model. Lateral moment derivatives are stored in primed form,
//! i.e. with the roll/yaw inertia coupling already folded in. Some slots are
//! stored pre-divided by the trim airspeed (suffix `_over_v`), matching how
//! they enter the state matrices.
//!
//! Defaults are the a-priori values for the reference airframe at 20 m/s.
//! `M_V` and `Y_p` default to exactly zero and are flagged fixed: they never
//! enter estimation or experiment design.

use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;

/// Longitudinal dimensional derivatives.
///
/// Serialized keys mirror the conventional symbols (`X_V`, `Z_alpha_over_V`,
/// ...), which is also how parameters are named in reports and maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LongitudinalDerivatives {
    #[serde(rename = "X_V")]
    pub x_v: f64,
    #[serde(rename = "X_alpha")]
    pub x_alpha: f64,
    #[serde(rename = "X_q")]
    pub x_q: f64,
    #[serde(rename = "X_deltae")]
    pub x_elevator: f64,
    #[serde(rename = "Z_V")]
    pub z_v: f64,
    #[serde(rename = "Z_alpha_over_V")]
    pub z_alpha_over_v: f64,
    #[serde(rename = "Z_q")]
    pub z_q: f64,
    #[serde(rename = "Z_deltae_over_V")]
    pub z_elevator_over_v: f64,
    #[serde(rename = "M_V")]
    pub m_v: f64,
    #[serde(rename = "M_alpha")]
    pub m_alpha: f64,
    #[serde(rename = "M_q")]
    pub m_q: f64,
    #[serde(rename = "M_deltae")]
    pub m_elevator: f64,
}

impl Default for LongitudinalDerivatives {
    fn default() -> Self {
        Self {
            x_v: -0.147,
            x_alpha: 7.920,
            x_q: -0.163,
            x_elevator: -0.232,
            z_v: -0.060,
            z_alpha_over_v: -4.400,
            z_q: 0.896,
            z_elevator_over_v: -0.283,
            m_v: 0.0,
            m_alpha: -6.180,
            m_q: -1.767,
            m_elevator: -10.668,
        }
    }
}

/// Lateral-directional dimensional derivatives, moments in primed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LateralDerivatives {
    #[serde(rename = "Y_beta_over_V")]
    pub y_beta_over_v: f64,
    #[serde(rename = "Y_p")]
    pub y_p: f64,
    #[serde(rename = "Y_r")]
    pub y_r: f64,
    #[serde(rename = "Y_deltaa_over_V")]
    pub y_aileron_over_v: f64,
    #[serde(rename = "Y_deltar_over_V")]
    pub y_rudder_over_v: f64,
    #[serde(rename = "Lb_prime")]
    pub l_beta: f64,
    #[serde(rename = "Lp_prime")]
    pub l_p: f64,
    #[serde(rename = "Lr_prime")]
    pub l_r: f64,
    #[serde(rename = "Lda_prime")]
    pub l_aileron: f64,
    #[serde(rename = "Ldr_prime")]
    pub l_rudder: f64,
    #[serde(rename = "Nb_prime")]
    pub n_beta: f64,
    #[serde(rename = "Np_prime")]
    pub n_p: f64,
    #[serde(rename = "Nr_prime")]
    pub n_r: f64,
    #[serde(rename = "Nda_prime")]
    pub n_aileron: f64,
    #[serde(rename = "Ndr_prime")]
    pub n_rudder: f64,
}

impl Default for LateralDerivatives {
    fn default() -> Self {
        Self {
            y_beta_over_v: -0.167,
            y_p: 0.0,
            y_r: -0.976,
            y_aileron_over_v: -0.046,
            y_rudder_over_v: 0.093,
            l_beta: -8.201,
            l_p: -11.292,
            l_r: 3.853,
            l_aileron: -32.600,
            l_rudder: 0.524,
            n_beta: 3.214,
            n_p: -0.750,
            n_r: -0.457,
            n_aileron: 0.716,
            n_rudder: -2.370,
        }
    }
}

/// Complete derivative set for both decoupled models.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DimensionalDerivatives {
    #[serde(flatten)]
    pub longitudinal: LongitudinalDerivatives,
    #[serde(flatten)]
    pub lateral: LateralDerivatives,
}

/// Parameters that are fixed at zero and excluded from estimation.
pub const FIXED_PARAMETERS: [&str; 2] = ["M_V", "Y_p"];

/// Canonical name list of the free longitudinal parameters, in model order.
pub const FREE_LONGITUDINAL: [&str; 11] = [
    "X_V",
    "X_alpha",
    "X_q",
    "X_deltae",
    "Z_V",
    "Z_alpha_over_V",
    "Z_q",
    "Z_deltae_over_V",
    "M_alpha",
    "M_q",
    "M_deltae",
];

/// Canonical name list of the free lateral parameters, in model order.
pub const FREE_LATERAL: [&str; 14] = [
    "Y_beta_over_V",
    "Y_r",
    "Y_deltaa_over_V",
    "Y_deltar_over_V",
    "Lb_prime",
    "Lp_prime",
    "Lr_prime",
    "Lda_prime",
    "Ldr_prime",
    "Nb_prime",
    "Np_prime",
    "Nr_prime",
    "Nda_prime",
    "Ndr_prime",
];

impl DimensionalDerivatives {
    /// Looks up a derivative by its canonical name.
    pub fn get(&self, name: &str) -> Result<f64, DynamicsError> {
        let lon = &self.longitudinal;
        let lat = &self.lateral;
        let value = match name {
            "X_V" => lon.x_v,
            "X_alpha" => lon.x_alpha,
            "X_q" => lon.x_q,
            "X_deltae" => lon.x_elevator,
            "Z_V" => lon.z_v,
            "Z_alpha_over_V" => lon.z_alpha_over_v,
            "Z_q" => lon.z_q,
            "Z_deltae_over_V" => lon.z_elevator_over_v,
            "M_V" => lon.m_v,
            "M_alpha" => lon.m_alpha,
            "M_q" => lon.m_q,
            "M_deltae" => lon.m_elevator,
            "Y_beta_over_V" => lat.y_beta_over_v,
            "Y_p" => lat.y_p,
            "Y_r" => lat.y_r,
            "Y_deltaa_over_V" => lat.y_aileron_over_v,
            "Y_deltar_over_V" => lat.y_rudder_over_v,
            "Lb_prime" => lat.l_beta,
            "Lp_prime" => lat.l_p,
            "Lr_prime" => lat.l_r,
            "Lda_prime" => lat.l_aileron,
            "Ldr_prime" => lat.l_rudder,
            "Nb_prime" => lat.n_beta,
            "Np_prime" => lat.n_p,
            "Nr_prime" => lat.n_r,
            "Nda_prime" => lat.n_aileron,
            "Ndr_prime" => lat.n_rudder,
            _ => {
                return Err(DynamicsError::UnknownParameter {
                    name: name.to_string(),
                })
            }
        };
        Ok(value)
    }

    /// Overwrites a derivative by its canonical name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), DynamicsError> {
        let lon = &mut self.longitudinal;
        let lat = &mut self.lateral;
        let slot = match name {
            "X_V" => &mut lon.x_v,
            "X_alpha" => &mut lon.x_alpha,
            "X_q" => &mut lon.x_q,
            "X_deltae" => &mut lon.x_elevator,
            "Z_V" => &mut lon.z_v,
            "Z_alpha_over_V" => &mut lon.z_alpha_over_v,
            "Z_q" => &mut lon.z_q,
            "Z_deltae_over_V" => &mut lon.z_elevator_over_v,
            "M_V" => &mut lon.m_v,
            "M_alpha" => &mut lon.m_alpha,
            "M_q" => &mut lon.m_q,
            "M_deltae" => &mut lon.m_elevator,
            "Y_beta_over_V" => &mut lat.y_beta_over_v,
            "Y_p" => &mut lat.y_p,
            "Y_r" => &mut lat.y_r,
            "Y_deltaa_over_V" => &mut lat.y_aileron_over_v,
            "Y_deltar_over_V" => &mut lat.y_rudder_over_v,
            "Lb_prime" => &mut lat.l_beta,
            "Lp_prime" => &mut lat.l_p,
            "Lr_prime" => &mut lat.l_r,
            "Lda_prime" => &mut lat.l_aileron,
            "Ldr_prime" => &mut lat.l_rudder,
            "Nb_prime" => &mut lat.n_beta,
            "Np_prime" => &mut lat.n_p,
            "Nr_prime" => &mut lat.n_r,
            "Nda_prime" => &mut lat.n_aileron,
            "Ndr_prime" => &mut lat.n_rudder,
            _ => {
                return Err(DynamicsError::UnknownParameter {
                    name: name.to_string(),
                })
            }
        };
        *slot = value;
        Ok(())
    }
}
