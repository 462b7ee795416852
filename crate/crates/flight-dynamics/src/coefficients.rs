//! Dimensionless aerodynamic coefficient model.
//!
//! The force and moment build-up is deliberately sparse: each coefficient
//! carries exactly the terms of the identification model and nothing else.
//! Longitudinal coefficients depend on angle of attack, normalized pitch
//! rate, and elevator; lateral-directional coefficients on sideslip,
//! normalized roll and yaw rate, aileron, and rudder. Terms outside this
//! pattern are structurally absent rather than merely zero, so a coefficient
//! set can never smuggle in cross-axis couplings.

use serde::{Deserialize, Serialize};

/// Dimensionless stability and control derivatives plus the longitudinal
/// bias terms. Angular-rate terms multiply the normalized rates
/// `p*b/(2V)`, `q*c/(2V)`, `r*b/(2V)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AeroCoefficients {
    // Axial force: C_X = C_X0 + C_X_alpha*alpha + C_X_q*q_hat + C_X_elevator*de.
    pub c_x_0: f64,
    pub c_x_alpha: f64,
    pub c_x_q: f64,
    pub c_x_elevator: f64,

    // Normal force: same structure as C_X.
    pub c_z_0: f64,
    pub c_z_alpha: f64,
    pub c_z_q: f64,
    pub c_z_elevator: f64,

    // Pitch moment: same structure as C_X.
    pub c_m_0: f64,
    pub c_m_alpha: f64,
    pub c_m_q: f64,
    pub c_m_elevator: f64,

    // Side force: C_Y = C_Y_beta*beta + C_Y_p*p_hat + C_Y_r*r_hat
    //                 + C_Y_aileron*da + C_Y_rudder*dr. No bias by symmetry.
    pub c_y_beta: f64,
    pub c_y_p: f64,
    pub c_y_r: f64,
    pub c_y_aileron: f64,
    pub c_y_rudder: f64,

    // Roll moment: same structure as C_Y.
    pub c_l_beta: f64,
    pub c_l_p: f64,
    pub c_l_r: f64,
    pub c_l_aileron: f64,
    pub c_l_rudder: f64,

    // Yaw moment: same structure as C_Y.
    pub c_n_beta: f64,
    pub c_n_p: f64,
    pub c_n_r: f64,
    pub c_n_aileron: f64,
    pub c_n_rudder: f64,
}

/// Optional linear airspeed dependence of the axial- and normal-force
/// coefficients about a reference airspeed:
///
/// `C_X += slope_x * (V - reference_airspeed) / reference_airspeed`
///
/// and likewise for `C_Z`. The speed-damping rows of the linear longitudinal
/// model (the airspeed column) cannot be reproduced by the sparse
/// coefficient build-up alone, because that build-up has no airspeed term
/// beyond the dynamic-pressure factor. These two slopes close the gap so the
/// nonlinear model linearizes to the same airspeed column, which keeps
/// nonlinear replays of optimized maneuvers honest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirspeedSlopes {
    /// d(C_X)/d(V/V_ref), dimensionless.
    pub slope_x: f64,
    /// d(C_Z)/d(V/V_ref), dimensionless.
    pub slope_z: f64,
    /// Reference airspeed the slopes are anchored to, m/s.
    pub reference_airspeed: f64,
}

/// Complete aerodynamic model: sparse coefficient build-up plus the optional
/// airspeed slopes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AeroModel {
    pub coefficients: AeroCoefficients,
    pub airspeed_slopes: Option<AirspeedSlopes>,
}

impl AeroModel {
    /// Evaluates the six dimensionless coefficients
    /// (C_X, C_Y, C_Z, C_l, C_m, C_n) at the given flow state and controls.
    ///
    /// `p_hat`, `q_hat`, `r_hat` are the normalized angular rates; `airspeed`
    /// only matters when airspeed slopes are present.
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate(
        &self,
        airspeed: f64,
        sideslip: f64,
        alpha: f64,
        p_hat: f64,
        q_hat: f64,
        r_hat: f64,
        aileron: f64,
        elevator: f64,
        rudder: f64,
    ) -> [f64; 6] {
        let c = &self.coefficients;
        let mut c_x = c.c_x_0 + c.c_x_alpha * alpha + c.c_x_q * q_hat + c.c_x_elevator * elevator;
        let mut c_z = c.c_z_0 + c.c_z_alpha * alpha + c.c_z_q * q_hat + c.c_z_elevator * elevator;
        if let Some(slopes) = &self.airspeed_slopes {
            let relative = (airspeed - slopes.reference_airspeed) / slopes.reference_airspeed;
            c_x += slopes.slope_x * relative;
            c_z += slopes.slope_z * relative;
        }
        let c_m = c.c_m_0 + c.c_m_alpha * alpha + c.c_m_q * q_hat + c.c_m_elevator * elevator;
        let c_y = c.c_y_beta * sideslip
            + c.c_y_p * p_hat
            + c.c_y_r * r_hat
            + c.c_y_aileron * aileron
            + c.c_y_rudder * rudder;
        let c_l = c.c_l_beta * sideslip
            + c.c_l_p * p_hat
            + c.c_l_r * r_hat
            + c.c_l_aileron * aileron
            + c.c_l_rudder * rudder;
        let c_n = c.c_n_beta * sideslip
            + c.c_n_p * p_hat
            + c.c_n_r * r_hat
            + c.c_n_aileron * aileron
            + c.c_n_rudder * rudder;
        [c_x, c_y, c_z, c_l, c_m, c_n]
    }
}
