//! Nonlinear nine-state rigid-body equations of motion.
//!
//! Translational dynamics are written in wind axes (airspeed, sideslip,
//! angle of attack), rotational dynamics in body axes with a symmetric-plane
//! inertia tensor whose only product of inertia is `J_xz`. The roll and yaw
//! accelerations couple through `J_xz`; they are recovered exactly by
//! solving the 2x2 inertia system rather than by fixed-point substitution.

use nalgebra::SVector;

use crate::airframe::AirframeProperties;
use crate::coefficients::AeroModel;
use crate::error::DynamicsError;
use crate::state::{ControlSurfaces, RigidBodyState};

/// Angles closer than this to a kinematic singularity (cos -> 0) are
/// rejected instead of producing huge, meaningless derivatives.
const SINGULARITY_COS_LIMIT: f64 = 1e-6;

/// Gravity components along the wind axes (V_T, beta, alpha channels), m/s^2.
///
/// These are the projections of the gravity vector onto the directions that
/// drive the airspeed, sideslip, and angle-of-attack rates.
pub fn gravity_components(state: &RigidBodyState, gravity: f64) -> [f64; 3] {
    let (sin_a, cos_a) = state.alpha.sin_cos();
    let (sin_b, cos_b) = state.sideslip.sin_cos();
    let (sin_phi, cos_phi) = state.roll.sin_cos();
    let (sin_th, cos_th) = state.pitch.sin_cos();

    let g_v = gravity * (sin_b * sin_phi * sin_th - cos_a * cos_b * sin_th
        + sin_a * cos_b * cos_phi * cos_th);
    let g_beta = gravity
        * (cos_a * sin_b * sin_th + cos_b * sin_phi * cos_th - sin_a * sin_b * cos_phi * cos_th);
    let g_alpha = gravity * (sin_a * sin_th + cos_a * cos_phi * cos_th);
    [g_v, g_beta, g_alpha]
}

/// Dimensional aerodynamic forces (X, Y, Z), N, and moments (L, M, N), N m,
/// in body axes at the given state and control deflections.
pub fn aero_forces_moments(
    state: &RigidBodyState,
    controls: &ControlSurfaces,
    aero: &AeroModel,
    props: &AirframeProperties,
) -> Result<([f64; 3], [f64; 3]), DynamicsError> {
    if !(state.airspeed > 0.0) {
        return Err(DynamicsError::NonPositiveAirspeed {
            airspeed: state.airspeed,
        });
    }
    let v = state.airspeed;
    let p_hat = props.wing_span * state.roll_rate / (2.0 * v);
    let q_hat = props.mean_chord * state.pitch_rate / (2.0 * v);
    let r_hat = props.wing_span * state.yaw_rate / (2.0 * v);
    let [c_x, c_y, c_z, c_l, c_m, c_n] = aero.evaluate(
        v,
        state.sideslip,
        state.alpha,
        p_hat,
        q_hat,
        r_hat,
        controls.aileron,
        controls.elevator,
        controls.rudder,
    );
    let qbar_s = props.dynamic_pressure(v) * props.wing_area;
    let forces = [qbar_s * c_x, qbar_s * c_y, qbar_s * c_z];
    let moments = [
        qbar_s * props.wing_span * c_l,
        qbar_s * props.mean_chord * c_m,
        qbar_s * props.wing_span * c_n,
    ];
    Ok((forces, moments))
}

/// Time derivative of the nine-state vector at the given state and controls.
pub fn nonlinear_rhs(
    state: &RigidBodyState,
    controls: &ControlSurfaces,
    aero: &AeroModel,
    props: &AirframeProperties,
) -> Result<SVector<f64, 9>, DynamicsError> {
    let (forces, moments) = aero_forces_moments(state, controls, aero, props)?;
    let [force_x, force_y, force_z] = forces;
    let [moment_l, moment_m, moment_n] = moments;

    let (sin_a, cos_a) = state.alpha.sin_cos();
    let (sin_b, cos_b) = state.sideslip.sin_cos();
    let (sin_phi, cos_phi) = state.roll.sin_cos();
    let cos_th = state.pitch.cos();
    if cos_b.abs() < SINGULARITY_COS_LIMIT {
        return Err(DynamicsError::KinematicSingularity {
            which: "sideslip",
            angle: state.sideslip,
        });
    }
    if cos_th.abs() < SINGULARITY_COS_LIMIT {
        return Err(DynamicsError::KinematicSingularity {
            which: "pitch",
            angle: state.pitch,
        });
    }
    let tan_th = state.pitch.tan();
    let sec_th = 1.0 / cos_th;

    let [g_v, g_beta, g_alpha] = gravity_components(state, props.gravity);
    let v = state.airspeed;
    let m = props.mass;
    let (p, q, r) = (state.roll_rate, state.pitch_rate, state.yaw_rate);

    let airspeed_dot =
        (force_y * sin_b + force_x * cos_a * cos_b + force_z * cos_b * sin_a) / m + g_v;
    let sideslip_dot = (force_y * cos_b - force_x * cos_a * sin_b - force_z * sin_a * sin_b)
        / (m * v)
        + g_beta / v
        - r * cos_a
        + p * sin_a;
    let alpha_dot = (force_z * cos_a - force_x * sin_a) / (m * v * cos_b)
        + g_alpha / (v * cos_b)
        + (q * cos_b - (p * cos_a + r * sin_a) * sin_b) / cos_b;

    let roll_dot = p + r * cos_phi * tan_th + q * sin_phi * tan_th;
    let pitch_dot = q * cos_phi - r * sin_phi;
    let yaw_dot = sec_th * (q * sin_phi + r * cos_phi);

    // Roll/yaw accelerations: solve the coupled 2x2 inertia system
    //   [ J_x  -J_xz ] [p_dot]   [L - q r (J_z - J_y) + q p J_xz]
    //   [-J_xz  J_z  ] [r_dot] = [N - p q (J_y - J_x) - q r J_xz]
    let (jx, jy, jz, jxz) = (
        props.inertia_x,
        props.inertia_y,
        props.inertia_z,
        props.inertia_xz,
    );
    let determinant = props.roll_yaw_inertia_determinant();
    if determinant.abs() < 1e-12 {
        return Err(DynamicsError::SingularInertia { determinant });
    }
    let roll_torque = moment_l - q * r * (jz - jy) + q * p * jxz;
    let yaw_torque = moment_n - p * q * (jy - jx) - q * r * jxz;
    let roll_rate_dot = (jz * roll_torque + jxz * yaw_torque) / determinant;
    let yaw_rate_dot = (jxz * roll_torque + jx * yaw_torque) / determinant;
    let pitch_rate_dot =
        (-p * r * (jx - jz) - (p * p - r * r) * jxz + moment_m) / jy;

    Ok(SVector::<f64, 9>::from([
        airspeed_dot,
        sideslip_dot,
        alpha_dot,
        roll_dot,
        pitch_dot,
        yaw_dot,
        roll_rate_dot,
        pitch_rate_dot,
        yaw_rate_dot,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn level_state() -> RigidBodyState {
        RigidBodyState {
            airspeed: 20.0,
            ..RigidBodyState::default()
        }
    }

    #[test]
    fn gravity_components_level_flight() {
        // Wings level at zero attitude: gravity acts purely along the
        // angle-of-attack channel.
        let g = gravity_components(&level_state(), 9.81);
        assert_relative_eq!(g[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-15);
        assert_relative_eq!(g[2], 9.81, epsilon = 1e-15);
    }

    #[test]
    fn gravity_components_reduce_to_path_angle_form_at_zero_bank() {
        // With beta = phi = 0 the components collapse to
        // g*sin(alpha - theta) and g*cos(alpha - theta).
        let state = RigidBodyState {
            alpha: -0.4_f64.to_radians(),
            pitch: -4.5_f64.to_radians(),
            ..level_state()
        };
        let g = gravity_components(&state, 9.81);
        let gamma = state.pitch - state.alpha;
        assert_relative_eq!(g[0], -9.81 * gamma.sin(), epsilon = 1e-12);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-15);
        assert_relative_eq!(g[2], 9.81 * gamma.cos(), epsilon = 1e-12);
    }

    #[test]
    fn zero_airspeed_is_rejected() {
        let state = RigidBodyState::default();
        let result = nonlinear_rhs(
            &state,
            &ControlSurfaces::default(),
            &AeroModel::default(),
            &AirframeProperties::default(),
        );
        assert!(matches!(
            result,
            Err(DynamicsError::NonPositiveAirspeed { .. })
        ));
    }

    #[test]
    fn near_vertical_pitch_is_rejected() {
        let state = RigidBodyState {
            pitch: std::f64::consts::FRAC_PI_2,
            ..level_state()
        };
        let result = nonlinear_rhs(
            &state,
            &ControlSurfaces::default(),
            &AeroModel::default(),
            &AirframeProperties::default(),
        );
        assert!(matches!(
            result,
            Err(DynamicsError::KinematicSingularity { which: "pitch", .. })
        ));
    }

    #[test]
    fn roll_yaw_coupling_solves_inertia_system_exactly() {
        // With pure roll moment applied, the cross product of inertia must
        // induce a yaw acceleration satisfying the 2x2 inertia system.
        let props = AirframeProperties::default();
        let aero = AeroModel {
            coefficients: crate::coefficients::AeroCoefficients {
                c_l_aileron: -0.2,
                ..Default::default()
            },
            airspeed_slopes: None,
        };
        let controls = ControlSurfaces {
            aileron: 0.1,
            ..ControlSurfaces::default()
        };
        let dot = nonlinear_rhs(&level_state(), &controls, &aero, &props).unwrap();
        let qbar_sb = 245.0 * 3.0 * 5.5;
        let torque = qbar_sb * (-0.2) * 0.1;
        // Check the inertia system residual instead of re-deriving the solve.
        let residual_roll = props.inertia_x * dot[6] - props.inertia_xz * dot[8] - torque;
        let residual_yaw = -props.inertia_xz * dot[6] + props.inertia_z * dot[8];
        assert_relative_eq!(residual_roll, 0.0, epsilon = 1e-9);
        assert_relative_eq!(residual_yaw, 0.0, epsilon = 1e-9);
    }
}
