//! Steady wings-level trim solving.
//!
//! A trim point is a wings-level equilibrium of the nonlinear model: sideslip,
//! bank, and all angular rates are structurally zero, which zeroes six of the
//! nine state derivatives identically. The remaining residuals (airspeed rate,
//! angle-of-attack rate, pitch acceleration) are driven to zero by a damped
//! Newton iteration over angle of attack, pitch attitude, and elevator.
//!
//! The aircraft glides unpowered, so the equilibrium at a given airspeed has a
//! specific descending flight-path angle. The solver either finds that angle
//! itself (`FlightPathMode::Free`) or accepts a prescribed one
//! (`FlightPathMode::Fixed`), in which case it verifies that the prescribed
//! path is actually flyable as an equilibrium.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::airframe::AirframeProperties;
use crate::coefficients::AeroModel;
use crate::error::TrimError;
use crate::model::nonlinear_rhs;
use crate::state::{ControlSurfaces, RigidBodyState};

/// Flight-path angle of the reference glide condition used throughout the
/// project: the pitch attitude sits 4.1 degrees below the angle of attack.
pub const REFERENCE_FLIGHT_PATH: f64 = -4.1 * std::f64::consts::PI / 180.0;

/// Reference trim airspeed, m/s.
pub const REFERENCE_AIRSPEED: f64 = 20.0;

/// How the flight-path angle (pitch attitude minus angle of attack) is
/// handled during trim solving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlightPathMode {
    /// Solve for the natural glide path together with the trim unknowns.
    Free,
    /// Prescribe the flight-path angle, rad. The solve fails with
    /// [`TrimError::NotEquilibrium`] if no equilibrium exists on that path.
    Fixed(f64),
}

impl Default for FlightPathMode {
    fn default() -> Self {
        FlightPathMode::Fixed(REFERENCE_FLIGHT_PATH)
    }
}

/// Steady wings-level equilibrium. All states not listed are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimCondition {
    /// Trim airspeed, m/s.
    pub airspeed: f64,
    /// Trim angle of attack, rad.
    pub alpha: f64,
    /// Trim pitch attitude, rad.
    pub pitch: f64,
    /// Trim elevator deflection, rad.
    pub elevator: f64,
    /// Flap setting, rad. Recorded for bookkeeping only; the sparse
    /// coefficient build-up has no flap term.
    pub flap: f64,
}

impl Default for TrimCondition {
    fn default() -> Self {
        // Reference glide condition: 20 m/s, alpha -0.4 deg, pitch -4.5 deg,
        // elevator -1.5 deg, flaps neutral.
        Self {
            airspeed: REFERENCE_AIRSPEED,
            alpha: -0.4_f64.to_radians(),
            pitch: -4.5_f64.to_radians(),
            elevator: -1.5_f64.to_radians(),
            flap: 0.0,
        }
    }
}

impl TrimCondition {
    /// Flight-path angle pitch - alpha, rad.
    pub fn flight_path(&self) -> f64 {
        self.pitch - self.alpha
    }

    /// Full nine-state vector of the trim point.
    pub fn state(&self) -> RigidBodyState {
        RigidBodyState {
            airspeed: self.airspeed,
            alpha: self.alpha,
            pitch: self.pitch,
            ..RigidBodyState::default()
        }
    }

    /// Control-surface deflections at trim.
    pub fn controls(&self) -> ControlSurfaces {
        ControlSurfaces {
            aileron: 0.0,
            elevator: self.elevator,
            rudder: 0.0,
        }
    }
}

const MAX_ITERATIONS: usize = 50;
const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Admissible trim ranges, rad: generous physical limits well beyond any
/// flyable glide condition.
const MAX_TRIM_ALPHA: f64 = 25.0 * std::f64::consts::PI / 180.0;
const MAX_TRIM_ELEVATOR: f64 = 30.0 * std::f64::consts::PI / 180.0;

/// Residuals (airspeed rate, alpha rate, pitch acceleration) at a candidate
/// wings-level point.
fn trim_residual(
    airspeed: f64,
    alpha: f64,
    pitch: f64,
    elevator: f64,
    aero: &AeroModel,
    props: &AirframeProperties,
) -> Result<Vector3<f64>, TrimError> {
    let state = RigidBodyState {
        airspeed,
        alpha,
        pitch,
        ..RigidBodyState::default()
    };
    let controls = ControlSurfaces {
        elevator,
        ..ControlSurfaces::default()
    };
    let dot = nonlinear_rhs(&state, &controls, aero, props)?;
    Ok(Vector3::new(dot[0], dot[2], dot[7]))
}

/// Solves for the steady wings-level trim at the given airspeed.
///
/// Damped Newton iteration from the zero initial guess, at most 50 steps,
/// residual tolerance 1e-10. On success, every component of the nonlinear
/// state derivative at the returned point is below 1e-9.
pub fn trim_solve(
    airspeed: f64,
    aero: &AeroModel,
    props: &AirframeProperties,
    flight_path: FlightPathMode,
) -> Result<TrimCondition, TrimError> {
    if !(airspeed > 0.0) {
        return Err(TrimError::NonPositiveAirspeed { airspeed });
    }
    props.validate()?;

    match flight_path {
        FlightPathMode::Free => solve_free(airspeed, aero, props),
        FlightPathMode::Fixed(gamma) => solve_fixed(airspeed, gamma, aero, props),
    }
}

/// Newton iteration over (alpha, pitch, elevator) against all three residuals.
fn solve_free(
    airspeed: f64,
    aero: &AeroModel,
    props: &AirframeProperties,
) -> Result<TrimCondition, TrimError> {
    let mut x = Vector3::new(0.0_f64, 0.0, 0.0); // (alpha, pitch, elevator)
    let mut residual = trim_residual(airspeed, x[0], x[1], x[2], aero, props)?;

    for iteration in 0..MAX_ITERATIONS {
        if residual.amax() < RESIDUAL_TOLERANCE {
            return finish(airspeed, x[0], x[1], x[2], aero, props, residual.amax());
        }
        // Central-difference Jacobian of the residual.
        let mut jac = Matrix3::<f64>::zeros();
        let step = 1e-6;
        for col in 0..3 {
            let mut hi = x;
            let mut lo = x;
            hi[col] += step;
            lo[col] -= step;
            let r_hi = trim_residual(airspeed, hi[0], hi[1], hi[2], aero, props)?;
            let r_lo = trim_residual(airspeed, lo[0], lo[1], lo[2], aero, props)?;
            jac.set_column(col, &((r_hi - r_lo) / (2.0 * step)));
        }
        let delta = jac
            .lu()
            .solve(&(-residual))
            .ok_or(TrimError::SingularJacobian { iteration })?;

        // Backtracking damping on the residual norm.
        let mut scale = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let candidate = x + scale * delta;
            if let Ok(r) = trim_residual(airspeed, candidate[0], candidate[1], candidate[2], aero, props) {
                if r.norm() < residual.norm() {
                    x = candidate;
                    residual = r;
                    advanced = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !advanced {
            return Err(TrimError::NoConvergence {
                residual: residual.amax(),
                iterations: iteration + 1,
            });
        }
    }
    if residual.amax() < RESIDUAL_TOLERANCE {
        return finish(airspeed, x[0], x[1], x[2], aero, props, residual.amax());
    }
    Err(TrimError::NoConvergence {
        residual: residual.amax(),
        iterations: MAX_ITERATIONS,
    })
}

/// Newton iteration over (alpha, elevator) with pitch tied to alpha by the
/// prescribed flight-path angle. Converges on the alpha-rate and pitch
///-acceleration residuals, then checks that the airspeed rate also vanished.
fn solve_fixed(
    airspeed: f64,
    gamma: f64,
    aero: &AeroModel,
    props: &AirframeProperties,
) -> Result<TrimCondition, TrimError> {
    let mut x = Vector2::new(0.0_f64, 0.0); // (alpha, elevator)
    let reduced = |v: &Vector2<f64>| -> Result<Vector3<f64>, TrimError> {
        trim_residual(airspeed, v[0], v[0] + gamma, v[1], aero, props)
    };
    let mut residual = reduced(&x)?;

    for iteration in 0..MAX_ITERATIONS {
        let pitch_axis = Vector2::new(residual[1], residual[2]);
        if pitch_axis.amax() < RESIDUAL_TOLERANCE {
            // Equilibrium requires the airspeed rate to vanish as well; on a
            // mismatched prescribed path it cannot.
            if residual[0].abs() > 1e-9 {
                return Err(TrimError::NotEquilibrium {
                    airspeed_rate: residual[0],
                });
            }
            return finish(airspeed, x[0], x[0] + gamma, x[1], aero, props, residual.amax());
        }
        let mut jac = Matrix2::<f64>::zeros();
        let step = 1e-6;
        for col in 0..2 {
            let mut hi = x;
            let mut lo = x;
            hi[col] += step;
            lo[col] -= step;
            let r_hi = reduced(&hi)?;
            let r_lo = reduced(&lo)?;
            jac[(0, col)] = (r_hi[1] - r_lo[1]) / (2.0 * step);
            jac[(1, col)] = (r_hi[2] - r_lo[2]) / (2.0 * step);
        }
        let delta = jac
            .lu()
            .solve(&-pitch_axis)
            .ok_or(TrimError::SingularJacobian { iteration })?;

        let mut scale = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let candidate = x + scale * delta;
            if let Ok(r) = reduced(&candidate) {
                if Vector2::new(r[1], r[2]).norm() < pitch_axis.norm() {
                    x = candidate;
                    residual = r;
                    advanced = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !advanced {
            return Err(TrimError::NoConvergence {
                residual: pitch_axis.amax(),
                iterations: iteration + 1,
            });
        }
    }
    Err(TrimError::NoConvergence {
        residual: Vector2::new(residual[1], residual[2]).amax(),
        iterations: MAX_ITERATIONS,
    })
}

/// Validates the converged point and packages it.
#[allow(clippy::too_many_arguments)]
fn finish(
    airspeed: f64,
    alpha: f64,
    pitch: f64,
    elevator: f64,
    aero: &AeroModel,
    props: &AirframeProperties,
    _residual: f64,
) -> Result<TrimCondition, TrimError> {
    if alpha.abs() > MAX_TRIM_ALPHA || elevator.abs() > MAX_TRIM_ELEVATOR {
        return Err(TrimError::OutOfRange { alpha, elevator });
    }
    // Double-check the full nine-component derivative, not just the reduced
    // residual: the wings-level structure must zero the other six exactly.
    let trim = TrimCondition {
        airspeed,
        alpha,
        pitch,
        elevator,
        flap: 0.0,
    };
    let dot = nonlinear_rhs(&trim.state(), &trim.controls(), aero, props)?;
    if dot.amax() >= 1e-9 {
        return Err(TrimError::NoConvergence {
            residual: dot.amax(),
            iterations: MAX_ITERATIONS,
        });
    }
    Ok(trim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::AeroCoefficients;
    use approx::assert_relative_eq;

    /// A toy symmetric model: zero pitching moment at alpha = 0 and zero
    /// axial force at the level condition, so the trim must be exactly
    /// (alpha, pitch, elevator) = 0 on a level path.
    fn symmetric_model() -> AeroModel {
        AeroModel {
            coefficients: AeroCoefficients {
                c_x_0: 0.0,
                c_z_0: -36.8 * 9.81 / 735.0, // lift balances weight at V = 20
                c_z_alpha: -4.5,
                c_m_alpha: -0.5,
                c_m_elevator: -0.8,
                ..AeroCoefficients::default()
            },
            airspeed_slopes: None,
        }
    }

    #[test]
    fn symmetric_airframe_trims_at_zero() {
        let props = AirframeProperties::default();
        let trim = trim_solve(20.0, &symmetric_model(), &props, FlightPathMode::Fixed(0.0))
            .expect("symmetric trim");
        assert_relative_eq!(trim.alpha, 0.0, epsilon = 1e-10);
        assert_relative_eq!(trim.pitch, 0.0, epsilon = 1e-10);
        assert_relative_eq!(trim.elevator, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn pitch_bias_shifts_elevator_by_moment_balance() {
        // A small pitch-moment bias moves the elevator by -C_m0 / C_m_elevator
        // to first order while alpha barely moves.
        let props = AirframeProperties::default();
        let mut model = symmetric_model();
        model.coefficients.c_m_0 = 0.008;
        let trim = trim_solve(20.0, &model, &props, FlightPathMode::Fixed(0.0))
            .expect("biased trim");
        let predicted = -0.008 / -0.8;
        assert_relative_eq!(trim.elevator, predicted, max_relative = 0.05);
    }

    #[test]
    fn mismatched_flight_path_is_rejected() {
        // The symmetric model glides level; demanding a steep descent cannot
        // be an equilibrium.
        let props = AirframeProperties::default();
        let steep = FlightPathMode::Fixed(-10.0_f64.to_radians());
        let result = trim_solve(20.0, &symmetric_model(), &props, steep);
        assert!(matches!(result, Err(TrimError::NotEquilibrium { .. })));
    }

    #[test]
    fn zero_airspeed_is_rejected() {
        let props = AirframeProperties::default();
        let result = trim_solve(0.0, &symmetric_model(), &props, FlightPathMode::Free);
        assert!(matches!(result, Err(TrimError::NonPositiveAirspeed { .. })));
    }
}
