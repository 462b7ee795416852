//! Conversion between dimensional derivatives and dimensionless coefficients.
//!
//! Moment derivatives convert by pure scale factors (dynamic pressure,
//! geometry, inertia). Force derivatives need more care: the dimensional
//! values live in the wind-axis airspeed/alpha rows of the linear models,
//! while the coefficients act along the body X/Z axes, so each column is
//! projected through the exact 2x2 wind-axis rotation at the trim angle of
//! attack. Three slots carry extra structure:
//!
//! * the pitch-rate column of the alpha row contains the kinematic +1
//!   (the dimensional `Z_q` is the full matrix entry, rate term included);
//! * the airspeed column maps onto the [`AirspeedSlopes`] extension, after
//!   removing the quadratic-dynamic-pressure and gravity trim terms that the
//!   nonlinear model produces on its own;
//! * the bias coefficients are anchored so the given trim point is an exact
//!   equilibrium of the nonlinear model.
//!
//! With that construction the finite-difference Jacobian of the nonlinear
//! model reproduces every mapped derivative slot of the linear models at
//! machine precision, and round-trips are exact.

use crate::airframe::AirframeProperties;
use crate::coefficients::{AeroCoefficients, AeroModel, AirspeedSlopes};
use crate::derivatives::{DimensionalDerivatives, LateralDerivatives, LongitudinalDerivatives};
use crate::error::DynamicsError;
use crate::trim::TrimCondition;

/// Shared conversion context at a trim point.
struct Context {
    qbar_s: f64,
    airspeed: f64,
    mass: f64,
    /// Wind-axis rotation [along-path; normal] from [X; Z] at trim alpha.
    cos_a: f64,
    sin_a: f64,
    /// Gravity component along the path at trim (airspeed-rate channel).
    gravity_along: f64,
    /// Gravity component normal to the path at trim (alpha-rate channel).
    gravity_normal: f64,
    /// Pitch-rate normalization c/(2V).
    k_pitch: f64,
    /// Roll/yaw-rate normalization b/(2V).
    k_roll: f64,
}

impl Context {
    fn new(props: &AirframeProperties, trim: &TrimCondition) -> Result<Self, DynamicsError> {
        if !(trim.airspeed > 0.0) {
            return Err(DynamicsError::NonPositiveAirspeed {
                airspeed: trim.airspeed,
            });
        }
        let gamma = trim.flight_path();
        Ok(Self {
            qbar_s: props.dynamic_pressure(trim.airspeed) * props.wing_area,
            airspeed: trim.airspeed,
            mass: props.mass,
            cos_a: trim.alpha.cos(),
            sin_a: trim.alpha.sin(),
            gravity_along: -props.gravity * gamma.sin(),
            gravity_normal: props.gravity * gamma.cos(),
            k_pitch: props.mean_chord / (2.0 * trim.airspeed),
            k_roll: props.wing_span / (2.0 * trim.airspeed),
        })
    }

    /// Solves the wind-axis projection for the (C_X, C_Z) pair that produces
    /// the given airspeed-rate and alpha-rate Jacobian targets.
    fn coefficients_from_targets(&self, vdot_target: f64, adot_target: f64) -> (f64, f64) {
        // R * [c_x; c_z] = [vdot * m / qS; adot * m * V / qS]
        // with R = [[cos a, sin a], [-sin a, cos a]]; R^-1 = R^T.
        let rhs0 = vdot_target * self.mass / self.qbar_s;
        let rhs1 = adot_target * self.mass * self.airspeed / self.qbar_s;
        (
            self.cos_a * rhs0 - self.sin_a * rhs1,
            self.sin_a * rhs0 + self.cos_a * rhs1,
        )
    }

    /// Inverse of [`Self::coefficients_from_targets`].
    fn targets_from_coefficients(&self, c_x: f64, c_z: f64) -> (f64, f64) {
        let rhs0 = self.cos_a * c_x + self.sin_a * c_z;
        let rhs1 = -self.sin_a * c_x + self.cos_a * c_z;
        (
            rhs0 * self.qbar_s / self.mass,
            rhs1 * self.qbar_s / (self.mass * self.airspeed),
        )
    }

    /// Primed lateral moment pair -> (C_l, C_n) pair.
    fn lateral_moments_from_primed(
        &self,
        props: &AirframeProperties,
        l_primed: f64,
        n_primed: f64,
    ) -> (f64, f64) {
        // Raw moments from primed: [L; N] = [[Jx, -Jxz], [-Jxz, Jz]] [L'; N'].
        let l_raw = props.inertia_x * l_primed - props.inertia_xz * n_primed;
        let n_raw = -props.inertia_xz * l_primed + props.inertia_z * n_primed;
        let scale = self.qbar_s * props.wing_span;
        (l_raw / scale, n_raw / scale)
    }

    /// Inverse of [`Self::lateral_moments_from_primed`].
    fn primed_from_lateral_moments(
        &self,
        props: &AirframeProperties,
        c_l: f64,
        c_n: f64,
    ) -> (f64, f64) {
        let scale = self.qbar_s * props.wing_span;
        let l_raw = c_l * scale;
        let n_raw = c_n * scale;
        let det = props.roll_yaw_inertia_determinant();
        (
            (props.inertia_z * l_raw + props.inertia_xz * n_raw) / det,
            (props.inertia_xz * l_raw + props.inertia_x * n_raw) / det,
        )
    }
}

/// Converts Tables-8/9-style dimensional derivatives into the dimensionless
/// coefficient model, anchoring the bias terms so the given trim is an exact
/// equilibrium.
///
/// Fails if the trim airspeed is not positive or if `M_V` is nonzero (the
/// sparse coefficient model has no pitch-moment airspeed slot).
pub fn coefficients_from_dimensional(
    derivs: &DimensionalDerivatives,
    props: &AirframeProperties,
    trim: &TrimCondition,
) -> Result<AeroModel, DynamicsError> {
    let ctx = Context::new(props, trim)?;
    let lon = &derivs.longitudinal;
    let lat = &derivs.lateral;
    if lon.m_v != 0.0 {
        return Err(DynamicsError::UnrepresentableDerivative {
            name: "M_V",
            value: lon.m_v,
        });
    }

    // Alpha and elevator columns: the wind-axis rotation and gravity extras
    // cancel exactly, so the targets are the table values themselves.
    let (c_x_alpha, c_z_alpha) = ctx.coefficients_from_targets(lon.x_alpha, lon.z_alpha_over_v);
    let (c_x_elevator, c_z_elevator) =
        ctx.coefficients_from_targets(lon.x_elevator, lon.z_elevator_over_v);

    // Pitch-rate column: remove the kinematic +1 from the alpha row, then
    // unscale the rate normalization.
    let (c_x_q, c_z_q) = ctx.coefficients_from_targets(
        lon.x_q / ctx.k_pitch,
        (lon.z_q - 1.0) / ctx.k_pitch,
    );

    // Airspeed column: the nonlinear model already produces the
    // quadratic-pressure and gravity terms 2*G_V(trim)/V and 2*G_alpha(trim)/V^2;
    // only the remainder maps onto the airspeed slopes.
    let v = ctx.airspeed;
    let (slope_x, slope_z) = ctx.coefficients_from_targets(
        (lon.x_v + 2.0 * ctx.gravity_along / v) * v,
        (lon.z_v + 2.0 * ctx.gravity_normal / (v * v)) * v,
    );

    // Pitch-moment row: pure scale by Jy / (qS c), rate column unscaled too.
    let moment_scale = props.inertia_y / (ctx.qbar_s * props.mean_chord);
    let c_m_alpha = lon.m_alpha * moment_scale;
    let c_m_q = lon.m_q * moment_scale / ctx.k_pitch;
    let c_m_elevator = lon.m_elevator * moment_scale;

    // Bias anchoring: trim force balance rotated into body axes, then the
    // linear terms subtracted; pitch moment balances to zero at trim.
    let (c_x_trim, c_z_trim) = {
        let rhs0 = -ctx.gravity_along * ctx.mass / ctx.qbar_s;
        let rhs1 = -ctx.gravity_normal * ctx.mass / ctx.qbar_s;
        (
            ctx.cos_a * rhs0 - ctx.sin_a * rhs1,
            ctx.sin_a * rhs0 + ctx.cos_a * rhs1,
        )
    };
    let c_x_0 = c_x_trim - c_x_alpha * trim.alpha - c_x_elevator * trim.elevator;
    let c_z_0 = c_z_trim - c_z_alpha * trim.alpha - c_z_elevator * trim.elevator;
    let c_m_0 = -c_m_alpha * trim.alpha - c_m_elevator * trim.elevator;

    // Lateral force row: plain scales (the beta/deflection slots are stored
    // per unit airspeed, the rate slots carry the rate normalization).
    let force_scale = ctx.mass / ctx.qbar_s;
    let c_y_beta = lat.y_beta_over_v * force_scale * v;
    let c_y_p = lat.y_p * force_scale / ctx.k_roll;
    let c_y_r = lat.y_r * force_scale / ctx.k_roll;
    let c_y_aileron = lat.y_aileron_over_v * force_scale * v;
    let c_y_rudder = lat.y_rudder_over_v * force_scale * v;

    // Lateral moment rows: unprime, then scale; rate columns unscale b/(2V).
    let (c_l_beta, c_n_beta) = ctx.lateral_moments_from_primed(props, lat.l_beta, lat.n_beta);
    let (c_l_p, c_n_p) =
        ctx.lateral_moments_from_primed(props, lat.l_p / ctx.k_roll, lat.n_p / ctx.k_roll);
    let (c_l_r, c_n_r) =
        ctx.lateral_moments_from_primed(props, lat.l_r / ctx.k_roll, lat.n_r / ctx.k_roll);
    let (c_l_aileron, c_n_aileron) =
        ctx.lateral_moments_from_primed(props, lat.l_aileron, lat.n_aileron);
    let (c_l_rudder, c_n_rudder) =
        ctx.lateral_moments_from_primed(props, lat.l_rudder, lat.n_rudder);

    Ok(AeroModel {
        coefficients: AeroCoefficients {
            c_x_0,
            c_x_alpha,
            c_x_q,
            c_x_elevator,
            c_z_0,
            c_z_alpha,
            c_z_q,
            c_z_elevator,
            c_m_0,
            c_m_alpha,
            c_m_q,
            c_m_elevator,
            c_y_beta,
            c_y_p,
            c_y_r,
            c_y_aileron,
            c_y_rudder,
            c_l_beta,
            c_l_p,
            c_l_r,
            c_l_aileron,
            c_l_rudder,
            c_n_beta,
            c_n_p,
            c_n_r,
            c_n_aileron,
            c_n_rudder,
        },
        airspeed_slopes: Some(AirspeedSlopes {
            slope_x,
            slope_z,
            reference_airspeed: v,
        }),
    })
}

/// Converts a coefficient model back into dimensional derivatives at the
/// given trim. Exact inverse of [`coefficients_from_dimensional`].
pub fn dimensional_from_coefficients(
    aero: &AeroModel,
    props: &AirframeProperties,
    trim: &TrimCondition,
) -> Result<DimensionalDerivatives, DynamicsError> {
    let ctx = Context::new(props, trim)?;
    let c = &aero.coefficients;
    let v = ctx.airspeed;

    let (x_alpha, z_alpha_over_v) = ctx.targets_from_coefficients(c.c_x_alpha, c.c_z_alpha);
    let (x_elevator, z_elevator_over_v) =
        ctx.targets_from_coefficients(c.c_x_elevator, c.c_z_elevator);
    let (xq_scaled, zq_scaled) = ctx.targets_from_coefficients(c.c_x_q, c.c_z_q);
    let x_q = xq_scaled * ctx.k_pitch;
    let z_q = zq_scaled * ctx.k_pitch + 1.0;

    let (slope_x, slope_z) = match &aero.airspeed_slopes {
        Some(slopes) => (slopes.slope_x, slopes.slope_z),
        None => (0.0, 0.0),
    };
    let (xv_scaled, zv_scaled) = ctx.targets_from_coefficients(slope_x, slope_z);
    let x_v = xv_scaled / v - 2.0 * ctx.gravity_along / v;
    let z_v = zv_scaled / v - 2.0 * ctx.gravity_normal / (v * v);

    let moment_scale = props.inertia_y / (ctx.qbar_s * props.mean_chord);
    let m_alpha = c.c_m_alpha / moment_scale;
    let m_q = c.c_m_q / moment_scale * ctx.k_pitch;
    let m_elevator = c.c_m_elevator / moment_scale;

    let force_scale = ctx.mass / ctx.qbar_s;
    let y_beta_over_v = c.c_y_beta / (force_scale * v);
    let y_p = c.c_y_p * ctx.k_roll / force_scale;
    let y_r = c.c_y_r * ctx.k_roll / force_scale;
    let y_aileron_over_v = c.c_y_aileron / (force_scale * v);
    let y_rudder_over_v = c.c_y_rudder / (force_scale * v);

    let (l_beta, n_beta) = ctx.primed_from_lateral_moments(props, c.c_l_beta, c.c_n_beta);
    let (l_p_scaled, n_p_scaled) = ctx.primed_from_lateral_moments(props, c.c_l_p, c.c_n_p);
    let (l_r_scaled, n_r_scaled) = ctx.primed_from_lateral_moments(props, c.c_l_r, c.c_n_r);
    let (l_aileron, n_aileron) =
        ctx.primed_from_lateral_moments(props, c.c_l_aileron, c.c_n_aileron);
    let (l_rudder, n_rudder) = ctx.primed_from_lateral_moments(props, c.c_l_rudder, c.c_n_rudder);

    Ok(DimensionalDerivatives {
        longitudinal: LongitudinalDerivatives {
            x_v,
            x_alpha,
            x_q,
            x_elevator,
            z_v,
            z_alpha_over_v,
            z_q,
            z_elevator_over_v,
            m_v: 0.0,
            m_alpha,
            m_q,
            m_elevator,
        },
        lateral: LateralDerivatives {
            y_beta_over_v,
            y_p,
            y_r,
            y_aileron_over_v,
            y_rudder_over_v,
            l_beta,
            l_p: l_p_scaled * ctx.k_roll,
            l_r: l_r_scaled * ctx.k_roll,
            l_aileron,
            l_rudder,
            n_beta,
            n_p: n_p_scaled * ctx.k_roll,
            n_r: n_r_scaled * ctx.k_roll,
            n_aileron,
            n_rudder,
        },
    })
}
