//! Consistency between the nonlinear model and the small-perturbation LTI
//! models: central finite differences of the nonlinear right-hand side about
//! trim must reproduce every mapped derivative slot of the built matrices.

use flight_dynamics::{
    build_lateral_lti, build_longitudinal_lti, coefficients_from_dimensional, nonlinear_rhs,
    AeroModel, AirframeProperties, ControlSurfaces, DimensionalDerivatives, KinematicCoupling,
    LtiModel, MatrixSlot, RigidBodyState, TrimCondition,
};
use nalgebra::{DMatrix, SVector};
use proptest::prelude::*;

/// State indices of the longitudinal submodel in the nine-state vector.
const LON_STATES: [usize; 4] = [0, 2, 4, 7];
/// State indices of the lateral submodel.
const LAT_STATES: [usize; 4] = [1, 3, 6, 8];

struct Setup {
    aero: AeroModel,
    props: AirframeProperties,
    trim: TrimCondition,
}

fn setup() -> Setup {
    let props = AirframeProperties::default();
    let trim = TrimCondition::default();
    let aero = coefficients_from_dimensional(&DimensionalDerivatives::default(), &props, &trim)
        .expect("conversion");
    Setup { aero, props, trim }
}

/// Central-difference Jacobian of the nonlinear model about trim:
/// returns (d f / d state, d f / d controls) as 9x9 and 9x3.
fn fd_jacobian(setup: &Setup) -> (DMatrix<f64>, DMatrix<f64>) {
    let x0 = setup.trim.state().to_vector();
    let u0 = setup.trim.controls();
    let eval = |x: &SVector<f64, 9>, u: &ControlSurfaces| -> SVector<f64, 9> {
        nonlinear_rhs(&RigidBodyState::from_vector(x), u, &setup.aero, &setup.props).unwrap()
    };
    let h = 1e-6;
    let mut j_x = DMatrix::<f64>::zeros(9, 9);
    for col in 0..9 {
        let scale = x0[col].abs().max(1.0);
        let mut hi = x0;
        let mut lo = x0;
        hi[col] += h * scale;
        lo[col] -= h * scale;
        let diff = (eval(&hi, &u0) - eval(&lo, &u0)) / (2.0 * h * scale);
        for row in 0..9 {
            j_x[(row, col)] = diff[row];
        }
    }
    let mut j_u = DMatrix::<f64>::zeros(9, 3);
    for col in 0..3 {
        let mut hi = u0;
        let mut lo = u0;
        match col {
            0 => {
                hi.aileron += h;
                lo.aileron -= h;
            }
            1 => {
                hi.elevator += h;
                lo.elevator -= h;
            }
            _ => {
                hi.rudder += h;
                lo.rudder -= h;
            }
        }
        let diff = (eval(&x0, &hi) - eval(&x0, &lo)) / (2.0 * h);
        for row in 0..9 {
            j_u[(row, col)] = diff[row];
        }
    }
    (j_x, j_u)
}

/// Checks one model's mapped slots against the finite-difference truth.
fn assert_mapped_slots_match(
    model: &LtiModel,
    j_x: &DMatrix<f64>,
    j_u: &DMatrix<f64>,
    state_idx: &[usize; 4],
    input_idx: &[usize],
) {
    for entry in &model.parameter_map {
        let (built, truth) = match entry.matrix {
            MatrixSlot::A => (
                model.a[(entry.row, entry.col)],
                j_x[(state_idx[entry.row], state_idx[entry.col])],
            ),
            MatrixSlot::B => (
                model.b[(entry.row, entry.col)],
                j_u[(state_idx[entry.row], input_idx[entry.col])],
            ),
        };
        let tol = (0.01 * built.abs()).max(1e-6);
        assert!(
            (built - truth).abs() <= tol,
            "{} slot ({:?},{},{}): built {built}, finite-difference {truth}",
            entry.name,
            entry.matrix,
            entry.row,
            entry.col
        );
    }
}

#[test]
fn longitudinal_mapped_slots_match_finite_differences() {
    let s = setup();
    let model = build_longitudinal_lti(
        &DimensionalDerivatives::default(),
        &s.trim,
        s.props.gravity,
        KinematicCoupling::AtTrim,
    );
    let (j_x, j_u) = fd_jacobian(&s);
    assert_mapped_slots_match(&model, &j_x, &j_u, &LON_STATES, &[1]);
}

#[test]
fn lateral_mapped_slots_match_finite_differences() {
    let s = setup();
    let model = build_lateral_lti(
        &DimensionalDerivatives::default(),
        &s.trim,
        s.props.gravity,
        KinematicCoupling::AtTrim,
    );
    let (j_x, j_u) = fd_jacobian(&s);
    assert_mapped_slots_match(&model, &j_x, &j_u, &LAT_STATES, &[0, 2]);
}

#[test]
fn kinematic_gravity_slots_follow_the_flight_path_angle() {
    // The two longitudinal gravity slots are built with the pitch-attitude
    // convention; the true Jacobian uses the flight-path angle. Both are
    // kept out of the parameter map. Document the expected small offsets.
    let s = setup();
    let model = build_longitudinal_lti(
        &DimensionalDerivatives::default(),
        &s.trim,
        s.props.gravity,
        KinematicCoupling::AtTrim,
    );
    let (j_x, _) = fd_jacobian(&s);
    let gamma = s.trim.flight_path();

    // Airspeed-row slot: built -g*cos(theta_e), truth -g*cos(gamma_e).
    let built = model.a[(0, 2)];
    let truth = j_x[(LON_STATES[0], LON_STATES[2])];
    assert!((built - -9.81 * s.trim.pitch.cos()).abs() < 1e-12);
    assert!((truth - -9.81 * gamma.cos()).abs() < 1e-6);
    assert!((built - truth).abs() < 0.01 * built.abs());

    // Alpha-row slot: built -g*sin(theta_e)/V, truth -g*sin(gamma_e)/V.
    let built = model.a[(1, 2)];
    let truth = j_x[(LON_STATES[1], LON_STATES[2])];
    assert!((built - -9.81 * s.trim.pitch.sin() / 20.0).abs() < 1e-12);
    assert!((truth - -9.81 * gamma.sin() / 20.0).abs() < 1e-6);
    // Small absolute offset (both slots are ~0.04 1/s).
    assert!((built - truth).abs() < 5e-3);
}

#[test]
fn decoupled_roll_without_inertia_cross_term() {
    // With Jxz = 0 the roll acceleration reduces to (L - qr(Jz - Jy))/Jx.
    let s = setup();
    let props = AirframeProperties {
        inertia_xz: 0.0,
        ..s.props
    };
    let state = RigidBodyState {
        airspeed: 20.0,
        pitch_rate: 0.2,
        yaw_rate: -0.1,
        roll_rate: 0.05,
        ..s.trim.state()
    };
    let controls = ControlSurfaces {
        aileron: 0.05,
        elevator: s.trim.elevator,
        rudder: -0.02,
    };
    let dot = nonlinear_rhs(&state, &controls, &s.aero, &props).unwrap();
    let (_, moments) =
        flight_dynamics::aero_forces_moments(&state, &controls, &s.aero, &props).unwrap();
    let expected = (moments[0]
        - state.pitch_rate * state.yaw_rate * (props.inertia_z - props.inertia_y))
        / props.inertia_x;
    assert!((dot[6] - expected).abs() < 1e-12);
}

#[test]
fn euler_kinematics_are_quiet_at_zero_rates() {
    // With all body rates zero the Euler-angle rates vanish at any attitude.
    let s = setup();
    let state = RigidBodyState {
        airspeed: 20.0,
        roll: 0.3,
        pitch: -0.2,
        yaw: 1.0,
        ..RigidBodyState::default()
    };
    let dot = nonlinear_rhs(&state, &ControlSurfaces::default(), &s.aero, &s.props).unwrap();
    assert_eq!(dot[3], 0.0);
    assert_eq!(dot[4], 0.0);
    assert_eq!(dot[5], 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Affine map property: moving one named derivative changes exactly its
    /// mapped slots, linearly, by the mapped scale factor.
    #[test]
    fn parameter_map_is_affine(index in 0usize..25, delta in -2.0f64..2.0) {
        let derivs = DimensionalDerivatives::default();
        let trim = TrimCondition::default();
        let lon = build_longitudinal_lti(&derivs, &trim, 9.81, KinematicCoupling::AtTrim);
        let lat = build_lateral_lti(&derivs, &trim, 9.81, KinematicCoupling::AtTrim);
        let (model, entry_index) = if index < lon.parameter_map.len() {
            (lon, index)
        } else {
            let i = (index - lon.parameter_map.len()) % lat.parameter_map.len();
            (lat, i)
        };

        let entry = model.parameter_map[entry_index].clone();
        let mut moved = model.clone();
        moved.set_parameter(&entry.name, entry.value + delta).unwrap();

        // The named slot moved by scale * delta.
        let (before, after) = match entry.matrix {
            MatrixSlot::A => (model.a[(entry.row, entry.col)], moved.a[(entry.row, entry.col)]),
            MatrixSlot::B => (model.b[(entry.row, entry.col)], moved.b[(entry.row, entry.col)]),
        };
        prop_assert!((after - before - entry.scale * delta).abs() < 1e-12);

        // Every unmapped slot is untouched.
        let mapped: Vec<(MatrixSlot, usize, usize)> = model
            .parameter_map
            .iter()
            .filter(|e| e.name == entry.name)
            .map(|e| (e.matrix, e.row, e.col))
            .collect();
        for i in 0..model.a.nrows() {
            for j in 0..model.a.ncols() {
                if !mapped.contains(&(MatrixSlot::A, i, j)) {
                    prop_assert_eq!(model.a[(i, j)], moved.a[(i, j)]);
                }
            }
            for j in 0..model.b.ncols() {
                if !mapped.contains(&(MatrixSlot::B, i, j)) {
                    prop_assert_eq!(model.b[(i, j)], moved.b[(i, j)]);
                }
            }
        }
    }
}
