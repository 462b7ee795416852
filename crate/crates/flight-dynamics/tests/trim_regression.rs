//! Trim solving against the reference glide condition.

use approx::assert_relative_eq;
use flight_dynamics::{
    coefficients_from_dimensional, gravity_components, nonlinear_rhs, trim_solve,
    AirframeProperties, DimensionalDerivatives, FlightPathMode, TrimCondition,
};

fn reference_model() -> (
    flight_dynamics::AeroModel,
    AirframeProperties,
    TrimCondition,
) {
    let props = AirframeProperties::default();
    let trim = TrimCondition::default();
    let aero = coefficients_from_dimensional(&DimensionalDerivatives::default(), &props, &trim)
        .expect("conversion");
    (aero, props, trim)
}

#[test]
fn free_trim_solve_reproduces_reference_condition() {
    let (aero, props, reference) = reference_model();
    let start = std::time::Instant::now();
    let trim = trim_solve(20.0, &aero, &props, FlightPathMode::Free).expect("trim");
    let elapsed = start.elapsed();

    // Published condition: alpha -0.4 deg, pitch -4.5 deg, elevator -1.5 deg,
    // required within 0.3 deg; the anchored conversion makes it exact.
    let tol = 0.3_f64.to_radians();
    assert!((trim.alpha - reference.alpha).abs() < tol);
    assert!((trim.pitch - reference.pitch).abs() < tol);
    assert!((trim.elevator - reference.elevator).abs() < tol);
    assert_relative_eq!(trim.alpha, reference.alpha, epsilon = 1e-9);
    assert_relative_eq!(trim.pitch, reference.pitch, epsilon = 1e-9);
    assert_relative_eq!(trim.elevator, reference.elevator, epsilon = 1e-9);

    // The natural glide path comes out of the free solve.
    assert_relative_eq!(trim.flight_path(), -4.1_f64.to_radians(), epsilon = 1e-9);
    assert!(elapsed.as_secs_f64() < 1.0, "trim took {elapsed:?}");
}

#[test]
fn fixed_path_mode_agrees_with_free_mode() {
    let (aero, props, _) = reference_model();
    let free = trim_solve(20.0, &aero, &props, FlightPathMode::Free).unwrap();
    let fixed = trim_solve(20.0, &aero, &props, FlightPathMode::default()).unwrap();
    assert_relative_eq!(free.alpha, fixed.alpha, epsilon = 1e-9);
    assert_relative_eq!(free.pitch, fixed.pitch, epsilon = 1e-9);
    assert_relative_eq!(free.elevator, fixed.elevator, epsilon = 1e-9);
}

#[test]
fn trim_point_zeroes_all_nine_derivatives() {
    let (aero, props, _) = reference_model();
    let trim = trim_solve(20.0, &aero, &props, FlightPathMode::Free).unwrap();
    let dot = nonlinear_rhs(&trim.state(), &trim.controls(), &aero, &props).unwrap();
    for i in 0..9 {
        assert!(dot[i].abs() < 1e-9, "component {i} = {}", dot[i]);
    }
}

#[test]
fn gravity_triple_at_reference_trim() {
    // Frozen from direct evaluation of the gravity projections at the trim
    // attitude: (+0.701389928904, 0, +9.784894080553).
    let trim = TrimCondition::default();
    let g = gravity_components(&trim.state(), 9.81);
    assert_relative_eq!(g[0], 0.701389928904, epsilon = 1e-10);
    assert_relative_eq!(g[1], 0.0, epsilon = 1e-15);
    assert_relative_eq!(g[2], 9.784894080553, epsilon = 1e-10);
}

#[test]
fn trim_scales_with_airspeed() {
    // At a different airspeed the same coefficient model still trims, at a
    // different alpha (lift coefficient must rise as dynamic pressure drops).
    let (aero, props, _) = reference_model();
    let slow = trim_solve(17.0, &aero, &props, FlightPathMode::Free).expect("trim at 17");
    let fast = trim_solve(23.0, &aero, &props, FlightPathMode::Free).expect("trim at 23");
    assert!(slow.alpha > fast.alpha);
    let dot = nonlinear_rhs(&slow.state(), &slow.controls(), &aero, &props).unwrap();
    assert!(dot.amax() < 1e-9);
}
