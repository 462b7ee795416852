//! Mode regression for the demonstrator airframe: the default derivative set
//! must reproduce the reference modal characteristics, and the report must
//! satisfy its spectral invariants.

use flight_dynamics::{
    build_lateral_lti, build_longitudinal_lti, DimensionalDerivatives, KinematicCoupling,
    TrimCondition,
};
use modal_analysis::{modal_report, ModeCharacteristics, ModeLabel};
use nalgebra::DMatrix;

fn classic_models() -> (flight_dynamics::LtiModel, flight_dynamics::LtiModel) {
    let derivs = DimensionalDerivatives::default();
    let trim = TrimCondition::default();
    (
        build_longitudinal_lti(&derivs, &trim, 9.81, KinematicCoupling::LevelFlightClassic),
        build_lateral_lti(&derivs, &trim, 9.81, KinematicCoupling::LevelFlightClassic),
    )
}

fn find(modes: &[ModeCharacteristics], label: ModeLabel) -> &ModeCharacteristics {
    modes
        .iter()
        .find(|m| m.label == label)
        .unwrap_or_else(|| panic!("missing {label:?}"))
}

fn assert_rel(actual: f64, expected: f64, rel: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= rel * expected.abs(),
        "{what}: {actual} vs {expected} (rel {rel})"
    );
}

#[test]
fn longitudinal_modes_match_reference() {
    let (lon, _) = classic_models();
    let modes = modal_report(&lon).unwrap();
    assert_eq!(modes.len(), 2);

    let phugoid = find(&modes, ModeLabel::Phugoid);
    assert_rel(phugoid.natural_frequency, 0.511_889_710, 1e-6, "phugoid wn");
    assert_rel(phugoid.damping_ratio.unwrap(), 0.086_240_162, 1e-6, "phugoid damping");
    // Reference report rounds to (0.52, 0.09); stay within 5%.
    assert_rel(phugoid.natural_frequency, 0.52, 0.05, "phugoid wn band");
    assert_rel(phugoid.damping_ratio.unwrap(), 0.09, 0.05, "phugoid damping band");
    assert!(phugoid.stable);

    let short_period = find(&modes, ModeLabel::ShortPeriod);
    assert_rel(short_period.natural_frequency, 3.725_872_306, 1e-6, "short-period wn");
    assert_rel(short_period.damping_ratio.unwrap(), 0.835_470_003, 1e-6, "short-period damping");
    assert_rel(short_period.natural_frequency, 3.72, 0.02, "short-period wn band");
    assert_rel(short_period.damping_ratio.unwrap(), 0.84, 0.02, "short-period damping band");
    assert!(short_period.stable);
}

#[test]
fn lateral_modes_match_reference() {
    let (_, lat) = classic_models();
    let modes = modal_report(&lat).unwrap();
    assert_eq!(modes.len(), 3);

    let dutch_roll = find(&modes, ModeLabel::DutchRoll);
    assert_rel(dutch_roll.natural_frequency, 2.100_423_996, 1e-6, "dutch-roll wn");
    assert_rel(dutch_roll.damping_ratio.unwrap(), 0.210_957_388, 1e-6, "dutch-roll damping");
    assert_rel(dutch_roll.natural_frequency, 2.09, 0.02, "dutch-roll wn band");
    assert_rel(dutch_roll.damping_ratio.unwrap(), 0.21, 0.02, "dutch-roll damping band");
    assert!(dutch_roll.stable);

    let roll = find(&modes, ModeLabel::RollSubsidence);
    assert_rel(roll.natural_frequency, 11.116_170_821, 1e-6, "roll wn");
    assert_rel(roll.natural_frequency, 11.12, 0.02, "roll wn band");
    assert_rel(roll.time_constant, 0.09, 0.02, "roll time-constant band");
    assert_eq!(roll.damping_ratio, Some(1.0));
    assert!(roll.stable);

    let spiral = find(&modes, ModeLabel::Spiral);
    assert!(!spiral.stable);
    assert!((spiral.eigenvalue.re - 0.086_370_742).abs() < 1e-6);
    assert_rel(spiral.time_constant, 11.577_994_798, 1e-6, "spiral time constant");
    assert_rel(spiral.time_constant, 11.74, 0.05, "spiral time-constant band");
    assert_eq!(spiral.damping_ratio, None);

    // Exactly the spiral diverges.
    let unstable: Vec<_> = modes.iter().filter(|m| !m.stable).collect();
    assert_eq!(unstable.len(), 1);
    assert_eq!(unstable[0].label, ModeLabel::Spiral);
}

#[test]
fn eigenvalue_sum_matches_trace() {
    let (lon, lat) = classic_models();
    for model in [&lon, &lat] {
        let modes = modal_report(model).unwrap();
        let sum: f64 = modes.iter().map(|m| m.eigenvalue_sum()).sum();
        assert!((sum - model.a.trace()).abs() < 1e-10);
    }
}

#[test]
fn classification_is_invariant_to_state_permutation() {
    // A similarity transform permutes the spectrum's discovery order but not
    // the spectrum; the labeled report must not change.
    let (lon, _) = classic_models();
    let n = lon.a.nrows();
    let mut p = DMatrix::<f64>::zeros(n, n);
    for (i, j) in [(0usize, 3usize), (1, 2), (2, 0), (3, 1)] {
        p[(i, j)] = 1.0;
    }
    let mut shuffled = lon.clone();
    shuffled.a = &p * &lon.a * p.transpose();

    let base = modal_report(&lon).unwrap();
    let moved = modal_report(&shuffled).unwrap();
    assert_eq!(base.len(), moved.len());
    for (a, b) in base.iter().zip(moved.iter()) {
        assert_eq!(a.label, b.label);
        assert!((a.natural_frequency - b.natural_frequency).abs() < 1e-9);
        assert!(
            (a.damping_ratio.unwrap() - b.damping_ratio.unwrap()).abs() < 1e-9,
            "damping mismatch"
        );
    }
}

#[test]
fn trim_referenced_flavor_classifies_identically() {
    let derivs = DimensionalDerivatives::default();
    let trim = TrimCondition::default();
    let lon = build_longitudinal_lti(&derivs, &trim, 9.81, KinematicCoupling::AtTrim);
    let lat = build_lateral_lti(&derivs, &trim, 9.81, KinematicCoupling::AtTrim);

    let lon_modes = modal_report(&lon).unwrap();
    assert_eq!(lon_modes.len(), 2);
    assert_eq!(lon_modes[0].label, ModeLabel::Phugoid);
    assert_eq!(lon_modes[1].label, ModeLabel::ShortPeriod);

    let lat_modes = modal_report(&lat).unwrap();
    let spiral = find(&lat_modes, ModeLabel::Spiral);
    assert!(!spiral.stable, "spiral stays lightly divergent at trim");
    // The flavors agree closely on the fast modes.
    let sp = find(&lon_modes, ModeLabel::ShortPeriod);
    assert_rel(sp.natural_frequency, 3.711_731_971, 1e-6, "at-trim short-period wn");
    let dr = find(&lat_modes, ModeLabel::DutchRoll);
    assert_rel(dr.natural_frequency, 2.136_160_038, 1e-6, "at-trim dutch-roll wn");
}
