//! Cross-cutting signal properties: rate-limit compliance, quantization error
//! bounds, and safety truncation.

use maneuver_signals::{
    gen_3211, gen_doublet, quantize_to_fcc_steps, truncate_for_safety, InputSignal, SampleGrid,
    DEFAULT_RATE_LIMIT,
};
use proptest::prelude::*;

#[test]
fn quantization_error_is_bounded_by_the_ramp_triangles() {
    // Each rate-limited transition of height d, quantized with a boundary at
    // the ramp midpoint, contributes at most d^2 * (d / rate) / 3 of squared
    // L2 error (the exact midpoint value is d^3 / (12 rate)).
    let amplitude = 3.0_f64.to_radians();
    let rate = DEFAULT_RATE_LIMIT;
    let signal = gen_3211(
        "elevator",
        amplitude,
        0.5,
        1.0,
        rate,
        SampleGrid::default(),
    )
    .unwrap();
    let (quantized, steps) = quantize_to_fcc_steps(&signal, 0.05).unwrap();

    let h = signal.sample_period();
    let error: f64 = signal.samples()[0]
        .iter()
        .zip(&quantized.samples()[0])
        .map(|(u, q)| (u - q) * (u - q) * h)
        .sum();

    // Transition heights: A, 2A, 2A, 2A, A.
    let bound: f64 = [1.0, 2.0, 2.0, 2.0, 1.0]
        .iter()
        .map(|m| {
            let d = m * amplitude;
            d * d * (d / rate) / 3.0
        })
        .sum();
    assert!(error > 0.0);
    assert!(error <= bound, "error {error} exceeds bound {bound}");

    // The schedule covers the horizon.
    let total: f64 = steps.iter().map(|s| s.duration_s).sum();
    assert!((total - signal.horizon()).abs() < 1e-9);
}

#[test]
fn truncation_window_keeps_in_window_energy() {
    let signal = gen_3211(
        "elevator",
        0.05,
        0.5,
        1.0,
        DEFAULT_RATE_LIMIT,
        SampleGrid::default(),
    )
    .unwrap();
    let kept = truncate_for_safety(&signal, (0.0, 5.0)).unwrap();
    let h = signal.sample_period();
    let manual: f64 = signal.samples()[0]
        .iter()
        .enumerate()
        .filter(|(k, _)| *k as f64 * h <= 5.0 + 1e-12)
        .map(|(_, u)| u * u * h)
        .sum();
    assert!((kept.energy() - manual).abs() < 1e-15);

    let full = truncate_for_safety(&signal, (0.0, signal.horizon())).unwrap();
    assert_eq!(full, signal);
    let none = truncate_for_safety(&signal, (0.0, 0.0)).unwrap();
    assert_eq!(none.energy(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_trains_respect_the_rate_limit(
        amplitude_deg in 0.5f64..6.0,
        pulse_width in 0.2f64..1.2,
        start in 0.0f64..1.0,
        rate in 0.5f64..5.0,
        doublet in proptest::bool::ANY,
    ) {
        let grid = SampleGrid::default();
        let amplitude = amplitude_deg.to_radians();
        let signal = if doublet {
            gen_doublet("u", amplitude, pulse_width, start, rate, grid)
        } else {
            gen_3211("u", amplitude, pulse_width, start, rate, grid)
        }
        .unwrap();
        prop_assert!(signal.max_rate() <= rate + 1e-9);
        // Bounded by the commanded amplitude.
        let peak = signal.samples()[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(peak <= amplitude + 1e-12);
    }

    #[test]
    fn quantized_pieces_meet_the_minimum_duration(
        amplitude_deg in 0.5f64..6.0,
        pulse_width in 0.3f64..1.0,
        min_steps in 1usize..80,
    ) {
        let grid = SampleGrid::default();
        let signal = gen_3211(
            "u",
            amplitude_deg.to_radians(),
            pulse_width,
            1.0,
            DEFAULT_RATE_LIMIT,
            grid,
        )
        .unwrap();
        let min_duration = min_steps as f64 * signal.sample_period();
        let (quantized, steps) = quantize_to_fcc_steps(&signal, min_duration).unwrap();
        for step in &steps {
            prop_assert!(step.duration_s >= min_duration - 1e-9);
        }
        let total: f64 = steps.iter().map(|s| s.duration_s).sum();
        prop_assert!((total - signal.horizon()).abs() < 1e-9);
        // Quantized signal is piecewise constant with the scheduled values.
        prop_assert_eq!(quantized.len(), signal.len());
    }

    #[test]
    fn merged_channels_preserve_energy(
        a_deg in 0.5f64..4.0,
        r_deg in 0.5f64..4.0,
    ) {
        let grid = SampleGrid::default();
        let aileron = gen_3211("aileron", a_deg.to_radians(), 0.4, 1.0, DEFAULT_RATE_LIMIT, grid).unwrap();
        let rudder = gen_3211("rudder", r_deg.to_radians(), 0.5, 1.0, DEFAULT_RATE_LIMIT, grid).unwrap();
        let merged = maneuver_signals::merge_channels(&[aileron.clone(), rudder.clone()]).unwrap();
        prop_assert!((merged.energy() - aileron.energy() - rudder.energy()).abs() < 1e-12);
        prop_assert_eq!(merged.channel("rudder").unwrap(), rudder.channel("rudder").unwrap());
    }
}

#[test]
fn signals_reject_non_finite_values() {
    let err = InputSignal::new(
        0.01,
        vec!["u".to_string()],
        vec![vec![0.0, f64::INFINITY]],
        maneuver_signals::SignalMetadata::custom(),
    );
    assert!(err.is_err());
}
