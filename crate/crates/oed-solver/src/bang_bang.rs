//! Constraint-activity metric for optimized designs.
//!
//! Informative designs push the flight condition against whatever limits the
//! problem imposes; a design that never touches a bound is leaving excitation
//! on the table. The metric scores a multi-channel signal against a set of
//! envelope constraints: the fraction of time samples at which at least one
//! constrained channel sits within two percent of one of its design bounds.

use maneuver_signals::InputSignal;

use crate::constraints::EnvelopeConstraints;

/// Relative half-width of the band around each bound that counts as contact.
pub const CONTACT_BAND: f64 = 0.02;

/// Fraction of samples at which any constrained channel of `signal` lies
/// within `CONTACT_BAND` times the bound magnitude of one of its design
/// bounds. Channels without a matching constraint entry are ignored; a signal
/// with no constrained channels scores zero.
pub fn bang_bang_metric(signal: &InputSignal, constraints: &EnvelopeConstraints) -> f64 {
    let mut bounded: Vec<(&[f64], f64, f64)> = Vec::new();
    for label in signal.labels() {
        if let Some((lower, upper)) = constraints.design_bounds(label) {
            let channel = signal.channel(label).expect("label comes from signal");
            bounded.push((channel, lower, upper));
        }
    }
    if bounded.is_empty() {
        return 0.0;
    }
    let samples = signal.len();
    let mut hits = 0usize;
    for k in 0..samples {
        let near = bounded.iter().any(|(channel, lower, upper)| {
            let x = channel[k];
            x <= lower + CONTACT_BAND * lower.abs() || x >= upper - CONTACT_BAND * upper.abs()
        });
        if near {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}
