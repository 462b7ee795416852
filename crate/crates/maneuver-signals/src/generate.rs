//! Generators for the classic alternating pulse trains.

use crate::error::SignalError;
use crate::signal::{InputSignal, SampleGrid, SignalKind, SignalMetadata};

/// Default deflection-rate bound of the demonstrator's actuators, rad/s.
pub const DEFAULT_RATE_LIMIT: f64 = 3.25;

/// Generates a 3-2-1-1 pulse train on one channel.
///
/// The ideal shape holds +A for 3 pulse widths, -A for 2, +A for 1, -A for 1,
/// then returns to zero; transitions are rate-limited ramps starting at the
/// nominal switch times.
pub fn gen_3211(
    label: &str,
    amplitude: f64,
    pulse_width: f64,
    start_time: f64,
    rate_limit: f64,
    grid: SampleGrid,
) -> Result<InputSignal, SignalError> {
    let targets = [
        (start_time, amplitude),
        (start_time + 3.0 * pulse_width, -amplitude),
        (start_time + 5.0 * pulse_width, amplitude),
        (start_time + 6.0 * pulse_width, -amplitude),
        (start_time + 7.0 * pulse_width, 0.0),
    ];
    follow_schedule(
        label,
        amplitude,
        pulse_width,
        start_time + 7.0 * pulse_width,
        rate_limit,
        grid,
        &targets,
        SignalKind::ThreeTwoOneOne,
    )
}

/// Generates a doublet (+A for one pulse width, -A for one) on one channel.
pub fn gen_doublet(
    label: &str,
    amplitude: f64,
    pulse_width: f64,
    start_time: f64,
    rate_limit: f64,
    grid: SampleGrid,
) -> Result<InputSignal, SignalError> {
    let targets = [
        (start_time, amplitude),
        (start_time + pulse_width, -amplitude),
        (start_time + 2.0 * pulse_width, 0.0),
    ];
    follow_schedule(
        label,
        amplitude,
        pulse_width,
        start_time + 2.0 * pulse_width,
        rate_limit,
        grid,
        &targets,
        SignalKind::Doublet,
    )
}

/// Tracks a piecewise-constant target schedule under a slope bound.
///
/// A target becomes active for the first sample whose midpoint-shifted time
/// t - h/2 has passed the switch instant, so an on-grid switch time takes
/// effect one sample later; the first sample is always zero.
#[allow(clippy::too_many_arguments)]
fn follow_schedule(
    label: &str,
    amplitude: f64,
    pulse_width: f64,
    end_time: f64,
    rate_limit: f64,
    grid: SampleGrid,
    targets: &[(f64, f64)],
    kind: SignalKind,
) -> Result<InputSignal, SignalError> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(SignalError::InvalidParameter {
            name: "amplitude",
            value: amplitude,
        });
    }
    if !(pulse_width.is_finite() && pulse_width > 0.0) {
        return Err(SignalError::InvalidParameter {
            name: "pulse_width",
            value: pulse_width,
        });
    }
    if !(start_of(targets).is_finite() && start_of(targets) >= 0.0) {
        return Err(SignalError::InvalidParameter {
            name: "start_time",
            value: start_of(targets),
        });
    }
    if rate_limit.is_nan() || rate_limit <= 0.0 {
        return Err(SignalError::InvalidParameter {
            name: "rate_limit",
            value: rate_limit,
        });
    }
    if end_time > grid.horizon() {
        return Err(SignalError::HorizonOverflow {
            needed_s: end_time,
            horizon_s: grid.horizon(),
        });
    }

    let h = grid.sample_period();
    let max_step = rate_limit * h;
    let mut samples = Vec::with_capacity(grid.len());
    let mut current = 0.0;
    for (k, t) in grid.times().enumerate() {
        if k > 0 {
            let mut target = 0.0;
            for &(switch_time, value) in targets {
                if t - h / 2.0 >= switch_time {
                    target = value;
                }
            }
            current += (target - current).clamp(-max_step, max_step);
        }
        samples.push(current);
    }

    InputSignal::new(
        h,
        vec![label.to_string()],
        vec![samples],
        SignalMetadata {
            kind,
            amplitude: Some(amplitude),
            pulse_width: Some(pulse_width),
        },
    )
}

fn start_of(targets: &[(f64, f64)]) -> f64 {
    targets.first().map(|&(t, _)| t).unwrap_or(0.0)
}
