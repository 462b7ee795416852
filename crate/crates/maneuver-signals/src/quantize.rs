//! Step-schedule approximation of sampled signals.
//!
//! Flight computers in the target class deliver control demands as steps with
//! tunable amplitude and duration only. The quantizer places piece boundaries
//! at the midpoints of detected ramps, sets each piece to the sample mean over
//! its span (the L2-optimal constant given the boundaries), and merges pieces
//! shorter than the minimum step duration.

use serde::{Deserialize, Serialize};

use crate::error::SignalError;
use crate::signal::InputSignal;

/// One flight-computer step demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FccStep {
    pub channel: String,
    pub amplitude_deg: f64,
    pub duration_s: f64,
}

/// Approximates a signal as a piecewise-constant step schedule.
///
/// Returns the quantized signal on the original grid plus the step list
/// (channel by channel, in time order, durations summing to the horizon).
pub fn quantize_to_fcc_steps(
    signal: &InputSignal,
    min_step_duration: f64,
) -> Result<(InputSignal, Vec<FccStep>), SignalError> {
    let h = signal.sample_period();
    if !(min_step_duration.is_finite() && min_step_duration >= h) {
        return Err(SignalError::InvalidParameter {
            name: "min_step_duration",
            value: min_step_duration,
        });
    }
    let n = signal.len();
    let min_len = ((min_step_duration / h) - 1e-9).ceil().max(1.0) as usize;
    let min_len = min_len.min(n);

    let mut quantized = signal.clone();
    let mut schedule = Vec::new();
    for (label, samples) in signal.labels().iter().zip(signal.samples()) {
        let pieces = merge_short_pieces(split_at_ramp_midpoints(samples), min_len);
        let mut flat = vec![0.0; n];
        for &(start, len) in &pieces {
            let piece = &samples[start..start + len];
            // Constant pieces pass through exactly; averaging would drift ulps.
            let mean = if piece.iter().all(|v| *v == piece[0]) {
                piece[0]
            } else {
                piece.iter().sum::<f64>() / len as f64
            };
            flat[start..start + len].fill(mean);
            schedule.push(FccStep {
                channel: label.clone(),
                amplitude_deg: mean.to_degrees(),
                duration_s: len as f64 * h,
            });
        }
        quantized.set_channel(label, flat)?;
    }
    Ok((quantized, schedule))
}

/// Splits the sample range into pieces with boundaries at ramp midpoints.
/// Returns (start, len) pairs covering 0..n.
fn split_at_ramp_midpoints(samples: &[f64]) -> Vec<(usize, usize)> {
    const FLAT: f64 = 1e-12;
    let n = samples.len();
    let mut boundaries = vec![0usize];
    let mut k = 1;
    while k < n {
        if (samples[k] - samples[k - 1]).abs() > FLAT {
            // Extend the run of changing steps; the ramp spans samples
            // first-1 ..= last.
            let first = k;
            while k + 1 < n && (samples[k + 1] - samples[k]).abs() > FLAT {
                k += 1;
            }
            let boundary = (first + k + 1) / 2;
            if boundary > *boundaries.last().expect("non-empty") {
                boundaries.push(boundary);
            }
        }
        k += 1;
    }
    boundaries
        .iter()
        .zip(boundaries.iter().skip(1).chain(std::iter::once(&n)))
        .map(|(&start, &end)| (start, end - start))
        .collect()
}

/// Repeatedly merges pieces shorter than `min_len` samples into a neighbor
/// (the following piece, or the preceding one for the final piece).
fn merge_short_pieces(mut pieces: Vec<(usize, usize)>, min_len: usize) -> Vec<(usize, usize)> {
    loop {
        let Some(short) = pieces.iter().position(|&(_, len)| len < min_len) else {
            return pieces;
        };
        if pieces.len() == 1 {
            return pieces;
        }
        if short + 1 < pieces.len() {
            let absorbed = pieces.remove(short + 1);
            pieces[short].1 += absorbed.1;
        } else {
            let absorbed = pieces.remove(short);
            pieces[short - 1].1 += absorbed.1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{SampleGrid, SignalMetadata};

    fn signal_from(samples: Vec<f64>) -> InputSignal {
        InputSignal::new(
            0.01,
            vec!["elevator".to_string()],
            vec![samples],
            SignalMetadata::custom(),
        )
        .unwrap()
    }

    #[test]
    fn piecewise_constant_input_is_returned_unchanged() {
        let mut samples = vec![0.0; 100];
        samples[30..60].fill(0.05);
        samples[60..100].fill(-0.02);
        let signal = signal_from(samples);
        let (quantized, steps) = quantize_to_fcc_steps(&signal, 0.1).unwrap();
        assert_eq!(quantized, signal);
        assert_eq!(steps.len(), 3);
        assert!((steps[0].duration_s - 0.30).abs() < 1e-12);
        assert!((steps[1].amplitude_deg - 0.05_f64.to_degrees()).abs() < 1e-12);
        assert!((steps[2].duration_s - 0.40).abs() < 1e-12);
    }

    #[test]
    fn horizon_long_minimum_collapses_to_the_mean() {
        let samples: Vec<f64> = (0..200).map(|k| (k as f64 * 0.07).sin() * 0.1).collect();
        let signal = signal_from(samples.clone());
        let (quantized, steps) = quantize_to_fcc_steps(&signal, signal.horizon()).unwrap();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        assert_eq!(steps.len(), 1);
        assert!((steps[0].amplitude_deg - mean.to_degrees()).abs() < 1e-12);
        assert!(quantized
            .channel("elevator")
            .unwrap()
            .iter()
            .all(|v| (v - mean).abs() < 1e-15));
    }

    #[test]
    fn pieces_respect_the_minimum_duration() {
        // Fast stair-steps of 5 samples each, minimum 0.2 s = 20 samples.
        let mut samples = Vec::new();
        for step in 0..40 {
            samples.extend(std::iter::repeat(0.01 * (step % 5) as f64).take(5));
        }
        let signal = signal_from(samples);
        let (_, steps) = quantize_to_fcc_steps(&signal, 0.2).unwrap();
        for step in &steps {
            assert!(step.duration_s >= 0.2 - 1e-12, "short step {step:?}");
        }
        let total: f64 = steps.iter().map(|s| s.duration_s).sum();
        assert!((total - signal.horizon()).abs() < 1e-12);
    }

    #[test]
    fn ramp_boundary_lands_at_the_midpoint() {
        // 0 for 50 samples, ramp over 10 samples, 0.1 for 40 samples.
        let mut samples = vec![0.0; 50];
        for k in 1..=10 {
            samples.push(0.01 * k as f64);
        }
        samples.extend(std::iter::repeat(0.1).take(40));
        let signal = signal_from(samples);
        let (_, steps) = quantize_to_fcc_steps(&signal, 0.05).unwrap();
        assert_eq!(steps.len(), 2);
        // Changes at steps 50..=59, so the ramp spans samples 49..=59 and the
        // next piece starts at (50 + 59 + 1) / 2 = 55.
        assert!((steps[0].duration_s - 0.55).abs() < 1e-12);
        assert!((steps[1].duration_s - 0.45).abs() < 1e-12);
    }

    #[test]
    fn minimum_below_sample_period_is_rejected() {
        let signal = signal_from(vec![0.0; 50]);
        assert!(quantize_to_fcc_steps(&signal, 0.001).is_err());
        assert!(quantize_to_fcc_steps(&signal, 0.01).is_ok());
    }

    #[test]
    fn multi_channel_schedules_cover_each_channel() {
        let grid = SampleGrid::new(0.01, 100).unwrap();
        let mut signal = InputSignal::zeros(
            grid,
            vec!["aileron".to_string(), "rudder".to_string()],
            SignalMetadata::custom(),
        );
        let mut a = vec![0.0; 100];
        a[20..70].fill(0.03);
        signal.set_channel("aileron", a).unwrap();
        let (_, steps) = quantize_to_fcc_steps(&signal, 0.1).unwrap();
        let aileron_total: f64 = steps
            .iter()
            .filter(|s| s.channel == "aileron")
            .map(|s| s.duration_s)
            .sum();
        let rudder_steps = steps.iter().filter(|s| s.channel == "rudder").count();
        assert!((aileron_total - 1.0).abs() < 1e-12);
        assert_eq!(rudder_steps, 1);
    }
}
