//! Sampled multi-channel control signals on a uniform grid.

use serde::{Deserialize, Serialize};

use crate::error::SignalError;

/// Uniform sample grid: period and sample count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    sample_period: f64,
    samples: usize,
}

impl SampleGrid {
    /// Builds a grid, validating the period.
    pub fn new(sample_period: f64, samples: usize) -> Result<Self, SignalError> {
        if !(sample_period.is_finite() && sample_period > 0.0) {
            return Err(SignalError::InvalidParameter {
                name: "sample_period",
                value: sample_period,
            });
        }
        if samples < 2 {
            return Err(SignalError::InvalidParameter {
                name: "samples",
                value: samples as f64,
            });
        }
        Ok(Self {
            sample_period,
            samples,
        })
    }

    /// Sample spacing, s.
    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.samples
    }

    /// True for an empty grid (never constructible; kept for API hygiene).
    pub fn is_empty(&self) -> bool {
        self.samples == 0
    }

    /// Time span covered by the grid, s.
    pub fn horizon(&self) -> f64 {
        self.sample_period * self.samples as f64
    }

    /// Sample instants, starting at zero.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |k| k as f64 * self.sample_period)
    }
}

impl Default for SampleGrid {
    /// 100 Hz over 10 s.
    fn default() -> Self {
        Self {
            sample_period: 0.01,
            samples: 1000,
        }
    }
}

/// Shape family of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    ThreeTwoOneOne,
    Doublet,
    Custom,
    Optimized,
}

/// Descriptive metadata carried alongside the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalMetadata {
    pub kind: SignalKind,
    /// Nominal pulse amplitude, rad, when the shape has one.
    pub amplitude: Option<f64>,
    /// Base pulse width, s, when the shape has one.
    pub pulse_width: Option<f64>,
}

impl SignalMetadata {
    /// Metadata for a free-form signal.
    pub fn custom() -> Self {
        Self {
            kind: SignalKind::Custom,
            amplitude: None,
            pulse_width: None,
        }
    }
}

/// Multi-channel control-deflection history relative to trim, on one uniform
/// grid. Values are radians.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSignal {
    sample_period: f64,
    labels: Vec<String>,
    samples: Vec<Vec<f64>>,
    pub metadata: SignalMetadata,
}

impl InputSignal {
    /// Builds a signal, validating grid consistency and sample finiteness.
    pub fn new(
        sample_period: f64,
        labels: Vec<String>,
        samples: Vec<Vec<f64>>,
        metadata: SignalMetadata,
    ) -> Result<Self, SignalError> {
        if !(sample_period.is_finite() && sample_period > 0.0) {
            return Err(SignalError::InvalidParameter {
                name: "sample_period",
                value: sample_period,
            });
        }
        if labels.is_empty() || labels.len() != samples.len() {
            return Err(SignalError::InconsistentChannels {
                reason: format!(
                    "{} label(s) for {} channel array(s)",
                    labels.len(),
                    samples.len()
                ),
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(SignalError::InconsistentChannels {
                    reason: format!("duplicate channel label {label}"),
                });
            }
        }
        let len = samples[0].len();
        if len < 2 {
            return Err(SignalError::InconsistentChannels {
                reason: format!("channel {} has fewer than 2 samples", labels[0]),
            });
        }
        for (label, channel) in labels.iter().zip(&samples) {
            if channel.len() != len {
                return Err(SignalError::InconsistentChannels {
                    reason: format!(
                        "channel {label} has {} samples, expected {len}",
                        channel.len()
                    ),
                });
            }
            if let Some(index) = channel.iter().position(|v| !v.is_finite()) {
                return Err(SignalError::NonFiniteSample {
                    channel: label.clone(),
                    index,
                });
            }
        }
        Ok(Self {
            sample_period,
            labels,
            samples,
            metadata,
        })
    }

    /// An all-zero signal on the given grid.
    pub fn zeros(grid: SampleGrid, labels: Vec<String>, metadata: SignalMetadata) -> Self {
        let samples = vec![vec![0.0; grid.len()]; labels.len()];
        Self::new(grid.sample_period(), labels, samples, metadata)
            .expect("zero signal is always valid")
    }

    /// Sample spacing, s.
    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.samples[0].len()
    }

    /// Never true; a signal holds at least two samples.
    pub fn is_empty(&self) -> bool {
        self.samples[0].is_empty()
    }

    /// Time span covered, s.
    pub fn horizon(&self) -> f64 {
        self.sample_period * self.len() as f64
    }

    /// The grid the samples live on.
    pub fn grid(&self) -> SampleGrid {
        SampleGrid::new(self.sample_period, self.len()).expect("existing grid is valid")
    }

    /// Channel labels in storage order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// All channels in storage order.
    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// Samples of a named channel.
    pub fn channel(&self, label: &str) -> Option<&[f64]> {
        self.channel_index(label).map(|i| self.samples[i].as_slice())
    }

    /// Storage index of a named channel.
    pub fn channel_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sample instants, starting at zero.
    pub fn times(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| k as f64 * self.sample_period)
            .collect()
    }

    /// Discrete signal energy: sum of squared samples times the sample period,
    /// over all channels.
    pub fn energy(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v * v * self.sample_period)
            .sum()
    }

    /// Largest sample-to-sample slope magnitude across channels, rad/s.
    pub fn max_rate(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|c| c.windows(2))
            .map(|w| (w[1] - w[0]).abs() / self.sample_period)
            .fold(0.0, f64::max)
    }

    /// Replaces one channel's samples; the length must match the grid.
    pub fn set_channel(&mut self, label: &str, values: Vec<f64>) -> Result<(), SignalError> {
        let len = self.len();
        let index =
            self.channel_index(label)
                .ok_or_else(|| SignalError::InconsistentChannels {
                    reason: format!("no channel {label}"),
                })?;
        if values.len() != len {
            return Err(SignalError::InconsistentChannels {
                reason: format!("channel {label}: {} samples, expected {len}", values.len()),
            });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFiniteSample {
                channel: label.to_string(),
                index: bad,
            });
        }
        self.samples[index] = values;
        Ok(())
    }
}

/// Concatenates the channels of several signals sharing one grid.
///
/// The merged metadata keeps the common kind when all inputs agree, and is
/// custom otherwise.
pub fn merge_channels(signals: &[InputSignal]) -> Result<InputSignal, SignalError> {
    let first = signals
        .first()
        .ok_or_else(|| SignalError::InconsistentChannels {
            reason: "no signals to merge".to_string(),
        })?;
    let mut labels = Vec::new();
    let mut samples = Vec::new();
    for signal in signals {
        if signal.sample_period != first.sample_period || signal.len() != first.len() {
            return Err(SignalError::InconsistentChannels {
                reason: "signals live on different grids".to_string(),
            });
        }
        labels.extend(signal.labels.iter().cloned());
        samples.extend(signal.samples.iter().cloned());
    }
    let kind = if signals
        .iter()
        .all(|s| s.metadata.kind == first.metadata.kind)
    {
        first.metadata.kind
    } else {
        SignalKind::Custom
    };
    InputSignal::new(
        first.sample_period,
        labels,
        samples,
        SignalMetadata {
            kind,
            amplitude: first.metadata.amplitude,
            pulse_width: first.metadata.pulse_width,
        },
    )
}

/// Zeroes every sample outside the closed time window, preserving the grid.
pub fn truncate_for_safety(
    signal: &InputSignal,
    keep_window: (f64, f64),
) -> Result<InputSignal, SignalError> {
    let (begin, end) = keep_window;
    let horizon = signal.horizon();
    if !(begin.is_finite() && end.is_finite()) || begin < 0.0 || end < begin || end > horizon {
        return Err(SignalError::WindowOutOfRange {
            begin_s: begin,
            end_s: end,
            horizon_s: horizon,
        });
    }
    let mut out = signal.clone();
    for channel in &mut out.samples {
        for (k, value) in channel.iter_mut().enumerate() {
            let t = k as f64 * signal.sample_period;
            if t < begin - 1e-12 || t > end + 1e-12 {
                *value = 0.0;
            }
        }
    }
    Ok(out)
}
