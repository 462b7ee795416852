//! Gaussian sensor model: measured states and noise levels.

use flight_dynamics::{LtiModel, VariableKind};

use crate::error::InformationError;

/// Diagonal white-noise sensor suite sampling a subset of model states.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel {
    channels: Vec<(String, f64)>,
    sample_rate_hz: f64,
}

impl SensorModel {
    /// Default sampling rate of the on-board recording chain, Hz.
    pub const DEFAULT_RATE_HZ: f64 = 100.0;

    /// Builds a sensor suite from (state name, noise standard deviation)
    /// pairs in SI units.
    pub fn new(channels: Vec<(String, f64)>, sample_rate_hz: f64) -> Result<Self, InformationError> {
        if channels.is_empty() {
            return Err(InformationError::InvalidSensor {
                field: "channels",
                value: 0.0,
            });
        }
        for (_, sigma) in &channels {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(InformationError::InvalidSensor {
                    field: "noise_std",
                    value: *sigma,
                });
            }
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(InformationError::InvalidSensor {
                field: "sample_rate_hz",
                value: sample_rate_hz,
            });
        }
        Ok(Self {
            channels,
            sample_rate_hz,
        })
    }

    /// Catalog noise standard deviation for a canonical state, SI units.
    pub fn default_noise_std(state: &str) -> Option<f64> {
        match state {
            "airspeed" => Some(2.5),
            "alpha" | "sideslip" => Some(0.5_f64.to_radians()),
            "roll" | "pitch" | "yaw" => Some(0.1_f64.to_radians()),
            "roll_rate" | "pitch_rate" | "yaw_rate" => Some(0.1_f64.to_radians()),
            _ => None,
        }
    }

    /// Sensor suite measuring every rigid-body state of a model at the
    /// default rate with catalog noise levels. Deflection states of augmented
    /// models are not measured.
    pub fn body_state_defaults(model: &LtiModel) -> Result<Self, InformationError> {
        let mut channels = Vec::new();
        for (name, kind) in model.state_names.iter().zip(&model.state_kinds) {
            if *kind != VariableKind::BodyState {
                continue;
            }
            let sigma = Self::default_noise_std(name).ok_or_else(|| {
                InformationError::UnknownState { name: name.clone() }
            })?;
            channels.push((name.clone(), sigma));
        }
        Self::new(channels, Self::DEFAULT_RATE_HZ)
    }

    /// Measured state names in channel order.
    pub fn state_names(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|(name, _)| name.as_str())
    }

    /// Noise standard deviations in channel order.
    pub fn noise_stds(&self) -> impl Iterator<Item = f64> + '_ {
        self.channels.iter().map(|(_, sigma)| *sigma)
    }

    /// Number of measured outputs.
    pub fn len(&self) -> usize {
        self.channels.len()
    }

    /// Never true; construction requires at least one channel.
    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Sampling rate, Hz.
    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Sampling period, s.
    pub fn sample_period(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    /// Maps each measured channel to its column in a state-name list.
    pub fn state_indices(&self, state_names: &[String]) -> Result<Vec<usize>, InformationError> {
        self.channels
            .iter()
            .map(|(name, _)| {
                state_names
                    .iter()
                    .position(|s| s == name)
                    .ok_or_else(|| InformationError::UnknownState { name: name.clone() })
            })
            .collect()
    }

    /// Returns a copy with every noise standard deviation multiplied by the
    /// given factor.
    pub fn with_noise_scaled(&self, factor: f64) -> Result<Self, InformationError> {
        Self::new(
            self.channels
                .iter()
                .map(|(name, sigma)| (name.clone(), sigma * factor))
                .collect(),
            self.sample_rate_hz,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flight_dynamics::{
        build_lateral_lti, build_longitudinal_lti, DimensionalDerivatives, KinematicCoupling,
        TrimCondition,
    };

    #[test]
    fn catalog_levels_cover_all_nine_states() {
        assert_eq!(SensorModel::default_noise_std("airspeed"), Some(2.5));
        let half_deg = 0.5_f64.to_radians();
        let tenth_deg = 0.1_f64.to_radians();
        assert_eq!(SensorModel::default_noise_std("alpha"), Some(half_deg));
        assert_eq!(SensorModel::default_noise_std("sideslip"), Some(half_deg));
        for state in ["roll", "pitch", "yaw", "roll_rate", "pitch_rate", "yaw_rate"] {
            assert_eq!(SensorModel::default_noise_std(state), Some(tenth_deg));
        }
        assert_eq!(SensorModel::default_noise_std("elevator"), None);
    }

    #[test]
    fn model_defaults_measure_only_body_states() {
        let derivs = DimensionalDerivatives::default();
        let trim = TrimCondition::default();
        let lon = build_longitudinal_lti(&derivs, &trim, 9.81, KinematicCoupling::AtTrim);
        let augmented = flight_dynamics::augment_actuator_rate(&lon);
        let sensor = SensorModel::body_state_defaults(&augmented).unwrap();
        let names: Vec<&str> = sensor.state_names().collect();
        assert_eq!(names, ["airspeed", "alpha", "pitch", "pitch_rate"]);
        assert!((sensor.sample_period() - 0.01).abs() < 1e-15);

        let lat = build_lateral_lti(&derivs, &trim, 9.81, KinematicCoupling::AtTrim);
        let sensor = SensorModel::body_state_defaults(&lat).unwrap();
        assert_eq!(sensor.len(), 4);
    }

    #[test]
    fn invalid_noise_is_rejected() {
        assert!(SensorModel::new(vec![("airspeed".to_string(), 0.0)], 100.0).is_err());
        assert!(SensorModel::new(vec![("airspeed".to_string(), 1.0)], 0.0).is_err());
        assert!(SensorModel::new(Vec::new(), 100.0).is_err());
    }
}
