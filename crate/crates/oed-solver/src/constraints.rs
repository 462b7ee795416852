//! Operational bounds for maneuver design: per-variable design bounds about
//! trim, the enclosing flight envelope, and the safety margin tying the two.

use flight_dynamics::TrimCondition;

use crate::error::OedError;

/// Default safety margin between the flight envelope and design bounds.
pub const DEFAULT_SAFETY_MARGIN: f64 = 0.2;

/// Bounds for one constrained variable (a state, a surface deflection, or a
/// surface rate).
#[derive(Debug, Clone, PartialEq)]
pub struct VariableBounds {
    /// Model state or input name ("airspeed", "elevator", "elevator_rate", ...).
    pub name: String,
    /// Design bounds relative to trim, SI units and radians: lower < 0 < upper.
    pub design: (f64, f64),
    /// Absolute flight-envelope bounds when the envelope limits the variable;
    /// surface deflections and rates carry none.
    pub envelope: Option<(f64, f64)>,
    /// Trim offset converting relative excursions to absolute values.
    pub trim: f64,
}

/// The design-bound set for one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeConstraints {
    pub variables: Vec<VariableBounds>,
    /// Margin fraction kept between envelope and design bounds by
    /// [`EnvelopeConstraints::with_margin_from_envelope`].
    pub safety_margin: f64,
}

impl EnvelopeConstraints {
    /// Longitudinal design bounds: airspeed within 17-23 m/s, incidence within
    /// -4.36..3.64 deg, pitch within -28.77..27.33 deg, pitch rate within
    /// +-32 deg/s, elevator within +-5 deg absolute, rate within +-3.25 rad/s.
    pub fn longitudinal_defaults(trim: &TrimCondition) -> Self {
        let d = std::f64::consts::PI / 180.0;
        let vt = trim.airspeed;
        let variables = vec![
            VariableBounds {
                name: "airspeed".to_string(),
                design: (17.0 - vt, 23.0 - vt),
                envelope: Some((12.0, 30.0)),
                trim: vt,
            },
            VariableBounds {
                name: "alpha".to_string(),
                design: (-4.36 * d - trim.alpha, 3.64 * d - trim.alpha),
                envelope: Some((-8.0 * d, 20.0 * d)),
                trim: trim.alpha,
            },
            VariableBounds {
                name: "pitch".to_string(),
                design: (-28.77 * d - trim.pitch, 27.33 * d - trim.pitch),
                envelope: Some((-30.0 * d, 40.0 * d)),
                trim: trim.pitch,
            },
            VariableBounds {
                name: "pitch_rate".to_string(),
                design: (-32.0 * d, 32.0 * d),
                envelope: Some((-40.0 * d, 40.0 * d)),
                trim: 0.0,
            },
            VariableBounds {
                name: "elevator".to_string(),
                design: (-5.0 * d - trim.elevator, 5.0 * d - trim.elevator),
                envelope: None,
                trim: trim.elevator,
            },
            VariableBounds {
                name: "elevator_rate".to_string(),
                design: (-3.25, 3.25),
                envelope: None,
                trim: 0.0,
            },
        ];
        Self {
            variables,
            safety_margin: DEFAULT_SAFETY_MARGIN,
        }
    }

    /// Lateral-directional design bounds: sideslip within +-7.5 deg, bank
    /// within +-28 deg, roll rate within +-48 deg/s, yaw rate within
    /// +-32 deg/s, both surfaces within +-5 deg and +-3.25 rad/s. Lateral trim
    /// is zero in wings-level flight.
    pub fn lateral_defaults() -> Self {
        let d = std::f64::consts::PI / 180.0;
        let state = |name: &str, lim_design: f64, lim_env: f64| VariableBounds {
            name: name.to_string(),
            design: (-lim_design * d, lim_design * d),
            envelope: Some((-lim_env * d, lim_env * d)),
            trim: 0.0,
        };
        let surface = |name: &str| VariableBounds {
            name: name.to_string(),
            design: (-5.0 * d, 5.0 * d),
            envelope: None,
            trim: 0.0,
        };
        let rate = |name: &str| VariableBounds {
            name: name.to_string(),
            design: (-3.25, 3.25),
            envelope: None,
            trim: 0.0,
        };
        Self {
            variables: vec![
                state("sideslip", 7.5, 20.0),
                state("roll", 28.0, 35.0),
                state("roll_rate", 48.0, 60.0),
                state("yaw_rate", 32.0, 40.0),
                surface("aileron"),
                surface("rudder"),
                rate("aileron_rate"),
                rate("rudder_rate"),
            ],
            safety_margin: DEFAULT_SAFETY_MARGIN,
        }
    }

    /// Replaces every enveloped variable's design bounds with the envelope
    /// shrunk toward trim by the safety margin, guaranteeing the margin
    /// invariant by construction. Variables without an envelope keep their
    /// design bounds.
    pub fn with_margin_from_envelope(&self) -> Self {
        let keep = 1.0 - self.safety_margin;
        let variables = self
            .variables
            .iter()
            .map(|v| {
                let design = match v.envelope {
                    Some((lo, hi)) => (keep * (lo - v.trim), keep * (hi - v.trim)),
                    None => v.design,
                };
                VariableBounds {
                    design,
                    ..v.clone()
                }
            })
            .collect();
        Self {
            variables,
            safety_margin: self.safety_margin,
        }
    }

    /// Design bounds of a named variable, relative to trim.
    pub fn design_bounds(&self, name: &str) -> Option<(f64, f64)> {
        self.get(name).map(|v| v.design)
    }

    /// Absolute flight-envelope bounds of a named variable.
    pub fn envelope_bounds(&self, name: &str) -> Option<(f64, f64)> {
        self.get(name).and_then(|v| v.envelope)
    }

    /// Trim offset of a named variable.
    pub fn trim_offset(&self, name: &str) -> Option<f64> {
        self.get(name).map(|v| v.trim)
    }

    fn get(&self, name: &str) -> Option<&VariableBounds> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Checks that every design interval straddles trim and stays inside its
    /// envelope, and that the margin fraction is sane.
    pub fn validate(&self) -> Result<(), OedError> {
        if !(0.0..1.0).contains(&self.safety_margin) {
            return Err(OedError::InvalidProblem {
                reason: format!("safety margin {} outside [0, 1)", self.safety_margin),
            });
        }
        for v in &self.variables {
            let (lo, hi) = v.design;
            if !(lo.is_finite() && hi.is_finite() && lo < 0.0 && hi > 0.0) {
                return Err(OedError::InvalidProblem {
                    reason: format!(
                        "design bounds ({lo:.4}, {hi:.4}) for {} must straddle trim",
                        v.name
                    ),
                });
            }
            if let Some((env_lo, env_hi)) = v.envelope {
                let tol = 1e-12;
                if v.trim + lo < env_lo - tol || v.trim + hi > env_hi + tol {
                    return Err(OedError::InvalidProblem {
                        reason: format!(
                            "design bounds for {} leave the flight envelope",
                            v.name
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}
