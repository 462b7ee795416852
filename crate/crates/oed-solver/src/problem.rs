//! Problem statement for constrained experiment design on an LTI model.

use fisher_information::SensorModel;
use flight_dynamics::{LtiModel, VariableKind};
use maneuver_signals::InputSignal;

use crate::constraints::EnvelopeConstraints;
use crate::error::OedError;

/// Default design horizon, s.
pub const DEFAULT_HORIZON: f64 = 10.0;
/// Default control-grid period: decisions at 10 Hz against the 100 Hz
/// simulation grid.
pub const DEFAULT_CONTROL_PERIOD: f64 = 0.1;

/// How objective gradients are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientMode {
    /// Forward finite differences over the decision variables.
    #[default]
    FiniteDifference,
    /// Exact chain rule through the linear sensitivity propagation.
    Exact,
}

/// A posed design problem: minimize the A-criterion of the scaled parameter
/// covariance over rate-limited surface motion subject to excursion bounds.
#[derive(Debug, Clone)]
pub struct OedProblem {
    /// Rate-augmented model: surface deflections are states, rates are inputs.
    pub model: LtiModel,
    pub sensor: SensorModel,
    /// Parameters under design, with nominal values taken from the model.
    pub parameters: Vec<String>,
    pub constraints: EnvelopeConstraints,
    /// Design horizon, s.
    pub horizon: f64,
    /// Decision-grid period for the control rates, s.
    pub control_period: f64,
    /// Feasible, informative starting deflection history (surface channels,
    /// relative to trim).
    pub initial_guess: InputSignal,
    pub gradient_mode: GradientMode,
    /// Inner-solver budget per start as (iterations per subproblem, total
    /// iterations); `None` picks defaults suited to the gradient mode.
    pub iteration_budget: Option<(usize, usize)>,
}

impl OedProblem {
    /// Poses a problem with the default horizon, control grid, and gradient
    /// mode.
    pub fn new(
        model: LtiModel,
        sensor: SensorModel,
        parameters: Vec<String>,
        constraints: EnvelopeConstraints,
        initial_guess: InputSignal,
    ) -> Self {
        Self {
            model,
            sensor,
            parameters,
            constraints,
            horizon: DEFAULT_HORIZON,
            control_period: DEFAULT_CONTROL_PERIOD,
            initial_guess,
            gradient_mode: GradientMode::default(),
            iteration_budget: None,
        }
    }

    /// Surface names: deflection states of the augmented model.
    pub fn surface_names(&self) -> Vec<&str> {
        self.model
            .state_names
            .iter()
            .zip(&self.model.state_kinds)
            .filter(|(_, kind)| **kind == VariableKind::DeflectionState)
            .map(|(name, _)| name.as_str())
            .collect()
    }

    /// The single excited surface: the unique guess channel with any nonzero
    /// sample (surfaces are excited one axis at a time).
    pub fn active_surface(&self) -> Result<String, OedError> {
        let surfaces = self.surface_names();
        let mut active = Vec::new();
        for name in &surfaces {
            match self.initial_guess.channel(name) {
                Some(samples) if samples.iter().any(|v| *v != 0.0) => {
                    active.push(name.to_string())
                }
                Some(_) => {}
                None => {
                    return Err(OedError::InvalidProblem {
                        reason: format!("initial guess has no channel for surface {name}"),
                    })
                }
            }
        }
        match active.len() {
            0 => Err(OedError::UninformativeGuess {
                reason: "every surface channel is identically zero".to_string(),
            }),
            1 => Ok(active.remove(0)),
            _ => Err(OedError::InvalidProblem {
                reason: format!(
                    "one surface may be excited at a time, found {}",
                    active.join(", ")
                ),
            }),
        }
    }

    /// Validates dimensions, grids, scaling prerequisites, and bounds.
    pub fn validate(&self) -> Result<(), OedError> {
        self.constraints.validate()?;
        if self.surface_names().is_empty() {
            return Err(OedError::InvalidProblem {
                reason: "model has no deflection states; augment it first".to_string(),
            });
        }
        if self.parameters.is_empty() {
            return Err(OedError::InvalidProblem {
                reason: "empty parameter set".to_string(),
            });
        }
        for name in &self.parameters {
            let value = self
                .model
                .parameter_value(name)
                .map_err(|_| OedError::InvalidProblem {
                    reason: format!("model has no parameter {name}"),
                })?;
            if value == 0.0 {
                return Err(OedError::ZeroNominal { name: name.clone() });
            }
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(OedError::InvalidProblem {
                reason: format!("non-positive horizon {}", self.horizon),
            });
        }
        let h = self.initial_guess.sample_period();
        if (h - self.sensor.sample_period()).abs() > 1e-9 {
            return Err(OedError::InvalidProblem {
                reason: format!(
                    "guess grid {h} s does not match the sensor grid {} s",
                    self.sensor.sample_period()
                ),
            });
        }
        let cells_f = self.control_period / h;
        if (cells_f - cells_f.round()).abs() > 1e-6 || cells_f.round() < 1.0 {
            return Err(OedError::InvalidProblem {
                reason: format!(
                    "control period {} s is not a multiple of the sample period {h} s",
                    self.control_period
                ),
            });
        }
        let guess_horizon = (self.initial_guess.len() - 1) as f64 * h;
        if (guess_horizon - self.horizon).abs() > h / 2.0 {
            return Err(OedError::InvalidProblem {
                reason: format!(
                    "guess covers {guess_horizon} s, problem horizon is {} s",
                    self.horizon
                ),
            });
        }
        // Every constrained state and the active rate must exist on the model.
        self.active_surface()?;
        for v in &self.constraints.variables {
            let is_rate = v.name.ends_with("_rate")
                && self.model.input_names.iter().any(|n| *n == v.name);
            let is_state = self.model.state_names.iter().any(|n| *n == v.name);
            if !is_rate && !is_state {
                return Err(OedError::InvalidProblem {
                    reason: format!("constraint on {} matches no model variable", v.name),
                });
            }
        }
        Ok(())
    }
}
