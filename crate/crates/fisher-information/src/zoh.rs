//! Exact zero-order-hold simulation and parameter-sensitivity propagation.
//!
//! For piecewise-constant inputs the discrete transition of the state and of
//! every parameter sensitivity follows from one matrix exponential of a block
//! companion system per parameter, computed once per (model, grid) pair and
//! reused across propagations.

use flight_dynamics::{LtiModel, MatrixSlot};
use maneuver_signals::InputSignal;
use nalgebra::{DMatrix, DVector};

use crate::error::InformationError;

/// Sampled state history on a uniform grid; one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    pub state_names: Vec<String>,
    pub sample_period: f64,
    /// N x n matrix; row k is the state at t = k * sample_period.
    pub states: DMatrix<f64>,
}

impl StateTrajectory {
    /// Sample instants, s.
    pub fn times(&self) -> Vec<f64> {
        (0..self.states.nrows())
            .map(|k| k as f64 * self.sample_period)
            .collect()
    }

    /// Column index of a named state.
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|s| s == name)
    }

    /// Largest magnitude reached by a named state.
    pub fn peak_abs(&self, name: &str) -> Option<f64> {
        let col = self.state_index(name)?;
        Some(
            self.states
                .column(col)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs())),
        )
    }
}

/// State sensitivities with respect to a set of mapped parameters.
#[derive(Debug, Clone)]
pub struct SensitivitySet {
    pub parameter_names: Vec<String>,
    pub state_names: Vec<String>,
    pub sample_period: f64,
    /// One N x n matrix per parameter, aligned with `parameter_names`.
    pub states: Vec<DMatrix<f64>>,
}

/// Precomputed ZOH transition operators for a model, a grid period, and a
/// parameter set.
#[derive(Debug, Clone)]
pub struct ZohPropagator {
    state_names: Vec<String>,
    input_names: Vec<String>,
    parameter_names: Vec<String>,
    sample_period: f64,
    /// State transition over one step.
    ad: DMatrix<f64>,
    /// Input map over one step.
    bd: DMatrix<f64>,
    /// Per parameter: sensitivity source terms (from the state, from the input).
    sensitivity_maps: Vec<(DMatrix<f64>, DMatrix<f64>)>,
}

impl ZohPropagator {
    /// Discretizes the model and the sensitivity companion systems.
    pub fn new(
        model: &LtiModel,
        sample_period: f64,
        parameters: &[String],
    ) -> Result<Self, InformationError> {
        if !(sample_period.is_finite() && sample_period > 0.0) {
            return Err(InformationError::DimensionMismatch {
                reason: format!("non-positive sample period {sample_period}"),
            });
        }
        let n = model.a.nrows();
        let m = model.b.ncols();
        let known: Vec<&str> = model
            .parameter_map
            .iter()
            .map(|e| e.name.as_str())
            .collect();
        for name in parameters {
            if !known.contains(&name.as_str()) {
                return Err(InformationError::UnknownParameter { name: name.clone() });
            }
        }

        // Plain discretization: expm([[A, B], [0, 0]] h).
        let mut block = DMatrix::<f64>::zeros(n + m, n + m);
        block.view_mut((0, 0), (n, n)).copy_from(&model.a);
        block.view_mut((0, n), (n, m)).copy_from(&model.b);
        let transition = (block * sample_period).exp();
        let ad = transition.view((0, 0), (n, n)).into_owned();
        let bd = transition.view((0, n), (n, m)).into_owned();

        // Sensitivity companions: expm([[A, 0, B], [PA, A, PB], [0, 0, 0]] h)
        // shares its diagonal blocks with the plain discretization; only the
        // (sensitivity <- state) and (sensitivity <- input) blocks are new.
        let mut sensitivity_maps = Vec::with_capacity(parameters.len());
        for name in parameters {
            let mut pa = DMatrix::<f64>::zeros(n, n);
            let mut pb = DMatrix::<f64>::zeros(n, m);
            for entry in model.parameter_map.iter().filter(|e| &e.name == name) {
                match entry.matrix {
                    MatrixSlot::A => pa[(entry.row, entry.col)] += entry.scale,
                    MatrixSlot::B => pb[(entry.row, entry.col)] += entry.scale,
                }
            }
            let mut big = DMatrix::<f64>::zeros(2 * n + m, 2 * n + m);
            big.view_mut((0, 0), (n, n)).copy_from(&model.a);
            big.view_mut((0, 2 * n), (n, m)).copy_from(&model.b);
            big.view_mut((n, 0), (n, n)).copy_from(&pa);
            big.view_mut((n, n), (n, n)).copy_from(&model.a);
            big.view_mut((n, 2 * n), (n, m)).copy_from(&pb);
            let exp = (big * sample_period).exp();
            let from_state = exp.view((n, 0), (n, n)).into_owned();
            let from_input = exp.view((n, 2 * n), (n, m)).into_owned();
            sensitivity_maps.push((from_state, from_input));
        }

        Ok(Self {
            state_names: model.state_names.clone(),
            input_names: model.input_names.clone(),
            parameter_names: parameters.to_vec(),
            sample_period,
            ad,
            bd,
            sensitivity_maps,
        })
    }

    /// Grid period the operators were built for, s.
    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    /// Parameter names in propagation order.
    pub fn parameter_names(&self) -> &[String] {
        &self.parameter_names
    }

    /// State names of the underlying model.
    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    /// Input names expected by `simulate`/`propagate` (column order).
    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    /// Propagates the state only. `inputs` is N x m in model input order.
    pub fn simulate(
        &self,
        inputs: &DMatrix<f64>,
        initial_state: &DVector<f64>,
    ) -> Result<StateTrajectory, InformationError> {
        self.check_dims(inputs, initial_state)?;
        let n = self.ad.nrows();
        let samples = inputs.nrows();
        let mut states = DMatrix::<f64>::zeros(samples, n);
        let mut x = initial_state.clone();
        states.row_mut(0).tr_copy_from(&x);
        for k in 0..samples - 1 {
            let u = inputs.row(k).transpose();
            x = &self.ad * x + &self.bd * u;
            states.row_mut(k + 1).tr_copy_from(&x);
        }
        Ok(StateTrajectory {
            state_names: self.state_names.clone(),
            sample_period: self.sample_period,
            states,
        })
    }

    /// Propagates the state and every parameter sensitivity from rest.
    pub fn propagate(
        &self,
        inputs: &DMatrix<f64>,
        initial_state: &DVector<f64>,
    ) -> Result<(StateTrajectory, SensitivitySet), InformationError> {
        self.check_dims(inputs, initial_state)?;
        let n = self.ad.nrows();
        let samples = inputs.nrows();
        let n_params = self.sensitivity_maps.len();

        let mut states = DMatrix::<f64>::zeros(samples, n);
        let mut sens_states = vec![DMatrix::<f64>::zeros(samples, n); n_params];
        let mut x = initial_state.clone();
        let mut sens = vec![DVector::<f64>::zeros(n); n_params];
        states.row_mut(0).tr_copy_from(&x);
        for k in 0..samples - 1 {
            let u = inputs.row(k).transpose();
            for (p, (from_state, from_input)) in self.sensitivity_maps.iter().enumerate() {
                sens[p] = &self.ad * &sens[p] + from_state * &x + from_input * &u;
                sens_states[p].row_mut(k + 1).tr_copy_from(&sens[p]);
            }
            x = &self.ad * x + &self.bd * u;
            states.row_mut(k + 1).tr_copy_from(&x);
        }

        Ok((
            StateTrajectory {
                state_names: self.state_names.clone(),
                sample_period: self.sample_period,
                states,
            },
            SensitivitySet {
                parameter_names: self.parameter_names.clone(),
                state_names: self.state_names.clone(),
                sample_period: self.sample_period,
                states: sens_states,
            },
        ))
    }

    fn check_dims(
        &self,
        inputs: &DMatrix<f64>,
        initial_state: &DVector<f64>,
    ) -> Result<(), InformationError> {
        if inputs.ncols() != self.bd.ncols() {
            return Err(InformationError::DimensionMismatch {
                reason: format!(
                    "{} input column(s) for {} model input(s)",
                    inputs.ncols(),
                    self.bd.ncols()
                ),
            });
        }
        if inputs.nrows() < 2 {
            return Err(InformationError::DimensionMismatch {
                reason: "need at least two samples".to_string(),
            });
        }
        if initial_state.len() != self.ad.nrows() {
            return Err(InformationError::DimensionMismatch {
                reason: format!(
                    "initial state has {} entries for {} states",
                    initial_state.len(),
                    self.ad.nrows()
                ),
            });
        }
        Ok(())
    }
}

/// Arranges a signal's channels into the model's input order as an N x m
/// matrix. Every model input must be present as a channel label.
pub fn input_matrix(model: &LtiModel, signal: &InputSignal) -> Result<DMatrix<f64>, InformationError> {
    let samples = signal.len();
    let mut inputs = DMatrix::<f64>::zeros(samples, model.input_names.len());
    for (col, name) in model.input_names.iter().enumerate() {
        let channel = signal
            .channel(name)
            .ok_or_else(|| InformationError::DimensionMismatch {
                reason: format!("signal has no channel for model input {name}"),
            })?;
        for (k, value) in channel.iter().enumerate() {
            inputs[(k, col)] = *value;
        }
    }
    Ok(inputs)
}

/// Simulates a model on a signal's grid from an initial state.
pub fn simulate_lti(
    model: &LtiModel,
    signal: &InputSignal,
    initial_state: &DVector<f64>,
) -> Result<StateTrajectory, InformationError> {
    let propagator = ZohPropagator::new(model, signal.sample_period(), &[])?;
    propagator.simulate(&input_matrix(model, signal)?, initial_state)
}

/// Computes per-parameter state sensitivities for a signal applied from rest.
pub fn sensitivity_trajectories(
    model: &LtiModel,
    signal: &InputSignal,
    parameters: &[String],
) -> Result<SensitivitySet, InformationError> {
    let propagator = ZohPropagator::new(model, signal.sample_period(), parameters)?;
    let zero = DVector::zeros(model.a.nrows());
    let (_, sensitivities) = propagator.propagate(&input_matrix(model, signal)?, &zero)?;
    Ok(sensitivities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use flight_dynamics::{ParameterEntry, VariableKind};
    use maneuver_signals::{SampleGrid, SignalMetadata};

    /// Scalar test model dx = a x + b u with both entries mapped.
    fn scalar_model(a: f64, b: f64) -> LtiModel {
        LtiModel {
            a: DMatrix::from_element(1, 1, a),
            b: DMatrix::from_element(1, 1, b),
            state_names: vec!["x".to_string()],
            input_names: vec!["u".to_string()],
            state_kinds: vec![VariableKind::BodyState],
            input_kinds: vec![VariableKind::ControlInput],
            parameter_map: vec![
                ParameterEntry {
                    name: "a".to_string(),
                    value: a,
                    matrix: MatrixSlot::A,
                    row: 0,
                    col: 0,
                    scale: 1.0,
                },
                ParameterEntry {
                    name: "b".to_string(),
                    value: b,
                    matrix: MatrixSlot::B,
                    row: 0,
                    col: 0,
                    scale: 1.0,
                },
            ],
        }
    }

    fn constant_signal(value: f64, samples: usize) -> InputSignal {
        InputSignal::new(
            0.01,
            vec!["u".to_string()],
            vec![vec![value; samples]],
            SignalMetadata::custom(),
        )
        .unwrap()
    }

    #[test]
    fn zero_input_from_rest_stays_at_rest() {
        let model = scalar_model(-1.0, 1.0);
        let signal = constant_signal(0.0, 100);
        let x = simulate_lti(&model, &signal, &DVector::zeros(1)).unwrap();
        assert!(x.states.iter().all(|v| *v == 0.0));
        let sens =
            sensitivity_trajectories(&model, &signal, &["a".to_string(), "b".to_string()]).unwrap();
        assert!(sens.states.iter().flat_map(|m| m.iter()).all(|v| *v == 0.0));
    }

    #[test]
    fn first_order_step_response_is_exact() {
        // dx = -x + u, u = 1: x(t) = 1 - exp(-t), exact at every sample.
        let model = scalar_model(-1.0, 1.0);
        let signal = constant_signal(1.0, 501);
        let x = simulate_lti(&model, &signal, &DVector::zeros(1)).unwrap();
        for (k, t) in x.times().iter().enumerate() {
            let exact = 1.0 - (-t).exp();
            assert!((x.states[(k, 0)] - exact).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn integrator_input_gain_sensitivity_grows_linearly() {
        // dx = b u with a = 0, u = 1: dx/db solves ds = u, so s(t) = t.
        let model = scalar_model(0.0, 1.0);
        let signal = constant_signal(1.0, 301);
        let sens = sensitivity_trajectories(&model, &signal, &["b".to_string()]).unwrap();
        for (k, t) in (0..301).map(|k| (k, k as f64 * 0.01)) {
            assert!((sens.states[0][(k, 0)] - t).abs() < 1e-12);
        }
    }

    #[test]
    fn sensitivities_superpose_for_split_inputs() {
        let model = scalar_model(-0.8, 2.0);
        let grid = SampleGrid::new(0.01, 400).unwrap();
        let u1: Vec<f64> = grid.times().map(|t| (t * 2.0).sin() * 0.1).collect();
        let u2: Vec<f64> = grid.times().map(|t| if t > 1.0 { 0.05 } else { 0.0 }).collect();
        let sum: Vec<f64> = u1.iter().zip(&u2).map(|(a, b)| a + b).collect();
        let make = |samples: Vec<f64>| {
            InputSignal::new(
                0.01,
                vec!["u".to_string()],
                vec![samples],
                SignalMetadata::custom(),
            )
            .unwrap()
        };
        let params = vec!["a".to_string(), "b".to_string()];
        let s1 = sensitivity_trajectories(&model, &make(u1), &params).unwrap();
        let s2 = sensitivity_trajectories(&model, &make(u2), &params).unwrap();
        let s12 = sensitivity_trajectories(&model, &make(sum), &params).unwrap();
        for p in 0..2 {
            for k in 0..400 {
                let lhs = s12.states[p][(k, 0)];
                let rhs = s1.states[p][(k, 0)] + s2.states[p][(k, 0)];
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unknown_parameter_and_missing_channel_error() {
        let model = scalar_model(-1.0, 1.0);
        let signal = constant_signal(1.0, 10);
        assert!(matches!(
            sensitivity_trajectories(&model, &signal, &["nope".to_string()]),
            Err(InformationError::UnknownParameter { .. })
        ));
        let wrong = InputSignal::new(
            0.01,
            vec!["v".to_string()],
            vec![vec![0.0; 10]],
            SignalMetadata::custom(),
        )
        .unwrap();
        assert!(matches!(
            simulate_lti(&model, &wrong, &DVector::zeros(1)),
            Err(InformationError::DimensionMismatch { .. })
        ));
    }
}
