//! Monte-Carlo validation of the Cramer-Rao bound.
//!
//! Simulates noisy measurements of the true model, re-estimates the mapped
//! parameters per run with a Gauss-Newton weighted least-squares output-error
//! fit, and compares the scatter of the estimates against the marginal bound
//! predicted by the Fisher matrix. Runs execute in parallel on independent
//! RNG streams derived from the master seed, so results do not depend on
//! scheduling.

use flight_dynamics::LtiModel;
use maneuver_signals::InputSignal;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::InformationError;
use crate::report::information_report;
use crate::sensor::SensorModel;
use crate::zoh::{input_matrix, ZohPropagator};

/// Empirical estimator scatter against the predicted bound.
#[derive(Debug, Clone)]
pub struct MonteCarloReport {
    pub parameter_names: Vec<String>,
    pub true_values: Vec<f64>,
    /// Sample standard deviation of the estimates over converged runs.
    pub empirical_std: Vec<f64>,
    /// Marginal bound sqrt((F^-1)_ii) at the true parameters.
    pub predicted_std: Vec<f64>,
    pub runs: usize,
    pub converged: usize,
    pub diverged: usize,
}

impl MonteCarloReport {
    /// Per-parameter ratio empirical/predicted.
    pub fn ratios(&self) -> Vec<f64> {
        self.empirical_std
            .iter()
            .zip(&self.predicted_std)
            .map(|(e, p)| e / p)
            .collect()
    }
}

const MAX_GAUSS_NEWTON_ITERATIONS: usize = 25;
const STEP_TOLERANCE: f64 = 1e-8;
/// Runs may diverge, but no more than this fraction.
const DIVERGENCE_LIMIT: f64 = 0.05;

/// Validates the bound on a design by repeated estimation from noisy data.
pub fn monte_carlo_crlb_check(
    model: &LtiModel,
    signal: &InputSignal,
    sensor: &SensorModel,
    parameters: &[String],
    n_runs: usize,
    seed: u64,
) -> Result<MonteCarloReport, InformationError> {
    let report = information_report(model, signal, sensor, parameters)?;
    if !report.unidentifiable.is_empty() || report.covariance.is_none() {
        return Err(InformationError::RankDeficient {
            rank: report.rank,
            required: parameters.len(),
        });
    }
    let predicted_std: Vec<f64> = report
        .crlb_marginal
        .iter()
        .map(|v| v.expect("full-rank report has marginal bounds"))
        .collect();
    let true_values: Vec<f64> = report.parameter_values.clone();

    let h = signal.sample_period();
    let inputs = input_matrix(model, signal)?;
    let zero = DVector::zeros(model.a.nrows());
    let truth_propagator = ZohPropagator::new(model, h, parameters)?;
    let truth = truth_propagator.simulate(&inputs, &zero)?;
    let columns = sensor.state_indices(&truth.state_names)?;
    let sigmas: Vec<f64> = sensor.noise_stds().collect();
    let weights: Vec<f64> = sigmas.iter().map(|s| 1.0 / (s * s)).collect();
    let samples = truth.states.nrows();

    let estimates: Vec<Option<Vec<f64>>> = (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(run as u64 + 1);
            // Measured outputs with per-channel white noise.
            let mut measured = DMatrix::<f64>::zeros(samples, columns.len());
            for k in 0..samples {
                for (j, (&col, sigma)) in columns.iter().zip(&sigmas).enumerate() {
                    let noise: f64 = StandardNormal.sample(&mut rng);
                    measured[(k, j)] = truth.states[(k, col)] + sigma * noise;
                }
            }
            estimate(
                model,
                &inputs,
                &measured,
                &columns,
                &weights,
                parameters,
                &true_values,
                h,
            )
        })
        .collect();

    let converged: Vec<&Vec<f64>> = estimates.iter().flatten().collect();
    let diverged = n_runs - converged.len();
    let limit = (DIVERGENCE_LIMIT * n_runs as f64).floor() as usize;
    if diverged > limit {
        return Err(InformationError::EstimatorDivergence {
            diverged,
            runs: n_runs,
            limit,
        });
    }

    let n_params = parameters.len();
    let mut empirical_std = vec![0.0; n_params];
    for p in 0..n_params {
        let mean: f64 =
            converged.iter().map(|theta| theta[p]).sum::<f64>() / converged.len() as f64;
        let var: f64 = converged
            .iter()
            .map(|theta| (theta[p] - mean).powi(2))
            .sum::<f64>()
            / (converged.len() - 1) as f64;
        empirical_std[p] = var.sqrt();
    }

    Ok(MonteCarloReport {
        parameter_names: parameters.to_vec(),
        true_values,
        empirical_std,
        predicted_std,
        runs: n_runs,
        converged: converged.len(),
        diverged,
    })
}

/// Gauss-Newton weighted least-squares output-error fit, started from the
/// true values inflated by 10%.
#[allow(clippy::too_many_arguments)]
fn estimate(
    model: &LtiModel,
    inputs: &DMatrix<f64>,
    measured: &DMatrix<f64>,
    columns: &[usize],
    weights: &[f64],
    parameters: &[String],
    true_values: &[f64],
    h: f64,
) -> Option<Vec<f64>> {
    let n_params = parameters.len();
    let zero = DVector::zeros(model.a.nrows());
    let mut theta: Vec<f64> = true_values.iter().map(|v| v * 1.1).collect();

    for _ in 0..MAX_GAUSS_NEWTON_ITERATIONS {
        let mut candidate = model.clone();
        for (name, value) in parameters.iter().zip(&theta) {
            candidate.set_parameter(name, *value).ok()?;
        }
        let propagator = ZohPropagator::new(&candidate, h, parameters).ok()?;
        let (trajectory, sensitivities) = propagator.propagate(inputs, &zero).ok()?;

        // Normal equations of the weighted output-error cost.
        let mut normal = DMatrix::<f64>::zeros(n_params, n_params);
        let mut gradient = DVector::<f64>::zeros(n_params);
        for (j, (&col, &w)) in columns.iter().zip(weights).enumerate() {
            let residual = measured.column(j) - trajectory.states.column(col);
            for p in 0..n_params {
                let sp = sensitivities.states[p].column(col);
                gradient[p] += w * sp.dot(&residual);
                for q in p..n_params {
                    let sq = sensitivities.states[q].column(col);
                    let g = w * sp.dot(&sq);
                    normal[(p, q)] += g;
                    if p != q {
                        normal[(q, p)] += g;
                    }
                }
            }
        }

        let step = normal.cholesky()?.solve(&gradient);
        let mut worst = 0.0f64;
        for p in 0..n_params {
            theta[p] += step[p];
            if !theta[p].is_finite() {
                return None;
            }
            worst = worst.max(step[p].abs() / true_values[p].abs().max(1e-12));
        }
        if worst < STEP_TOLERANCE {
            return Some(theta);
        }
    }
    None
}
