//! Fisher matrix assembly, identifiability, covariance, and design comparison.

use flight_dynamics::LtiModel;
use maneuver_signals::InputSignal;
use nalgebra::DMatrix;

use crate::error::InformationError;
use crate::sensor::SensorModel;
use crate::zoh::{sensitivity_trajectories, SensitivitySet};

/// Relative diagonal threshold below which a parameter counts as
/// structurally unidentifiable.
const STRUCTURAL_ZERO: f64 = 1e-12;

/// Information content of one design for one parameter set.
#[derive(Debug, Clone)]
pub struct InformationReport {
    pub parameter_names: Vec<String>,
    /// Nominal values of the parameters in the model the report was built on.
    pub parameter_values: Vec<f64>,
    /// Fisher information matrix over all samples and measured outputs.
    pub fisher: DMatrix<f64>,
    /// Covariance of the identifiable subset, embedded at the subset indices;
    /// absent when no identifiable subset could be inverted.
    pub covariance: Option<DMatrix<f64>>,
    /// Per-parameter lower bound 1/sqrt(F_ii); ignores correlations.
    pub crlb_paper: Vec<Option<f64>>,
    /// Per-parameter marginal bound sqrt((F^-1)_ii) on the identifiable subset.
    pub crlb_marginal: Vec<Option<f64>>,
    /// Mean variance of the identifiable subset: trace(covariance)/n_sub.
    pub a_criterion: Option<f64>,
    /// Numerical rank of the Fisher matrix.
    pub rank: usize,
    /// Names with structurally zero information under this excitation.
    pub unidentifiable: Vec<String>,
}

impl InformationReport {
    /// Indices of identifiable parameters.
    pub fn identifiable_indices(&self) -> Vec<usize> {
        self.parameter_names
            .iter()
            .enumerate()
            .filter(|(_, name)| !self.unidentifiable.contains(name))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Assembles the Fisher matrix F = sum_k S_k^T W S_k with W the inverse
/// diagonal noise covariance, summing all samples on the grid.
pub fn fisher_matrix(
    sensitivities: &SensitivitySet,
    sensor: &SensorModel,
) -> Result<DMatrix<f64>, InformationError> {
    let n_params = sensitivities.parameter_names.len();
    let columns: Vec<usize> = sensor
        .state_names()
        .map(|name| {
            sensitivities
                .state_names
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| InformationError::UnknownState {
                    name: name.to_string(),
                })
        })
        .collect::<Result<_, _>>()?;
    let weights: Vec<f64> = sensor.noise_stds().map(|s| 1.0 / (s * s)).collect();

    let mut fisher = DMatrix::<f64>::zeros(n_params, n_params);
    for i in 0..n_params {
        for j in i..n_params {
            let mut sum = 0.0;
            for (&col, &w) in columns.iter().zip(&weights) {
                let si = sensitivities.states[i].column(col);
                let sj = sensitivities.states[j].column(col);
                sum += w * si.dot(&sj);
            }
            fisher[(i, j)] = sum;
            fisher[(j, i)] = sum;
        }
    }
    Ok(fisher)
}

/// Builds the full information report for a design.
///
/// Structural unidentifiability is detected from (relatively) zero Fisher
/// diagonals; the covariance, marginal bounds, and A-criterion are computed
/// on the identifiable subset.
pub fn information_report(
    model: &LtiModel,
    signal: &InputSignal,
    sensor: &SensorModel,
    parameters: &[String],
) -> Result<InformationReport, InformationError> {
    if (signal.sample_period() - sensor.sample_period()).abs() > 1e-9 {
        return Err(InformationError::GridMismatch {
            signal_period: signal.sample_period(),
            sensor_period: sensor.sample_period(),
        });
    }
    let sensitivities = sensitivity_trajectories(model, signal, parameters)?;
    let fisher = fisher_matrix(&sensitivities, sensor)?;
    let parameter_values = parameters
        .iter()
        .map(|name| {
            model
                .parameter_value(name)
                .map_err(|_| InformationError::UnknownParameter { name: name.clone() })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    report_from_fisher(parameters.to_vec(), parameter_values, fisher)
}

/// Derives identifiability, covariance, bounds, and the A-criterion from an
/// assembled Fisher matrix.
pub fn report_from_fisher(
    parameter_names: Vec<String>,
    parameter_values: Vec<f64>,
    fisher: DMatrix<f64>,
) -> Result<InformationReport, InformationError> {
    let n = parameter_names.len();
    let max_diagonal = (0..n).map(|i| fisher[(i, i)]).fold(0.0f64, f64::max);
    if max_diagonal <= 0.0 {
        return Err(InformationError::NoInformation { parameters: n });
    }
    let identifiable: Vec<usize> = (0..n)
        .filter(|&i| fisher[(i, i)] > STRUCTURAL_ZERO * max_diagonal)
        .collect();
    let unidentifiable: Vec<String> = (0..n)
        .filter(|i| !identifiable.contains(i))
        .map(|i| parameter_names[i].clone())
        .collect();

    // Numerical rank from singular values, threshold n * eps * sigma_max.
    let singular_values = fisher.clone().singular_values();
    let sigma_max = singular_values.iter().fold(0.0f64, |m, s| m.max(*s));
    let rank = singular_values
        .iter()
        .filter(|s| **s > n as f64 * f64::EPSILON * sigma_max)
        .count();

    let crlb_paper: Vec<Option<f64>> = (0..n)
        .map(|i| identifiable.contains(&i).then(|| 1.0 / fisher[(i, i)].sqrt()))
        .collect();

    let n_sub = identifiable.len();
    let mut subset = DMatrix::<f64>::zeros(n_sub, n_sub);
    for (a, &i) in identifiable.iter().enumerate() {
        for (b, &j) in identifiable.iter().enumerate() {
            subset[(a, b)] = fisher[(i, j)];
        }
    }
    let inverse = subset.clone().cholesky().map(|c| c.inverse()).or_else(|| {
        // Indefiniteness at roundoff level; fall back to LU.
        subset.clone().lu().try_inverse()
    });

    let (covariance, crlb_marginal, a_criterion) = match inverse {
        Some(sigma_sub) if sigma_sub.iter().all(|v| v.is_finite()) => {
            let mut embedded = DMatrix::<f64>::zeros(n, n);
            let mut marginal = vec![None; n];
            for (a, &i) in identifiable.iter().enumerate() {
                for (b, &j) in identifiable.iter().enumerate() {
                    embedded[(i, j)] = sigma_sub[(a, b)];
                }
                marginal[i] = Some(sigma_sub[(a, a)].max(0.0).sqrt());
            }
            let a_criterion = sigma_sub.trace() / n_sub as f64;
            (Some(embedded), marginal, Some(a_criterion))
        }
        _ => (None, vec![None; n], None),
    };

    Ok(InformationReport {
        parameter_names,
        parameter_values,
        fisher,
        covariance,
        crlb_paper,
        crlb_marginal,
        a_criterion,
        rank,
        unidentifiable,
    })
}

/// Relative CRLB change of a candidate design against a baseline.
#[derive(Debug, Clone)]
pub struct DesignComparison {
    pub parameter_names: Vec<String>,
    pub parameter_values: Vec<f64>,
    pub baseline_crlb: Vec<Option<f64>>,
    pub candidate_crlb: Vec<Option<f64>>,
    /// 100 * (candidate - baseline) / baseline; negative is an improvement.
    /// Absent where either design leaves the parameter unidentifiable.
    pub delta_crlb_pct: Vec<Option<f64>>,
}

impl DesignComparison {
    /// Mean percent change over parameters identifiable in both designs.
    pub fn mean_delta_pct(&self) -> Option<f64> {
        let deltas: Vec<f64> = self.delta_crlb_pct.iter().flatten().copied().collect();
        if deltas.is_empty() {
            None
        } else {
            Some(deltas.iter().sum::<f64>() / deltas.len() as f64)
        }
    }
}

/// Compares two designs parameter by parameter via their per-parameter lower
/// bounds (1/sqrt(F_ii)).
pub fn compare_designs(
    model: &LtiModel,
    baseline: &InputSignal,
    candidate: &InputSignal,
    sensor: &SensorModel,
    parameters: &[String],
) -> Result<DesignComparison, InformationError> {
    if (baseline.sample_period() - candidate.sample_period()).abs() > 1e-12
        || baseline.len() != candidate.len()
    {
        return Err(InformationError::DimensionMismatch {
            reason: "baseline and candidate live on different grids".to_string(),
        });
    }
    let base = information_report(model, baseline, sensor, parameters)?;
    let cand = information_report(model, candidate, sensor, parameters)?;
    let delta_crlb_pct = base
        .crlb_paper
        .iter()
        .zip(&cand.crlb_paper)
        .map(|(b, c)| match (b, c) {
            (Some(b), Some(c)) => Some(100.0 * (c - b) / b),
            _ => None,
        })
        .collect();
    Ok(DesignComparison {
        parameter_names: base.parameter_names.clone(),
        parameter_values: base.parameter_values.clone(),
        baseline_crlb: base.crlb_paper,
        candidate_crlb: cand.crlb_paper,
        delta_crlb_pct,
    })
}
