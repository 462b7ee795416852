//! Sequential transcription of the design problem.
//!
//! The dynamics are LTI and start from rest, so the state path and every
//! parameter sensitivity are linear in the decision vector (one surface-rate
//! sample per control cell). Propagating one basis response per cell turns
//! the Fisher matrix into a set of quadratic forms and the path constraints
//! into fixed influence matrices; afterwards each objective or constraint
//! evaluation costs a handful of matrix-vector products and no simulation.

use fisher_information::{information_report, InformationReport, ZohPropagator};
use maneuver_signals::{InputSignal, SignalKind, SignalMetadata};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::OedError;
use crate::problem::OedProblem;

/// Violations below this threshold count as feasible.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-8;

/// One bounded state path: design bounds and the linear map from decisions to
/// the sampled path.
#[derive(Debug, Clone)]
pub struct PathConstraint {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    /// samples x cells influence matrix; path = influence * decisions.
    pub influence: DMatrix<f64>,
}

/// The reduced finite-dimensional problem.
#[derive(Debug, Clone)]
pub struct Transcription {
    /// Decision count: control cells across the horizon.
    pub n_cells: usize,
    /// Fine-grid samples per control cell.
    pub repeat: usize,
    /// Fine-grid samples across the horizon.
    pub samples: usize,
    sample_period: f64,
    /// Rate bounds boxing every decision variable.
    pub rate_bounds: (f64, f64),
    /// The excited surface and its rate input.
    pub surface: String,
    pub rate_input: String,
    /// Parameters kept after dropping the structurally unidentifiable ones.
    pub kept_parameters: Vec<String>,
    pub dropped_parameters: Vec<String>,
    /// Nominal values of the kept parameters (the scaling diagonal).
    pub nominals: Vec<f64>,
    /// Upper-triangle Fisher blocks: F_pq(d) = d' gram[tri(p,q)] d, unscaled.
    gram: Vec<DMatrix<f64>>,
    pub path_constraints: Vec<PathConstraint>,
    pub initial_decisions: DVector<f64>,
    /// All surface names of the model, for signal reconstruction.
    surfaces: Vec<String>,
    /// All rate-input names of the model, aligned with `surfaces`.
    rate_inputs: Vec<String>,
}

fn tri(p: usize, q: usize, n: usize) -> usize {
    debug_assert!(p <= q && q < n);
    p * (2 * n - p + 1) / 2 + (q - p)
}

impl Transcription {
    /// Validates the problem, checks the guess, drops unidentifiable
    /// parameters, and precomputes the basis responses.
    pub fn new(problem: &OedProblem) -> Result<Self, OedError> {
        problem.validate()?;
        let model = &problem.model;
        let h = problem.initial_guess.sample_period();
        let samples = problem.initial_guess.len();
        let repeat = (problem.control_period / h).round() as usize;
        if (samples - 1) % repeat != 0 {
            return Err(OedError::InvalidProblem {
                reason: format!(
                    "{} fine intervals do not split into {} -sample control cells",
                    samples - 1,
                    repeat
                ),
            });
        }
        let n_cells = (samples - 1) / repeat;

        let surface = problem.active_surface()?;
        let rate_input = format!("{surface}_rate");
        let active_col = model
            .input_names
            .iter()
            .position(|n| *n == rate_input)
            .ok_or_else(|| OedError::InvalidProblem {
                reason: format!("model has no rate input {rate_input}"),
            })?;
        let rate_bounds = problem
            .constraints
            .design_bounds(&rate_input)
            .ok_or_else(|| OedError::InvalidProblem {
                reason: format!("no rate bounds for {rate_input}"),
            })?;

        // Decision values of the guess: mean slope over each control cell.
        let deflection = problem
            .initial_guess
            .channel(&surface)
            .expect("active surface channel exists");
        let mut initial_decisions = DVector::<f64>::zeros(n_cells);
        for j in 0..n_cells {
            let rise = deflection[(j + 1) * repeat] - deflection[j * repeat];
            initial_decisions[j] = rise / (repeat as f64 * h);
        }
        for j in 0..n_cells {
            let d = initial_decisions[j];
            let over = (rate_bounds.0 - d).max(d - rate_bounds.1);
            if over > FEASIBILITY_TOLERANCE {
                return Err(OedError::InfeasibleGuess {
                    variable: rate_input.clone(),
                    violation: over,
                });
            }
        }

        // Report at the realized guess: reject uninformative guesses and drop
        // parameters the excitation cannot reach.
        let surfaces: Vec<String> = problem
            .surface_names()
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rate_inputs: Vec<String> = surfaces.iter().map(|s| format!("{s}_rate")).collect();
        let shell = Self {
            n_cells,
            repeat,
            samples,
            sample_period: h,
            rate_bounds,
            surface: surface.clone(),
            rate_input: rate_input.clone(),
            kept_parameters: Vec::new(),
            dropped_parameters: Vec::new(),
            nominals: Vec::new(),
            gram: Vec::new(),
            path_constraints: Vec::new(),
            initial_decisions: initial_decisions.clone(),
            surfaces,
            rate_inputs,
        };
        let guess_rates = shell.rate_signal(&initial_decisions)?;
        let guess_report = information_report(
            model,
            &guess_rates,
            &problem.sensor,
            &problem.parameters,
        )?;
        let dropped_parameters = guess_report.unidentifiable.clone();
        let kept_parameters: Vec<String> = problem
            .parameters
            .iter()
            .filter(|p| !dropped_parameters.contains(p))
            .cloned()
            .collect();
        if kept_parameters.is_empty() {
            return Err(OedError::UninformativeGuess {
                reason: "no parameter receives information from the guess".to_string(),
            });
        }
        if guess_report.covariance.is_none() {
            return Err(OedError::UninformativeGuess {
                reason: format!(
                    "Fisher matrix at the guess has rank {} of {}",
                    guess_report.rank,
                    problem.parameters.len()
                ),
            });
        }
        let nominals: Vec<f64> = kept_parameters
            .iter()
            .map(|name| model.parameter_value(name).expect("validated parameter"))
            .collect();

        // Basis responses: unit rate over one cell, zero elsewhere.
        let propagator = ZohPropagator::new(model, h, &kept_parameters)?;
        let n_params = kept_parameters.len();
        let n_inputs = model.input_names.len();
        let columns: Vec<usize> = problem.sensor.state_indices(&model.state_names)?;
        let root_weights: Vec<f64> = problem
            .sensor
            .noise_stds()
            .map(|s| 1.0 / s)
            .collect();
        let zero = DVector::<f64>::zeros(model.a.nrows());

        // Constrained states, in constraint order.
        let constrained: Vec<(String, f64, f64, usize)> = problem
            .constraints
            .variables
            .iter()
            .filter_map(|v| {
                model
                    .state_names
                    .iter()
                    .position(|n| *n == v.name)
                    .map(|col| (v.name.clone(), v.design.0, v.design.1, col))
            })
            .collect();

        struct BasisResponse {
            /// sqrt-weighted measured sensitivities, one (samples*channels)
            /// column per parameter.
            weighted: Vec<DVector<f64>>,
            /// Sampled value of each constrained state.
            path: Vec<DVector<f64>>,
        }
        let responses: Vec<BasisResponse> = (0..n_cells)
            .into_par_iter()
            .map(|j| {
                let mut inputs = DMatrix::<f64>::zeros(samples, n_inputs);
                for k in j * repeat..(j + 1) * repeat {
                    inputs[(k, active_col)] = 1.0;
                }
                let (trajectory, sensitivities) = propagator
                    .propagate(&inputs, &zero)
                    .expect("validated dimensions");
                let weighted = (0..n_params)
                    .map(|p| {
                        let mut stacked = DVector::<f64>::zeros(samples * columns.len());
                        for (c, (&col, &rw)) in
                            columns.iter().zip(&root_weights).enumerate()
                        {
                            let source = sensitivities.states[p].column(col);
                            for k in 0..samples {
                                stacked[c * samples + k] = rw * source[k];
                            }
                        }
                        stacked
                    })
                    .collect();
                let path = constrained
                    .iter()
                    .map(|(_, _, _, col)| trajectory.states.column(*col).into_owned())
                    .collect();
                BasisResponse { weighted, path }
            })
            .collect();

        // Gram blocks: gram[tri(p,q)][j,l] = <basis_p_j, basis_q_l>.
        let mut bases = Vec::with_capacity(n_params);
        for p in 0..n_params {
            let mut b = DMatrix::<f64>::zeros(samples * columns.len(), n_cells);
            for (j, response) in responses.iter().enumerate() {
                b.column_mut(j).copy_from(&response.weighted[p]);
            }
            bases.push(b);
        }
        let pairs: Vec<(usize, usize)> = (0..n_params)
            .flat_map(|p| (p..n_params).map(move |q| (p, q)))
            .collect();
        let gram: Vec<DMatrix<f64>> = pairs
            .par_iter()
            .map(|&(p, q)| bases[p].transpose() * &bases[q])
            .collect();

        let path_constraints: Vec<PathConstraint> = constrained
            .iter()
            .enumerate()
            .map(|(s, (name, lower, upper, _))| {
                let mut influence = DMatrix::<f64>::zeros(samples, n_cells);
                for (j, response) in responses.iter().enumerate() {
                    influence.column_mut(j).copy_from(&response.path[s]);
                }
                PathConstraint {
                    name: name.clone(),
                    lower: *lower,
                    upper: *upper,
                    influence,
                }
            })
            .collect();

        let transcription = Self {
            kept_parameters,
            dropped_parameters,
            nominals,
            gram,
            path_constraints,
            ..shell
        };

        // The realized guess must respect the path bounds.
        let (violation, worst) = transcription.max_violation(&initial_decisions);
        if violation > FEASIBILITY_TOLERANCE {
            return Err(OedError::InfeasibleGuess {
                variable: worst,
                violation,
            });
        }
        if !transcription.objective(&initial_decisions).is_finite() {
            return Err(OedError::UninformativeGuess {
                reason: "scaled Fisher matrix at the guess is singular".to_string(),
            });
        }
        Ok(transcription)
    }

    /// Unscaled Fisher matrix of the kept parameters at a decision vector.
    pub fn fisher(&self, decisions: &DVector<f64>) -> DMatrix<f64> {
        let n = self.kept_parameters.len();
        let mut fisher = DMatrix::<f64>::zeros(n, n);
        for p in 0..n {
            for q in p..n {
                let value = (&self.gram[tri(p, q, n)] * decisions).dot(decisions);
                fisher[(p, q)] = value;
                fisher[(q, p)] = value;
            }
        }
        fisher
    }

    /// A-criterion of the scaled covariance: trace((D F D)^-1)/n with
    /// D = diag(nominals). Infinite when the scaled Fisher matrix is singular.
    pub fn objective(&self, decisions: &DVector<f64>) -> f64 {
        let scaled = self.scaled_fisher(&self.fisher(decisions));
        match scaled.cholesky() {
            Some(chol) => {
                let inverse = chol.inverse();
                inverse.trace() / self.kept_parameters.len() as f64
            }
            None => f64::INFINITY,
        }
    }

    fn scaled_fisher(&self, fisher: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.nominals.len();
        DMatrix::from_fn(n, n, |p, q| fisher[(p, q)] * self.nominals[p] * self.nominals[q])
    }

    /// Sampled path of every constrained state.
    pub fn path_values(&self, decisions: &DVector<f64>) -> Vec<DVector<f64>> {
        self.path_constraints
            .iter()
            .map(|c| &c.influence * decisions)
            .collect()
    }

    /// Largest bound violation and the variable attaining it. The rate box is
    /// part of the search space, not a penalized constraint, but it is
    /// reported here for the solution summary.
    pub fn max_violation(&self, decisions: &DVector<f64>) -> (f64, String) {
        let mut worst = 0.0f64;
        let mut name = self.rate_input.clone();
        for j in 0..self.n_cells {
            let d = decisions[j];
            let over = (self.rate_bounds.0 - d).max(d - self.rate_bounds.1);
            if over > worst {
                worst = over;
                name = self.rate_input.clone();
            }
        }
        for (constraint, path) in self.path_constraints.iter().zip(self.path_values(decisions)) {
            for k in 0..self.samples {
                let over = (constraint.lower - path[k]).max(path[k] - constraint.upper);
                if over > worst {
                    worst = over;
                    name = constraint.name.clone();
                }
            }
        }
        (worst, name)
    }

    /// Per-variable worst violations for the solution summary.
    pub fn violation_summary(&self, decisions: &DVector<f64>) -> Vec<(String, f64)> {
        let mut summary = Vec::new();
        let mut rate_worst = 0.0f64;
        for j in 0..self.n_cells {
            let d = decisions[j];
            rate_worst = rate_worst
                .max(self.rate_bounds.0 - d)
                .max(d - self.rate_bounds.1);
        }
        summary.push((self.rate_input.clone(), rate_worst.max(0.0)));
        for (constraint, path) in self.path_constraints.iter().zip(self.path_values(decisions)) {
            let mut worst = 0.0f64;
            for k in 0..self.samples {
                worst = worst
                    .max(constraint.lower - path[k])
                    .max(path[k] - constraint.upper);
            }
            summary.push((constraint.name.clone(), worst.max(0.0)));
        }
        summary
    }

    /// Uniformly shrinks a decision vector until the path is feasible. The
    /// path is linear in the decisions and every bound interval straddles
    /// zero, so a small enough shrink always restores feasibility.
    pub fn shrink_to_feasible(&self, decisions: &DVector<f64>) -> DVector<f64> {
        let mut scale = 1.0f64;
        for j in 0..self.n_cells {
            let d = decisions[j];
            if d > self.rate_bounds.1 {
                scale = scale.min(self.rate_bounds.1 / d);
            } else if d < self.rate_bounds.0 {
                scale = scale.min(self.rate_bounds.0 / d);
            }
        }
        for (constraint, path) in self.path_constraints.iter().zip(self.path_values(decisions)) {
            for k in 0..self.samples {
                let x = path[k];
                if x > constraint.upper {
                    scale = scale.min(constraint.upper / x);
                } else if x < constraint.lower {
                    scale = scale.min(constraint.lower / x);
                }
            }
        }
        if scale >= 1.0 {
            decisions.clone()
        } else {
            decisions * (scale * (1.0 - 1e-12))
        }
    }

    /// Fine-grid rate signal realizing a decision vector: each decision held
    /// over its cell, inactive surfaces pinned to zero, final sample zero.
    pub fn rate_signal(&self, decisions: &DVector<f64>) -> Result<InputSignal, OedError> {
        let mut labels = Vec::new();
        let mut channels = Vec::new();
        for rate_name in &self.rate_inputs {
            let mut samples = vec![0.0; self.samples];
            if *rate_name == self.rate_input {
                for j in 0..self.n_cells {
                    for k in j * self.repeat..(j + 1) * self.repeat {
                        samples[k] = decisions[j];
                    }
                }
            }
            labels.push(rate_name.clone());
            channels.push(samples);
        }
        Ok(InputSignal::new(
            self.sample_period,
            labels,
            channels,
            SignalMetadata {
                kind: SignalKind::Optimized,
                amplitude: None,
                pulse_width: None,
            },
        )?)
    }

    /// Fine-grid deflection signal: the running integral of the rates.
    pub fn deflection_signal(&self, decisions: &DVector<f64>) -> Result<InputSignal, OedError> {
        let mut labels = Vec::new();
        let mut channels = Vec::new();
        for (surface, rate_name) in self.surfaces.iter().zip(&self.rate_inputs) {
            let mut samples = vec![0.0; self.samples];
            if *rate_name == self.rate_input {
                let mut level = 0.0;
                for j in 0..self.n_cells {
                    for k in j * self.repeat..(j + 1) * self.repeat {
                        samples[k] = level;
                        level += decisions[j] * self.sample_period;
                    }
                }
                samples[self.samples - 1] = level;
            }
            labels.push(surface.clone());
            channels.push(samples);
        }
        Ok(InputSignal::new(
            self.sample_period,
            labels,
            channels,
            SignalMetadata {
                kind: SignalKind::Optimized,
                amplitude: None,
                pulse_width: None,
            },
        )?)
    }

    /// Information report at a decision vector, on the kept parameters.
    pub fn report(
        &self,
        problem: &OedProblem,
        decisions: &DVector<f64>,
    ) -> Result<InformationReport, OedError> {
        let rates = self.rate_signal(decisions)?;
        Ok(information_report(
            &problem.model,
            &rates,
            &problem.sensor,
            &self.kept_parameters,
        )?)
    }

    /// Augmented-Lagrangian value with multipliers per path-bound side.
    pub fn al_value(&self, decisions: &DVector<f64>, mult: &Multipliers, rho: f64) -> f64 {
        let objective = self.objective(decisions);
        if !objective.is_finite() {
            return f64::INFINITY;
        }
        let mut penalty = 0.0;
        for ((constraint, path), (lam_lo, lam_hi)) in self
            .path_constraints
            .iter()
            .zip(self.path_values(decisions))
            .zip(&mult.path)
        {
            for k in 0..self.samples {
                let g_hi = path[k] - constraint.upper;
                let g_lo = constraint.lower - path[k];
                let a_hi = (lam_hi[k] + rho * g_hi).max(0.0);
                let a_lo = (lam_lo[k] + rho * g_lo).max(0.0);
                penalty += a_hi * a_hi - lam_hi[k] * lam_hi[k];
                penalty += a_lo * a_lo - lam_lo[k] * lam_lo[k];
            }
        }
        objective + penalty / (2.0 * rho)
    }

    /// Value and exact gradient of the augmented Lagrangian.
    pub fn al_value_grad(
        &self,
        decisions: &DVector<f64>,
        mult: &Multipliers,
        rho: f64,
    ) -> (f64, DVector<f64>) {
        let n = self.kept_parameters.len();
        let fisher = self.fisher(decisions);
        let scaled = self.scaled_fisher(&fisher);
        let Some(chol) = scaled.cholesky() else {
            return (f64::INFINITY, DVector::zeros(self.n_cells));
        };
        let inverse = chol.inverse();
        let objective = inverse.trace() / n as f64;

        // d objective = -(1/n) tr(C dF~ C) with C the scaled covariance;
        // sandwiching the nominals gives the weights on the unscaled blocks.
        let csq = &inverse * &inverse;
        let mut weights = DMatrix::<f64>::zeros(n, n);
        for p in 0..n {
            for q in 0..n {
                weights[(p, q)] = self.nominals[p] * csq[(p, q)] * self.nominals[q];
            }
        }
        let mut gradient = DVector::<f64>::zeros(self.n_cells);
        for p in 0..n {
            for q in p..n {
                let block = &self.gram[tri(p, q, n)];
                let forward = block * decisions;
                let adjoint = block.tr_mul(decisions);
                let factor = if p == q {
                    weights[(p, p)]
                } else {
                    2.0 * weights[(p, q)]
                };
                gradient.axpy(-factor / n as f64, &(forward + adjoint), 1.0);
            }
        }

        let mut penalty = 0.0;
        for ((constraint, path), (lam_lo, lam_hi)) in self
            .path_constraints
            .iter()
            .zip(self.path_values(decisions))
            .zip(&mult.path)
        {
            let mut active = DVector::<f64>::zeros(self.samples);
            for k in 0..self.samples {
                let g_hi = path[k] - constraint.upper;
                let g_lo = constraint.lower - path[k];
                let a_hi = (lam_hi[k] + rho * g_hi).max(0.0);
                let a_lo = (lam_lo[k] + rho * g_lo).max(0.0);
                penalty += a_hi * a_hi - lam_hi[k] * lam_hi[k];
                penalty += a_lo * a_lo - lam_lo[k] * lam_lo[k];
                active[k] = a_hi - a_lo;
            }
            gradient += constraint.influence.tr_mul(&active);
        }
        (objective + penalty / (2.0 * rho), gradient)
    }

    /// Forward-difference gradient of the augmented Lagrangian.
    pub fn al_gradient_fd(
        &self,
        decisions: &DVector<f64>,
        mult: &Multipliers,
        rho: f64,
    ) -> (f64, DVector<f64>) {
        let base = self.al_value(decisions, mult, rho);
        let entries: Vec<f64> = (0..self.n_cells)
            .into_par_iter()
            .map(|j| {
                let step = 1e-7 * decisions[j].abs().max(1.0);
                let mut probe = decisions.clone();
                probe[j] += step;
                (self.al_value(&probe, mult, rho) - base) / step
            })
            .collect();
        (base, DVector::from_vec(entries))
    }

    /// Fresh zero multipliers sized for this transcription.
    pub fn zero_multipliers(&self) -> Multipliers {
        Multipliers {
            path: self
                .path_constraints
                .iter()
                .map(|_| {
                    (
                        DVector::zeros(self.samples),
                        DVector::zeros(self.samples),
                    )
                })
                .collect(),
        }
    }

    /// First-order multiplier update; returns the largest violation.
    pub fn update_multipliers(
        &self,
        decisions: &DVector<f64>,
        mult: &mut Multipliers,
        rho: f64,
    ) -> f64 {
        let mut worst = 0.0f64;
        for ((constraint, path), (lam_lo, lam_hi)) in self
            .path_constraints
            .iter()
            .zip(self.path_values(decisions))
            .zip(mult.path.iter_mut())
        {
            for k in 0..self.samples {
                let g_hi = path[k] - constraint.upper;
                let g_lo = constraint.lower - path[k];
                lam_hi[k] = (lam_hi[k] + rho * g_hi).max(0.0);
                lam_lo[k] = (lam_lo[k] + rho * g_lo).max(0.0);
                worst = worst.max(g_hi).max(g_lo);
            }
        }
        worst
    }
}

/// Lagrange-multiplier estimates for the sampled path bounds, one
/// (lower-side, upper-side) pair of vectors per constrained state.
#[derive(Debug, Clone)]
pub struct Multipliers {
    pub path: Vec<(DVector<f64>, DVector<f64>)>,
}
