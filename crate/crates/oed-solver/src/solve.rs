//! Constrained design optimization.
//!
//! The reduced problem minimizes the scaled A-criterion over the cellwise
//! surface rates subject to the rate box and the sampled path bounds. Path
//! bounds enter through an augmented Lagrangian whose penalty weight grows
//! only when an outer iteration fails to cut the constraint violation, and
//! each subproblem is minimized with a projected L-BFGS iteration. Several
//! starts derived from the initial guess run independently; results that
//! improve every parameter's information diagonal over the guess are
//! preferred, then the lowest objective wins, with deterministic
//! tie-breaking.

use maneuver_signals::{gen_3211, InputSignal, SignalKind, SignalMetadata};
use nalgebra::DVector;
use rayon::prelude::*;

use fisher_information::InformationReport;

use crate::error::OedError;
use crate::problem::{GradientMode, OedProblem};
use crate::transcribe::{Multipliers, Transcription, FEASIBILITY_TOLERANCE};

/// Initial penalty weight of the augmented Lagrangian.
const RHO_INIT: f64 = 100.0;
/// Penalty growth factor, applied only on insufficient violation decrease.
const RHO_GROWTH: f64 = 5.0;
const RHO_MAX: f64 = 1e8;
/// Required per-outer violation decrease before the penalty grows.
const VIOLATION_DECREASE: f64 = 0.25;
/// Violations below this multiple of the feasibility tolerance are handled
/// by multiplier updates alone; growing the penalty further only stiffens
/// the subproblems.
const RHO_GROWTH_FLOOR: f64 = 10.0;
/// Consecutive stagnant feasible outers before declaring convergence.
const STAGNATION_LIMIT: usize = 5;
/// Outer iteration cap.
const MAX_OUTER: usize = 500;
/// Relative projected-gradient tolerance for inner convergence.
const STATIONARITY_TOL: f64 = 1e-6;
/// L-BFGS memory depth.
const LBFGS_MEMORY: usize = 25;
const ARMIJO_SLOPE: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 30;
/// Pulse widths of the internally generated multistart family, s.
const START_PULSE_WIDTHS: [f64; 4] = [0.2, 0.35, 0.5, 0.75];

/// Termination state of the winning start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Feasible and stationary within tolerance.
    Converged,
    /// Best feasible point found within the iteration budget.
    IterationLimit,
}

/// An optimized design together with its quality evidence.
#[derive(Debug, Clone)]
pub struct OedSolution {
    /// Surface deflections about trim on the fine grid.
    pub signal: InputSignal,
    /// Surface rates realizing the deflections.
    pub rates: InputSignal,
    /// Every constrained quantity sampled along the solution: bounded model
    /// states (including deflections) and the commanded rate.
    pub constrained_path: InputSignal,
    /// Scaled A-criterion at the solution.
    pub objective: f64,
    /// Scaled A-criterion at the initial guess.
    pub initial_objective: f64,
    /// Worst residual bound violation per constrained variable.
    pub max_violation: Vec<(String, f64)>,
    /// Outer iterations spent by the winning start.
    pub iterations: usize,
    pub status: SolveStatus,
    /// Information report at the solution, on the kept parameters.
    pub report: InformationReport,
    /// Parameters excluded because the guess carries no information on them.
    pub dropped_parameters: Vec<String>,
}

struct StartOutcome {
    decisions: DVector<f64>,
    objective: f64,
    iterations: usize,
    converged: bool,
}

/// Solves the design problem. The returned design is always feasible and
/// never worse than the initial guess.
pub fn solve_oed(problem: &OedProblem) -> Result<OedSolution, OedError> {
    let transcription = Transcription::new(problem)?;
    let initial = transcription.initial_decisions.clone();
    let initial_objective = transcription.objective(&initial);

    let budget = problem.iteration_budget.unwrap_or(match problem.gradient_mode {
        GradientMode::FiniteDifference => (80, 4000),
        GradientMode::Exact => (1600, 40000),
    });
    let starts = build_starts(problem, &transcription);
    let outcomes: Vec<StartOutcome> = starts
        .par_iter()
        .map(|start| minimize(&transcription, start, problem.gradient_mode, budget))
        .collect();

    // Deterministic selection. Local optima of the A-criterion can trade a
    // single parameter's standalone accuracy (its information diagonal) for
    // joint-covariance gains; the per-parameter CRLB assessment used to
    // judge flight-test designs rejects such trades. Among the multistart
    // results, designs that improve every diagonal over the guess are
    // therefore preferred; within a preference class the lowest objective
    // wins, with value ties broken on the decision vector.
    let guess_diagonal = transcription.fisher(&initial).diagonal();
    let improves_every_diagonal = |outcome: &StartOutcome| {
        let diagonal = transcription.fisher(&outcome.decisions).diagonal();
        (0..diagonal.len()).all(|i| diagonal[i] > guess_diagonal[i])
    };
    let mut best: Option<(&StartOutcome, bool)> = None;
    for outcome in &outcomes {
        let improving = improves_every_diagonal(outcome);
        let better = match &best {
            None => true,
            Some((current, current_improving)) => {
                if improving != *current_improving {
                    improving
                } else {
                    match outcome.objective.total_cmp(&current.objective) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => {
                            lexicographic_less(&outcome.decisions, &current.decisions)
                        }
                    }
                }
            }
        };
        if better {
            best = Some((outcome, improving));
        }
    }
    let (best, _) = best.expect("at least the guess start exists");

    // The feasible guess is always a candidate, so the solution cannot be
    // worse than the guess.
    let (decisions, objective, iterations, converged) =
        if best.objective <= initial_objective {
            (
                best.decisions.clone(),
                best.objective,
                best.iterations,
                best.converged,
            )
        } else {
            (initial.clone(), initial_objective, 0, false)
        };

    let signal = transcription.deflection_signal(&decisions)?;
    let rates = transcription.rate_signal(&decisions)?;
    let constrained_path = constrained_path_signal(&transcription, &decisions)?;
    let report = transcription.report(problem, &decisions)?;
    let max_violation = transcription.violation_summary(&decisions);
    Ok(OedSolution {
        signal,
        rates,
        constrained_path,
        objective,
        initial_objective,
        max_violation,
        iterations,
        status: if converged {
            SolveStatus::Converged
        } else {
            SolveStatus::IterationLimit
        },
        report,
        dropped_parameters: transcription.dropped_parameters.clone(),
    })
}

/// All constrained quantities along the design, as one multi-channel signal.
fn constrained_path_signal(
    transcription: &Transcription,
    decisions: &DVector<f64>,
) -> Result<InputSignal, OedError> {
    let mut labels = Vec::new();
    let mut channels = Vec::new();
    for (constraint, path) in transcription
        .path_constraints
        .iter()
        .zip(transcription.path_values(decisions))
    {
        labels.push(constraint.name.clone());
        channels.push(path.iter().copied().collect());
    }
    let rates = transcription.rate_signal(decisions)?;
    let rate_channel = rates
        .channel(&transcription.rate_input)
        .expect("rate signal carries the active rate")
        .to_vec();
    labels.push(transcription.rate_input.clone());
    channels.push(rate_channel);
    Ok(InputSignal::new(
        rates.sample_period(),
        labels,
        channels,
        SignalMetadata::custom(),
    )?)
}

/// The initial guess plus, for doublet-family guesses, a pulse-width sweep
/// with energy-matched amplitudes. Internal starts may violate path bounds;
/// only the returned design must be feasible.
fn build_starts(problem: &OedProblem, transcription: &Transcription) -> Vec<DVector<f64>> {
    let mut starts = vec![transcription.initial_decisions.clone()];
    let meta = &problem.initial_guess.metadata;
    if meta.kind != SignalKind::ThreeTwoOneOne {
        return starts;
    }
    let (Some(amplitude), Some(pulse_width)) = (meta.amplitude, meta.pulse_width) else {
        return starts;
    };
    let grid = problem.initial_guess.grid();
    let h = problem.initial_guess.sample_period();
    let repeat = transcription.repeat;
    let rate_cap = transcription
        .rate_bounds
        .1
        .min(-transcription.rate_bounds.0);
    let start_time = 1.0f64.min(0.1 * problem.horizon);
    for width in START_PULSE_WIDTHS {
        // Equal-energy scaling: shorter pulses get larger amplitudes.
        let scaled = amplitude * (pulse_width / width).sqrt();
        let Ok(candidate) = gen_3211(
            &transcription.surface,
            scaled,
            width,
            start_time,
            rate_cap,
            grid,
        ) else {
            continue;
        };
        let deflection = candidate
            .channel(&transcription.surface)
            .expect("generated channel");
        let mut decisions = DVector::<f64>::zeros(transcription.n_cells);
        for j in 0..transcription.n_cells {
            let rise = deflection[(j + 1) * repeat] - deflection[j * repeat];
            let slope = rise / (repeat as f64 * h);
            decisions[j] = slope.clamp(transcription.rate_bounds.0, transcription.rate_bounds.1);
        }
        starts.push(decisions);
    }
    starts
}

fn lexicographic_less(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    for j in 0..a.len() {
        match a[j].total_cmp(&b[j]) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Augmented-Lagrangian outer loop from one start. Returns the best feasible
/// point encountered; a uniform shrink of the running iterate guarantees a
/// feasible candidate every outer iteration.
fn minimize(
    transcription: &Transcription,
    start: &DVector<f64>,
    mode: GradientMode,
    budget: (usize, usize),
) -> StartOutcome {
    let (inner_budget, total_budget) = budget;
    let mut decisions = start.clone();
    let mut multipliers = transcription.zero_multipliers();
    let mut rho = RHO_INIT;
    let mut previous_violation = f64::INFINITY;
    let mut spent = 0usize;
    let mut converged = false;
    let mut outer_count = 0usize;

    let feasible_start = transcription.shrink_to_feasible(&decisions);
    let mut best_objective = transcription.objective(&feasible_start);
    let mut best_decisions = feasible_start;
    let mut stagnant = 0usize;

    for outer in 1..=MAX_OUTER {
        outer_count = outer;
        let (next, inner_spent, stationary) = lbfgs_box(
            transcription,
            &decisions,
            &multipliers,
            rho,
            mode,
            inner_budget.min(total_budget - spent),
        );
        decisions = next;
        spent += inner_spent;

        let candidate = transcription.shrink_to_feasible(&decisions);
        let objective = transcription.objective(&candidate);
        if objective < best_objective * (1.0 - 1e-9) {
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if objective < best_objective {
            best_objective = objective;
            best_decisions = candidate;
        }

        let violation = transcription.update_multipliers(&decisions, &mut multipliers, rho);
        if violation <= FEASIBILITY_TOLERANCE && (stationary || stagnant >= STAGNATION_LIMIT) {
            converged = true;
            break;
        }
        if stagnant >= STAGNATION_LIMIT {
            break;
        }
        if spent >= total_budget {
            break;
        }
        if violation > VIOLATION_DECREASE * previous_violation
            && violation > RHO_GROWTH_FLOOR * FEASIBILITY_TOLERANCE
        {
            rho = (rho * RHO_GROWTH).min(RHO_MAX);
        }
        previous_violation = violation;
    }

    StartOutcome {
        decisions: best_decisions,
        objective: best_objective,
        iterations: outer_count,
        converged,
    }
}

/// Projected L-BFGS with an Armijo backtracking search along the projected
/// path. Returns the final iterate, the iterations spent, and whether the
/// projected gradient met the stationarity tolerance.
fn lbfgs_box(
    transcription: &Transcription,
    start: &DVector<f64>,
    multipliers: &Multipliers,
    rho: f64,
    mode: GradientMode,
    budget: usize,
) -> (DVector<f64>, usize, bool) {
    let (lo, hi) = transcription.rate_bounds;
    let project = |d: &DVector<f64>| d.map(|v| v.clamp(lo, hi));
    let evaluate = |d: &DVector<f64>| match mode {
        GradientMode::FiniteDifference => transcription.al_gradient_fd(d, multipliers, rho),
        GradientMode::Exact => transcription.al_value_grad(d, multipliers, rho),
    };

    let mut x = project(start);
    let (mut value, mut gradient) = evaluate(&x);
    let mut memory: Vec<(DVector<f64>, DVector<f64>, f64)> = Vec::new();
    let mut spent = 0usize;

    for _ in 0..budget {
        spent += 1;
        let projected_step = (&x - &gradient).map(|v| v.clamp(lo, hi)) - &x;
        let scale = 1.0 + x.amax();
        if projected_step.amax() <= STATIONARITY_TOL * scale {
            return (x, spent, true);
        }

        let mut direction = two_loop(&memory, &gradient);
        if direction.dot(&gradient) >= 0.0 {
            memory.clear();
            direction = -&gradient;
        }
        if memory.is_empty() {
            // Fresh memory: normalize the steepest-descent step so the first
            // trial is unit-sized however stiff the penalty has become;
            // otherwise the backtracking floor can sit above the curvature
            // limit and the search dies on the spot.
            direction /= gradient.amax().max(1.0);
        }

        // Backtracking Armijo search along the projected path.
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = (&x + alpha * &direction).map(|v| v.clamp(lo, hi));
            let step = &trial - &x;
            let slope = gradient.dot(&step);
            if slope < 0.0 {
                let trial_value = transcription.al_value(&trial, multipliers, rho);
                if trial_value <= value + ARMIJO_SLOPE * slope {
                    accepted = Some((trial, trial_value));
                    break;
                }
            }
            alpha *= BACKTRACK;
        }
        let Some((next, next_value)) = accepted else {
            // Stalled line search: treat the point as locally stationary.
            return (x, spent, false);
        };

        let (_, next_gradient) = evaluate(&next);
        let s = &next - &x;
        let y = &next_gradient - &gradient;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if memory.len() == LBFGS_MEMORY {
                memory.remove(0);
            }
            memory.push((s, y, sy));
        }
        x = next;
        value = next_value;
        gradient = next_gradient;
    }
    (x, spent, false)
}

/// Two-loop recursion producing the L-BFGS descent direction.
fn two_loop(memory: &[(DVector<f64>, DVector<f64>, f64)], gradient: &DVector<f64>) -> DVector<f64> {
    if memory.is_empty() {
        return -gradient;
    }
    let mut q = gradient.clone();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, sy) in memory.iter().rev() {
        let alpha = s.dot(&q) / sy;
        q.axpy(-alpha, y, 1.0);
        alphas.push(alpha);
    }
    let (_, y_last, sy_last) = memory.last().expect("nonempty");
    q *= sy_last / y_last.dot(y_last);
    for ((s, y, sy), alpha) in memory.iter().zip(alphas.iter().rev()) {
        let beta = y.dot(&q) / sy;
        q.axpy(alpha - beta, s, 1.0);
    }
    -q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bang_bang::bang_bang_metric;
    use crate::constraints::{EnvelopeConstraints, VariableBounds};
    use fisher_information::SensorModel;
    use flight_dynamics::{LtiModel, MatrixSlot, ParameterEntry, VariableKind};
    use maneuver_signals::SampleGrid;
    use nalgebra::DMatrix;

    /// First-order lag with one unknown control effectiveness. With loose
    /// state bounds the information-optimal deflection saturates its own
    /// bound, so the solved design must ride it.
    fn saturating_problem() -> OedProblem {
        let (a, b) = (-1.2, 0.8);
        let model = LtiModel {
            a: DMatrix::from_row_slice(2, 2, &[a, b, 0.0, 0.0]),
            b: DMatrix::from_column_slice(2, 1, &[0.0, 1.0]),
            state_names: vec!["x".to_string(), "surface".to_string()],
            input_names: vec!["surface_rate".to_string()],
            state_kinds: vec![VariableKind::BodyState, VariableKind::DeflectionState],
            input_kinds: vec![VariableKind::RateInput],
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
                    matrix: MatrixSlot::A,
                    row: 0,
                    col: 1,
                    scale: 1.0,
                },
            ],
        };
        let constraints = EnvelopeConstraints {
            variables: vec![
                VariableBounds {
                    name: "x".to_string(),
                    design: (-50.0, 50.0),
                    envelope: None,
                    trim: 0.0,
                },
                VariableBounds {
                    name: "surface".to_string(),
                    design: (-0.1, 0.1),
                    envelope: None,
                    trim: 0.0,
                },
                VariableBounds {
                    name: "surface_rate".to_string(),
                    design: (-2.0, 2.0),
                    envelope: None,
                    trim: 0.0,
                },
            ],
            safety_margin: 0.2,
        };
        let sensor = SensorModel::new(vec![("x".to_string(), 0.1)], 100.0).unwrap();
        // A mild one-signed interior guess, strictly feasible; the energy
        // gradient grows it toward the single saturated lobe.
        let samples = 501;
        let mut u = vec![0.0; samples];
        for (k, v) in u.iter_mut().enumerate() {
            let t = k as f64 * 0.01;
            *v = 0.04 * (t - 0.5).clamp(0.0, 1.0);
        }
        let guess = InputSignal::new(
            0.01,
            vec!["surface".to_string()],
            vec![u],
            SignalMetadata::custom(),
        )
        .unwrap();
        let mut problem = OedProblem::new(
            model,
            sensor,
            vec!["b".to_string()],
            constraints,
            guess,
        );
        problem.horizon = 5.0;
        problem.gradient_mode = GradientMode::Exact;
        problem
    }

    #[test]
    fn toy_solution_rides_the_deflection_bound() {
        let problem = saturating_problem();
        let solution = solve_oed(&problem).unwrap();

        // Oracle: ramp to the bound as fast as the cells allow, then hold.
        // A one-signed deflection cannot exceed this profile pointwise, and
        // for a single control-effectiveness parameter a pointwise larger
        // deflection is strictly more information.
        let transcription = Transcription::new(&problem).unwrap();
        let cell = 0.1f64;
        let mut oracle = DVector::<f64>::zeros(transcription.n_cells);
        let mut level = 0.0;
        for j in 0..transcription.n_cells {
            oracle[j] = ((0.1 - level) / cell).min(2.0);
            level += oracle[j] * cell;
        }
        let oracle_objective = transcription.objective(&oracle);
        assert!(
            solution.objective <= 1.02 * oracle_objective,
            "solved {} vs oracle {}",
            solution.objective,
            oracle_objective
        );

        let metric = bang_bang_metric(&solution.constrained_path, &problem.constraints);
        assert!(metric >= 0.9, "bound-riding fraction {metric}");
        for (name, violation) in &solution.max_violation {
            assert!(*violation <= 1e-9, "{name} violated by {violation:e}");
        }
    }

    #[test]
    fn solution_is_never_worse_than_the_guess() {
        let problem = saturating_problem();
        let solution = solve_oed(&problem).unwrap();
        assert!(solution.objective <= solution.initial_objective);
        assert!(solution.objective > 0.0);
    }

    #[test]
    fn repeated_solves_are_bitwise_identical() {
        let problem = saturating_problem();
        let first = solve_oed(&problem).unwrap();
        let second = solve_oed(&problem).unwrap();
        assert_eq!(first.objective.to_bits(), second.objective.to_bits());
        let a = first.signal.channel("surface").unwrap();
        let b = second.signal.channel("surface").unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn solution_objective_matches_scaled_report_fisher() {
        let problem = saturating_problem();
        let solution = solve_oed(&problem).unwrap();
        // Scaling identity: the reported unscaled Fisher matrix, sandwiched
        // by the nominal parameter values, reproduces the objective.
        let nominal = 0.8;
        let scaled = solution.report.fisher[(0, 0)] * nominal * nominal;
        let manual = 1.0 / scaled;
        assert!((solution.objective - manual).abs() <= 1e-12 * manual);
    }

    #[test]
    fn rate_signal_integrates_to_the_deflection_signal() {
        let problem = saturating_problem();
        let solution = solve_oed(&problem).unwrap();
        let rates = solution.rates.channel("surface_rate").unwrap();
        let deflection = solution.signal.channel("surface").unwrap();
        let h = solution.signal.sample_period();
        let mut level = 0.0;
        for k in 0..deflection.len() {
            assert!((deflection[k] - level).abs() < 1e-12, "sample {k}");
            level += rates[k] * h;
        }
    }

    #[test]
    fn grid_mismatch_with_control_period_is_rejected() {
        let mut problem = saturating_problem();
        problem.control_period = 0.13;
        assert!(matches!(
            solve_oed(&problem),
            Err(OedError::InvalidProblem { .. })
        ));
    }

    #[test]
    fn infeasible_box_guess_is_rejected() {
        let mut problem = saturating_problem();
        // Loose deflection bounds so the rate box is the binding constraint,
        // and a guess whose first cells slew at 2.5 rad/s.
        for v in &mut problem.constraints.variables {
            if v.name == "surface" {
                v.design = (-1.0, 1.0);
            }
        }
        let samples = problem.initial_guess.len();
        let mut u = vec![0.0; samples];
        for (k, v) in u.iter_mut().enumerate() {
            let t = k as f64 * 0.01;
            *v = 2.5 * t.min(0.3);
        }
        problem.initial_guess = InputSignal::new(
            0.01,
            vec!["surface".to_string()],
            vec![u],
            SignalMetadata::custom(),
        )
        .unwrap();
        match solve_oed(&problem) {
            Err(OedError::InfeasibleGuess { variable, .. }) => {
                assert_eq!(variable, "surface_rate");
            }
            other => panic!("expected InfeasibleGuess, got {other:?}"),
        }
    }

    #[test]
    fn multistart_family_is_built_for_doublet_guesses() {
        let problem = saturating_problem();
        let transcription = Transcription::new(&problem).unwrap();
        // Custom guess: only itself.
        assert_eq!(build_starts(&problem, &transcription).len(), 1);
        // Doublet-family metadata on a long enough horizon: the pulse-width
        // sweep joins in, every start respecting the rate box.
        let mut tagged = problem.clone();
        tagged.horizon = 8.0;
        let grid = SampleGrid::new(0.01, 801).unwrap();
        tagged.initial_guess = gen_3211("surface", 0.05, 0.4, 0.5, 2.0, grid).unwrap();
        let transcription = Transcription::new(&tagged).unwrap();
        let starts = build_starts(&tagged, &transcription);
        assert_eq!(starts.len(), 1 + START_PULSE_WIDTHS.len());
        for start in &starts {
            assert!(start.amax() <= 2.0 + 1e-12);
        }
    }
}
