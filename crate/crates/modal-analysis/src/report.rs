//! Eigenvalue extraction and canonical mode labeling.

use std::f64::consts::PI;

use flight_dynamics::LtiModel;
use nalgebra::Complex;

use crate::error::ModalError;

/// State ordering of the canonical longitudinal model.
const LONGITUDINAL_STATES: [&str; 4] = ["airspeed", "alpha", "pitch", "pitch_rate"];
/// State ordering of the canonical lateral model.
const LATERAL_STATES: [&str; 4] = ["sideslip", "roll", "roll_rate", "yaw_rate"];

/// Canonical mode names of the decoupled 4-state aircraft models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeLabel {
    Phugoid,
    ShortPeriod,
    Spiral,
    DutchRoll,
    RollSubsidence,
    Unclassified,
}

impl ModeLabel {
    /// Human-readable name as used in report output.
    pub fn name(&self) -> &'static str {
        match self {
            ModeLabel::Phugoid => "Phugoid",
            ModeLabel::ShortPeriod => "Short period",
            ModeLabel::Spiral => "Spiral",
            ModeLabel::DutchRoll => "Dutch roll",
            ModeLabel::RollSubsidence => "Roll subsidence",
            ModeLabel::Unclassified => "Unclassified",
        }
    }
}

/// Dynamic character of one mode: a conjugate root pair or a single real root.
#[derive(Debug, Clone, Copy)]
pub struct ModeCharacteristics {
    /// Representative root; oscillatory modes carry the positive-imaginary
    /// member of the pair, the conjugate is implied.
    pub eigenvalue: Complex<f64>,
    /// Undamped natural frequency, rad/s.
    pub natural_frequency: f64,
    /// Damping ratio; reported as 1.0 for stable real modes and absent for
    /// unstable real modes.
    pub damping_ratio: Option<f64>,
    /// Time constant, s, defined as the reciprocal natural frequency.
    pub time_constant: f64,
    /// Overshoot percentage; oscillatory modes only.
    pub overshoot_percent: Option<f64>,
    /// Oscillation period, s; oscillatory modes only.
    pub period: Option<f64>,
    /// Canonical mode name, or `Unclassified` outside the two canonical models.
    pub label: ModeLabel,
    /// False when the mode diverges.
    pub stable: bool,
}

impl ModeCharacteristics {
    /// True for a conjugate pair, false for a single real root.
    pub fn is_oscillatory(&self) -> bool {
        self.eigenvalue.im > 0.0
    }

    /// Contribution to the eigenvalue sum; conjugate pairs count twice.
    pub fn eigenvalue_sum(&self) -> f64 {
        if self.is_oscillatory() {
            2.0 * self.eigenvalue.re
        } else {
            self.eigenvalue.re
        }
    }
}

/// Computes the mode characteristics of a linear model and labels the
/// canonical modes.
///
/// Longitudinal models must split into two oscillatory pairs (the slower is
/// the Phugoid); lateral models into one oscillatory pair (Dutch roll) and
/// two real modes (slow Spiral, fast Roll subsidence). Models with other
/// state orderings are reported without labels. The result is sorted by
/// natural frequency, ascending.
pub fn modal_report(model: &LtiModel) -> Result<Vec<ModeCharacteristics>, ModalError> {
    let roots = model.a.clone().complex_eigenvalues();
    let (pairs, reals) = fold_conjugates(roots.as_slice())?;

    let mut modes: Vec<ModeCharacteristics> = pairs
        .into_iter()
        .map(oscillatory_mode)
        .chain(reals.into_iter().map(real_mode))
        .collect();
    modes.sort_by(|a, b| a.natural_frequency.total_cmp(&b.natural_frequency));
    label_canonical_modes(&mut modes, model)?;
    Ok(modes)
}

/// Splits a real matrix's spectrum into positive-imaginary representatives of
/// conjugate pairs and real roots.
fn fold_conjugates(roots: &[Complex<f64>]) -> Result<(Vec<Complex<f64>>, Vec<f64>), ModalError> {
    let mut uppers: Vec<Complex<f64>> = Vec::new();
    let mut lowers: Vec<Complex<f64>> = Vec::new();
    let mut reals: Vec<f64> = Vec::new();
    for root in roots {
        let tolerance = 1e-9 * root.norm().max(1.0);
        if root.im.abs() <= tolerance {
            reals.push(root.re);
        } else if root.im > 0.0 {
            uppers.push(*root);
        } else {
            lowers.push(*root);
        }
    }
    for upper in &uppers {
        let tolerance = 1e-6 * upper.norm().max(1.0);
        let partner = lowers
            .iter()
            .position(|low| (low.conj() - upper).norm() <= tolerance);
        match partner {
            Some(index) => {
                lowers.swap_remove(index);
            }
            None => {
                return Err(ModalError::UnpairedComplexRoot {
                    real: upper.re,
                    imaginary: upper.im,
                })
            }
        }
    }
    if let Some(orphan) = lowers.first() {
        return Err(ModalError::UnpairedComplexRoot {
            real: orphan.re,
            imaginary: orphan.im,
        });
    }
    Ok((uppers, reals))
}

fn oscillatory_mode(root: Complex<f64>) -> ModeCharacteristics {
    let natural_frequency = root.norm();
    let damping = -root.re / natural_frequency;
    let overshoot = if damping.abs() < 1.0 {
        Some(100.0 * (-damping * PI / (1.0 - damping * damping).sqrt()).exp())
    } else {
        None
    };
    ModeCharacteristics {
        eigenvalue: root,
        natural_frequency,
        damping_ratio: Some(damping),
        time_constant: 1.0 / natural_frequency,
        overshoot_percent: overshoot,
        period: Some(2.0 * PI / root.im),
        label: ModeLabel::Unclassified,
        stable: root.re <= 0.0,
    }
}

fn real_mode(root: f64) -> ModeCharacteristics {
    let natural_frequency = root.abs();
    ModeCharacteristics {
        eigenvalue: Complex::new(root, 0.0),
        natural_frequency,
        damping_ratio: (root < 0.0).then_some(1.0),
        time_constant: if natural_frequency > 0.0 {
            1.0 / natural_frequency
        } else {
            f64::INFINITY
        },
        overshoot_percent: None,
        period: None,
        label: ModeLabel::Unclassified,
        stable: root <= 0.0,
    }
}

/// Assigns canonical labels when the model's state ordering identifies it as
/// one of the two decoupled 4-state systems. `modes` must be sorted by
/// natural frequency.
fn label_canonical_modes(
    modes: &mut [ModeCharacteristics],
    model: &LtiModel,
) -> Result<(), ModalError> {
    let names: Vec<&str> = model.state_names.iter().map(String::as_str).collect();
    let oscillatory = modes.iter().filter(|m| m.is_oscillatory()).count();
    let real = modes.len() - oscillatory;

    if names == LONGITUDINAL_STATES {
        if oscillatory != 2 || real != 0 {
            return Err(ModalError::UnexpectedEigenstructure {
                model: "longitudinal",
                expected: "two oscillatory pairs",
                oscillatory,
                real,
            });
        }
        modes[0].label = ModeLabel::Phugoid;
        modes[1].label = ModeLabel::ShortPeriod;
    } else if names == LATERAL_STATES {
        if oscillatory != 1 || real != 2 {
            return Err(ModalError::UnexpectedEigenstructure {
                model: "lateral",
                expected: "one oscillatory pair and two real modes",
                oscillatory,
                real,
            });
        }
        for mode in modes.iter_mut() {
            if mode.is_oscillatory() {
                mode.label = ModeLabel::DutchRoll;
            }
        }
        let mut real_modes = modes.iter_mut().filter(|m| !m.is_oscillatory());
        real_modes.next().expect("two real modes").label = ModeLabel::Spiral;
        real_modes.next().expect("two real modes").label = ModeLabel::RollSubsidence;
    }
    Ok(())
}
