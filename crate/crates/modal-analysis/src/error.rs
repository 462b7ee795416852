//! Error type for modal analysis.

use thiserror::Error;

/// Failures while extracting or classifying modes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModalError {
    /// A canonical model produced an eigenvalue pattern that does not match
    /// its expected mode structure.
    #[error(
        "expected {expected} for the {model} model, found {oscillatory} oscillatory and {real} real mode(s)"
    )]
    UnexpectedEigenstructure {
        model: &'static str,
        expected: &'static str,
        oscillatory: usize,
        real: usize,
    },
    /// A complex root had no conjugate partner; the state matrix is not real
    /// or the eigensolver failed.
    #[error("complex eigenvalue {real} + {imaginary}i has no conjugate partner")]
    UnpairedComplexRoot { real: f64, imaginary: f64 },
}
