//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or analyzing a scenario.
///
/// Verdicts (CHSH violations, infeasibility, marginal-law violations) are
/// *not* errors; they are ordinary return values. Errors are reserved for
/// malformed inputs and numerical failures.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("dimension {dim} exceeds the configured maximum of {max}: scenario too large")]
    DimensionOverflow { dim: usize, max: usize },

    #[error("non-finite entry (NaN or infinity) at position {index}")]
    NonFinite { index: usize },

    #[error("matrix is not Hermitian: ‖M − M†‖_F = {max_asymmetry:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    #[error("observable {label:?} is not dichotomic: ‖M² − I‖_F = {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    NotDichotomic {
        label: String,
        defect: f64,
        tolerance: f64,
    },

    #[error("invalid state: {reason}")]
    InvalidState { reason: String },

    #[error("invalid PVM for context {context}: {reason}")]
    InvalidPvm { context: String, reason: String },

    #[error("invalid scenario: {reason}")]
    InvalidScenario { reason: String },

    #[error("missing local observables: operation requires product-form observables A, A', B, B'")]
    MissingLocalObservables,

    #[error("{party}'s observables do not commute: ‖[{first},{second}]‖_F = {norm:.3e} exceeds {tolerance:.3e}")]
    NonCommutingLocals {
        party: String,
        first: String,
        second: String,
        norm: f64,
        tolerance: f64,
    },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigensolverNoConvergence { sweeps: usize },

    #[error("eigendecomposition reconstruction residual {residual:.3e} exceeds {tolerance:.3e}")]
    EigenReconstruction { residual: f64, tolerance: f64 },

    #[error("expectation value has imaginary residue {residue:.3e} beyond 1e-10; operator is not Hermitian enough")]
    ImaginaryResidue { residue: f64 },

    #[error("probability {value:.3e} below -1e-12: modeling bug rather than floating-point dust")]
    NegativeProbability { value: f64 },

    #[error("invalid behavior: {reason}")]
    InvalidBehavior { reason: String },

    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("shots must be at least 1")]
    ZeroShots,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("exact mode requires exactly normalized rational tables: {reason}")]
    NotExactlyRational { reason: String },
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad
    /// inputs). The CLI maps these to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigensolverNoConvergence { .. }
                | Error::EigenReconstruction { .. }
                | Error::ImaginaryResidue { .. }
        )
    }
}
