//! Quantum states (pure vectors and density matrices) and expectation values.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, Matrix, HERMITICITY_TOL};
use num_complex::Complex64;

/// Norm tolerance for pure states and trace tolerance for density states.
pub const STATE_TOL: f64 = 1e-12;

/// Most negative eigenvalue a density matrix may carry before rejection.
pub const DENSITY_EIGENVALUE_FLOOR: f64 = -1e-10;

/// Expectation values must be real up to this imaginary residue.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

/// A state on a Hilbert space of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    /// Unit vector ψ.
    Pure(Vec<Complex64>),
    /// Hermitian, trace-one, positive-semidefinite matrix ρ.
    Density(Matrix),
}

impl State {
    /// Validates and wraps a pure state (unit norm within `1e-12`).
    pub fn pure(amplitudes: Vec<Complex64>) -> Result<State> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState { reason: "empty amplitude vector".into() });
        }
        for (index, z) in amplitudes.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState {
                reason: format!("pure state norm {} deviates from 1 beyond 1e-12", norm),
            });
        }
        Ok(State::Pure(amplitudes))
    }

    /// Validates and wraps a density matrix (Hermitian, trace one within
    /// `1e-12`, eigenvalues ≥ −1e-10).
    pub fn density(rho: Matrix) -> Result<State> {
        if !rho.is_square() {
            return Err(Error::InvalidState { reason: "density matrix must be square".into() });
        }
        rho.require_hermitian(HERMITICITY_TOL)?;
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState {
                reason: format!("density trace {} deviates from 1 beyond 1e-12", trace.re),
            });
        }
        let eigensystem = hermitian_eigensystem(&rho, HERMITICITY_TOL)?;
        if let Some(&lowest) = eigensystem.eigenvalues.first() {
            if lowest < DENSITY_EIGENVALUE_FLOOR {
                return Err(Error::InvalidState {
                    reason: format!("density matrix has eigenvalue {lowest:.3e} below -1e-10"),
                });
            }
        }
        Ok(State::Density(rho))
    }

    /// Computational basis state `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<State> {
        if index >= dim {
            return Err(Error::InvalidState {
                reason: format!("basis index {index} out of range for dimension {dim}"),
            });
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        State::pure(v)
    }

    /// The two-qubit singlet `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> State {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        State::Pure(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(-inv_sqrt2, 0.0),
            Complex64::new(0.0, 0.0),
        ])
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(v) => v.len(),
            State::Density(rho) => rho.rows(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, State::Pure(_))
    }
}

/// `⟨ψ|m|ψ⟩` for pure states, `tr(ρm)` for density states.
///
/// Requires `m` Hermitian within the default tolerance and a matching
/// dimension. The (rounding-level) imaginary part is checked against `1e-10`
/// and then discarded.
pub fn expectation(state: &State, m: &Matrix) -> Result<f64> {
    if !m.is_square() || m.rows() != state.dim() {
        return Err(Error::DimensionMismatch {
            context: "expectation",
            left: state.dim().to_string(),
            right: format!("{}×{}", m.rows(), m.cols()),
        });
    }
    m.require_hermitian(HERMITICITY_TOL)?;
    let value = raw_expectation(state, m)?;
    if value.im.abs() > IMAGINARY_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue { residue: value.im.abs() });
    }
    Ok(value.re)
}

/// Same contraction without the Hermiticity gate; used internally for
/// operators that are Hermitian only up to a validated tolerance.
pub(crate) fn raw_expectation(state: &State, m: &Matrix) -> Result<Complex64> {
    match state {
        State::Pure(psi) => {
            let m_psi = m.apply(psi)?;
            Ok(psi.iter().zip(&m_psi).map(|(a, b)| a.conj() * b).sum())
        }
        State::Density(rho) => Ok(rho.matmul(m)?.trace()),
    }
}
