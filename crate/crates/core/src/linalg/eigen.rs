//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Plane rotations are generalized to complex Givens rotations: each pivot
//! `(p, q)` is annihilated by the unitary that diagonalizes the 2×2 Hermitian
//! block `[[a_pp, a_pq], [a_qp, a_qq]]`. Convergence is declared when the
//! off-diagonal Frobenius mass drops to `1e-14·‖A‖_F`. The method is slow for
//! large matrices and essentially foolproof for the small ones this crate
//! handles.

use super::Matrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Sweep cap; exceeding it is reported as a numerical failure.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative off-diagonal mass at which the sweep loop stops.
const CONVERGENCE_FACTOR: f64 = 1e-14;

/// Relative tolerance for the post-solve reconstruction check.
const RECONSTRUCTION_FACTOR: f64 = 1e-10;

/// Full spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are real and ascending; column `i` of `vectors` is the
/// eigenvector for `eigenvalues[i]`. The columns are orthonormal; within a
/// degenerate cluster their individual directions are arbitrary, so consumers
/// should only rely on spectral projectors.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub eigenvalues: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigensystem {
    /// Eigenvector for the `i`-th (ascending) eigenvalue.
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|r| self.vectors.get(r, i)).collect()
    }

    /// `(eigenvalue, eigenvector)` pairs in ascending order.
    pub fn pairs(&self) -> Vec<(f64, Vec<Complex64>)> {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, self.eigenvector(i)))
            .collect()
    }

    /// Largest `|eigenvalue|`.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, &l| m.max(l.abs()))
    }

    /// Rank-1 projector sum over eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector_where(&self, keep: impl Fn(f64) -> bool) -> Matrix {
        let n = self.vectors.rows();
        let mut out = Matrix::zeros(n, n);
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            if !keep(l) {
                continue;
            }
            let v = self.eigenvector(i);
            for r in 0..n {
                for c in 0..n {
                    let val = out.get(r, c) + v[r] * v[c].conj();
                    out.set(r, c, val);
                }
            }
        }
        out
    }
}

fn off_diagonal_mass(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes a Hermitian matrix, returning the full real spectrum in
/// ascending order together with an orthonormal eigenbasis.
///
/// The input must be Hermitian within `hermiticity_tol` (Frobenius); the
/// reported [`Error::NotHermitian`] carries the measured asymmetry otherwise.
/// After convergence the reconstruction `‖A − VΛV†‖_F ≤ 1e-10·‖A‖_F` is
/// verified before returning.
pub fn hermitian_eigensystem(a: &Matrix, hermiticity_tol: f64) -> Result<Eigensystem> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "hermitian_eigensystem",
            left: format!("{}×{}", a.rows(), a.cols()),
            right: "square".into(),
        });
    }
    a.require_hermitian(hermiticity_tol)?;

    let n = a.rows();
    let norm = a.frobenius_norm();
    let threshold = CONVERGENCE_FACTOR * norm;

    let mut work = a.clone();
    let mut vectors = Matrix::identity(n);

    let mut converged = off_diagonal_mass(&work) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigensolverNoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut work, &mut vectors, p, q);
            }
        }
        converged = off_diagonal_mass(&work) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| work.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut sorted = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            sorted.set(row, col, vectors.get(row, src));
        }
    }

    let system = Eigensystem { eigenvalues, vectors: sorted };
    let residual = reconstruction_residual(a, &system)?;
    let bound = RECONSTRUCTION_FACTOR * norm;
    if residual > bound {
        return Err(Error::EigenReconstruction { residual, tolerance: bound });
    }
    Ok(system)
}

/// One complex Jacobi rotation annihilating `work[p][q]`.
fn rotate(work: &mut Matrix, vectors: &mut Matrix, p: usize, q: usize) {
    let apq = work.get(p, q);
    let magnitude = apq.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = apq / magnitude;
    let app = work.get(p, p).re;
    let aqq = work.get(q, q).re;

    let tau = (aqq - app) / (2.0 * magnitude);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = work.rows();
    // Right-multiply by U: columns p and q change.
    for j in 0..n {
        let ajp = work.get(j, p);
        let ajq = work.get(j, q);
        work.set(j, p, c * ajp - s * phase.conj() * ajq);
        work.set(j, q, s * phase * ajp + c * ajq);
    }
    // Left-multiply by U†: rows p and q change.
    for j in 0..n {
        let apj = work.get(p, j);
        let aqj = work.get(q, j);
        work.set(p, j, c * apj - s * phase * aqj);
        work.set(q, j, s * phase.conj() * apj + c * aqj);
    }
    // The pivot is zero by construction; clear the rounding residue and keep
    // the diagonal real.
    work.set(p, q, Complex64::new(0.0, 0.0));
    work.set(q, p, Complex64::new(0.0, 0.0));
    let dpp = work.get(p, p).re;
    let dqq = work.get(q, q).re;
    work.set(p, p, Complex64::new(dpp, 0.0));
    work.set(q, q, Complex64::new(dqq, 0.0));

    // Accumulate V ← V·U.
    for j in 0..n {
        let vjp = vectors.get(j, p);
        let vjq = vectors.get(j, q);
        vectors.set(j, p, c * vjp - s * phase.conj() * vjq);
        vectors.set(j, q, s * phase * vjp + c * vjq);
    }
}

fn reconstruction_residual(a: &Matrix, system: &Eigensystem) -> Result<f64> {
    let n = a.rows();
    let v = &system.vectors;
    let mut scaled = v.clone();
    for col in 0..n {
        let l = Complex64::new(system.eigenvalues[col], 0.0);
        for row in 0..n {
            let val = scaled.get(row, col) * l;
            scaled.set(row, col, val);
        }
    }
    let rebuilt = scaled.matmul(&v.adjoint())?;
    a.frobenius_distance(&rebuilt)
}
