//! Dense complex linear algebra for operators on small Hilbert spaces.
//!
//! Everything here is sized for Bell-test work: dimensions stay at or below
//! [`MAX_DIM`], matrices are dense and row-major, and robustness is preferred
//! over speed throughout. All values are immutable after construction and all
//! operations are pure functions, so matrices can be shared freely across
//! threads.

mod eigen;

pub use eigen::{hermitian_eigensystem, Eigensystem, JACOBI_MAX_SWEEPS};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Scalar carrier for amplitudes and operator entries.
pub type ComplexScalar = Complex64;

/// Largest Hilbert-space dimension the toolkit accepts.
pub const MAX_DIM: usize = 64;

/// Default Frobenius-norm tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Outcome of a Hermiticity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianCheckReport {
    /// Frobenius norm of `M − M†`.
    pub max_asymmetry: f64,
    /// True iff `max_asymmetry` is at or below the tolerance used.
    pub is_hermitian: bool,
}

/// Dense square-or-rectangular complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting NaN and infinity.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidScenario {
                reason: "matrix dimensions must be positive".into(),
            });
        }
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionOverflow {
                dim: rows.max(cols),
                max: MAX_DIM,
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "entry count",
                left: format!("{}×{}", rows, cols),
                right: entries.len().to_string(),
            });
        }
        for (index, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(Matrix { rows, cols, entries })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let nr = rows.len();
        let nc = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != nc) {
            return Err(Error::DimensionMismatch {
                context: "ragged rows",
                left: nc.to_string(),
                right: "varying".into(),
            });
        }
        Matrix::new(nr, nc, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_reals(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Matrix::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// The `dim × dim` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// The `dim × dim` identity.
    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.cols + j] = value;
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    fn check_same_dims(&self, other: &Matrix, context: &'static str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                left: format!("{}×{}", self.rows, self.cols),
                right: format!("{}×{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_dims(other, "add")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_dims(other, "sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// Scalar multiple by a real factor.
    pub fn scale_re(&self, factor: f64) -> Matrix {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Standard matrix product.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matmul",
                left: format!("{}×{}", self.rows, self.cols),
                right: format!("{}×{}", other.rows, other.cols),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: block `(i,j)` of the result equals `self[i,j]·other`.
    ///
    /// Dimensions multiply; products beyond [`MAX_DIM`] are rejected because
    /// they signal a scenario too large for this toolkit.
    pub fn tensor(&self, other: &Matrix) -> Result<Matrix> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionOverflow {
                dim: rows.max(cols),
                max: MAX_DIM,
            });
        }
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let aij = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, aij * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Commutator `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        if !self.is_square() || !other.is_square() || self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "commutator",
                left: format!("{}×{}", self.rows, self.cols),
                right: format!("{}×{}", other.rows, other.cols),
            });
        }
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the difference, without allocating.
    pub fn frobenius_distance(&self, other: &Matrix) -> Result<f64> {
        self.check_same_dims(other, "frobenius_distance")?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Measures how far the matrix is from its own adjoint.
    pub fn hermitian_check(&self, tolerance: f64) -> HermitianCheckReport {
        let max_asymmetry = if self.is_square() {
            self.frobenius_distance(&self.adjoint()).unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        };
        HermitianCheckReport {
            max_asymmetry,
            is_hermitian: max_asymmetry <= tolerance,
        }
    }

    /// Errors with the measured asymmetry unless Hermitian within `tolerance`.
    pub fn require_hermitian(&self, tolerance: f64) -> Result<()> {
        let report = self.hermitian_check(tolerance);
        if !report.is_hermitian {
            return Err(Error::NotHermitian {
                max_asymmetry: report.max_asymmetry,
                tolerance,
            });
        }
        Ok(())
    }

    /// `‖M² − I‖_F`, the defect of the dichotomy condition.
    pub fn dichotomy_defect(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "dichotomy_defect",
                left: format!("{}×{}", self.rows, self.cols),
                right: "square".into(),
            });
        }
        let square = self.matmul(self)?;
        square.frobenius_distance(&Matrix::identity(self.rows))
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "apply",
                left: self.cols.to_string(),
                right: v.len().to_string(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }
}

/// Kronecker product as a free function, mirroring the method.
pub fn tensor(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.tensor(b)
}

/// `ab − ba` as a free function, mirroring the method.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.commutator(b)
}

/// Matrix product as a free function, mirroring the method.
pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.matmul(b)
}

/// Conjugate transpose as a free function, mirroring the method.
pub fn adjoint(a: &Matrix) -> Matrix {
    a.adjoint()
}

/// Pauli σx.
pub fn pauli_x() -> Matrix {
    Matrix::from_reals(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

/// Pauli σy.
pub fn pauli_y() -> Matrix {
    Matrix::new(
        2,
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .unwrap()
}

/// Pauli σz.
pub fn pauli_z() -> Matrix {
    Matrix::from_reals(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// `cos θ · σz + sin θ · σx`: a dichotomic observable in the x–z plane.
pub fn pauli_angle(theta: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    Matrix::from_reals(2, 2, &[c, s, s, -c]).unwrap()
}
