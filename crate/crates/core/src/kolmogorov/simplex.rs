//! Dense tableau phase-1 simplex over a pluggable scalar.
//!
//! Solves the feasibility problem `A x = b, x ≥ 0` (with `b ≥ 0`) by
//! minimizing the sum of artificial variables. The scalar is either `f64`
//! (tolerance 1e-9, ratio ties broken by the larger pivot) or `BigRational`
//! (exact zero tests, pure Bland tie-breaking). Sixteen variables and at most
//! seventeen rows: exactness beats sophistication at this size.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic the tableau needs. `tolerance()` is the comparison slack:
/// zero for exact scalars.
pub(crate) trait LpScalar:
    Clone
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn tolerance() -> Self;
    fn abs_value(&self) -> Self;
    /// True when ratio ties should prefer the larger pivot magnitude
    /// (partial pivoting); exact scalars use smallest-index Bland ties.
    const PARTIAL_PIVOTING: bool;
}

impl LpScalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
    const PARTIAL_PIVOTING: bool = true;
}

impl LpScalar for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }
    fn abs_value(&self) -> Self {
        Signed::abs(self)
    }
    const PARTIAL_PIVOTING: bool = false;
}

/// Exact rational from a small integer.
pub(crate) fn ratio_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) enum Phase1Outcome<T> {
    /// A basic feasible point for the structural variables.
    Feasible(Vec<T>),
    /// Optimum of the artificial objective stayed positive.
    Infeasible {
        #[allow(dead_code)] // diagnostic value, asserted on in tests
        residual: T,
    },
}

const ITERATION_CAP: usize = 50_000;

/// Runs phase 1 and reports feasibility of `A x = b, x ≥ 0`.
///
/// Redundant equality rows are fine: their artificial variables simply stay
/// basic at level zero. Returns `None` if the pivot loop hits the iteration
/// cap, which at this problem size indicates a bug rather than a hard LP.
pub(crate) fn phase1_feasibility<T: LpScalar>(a: &[Vec<T>], b: &[T]) -> Option<Phase1Outcome<T>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let vars = if rows == 0 { 0 } else { a[0].len() };
    let total = vars + rows;
    let tol = T::tolerance();

    // Tableau in canonical form; last column is the right-hand side.
    let mut tableau: Vec<Vec<T>> = Vec::with_capacity(rows);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), vars);
        let mut t: Vec<T> = Vec::with_capacity(total + 1);
        t.extend(row.iter().cloned());
        for j in 0..rows {
            t.push(if i == j { T::one() } else { T::zero() });
        }
        t.push(b[i].clone());
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (vars..total).collect();

    // Reduced-cost row for min Σ artificials with the artificial basis:
    // r_j = c_j − Σ_i tableau[i][j], so structural columns start at
    // −(column sum) and artificial columns at zero.
    let mut reduced: Vec<T> = (0..=total)
        .map(|j| {
            let mut sum = T::zero();
            for row in &tableau {
                sum = sum + row[j].clone();
            }
            if j < vars {
                -sum
            } else if j < total {
                T::zero()
            } else {
                -sum // objective value, stored negated like the cost row
            }
        })
        .collect();

    // Columns with an improving reduced cost but no usable pivot are parked
    // until the next successful pivot changes the geometry.
    let mut blocked = vec![false; total];

    for _ in 0..ITERATION_CAP {
        // Bland entering rule: first improving column.
        let entering = (0..total).find(|&j| !blocked[j] && reduced[j] < -tol.clone());
        let Some(col) = entering else {
            // Optimal: objective value is −reduced[total].
            let objective = -reduced[total].clone();
            if objective <= tol {
                let mut x = vec![T::zero(); vars];
                for (i, &bv) in basis.iter().enumerate() {
                    if bv < vars {
                        let v = tableau[i][total].clone();
                        x[bv] = if v < T::zero() { T::zero() } else { v };
                    }
                }
                return Some(Phase1Outcome::Feasible(x));
            }
            return Some(Phase1Outcome::Infeasible { residual: objective });
        };

        // Ratio test over rows with a positive pivot candidate.
        let mut best: Option<(usize, T)> = None; // (row, ratio)
        for i in 0..rows {
            let pivot = tableau[i][col].clone();
            if pivot <= tol {
                continue;
            }
            let ratio = tableau[i][total].clone() / pivot.clone();
            match &best {
                None => best = Some((i, ratio)),
                Some((best_row, best_ratio)) => {
                    let tie_slack = tol.clone() * (T::one() + best_ratio.abs_value());
                    if ratio.clone() + tie_slack.clone() < best_ratio.clone() {
                        best = Some((i, ratio));
                    } else if (ratio.clone() - best_ratio.clone()).abs_value() <= tie_slack {
                        let better = if T::PARTIAL_PIVOTING {
                            tableau[i][col].abs_value() > tableau[*best_row][col].abs_value()
                        } else {
                            basis[i] < basis[*best_row]
                        };
                        if better {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = best else {
            // The phase-1 objective is bounded below, so a column without a
            // positive pivot cannot actually enter; park it.
            blocked[col] = true;
            continue;
        };

        pivot(&mut tableau, &mut reduced, pivot_row, col, total);
        basis[pivot_row] = col;
        blocked.iter_mut().for_each(|b| *b = false);
    }
    None
}

fn pivot<T: LpScalar>(
    tableau: &mut [Vec<T>],
    reduced: &mut [T],
    row: usize,
    col: usize,
    total: usize,
) {
    let pivot_value = tableau[row][col].clone();
    for j in 0..=total {
        tableau[row][j] = tableau[row][j].clone() / pivot_value.clone();
    }
    for i in 0..tableau.len() {
        if i == row {
            continue;
        }
        let factor = tableau[i][col].clone();
        if factor.is_zero() {
            continue;
        }
        for j in 0..=total {
            tableau[i][j] = tableau[i][j].clone() - factor.clone() * tableau[row][j].clone();
        }
    }
    let factor = reduced[col].clone();
    if !factor.is_zero() {
        for j in 0..=total {
            reduced[j] = reduced[j].clone() - factor.clone() * tableau[row][j].clone();
        }
    }
}
