//! Random generation of the objects the identity checks quantify over:
//! unitaries, dichotomic observables, and states.
//!
//! Observables come out as `V·D·V†` with `V` drawn from a QR factorization of
//! a complex Gaussian matrix and `D` a random ±1 diagonal carrying at least
//! one `+1` and one `−1` (the degenerate `±I` cases are valid but are
//! exercised separately in tests).

use crate::behavior::Behavior;
use crate::error::Result;
use crate::kolmogorov::DeterministicStrategy;
use crate::linalg::Matrix;
use crate::rng::Prng;
use crate::scenario::{joint_outcomes, BellScenario, Context, DichotomicObservable};
use crate::state::State;
use num_complex::Complex64;

fn gaussian_complex(rng: &mut Prng) -> Complex64 {
    Complex64::new(rng.next_gaussian(), rng.next_gaussian())
}

/// Haar-like random unitary: QR of a complex Gaussian matrix via modified
/// Gram–Schmidt with one re-orthogonalization pass.
pub fn random_unitary(dim: usize, rng: &mut Prng) -> Matrix {
    loop {
        let mut columns: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| gaussian_complex(rng)).collect())
            .collect();
        if let Some(q) = orthonormalize(&mut columns) {
            let mut m = Matrix::zeros(dim, dim);
            for (j, col) in q.iter().enumerate() {
                for (i, &z) in col.iter().enumerate() {
                    m.set(i, j, z);
                }
            }
            return m;
        }
        // Degenerate draw (probability zero in theory); redraw.
    }
}

fn orthonormalize(columns: &mut [Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(columns.len());
    for col in columns.iter() {
        let mut v = col.clone();
        for _ in 0..2 {
            for u in &out {
                let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= overlap * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for z in &mut v {
            *z /= norm;
        }
        out.push(v);
    }
    Some(out)
}

/// Random ±1 diagonal with at least one of each sign (for `dim ≥ 2`).
fn random_signs(dim: usize, rng: &mut Prng) -> Vec<f64> {
    loop {
        let signs: Vec<f64> = (0..dim)
            .map(|_| if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 })
            .collect();
        if dim < 2 || (signs.iter().any(|&s| s > 0.0) && signs.iter().any(|&s| s < 0.0)) {
            return signs;
        }
    }
}

/// Random dichotomic observable `V·D·V†` with mixed-sign spectrum.
pub fn random_dichotomic(dim: usize, label: &str, rng: &mut Prng) -> Result<DichotomicObservable> {
    let v = random_unitary(dim, rng);
    let m = conjugate_diagonal(&v, &random_signs(dim, rng))?;
    DichotomicObservable::new(m, label)
}

/// A pair of commuting dichotomic observables sharing the eigenbasis `V`.
pub fn random_commuting_pair(
    dim: usize,
    labels: (&str, &str),
    rng: &mut Prng,
) -> Result<(DichotomicObservable, DichotomicObservable)> {
    let v = random_unitary(dim, rng);
    let first = conjugate_diagonal(&v, &random_signs(dim, rng))?;
    let second = conjugate_diagonal(&v, &random_signs(dim, rng))?;
    Ok((
        DichotomicObservable::new(first, labels.0)?,
        DichotomicObservable::new(second, labels.1)?,
    ))
}

fn conjugate_diagonal(v: &Matrix, signs: &[f64]) -> Result<Matrix> {
    let dim = v.rows();
    let mut scaled = v.clone();
    for (j, &s) in signs.iter().enumerate() {
        for i in 0..dim {
            let z = scaled.get(i, j) * s;
            scaled.set(i, j, z);
        }
    }
    let m = scaled.matmul(&v.adjoint())?;
    // Symmetrize away the Gram–Schmidt rounding so M² = I holds to ~1e-15.
    let sym = m.add(&m.adjoint())?.scale_re(0.5);
    Ok(sym)
}

/// Random product-form scenario: independent dichotomic observables per
/// setting and a random pure state on the joint space.
pub fn random_product_scenario(
    dim_alice: usize,
    dim_bob: usize,
    rng: &mut Prng,
) -> Result<BellScenario> {
    BellScenario::product(
        random_pure_state(dim_alice * dim_bob, rng),
        random_dichotomic(dim_alice, "A", rng)?,
        random_dichotomic(dim_alice, "A'", rng)?,
        random_dichotomic(dim_bob, "B", rng)?,
        random_dichotomic(dim_bob, "B'", rng)?,
    )
}

/// Random scenario with `[A,A'] = [B,B'] = 0`, built from shared eigenbases.
pub fn random_commuting_scenario(
    dim_alice: usize,
    dim_bob: usize,
    rng: &mut Prng,
) -> Result<BellScenario> {
    let (a, a_prime) = random_commuting_pair(dim_alice, ("A", "A'"), rng)?;
    let (b, b_prime) = random_commuting_pair(dim_bob, ("B", "B'"), rng)?;
    BellScenario::product(
        random_pure_state(dim_alice * dim_bob, rng),
        a,
        a_prime,
        b,
        b_prime,
    )
}

/// Random pure state (Gaussian amplitudes, normalized).
pub fn random_pure_state(dim: usize, rng: &mut Prng) -> State {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            let normalized = v.into_iter().map(|z| z / norm).collect();
            return State::Pure(normalized);
        }
    }
}

/// Convex combination of behaviors with the given (normalized) weights.
fn mix_behaviors(parts: &[(f64, &Behavior)]) -> Behavior {
    let mut tables = [[[0.0f64; 2]; 2]; 4];
    for (w, b) in parts {
        for ctx in Context::ALL {
            for (a, o) in joint_outcomes() {
                tables[ctx.index()][a.index()][o.index()] += w * b.prob(ctx, a, o);
            }
        }
    }
    Behavior::new(tables).expect("convex mixtures of behaviors are behaviors")
}

/// The eight PR-box sign vectors (odd number of −1 entries).
pub fn pr_box_sign_vectors() -> [[f64; 4]; 8] {
    let mut out = [[0.0f64; 4]; 8];
    let mut k = 0;
    for mask in 0u32..16 {
        if mask.count_ones() % 2 == 1 {
            for (bit, slot) in out[k].iter_mut().enumerate() {
                *slot = if mask & (1 << (3 - bit)) != 0 { -1.0 } else { 1.0 };
            }
            k += 1;
        }
    }
    out
}

/// Random mixture of the sixteen deterministic strategies (always
/// classically embeddable).
pub fn random_classical_behavior(rng: &mut Prng) -> Behavior {
    let mut weights = [0.0f64; 16];
    let mut sum = 0.0;
    for w in &mut weights {
        let u = rng.next_f64();
        *w = u * u;
        sum += *w;
    }
    let mut tables = [[[0.0f64; 2]; 2]; 4];
    for (i, w) in weights.iter().enumerate() {
        let strategy = DeterministicStrategy::from_index(i);
        for ctx in Context::ALL {
            let (a, b) = strategy.outcomes_in(ctx);
            tables[ctx.index()][a.index()][b.index()] += w / sum;
        }
    }
    Behavior::new(tables).expect("strategy mixtures are behaviors")
}

/// Random no-signaling behavior: a mixture of deterministic strategies and
/// PR-box vertices. Alternates between classical-only, balanced, and
/// box-dominant mixtures so both embeddable and non-embeddable cases show up
/// with healthy frequency.
pub fn random_no_signaling_behavior(rng: &mut Prng) -> Behavior {
    let classical = random_classical_behavior(rng);
    match rng.next_u64() % 3 {
        0 => classical,
        1 => {
            // Balanced: some weight on every PR box.
            let signs = pr_box_sign_vectors();
            let mut box_weights = [0.0f64; 8];
            let mut sum = 0.0;
            for w in &mut box_weights {
                *w = rng.next_f64();
                sum += *w;
            }
            let share = rng.next_f64();
            let boxes: Vec<Behavior> = signs
                .iter()
                .map(|s| Behavior::pr_box(*s).expect("valid signs"))
                .collect();
            let mut parts: Vec<(f64, &Behavior)> = vec![(1.0 - share, &classical)];
            for (w, b) in box_weights.iter().zip(&boxes) {
                parts.push((share * w / sum, b));
            }
            mix_behaviors(&parts)
        }
        _ => {
            // Dominant: one PR box against classical noise; sweeps across
            // the embeddability boundary as the share varies.
            let signs = pr_box_sign_vectors();
            let chosen = Behavior::pr_box(signs[(rng.next_u64() % 8) as usize]).expect("valid");
            let share = rng.next_f64();
            mix_behaviors(&[(share, &chosen), (1.0 - share, &classical)])
        }
    }
}
