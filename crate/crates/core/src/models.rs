//! Preset scenarios realizing the three CHSH regimes: classical (at most 2),
//! quantum at the Tsirelson boundary (2√2), and the algebraic maximum (4)
//! reached with entangled (non-product) joint measurements whose local
//! pieces are all mutually compatible.

use crate::behavior::MarginalReport;
use crate::error::Result;
use crate::linalg::{pauli_x, pauli_z, Matrix};
use crate::scenario::{
    joint_outcome_index, joint_outcomes, BellScenario, Context, DichotomicObservable,
    JointMeasurement, Outcome,
};
use crate::state::State;
use num_complex::Complex64;

/// Whether a preset is expected to obey or break the marginal laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalStatus {
    Satisfied,
    Violated,
}

impl MarginalStatus {
    pub fn matches(self, report: &MarginalReport) -> bool {
        match self {
            MarginalStatus::Satisfied => report.satisfied,
            MarginalStatus::Violated => !report.satisfied,
        }
    }
}

/// A named scenario with its expected end-to-end results.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub scenario: BellScenario,
    pub expected_chsh: f64,
    pub expected_marginal_laws: MarginalStatus,
}

/// Commuting-locals scenario: `A = A' = B = B' = σz` on `|00⟩`.
///
/// Every correlator equals one, the CHSH combination is 2, and the behavior
/// embeds in a classical model.
pub fn preset_classical() -> Preset {
    let scenario = BellScenario::product(
        State::basis(4, 0).expect("basis state"),
        DichotomicObservable::new(pauli_z(), "A").expect("pauli"),
        DichotomicObservable::new(pauli_z(), "A'").expect("pauli"),
        DichotomicObservable::new(pauli_z(), "B").expect("pauli"),
        DichotomicObservable::new(pauli_z(), "B'").expect("pauli"),
    )
    .expect("classical preset is a valid scenario");
    Preset {
        name: "classical",
        description: "Commuting local observables (A=A'=B=B'=\u{03c3}z) on |00\u{27e9}; \
                      CHSH reaches the classical bound 2 and the behavior admits a \
                      deterministic hidden-variable model.",
        scenario,
        expected_chsh: 2.0,
        expected_marginal_laws: MarginalStatus::Satisfied,
    }
}

/// Singlet state with settings tuned to the Tsirelson boundary.
///
/// `A = σz`, `A' = σx`, `B = −(σz+σx)/√2`, `B' = (−σz+σx)/√2`; the signs put
/// the CHSH combination at `+2√2`.
pub fn preset_singlet_tsirelson() -> Preset {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let b = pauli_z().add(&pauli_x()).expect("same dims").scale_re(-inv_sqrt2);
    let b_prime = pauli_x().sub(&pauli_z()).expect("same dims").scale_re(inv_sqrt2);
    let scenario = BellScenario::product(
        State::singlet(),
        DichotomicObservable::new(pauli_z(), "A").expect("pauli"),
        DichotomicObservable::new(pauli_x(), "A'").expect("pauli"),
        DichotomicObservable::new(b, "B").expect("rotated pauli"),
        DichotomicObservable::new(b_prime, "B'").expect("rotated pauli"),
    )
    .expect("singlet preset is a valid scenario");
    Preset {
        name: "singlet-tsirelson",
        description: "Singlet state with optimally rotated settings; CHSH reaches 2\u{221a}2, \
                      the marginal laws hold, and no classical model exists.",
        scenario,
        expected_chsh: 2.0 * std::f64::consts::SQRT_2,
        expected_marginal_laws: MarginalStatus::Satisfied,
    }
}

/// The Bell basis of the two-qubit space: `Ψ−, Ψ+, Φ+, Φ−`.
fn bell_basis() -> [Vec<Complex64>; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    [
        vec![c(0.0), c(h), c(-h), c(0.0)], // Ψ−, the singlet
        vec![c(0.0), c(h), c(h), c(0.0)],  // Ψ+
        vec![c(h), c(0.0), c(0.0), c(h)],  // Φ+
        vec![c(h), c(0.0), c(0.0), c(-h)], // Φ−
    ]
}

fn rank_one_projector(v: &[Complex64]) -> Matrix {
    let n = v.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, v[i] * v[j].conj());
        }
    }
    m
}

/// Builds the custom PVM that sends the singlet to `state_outcome` and the
/// three remaining Bell vectors, in their fixed order, to the unused outcome
/// labels in canonical order.
fn beyond_pvm(state_outcome: (Outcome, Outcome)) -> [Matrix; 4] {
    let basis = bell_basis();
    let singlet_projector = rank_one_projector(&basis[0]);
    let mut complement = basis[1..].iter().map(|v| rank_one_projector(v));

    let mut projectors: [Option<Matrix>; 4] = [None, None, None, None];
    projectors[joint_outcome_index(state_outcome.0, state_outcome.1)] = Some(singlet_projector);
    for (a, b) in joint_outcomes() {
        let slot = joint_outcome_index(a, b);
        if projectors[slot].is_none() {
            projectors[slot] = Some(complement.next().expect("three complement vectors"));
        }
    }
    projectors.map(|p| p.expect("all four outcomes assigned"))
}

/// Non-product joint measurements pushing CHSH to the algebraic maximum 4.
///
/// Each context's PVM is diagonal in the Bell basis, so within and across
/// contexts every local marginal observable commutes with every other: the
/// violation comes entirely from the joint (non-local) level. The singlet
/// state lands on outcome `(+,+)` in contexts `(A,B)`, `(A,B')`, `(A',B)`
/// and on `(+,−)` in `(A',B')`, which makes `E = (1,1,1,−1)`, `S = 4`, and
/// flips Bob's `B'` marginal with Alice's setting.
///
/// This is a representative Hilbert-space construction exhibiting the
/// beyond-Tsirelson regime with compatible local pieces, not a reproduction
/// of any particular machine model.
pub fn preset_beyond_tsirelson() -> Preset {
    let plus_plus = (Outcome::Plus, Outcome::Plus);
    let plus_minus = (Outcome::Plus, Outcome::Minus);
    let measurements = [
        JointMeasurement::custom(Context::AB, beyond_pvm(plus_plus)),
        JointMeasurement::custom(Context::ABPrime, beyond_pvm(plus_plus)),
        JointMeasurement::custom(Context::APrimeB, beyond_pvm(plus_plus)),
        JointMeasurement::custom(Context::APrimeBPrime, beyond_pvm(plus_minus)),
    ];
    let scenario = BellScenario::assemble(2, 2, State::singlet(), None, measurements)
        .expect("beyond-Tsirelson preset is a valid scenario");
    Preset {
        name: "beyond-tsirelson",
        description: "Entangled (non-product) joint measurements diagonal in the Bell \
                      basis; CHSH reaches the algebraic maximum 4 with all local pieces \
                      mutually compatible, at the price of violated marginal laws. \
                      Representative construction for the regime, not a reproduction of \
                      any specific machine model.",
        scenario,
        expected_chsh: 4.0,
        expected_marginal_laws: MarginalStatus::Violated,
    }
}

/// All presets in presentation order.
pub fn all_presets() -> Vec<Preset> {
    vec![preset_classical(), preset_singlet_tsirelson(), preset_beyond_tsirelson()]
}

/// Looks a preset up by its CLI name.
pub fn preset_by_name(name: &str) -> Option<Preset> {
    all_presets().into_iter().find(|p| p.name == name)
}

/// Coarse-grained local observables of a 4-outcome PVM:
/// `A = Σ_{a,b} a·Π_{a,b}` and `B = Σ_{a,b} b·Π_{a,b}`.
pub fn pvm_marginal_observables(projectors: &[Matrix; 4]) -> Result<(Matrix, Matrix)> {
    let dim = projectors[0].rows();
    let mut alice = Matrix::zeros(dim, dim);
    let mut bob = Matrix::zeros(dim, dim);
    for (a, b) in joint_outcomes() {
        let p = &projectors[joint_outcome_index(a, b)];
        alice = alice.add(&p.scale_re(a.value()))?;
        bob = bob.add(&p.scale_re(b.value()))?;
    }
    Ok((alice, bob))
}
