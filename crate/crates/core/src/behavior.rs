//! Outcome-probability behaviors, the grand-measurement construction, and
//! the marginal (no-signaling) laws.
//!
//! A behavior collects the four joint outcome tables `P(a,b|x,y)`, one per
//! context. When both parties' local observable pairs commute, the four
//! contexts embed into a single 16-outcome grand measurement whose
//! marginals (obtained by summing out the other setting pair) reproduce
//! every context table.

use crate::error::{Error, Result};
use crate::scenario::{
    joint_outcome_index, joint_outcomes, AliceSetting, BellScenario, BobSetting, Context, Outcome,
};
use crate::state::{raw_expectation, IMAGINARY_RESIDUE_TOL};

/// Entries this far below zero are floating-point dust and get clamped.
pub const PROBABILITY_CLAMP: f64 = 1e-12;

/// Normalization slack allowed on input tables.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Default tolerance for the marginal-law check on analytic behaviors.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Frobenius gate on `[A,A']` and `[B,B']` for the grand measurement.
pub const COMMUTING_GATE_TOL: f64 = 1e-10;

fn sanitize(value: f64, what: &str) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::InvalidBehavior { reason: format!("non-finite {what}") });
    }
    if value < -PROBABILITY_CLAMP {
        return Err(Error::NegativeProbability { value });
    }
    Ok(value.max(0.0))
}

/// Four joint outcome-probability tables, one per context.
///
/// `tables[context][alice outcome][bob outcome]`; every table is normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    tables: [[[f64; 2]; 2]; 4],
}

impl Behavior {
    /// Validates, clamps dust in `(−1e-12, 0)`, and renormalizes each table.
    pub fn new(tables: [[[f64; 2]; 2]; 4]) -> Result<Self> {
        let mut clean = [[[0.0f64; 2]; 2]; 4];
        for ctx in Context::ALL {
            let t = &tables[ctx.index()];
            let mut sum = 0.0;
            for ia in 0..2 {
                for ib in 0..2 {
                    let p = sanitize(t[ia][ib], "probability")?;
                    clean[ctx.index()][ia][ib] = p;
                    sum += p;
                }
            }
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::InvalidBehavior {
                    reason: format!("table {} sums to {} (must be 1 ± 1e-9)", ctx.label(), sum),
                });
            }
            for ia in 0..2 {
                for ib in 0..2 {
                    clean[ctx.index()][ia][ib] /= sum;
                }
            }
        }
        Ok(Behavior { tables: clean })
    }

    /// `P(a, b | context)`.
    pub fn prob(&self, context: Context, a: Outcome, b: Outcome) -> f64 {
        self.tables[context.index()][a.index()][b.index()]
    }

    pub fn table(&self, context: Context) -> &[[f64; 2]; 2] {
        &self.tables[context.index()]
    }

    /// The maximally mixed behavior: every entry 1/4.
    pub fn uniform() -> Behavior {
        Behavior { tables: [[[0.25; 2]; 2]; 4] }
    }

    /// Behavior with the same table in all four contexts.
    pub fn from_single_table(table: [[f64; 2]; 2]) -> Result<Behavior> {
        Behavior::new([table, table, table, table])
    }

    /// PR-box-type behavior: in context `k` the outcomes satisfy
    /// `a·b = signs[k]` with probability one, split evenly between the two
    /// consistent outcome pairs. All marginals are uniform, so these boxes
    /// are no-signaling; with an odd number of `−1` signs the CHSH
    /// combination reaches the algebraic extreme ±4.
    pub fn pr_box(signs: [f64; 4]) -> Result<Behavior> {
        let mut tables = [[[0.0f64; 2]; 2]; 4];
        for ctx in Context::ALL {
            let s = signs[ctx.index()];
            if s != 1.0 && s != -1.0 {
                return Err(Error::InvalidBehavior {
                    reason: format!("PR-box sign must be ±1, got {s}"),
                });
            }
            for (a, b) in joint_outcomes() {
                if a.value() * b.value() == s {
                    tables[ctx.index()][a.index()][b.index()] = 0.5;
                }
            }
        }
        Behavior::new(tables)
    }
}

/// The 16-outcome distribution of the grand measurement.
///
/// Index layout is lexicographic over `(a, a', b, b')` with `+1` before `−1`:
/// `index = 8·[a=−] + 4·[a'=−] + 2·[b=−] + [b'=−]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrandDistribution {
    probabilities: [f64; 16],
}

/// Flat index of the joint outcome `((a,a'),(b,b'))`.
pub fn grand_index(a: Outcome, ap: Outcome, b: Outcome, bp: Outcome) -> usize {
    a.index() * 8 + ap.index() * 4 + b.index() * 2 + bp.index()
}

impl GrandDistribution {
    /// Validates, clamps dust, and renormalizes.
    pub fn new(probabilities: [f64; 16]) -> Result<Self> {
        let mut clean = [0.0f64; 16];
        let mut sum = 0.0;
        for (i, &p) in probabilities.iter().enumerate() {
            clean[i] = sanitize(p, "grand probability")?;
            sum += clean[i];
        }
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!("grand distribution sums to {sum} (must be 1 ± 1e-9)"),
            });
        }
        for p in &mut clean {
            *p /= sum;
        }
        Ok(GrandDistribution { probabilities: clean })
    }

    pub fn prob(&self, a: Outcome, ap: Outcome, b: Outcome, bp: Outcome) -> f64 {
        self.probabilities[grand_index(a, ap, b, bp)]
    }

    pub fn probabilities(&self) -> &[f64; 16] {
        &self.probabilities
    }
}

/// Result of a marginal-law (no-signaling) check.
///
/// Discrepancies are total-variation-style L1 distances: for Alice's setting
/// `x`, the distance between her outcome distribution with Bob measuring `B`
/// and with Bob measuring `B'` is `Σ_a |Σ_b P(a,b|x,B) − Σ_b P(a,b|x,B')|`,
/// and `alice_max` is the worse of her two settings (symmetrically for Bob).
/// For two-outcome marginals this is twice the per-outcome deviation; a flip
/// of a deterministic marginal therefore registers as a discrepancy of 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalReport {
    pub alice_max: f64,
    pub bob_max: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

impl MarginalReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.alice_max.max(self.bob_max)
    }
}

/// Alice's outcome marginal in one context.
fn alice_marginal(b: &Behavior, context: Context, a: Outcome) -> f64 {
    Outcome::BOTH.iter().map(|&o| b.prob(context, a, o)).sum()
}

/// Bob's outcome marginal in one context.
fn bob_marginal(b: &Behavior, context: Context, o: Outcome) -> f64 {
    Outcome::BOTH.iter().map(|&a| b.prob(context, a, o)).sum()
}

/// Raw per-party discrepancies, shared with the statistical check.
pub(crate) fn marginal_discrepancies(b: &Behavior) -> (f64, f64) {
    let mut alice_max: f64 = 0.0;
    for x in [AliceSetting::A, AliceSetting::APrime] {
        let with_b = Context::from_settings(x, BobSetting::B);
        let with_bp = Context::from_settings(x, BobSetting::BPrime);
        let d: f64 = Outcome::BOTH
            .iter()
            .map(|&a| (alice_marginal(b, with_b, a) - alice_marginal(b, with_bp, a)).abs())
            .sum();
        alice_max = alice_max.max(d);
    }
    let mut bob_max: f64 = 0.0;
    for y in [BobSetting::B, BobSetting::BPrime] {
        let with_a = Context::from_settings(AliceSetting::A, y);
        let with_ap = Context::from_settings(AliceSetting::APrime, y);
        let d: f64 = Outcome::BOTH
            .iter()
            .map(|&o| (bob_marginal(b, with_a, o) - bob_marginal(b, with_ap, o)).abs())
            .sum();
        bob_max = bob_max.max(d);
    }
    (alice_max, bob_max)
}

/// Checks the marginal laws ("no-signaling conditions") at `tolerance`.
pub fn check_marginal_laws(b: &Behavior, tolerance: f64) -> MarginalReport {
    let (alice_max, bob_max) = marginal_discrepancies(b);
    MarginalReport {
        alice_max,
        bob_max,
        tolerance,
        satisfied: alice_max <= tolerance && bob_max <= tolerance,
    }
}

/// Derives the behavior of a scenario: `P(a,b|x,y) = ⟨Π_{a,b}^{x,y}⟩`.
pub fn behavior_from_scenario(s: &BellScenario) -> Result<Behavior> {
    let mut tables = [[[0.0f64; 2]; 2]; 4];
    for ctx in Context::ALL {
        let pvm = s.pvm(ctx)?;
        for (a, b) in joint_outcomes() {
            let value = raw_expectation(s.state(), &pvm[joint_outcome_index(a, b)])?;
            if value.im.abs() > IMAGINARY_RESIDUE_TOL {
                return Err(Error::ImaginaryResidue { residue: value.im.abs() });
            }
            tables[ctx.index()][a.index()][b.index()] = value.re;
        }
    }
    Behavior::new(tables)
}

/// The four correlators `E(x,y) = Σ_{a,b} a·b·P(a,b|x,y)` in canonical
/// context order.
pub fn correlators(b: &Behavior) -> [f64; 4] {
    let mut out = [0.0f64; 4];
    for ctx in Context::ALL {
        let mut e = 0.0;
        for (a, o) in joint_outcomes() {
            e += a.value() * o.value() * b.prob(ctx, a, o);
        }
        out[ctx.index()] = e;
    }
    out
}

/// `E(A,B) + E(A,B') + E(A',B) − E(A',B')`.
pub fn chsh_from_behavior(b: &Behavior) -> f64 {
    let e = correlators(b);
    Context::ALL
        .iter()
        .map(|ctx| ctx.chsh_sign() * e[ctx.index()])
        .sum()
}

/// The 16-outcome grand measurement, defined when `[A,A'] = [B,B'] = 0`.
///
/// Probability of `((a,a'),(b,b'))` is the expectation of
/// `(P_{A=a}P_{A'=a'}) ⊗ (P_{B=b}P_{B'=b'})`. The commutation gate is strict
/// (Frobenius norm ≤ 1e-10): products of almost-commuting projectors silently
/// lose positivity, so failure is loud and reports the offending commutator.
pub fn grand_measurement(s: &BellScenario) -> Result<GrandDistribution> {
    let obs = s
        .observables()
        .ok_or(Error::MissingLocalObservables)?;
    if !s.is_fully_product() {
        return Err(Error::InvalidScenario {
            reason: "grand measurement requires all four contexts in product form".into(),
        });
    }

    let comm_alice = obs.a.matrix().commutator(obs.a_prime.matrix())?.frobenius_norm();
    if comm_alice > COMMUTING_GATE_TOL {
        return Err(Error::NonCommutingLocals {
            party: "Alice".into(),
            first: obs.a.label().into(),
            second: obs.a_prime.label().into(),
            norm: comm_alice,
            tolerance: COMMUTING_GATE_TOL,
        });
    }
    let comm_bob = obs.b.matrix().commutator(obs.b_prime.matrix())?.frobenius_norm();
    if comm_bob > COMMUTING_GATE_TOL {
        return Err(Error::NonCommutingLocals {
            party: "Bob".into(),
            first: obs.b.label().into(),
            second: obs.b_prime.label().into(),
            norm: comm_bob,
            tolerance: COMMUTING_GATE_TOL,
        });
    }

    // Joint projectors for each party; idempotence certifies that the
    // commuting products are genuine projectors.
    let mut alice_proj = Vec::with_capacity(4);
    for a in Outcome::BOTH {
        for ap in Outcome::BOTH {
            let q = obs.a.projector(a).matmul(&obs.a_prime.projector(ap))?;
            let defect = q.matmul(&q)?.frobenius_distance(&q)?;
            if defect > COMMUTING_GATE_TOL {
                return Err(Error::InvalidScenario {
                    reason: format!(
                        "Alice's joint projector for (a,a')=({},{}) is not idempotent (defect {defect:.3e})",
                        a.label(),
                        ap.label()
                    ),
                });
            }
            alice_proj.push(q);
        }
    }
    let mut bob_proj = Vec::with_capacity(4);
    for b in Outcome::BOTH {
        for bp in Outcome::BOTH {
            let q = obs.b.projector(b).matmul(&obs.b_prime.projector(bp))?;
            let defect = q.matmul(&q)?.frobenius_distance(&q)?;
            if defect > COMMUTING_GATE_TOL {
                return Err(Error::InvalidScenario {
                    reason: format!(
                        "Bob's joint projector for (b,b')=({},{}) is not idempotent (defect {defect:.3e})",
                        b.label(),
                        bp.label()
                    ),
                });
            }
            bob_proj.push(q);
        }
    }

    let mut probabilities = [0.0f64; 16];
    for (ia, a) in Outcome::BOTH.iter().enumerate() {
        for (iap, ap) in Outcome::BOTH.iter().enumerate() {
            for (ib, b) in Outcome::BOTH.iter().enumerate() {
                for (ibp, bp) in Outcome::BOTH.iter().enumerate() {
                    let joint = alice_proj[ia * 2 + iap].tensor(&bob_proj[ib * 2 + ibp])?;
                    let value = raw_expectation(s.state(), &joint)?;
                    if value.im.abs() > IMAGINARY_RESIDUE_TOL {
                        return Err(Error::ImaginaryResidue { residue: value.im.abs() });
                    }
                    probabilities[grand_index(*a, *ap, *b, *bp)] = value.re;
                }
            }
        }
    }
    GrandDistribution::new(probabilities)
}

/// Sums out the other setting pair, one context at a time: for example
/// `P(a,b|A,B) = Σ_{a',b'} P((a,a'),(b,b'))`.
///
/// Behaviors produced this way satisfy the marginal laws by construction.
pub fn marginalize(g: &GrandDistribution) -> Behavior {
    let mut tables = [[[0.0f64; 2]; 2]; 4];
    for a in Outcome::BOTH {
        for ap in Outcome::BOTH {
            for b in Outcome::BOTH {
                for bp in Outcome::BOTH {
                    let p = g.prob(a, ap, b, bp);
                    tables[Context::AB.index()][a.index()][b.index()] += p;
                    tables[Context::ABPrime.index()][a.index()][bp.index()] += p;
                    tables[Context::APrimeB.index()][ap.index()][b.index()] += p;
                    tables[Context::APrimeBPrime.index()][ap.index()][bp.index()] += p;
                }
            }
        }
    }
    Behavior::new(tables).expect("marginals of a valid grand distribution form a valid behavior")
}

// ── Plain-text table format ──────────────────────────────────────────────────

/// Formats `value` with `sig` significant digits in plain decimal notation.
pub fn format_significant(value: f64, sig: usize) -> String {
    if value == 0.0 {
        return format!("{:.*}", sig - 1, 0.0);
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exponent).clamp(0, 17) as usize;
    format!("{:.*}", decimals, value)
}

/// Serializes a behavior as one `context` block per measurement context,
/// entries with 12 significant digits.
pub fn behavior_to_text(b: &Behavior) -> String {
    let mut out = String::from("behavior\n");
    for ctx in Context::ALL {
        out.push_str(&format!(
            "context {} {}\n",
            ctx.alice().label(),
            ctx.bob().label()
        ));
        for a in Outcome::BOTH {
            let row: Vec<String> = Outcome::BOTH
                .iter()
                .map(|&o| format_significant(b.prob(ctx, a, o), 12))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Strips comments and returns `(line number, tokens)` for significant lines.
pub(crate) fn significant_lines(text: &str) -> Vec<(usize, Vec<String>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<String> = stripped.split_whitespace().map(str::to_string).collect();
            if tokens.is_empty() {
                None
            } else {
                Some((i + 1, tokens))
            }
        })
        .collect()
}

pub(crate) fn parse_setting_pair(
    line: usize,
    x: &str,
    y: &str,
) -> Result<Context> {
    let alice = match x {
        "A" => AliceSetting::A,
        "A'" => AliceSetting::APrime,
        other => {
            return Err(Error::Parse {
                line,
                message: format!("unknown Alice setting {other:?} (expected A or A')"),
            })
        }
    };
    let bob = match y {
        "B" => BobSetting::B,
        "B'" => BobSetting::BPrime,
        other => {
            return Err(Error::Parse {
                line,
                message: format!("unknown Bob setting {other:?} (expected B or B')"),
            })
        }
    };
    Ok(Context::from_settings(alice, bob))
}

/// Parses the plain-text behavior format produced by [`behavior_to_text`].
pub fn behavior_from_text(text: &str) -> Result<Behavior> {
    let lines = significant_lines(text);
    let mut cursor = 0usize;
    if lines.is_empty() || lines[0].1[0] != "behavior" {
        let line = lines.first().map(|(l, _)| *l).unwrap_or(1);
        return Err(Error::Parse { line, message: "expected 'behavior' header".into() });
    }
    cursor += 1;

    let mut tables: [Option<[[f64; 2]; 2]>; 4] = [None, None, None, None];
    while cursor < lines.len() {
        let (line, tokens) = &lines[cursor];
        if tokens[0] != "context" || tokens.len() != 3 {
            return Err(Error::Parse {
                line: *line,
                message: format!("expected 'context <X> <Y>', found {:?}", tokens.join(" ")),
            });
        }
        let ctx = parse_setting_pair(*line, &tokens[1], &tokens[2])?;
        if tables[ctx.index()].is_some() {
            return Err(Error::Parse {
                line: *line,
                message: format!("context {} given twice", ctx.label()),
            });
        }
        cursor += 1;
        let mut table = [[0.0f64; 2]; 2];
        for row in &mut table {
            let (row_line, row_tokens) = lines.get(cursor).ok_or(Error::Parse {
                line: *line,
                message: "unexpected end of file inside context block".into(),
            })?;
            if row_tokens.len() != 2 {
                return Err(Error::Parse {
                    line: *row_line,
                    message: format!("expected 2 probabilities, found {}", row_tokens.len()),
                });
            }
            for (slot, token) in row.iter_mut().zip(row_tokens) {
                *slot = token.parse::<f64>().map_err(|_| Error::Parse {
                    line: *row_line,
                    message: format!("not a number: {token:?}"),
                })?;
            }
            cursor += 1;
        }
        tables[ctx.index()] = Some(table);
    }

    let missing: Vec<&str> = Context::ALL
        .iter()
        .filter(|c| tables[c.index()].is_none())
        .map(|c| c.label())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Parse {
            line: lines.last().map(|(l, _)| *l).unwrap_or(1),
            message: format!("missing context blocks: {}", missing.join(", ")),
        });
    }
    Behavior::new(tables.map(Option::unwrap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_x, pauli_z, Matrix};
    use crate::rng::Prng;
    use crate::scenario::DichotomicObservable;
    use crate::state::State;
    use num_complex::Complex64;

    fn obs(m: Matrix, label: &str) -> DichotomicObservable {
        DichotomicObservable::new(m, label).unwrap()
    }

    fn singlet_optimal() -> BellScenario {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let b = pauli_z().add(&pauli_x()).unwrap().scale_re(inv_sqrt2);
        let bp = pauli_z().sub(&pauli_x()).unwrap().scale_re(inv_sqrt2);
        BellScenario::product(
            State::singlet(),
            obs(pauli_z(), "A"),
            obs(pauli_x(), "A'"),
            obs(b, "B"),
            obs(bp, "B'"),
        )
        .unwrap()
    }

    #[test]
    fn eigenstate_concentrates_all_tables() {
        let s = BellScenario::product(
            State::basis(4, 0).unwrap(),
            obs(pauli_z(), "A"),
            obs(pauli_z(), "A'"),
            obs(pauli_z(), "B"),
            obs(pauli_z(), "B'"),
        )
        .unwrap();
        let b = behavior_from_scenario(&s).unwrap();
        for ctx in Context::ALL {
            assert!((b.prob(ctx, Outcome::Plus, Outcome::Plus) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singlet_optimal_correlators() {
        let b = behavior_from_scenario(&singlet_optimal()).unwrap();
        let e = correlators(&b);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let want = [-inv_sqrt2, -inv_sqrt2, -inv_sqrt2, inv_sqrt2];
        for (got, want) in e.iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "correlator {got} vs {want}");
        }
        let s = chsh_from_behavior(&b);
        assert!((s + 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn perfect_correlation_gives_unit_correlator() {
        let table = [[0.5, 0.0], [0.0, 0.5]];
        let b = Behavior::from_single_table(table).unwrap();
        for e in correlators(&b) {
            assert!((e - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_behavior_has_zero_correlators_and_chsh() {
        let b = Behavior::uniform();
        assert!(correlators(&b).iter().all(|e| e.abs() < 1e-15));
        assert!(chsh_from_behavior(&b).abs() < 1e-15);
    }

    #[test]
    fn product_quantum_behavior_satisfies_marginal_laws() {
        let b = behavior_from_scenario(&singlet_optimal()).unwrap();
        let report = check_marginal_laws(&b, MARGINAL_TOL);
        assert!(report.satisfied, "{report:?}");
        assert!(report.max_discrepancy() <= 1e-9);
    }

    #[test]
    fn identical_tables_satisfy_marginal_laws_exactly() {
        let b = Behavior::from_single_table([[0.4, 0.1], [0.2, 0.3]]).unwrap();
        let report = check_marginal_laws(&b, 0.0);
        assert!(report.satisfied);
        assert_eq!(report.alice_max, 0.0);
        assert_eq!(report.bob_max, 0.0);
    }

    #[test]
    fn grand_measurement_with_identical_observables_is_diagonal() {
        // A = A' and B = B': mass only where a = a' and b = b'.
        let mut rng = Prng::new(5);
        let state = crate::random::random_pure_state(4, &mut rng);
        let s = BellScenario::product(
            state,
            obs(pauli_z(), "A"),
            obs(pauli_z(), "A'"),
            obs(pauli_x(), "B"),
            obs(pauli_x(), "B'"),
        )
        .unwrap();
        let g = grand_measurement(&s).unwrap();
        for a in Outcome::BOTH {
            for ap in Outcome::BOTH {
                for b in Outcome::BOTH {
                    for bp in Outcome::BOTH {
                        if a != ap || b != bp {
                            assert!(g.prob(a, ap, b, bp) < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn grand_measurement_eigenstate_is_deterministic() {
        let id = Matrix::identity(2);
        let s = BellScenario::product(
            State::basis(4, 0).unwrap(),
            obs(pauli_z(), "A"),
            obs(id.clone(), "A'"),
            obs(pauli_z(), "B"),
            obs(id, "B'"),
        )
        .unwrap();
        let g = grand_measurement(&s).unwrap();
        let p = g.prob(Outcome::Plus, Outcome::Plus, Outcome::Plus, Outcome::Plus);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grand_measurement_matches_classical_enumeration_on_diagonals() {
        // Diagonal observables and a diagonal state: every joint basis vector
        // deterministically fixes all four outcomes, so the grand
        // distribution is a weighted count over basis vectors.
        let mut rng = Prng::new(99);
        let signs = |rng: &mut Prng| -> Vec<f64> {
            (0..4).map(|_| if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 }).collect()
        };
        let diag = |s: &[f64]| {
            let mut m = Matrix::zeros(4, 4);
            for (i, &v) in s.iter().enumerate() {
                m.set(i, i, Complex64::new(v, 0.0));
            }
            m
        };
        let sa = signs(&mut rng);
        let sap = signs(&mut rng);
        let sb = signs(&mut rng);
        let sbp = signs(&mut rng);

        let mut weights: Vec<f64> = (0..16).map(|_| rng.next_f64()).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let mut rho = Matrix::zeros(16, 16);
        for (i, &w) in weights.iter().enumerate() {
            rho.set(i, i, Complex64::new(w, 0.0));
        }

        let s = BellScenario::product(
            State::density(rho).unwrap(),
            obs(diag(&sa), "A"),
            obs(diag(&sap), "A'"),
            obs(diag(&sb), "B"),
            obs(diag(&sbp), "B'"),
        )
        .unwrap();
        let g = grand_measurement(&s).unwrap();

        // Brute-force enumeration over the 16 joint basis vectors.
        let mut expected = [0.0f64; 16];
        for i in 0..4 {
            for j in 0..4 {
                let to_outcome = |v: f64| if v > 0.0 { Outcome::Plus } else { Outcome::Minus };
                let idx = grand_index(
                    to_outcome(sa[i]),
                    to_outcome(sap[i]),
                    to_outcome(sb[j]),
                    to_outcome(sbp[j]),
                );
                expected[idx] += weights[i * 4 + j];
            }
        }
        for (got, want) in g.probabilities().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn grand_measurement_rejects_noncommuting_locals() {
        let s = BellScenario::product(
            State::basis(4, 0).unwrap(),
            obs(pauli_z(), "A"),
            obs(pauli_x(), "A'"),
            obs(pauli_z(), "B"),
            obs(pauli_z(), "B'"),
        )
        .unwrap();
        match grand_measurement(&s) {
            Err(Error::NonCommutingLocals { party, norm, .. }) => {
                assert_eq!(party, "Alice");
                // ‖[σz,σx]‖_F = ‖2iσy‖_F = 2√2.
                assert!((norm - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
            }
            other => panic!("expected NonCommutingLocals, got {other:?}"),
        }
    }

    #[test]
    fn marginalize_unit_mass() {
        let mut p = [0.0f64; 16];
        p[grand_index(Outcome::Plus, Outcome::Plus, Outcome::Plus, Outcome::Plus)] = 1.0;
        let b = marginalize(&GrandDistribution::new(p).unwrap());
        for ctx in Context::ALL {
            assert!((b.prob(ctx, Outcome::Plus, Outcome::Plus) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn marginalize_uniform_stays_uniform() {
        let b = marginalize(&GrandDistribution::new([1.0 / 16.0; 16]).unwrap());
        for ctx in Context::ALL {
            for (a, o) in joint_outcomes() {
                assert!((b.prob(ctx, a, o) - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn marginalize_matches_four_term_sums() {
        // P(A₊, B₊) must equal the four-term sum over (a', b').
        let mut rng = Prng::new(13);
        let mut p = [0.0f64; 16];
        let mut total = 0.0;
        for slot in &mut p {
            *slot = rng.next_f64();
            total += *slot;
        }
        for slot in &mut p {
            *slot /= total;
        }
        let g = GrandDistribution::new(p).unwrap();
        let b = marginalize(&g);
        let mut want = 0.0;
        for ap in Outcome::BOTH {
            for bp in Outcome::BOTH {
                want += g.prob(Outcome::Plus, ap, Outcome::Plus, bp);
            }
        }
        assert!((b.prob(Context::AB, Outcome::Plus, Outcome::Plus) - want).abs() < 1e-12);
        let report = check_marginal_laws(&b, 1e-12);
        assert!(report.satisfied, "{report:?}");
    }

    #[test]
    fn negative_dust_is_clamped_but_real_negatives_are_rejected() {
        let mut tables = [[[0.25f64; 2]; 2]; 4];
        tables[0][0][0] = -1e-13;
        tables[0][0][1] = 0.5 + 1e-13;
        assert!(Behavior::new(tables).is_ok());

        let mut tables = [[[0.25f64; 2]; 2]; 4];
        tables[0][0][0] = -1e-9;
        tables[0][0][1] = 0.5 + 1e-9;
        assert!(matches!(
            Behavior::new(tables),
            Err(Error::NegativeProbability { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let b = behavior_from_scenario(&singlet_optimal()).unwrap();
        let text = behavior_to_text(&b);
        let parsed = behavior_from_text(&text).unwrap();
        for ctx in Context::ALL {
            for (a, o) in joint_outcomes() {
                assert!((b.prob(ctx, a, o) - parsed.prob(ctx, a, o)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn text_parse_errors_carry_line_numbers() {
        let text = "behavior\ncontext A B\n0.5 0.5\noops 0.0\n";
        match behavior_from_text(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.5, 12), "0.500000000000");
        assert_eq!(format_significant(1.0, 12), "1.00000000000");
        assert_eq!(format_significant(0.0, 12), "0.00000000000");
        assert_eq!(format_significant(0.000123, 3), "0.000123");
    }
}
