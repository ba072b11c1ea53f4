//! Kolmogorovian embeddability: can one probability distribution over the
//! sixteen deterministic local strategies reproduce all four context tables
//! as marginals?
//!
//! Feasibility is decided by a phase-1 simplex over the 16 strategy weights
//! with one equality constraint per (context, outcome) pair. Infeasible
//! verdicts carry a witness: a marginal-law violation when one exists
//! (the Fine characterization presupposes no-signaling), otherwise the
//! violated CHSH-type inequality from the Fine family of eight.

mod simplex;

use crate::behavior::{
    check_marginal_laws, correlators, Behavior, MarginalReport, MARGINAL_TOL,
};
use crate::error::{Error, Result};
use crate::scenario::{joint_outcomes, Context, Outcome};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use simplex::{phase1_feasibility, ratio_int, LpScalar, Phase1Outcome};

/// Feasibility and model-reproduction tolerance in float mode.
pub const EMBED_TOL: f64 = 1e-9;

/// One assignment of definite outcomes to all four local observables.
///
/// The sixteen strategies are ordered lexicographically over `(a, a', b, b')`
/// with `+1` before `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub a: Outcome,
    pub a_prime: Outcome,
    pub b: Outcome,
    pub b_prime: Outcome,
}

impl DeterministicStrategy {
    /// Canonical position: `8·[a=−] + 4·[a'=−] + 2·[b=−] + [b'=−]`.
    pub fn index(self) -> usize {
        self.a.index() * 8 + self.a_prime.index() * 4 + self.b.index() * 2 + self.b_prime.index()
    }

    pub fn from_index(index: usize) -> DeterministicStrategy {
        DeterministicStrategy {
            a: Outcome::from_index((index >> 3) & 1),
            a_prime: Outcome::from_index((index >> 2) & 1),
            b: Outcome::from_index((index >> 1) & 1),
            b_prime: Outcome::from_index(index & 1),
        }
    }

    /// All sixteen strategies in canonical order.
    pub fn all() -> [DeterministicStrategy; 16] {
        std::array::from_fn(DeterministicStrategy::from_index)
    }

    /// The outcome pair this strategy produces in a context.
    pub fn outcomes_in(self, context: Context) -> (Outcome, Outcome) {
        let alice = match context {
            Context::AB | Context::ABPrime => self.a,
            _ => self.a_prime,
        };
        let bob = match context {
            Context::AB | Context::APrimeB => self.b,
            _ => self.b_prime,
        };
        (alice, bob)
    }

    pub fn consistent_with(self, context: Context, a: Outcome, b: Outcome) -> bool {
        self.outcomes_in(context) == (a, b)
    }

    /// The deterministic behavior this strategy induces.
    pub fn behavior(self) -> Behavior {
        let mut tables = [[[0.0f64; 2]; 2]; 4];
        for ctx in Context::ALL {
            let (a, b) = self.outcomes_in(ctx);
            tables[ctx.index()][a.index()][b.index()] = 1.0;
        }
        Behavior::new(tables).expect("deterministic tables are normalized")
    }
}

/// Nonnegative weights over the sixteen strategies, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct KolmogorovModel {
    weights: [f64; 16],
}

impl KolmogorovModel {
    /// Validates nonnegativity (clamping dust) and normalization within 1e-9.
    pub fn new(weights: [f64; 16]) -> Result<Self> {
        let mut clean = [0.0f64; 16];
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::InvalidBehavior { reason: "non-finite model weight".into() });
            }
            if w < -1e-12 {
                return Err(Error::NegativeProbability { value: w });
            }
            clean[i] = w.max(0.0);
            sum += clean[i];
        }
        if (sum - 1.0).abs() > EMBED_TOL {
            return Err(Error::InvalidBehavior {
                reason: format!("model weights sum to {sum} (must be 1 ± 1e-9)"),
            });
        }
        Ok(KolmogorovModel { weights: clean })
    }

    pub fn weights(&self) -> &[f64; 16] {
        &self.weights
    }

    pub fn weight(&self, strategy: DeterministicStrategy) -> f64 {
        self.weights[strategy.index()]
    }

    /// The behavior whose context tables are this model's marginals.
    pub fn induced_behavior(&self) -> Behavior {
        let mut tables = [[[0.0f64; 2]; 2]; 4];
        for strategy in DeterministicStrategy::all() {
            let w = self.weight(strategy);
            for ctx in Context::ALL {
                let (a, b) = strategy.outcomes_in(ctx);
                tables[ctx.index()][a.index()][b.index()] += w;
            }
        }
        Behavior::new(tables).expect("model marginals are normalized")
    }

    /// Certificate text: sixteen `a a' b b' weight` lines in canonical order.
    pub fn to_certificate_text(&self) -> String {
        let mut out = String::new();
        for strategy in DeterministicStrategy::all() {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                strategy.a.label(),
                strategy.a_prime.label(),
                strategy.b.label(),
                strategy.b_prime.label(),
                self.weight(strategy)
            ));
        }
        out
    }
}

/// One member of the Fine family: `Σ_k signs[k]·E_k ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FineInequality {
    /// 1-based position among the eight odd-sign vectors in canonical order.
    pub index: usize,
    /// Signs applied to the correlators in canonical context order.
    pub signs: [f64; 4],
    pub value: f64,
}

/// Why a behavior cannot be embedded.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// No-signaling fails; reported before any inequality because the Fine
    /// characterization presupposes the marginal laws.
    MarginalLaws(MarginalReport),
    /// A Fine inequality exceeds the classical bound of 2.
    FineInequality(FineInequality),
}

/// Outcome of the embeddability decision.
#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddabilityResult {
    Feasible(KolmogorovModel),
    Infeasible(Witness),
}

impl EmbeddabilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, EmbeddabilityResult::Feasible(_))
    }

    pub fn model(&self) -> Option<&KolmogorovModel> {
        match self {
            EmbeddabilityResult::Feasible(m) => Some(m),
            EmbeddabilityResult::Infeasible(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            EmbeddabilityResult::Feasible(_) => None,
            EmbeddabilityResult::Infeasible(w) => Some(w),
        }
    }
}

/// The eight sign vectors with an odd number of `−1` entries, in ascending
/// order of their bit patterns (`−1` ↔ bit set).
fn odd_sign_vectors() -> [[f64; 4]; 8] {
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

/// Evaluates the eight Fine/CHSH expressions `s·E`; each must be at most 2
/// for the behavior to be embeddable (given the marginal laws).
pub fn fine_inequalities(b: &Behavior) -> [FineInequality; 8] {
    let e = correlators(b);
    let vectors = odd_sign_vectors();
    std::array::from_fn(|k| {
        let signs = vectors[k];
        let value = signs.iter().zip(&e).map(|(s, e)| s * e).sum();
        FineInequality { index: k + 1, signs, value }
    })
}

/// Largest Fine value and the inequality attaining it.
pub fn max_fine_inequality(b: &Behavior) -> FineInequality {
    let all = fine_inequalities(b);
    all.into_iter()
        .max_by(|x, y| x.value.partial_cmp(&y.value).unwrap())
        .unwrap()
}

fn constraint_matrix<T: LpScalar>(one: impl Fn() -> T) -> Vec<Vec<T>> {
    let mut rows = Vec::with_capacity(16);
    for ctx in Context::ALL {
        for (a, b) in joint_outcomes() {
            let row = DeterministicStrategy::all()
                .iter()
                .map(|s| if s.consistent_with(ctx, a, b) { one() } else { T::zero() })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Decides whether weights over the sixteen strategies reproduce the four
/// context tables (float mode, tolerance `1e-9`).
pub fn embed(b: &Behavior) -> EmbeddabilityResult {
    let a: Vec<Vec<f64>> = constraint_matrix(|| 1.0);
    let mut rhs = Vec::with_capacity(16);
    for ctx in Context::ALL {
        for (oa, ob) in joint_outcomes() {
            rhs.push(b.prob(ctx, oa, ob));
        }
    }
    match phase1_feasibility(&a, &rhs) {
        Some(Phase1Outcome::Feasible(x)) => {
            let weights: [f64; 16] = std::array::from_fn(|i| x[i]);
            match KolmogorovModel::new(weights) {
                Ok(model) => EmbeddabilityResult::Feasible(model),
                Err(_) => infeasibility_witness(b),
            }
        }
        Some(Phase1Outcome::Infeasible { .. }) | None => infeasibility_witness(b),
    }
}

fn infeasibility_witness(b: &Behavior) -> EmbeddabilityResult {
    let report = check_marginal_laws(b, MARGINAL_TOL);
    if !report.satisfied {
        return EmbeddabilityResult::Infeasible(Witness::MarginalLaws(report));
    }
    EmbeddabilityResult::Infeasible(Witness::FineInequality(max_fine_inequality(b)))
}

/// Maximum discrepancy between the model's marginals and the behavior.
pub fn verify_model(m: &KolmogorovModel, b: &Behavior) -> f64 {
    let induced = m.induced_behavior();
    let mut max = 0.0f64;
    for ctx in Context::ALL {
        for (a, o) in joint_outcomes() {
            max = max.max((induced.prob(ctx, a, o) - b.prob(ctx, a, o)).abs());
        }
    }
    max
}

/// Cross-validates the LP decision against the Fine characterization:
/// feasible ⇔ (marginal laws hold ∧ all eight Fine values ≤ 2 + 1e-9).
pub fn embeddability_equivalence_check(b: &Behavior) -> bool {
    let lp_feasible = embed(b).is_feasible();
    let laws = check_marginal_laws(b, MARGINAL_TOL).satisfied;
    let fine_ok = max_fine_inequality(b).value <= 2.0 + EMBED_TOL;
    lp_feasible == (laws && fine_ok)
}

// ── Exact rational mode ──────────────────────────────────────────────────────

/// Behavior with exact rational entries, each table summing to exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBehavior {
    tables: [[[BigRational; 2]; 2]; 4],
}

impl ExactBehavior {
    pub fn new(tables: [[[BigRational; 2]; 2]; 4]) -> Result<Self> {
        for ctx in Context::ALL {
            let t = &tables[ctx.index()];
            let mut sum = BigRational::zero();
            for row in t {
                for p in row {
                    if p < &BigRational::zero() {
                        return Err(Error::NotExactlyRational {
                            reason: format!("negative entry in table {}", ctx.label()),
                        });
                    }
                    sum += p;
                }
            }
            if sum != ratio_int(1) {
                return Err(Error::NotExactlyRational {
                    reason: format!("table {} sums to {} instead of 1", ctx.label(), sum),
                });
            }
        }
        Ok(ExactBehavior { tables })
    }

    /// Parses the behavior text format with digit-exact decimal arithmetic,
    /// so entries like `0.1` mean exactly one tenth rather than the nearest
    /// double.
    pub fn from_text(text: &str) -> Result<Self> {
        use crate::behavior::{parse_setting_pair, significant_lines};
        let lines = significant_lines(text);
        if lines.is_empty() || lines[0].1[0] != "behavior" {
            let line = lines.first().map(|(l, _)| *l).unwrap_or(1);
            return Err(Error::Parse { line, message: "expected 'behavior' header".into() });
        }
        let mut cursor = 1usize;
        let mut tables: [[[Option<BigRational>; 2]; 2]; 4] = Default::default();
        while cursor < lines.len() {
            let (line, tokens) = &lines[cursor];
            if tokens[0] != "context" || tokens.len() != 3 {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("expected 'context <X> <Y>', found {:?}", tokens.join(" ")),
                });
            }
            let ctx = parse_setting_pair(*line, &tokens[1], &tokens[2])?;
            cursor += 1;
            for ia in 0..2 {
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
                for (ib, token) in row_tokens.iter().enumerate() {
                    tables[ctx.index()][ia][ib] =
                        Some(parse_decimal_rational(token).map_err(|message| Error::Parse {
                            line: *row_line,
                            message,
                        })?);
                }
                cursor += 1;
            }
        }
        let mut out: [[[BigRational; 2]; 2]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| BigRational::zero())));
        for ctx in Context::ALL {
            for ia in 0..2 {
                for ib in 0..2 {
                    out[ctx.index()][ia][ib] = tables[ctx.index()][ia][ib].clone().ok_or(
                        Error::Parse {
                            line: lines.last().map(|(l, _)| *l).unwrap_or(1),
                            message: format!("missing context block {}", ctx.label()),
                        },
                    )?;
                }
            }
        }
        ExactBehavior::new(out)
    }

    /// Converts a float behavior entrywise: every finite `f64` is an exact
    /// dyadic rational independent of decimal rendering. Fails unless each
    /// table sums to exactly one, which is what exact mode demands.
    pub fn from_behavior(b: &Behavior) -> Result<Self> {
        let tables = std::array::from_fn(|c| {
            std::array::from_fn(|ia| {
                std::array::from_fn(|ib| {
                    BigRational::from_float(b.table(Context::ALL[c])[ia][ib])
                        .unwrap_or_else(BigRational::zero)
                })
            })
        });
        ExactBehavior::new(tables)
    }

    pub fn prob(&self, context: Context, a: Outcome, b: Outcome) -> &BigRational {
        &self.tables[context.index()][a.index()][b.index()]
    }

    /// Nearest float behavior.
    pub fn to_behavior(&self) -> Result<Behavior> {
        let mut tables = [[[0.0f64; 2]; 2]; 4];
        for ctx in Context::ALL {
            for (a, b) in joint_outcomes() {
                tables[ctx.index()][a.index()][b.index()] =
                    self.prob(ctx, a, b).to_f64().unwrap_or(f64::NAN);
            }
        }
        Behavior::new(tables)
    }
}

/// Parses a plain decimal literal (optional sign, fraction, exponent) into
/// an exact rational with a power-of-ten denominator.
pub fn parse_decimal_rational(token: &str) -> std::result::Result<BigRational, String> {
    let bad = || format!("not a decimal number: {token:?}");
    let mut rest = token;
    let mut negative = false;
    if let Some(stripped) = rest.strip_prefix('-') {
        negative = true;
        rest = stripped;
    } else if let Some(stripped) = rest.strip_prefix('+') {
        rest = stripped;
    }
    let (mantissa, exponent) = match rest.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = rest[pos + 1..].parse().map_err(|_| bad())?;
            (&rest[..pos], exp)
        }
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numerator: num_bigint::BigInt = digits.parse().map_err(|_| bad())?;
    if negative {
        numerator = -numerator;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = num_bigint::BigInt::from(10u8);
    Ok(if scale >= 0 {
        BigRational::from_integer(numerator * ten.pow(scale as u32))
    } else {
        BigRational::new(numerator, ten.pow((-scale) as u32))
    })
}

/// Exact certificate: rational weights summing to exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactKolmogorovModel {
    weights: [BigRational; 16],
}

impl ExactKolmogorovModel {
    pub fn weights(&self) -> &[BigRational; 16] {
        &self.weights
    }

    pub fn weight(&self, strategy: DeterministicStrategy) -> &BigRational {
        &self.weights[strategy.index()]
    }

    /// Certificate text with weights as exact fractions.
    pub fn to_certificate_text(&self) -> String {
        let mut out = String::new();
        for strategy in DeterministicStrategy::all() {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                strategy.a.label(),
                strategy.a_prime.label(),
                strategy.b.label(),
                strategy.b_prime.label(),
                self.weight(strategy)
            ));
        }
        out
    }

    /// Exact reproduction check; `true` iff every marginal matches exactly.
    pub fn reproduces(&self, b: &ExactBehavior) -> bool {
        for ctx in Context::ALL {
            for (a, o) in joint_outcomes() {
                let mut p = BigRational::zero();
                for strategy in DeterministicStrategy::all() {
                    if strategy.consistent_with(ctx, a, o) {
                        p += self.weight(strategy);
                    }
                }
                if &p != b.prob(ctx, a, o) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_float(&self) -> Result<KolmogorovModel> {
        let weights = std::array::from_fn(|i| self.weights[i].to_f64().unwrap_or(f64::NAN));
        KolmogorovModel::new(weights)
    }
}

/// Exact witness counterpart.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactWitness {
    MarginalLaws { alice_max: BigRational, bob_max: BigRational },
    FineInequality { index: usize, signs: [f64; 4], value: BigRational },
}

/// Exact verdict: no tolerance involved anywhere.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactEmbeddabilityResult {
    Feasible(ExactKolmogorovModel),
    Infeasible(ExactWitness),
}

impl ExactEmbeddabilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ExactEmbeddabilityResult::Feasible(_))
    }
}

fn exact_correlators(b: &ExactBehavior) -> [BigRational; 4] {
    std::array::from_fn(|c| {
        let ctx = Context::ALL[c];
        let mut e = BigRational::zero();
        for (a, o) in joint_outcomes() {
            let sign = ratio_int((a.value() * o.value()) as i64);
            e += sign * b.prob(ctx, a, o);
        }
        e
    })
}

fn exact_marginal_discrepancies(b: &ExactBehavior) -> (BigRational, BigRational) {
    let marg_alice = |ctx: Context, a: Outcome| -> BigRational {
        Outcome::BOTH.iter().map(|&o| b.prob(ctx, a, o).clone()).sum()
    };
    let marg_bob = |ctx: Context, o: Outcome| -> BigRational {
        Outcome::BOTH.iter().map(|&a| b.prob(ctx, a, o).clone()).sum()
    };
    let mut alice_max = BigRational::zero();
    for (c1, c2) in [(Context::AB, Context::ABPrime), (Context::APrimeB, Context::APrimeBPrime)] {
        let d: BigRational = Outcome::BOTH
            .iter()
            .map(|&a| Signed::abs(&(marg_alice(c1, a) - marg_alice(c2, a))))
            .sum();
        if d > alice_max {
            alice_max = d;
        }
    }
    let mut bob_max = BigRational::zero();
    for (c1, c2) in [(Context::AB, Context::APrimeB), (Context::ABPrime, Context::APrimeBPrime)] {
        let d: BigRational = Outcome::BOTH
            .iter()
            .map(|&o| Signed::abs(&(marg_bob(c1, o) - marg_bob(c2, o))))
            .sum();
        if d > bob_max {
            bob_max = d;
        }
    }
    (alice_max, bob_max)
}

/// Exact embeddability over rational arithmetic; the verdict involves no
/// tolerance at all.
pub fn embed_exact(b: &ExactBehavior) -> ExactEmbeddabilityResult {
    let a: Vec<Vec<BigRational>> = constraint_matrix(|| ratio_int(1));
    let mut rhs = Vec::with_capacity(16);
    for ctx in Context::ALL {
        for (oa, ob) in joint_outcomes() {
            rhs.push(b.prob(ctx, oa, ob).clone());
        }
    }
    match phase1_feasibility(&a, &rhs) {
        Some(Phase1Outcome::Feasible(x)) => {
            let weights: [BigRational; 16] = std::array::from_fn(|i| x[i].clone());
            ExactEmbeddabilityResult::Feasible(ExactKolmogorovModel { weights })
        }
        Some(Phase1Outcome::Infeasible { .. }) | None => {
            let (alice_max, bob_max) = exact_marginal_discrepancies(b);
            if !alice_max.is_zero() || !bob_max.is_zero() {
                return ExactEmbeddabilityResult::Infeasible(ExactWitness::MarginalLaws {
                    alice_max,
                    bob_max,
                });
            }
            let e = exact_correlators(b);
            let vectors = odd_sign_vectors();
            let mut best: Option<(usize, [f64; 4], BigRational)> = None;
            for (k, signs) in vectors.iter().enumerate() {
                let mut value = BigRational::zero();
                for (s, ek) in signs.iter().zip(&e) {
                    value += ratio_int(*s as i64) * ek.clone();
                }
                if best.as_ref().map(|(_, _, v)| value > *v).unwrap_or(true) {
                    best = Some((k + 1, *signs, value));
                }
            }
            let (index, signs, value) = best.unwrap();
            ExactEmbeddabilityResult::Infeasible(ExactWitness::FineInequality { index, signs, value })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::chsh_from_behavior;
    use crate::rng::Prng;

    fn deterministic_behavior_all_plus() -> Behavior {
        DeterministicStrategy::from_index(0).behavior()
    }

    #[test]
    fn strategy_order_is_lexicographic() {
        let s0 = DeterministicStrategy::from_index(0);
        assert_eq!(
            (s0.a, s0.a_prime, s0.b, s0.b_prime),
            (Outcome::Plus, Outcome::Plus, Outcome::Plus, Outcome::Plus)
        );
        let s1 = DeterministicStrategy::from_index(1);
        assert_eq!(s1.b_prime, Outcome::Minus);
        for (i, s) in DeterministicStrategy::all().iter().enumerate() {
            assert_eq!(s.index(), i);
        }
    }

    #[test]
    fn unit_mass_behavior_embeds_on_the_all_plus_strategy() {
        let b = deterministic_behavior_all_plus();
        match embed(&b) {
            EmbeddabilityResult::Feasible(model) => {
                assert!((model.weights()[0] - 1.0).abs() < 1e-9);
                assert!(verify_model(&model, &b) <= 1e-9);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn verify_model_is_exact_on_matched_pairs() {
        // A unit-mass model against its own induced behavior.
        let mut weights = [0.0f64; 16];
        weights[5] = 1.0;
        let model = KolmogorovModel::new(weights).unwrap();
        assert_eq!(verify_model(&model, &model.induced_behavior()), 0.0);

        // The uniform model against the all-uniform behavior.
        let uniform = KolmogorovModel::new([1.0 / 16.0; 16]).unwrap();
        assert_eq!(verify_model(&uniform, &Behavior::uniform()), 0.0);
    }

    #[test]
    fn uniform_behavior_is_feasible() {
        let b = Behavior::uniform();
        let result = embed(&b);
        assert!(result.is_feasible());
        assert!(verify_model(result.model().unwrap(), &b) <= 1e-9);
    }

    #[test]
    fn fine_values_for_uniform_behavior_vanish() {
        for ineq in fine_inequalities(&Behavior::uniform()) {
            assert!(ineq.value.abs() < 1e-12);
        }
    }

    #[test]
    fn fine_values_for_perfect_correlation_peak_at_two() {
        let b = Behavior::from_single_table([[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let values = fine_inequalities(&b);
        let max = values.iter().fold(f64::MIN, |m, i| m.max(i.value));
        assert!((max - 2.0).abs() < 1e-12);
        assert!(values.iter().all(|i| i.value <= 2.0 + 1e-12));
    }

    #[test]
    fn pr_box_violates_one_fine_inequality_at_four() {
        let b = Behavior::pr_box([1.0, 1.0, 1.0, -1.0]).unwrap();
        let values = fine_inequalities(&b);
        let max = max_fine_inequality(&b);
        assert!((max.value - 4.0).abs() < 1e-12);
        assert_eq!(max.index, 1);
        let at_most_two = values.iter().filter(|i| i.value <= 2.0 + 1e-12).count();
        assert_eq!(at_most_two, 7);
    }

    #[test]
    fn pr_box_is_infeasible_with_fine_witness() {
        let b = Behavior::pr_box([1.0, 1.0, 1.0, -1.0]).unwrap();
        assert!((chsh_from_behavior(&b) - 4.0).abs() < 1e-12);
        match embed(&b) {
            EmbeddabilityResult::Infeasible(Witness::FineInequality(f)) => {
                assert!((f.value - 4.0).abs() < 1e-9);
            }
            other => panic!("expected Fine witness, got {other:?}"),
        }
    }

    #[test]
    fn random_models_round_trip_through_embed() {
        let mut rng = Prng::new(2024);
        for _ in 0..50 {
            let mut weights = [0.0f64; 16];
            let mut sum = 0.0;
            for w in &mut weights {
                *w = rng.next_f64();
                sum += *w;
            }
            for w in &mut weights {
                *w /= sum;
            }
            let model = KolmogorovModel::new(weights).unwrap();
            let behavior = model.induced_behavior();
            let result = embed(&behavior);
            assert!(result.is_feasible(), "classical behavior must embed");
            // The recovered weights need not match, but the behavior must.
            assert!(verify_model(result.model().unwrap(), &behavior) <= 1e-9);
            assert!(embeddability_equivalence_check(&behavior));
        }
    }

    #[test]
    fn fine_monotonicity_forces_infeasibility() {
        // Mix PR box with uniform noise: S = 4w stays above 2 for w > 1/2.
        let pr = Behavior::pr_box([1.0, 1.0, 1.0, -1.0]).unwrap();
        for &w in &[0.6, 0.75, 0.9] {
            let mut tables = [[[0.0f64; 2]; 2]; 4];
            for ctx in Context::ALL {
                for (a, b) in joint_outcomes() {
                    tables[ctx.index()][a.index()][b.index()] =
                        w * pr.prob(ctx, a, b) + (1.0 - w) * 0.25;
                }
            }
            let behavior = Behavior::new(tables).unwrap();
            assert!(check_marginal_laws(&behavior, MARGINAL_TOL).satisfied);
            assert!(max_fine_inequality(&behavior).value > 2.0 + 1e-8);
            assert!(!embed(&behavior).is_feasible());
            assert!(embeddability_equivalence_check(&behavior));
        }
    }

    #[test]
    fn certificate_text_has_sixteen_lines() {
        let model = KolmogorovModel::new(std::array::from_fn(|_| 1.0 / 16.0)).unwrap();
        let text = model.to_certificate_text();
        assert_eq!(text.lines().count(), 16);
        assert!(text.starts_with("+1 +1 +1 +1 "));
    }

    #[test]
    fn exact_mode_is_sharp_on_dyadic_inputs() {
        // 3/4 of the all-plus strategy plus 1/4 of the all-minus strategy.
        let mut tables = [[[0.0f64; 2]; 2]; 4];
        for ctx in Context::ALL {
            tables[ctx.index()][0][0] = 0.75;
            tables[ctx.index()][1][1] = 0.25;
        }
        let b = Behavior::new(tables).unwrap();
        let exact = ExactBehavior::from_behavior(&b).unwrap();
        match embed_exact(&exact) {
            ExactEmbeddabilityResult::Feasible(model) => {
                assert!(model.reproduces(&exact));
                let sum: BigRational = model.weights().iter().cloned().sum();
                assert_eq!(sum, ratio_int(1));
            }
            other => panic!("expected exact feasible, got {other:?}"),
        }

        // The dyadic PR box is exactly infeasible.
        let pr = Behavior::pr_box([1.0, 1.0, 1.0, -1.0]).unwrap();
        let exact_pr = ExactBehavior::from_behavior(&pr).unwrap();
        match embed_exact(&exact_pr) {
            ExactEmbeddabilityResult::Infeasible(ExactWitness::FineInequality { value, .. }) => {
                assert_eq!(value, ratio_int(4));
            }
            other => panic!("expected exact Fine witness, got {other:?}"),
        }
    }

    #[test]
    fn exact_mode_rejects_unnormalized_tables() {
        // A rational table summing to 2/3 instead of 1.
        let third = ratio_int(1) / ratio_int(3);
        let zero = BigRational::zero;
        let table = [[third.clone(), zero()], [zero(), third]];
        let tables = [table.clone(), table.clone(), table.clone(), table];
        assert!(matches!(
            ExactBehavior::new(tables),
            Err(Error::NotExactlyRational { .. })
        ));
    }

    #[test]
    fn decimal_rational_parsing_is_digit_exact() {
        let tenth = parse_decimal_rational("0.1").unwrap();
        assert_eq!(tenth, BigRational::new(1.into(), 10.into()));
        assert_eq!(parse_decimal_rational("1").unwrap(), ratio_int(1));
        assert_eq!(parse_decimal_rational("2.5e-1").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_decimal_rational("-0.75").unwrap(), BigRational::new((-3).into(), 4.into()));
        assert!(parse_decimal_rational("abc").is_err());
        assert!(parse_decimal_rational(".").is_err());

        // 0.1 + 0.4 + 0.3 + 0.2 is exactly 1 in decimal arithmetic even
        // though it is not in binary.
        let sum: BigRational = ["0.1", "0.4", "0.3", "0.2"]
            .iter()
            .map(|t| parse_decimal_rational(t).unwrap())
            .sum();
        assert_eq!(sum, ratio_int(1));
    }

    #[test]
    fn exact_text_parsing_round_trips() {
        let text = "behavior\n\
                    context A B\n0.1 0.4\n0.3 0.2\n\
                    context A B'\n0.25 0.25\n0.25 0.25\n\
                    context A' B\n0.5 0\n0 0.5\n\
                    context A' B'\n1 0\n0 0\n";
        let exact = ExactBehavior::from_text(text).unwrap();
        assert_eq!(
            *exact.prob(Context::AB, Outcome::Plus, Outcome::Minus),
            BigRational::new(2.into(), 5.into())
        );
        // Same text through the float parser: tables agree to rounding.
        let float = crate::behavior::behavior_from_text(text).unwrap();
        let back = exact.to_behavior().unwrap();
        for ctx in Context::ALL {
            for (a, b) in joint_outcomes() {
                assert!((float.prob(ctx, a, b) - back.prob(ctx, a, b)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn signaling_witness_takes_priority() {
        // Deterministic but signaling: Bob's outcome flips with Alice's
        // setting in the B' contexts.
        let plus_plus = [[1.0, 0.0], [0.0, 0.0]];
        let plus_minus = [[0.0, 1.0], [0.0, 0.0]];
        let b = Behavior::new([plus_plus, plus_plus, plus_plus, plus_minus]).unwrap();
        match embed(&b) {
            EmbeddabilityResult::Infeasible(Witness::MarginalLaws(report)) => {
                assert!((report.bob_max - 2.0).abs() < 1e-12);
                assert!(report.alice_max < 1e-12);
            }
            other => panic!("expected marginal witness, got {other:?}"),
        }
        assert!(embeddability_equivalence_check(&b));
    }
}
