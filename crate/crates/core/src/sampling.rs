//! Finite-statistics simulation: draws outcomes from a behavior, estimates
//! correlators and CHSH with uncertainties, and runs statistical versions of
//! the marginal-law test.
//!
//! Everything is deterministic in `(behavior, shots, seed)`. Each context
//! gets its own substream, seeded as `seed XOR tag(context)` with the fixed
//! tags below, so contexts can be sampled in any order (or in parallel) with
//! results identical to sequential execution.

use crate::behavior::Behavior;
use crate::error::{Error, Result};
use crate::rng::Prng;
use crate::scenario::{joint_outcome_index, joint_outcomes, Context, Outcome};

/// Below this many shots per context, statistical verdicts are withheld.
pub const MIN_SHOTS_FOR_VERDICT: u64 = 100;

/// Number of standard errors a discrepancy must exceed to count as violated.
pub const SIGMA_THRESHOLD: f64 = 3.0;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Fixed per-context stream tags: `(k+1)·0x9E3779B97F4A7C15 mod 2^64` for
/// context index `k` in canonical order.
pub const CONTEXT_TAGS: [u64; 4] = [
    GOLDEN,
    GOLDEN.wrapping_mul(2),
    GOLDEN.wrapping_mul(3),
    GOLDEN.wrapping_mul(4),
];

/// Outcome counts per context plus the provenance needed to reproduce them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledBehavior {
    counts: [[u64; 4]; 4],
    shots: u64,
    seed: u64,
}

impl SampledBehavior {
    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Count of outcome `(a, b)` in `context`.
    pub fn count(&self, context: Context, a: Outcome, b: Outcome) -> u64 {
        self.counts[context.index()][joint_outcome_index(a, b)]
    }

    /// All four counts of a context in canonical outcome order.
    pub fn context_counts(&self, context: Context) -> [u64; 4] {
        self.counts[context.index()]
    }

    /// Relative frequencies as a (valid, normalized) behavior.
    pub fn frequencies(&self) -> Behavior {
        let mut tables = [[[0.0f64; 2]; 2]; 4];
        for ctx in Context::ALL {
            for (a, b) in joint_outcomes() {
                tables[ctx.index()][a.index()][b.index()] =
                    self.count(ctx, a, b) as f64 / self.shots as f64;
            }
        }
        Behavior::new(tables).expect("frequencies are normalized by construction")
    }

    /// Count-table dump: a `samples` header followed by one context block per
    /// measurement context, mirroring the behavior text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("samples seed {} shots {}\n", self.seed, self.shots);
        for ctx in Context::ALL {
            out.push_str(&format!(
                "context {} {}\n",
                ctx.alice().label(),
                ctx.bob().label()
            ));
            for a in Outcome::BOTH {
                let row: Vec<String> = Outcome::BOTH
                    .iter()
                    .map(|&b| self.count(ctx, a, b).to_string())
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Draws `shots_per_context` outcomes per context by inverse CDF over the
/// canonical outcome order.
pub fn sample(b: &Behavior, shots_per_context: u64, seed: u64) -> Result<SampledBehavior> {
    if shots_per_context == 0 {
        return Err(Error::ZeroShots);
    }
    let mut counts = [[0u64; 4]; 4];
    for ctx in Context::ALL {
        let table = b.table(ctx);
        let flat = [table[0][0], table[0][1], table[1][0], table[1][1]];
        let mut cumulative = [0.0f64; 4];
        let mut acc = 0.0;
        for (slot, p) in cumulative.iter_mut().zip(flat) {
            acc += p;
            *slot = acc;
        }
        let mut rng = Prng::new(seed ^ CONTEXT_TAGS[ctx.index()]);
        let ctx_counts = &mut counts[ctx.index()];
        for _ in 0..shots_per_context {
            let u = rng.next_f64();
            // The final cumulative value can fall a few ulp short of one;
            // such draws belong to the last outcome.
            let outcome = cumulative.iter().position(|&c| u < c).unwrap_or(3);
            ctx_counts[outcome] += 1;
        }
    }
    Ok(SampledBehavior { counts, shots: shots_per_context, seed })
}

/// A point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    pub value: f64,
    pub standard_error: f64,
}

impl EstimateWithError {
    /// `|value − reference|` measured in standard errors (infinite when the
    /// error is zero and the values differ).
    pub fn deviation_in_errors(&self, reference: f64) -> f64 {
        let diff = (self.value - reference).abs();
        if self.standard_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.standard_error
        }
    }
}

/// Frequency estimate of one context's correlator with the binomial-derived
/// error `√((1 − Ê²)/N)`.
pub fn estimate_correlator(sb: &SampledBehavior, context: Context) -> EstimateWithError {
    let n = sb.shots() as f64;
    let mut e = 0.0;
    for (a, b) in joint_outcomes() {
        e += a.value() * b.value() * sb.count(context, a, b) as f64;
    }
    e /= n;
    let variance = ((1.0 - e * e) / n).max(0.0);
    EstimateWithError { value: e, standard_error: variance.sqrt() }
}

/// CHSH estimate with uncorrelated error propagation across the four
/// contexts.
pub fn estimate_chsh(sb: &SampledBehavior) -> EstimateWithError {
    let mut value = 0.0;
    let mut variance = 0.0;
    for ctx in Context::ALL {
        let est = estimate_correlator(sb, ctx);
        value += ctx.chsh_sign() * est.value;
        variance += est.standard_error * est.standard_error;
    }
    EstimateWithError { value, standard_error: variance.sqrt() }
}

/// Verdict of a finite-statistics check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatisticalVerdict {
    Satisfied,
    Violated,
    /// Fewer than [`MIN_SHOTS_FOR_VERDICT`] shots per context: no verdict.
    InsufficientStatistics,
}

/// Marginal-law check against pooled sampling noise instead of a fixed
/// tolerance.
///
/// Discrepancies are the same L1 quantities as the analytic check; each is
/// compared against three pooled standard errors of its own sampling
/// distribution. The reported per-party values belong to the worst
/// (discrepancy − threshold) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticalMarginalReport {
    pub alice_discrepancy: f64,
    pub alice_threshold: f64,
    pub bob_discrepancy: f64,
    pub bob_threshold: f64,
    pub verdict: StatisticalVerdict,
}

fn pooled_pair_check(
    sb: &SampledBehavior,
    c1: Context,
    c2: Context,
    marginal_plus: impl Fn(Context) -> u64,
) -> (f64, f64) {
    let n = sb.shots() as f64;
    let k1 = marginal_plus(c1) as f64;
    let k2 = marginal_plus(c2) as f64;
    let p1 = k1 / n;
    let p2 = k2 / n;
    // L1 distance between two-outcome marginals is twice the |Δ| on the
    // `+1` outcome; scale the pooled standard error accordingly.
    let discrepancy = 2.0 * (p1 - p2).abs();
    let pooled = (k1 + k2) / (2.0 * n);
    let se = (pooled * (1.0 - pooled) * (2.0 / n)).max(0.0).sqrt();
    (discrepancy, SIGMA_THRESHOLD * 2.0 * se)
}

/// Statistical marginal-law check at three pooled standard errors; verdicts
/// are withheld below 100 shots per context.
pub fn statistical_marginal_check(sb: &SampledBehavior) -> StatisticalMarginalReport {
    let alice_plus = |ctx: Context| {
        sb.count(ctx, Outcome::Plus, Outcome::Plus) + sb.count(ctx, Outcome::Plus, Outcome::Minus)
    };
    let bob_plus = |ctx: Context| {
        sb.count(ctx, Outcome::Plus, Outcome::Plus) + sb.count(ctx, Outcome::Minus, Outcome::Plus)
    };

    let pairs_alice = [
        (Context::AB, Context::ABPrime),
        (Context::APrimeB, Context::APrimeBPrime),
    ];
    let pairs_bob = [
        (Context::AB, Context::APrimeB),
        (Context::ABPrime, Context::APrimeBPrime),
    ];

    let mut alice = (0.0f64, 0.0f64);
    let mut alice_excess = f64::NEG_INFINITY;
    for (c1, c2) in pairs_alice {
        let (d, t) = pooled_pair_check(sb, c1, c2, alice_plus);
        if d - t > alice_excess {
            alice_excess = d - t;
            alice = (d, t);
        }
    }
    let mut bob = (0.0f64, 0.0f64);
    let mut bob_excess = f64::NEG_INFINITY;
    for (c1, c2) in pairs_bob {
        let (d, t) = pooled_pair_check(sb, c1, c2, bob_plus);
        if d - t > bob_excess {
            bob_excess = d - t;
            bob = (d, t);
        }
    }

    let verdict = if sb.shots() < MIN_SHOTS_FOR_VERDICT {
        StatisticalVerdict::InsufficientStatistics
    } else if alice_excess > 0.0 || bob_excess > 0.0 {
        StatisticalVerdict::Violated
    } else {
        StatisticalVerdict::Satisfied
    };

    StatisticalMarginalReport {
        alice_discrepancy: alice.0,
        alice_threshold: alice.1,
        bob_discrepancy: bob.0,
        bob_threshold: bob.1,
        verdict,
    }
}
