//! Analysis report assembly and rendering.
//!
//! Human output prints 6 significant digits; the JSON document carries full
//! double precision. Every number is reproducible by re-running the command
//! on the same inputs.

use bellkit::behavior::{
    behavior_from_scenario, check_marginal_laws, chsh_from_behavior, correlators,
    format_significant, Behavior, MarginalReport,
};
use bellkit::error::Result;
use bellkit::kolmogorov::{embed, DeterministicStrategy, EmbeddabilityResult, Witness};
use bellkit::sampling::{
    estimate_chsh, estimate_correlator, statistical_marginal_check, SampledBehavior,
    StatisticalVerdict,
};
use bellkit::scenario::{BellScenario, Context, MeasurementForm, Outcome};
use bellkit::state::State;
use serde::Serialize;
use std::fmt::Write;

fn sig6(value: f64) -> String {
    format_significant(value, 6)
}

#[derive(Serialize)]
pub struct InputSummary {
    pub kind: &'static str,
    pub dim_alice: Option<usize>,
    pub dim_bob: Option<usize>,
    pub state: Option<&'static str>,
    pub measurement_forms: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct CommutatorLine {
    pub label: &'static str,
    pub norm: f64,
    pub identity_agreement_residual: f64,
}

#[derive(Serialize)]
pub struct OperatorChecks {
    pub square_identity_residual: f64,
    pub commutators: Vec<CommutatorLine>,
    pub chsh_expectation: f64,
    pub chsh_spectral_bound: f64,
}

#[derive(Serialize)]
pub struct ContextTable {
    pub context: &'static str,
    pub probabilities: [[f64; 2]; 2],
}

#[derive(Serialize)]
pub struct BehaviorSection {
    pub tables: Vec<ContextTable>,
    pub correlators: [f64; 4],
    pub chsh: f64,
}

#[derive(Serialize)]
pub struct MarginalSection {
    pub alice_max_discrepancy: f64,
    pub bob_max_discrepancy: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

#[derive(Serialize)]
pub struct CertificateLine {
    pub a: &'static str,
    pub a_prime: &'static str,
    pub b: &'static str,
    pub b_prime: &'static str,
    pub weight: f64,
}

#[derive(Serialize)]
pub struct WitnessSection {
    pub kind: &'static str,
    pub fine_index: Option<usize>,
    pub fine_signs: Option<[f64; 4]>,
    pub fine_value: Option<f64>,
    pub marginal_alice_max: Option<f64>,
    pub marginal_bob_max: Option<f64>,
}

#[derive(Serialize)]
pub struct EmbeddabilitySection {
    pub verdict: &'static str,
    pub certificate: Option<Vec<CertificateLine>>,
    pub witness: Option<WitnessSection>,
    pub max_model_discrepancy: Option<f64>,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub input: InputSummary,
    pub operator_checks: Option<OperatorChecks>,
    pub operator_checks_unavailable: Option<&'static str>,
    pub behavior: BehaviorSection,
    pub marginals: MarginalSection,
    pub embeddability: EmbeddabilitySection,
}

fn summarize_scenario(s: &BellScenario) -> InputSummary {
    InputSummary {
        kind: "scenario",
        dim_alice: Some(s.dim_alice()),
        dim_bob: Some(s.dim_bob()),
        state: Some(match s.state() {
            State::Pure(_) => "pure",
            State::Density(_) => "density",
        }),
        measurement_forms: Some(
            Context::ALL
                .iter()
                .map(|&ctx| {
                    let form = match s.measurement(ctx).form {
                        MeasurementForm::Product => "product",
                        MeasurementForm::Custom { .. } => "custom",
                    };
                    format!("{} {form}", ctx.label())
                })
                .collect(),
        ),
    }
}

fn behavior_section(b: &Behavior) -> BehaviorSection {
    BehaviorSection {
        tables: Context::ALL
            .iter()
            .map(|&ctx| ContextTable { context: ctx.label(), probabilities: *b.table(ctx) })
            .collect(),
        correlators: correlators(b),
        chsh: chsh_from_behavior(b),
    }
}

fn marginal_section(report: &MarginalReport) -> MarginalSection {
    MarginalSection {
        alice_max_discrepancy: report.alice_max,
        bob_max_discrepancy: report.bob_max,
        tolerance: report.tolerance,
        satisfied: report.satisfied,
    }
}

fn embeddability_section(b: &Behavior) -> EmbeddabilitySection {
    match embed(b) {
        EmbeddabilityResult::Feasible(model) => {
            let certificate = DeterministicStrategy::all()
                .iter()
                .map(|s| CertificateLine {
                    a: s.a.label(),
                    a_prime: s.a_prime.label(),
                    b: s.b.label(),
                    b_prime: s.b_prime.label(),
                    weight: model.weight(*s),
                })
                .collect();
            let discrepancy = bellkit::kolmogorov::verify_model(&model, b);
            EmbeddabilitySection {
                verdict: "feasible",
                certificate: Some(certificate),
                witness: None,
                max_model_discrepancy: Some(discrepancy),
            }
        }
        EmbeddabilityResult::Infeasible(witness) => {
            let section = match witness {
                Witness::MarginalLaws(report) => WitnessSection {
                    kind: "marginal-laws",
                    fine_index: None,
                    fine_signs: None,
                    fine_value: None,
                    marginal_alice_max: Some(report.alice_max),
                    marginal_bob_max: Some(report.bob_max),
                },
                Witness::FineInequality(fine) => WitnessSection {
                    kind: "fine-inequality",
                    fine_index: Some(fine.index),
                    fine_signs: Some(fine.signs),
                    fine_value: Some(fine.value),
                    marginal_alice_max: None,
                    marginal_bob_max: None,
                },
            };
            EmbeddabilitySection {
                verdict: "infeasible",
                certificate: None,
                witness: Some(section),
                max_model_discrepancy: None,
            }
        }
    }
}

/// Full analysis of a scenario file.
pub fn analyze_scenario(s: &BellScenario, marginal_tolerance: f64) -> Result<AnalysisReport> {
    let behavior = behavior_from_scenario(s)?;
    let (operator_checks, reason) = if s.observables().is_some() {
        let table = s.commutator_table()?;
        let commutators = table
            .entries
            .iter()
            .map(|e| CommutatorLine {
                label: e.label,
                norm: e.direct.frobenius_norm(),
                identity_agreement_residual: e.residual,
            })
            .collect();
        (
            Some(OperatorChecks {
                square_identity_residual: s.verify_square_identity()?,
                commutators,
                chsh_expectation: s.chsh_expectation()?,
                chsh_spectral_bound: s.chsh_spectral_bound()?,
            }),
            None,
        )
    } else {
        (None, Some("no product-form observables (custom-only scenario)"))
    };
    Ok(AnalysisReport {
        input: summarize_scenario(s),
        operator_checks,
        operator_checks_unavailable: reason,
        behavior: behavior_section(&behavior),
        marginals: marginal_section(&check_marginal_laws(&behavior, marginal_tolerance)),
        embeddability: embeddability_section(&behavior),
    })
}

/// Analysis of a behavior-only file (no operator sections).
pub fn analyze_behavior(b: &Behavior, marginal_tolerance: f64) -> AnalysisReport {
    AnalysisReport {
        input: InputSummary {
            kind: "behavior",
            dim_alice: None,
            dim_bob: None,
            state: None,
            measurement_forms: None,
        },
        operator_checks: None,
        operator_checks_unavailable: Some("behavior-only input (tables, no quantum scenario)"),
        behavior: behavior_section(b),
        marginals: marginal_section(&check_marginal_laws(b, marginal_tolerance)),
        embeddability: embeddability_section(b),
    }
}

fn render_table(out: &mut String, table: &ContextTable) {
    writeln!(out, "  context {}", table.context).expect("write");
    writeln!(
        out,
        "    P(+,+)={}  P(+,-)={}",
        sig6(table.probabilities[0][0]),
        sig6(table.probabilities[0][1])
    )
    .expect("write");
    writeln!(
        out,
        "    P(-,+)={}  P(-,-)={}",
        sig6(table.probabilities[1][0]),
        sig6(table.probabilities[1][1])
    )
    .expect("write");
}

/// Human-readable rendering at 6 significant digits.
pub fn render_analysis(report: &AnalysisReport) -> String {
    let mut out = String::new();
    writeln!(out, "input: {}", report.input.kind).expect("write");
    if let (Some(da), Some(db)) = (report.input.dim_alice, report.input.dim_bob) {
        writeln!(out, "  dimensions: {da} x {db}").expect("write");
    }
    if let Some(state) = report.input.state {
        writeln!(out, "  state: {state}").expect("write");
    }
    if let Some(forms) = &report.input.measurement_forms {
        writeln!(out, "  measurements: {}", forms.join(", ")).expect("write");
    }

    match (&report.operator_checks, report.operator_checks_unavailable) {
        (Some(checks), _) => {
            writeln!(out, "\noperator checks").expect("write");
            writeln!(
                out,
                "  square identity residual: {}",
                sig6(checks.square_identity_residual)
            )
            .expect("write");
            writeln!(out, "  commutator norms (direct vs identity-form residual):")
                .expect("write");
            for line in &checks.commutators {
                writeln!(
                    out,
                    "    {:<16} norm {}  residual {}",
                    line.label,
                    sig6(line.norm),
                    sig6(line.identity_agreement_residual)
                )
                .expect("write");
            }
            writeln!(out, "  CHSH expectation: {}", sig6(checks.chsh_expectation)).expect("write");
            writeln!(out, "  CHSH spectral bound: {}", sig6(checks.chsh_spectral_bound))
                .expect("write");
        }
        (None, Some(reason)) => {
            writeln!(out, "\noperator checks: n/a ({reason})").expect("write");
        }
        (None, None) => {}
    }

    writeln!(out, "\nbehavior").expect("write");
    for table in &report.behavior.tables {
        render_table(&mut out, table);
    }
    let e = report.behavior.correlators;
    writeln!(
        out,
        "  correlators: E(A,B)={} E(A,B')={} E(A',B)={} E(A',B')={}",
        sig6(e[0]),
        sig6(e[1]),
        sig6(e[2]),
        sig6(e[3])
    )
    .expect("write");
    writeln!(out, "  CHSH value: {}", sig6(report.behavior.chsh)).expect("write");

    let m = &report.marginals;
    writeln!(out, "\nmarginal laws (no-signaling)").expect("write");
    writeln!(
        out,
        "  Alice max discrepancy: {}  Bob max discrepancy: {}  tolerance: {}",
        sig6(m.alice_max_discrepancy),
        sig6(m.bob_max_discrepancy),
        sig6(m.tolerance)
    )
    .expect("write");
    writeln!(out, "  verdict: {}", if m.satisfied { "SATISFIED" } else { "VIOLATED" })
        .expect("write");

    writeln!(out, "\nKolmogorovian embeddability").expect("write");
    writeln!(out, "  verdict: {}", report.embeddability.verdict).expect("write");
    if let Some(certificate) = &report.embeddability.certificate {
        if let Some(d) = report.embeddability.max_model_discrepancy {
            writeln!(out, "  certificate (max reproduction discrepancy {}):", sig6(d))
                .expect("write");
        }
        for line in certificate {
            writeln!(
                out,
                "    {} {} {} {} {}",
                line.a, line.a_prime, line.b, line.b_prime, line.weight
            )
            .expect("write");
        }
    }
    if let Some(witness) = &report.embeddability.witness {
        match witness.kind {
            "fine-inequality" => {
                writeln!(
                    out,
                    "  witness: Fine inequality #{} = {} > 2 (signs {:+} {:+} {:+} {:+})",
                    witness.fine_index.unwrap_or(0),
                    sig6(witness.fine_value.unwrap_or(f64::NAN)),
                    witness.fine_signs.unwrap_or_default()[0],
                    witness.fine_signs.unwrap_or_default()[1],
                    witness.fine_signs.unwrap_or_default()[2],
                    witness.fine_signs.unwrap_or_default()[3],
                )
                .expect("write");
            }
            _ => {
                writeln!(
                    out,
                    "  witness: marginal-law violation (Alice {}, Bob {})",
                    sig6(witness.marginal_alice_max.unwrap_or(f64::NAN)),
                    sig6(witness.marginal_bob_max.unwrap_or(f64::NAN)),
                )
                .expect("write");
            }
        }
    }
    out
}

// ── Sampling reports ─────────────────────────────────────────────────────────

#[derive(Serialize)]
pub struct CorrelatorEstimate {
    pub context: &'static str,
    pub value: f64,
    pub standard_error: f64,
}

#[derive(Serialize)]
pub struct StatisticalMarginalSection {
    pub verdict: &'static str,
    pub alice_discrepancy: f64,
    pub alice_threshold: f64,
    pub bob_discrepancy: f64,
    pub bob_threshold: f64,
}

#[derive(Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub shots_per_context: u64,
    pub counts: Vec<ContextCounts>,
    pub correlator_estimates: Vec<CorrelatorEstimate>,
    pub chsh_value: f64,
    pub chsh_standard_error: f64,
    pub statistical_marginals: StatisticalMarginalSection,
}

#[derive(Serialize)]
pub struct ContextCounts {
    pub context: &'static str,
    pub counts: [[u64; 2]; 2],
}

/// Builds the sampling report for a drawn sample.
pub fn sample_report(sb: &SampledBehavior) -> SampleReport {
    let est = estimate_chsh(sb);
    let stats = statistical_marginal_check(sb);
    SampleReport {
        seed: sb.seed(),
        shots_per_context: sb.shots(),
        counts: Context::ALL
            .iter()
            .map(|&ctx| ContextCounts {
                context: ctx.label(),
                counts: [
                    [
                        sb.count(ctx, Outcome::Plus, Outcome::Plus),
                        sb.count(ctx, Outcome::Plus, Outcome::Minus),
                    ],
                    [
                        sb.count(ctx, Outcome::Minus, Outcome::Plus),
                        sb.count(ctx, Outcome::Minus, Outcome::Minus),
                    ],
                ],
            })
            .collect(),
        correlator_estimates: Context::ALL
            .iter()
            .map(|&ctx| {
                let e = estimate_correlator(sb, ctx);
                CorrelatorEstimate {
                    context: ctx.label(),
                    value: e.value,
                    standard_error: e.standard_error,
                }
            })
            .collect(),
        chsh_value: est.value,
        chsh_standard_error: est.standard_error,
        statistical_marginals: StatisticalMarginalSection {
            verdict: match stats.verdict {
                StatisticalVerdict::Satisfied => "SATISFIED",
                StatisticalVerdict::Violated => "VIOLATED",
                StatisticalVerdict::InsufficientStatistics => "insufficient statistics",
            },
            alice_discrepancy: stats.alice_discrepancy,
            alice_threshold: stats.alice_threshold,
            bob_discrepancy: stats.bob_discrepancy,
            bob_threshold: stats.bob_threshold,
        },
    }
}

/// Human-readable sampling report; includes the count-table dump.
pub fn render_sample(report: &SampleReport, dump: &str) -> String {
    let mut out = String::new();
    out.push_str(dump);
    writeln!(out, "\ncorrelator estimates").expect("write");
    for e in &report.correlator_estimates {
        writeln!(
            out,
            "  E{} = {} \u{00b1} {}",
            e.context,
            sig6(e.value),
            sig6(e.standard_error)
        )
        .expect("write");
    }
    writeln!(
        out,
        "CHSH estimate: {} \u{00b1} {}",
        sig6(report.chsh_value),
        sig6(report.chsh_standard_error)
    )
    .expect("write");
    let s = &report.statistical_marginals;
    writeln!(out, "statistical marginal check (3 pooled standard errors)").expect("write");
    writeln!(
        out,
        "  Alice: discrepancy {} vs threshold {}",
        sig6(s.alice_discrepancy),
        sig6(s.alice_threshold)
    )
    .expect("write");
    writeln!(
        out,
        "  Bob:   discrepancy {} vs threshold {}",
        sig6(s.bob_discrepancy),
        sig6(s.bob_threshold)
    )
    .expect("write");
    writeln!(out, "  verdict: {}", s.verdict).expect("write");
    out
}
