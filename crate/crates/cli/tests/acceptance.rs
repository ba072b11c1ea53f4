//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see them). Tolerances and runtime budgets are
//! pinned in the assertions.

use bellkit::behavior::{
    behavior_from_scenario, check_marginal_laws, chsh_from_behavior, grand_measurement,
    marginalize, Behavior,
};
use bellkit::kolmogorov::{
    embed, embed_exact, max_fine_inequality, verify_model, DeterministicStrategy,
    EmbeddabilityResult, ExactBehavior, ExactEmbeddabilityResult, Witness,
};
use bellkit::models::{preset_beyond_tsirelson, preset_singlet_tsirelson, pvm_marginal_observables};
use bellkit::prelude::*;
use bellkit::random::{
    pr_box_sign_vectors, random_commuting_scenario, random_product_scenario,
};
use bellkit::sampling::{estimate_chsh, sample};
use bellkit::scenario::{joint_outcomes, MeasurementForm};
use std::process::Command;
use std::time::Instant;

const DIM_CHOICES: [usize; 3] = [2, 3, 4];

fn dims_for(trial: usize) -> (usize, usize) {
    (DIM_CHOICES[trial % 3], DIM_CHOICES[(trial / 3) % 3])
}

fn pass(n: usize, what: &str) {
    println!("criterion {n}: PASS — {what}");
}

#[test]
fn criterion_1_square_identity() {
    let start = Instant::now();
    let mut rng = Prng::new(0xAC1);
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let (da, db) = dims_for(trial);
        let s = random_product_scenario(da, db, &mut rng).unwrap();
        let residual = s.verify_square_identity().unwrap();
        worst = worst.max(residual);
        assert!(residual <= 1e-9, "residual {residual:.3e} at trial {trial} (dims {da}x{db})");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    pass(1, &format!("500 scenarios, worst square-identity residual {worst:.3e}, {elapsed:.2?}"));
}

#[test]
fn criterion_2_compatibility_implies_classicality() {
    let start = Instant::now();
    let mut rng = Prng::new(0xAC2);
    for trial in 0..500 {
        let (da, db) = dims_for(trial);
        let s = random_commuting_scenario(da, db, &mut rng).unwrap();
        let bound = s.chsh_spectral_bound().unwrap();
        assert!(bound <= 2.0 + 1e-8, "bound {bound} at trial {trial}");
        let behavior = behavior_from_scenario(&s).unwrap();
        match embed(&behavior) {
            EmbeddabilityResult::Feasible(model) => {
                let discrepancy = verify_model(&model, &behavior);
                assert!(discrepancy <= 1e-9, "model discrepancy {discrepancy:.3e}");
            }
            EmbeddabilityResult::Infeasible(w) => {
                panic!("commuting scenario infeasible at trial {trial}: {w:?}")
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    pass(2, &format!("500 commuting scenarios classical and embeddable, {elapsed:.2?}"));
}

#[test]
fn criterion_3_tsirelson_boundary() {
    let preset = preset_singlet_tsirelson();
    let behavior = behavior_from_scenario(&preset.scenario).unwrap();
    let chsh = chsh_from_behavior(&behavior);
    let tsirelson = 2.0 * std::f64::consts::SQRT_2;
    assert!((chsh - 2.8284271247).abs() < 1e-9 || (chsh - tsirelson).abs() < 1e-9);
    assert!((chsh - tsirelson).abs() < 1e-9, "CHSH {chsh} vs 2√2");

    let report = check_marginal_laws(&behavior, 1e-9);
    assert!(report.satisfied, "marginal laws must hold: {report:?}");

    match embed(&behavior) {
        EmbeddabilityResult::Infeasible(Witness::FineInequality(fine)) => {
            assert!(fine.value >= tsirelson - 1e-8, "witness {fine:?}");
        }
        other => panic!("expected Fine witness, got {other:?}"),
    }
    pass(3, &format!("singlet preset: CHSH {chsh:.10}, marginals satisfied, Fine witness at 2√2"));
}

#[test]
fn criterion_4_beyond_tsirelson_regime() {
    let preset = preset_beyond_tsirelson();
    let behavior = behavior_from_scenario(&preset.scenario).unwrap();
    let chsh = chsh_from_behavior(&behavior);
    assert_eq!(chsh, 4.0, "algebraic maximum must be exact");

    // All local measurement pieces are mutually compatible, within and
    // across the custom PVMs.
    let mut marginals = Vec::new();
    for ctx in Context::ALL {
        match &preset.scenario.measurement(ctx).form {
            MeasurementForm::Custom { projectors } => {
                for i in 0..4 {
                    for j in (i + 1)..4 {
                        let comm = projectors[i].commutator(&projectors[j]).unwrap();
                        assert!(comm.frobenius_norm() <= 1e-12);
                    }
                }
                let (a, b) = pvm_marginal_observables(projectors).unwrap();
                marginals.push(a);
                marginals.push(b);
            }
            MeasurementForm::Product => panic!("preset must be custom-only"),
        }
    }
    for i in 0..marginals.len() {
        for j in (i + 1)..marginals.len() {
            let comm = marginals[i].commutator(&marginals[j]).unwrap();
            assert!(comm.frobenius_norm() <= 1e-12, "local pieces must commute");
        }
    }

    let report = check_marginal_laws(&behavior, 1e-9);
    assert!(!report.satisfied);
    assert!((report.max_discrepancy() - 2.0).abs() <= 1e-12, "violation magnitude {report:?}");
    pass(4, "beyond-Tsirelson preset: CHSH exactly 4, compatible local pieces, signaling magnitude 2");
}

#[test]
fn criterion_5_grand_measurement_consistency() {
    let mut rng = Prng::new(0xAC5);
    for trial in 0..200 {
        let (da, db) = dims_for(trial);
        let s = random_commuting_scenario(da, db, &mut rng).unwrap();
        let direct = behavior_from_scenario(&s).unwrap();
        let via_grand = marginalize(&grand_measurement(&s).unwrap());
        for ctx in Context::ALL {
            for (a, b) in joint_outcomes() {
                let delta = (direct.prob(ctx, a, b) - via_grand.prob(ctx, a, b)).abs();
                assert!(delta <= 1e-9, "entry mismatch {delta:.3e} at trial {trial}");
            }
        }
    }

    let mut rejected = 0;
    let mut attempts = 0;
    while rejected < 200 {
        attempts += 1;
        assert!(attempts < 4000, "could not find enough non-commuting scenarios");
        let (da, db) = dims_for(attempts);
        let s = random_product_scenario(da, db, &mut rng).unwrap();
        let obs = s.observables().unwrap();
        let alice_comm = obs.a.matrix().commutator(obs.a_prime.matrix()).unwrap().frobenius_norm();
        let bob_comm = obs.b.matrix().commutator(obs.b_prime.matrix()).unwrap().frobenius_norm();
        if alice_comm <= 1e-10 && bob_comm <= 1e-10 {
            continue; // a genuinely commuting random draw; not a test case
        }
        match grand_measurement(&s) {
            Err(Error::NonCommutingLocals { .. }) => rejected += 1,
            Ok(_) => panic!("grand measurement accepted non-commuting locals"),
            Err(other) => panic!("unexpected error {other:?}"),
        }
    }
    pass(5, "200 commuting scenarios consistent; 200 non-commuting scenarios rejected");
}

#[test]
fn criterion_6_commutator_table() {
    let mut rng = Prng::new(0xAC6);
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let (da, db) = dims_for(trial);
        let s = random_product_scenario(da, db, &mut rng).unwrap();
        let table = s.commutator_table().unwrap();
        worst = worst.max(table.max_residual());
        assert!(
            table.max_residual() <= 1e-10,
            "residual {:.3e} at trial {trial}",
            table.max_residual()
        );
    }
    pass(6, &format!("500 scenarios, worst commutator-identity residual {worst:.3e}"));
}

#[test]
fn criterion_7_fine_equivalence() {
    let mut rng = Prng::new(0xAC7);
    let mut feasible = 0;
    for _ in 0..1000 {
        let b = bellkit::random::random_no_signaling_behavior(&mut rng);
        let lp = embed(&b).is_feasible();
        let fine_ok = max_fine_inequality(&b).value <= 2.0 + 1e-9;
        assert_eq!(lp, fine_ok, "LP and Fine disagree on a no-signaling behavior");
        if lp {
            feasible += 1;
        }
    }
    assert!(feasible > 100 && feasible < 900, "generator must cover both verdicts ({feasible})");

    // Rational mode is exact on dyadic inputs.
    let signs = pr_box_sign_vectors();
    for trial in 0..50 {
        let mut counts = [0u32; 24];
        for _ in 0..512 {
            counts[(rng.next_u64() % 24) as usize] += 1;
        }
        let mut tables = [[[0.0f64; 2]; 2]; 4];
        for (vertex, &count) in counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let w = count as f64 / 512.0;
            let v = if vertex < 16 {
                DeterministicStrategy::from_index(vertex).behavior()
            } else {
                Behavior::pr_box(signs[vertex - 16]).unwrap()
            };
            for ctx in Context::ALL {
                for (a, o) in joint_outcomes() {
                    tables[ctx.index()][a.index()][o.index()] += w * v.prob(ctx, a, o);
                }
            }
        }
        let b = Behavior::new(tables).unwrap();
        let exact = ExactBehavior::from_behavior(&b).expect("dyadic mixtures convert exactly");
        let exact_verdict = embed_exact(&exact);
        assert_eq!(
            exact_verdict.is_feasible(),
            embed(&b).is_feasible(),
            "exact and float verdicts disagree at trial {trial}"
        );
        if let ExactEmbeddabilityResult::Feasible(model) = exact_verdict {
            assert!(model.reproduces(&exact), "exact certificate must reproduce exactly");
        }
    }
    pass(7, &format!("1000 no-signaling behaviors: LP ⇔ Fine ({feasible} feasible); exact mode sharp on dyadics"));
}

#[test]
fn criterion_8_statistical_pipeline() {
    let start = Instant::now();
    let behavior = behavior_from_scenario(&preset_singlet_tsirelson().scenario).unwrap();
    let target = 2.0 * std::f64::consts::SQRT_2;
    let mut hits = 0;
    for seed in 1..=20u64 {
        let sb = sample(&behavior, 1_000_000, seed).unwrap();
        let est = estimate_chsh(&sb);
        if est.deviation_in_errors(target) <= 3.0 {
            hits += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(hits >= 19, "only {hits}/20 within 3 standard errors");
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    pass(8, &format!("{hits}/20 seeds within 3 SE of 2√2 at 10⁶ shots, {elapsed:.2?}"));
}

#[test]
fn criterion_9_cli_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_bellkit");

    // Singlet preset: emit → parse → analyze reproduces criterion 3 values.
    let singlet = dir.path().join("singlet.scenario");
    let out = Command::new(bin)
        .args(["presets", "emit", "singlet-tsirelson", singlet.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(bin)
        .args(["analyze", singlet.to_str().unwrap(), "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap())
        .expect("well-formed JSON");
    let chsh = doc["behavior"]["chsh"].as_f64().unwrap();
    assert!((chsh - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
    assert!(doc["marginals"]["satisfied"].as_bool().unwrap());
    assert_eq!(doc["embeddability"]["verdict"], "infeasible");

    // Beyond preset: criterion 4 values through the same pipeline.
    let beyond = dir.path().join("beyond.scenario");
    let out = Command::new(bin)
        .args(["presets", "emit", "beyond-tsirelson", beyond.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(bin)
        .args(["analyze", beyond.to_str().unwrap(), "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(doc["behavior"]["chsh"].as_f64().unwrap(), 4.0);
    assert!(!doc["marginals"]["satisfied"].as_bool().unwrap());
    let bob = doc["marginals"]["bob_max_discrepancy"].as_f64().unwrap();
    assert!((bob - 2.0).abs() < 1e-12);

    // Deterministic byte-identical sampling reports under a fixed seed.
    let run_sample = || {
        Command::new(bin)
            .args(["sample", singlet.to_str().unwrap(), "--shots", "50000", "--seed", "7"])
            .output()
            .unwrap()
    };
    let first = run_sample();
    let second = run_sample();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "sample reports must be byte-identical");

    pass(9, "CLI round-trip reproduces preset values; JSON well-formed; reports deterministic");
}
