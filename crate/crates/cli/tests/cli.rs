//! End-to-end tests of the command-line interface: file parsing, exit codes,
//! JSON output, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bellkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bellkit"))
}

fn run(args: &[&str]) -> Output {
    bellkit().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = tempfile::tempdir().expect("tempdir");
    // Keep the directory alive by leaking it: the files are tiny and the
    // test process is short-lived.
    let path = dir.path().join(name);
    std::mem::forget(dir);
    path
}

#[test]
fn presets_list_shows_the_three_regimes() {
    let out = run(&["presets", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("classical"));
    assert!(text.contains("singlet-tsirelson"));
    assert!(text.contains("beyond-tsirelson"));
    assert!(text.contains("2.8284271247"));
    assert!(text.contains("4.0000000000"));
}

#[test]
fn emit_then_analyze_round_trips_the_singlet_preset() {
    let path = temp_path("singlet.scenario");
    let out = run(&["presets", "emit", "singlet-tsirelson", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&["analyze", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("well-formed JSON");
    let chsh = doc["behavior"]["chsh"].as_f64().unwrap();
    assert!((chsh - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
    assert!(doc["marginals"]["satisfied"].as_bool().unwrap());
    assert_eq!(doc["embeddability"]["verdict"], "infeasible");
    assert_eq!(doc["embeddability"]["witness"]["kind"], "fine-inequality");
    let bound = doc["operator_checks"]["chsh_spectral_bound"].as_f64().unwrap();
    assert!((bound - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
}

#[test]
fn beyond_preset_reports_signaling_and_skips_operator_checks() {
    let path = temp_path("beyond.scenario");
    assert!(run(&["presets", "emit", "beyond-tsirelson", path.to_str().unwrap()]).status.success());

    let out = run(&["analyze", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["operator_checks"].is_null());
    assert_eq!(doc["behavior"]["chsh"].as_f64().unwrap(), 4.0);
    assert!(!doc["marginals"]["satisfied"].as_bool().unwrap());
    assert_eq!(doc["embeddability"]["witness"]["kind"], "marginal-laws");

    let out = run(&["marginals", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("VIOLATED"));
    assert!(text.contains("2.00000"));
}

#[test]
fn classical_preset_embeds_with_a_certificate() {
    let path = temp_path("classical.scenario");
    assert!(run(&["presets", "emit", "classical", path.to_str().unwrap()]).status.success());
    let out = run(&["embed", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("feasible"));
    // Sixteen certificate lines in canonical strategy order.
    assert_eq!(text.lines().filter(|l| l.starts_with(['+', '-'])).count(), 16);
    assert!(text.contains("+1 +1 +1 +1 1"));
}

#[test]
fn behavior_only_files_are_accepted_directly() {
    let path = temp_path("uniform.behavior");
    let text = "behavior\n\
                context A B\n0.25 0.25\n0.25 0.25\n\
                context A B'\n0.25 0.25\n0.25 0.25\n\
                context A' B\n0.25 0.25\n0.25 0.25\n\
                context A' B'\n0.25 0.25\n0.25 0.25\n";
    std::fs::write(&path, text).unwrap();

    let out = run(&["marginals", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("SATISFIED"));

    let out = run(&["analyze", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["input"]["kind"], "behavior");
    assert_eq!(doc["behavior"]["chsh"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["embeddability"]["verdict"], "feasible");
}

#[test]
fn exact_embed_prints_fractions_and_guards_scenarios() {
    let path = temp_path("dyadic.behavior");
    let text = "behavior\n\
                context A B\n0.5 0\n0 0.5\n\
                context A B'\n0.5 0\n0 0.5\n\
                context A' B\n0.5 0\n0 0.5\n\
                context A' B'\n0 0.5\n0.5 0\n";
    std::fs::write(&path, text).unwrap();
    let out = run(&["embed", path.to_str().unwrap(), "--exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("infeasible (exact)"));
    assert!(text.contains("Fine inequality #1 = 4 > 2"));

    let scenario = temp_path("classical.scenario");
    assert!(run(&["presets", "emit", "classical", scenario.to_str().unwrap()]).status.success());
    let out = run(&["embed", scenario.to_str().unwrap(), "--exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("behavior file"));
}

#[test]
fn malformed_input_exits_one_with_a_line_number() {
    let path = temp_path("bad.scenario");
    std::fs::write(&path, "scenario\ndims 2 2\nstate pure\n1,0 0,0 nope 0,0\n").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let out = run(&["analyze", "/does/not/exist.scenario"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_observable_is_a_validation_error() {
    let path = temp_path("nondichotomic.scenario");
    // 2·σz is Hermitian but squares to 4I.
    let text = "scenario\ndims 2 2\nstate pure\n1,0 0,0 0,0 0,0\n\
                observable A matrix\n2,0 0,0\n0,0 -2,0\n\
                observable A' pauli z\nobservable B pauli z\nobservable B' pauli z\n\
                measurement A B product\nmeasurement A B' product\n\
                measurement A' B product\nmeasurement A' B' product\n";
    std::fs::write(&path, text).unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not dichotomic"), "{}", stderr(&out));
}

#[test]
fn emit_to_unwritable_path_exits_one() {
    let out = run(&["presets", "emit", "classical", "/nonexistent-dir/x.scenario"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["presets", "emit", "no-such-preset", "/tmp/x.scenario"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown preset"));
}

#[test]
fn sample_reports_are_byte_identical_for_a_fixed_seed() {
    let path = temp_path("singlet.scenario");
    assert!(run(&["presets", "emit", "singlet-tsirelson", path.to_str().unwrap()]).status.success());
    let first = run(&["sample", path.to_str().unwrap(), "--shots", "20000", "--seed", "42"]);
    let second = run(&["sample", path.to_str().unwrap(), "--shots", "20000", "--seed", "42"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let different = run(&["sample", path.to_str().unwrap(), "--shots", "20000", "--seed", "43"]);
    assert_ne!(first.stdout, different.stdout);

    // JSON variant parses and carries the same seed.
    let json = run(&["sample", path.to_str().unwrap(), "--shots", "1000", "--seed", "42", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["seed"].as_u64(), Some(42));
    assert_eq!(doc["shots_per_context"].as_u64(), Some(1000));
}

#[test]
fn tiny_samples_flag_insufficient_statistics() {
    let path = temp_path("singlet.scenario");
    assert!(run(&["presets", "emit", "singlet-tsirelson", path.to_str().unwrap()]).status.success());
    let out = run(&["sample", path.to_str().unwrap(), "--shots", "10", "--seed", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("insufficient statistics"));

    let out = run(&["sample", path.to_str().unwrap(), "--shots", "0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_can_emit_the_derived_behavior() {
    let scenario = temp_path("classical.scenario");
    assert!(run(&["presets", "emit", "classical", scenario.to_str().unwrap()]).status.success());
    let behavior = temp_path("classical.behavior");
    let out = run(&[
        "analyze",
        scenario.to_str().unwrap(),
        "--emit-behavior",
        behavior.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    // The emitted tables feed straight back into the other commands.
    let text = std::fs::read_to_string(&behavior).unwrap();
    assert!(text.starts_with("behavior\ncontext A B\n1.00000000000"));
    let out = run(&["embed", behavior.to_str().unwrap(), "--exact"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("feasible (exact)"));
}

#[test]
fn pauli_shorthands_and_singlet_state_parse() {
    let path = temp_path("short.scenario");
    let text = "scenario\n\
                dims 2 2\n\
                state singlet\n\
                observable A pauli z\n\
                observable A' pauli x\n\
                observable B pauli angle 0.6\n\
                observable B' pauli y\n\
                measurement A B product\n\
                measurement A B' product\n\
                measurement A' B product\n\
                measurement A' B' product\n";
    std::fs::write(&path, text).unwrap();
    let out = run(&["analyze", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let residual = doc["operator_checks"]["square_identity_residual"].as_f64().unwrap();
    assert!(residual < 1e-9);
}
