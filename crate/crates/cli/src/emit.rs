//! Scenario file emission. Numbers are written with Rust's shortest
//! round-trip formatting, so parsing an emitted file reproduces the original
//! matrices bit for bit.

use bellkit::linalg::Matrix;
use bellkit::models::Preset;
use bellkit::scenario::{BellScenario, Context, MeasurementForm, Outcome};
use bellkit::state::State;
use bellkit::linalg::ComplexScalar as Complex64;
use std::fmt::Write;

fn complex_token(z: Complex64) -> String {
    // Normalize negative zero so emitted files look hand-written.
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    format!("{re},{im}")
}

fn push_matrix(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| complex_token(m.get(i, j))).collect();
        writeln!(out, "{}", row.join(" ")).expect("string write");
    }
}

/// Renders a scenario in the line-oriented file format.
pub fn scenario_to_text(scenario: &BellScenario, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(text) = comment {
        for line in text.lines() {
            writeln!(out, "# {line}").expect("string write");
        }
    }
    writeln!(out, "scenario").expect("string write");
    writeln!(out, "dims {} {}", scenario.dim_alice(), scenario.dim_bob()).expect("string write");

    match scenario.state() {
        State::Pure(amplitudes) => {
            writeln!(out, "state pure").expect("string write");
            let row: Vec<String> = amplitudes.iter().map(|&z| complex_token(z)).collect();
            writeln!(out, "{}", row.join(" ")).expect("string write");
        }
        State::Density(rho) => {
            writeln!(out, "state density").expect("string write");
            push_matrix(&mut out, rho);
        }
    }

    if let Some(obs) = scenario.observables() {
        for (name, o) in [
            ("A", &obs.a),
            ("A'", &obs.a_prime),
            ("B", &obs.b),
            ("B'", &obs.b_prime),
        ] {
            writeln!(out, "observable {name} matrix").expect("string write");
            push_matrix(&mut out, o.matrix());
        }
    }

    for ctx in Context::ALL {
        let m = scenario.measurement(ctx);
        let (x, y) = (ctx.alice().label(), ctx.bob().label());
        match &m.form {
            MeasurementForm::Product => {
                writeln!(out, "measurement {x} {y} product").expect("string write");
            }
            MeasurementForm::Custom { projectors } => {
                writeln!(out, "measurement {x} {y} custom").expect("string write");
                for a in Outcome::BOTH {
                    for b in Outcome::BOTH {
                        writeln!(out, "projector {} {}", a.label(), b.label())
                            .expect("string write");
                        push_matrix(&mut out, &projectors[a.index() * 2 + b.index()]);
                    }
                }
            }
        }
    }
    out
}

/// Scenario file for a preset, with its description as the header comment.
pub fn preset_to_text(preset: &Preset) -> String {
    let header = format!(
        "{}\nexpected CHSH: {}\nmarginal laws: {:?}",
        preset.description, preset.expected_chsh, preset.expected_marginal_laws
    );
    scenario_to_text(&preset.scenario, Some(&header))
}
