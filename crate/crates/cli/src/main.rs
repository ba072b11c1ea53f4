//! Command-line front end: parses scenario files, orchestrates the analyses,
//! and emits human-readable or machine-readable reports.
//!
//! Exit codes: 0 — analysis completed (verdicts are data, not errors);
//! 1 — input error (unreadable, unparsable, or invalid file);
//! 2 — internal numerical failure (e.g. eigensolver non-convergence).

mod emit;
mod input;
mod report;

use bellkit::behavior::{behavior_from_scenario, check_marginal_laws, format_significant};
use bellkit::error::Error;
use bellkit::kolmogorov::{embed_exact, ExactBehavior, ExactEmbeddabilityResult, ExactWitness};
use bellkit::models::{all_presets, preset_by_name, MarginalStatus};
use bellkit::sampling::sample;
use clap::{Parser, Subcommand};
use input::{parse_input, InputDocument};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bellkit",
    about = "Bell-CHSH scenario analysis: operator identities, behaviors, marginal laws, and classical embeddability",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: operator identities, behavior, marginals, embeddability.
    Analyze {
        /// Scenario or behavior file.
        path: PathBuf,
        /// Emit the report as a JSON document.
        #[arg(long)]
        json: bool,
        /// Tolerance for the marginal-law check.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Also write the derived behavior tables to this path.
        #[arg(long, value_name = "PATH")]
        emit_behavior: Option<PathBuf>,
    },
    /// Marginal-law (no-signaling) check only.
    Marginals {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Kolmogorovian embeddability: certificate or witness.
    Embed {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Exact rational arithmetic; requires a behavior file with decimal
        /// entries.
        #[arg(long)]
        exact: bool,
    },
    /// Draw outcomes from the behavior and report statistical estimates.
    Sample {
        path: PathBuf,
        /// Shots per measurement context.
        #[arg(long)]
        shots: u64,
        /// Seed for the reproducible generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// List presets or write one as a scenario file.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// Print the preset names with their expected regime values.
    List,
    /// Write a preset as a scenario file that round-trips through the parser.
    Emit { name: String, path: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            code: if error.is_numerical() { 2 } else { 1 },
            message: error.to_string(),
        }
    }
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

fn read_input(path: &PathBuf) -> Result<InputDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_input(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure { code: 2, message: format!("JSON encoding failed: {e}") })?;
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { path, json, tolerance, emit_behavior } => {
            let (report, behavior) = match read_input(&path)? {
                InputDocument::Scenario(s) => (
                    report::analyze_scenario(&s, tolerance)?,
                    behavior_from_scenario(&s)?,
                ),
                InputDocument::Behavior(b) => (report::analyze_behavior(&b, tolerance), b),
            };
            if let Some(out_path) = emit_behavior {
                std::fs::write(&out_path, bellkit::behavior::behavior_to_text(&behavior))
                    .map_err(|e| {
                        Failure::input(format!("cannot write {}: {e}", out_path.display()))
                    })?;
            }
            if json {
                print_json(&report)?;
            } else {
                print!("{}", report::render_analysis(&report));
            }
            Ok(())
        }

        Command::Marginals { path, json, tolerance } => {
            let behavior = match read_input(&path)? {
                InputDocument::Scenario(s) => behavior_from_scenario(&s)?,
                InputDocument::Behavior(b) => b,
            };
            let report = check_marginal_laws(&behavior, tolerance);
            if json {
                #[derive(Serialize)]
                struct MarginalOut {
                    alice_max_discrepancy: f64,
                    bob_max_discrepancy: f64,
                    tolerance: f64,
                    satisfied: bool,
                }
                print_json(&MarginalOut {
                    alice_max_discrepancy: report.alice_max,
                    bob_max_discrepancy: report.bob_max,
                    tolerance: report.tolerance,
                    satisfied: report.satisfied,
                })?;
            } else {
                println!("marginal laws (no-signaling)");
                println!(
                    "  Alice max discrepancy: {}",
                    format_significant(report.alice_max, 6)
                );
                println!(
                    "  Bob max discrepancy: {}",
                    format_significant(report.bob_max, 6)
                );
                println!("  tolerance: {}", format_significant(report.tolerance, 6));
                println!("  verdict: {}", if report.satisfied { "SATISFIED" } else { "VIOLATED" });
            }
            Ok(())
        }

        Command::Embed { path, json, exact } => {
            if exact {
                return run_embed_exact(&path, json);
            }
            let behavior = match read_input(&path)? {
                InputDocument::Scenario(s) => behavior_from_scenario(&s)?,
                InputDocument::Behavior(b) => b,
            };
            let section = report::analyze_behavior(&behavior, 1e-9).embeddability;
            if json {
                print_json(&section)?;
            } else {
                render_embed_human(&section);
            }
            Ok(())
        }

        Command::Sample { path, shots, seed, json } => {
            let behavior = match read_input(&path)? {
                InputDocument::Scenario(s) => behavior_from_scenario(&s)?,
                InputDocument::Behavior(b) => b,
            };
            let sampled = sample(&behavior, shots, seed)?;
            let report = report::sample_report(&sampled);
            if json {
                print_json(&report)?;
            } else {
                print!("{}", report::render_sample(&report, &sampled.to_text()));
            }
            Ok(())
        }

        Command::Presets { action } => match action {
            PresetAction::List => {
                for preset in all_presets() {
                    let marginals = match preset.expected_marginal_laws {
                        MarginalStatus::Satisfied => "marginal laws satisfied",
                        MarginalStatus::Violated => "marginal laws violated",
                    };
                    println!(
                        "{:<20} expected CHSH {:<12} {}",
                        preset.name,
                        format_significant(preset.expected_chsh, 11),
                        marginals
                    );
                }
                Ok(())
            }
            PresetAction::Emit { name, path } => {
                let preset = preset_by_name(&name).ok_or_else(|| {
                    Failure::input(format!(
                        "unknown preset {name:?}; available: classical, singlet-tsirelson, beyond-tsirelson"
                    ))
                })?;
                let text = emit::preset_to_text(&preset);
                std::fs::write(&path, text)
                    .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
                println!("wrote preset {:?} to {}", preset.name, path.display());
                Ok(())
            }
        },
    }
}

fn render_embed_human(section: &report::EmbeddabilitySection) {
    println!("Kolmogorovian embeddability: {}", section.verdict);
    if let Some(certificate) = &section.certificate {
        if let Some(d) = section.max_model_discrepancy {
            println!("certificate (max reproduction discrepancy {}):", format_significant(d, 6));
        }
        for line in certificate {
            println!("{} {} {} {} {}", line.a, line.a_prime, line.b, line.b_prime, line.weight);
        }
    }
    if let Some(witness) = &section.witness {
        match witness.kind {
            "fine-inequality" => println!(
                "witness: Fine inequality #{} = {} > 2",
                witness.fine_index.unwrap_or(0),
                format_significant(witness.fine_value.unwrap_or(f64::NAN), 9),
            ),
            _ => println!(
                "witness: marginal-law violation (Alice {}, Bob {})",
                format_significant(witness.marginal_alice_max.unwrap_or(f64::NAN), 6),
                format_significant(witness.marginal_bob_max.unwrap_or(f64::NAN), 6),
            ),
        }
    }
}

fn run_embed_exact(path: &PathBuf, json: bool) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if header.starts_with("scenario") {
        return Err(Failure::input(
            "--exact requires a behavior file: scenario analysis goes through \
             eigendecompositions whose outputs are not exact rationals"
                .to_string(),
        ));
    }
    let exact = ExactBehavior::from_text(&text)?;
    match embed_exact(&exact) {
        ExactEmbeddabilityResult::Feasible(model) => {
            if json {
                #[derive(Serialize)]
                struct ExactOut {
                    verdict: &'static str,
                    certificate: Vec<String>,
                }
                print_json(&ExactOut {
                    verdict: "feasible",
                    certificate: model
                        .to_certificate_text()
                        .lines()
                        .map(str::to_string)
                        .collect(),
                })?;
            } else {
                println!("Kolmogorovian embeddability: feasible (exact)");
                print!("{}", model.to_certificate_text());
            }
        }
        ExactEmbeddabilityResult::Infeasible(witness) => {
            let description = match witness {
                ExactWitness::MarginalLaws { alice_max, bob_max } => {
                    format!("marginal-law violation (Alice {alice_max}, Bob {bob_max})")
                }
                ExactWitness::FineInequality { index, value, .. } => {
                    format!("Fine inequality #{index} = {value} > 2")
                }
            };
            if json {
                #[derive(Serialize)]
                struct ExactOut {
                    verdict: &'static str,
                    witness: String,
                }
                print_json(&ExactOut { verdict: "infeasible", witness: description })?;
            } else {
                println!("Kolmogorovian embeddability: infeasible (exact)");
                println!("witness: {description}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
