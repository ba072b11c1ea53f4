//! Line-oriented scenario and behavior file parsing.
//!
//! Files start with a `scenario` or `behavior` header. Complex numbers are
//! written `re,im` (a bare `re` means a real entry); `#` starts a comment.
//! Matrices appear as one line per row. All scenario invariants are
//! re-validated after parsing, so a file that parses can still be rejected
//! with a validation error.

use bellkit::behavior::{behavior_from_text, Behavior};
use bellkit::error::{Error, Result};
use bellkit::linalg::{pauli_angle, pauli_x, pauli_y, pauli_z, Matrix};
use bellkit::scenario::{
    AliceSetting, BellScenario, BobSetting, Context, DichotomicObservable, JointMeasurement,
    LocalObservables, Outcome,
};
use bellkit::state::State;
use bellkit::linalg::ComplexScalar as Complex64;

/// A parsed input file.
pub enum InputDocument {
    Scenario(BellScenario),
    Behavior(Behavior),
}

/// Parses either file kind, keyed on the header line.
pub fn parse_input(text: &str) -> Result<InputDocument> {
    let lines = significant_lines(text);
    let Some((first_line, first_tokens)) = lines.first() else {
        return Err(Error::Parse { line: 1, message: "empty input file".into() });
    };
    match first_tokens[0].as_str() {
        "scenario" => Ok(InputDocument::Scenario(parse_scenario(&lines)?)),
        "behavior" => Ok(InputDocument::Behavior(behavior_from_text(text)?)),
        other => Err(Error::Parse {
            line: *first_line,
            message: format!("expected 'scenario' or 'behavior' header, found {other:?}"),
        }),
    }
}

fn significant_lines(text: &str) -> Vec<(usize, Vec<String>)> {
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

fn parse_complex(line: usize, token: &str) -> Result<Complex64> {
    let bad = |t: &str| Error::Parse {
        line,
        message: format!("not a complex number (expected re,im or re): {t:?}"),
    };
    match token.split_once(',') {
        Some((re, im)) => {
            let re: f64 = re.parse().map_err(|_| bad(token))?;
            let im: f64 = im.parse().map_err(|_| bad(token))?;
            Ok(Complex64::new(re, im))
        }
        None => {
            let re: f64 = token.parse().map_err(|_| bad(token))?;
            Ok(Complex64::new(re, 0.0))
        }
    }
}

struct Reader<'a> {
    lines: &'a [(usize, Vec<String>)],
    cursor: usize,
}

impl<'a> Reader<'a> {
    fn next(&mut self) -> Option<&'a (usize, Vec<String>)> {
        let item = self.lines.get(self.cursor);
        self.cursor += 1;
        item
    }

    fn last_line(&self) -> usize {
        self.lines.last().map(|(l, _)| *l).unwrap_or(1)
    }

    /// Reads one line carrying exactly `count` complex entries.
    fn complex_row(&mut self, count: usize, what: &str) -> Result<Vec<Complex64>> {
        let (line, tokens) = self.next().ok_or(Error::Parse {
            line: self.last_line(),
            message: format!("unexpected end of file while reading {what}"),
        })?;
        if tokens.len() != count {
            return Err(Error::Parse {
                line: *line,
                message: format!("{what}: expected {count} entries, found {}", tokens.len()),
            });
        }
        tokens.iter().map(|t| parse_complex(*line, t)).collect()
    }

    /// Reads a `rows × cols` matrix, one line per row.
    fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows);
        for r in 0..rows {
            data.push(self.complex_row(cols, &format!("{what}, row {}", r + 1))?);
        }
        Matrix::from_rows(data)
    }
}

fn parse_outcome(line: usize, token: &str) -> Result<Outcome> {
    match token {
        "+1" | "+" => Ok(Outcome::Plus),
        "-1" | "-" => Ok(Outcome::Minus),
        other => Err(Error::Parse {
            line,
            message: format!("expected outcome +1 or -1, found {other:?}"),
        }),
    }
}

fn parse_context(line: usize, x: &str, y: &str) -> Result<Context> {
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

fn parse_scenario(lines: &[(usize, Vec<String>)]) -> Result<BellScenario> {
    let mut reader = Reader { lines, cursor: 1 }; // skip the header

    let mut dims: Option<(usize, usize)> = None;
    let mut state: Option<State> = None;
    let mut observables: [Option<DichotomicObservable>; 4] = [None, None, None, None];
    let mut measurements: Vec<JointMeasurement> = Vec::new();

    let obs_slot = |name: &str| -> Option<usize> {
        match name {
            "A" => Some(0),
            "A'" => Some(1),
            "B" => Some(2),
            "B'" => Some(3),
            _ => None,
        }
    };

    while let Some((line, tokens)) = reader.next() {
        let line = *line;
        match tokens[0].as_str() {
            "dims" => {
                if tokens.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        message: "usage: dims <dim_alice> <dim_bob>".into(),
                    });
                }
                let da: usize = tokens[1].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("not a positive integer: {:?}", tokens[1]),
                })?;
                let db: usize = tokens[2].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("not a positive integer: {:?}", tokens[2]),
                })?;
                if da == 0 || db == 0 {
                    return Err(Error::Parse { line, message: "dimensions must be positive".into() });
                }
                dims = Some((da, db));
            }
            "state" => {
                let (da, db) = dims.ok_or(Error::Parse {
                    line,
                    message: "state must come after dims".into(),
                })?;
                let joint = da * db;
                let form = tokens.get(1).map(String::as_str).unwrap_or("");
                state = Some(match form {
                    "pure" => {
                        let amplitudes = reader.complex_row(joint, "pure state amplitudes")?;
                        State::pure(amplitudes)?
                    }
                    "density" => {
                        let rho = reader.matrix(joint, joint, "density matrix")?;
                        State::density(rho)?
                    }
                    "singlet" => {
                        if joint != 4 {
                            return Err(Error::Parse {
                                line,
                                message: "the singlet state requires dims 2 2".into(),
                            });
                        }
                        State::singlet()
                    }
                    other => {
                        return Err(Error::Parse {
                            line,
                            message: format!(
                                "unknown state form {other:?} (expected pure, density, or singlet)"
                            ),
                        })
                    }
                });
            }
            "observable" => {
                let (da, db) = dims.ok_or(Error::Parse {
                    line,
                    message: "observable must come after dims".into(),
                })?;
                let name = tokens.get(1).map(String::as_str).unwrap_or("");
                let slot = obs_slot(name).ok_or(Error::Parse {
                    line,
                    message: format!("unknown observable name {name:?} (expected A, A', B, B')"),
                })?;
                let local_dim = if slot < 2 { da } else { db };
                let form = tokens.get(2).map(String::as_str).unwrap_or("");
                let matrix = match form {
                    "pauli" => {
                        if local_dim != 2 {
                            return Err(Error::Parse {
                                line,
                                message: format!(
                                    "pauli shorthand requires local dimension 2, not {local_dim}"
                                ),
                            });
                        }
                        match tokens.get(3).map(String::as_str) {
                            Some("x") => pauli_x(),
                            Some("y") => pauli_y(),
                            Some("z") => pauli_z(),
                            Some("angle") => {
                                let theta: f64 = tokens
                                    .get(4)
                                    .ok_or(Error::Parse {
                                        line,
                                        message: "usage: observable <name> pauli angle <radians>"
                                            .into(),
                                    })?
                                    .parse()
                                    .map_err(|_| Error::Parse {
                                        line,
                                        message: format!("not a number: {:?}", tokens[4]),
                                    })?;
                                pauli_angle(theta)
                            }
                            other => {
                                return Err(Error::Parse {
                                    line,
                                    message: format!(
                                        "unknown pauli form {other:?} (expected x, y, z, or angle)"
                                    ),
                                })
                            }
                        }
                    }
                    "matrix" => reader.matrix(local_dim, local_dim, &format!("observable {name}"))?,
                    other => {
                        return Err(Error::Parse {
                            line,
                            message: format!(
                                "unknown observable form {other:?} (expected pauli or matrix)"
                            ),
                        })
                    }
                };
                observables[slot] = Some(DichotomicObservable::new(matrix, name)?);
            }
            "measurement" => {
                let (da, db) = dims.ok_or(Error::Parse {
                    line,
                    message: "measurement must come after dims".into(),
                })?;
                if tokens.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: "usage: measurement <X> <Y> product|custom".into(),
                    });
                }
                let context = parse_context(line, &tokens[1], &tokens[2])?;
                match tokens[3].as_str() {
                    "product" => measurements.push(JointMeasurement::product(context)),
                    "custom" => {
                        let joint = da * db;
                        let mut projectors: [Option<Matrix>; 4] = [None, None, None, None];
                        for _ in 0..4 {
                            let (p_line, p_tokens) = reader.next().ok_or(Error::Parse {
                                line: reader.last_line(),
                                message: "unexpected end of file inside custom measurement".into(),
                            })?;
                            if p_tokens[0] != "projector" || p_tokens.len() != 3 {
                                return Err(Error::Parse {
                                    line: *p_line,
                                    message: "expected 'projector <a> <b>' inside custom measurement"
                                        .into(),
                                });
                            }
                            let a = parse_outcome(*p_line, &p_tokens[1])?;
                            let b = parse_outcome(*p_line, &p_tokens[2])?;
                            let idx = a.index() * 2 + b.index();
                            if projectors[idx].is_some() {
                                return Err(Error::Parse {
                                    line: *p_line,
                                    message: format!(
                                        "projector ({},{}) given twice",
                                        a.label(),
                                        b.label()
                                    ),
                                });
                            }
                            projectors[idx] =
                                Some(reader.matrix(joint, joint, "projector")?);
                        }
                        let projectors = projectors.map(|p| p.expect("all four slots filled"));
                        measurements.push(JointMeasurement::custom(context, projectors));
                    }
                    other => {
                        return Err(Error::Parse {
                            line,
                            message: format!(
                                "unknown measurement form {other:?} (expected product or custom)"
                            ),
                        })
                    }
                }
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "unknown directive {other:?} (expected dims, state, observable, or measurement)"
                    ),
                })
            }
        }
    }

    let (da, db) = dims.ok_or(Error::Parse {
        line: reader.last_line(),
        message: "missing dims section".into(),
    })?;
    let state = state.ok_or(Error::Parse {
        line: reader.last_line(),
        message: "missing state section".into(),
    })?;
    if measurements.len() != 4 {
        return Err(Error::Parse {
            line: reader.last_line(),
            message: format!(
                "expected 4 measurement declarations (one per context), found {}",
                measurements.len()
            ),
        });
    }

    let given = observables.iter().filter(|o| o.is_some()).count();
    let locals = match given {
        0 => None,
        4 => {
            let [a, ap, b, bp] = observables;
            Some(LocalObservables {
                a: a.unwrap(),
                a_prime: ap.unwrap(),
                b: b.unwrap(),
                b_prime: bp.unwrap(),
            })
        }
        _ => {
            let missing: Vec<&str> = ["A", "A'", "B", "B'"]
                .iter()
                .zip(&observables)
                .filter(|(_, o)| o.is_none())
                .map(|(n, _)| *n)
                .collect();
            return Err(Error::Parse {
                line: reader.last_line(),
                message: format!(
                    "either all four observables or none must be given; missing: {}",
                    missing.join(", ")
                ),
            });
        }
    };

    let measurements: [JointMeasurement; 4] =
        measurements.try_into().map_err(|_| Error::InvalidScenario {
            reason: "exactly four measurements required".into(),
        })?;
    BellScenario::assemble(da, db, state, locals, measurements)
}
