//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! Y <target> <angle>
//! X <target> <angle>
//! P <target> <angle> c:<i,j,...>
//! SWAP <a> <b>
//! ORACLE
//! ```
//!
//! Angles are decimal radians; the `c:` field is omitted for an uncontrolled phase.

use std::fmt::Write as _;

use thiserror::Error;

use super::gate::{Angle, Controls, Gate};
use super::genome::Genome;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

pub fn format_gate(gate: &Gate) -> String {
    match *gate {
        Gate::RotY { target, angle } => format!("Y {target} {angle}"),
        Gate::RotX { target, angle } => format!("X {target} {angle}"),
        Gate::CPhase {
            target,
            controls,
            angle,
        } => {
            let mut s = format!("P {target} {angle}");
            if !controls.is_empty() {
                let list: Vec<String> = controls.iter().map(|q| q.to_string()).collect();
                let _ = write!(s, " c:{}", list.join(","));
            }
            s
        }
        Gate::Swap { a, b } => format!("SWAP {a} {b}"),
        Gate::Oracle => "ORACLE".to_string(),
    }
}

/// One gate per line, each terminated by a newline.
pub fn serialize(genome: &Genome) -> String {
    let mut out = String::new();
    for g in genome {
        out.push_str(&format_gate(g));
        out.push('\n');
    }
    out
}

/// Single-line form used inside CSV cells.
pub fn serialize_inline(genome: &Genome) -> String {
    genome.iter().map(format_gate).collect::<Vec<_>>().join(";")
}

/// Parses a circuit for a register of `n` qubits. Lines may also be
/// separated by `;`, which is how circuits are embedded in CSV files.
pub fn parse(text: &str, n: u8) -> Result<Genome, ParseError> {
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        for part in raw.split(';') {
            let part = part.trim();
            if part.is_empty() || part.starts_with('#') {
                continue;
            }
            let gate = parse_gate(part, n).map_err(|message| ParseError { line, message })?;
            gates.push(gate);
        }
    }
    Ok(Genome::new(gates))
}

fn parse_gate(s: &str, n: u8) -> Result<Gate, String> {
    let fields: Vec<&str> = s.split_whitespace().collect();
    let qubit = |tok: &str| -> Result<u8, String> {
        let q: u8 = tok
            .parse()
            .map_err(|_| format!("invalid qubit index '{tok}'"))?;
        if q < 1 || q > n {
            return Err(format!("qubit {q} out of range 1..={n}"));
        }
        Ok(q)
    };
    let angle = |tok: &str| -> Result<Angle, String> {
        tok.parse::<f64>()
            .ok()
            .and_then(Angle::new)
            .ok_or_else(|| format!("malformed angle '{tok}'"))
    };
    let arity = |want: &[usize]| -> Result<(), String> {
        if want.contains(&fields.len()) {
            Ok(())
        } else {
            Err(format!("wrong number of fields for '{}'", fields[0]))
        }
    };
    match fields[0] {
        "Y" | "X" => {
            arity(&[3])?;
            let target = qubit(fields[1])?;
            let angle = angle(fields[2])?;
            Ok(if fields[0] == "Y" {
                Gate::RotY { target, angle }
            } else {
                Gate::RotX { target, angle }
            })
        }
        "P" => {
            arity(&[3, 4])?;
            let target = qubit(fields[1])?;
            let angle = angle(fields[2])?;
            let controls = match fields.get(3) {
                None => Controls::NONE,
                Some(tok) => {
                    let list = tok
                        .strip_prefix("c:")
                        .ok_or_else(|| format!("expected 'c:<list>', found '{tok}'"))?;
                    let qs = list
                        .split(',')
                        .map(|q| qubit(q.trim()))
                        .collect::<Result<Vec<_>, _>>()?;
                    if qs.contains(&target) {
                        return Err(format!("qubit {target} is both target and control"));
                    }
                    Controls::from_qubits(qs)
                }
            };
            Ok(Gate::CPhase {
                target,
                controls,
                angle,
            })
        }
        "SWAP" => {
            arity(&[3])?;
            let a = qubit(fields[1])?;
            let b = qubit(fields[2])?;
            if a == b {
                return Err(format!("swap of qubit {a} with itself"));
            }
            Ok(Gate::swap(a, b))
        }
        "ORACLE" => {
            arity(&[1])?;
            Ok(Gate::Oracle)
        }
        other => Err(format!("unknown gate kind '{other}'")),
    }
}
