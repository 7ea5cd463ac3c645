// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented circuit files.
//!
//! ```text
//! # two qubits, one round
//! QUBITS 2
//! ROUNDS 1
//! GATE W 1 1
//! ```
//!
//! Rounds and positions are 1-based. Unlisted slots hold the identity.

use std::fmt::Write as _;

use super::circuit::Circuit;
use super::gates::Gate;
use crate::error::{Error, Result};

const FILE_GATES: [&str; 9] = ["I", "W", "S", "H", "X", "Z", "Y", "CX", "T"];

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(line: usize, field: &str, what: &str) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("{what} `{field}` is not a number")))
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut qubits = None;
    let mut rounds = None;
    let mut gates: Vec<(usize, String, usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "QUBITS" | "ROUNDS" => {
                if fields.len() != 2 {
                    return Err(parse_err(line, format!("{} takes one value", fields[0])));
                }
                let v = number(line, fields[1], fields[0])?;
                let slot = if fields[0] == "QUBITS" {
                    &mut qubits
                } else {
                    &mut rounds
                };
                if slot.replace(v).is_some() {
                    return Err(parse_err(line, format!("{} given twice", fields[0])));
                }
            }
            "GATE" => {
                if fields.len() != 4 {
                    return Err(parse_err(line, "expected `GATE <name> <round> <position>`"));
                }
                let r = number(line, fields[2], "round")?;
                let p = number(line, fields[3], "position")?;
                if r == 0 || p == 0 {
                    return Err(parse_err(line, "rounds and positions start at 1"));
                }
                gates.push((line, fields[1].to_string(), r - 1, p - 1));
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }

    let qubits = qubits.ok_or_else(|| parse_err(0, "missing QUBITS header"))?;
    let rounds = rounds.ok_or_else(|| parse_err(0, "missing ROUNDS header"))?;
    let mut circuit = Circuit::identity(qubits, rounds).map_err(|e| parse_err(0, e.to_string()))?;
    let mut seen = vec![false; rounds * circuit.slots_per_round()];

    for (line, name, r, p) in gates {
        let gate = FILE_GATES
            .contains(&name.as_str())
            .then(|| Gate::by_name(&name))
            .flatten()
            .ok_or_else(|| parse_err(line, format!("unknown gate `{name}`")))?;
        if r >= rounds || p >= circuit.slots_per_round() {
            return Err(parse_err(
                line,
                format!(
                    "slot ({}, {}) outside {rounds} rounds of {qubits} qubits",
                    r + 1,
                    p + 1
                ),
            ));
        }
        let k = r * circuit.slots_per_round() + p;
        if std::mem::replace(&mut seen[k], true) {
            return Err(parse_err(
                line,
                format!("slot ({}, {}) given twice", r + 1, p + 1),
            ));
        }
        circuit
            .set(r, p, gate)
            .map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(circuit)
}

/// Writes a circuit in the file format, listing only non-identity slots.
pub fn write_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "QUBITS {}", circuit.qubits());
    let _ = writeln!(out, "ROUNDS {}", circuit.rounds());
    for (r, p, g) in circuit.schedule() {
        if g.label() != "I" {
            let _ = writeln!(out, "GATE {} {} {}", g.label(), r + 1, p + 1);
        }
    }
    out
}
