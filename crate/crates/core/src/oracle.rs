// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Term-by-term certification of the history subspace.
//!
//! A history state is a classical pattern tensored with a `2^n` register, so
//! the full Hamiltonian can be applied to it exactly without ever building a
//! `d^L` vector. [`certify_subspace`] checks, for every `t`, that
//!
//! ```text
//! H (|C_t⟩ ⊗ ψ_t) = −|C_{t−1}⟩ ⊗ ψ_{t−1} − |C_{t+1}⟩ ⊗ ψ_{t+1}
//! ```
//!
//! where `ψ_t` is the register after the first `t` gate events.

use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::ham5::{Ham5, RuleTable5};
use crate::ham8::{Boundary8, Ham8, RuleTable8};
use crate::machine::{HistoryTrace, Machine, Scheme};
use crate::qcircuit::{Circuit, QubitState, C64};

/// Largest amplitude error tolerated in a register comparison.
pub const ORACLE_TOL: f64 = 1e-12;

/// A classical pattern dressed with a register.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedState<C> {
    pub pattern: C,
    pub qubits: QubitState,
}

/// `H |s⟩`, with equal output patterns merged. Patterns appear in order of
/// first production so the result is deterministic.
pub fn apply_h<M: Machine>(
    machine: &M,
    s: &DressedState<M::Config>,
) -> Result<Vec<(M::Config, Vec<C64>)>> {
    let raw = machine.apply_terms(&s.pattern, s.qubits.amplitudes())?;
    Ok(merge(raw))
}

fn merge<C: PartialEq>(raw: Vec<(C, Vec<C64>)>) -> Vec<(C, Vec<C64>)> {
    let mut out: Vec<(C, Vec<C64>)> = Vec::new();
    for (c, v) in raw {
        match out.iter_mut().find(|(d, _)| *d == c) {
            Some((_, acc)) => acc.iter_mut().zip(&v).for_each(|(a, b)| *a += b),
            None => out.push((c, v)),
        }
    }
    out
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn max_abs(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// One line of a [`Report`].
#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub t: usize,
    /// `None` on success, otherwise what went wrong.
    pub failure: Option<String>,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub scheme: Scheme,
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(CheckLine::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.lines.iter().find(|l| !l.passed())
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed()).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            match &line.failure {
                None => writeln!(f, "{} t={} PASS", self.scheme, line.t)?,
                Some(why) => writeln!(f, "{} t={} FAIL {why}", self.scheme, line.t)?,
            }
        }
        Ok(())
    }
}

fn one_line(text: &str) -> String {
    text.replace('\n', " / ")
}

fn check_state<M: Machine>(
    machine: &M,
    trace: &HistoryTrace<M::Config>,
    states: &[QubitState],
    t: usize,
) -> CheckLine {
    let dressed = DressedState {
        pattern: trace.config(t).clone(),
        qubits: states[t].clone(),
    };
    let outputs = match apply_h(machine, &dressed) {
        Ok(o) => o,
        Err(e) => {
            return CheckLine {
                t,
                failure: Some(format!("term application failed: {e}")),
            }
        }
    };
    let last = trace.transitions();
    let mut expected: Vec<usize> = Vec::new();
    if t > 0 {
        expected.push(t - 1);
    }
    if t < last {
        expected.push(t + 1);
    }
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    for (pattern, amps) in &outputs {
        match trace.index_of(pattern).filter(|s| expected.contains(s)) {
            Some(s) => {
                seen.push(s);
                let want: Vec<C64> = states[s].amplitudes().iter().map(|a| -a).collect();
                let dev = max_diff(amps, &want);
                if dev > ORACLE_TOL {
                    problems.push(format!("history_{s} register off by {dev:.3e}"));
                }
            }
            // Zero-weight branches (a projector killed everything) are fine.
            None if max_abs(amps) <= ORACLE_TOL => {}
            None => {
                let name = match trace.index_of(pattern) {
                    Some(s) => format!("history_{s}"),
                    None => one_line(&machine.render(pattern)),
                };
                problems.push(format!("unexpected output {name}"));
            }
        }
    }
    for s in expected.into_iter().filter(|s| !seen.contains(s)) {
        problems.push(format!("missing history_{s}"));
    }
    CheckLine {
        t,
        failure: (!problems.is_empty()).then(|| problems.join("; ")),
    }
}

/// Checks every history state of `trace` against the terms of `terms`.
/// The two machines normally coincide; passing a machine with a damaged
/// rule table checks the pristine history against faulty terms.
pub fn certify_subspace<M>(
    trace: &HistoryTrace<M::Config>,
    terms: &M,
    initial: &QubitState,
) -> Report
where
    M: Machine + Sync,
    M::Config: Send + Sync,
{
    let states = trace.qubit_states(initial);
    let lines = (0..=trace.transitions())
        .into_par_iter()
        .map(|t| check_state(terms, trace, &states, t))
        .collect();
    Report {
        scheme: M::SCHEME,
        lines,
    }
}

/// The `2^n × 2^n` block `⟨C_s| H |C_t⟩` on the register, column by column.
fn block<M: Machine>(
    machine: &M,
    from: &M::Config,
    to: &M::Config,
    n: usize,
) -> Result<Vec<Vec<C64>>> {
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for b in 0..dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[b] = C64::new(1.0, 0.0);
        let out = merge(machine.apply_terms(from, &e)?);
        let col = out
            .into_iter()
            .find(|(c, _)| c == to)
            .map(|(_, v)| v)
            .unwrap_or_else(|| vec![C64::new(0.0, 0.0); dim]);
        cols.push(col);
    }
    Ok(cols)
}

/// Largest entry of `⟨C_{t+1}|H|C_t⟩ − (⟨C_t|H|C_{t+1}⟩)†` over the history.
pub fn hermiticity_defect<M: Machine>(machine: &M, trace: &HistoryTrace<M::Config>) -> Result<f64> {
    let n = machine.qubits();
    let mut worst: f64 = 0.0;
    for t in 0..trace.transitions() {
        let (a, b) = (trace.config(t), trace.config(t + 1));
        let up = block(machine, a, b, n)?;
        let down = block(machine, b, a, n)?;
        for (c, col) in up.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                worst = worst.max((x - down[r][c].conj()).norm());
            }
        }
    }
    Ok(worst)
}

/// A fixed register with every amplitude nonzero and distinct, so a wrong
/// gate cannot go unnoticed.
pub fn generic_state(n: usize) -> QubitState {
    let amps: Vec<C64> = (0..1usize << n)
        .map(|k| {
            let k = k as f64;
            C64::new(1.0 + 0.37 * k, 0.5 - 0.21 * k * k)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    QubitState::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
        .expect("normalized by construction")
}

/// Rule removed by [`certify_scheme`] when fault injection is requested.
pub fn fault_rule(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Ham5 => "3",
        Scheme::Ham8 => "1b",
    }
}

/// Certifies `circuit` under `scheme` from [`generic_state`]. With `fault`,
/// the terms come from a table missing [`fault_rule`].
pub fn certify_scheme(circuit: &Circuit, scheme: Scheme, fault: bool) -> Result<Report> {
    let psi0 = generic_state(circuit.qubits());
    match scheme {
        Scheme::Ham5 => {
            let trace = Ham5::new(circuit)?.enumerate_history()?;
            let mut table = RuleTable5::standard();
            if fault {
                table = table.without(fault_rule(scheme));
            }
            Ok(certify_subspace(
                &trace,
                &Ham5::with_rules(circuit, table)?,
                &psi0,
            ))
        }
        Scheme::Ham8 => {
            let trace = Ham8::new(circuit)?.enumerate_history()?;
            let mut table = RuleTable8::standard();
            if fault {
                table = table.without(fault_rule(scheme));
            }
            let terms = Ham8::with_options(circuit, Boundary8::Open, table)?;
            Ok(certify_subspace(&trace, &terms, &psi0))
        }
    }
}
