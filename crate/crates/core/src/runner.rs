// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Measure-at-a-random-time execution.
//!
//! Each shot draws `τ` uniformly from `[0, τ₀]`, samples a history index `t`
//! from the walk amplitudes `|c_t(τ)|²`, and accepts when `t > T/q`. Accepted
//! shots then sample a readout from the register after the first `t` gate
//! events. Configuration patterns are orthogonal, so sampling `t` first and
//! the register second draws from the exact joint distribution.

use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ham5::Ham5;
use crate::ham8::Ham8;
use crate::machine::{HistoryTrace, Machine, Scheme};
use crate::qcircuit::{Circuit, QubitState};
use crate::walk::{default_tau0, padding_plan, tail_threshold, Padding, PathWalk};

/// Generator used for every shot; recorded in the report header.
pub const GENERATOR: &str = "ChaCha20Rng(seed_from_u64(seed), stream = shot)";

#[derive(Clone, Debug)]
pub struct RunPlan {
    pub circuit: Circuit,
    pub scheme: Scheme,
    pub q: usize,
    /// Averaging horizon; `None` selects [`default_tau0`] of the padded `T`.
    pub tau0: Option<f64>,
    pub shots: usize,
    pub seed: u64,
    /// Initial computational basis state, qubit 1 first.
    pub initial: String,
}

impl RunPlan {
    fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        if self.q < 2 {
            return Err(Error::InvalidArgument(format!(
                "q must be at least 2, got {}",
                self.q
            )));
        }
        if let Some(t) = self.tau0 {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "tau0 must be positive, got {t}"
                )));
            }
        }
        if self.initial.len() != self.circuit.qubits() {
            return Err(Error::InvalidArgument(format!(
                "initial state `{}` does not have {} bits",
                self.initial,
                self.circuit.qubits()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShotRecord {
    pub tau: f64,
    pub t: usize,
    /// `Some(bits)` for accepted shots.
    pub readout: Option<String>,
}

impl ShotRecord {
    pub fn accepted(&self) -> bool {
        self.readout.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub scheme: Scheme,
    pub qubits: usize,
    pub real_rounds: usize,
    pub padding: Padding,
    pub q: usize,
    pub threshold: usize,
    pub tau0: f64,
    pub seed: u64,
    pub initial: String,
    /// Exact acceptance probability, `tail_prob(T, q, τ₀)`.
    pub predicted_acceptance: f64,
    pub shots: Vec<ShotRecord>,
    /// Accepted readout counts for all `2^n` outcomes in ascending order.
    pub histogram: Vec<(String, usize)>,
}

impl RunReport {
    pub fn accepted(&self) -> usize {
        self.shots.iter().filter(|s| s.accepted()).count()
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted() as f64 / self.shots.len() as f64
    }

    /// Accepted readout frequencies, aligned with `histogram`.
    pub fn readout_distribution(&self) -> Vec<f64> {
        let acc = self.accepted().max(1) as f64;
        self.histogram
            .iter()
            .map(|(_, c)| *c as f64 / acc)
            .collect()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let _ = writeln!(out, "# hqc1d sample report");
        let _ = writeln!(out, "scheme {}", self.scheme);
        let _ = writeln!(out, "qubits {}", self.qubits);
        let _ = writeln!(out, "real_rounds {}", self.real_rounds);
        let _ = writeln!(out, "total_rounds {}", self.padding.rounds);
        let _ = writeln!(out, "transitions {}", self.padding.transitions);
        let _ = writeln!(out, "complete_at {}", self.padding.complete_at);
        let _ = writeln!(out, "q {}", self.q);
        let _ = writeln!(out, "threshold {}", self.threshold);
        let _ = writeln!(out, "tau0 {:.12e}", self.tau0);
        let _ = writeln!(out, "shots {}", self.shots.len());
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "generator {GENERATOR}");
        let _ = writeln!(out, "initial {}", self.initial);
        let _ = writeln!(out, "accepted {}", self.accepted());
        let _ = writeln!(out, "acceptance_rate {:.6}", self.acceptance_rate());
        let _ = writeln!(out, "predicted_acceptance {:.6}", self.predicted_acceptance);
        let _ = writeln!(out, "tau t accepted readout");
        for s in &self.shots {
            let _ = writeln!(
                out,
                "{:.12e} {} {} {}",
                s.tau,
                s.t,
                u8::from(s.accepted()),
                s.readout.as_deref().unwrap_or("-")
            );
        }
        let _ = writeln!(out, "histogram");
        for (bits, count) in &self.histogram {
            let _ = writeln!(out, "{bits} {count}");
        }
        f.write_str(&out)
    }
}

/// Index drawn from `probs` with the uniform variate `u ∈ [0, 1)`. Rounding
/// slack at the top end lands on the last nonzero entry.
pub fn sample_index(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Generator for shot `shot` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, shot: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(shot as u64);
    rng
}

/// Index of `pattern` in the history.
pub fn infer_step<C: Clone + Eq + std::hash::Hash>(
    trace: &HistoryTrace<C>,
    pattern: &C,
) -> Result<usize> {
    trace.index_of(pattern).ok_or(Error::NotAHistoryState)
}

fn sample_shots<C: Clone + Eq + std::hash::Hash>(
    plan: &RunPlan,
    trace: &HistoryTrace<C>,
    (real_rounds, total_rounds): (usize, usize),
) -> Result<(Padding, f64, f64, Vec<ShotRecord>)> {
    let t_total = trace.transitions();
    let threshold = tail_threshold(t_total, plan.q);
    let complete = trace.completion_index(real_rounds);
    let tau0 = plan.tau0.unwrap_or_else(|| default_tau0(t_total));
    let walk = PathWalk::new(t_total)?;
    let initial = QubitState::from_bits(&plan.initial)?;
    let readout_probs: Vec<Vec<f64>> = trace
        .qubit_states(&initial)
        .iter()
        .map(QubitState::probabilities)
        .collect();
    let shots = (0..plan.shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(plan.seed, shot);
            let tau = rng.gen::<f64>() * tau0;
            let t = sample_index(&walk.probabilities(tau), rng.gen());
            let readout = if t >= threshold {
                if t < complete {
                    return Err(Error::UnsoundAcceptance { t, complete });
                }
                let x = sample_index(&readout_probs[t], rng.gen());
                Some(initial.bit_string(x))
            } else {
                None
            };
            Ok(ShotRecord { tau, t, readout })
        })
        .collect::<Result<Vec<_>>>()?;
    let padding = Padding {
        rounds: total_rounds,
        transitions: t_total,
        complete_at: complete,
    };
    Ok((padding, tau0, walk.tail_prob(plan.q, tau0), shots))
}

/// Pads the circuit, enumerates its history and samples `plan.shots` shots.
pub fn run(plan: &RunPlan) -> Result<RunReport> {
    plan.validate()?;
    let n = plan.circuit.qubits();
    let real_rounds = plan.circuit.rounds();
    let layout = padding_plan(n, real_rounds, plan.q, plan.scheme)?;
    let padded = plan.circuit.padded(layout.rounds - real_rounds);
    let rounds = (real_rounds, layout.rounds);
    let (padding, tau0, predicted, shots) = match plan.scheme {
        Scheme::Ham5 => sample_shots(plan, &Ham5::new(&padded)?.enumerate_history()?, rounds)?,
        Scheme::Ham8 => sample_shots(plan, &Ham8::new(&padded)?.enumerate_history()?, rounds)?,
    };
    let mut histogram: Vec<(String, usize)> =
        (0..1usize << n).map(|x| (format!("{x:0n$b}"), 0)).collect();
    for s in &shots {
        if let Some(bits) = &s.readout {
            let x = usize::from_str_radix(bits, 2).expect("readouts are bit strings");
            histogram[x].1 += 1;
        }
    }
    Ok(RunReport {
        scheme: plan.scheme,
        qubits: n,
        real_rounds,
        threshold: tail_threshold(padding.transitions, plan.q),
        padding,
        q: plan.q,
        tau0,
        seed: plan.seed,
        initial: plan.initial.clone(),
        predicted_acceptance: predicted,
        shots,
        histogram,
    })
}
