// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Statistical checks of the random-time protocol.

use hqc1d::qcircuit::{parse_circuit, simulate_circuit};
use hqc1d::runner::{run, sample_index, shot_rng, RunPlan};
use hqc1d::walk::PathWalk;
use hqc1d::{QubitState, Scheme};
use rand::Rng;

/// Upper `α = 0.001` point of χ² with `df` degrees of freedom
/// (Wilson–Hilferty).
fn chi2_critical(df: usize) -> f64 {
    let z = 3.090_232_306;
    let k = df as f64;
    let a = 2.0 / (9.0 * k);
    k * (1.0 - a + z * a.sqrt()).powi(3)
}

#[test]
fn sampled_t_follows_walk_distribution() {
    let walk = PathWalk::new(34).unwrap();
    let probs = walk.probabilities(10.0);
    let draws = 100_000;
    let mut rng = shot_rng(2026, 0);
    let mut counts = vec![0usize; probs.len()];
    for _ in 0..draws {
        counts[sample_index(&probs, rng.gen())] += 1;
    }
    // Pool sparse bins so every expected count is at least 5.
    let (mut stat, mut bins) = (0.0, 0usize);
    let (mut pool_e, mut pool_o) = (0.0, 0usize);
    for (p, o) in probs.iter().zip(&counts) {
        let e = p * draws as f64;
        if e >= 5.0 {
            stat += (*o as f64 - e).powi(2) / e;
            bins += 1;
        } else {
            pool_e += e;
            pool_o += o;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o as f64 - pool_e).powi(2) / pool_e;
        bins += 1;
    }
    assert!(
        stat < chi2_critical(bins - 1),
        "chi2 = {stat} over {bins} bins"
    );
}

fn w_plan(scheme: Scheme, shots: usize, seed: u64) -> RunPlan {
    RunPlan {
        circuit: parse_circuit(include_str!("fixtures/w_n2_r1.circ")).unwrap(),
        scheme,
        q: 6,
        tau0: None,
        shots,
        seed,
        initial: "10".into(),
    }
}

#[test]
fn w_readout_and_acceptance() {
    for scheme in [Scheme::Ham5, Scheme::Ham8] {
        let plan = w_plan(scheme, 4000, 11);
        let report = run(&plan).unwrap();
        let want = simulate_circuit(&plan.circuit, &QubitState::from_bits("10").unwrap())
            .unwrap()
            .probabilities();
        let got = report.readout_distribution();
        let tv: f64 = 0.5
            * want
                .iter()
                .zip(&got)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
        assert!(tv <= 0.05, "{scheme}: tv = {tv}");
        let p = report.predicted_acceptance;
        let se = (p * (1.0 - p) / plan.shots as f64).sqrt();
        let z = (report.acceptance_rate() - p).abs() / se;
        assert!(
            z <= 3.0,
            "{scheme}: rate {} vs {p}",
            report.acceptance_rate()
        );
    }
}

#[test]
fn accepted_shots_see_the_whole_circuit() {
    let plan = w_plan(Scheme::Ham8, 1000, 3);
    let report = run(&plan).unwrap();
    assert!(report.padding.complete_at <= report.threshold);
    for s in report.shots.iter().filter(|s| s.accepted()) {
        assert!(s.t >= report.padding.complete_at);
        assert!(matches!(s.readout.as_deref(), Some("10") | Some("11")));
    }
}
