// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Continuous-time walk on the history line.
//!
//! Restricted to the `T + 1` history states the Hamiltonian is the path
//! graph with hopping `−1`. Its eigensystem is known in closed form:
//!
//! ```text
//! λ_k    = −2 cos(kπ / (T+2))
//! v_k(t) = √(2/(T+2)) · sin(kπ(t+1) / (T+2)),    k = 1 … T+1
//! ```
//!
//! so every amplitude, time average and limit below is an explicit sum.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ham5::Ham5;
use crate::ham8::Ham8;
use crate::machine::{Machine, Scheme};
use crate::qcircuit::{Circuit, C64};

/// Spectral data of the `(T+1)`-site path.
#[derive(Clone, Debug)]
pub struct PathWalk {
    t: usize,
    eigenvalues: Vec<f64>,
    /// `modes[k][m] = v_{k+1}(m)`.
    modes: Vec<Vec<f64>>,
}

/// Amplitudes `c_m(τ)` of the walk started at history state 0.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkAmplitudes {
    pub tau: f64,
    pub amps: Vec<C64>,
}

impl WalkAmplitudes {
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

impl PathWalk {
    pub fn new(t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument("the walk needs T >= 1".into()));
        }
        let sites = t + 1;
        let denom = (t + 2) as f64;
        let norm = (2.0 / denom).sqrt();
        let eigenvalues = (1..=sites)
            .map(|k| -2.0 * (k as f64 * PI / denom).cos())
            .collect();
        let modes = (1..=sites)
            .map(|k| {
                (0..sites)
                    .map(|m| norm * (k as f64 * PI * (m + 1) as f64 / denom).sin())
                    .collect()
            })
            .collect();
        Ok(PathWalk {
            t,
            eigenvalues,
            modes,
        })
    }

    pub fn transitions(&self) -> usize {
        self.t
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `v_k(m) v_k(0)` for every `k`.
    fn weights(&self, m: usize) -> Vec<f64> {
        self.modes.iter().map(|v| v[m] * v[0]).collect()
    }

    /// `Σ_k coeffs[k] · v_k`, accumulated one contiguous mode at a time.
    fn combine(&self, coeffs: impl Iterator<Item = C64>) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.t + 1];
        for (v, c) in self.modes.iter().zip(coeffs) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    /// `c_m(τ) = Σ_k e^{−iλ_k τ} v_k(m) v_k(0)`.
    pub fn evolve(&self, tau: f64) -> WalkAmplitudes {
        let coeffs = self
            .modes
            .iter()
            .zip(&self.eigenvalues)
            .map(|(v, &l)| C64::from_polar(v[0], -l * tau));
        WalkAmplitudes {
            tau,
            amps: self.combine(coeffs),
        }
    }

    /// Amplitudes at `τ` from an arbitrary starting vector on the line.
    pub fn propagate(&self, start: &[C64], tau: f64) -> Vec<C64> {
        assert_eq!(start.len(), self.t + 1);
        let coeffs = self.modes.iter().zip(&self.eigenvalues).map(|(v, &l)| {
            let proj: C64 = v.iter().zip(start).map(|(a, s)| s * a).sum();
            proj * C64::from_polar(1.0, -l * tau)
        });
        self.combine(coeffs)
    }

    pub fn probabilities(&self, tau: f64) -> Vec<f64> {
        self.evolve(tau).probabilities()
    }

    /// `(1/τ₀) ∫₀^τ₀ p_τ(m|0) dτ`, evaluated from the spectral cross terms.
    pub fn avg_prob(&self, m: usize, tau0: f64) -> f64 {
        let a = self.weights(m);
        let diag: f64 = a.iter().map(|x| x * x).sum();
        let mut cross = 0.0;
        for k in 0..a.len() {
            for l in k + 1..a.len() {
                let d = self.eigenvalues[k] - self.eigenvalues[l];
                cross += a[k] * a[l] * sinc(d * tau0);
            }
        }
        diag + 2.0 * cross
    }

    pub fn avg_distribution(&self, tau0: f64) -> Vec<f64> {
        (0..=self.t).map(|m| self.avg_prob(m, tau0)).collect()
    }

    /// `τ₀ → ∞` limit of [`Self::avg_prob`]: `Σ_k v_k(m)² v_k(0)²`.
    pub fn limit_prob(&self, m: usize) -> f64 {
        self.weights(m).iter().map(|x| x * x).sum()
    }

    /// `Σ_{m ≥ from} v_k(m) v_l(m) v_k(0) v_l(0)` for all `k, l` would cost
    /// `O(T³)`; the sum over `m` has a closed form, so each entry is `O(1)`.
    fn tail_weight(&self, from: usize, k: usize, l: usize) -> f64 {
        let denom = (self.t + 2) as f64;
        let theta = PI / denom;
        let (a, b) = ((from + 1) as f64, (self.t + 1) as f64);
        // Σ_{j=a}^{b} cos(jφ)
        // Only φ = 0 (k = l) hits the removable singularity: k + l < 2(T+2).
        let csum = |phi: f64| {
            let s = (phi / 2.0).sin();
            if s.abs() < 1e-12 {
                b - a + 1.0
            } else {
                (((b + 0.5) * phi).sin() - ((a - 0.5) * phi).sin()) / (2.0 * s)
            }
        };
        let (kk, ll) = ((k + 1) as f64, (l + 1) as f64);
        let overlap = (csum((kk - ll) * theta) - csum((kk + ll) * theta)) / denom;
        overlap * self.modes[k][0] * self.modes[l][0]
    }

    /// Averaged probability of landing at `m > T/q`.
    pub fn tail_prob(&self, q: usize, tau0: f64) -> f64 {
        let from = tail_threshold(self.t, q);
        if from > self.t {
            return 0.0;
        }
        let sites = self.t + 1;
        let mut total = 0.0;
        for k in 0..sites {
            total += self.tail_weight(from, k, k);
            for l in k + 1..sites {
                let d = self.eigenvalues[k] - self.eigenvalues[l];
                total += 2.0 * self.tail_weight(from, k, l) * sinc(d * tau0);
            }
        }
        total
    }

    pub fn tail_limit(&self, q: usize) -> f64 {
        let from = tail_threshold(self.t, q);
        if from > self.t {
            return 0.0;
        }
        (0..=self.t).map(|k| self.tail_weight(from, k, k)).sum()
    }
}

/// Smallest history index counted as `m > T/q`, i.e. `floor(T/q) + 1`.
pub fn tail_threshold(t: usize, q: usize) -> usize {
    t / q + 1
}

/// `10 · T · ln(T + 2)`.
pub fn default_tau0(t: usize) -> f64 {
    10.0 * t as f64 * ((t + 2) as f64).ln()
}

pub fn evolve(t: usize, tau: f64) -> Result<WalkAmplitudes> {
    Ok(PathWalk::new(t)?.evolve(tau))
}

pub fn avg_prob(t: usize, m: usize, tau0: f64) -> Result<f64> {
    if m > t {
        return Err(Error::InvalidArgument(format!("m = {m} beyond T = {t}")));
    }
    Ok(PathWalk::new(t)?.avg_prob(m, tau0))
}

pub fn tail_prob(t: usize, q: usize, tau0: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "q must be at least 2, got {q}"
        )));
    }
    Ok(PathWalk::new(t)?.tail_prob(q, tau0))
}

/// Result of [`padding_plan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Padding {
    pub rounds: usize,
    pub transitions: usize,
    /// First history index with every real gate applied.
    pub complete_at: usize,
}

fn history_shape(scheme: Scheme, n: usize, rounds: usize, real: usize) -> Result<(usize, usize)> {
    let circuit = Circuit::identity(n, rounds)?;
    match scheme {
        Scheme::Ham5 => {
            let h = Ham5::new(&circuit)?.enumerate_history()?;
            Ok((h.transitions(), h.completion_index(real)))
        }
        Scheme::Ham8 => {
            let h = Ham8::new(&circuit)?.enumerate_history()?;
            Ok((h.transitions(), h.completion_index(real)))
        }
    }
}

/// Smallest `R_total ≥ R_real` whose history applies every gate of the first
/// `R_real` rounds by index `floor(T/q) + 1`. The gate positions depend only
/// on the layout, so identity circuits stand in for the real one.
pub fn padding_plan(n: usize, real_rounds: usize, q: usize, scheme: Scheme) -> Result<Padding> {
    if q < 2 || real_rounds == 0 {
        return Err(Error::InvalidArgument(format!(
            "padding needs q >= 2 and R >= 1, got q = {q}, R = {real_rounds}"
        )));
    }
    // Both step counts grow at least linearly in R with slope ≥ 3n²+1 while
    // completion stays fixed, so a solution exists well before this bound.
    let cap = real_rounds * (q + 1) + 2;
    for rounds in real_rounds..=cap {
        let (t, complete_at) = history_shape(scheme, n, rounds, real_rounds)?;
        if complete_at <= tail_threshold(t, q) {
            return Ok(Padding {
                rounds,
                transitions: t,
                complete_at,
            });
        }
    }
    Err(Error::InvalidArgument(format!(
        "no padding up to {cap} rounds for n = {n}, R = {real_rounds}, q = {q}"
    )))
}

/// `tau,m,p` rows for every `τ` in `taus`.
pub fn evolve_csv(t: usize, taus: &[f64]) -> Result<String> {
    let walk = PathWalk::new(t)?;
    let mut out = String::from("tau,m,p\n");
    for &tau in taus {
        for (m, p) in walk.probabilities(tau).iter().enumerate() {
            let _ = writeln!(out, "{tau},{m},{p:.12e}");
        }
    }
    Ok(out)
}

/// `m,avg_p` rows of the time-averaged distribution.
pub fn avg_csv(t: usize, tau0: f64) -> Result<String> {
    let walk = PathWalk::new(t)?;
    let mut out = String::from("m,avg_p\n");
    for (m, p) in walk.avg_distribution(tau0).iter().enumerate() {
        let _ = writeln!(out, "{m},{p:.12e}");
    }
    Ok(out)
}
