// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Numerical oracles shared by integration tests.

use hqc1d::C64;

/// `−i H c` for the path with `−1` hopping.
fn deriv(c: &[C64]) -> Vec<C64> {
    let i = C64::new(0.0, 1.0);
    (0..c.len())
        .map(|m| {
            let mut hc = C64::new(0.0, 0.0);
            if m > 0 {
                hc -= c[m - 1];
            }
            if m + 1 < c.len() {
                hc -= c[m + 1];
            }
            -i * hc
        })
        .collect()
}

fn axpy(c: &[C64], k: &[C64], h: f64) -> Vec<C64> {
    c.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

fn rk4(t: usize, tau: f64, steps: usize) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); t + 1];
    c[0] = C64::new(1.0, 0.0);
    let h = tau / steps as f64;
    for _ in 0..steps {
        let k1 = deriv(&c);
        let k2 = deriv(&axpy(&c, &k1, h / 2.0));
        let k3 = deriv(&axpy(&c, &k2, h / 2.0));
        let k4 = deriv(&axpy(&c, &k3, h));
        for m in 0..=t {
            c[m] += (k1[m] + k2[m] * 2.0 + k3[m] * 2.0 + k4[m]) * (h / 6.0);
        }
    }
    c
}

/// RK4 with the step count doubled until two successive runs agree to
/// 1e-11, then Richardson-extrapolated.
pub fn ode_oracle(t: usize, tau: f64) -> Vec<C64> {
    let mut steps = ((tau.abs() / 0.05).ceil() as usize).max(8);
    let mut coarse = rk4(t, tau, steps);
    loop {
        steps *= 2;
        let fine = rk4(t, tau, steps);
        let gap = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if gap < 1e-11 {
            return fine
                .iter()
                .zip(&coarse)
                .map(|(f, c)| (f * 16.0 - c) / 15.0)
                .collect();
        }
        coarse = fine;
    }
}

pub fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
