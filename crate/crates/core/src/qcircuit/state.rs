// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

use super::gates::Gate;
use super::matrix::{apply_to_amplitudes, Matrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Norm tolerance for normalized registers.
pub const NORM_TOL: f64 = 1e-9;

/// State vector of `n` logical qubits. Basis index bit `n-1-q` holds qubit
/// `q`, so qubit 0 is the leftmost character of a bit string.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState {
    n: usize,
    amps: Vec<C64>,
}

impl QubitState {
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > 24 || index >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "basis state {index} on {n} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(QubitState { n, amps })
    }

    /// Parses a bit string such as `"10"` (qubit 0 first).
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        let mut index = 0usize;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "bit string `{bits}` contains `{ch}`"
                    )))
                }
            }
        }
        Self::basis(n, index)
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: amps.len().next_power_of_two().max(2),
                found: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(QubitState {
            n: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn max_abs_diff(&self, other: &QubitState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Renders a basis index as a bit string of this register's width.
    pub fn bit_string(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.n)
    }

    pub(crate) fn apply_matrix_in_place(&mut self, m: &Matrix, targets: &[usize]) {
        apply_to_amplitudes(&mut self.amps, self.n, m, targets);
    }
}

pub(crate) fn check_targets(n: usize, arity: usize, targets: &[usize]) -> Result<()> {
    let bad = targets.len() != arity
        || targets.iter().any(|&q| q >= n)
        || targets
            .iter()
            .enumerate()
            .any(|(i, q)| targets[..i].contains(q));
    if bad {
        return Err(Error::InvalidTarget {
            targets: targets.to_vec(),
            arity,
            qubits: n,
        });
    }
    Ok(())
}

/// Returns `state` with `gate` applied to `targets` (0-based, first target is
/// the gate's most significant qubit).
pub fn apply_gate(state: &QubitState, gate: &Gate, targets: &[usize]) -> Result<QubitState> {
    check_targets(state.n, gate.arity(), targets)?;
    let mut out = state.clone();
    out.apply_matrix_in_place(gate.matrix(), targets);
    Ok(out)
}
