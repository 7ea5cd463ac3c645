// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Gate identities built from `W` and `S`, plus a numerical checker.
//!
//! Identities are usually written as operator products, rightmost factor
//! first. A [`GateSequence`] stores applications in time order instead, so
//! `W²SW⁶SW²SW⁶` becomes `W⁶ S W² S W⁶ S W²` here.

use super::gates::Gate;
use super::matrix::{apply_to_amplitudes, Matrix, ONE, ZERO};
use super::state::check_targets;
use crate::error::{Error, Result};

/// Names accepted by [`synth`].
pub const IDENTITY_NAMES: [&str; 8] = ["Z", "Hy", "H", "X", "CX", "Y", "L2Y_TH", "L2Y_W"];

/// Ordered gate applications on a fixed number of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSequence {
    qubits: usize,
    ops: Vec<(Gate, Vec<usize>)>,
}

impl GateSequence {
    pub fn new(qubits: usize) -> Self {
        GateSequence {
            qubits,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate, targets: &[usize]) -> Result<&mut Self> {
        check_targets(self.qubits, gate.arity(), targets)?;
        self.ops.push((gate, targets.to_vec()));
        Ok(self)
    }

    fn repeat(&mut self, gate: &Gate, targets: &[usize], times: usize) -> Result<&mut Self> {
        for _ in 0..times {
            self.push(gate.clone(), targets)?;
        }
        Ok(self)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[(Gate, Vec<usize>)] {
        &self.ops
    }

    /// Unitary of the whole sequence, built column by column by pushing basis
    /// vectors through every application.
    pub fn product(&self) -> Matrix {
        let dim = 1usize << self.qubits;
        let mut out = Matrix::zeros(dim);
        for col in 0..dim {
            let mut v = vec![ZERO; dim];
            v[col] = ONE;
            for (g, t) in &self.ops {
                apply_to_amplitudes(&mut v, self.qubits, g.matrix(), t);
            }
            for (row, a) in v.into_iter().enumerate() {
                out[(row, col)] = a;
            }
        }
        out
    }
}

/// Max-abs entry of `product(seq) − target`.
pub fn check_identity(seq: &GateSequence, target: &Gate) -> Result<f64> {
    if target.arity() != seq.qubits() {
        return Err(Error::DimensionMismatch {
            expected: seq.qubits(),
            found: target.arity(),
        });
    }
    seq.product().max_abs_diff(target.matrix())
}

/// The gate sequence for a named identity, in application order.
pub fn synth(name: &str) -> Result<GateSequence> {
    let w = Gate::w();
    let s = Gate::s();
    let mut seq;
    match name {
        "Z" => {
            seq = GateSequence::new(2);
            seq.repeat(&w, &[0, 1], 4)?
                .push(s.clone(), &[0, 1])?
                .repeat(&w, &[0, 1], 4)?
                .push(s, &[0, 1])?
                .repeat(&w, &[0, 1], 4)?;
        }
        "Hy" => {
            // The target block of W once the control reads 1.
            seq = GateSequence::new(2);
            seq.push(w, &[0, 1])?;
        }
        "H" => {
            seq = GateSequence::new(1);
            seq.push(Gate::z(), &[0])?.push(Gate::hy(), &[0])?;
        }
        "X" => {
            seq = GateSequence::new(1);
            seq.push(Gate::h(), &[0])?
                .push(Gate::z(), &[0])?
                .push(Gate::h(), &[0])?;
        }
        "CX" => {
            seq = GateSequence::new(2);
            seq.repeat(&w, &[0, 1], 6)?
                .push(s.clone(), &[0, 1])?
                .repeat(&w, &[0, 1], 2)?
                .push(s.clone(), &[0, 1])?
                .repeat(&w, &[0, 1], 6)?
                .push(s, &[0, 1])?
                .repeat(&w, &[0, 1], 2)?;
        }
        "Y" => {
            seq = GateSequence::new(1);
            seq.push(Gate::z(), &[0])?.push(Gate::x(), &[0])?;
        }
        "L2Y_TH" => {
            let t = Gate::toffoli();
            seq = GateSequence::new(3);
            seq.push(Gate::h(), &[2])?
                .push(t.clone(), &[0, 1, 2])?
                .push(Gate::h(), &[2])?
                .push(t, &[0, 1, 2])?;
        }
        "L2Y_W" => {
            let w3 = w.pow(3);
            seq = GateSequence::new(3);
            seq.push(Gate::x(), &[0])?
                .push(Gate::x(), &[1])?
                .push(w3.clone(), &[1, 2])?
                .push(Gate::cx(), &[0, 1])?
                .push(w3.clone(), &[1, 2])?
                .push(Gate::cx(), &[0, 1])?
                .push(w3, &[0, 2])?
                .push(Gate::y(), &[2])?
                .push(Gate::x(), &[1])?
                .push(Gate::x(), &[0])?;
        }
        other => return Err(Error::UnknownIdentity(other.to_string())),
    }
    Ok(seq)
}

/// The gate a named identity is meant to reproduce.
pub fn identity_target(name: &str) -> Result<Gate> {
    Ok(match name {
        "Z" => Gate::new("I⊗Z", Matrix::identity(2).kron(Gate::z().matrix()))?,
        "Hy" => Gate::controlled(&Gate::hy())?,
        "H" => Gate::h(),
        "X" => Gate::x(),
        "CX" => Gate::cx(),
        "Y" => Gate::y(),
        "L2Y_TH" | "L2Y_W" => Gate::lambda2_y(),
        other => return Err(Error::UnknownIdentity(other.to_string())),
    })
}

/// Deviation of every named identity, in [`IDENTITY_NAMES`] order.
pub fn check_all_identities() -> Vec<(&'static str, f64)> {
    IDENTITY_NAMES
        .iter()
        .map(|&name| {
            let seq = synth(name).expect("listed identity");
            let target = identity_target(name).expect("listed identity");
            (name, check_identity(&seq, &target).expect("matching sizes"))
        })
        .collect()
}

/// Restriction of a two-qubit unitary to the target once the control is
/// held at `control` (0 or 1). Returns `None` when the control is disturbed.
pub fn control_block(u: &Matrix, control: usize) -> Option<Matrix> {
    debug_assert_eq!(u.dim(), 4);
    let other = 1 - control;
    for t in 0..2 {
        for c in 0..2 {
            if u[(2 * other + t, 2 * control + c)].norm() > 1e-12 {
                return None;
            }
        }
    }
    let mut m = Matrix::zeros(2);
    for r in 0..2 {
        for c in 0..2 {
            m[(r, c)] = u[(2 * control + r, 2 * control + c)];
        }
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identities_hold() {
        for (name, dev) in check_all_identities() {
            assert!(dev <= 1e-12, "{name}: {dev:e}");
        }
    }

    #[test]
    fn sequence_shapes() {
        let z = synth("Z").unwrap();
        assert_eq!(z.len(), 14);
        assert!(z.ops().iter().all(|(_, t)| t == &vec![0, 1]));
        let labels: String = z.ops().iter().map(|(g, _)| g.label()).collect();
        assert_eq!(labels, "WWWWSWWWWSWWWW");

        // Written order W²SW⁶SW²SW⁶ is the reverse of application order.
        let cx = synth("CX").unwrap();
        assert_eq!(cx.len(), 19);
        let written: String = cx.ops().iter().rev().map(|(g, _)| g.label()).collect();
        assert_eq!(written, "WWSWWWWWWSWWSWWWWWW");

        let th = synth("L2Y_TH").unwrap();
        let shape: Vec<(&str, Vec<usize>)> = th
            .ops()
            .iter()
            .map(|(g, t)| (g.label(), t.clone()))
            .collect();
        assert_eq!(
            shape,
            vec![
                ("H", vec![2]),
                ("T", vec![0, 1, 2]),
                ("H", vec![2]),
                ("T", vec![0, 1, 2])
            ]
        );
    }

    #[test]
    fn cx_in_written_order_as_time_order_fails() {
        // Guards the ordering convention: reading the product left to right
        // as time order gives a different unitary.
        let mut wrong = GateSequence::new(2);
        for (g, t) in synth("CX").unwrap().ops().iter().rev() {
            wrong.push(g.clone(), t).unwrap();
        }
        assert!(check_identity(&wrong, &Gate::cx()).unwrap() > 0.5);
    }

    #[test]
    fn empty_sequence_is_identity() {
        let seq = GateSequence::new(2);
        let dev = check_identity(&seq, &Gate::i2()).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn unknown_names_and_size_mismatch() {
        assert!(matches!(synth("Q"), Err(Error::UnknownIdentity(_))));
        assert!(identity_target("nope").is_err());
        assert!(check_identity(&synth("Z").unwrap(), &Gate::lambda2_y()).is_err());
    }

    #[test]
    fn w_control_one_block_is_hy() {
        let block = control_block(Gate::w().matrix(), 1).unwrap();
        assert!(block.max_abs_diff(Gate::hy().matrix()).unwrap() < 1e-15);
        assert!(control_block(Gate::w().matrix(), 0)
            .unwrap()
            .is_identity(0.0));
        assert!(control_block(Gate::s().matrix(), 0).is_none());
    }

    #[test]
    fn non_adjacent_w_in_l2y_w() {
        let seq = synth("L2Y_W").unwrap();
        assert!(seq.ops().iter().any(|(_, t)| t == &vec![0, 2]));
    }
}
