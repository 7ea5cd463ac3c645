// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

use super::gates::Gate;
use super::state::{apply_gate, QubitState};
use crate::error::{Error, Result};

/// Brick layout of `rounds` rounds, each applying one gate per nearest
/// neighbour pair `(i, i+1)` for `i = 0..n-1`, left to right.
///
/// A slot normally holds a two-qubit gate. One-qubit gates act on the left
/// qubit of the pair. A three-qubit gate at slot `i` covers `(i, i+1, i+2)`;
/// only direct simulation accepts those.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    qubits: usize,
    rounds: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn identity(qubits: usize, rounds: usize) -> Result<Self> {
        if qubits < 2 {
            return Err(Error::InvalidArgument(format!(
                "a circuit needs at least 2 qubits, got {qubits}"
            )));
        }
        if rounds < 1 {
            return Err(Error::InvalidArgument(
                "a circuit needs at least 1 round".into(),
            ));
        }
        Ok(Circuit {
            qubits,
            rounds,
            gates: vec![Gate::i2(); rounds * (qubits - 1)],
        })
    }

    /// Builds a circuit from `rounds[r][i]`.
    pub fn from_rounds(qubits: usize, rounds: Vec<Vec<Gate>>) -> Result<Self> {
        let mut c = Self::identity(qubits, rounds.len())?;
        for (r, round) in rounds.into_iter().enumerate() {
            if round.len() != qubits - 1 {
                return Err(Error::DimensionMismatch {
                    expected: qubits - 1,
                    found: round.len(),
                });
            }
            for (i, g) in round.into_iter().enumerate() {
                c.set(r, i, g)?;
            }
        }
        Ok(c)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn slots_per_round(&self) -> usize {
        self.qubits - 1
    }

    pub fn get(&self, round: usize, pos: usize) -> &Gate {
        &self.gates[round * (self.qubits - 1) + pos]
    }

    pub fn set(&mut self, round: usize, pos: usize, gate: Gate) -> Result<()> {
        let arity = gate.arity();
        let fits = round < self.rounds
            && pos + 1 < self.qubits
            && arity <= 3
            && (arity < 3 || pos + 3 <= self.qubits);
        if !fits {
            return Err(Error::InvalidTarget {
                targets: (pos..pos + arity.max(2)).collect(),
                arity,
                qubits: self.qubits,
            });
        }
        self.gates[round * (self.qubits - 1) + pos] = gate;
        Ok(())
    }

    /// Qubits a slot acts on.
    pub fn targets(&self, round: usize, pos: usize) -> Vec<usize> {
        match self.get(round, pos).arity() {
            1 => vec![pos],
            a => (pos..pos + a).collect(),
        }
    }

    /// All slots in application order: round by round, left to right.
    pub fn schedule(&self) -> impl Iterator<Item = (usize, usize, &Gate)> + '_ {
        let per = self.qubits - 1;
        self.gates
            .iter()
            .enumerate()
            .map(move |(k, g)| (k / per, k % per, g))
    }

    /// Appends `extra` all-identity rounds.
    pub fn padded(&self, extra: usize) -> Circuit {
        let mut gates = self.gates.clone();
        gates.extend(std::iter::repeat_n(Gate::i2(), extra * (self.qubits - 1)));
        Circuit {
            qubits: self.qubits,
            rounds: self.rounds + extra,
            gates,
        }
    }

    /// Rounds `range` as a new circuit.
    pub fn slice_rounds(&self, from: usize, to: usize) -> Result<Circuit> {
        if from >= to || to > self.rounds {
            return Err(Error::InvalidArgument(format!(
                "round range {from}..{to} of {}",
                self.rounds
            )));
        }
        let per = self.qubits - 1;
        Ok(Circuit {
            qubits: self.qubits,
            rounds: to - from,
            gates: self.gates[from * per..to * per].to_vec(),
        })
    }
}

/// Applies every gate of `circuit` to `initial` in schedule order.
pub fn simulate_circuit(circuit: &Circuit, initial: &QubitState) -> Result<QubitState> {
    if initial.qubits() != circuit.qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.qubits(),
            found: initial.qubits(),
        });
    }
    let mut state = initial.clone();
    for (r, i, gate) in circuit.schedule() {
        state = apply_gate(&state, gate, &circuit.targets(r, i))?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcircuit::matrix::{Matrix, C64};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn identity_circuit_is_a_no_op() {
        let c = Circuit::identity(3, 4).unwrap();
        let s = QubitState::from_bits("101").unwrap();
        assert_eq!(simulate_circuit(&c, &s).unwrap(), s);
    }

    #[test]
    fn single_w_round() {
        let c = Circuit::from_rounds(2, vec![vec![Gate::w()]]).unwrap();
        let out = simulate_circuit(&c, &QubitState::from_bits("10").unwrap()).unwrap();
        let p = out.probabilities();
        assert!((p[2] - 0.5).abs() < 1e-12 && (p[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn w_then_s_matches_matrix_product() {
        // W on (0,1) then S on (1,2), starting from |100⟩.
        let c = Circuit::from_rounds(3, vec![vec![Gate::w(), Gate::s()]]).unwrap();
        let out = simulate_circuit(&c, &QubitState::from_bits("100").unwrap()).unwrap();

        // Independent route: full 8×8 product (I⊗S)(W⊗I).
        let full = &Matrix::identity(2).kron(Gate::s().matrix())
            * &Gate::w().matrix().kron(&Matrix::identity(2));
        let mut e = vec![C64::new(0.0, 0.0); 8];
        e[4] = C64::new(1.0, 0.0);
        let expected = full.apply_vec(&e);
        assert!(out
            .amplitudes()
            .iter()
            .zip(&expected)
            .all(|(a, b)| (a - b).norm() < 1e-12));

        // Hand expansion: (|100⟩ + |101⟩)/√2.
        let h = FRAC_1_SQRT_2;
        assert!((out.amplitudes()[4].re - h).abs() < 1e-12);
        assert!((out.amplitudes()[5].re - h).abs() < 1e-12);
    }

    #[test]
    fn simulation_distributes_over_round_split() {
        let c = Circuit::from_rounds(
            3,
            vec![
                vec![Gate::w(), Gate::s()],
                vec![Gate::h(), Gate::cx()],
                vec![Gate::s(), Gate::w()],
            ],
        )
        .unwrap();
        let s = QubitState::from_bits("110").unwrap();
        let whole = simulate_circuit(&c, &s).unwrap();
        let first = simulate_circuit(&c.slice_rounds(0, 1).unwrap(), &s).unwrap();
        let split = simulate_circuit(&c.slice_rounds(1, 3).unwrap(), &first).unwrap();
        assert!(whole.max_abs_diff(&split) < 1e-12);
    }

    #[test]
    fn rejects_degenerate_sizes_and_mismatched_state() {
        assert!(Circuit::identity(1, 1).is_err());
        assert!(Circuit::identity(2, 0).is_err());
        let c = Circuit::identity(3, 1).unwrap();
        assert!(simulate_circuit(&c, &QubitState::from_bits("10").unwrap()).is_err());
    }

    #[test]
    fn toffoli_needs_three_qubits_of_room() {
        let mut c = Circuit::identity(3, 1).unwrap();
        assert!(c.set(0, 1, Gate::toffoli()).is_err());
        c.set(0, 0, Gate::toffoli()).unwrap();
        assert_eq!(c.targets(0, 0), vec![0, 1, 2]);
        let out = simulate_circuit(&c, &QubitState::from_bits("110").unwrap()).unwrap();
        assert_eq!(out, QubitState::from_bits("111").unwrap());
    }
}
