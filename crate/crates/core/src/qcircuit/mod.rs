// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Logical qubits, gates and brick-layout circuits.

mod circuit;
mod format;
mod gates;
mod matrix;
mod state;
mod synth;

pub use circuit::{simulate_circuit, Circuit};
pub use format::{parse_circuit, write_circuit};
pub use gates::{Gate, UNITARY_TOL};
pub use matrix::{apply_to_amplitudes, Matrix, C64, ONE, ZERO};
pub use state::{apply_gate, QubitState, NORM_TOL};
pub use synth::{
    check_all_identities, check_identity, control_block, identity_target, synth, GateSequence,
    IDENTITY_NAMES,
};
