// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian quantum computers on a one-dimensional lattice.
//!
//! Two 3-local constructions are provided:
//!
//! * [`ham5`]: a 5-state machine whose gate terms depend on position,
//! * [`ham8`]: an 8-state machine invariant under translation by one unit
//!   cell (a cursor site plus a program/data site).
//!
//! Both are deterministic rewrite systems on classical configurations. The
//! sequence of configurations they visit (the history) spans the subspace in
//! which the full Hamiltonian acts as a hopping matrix on a line; [`walk`]
//! evolves that line exactly, [`oracle`] certifies the reduction term by term
//! and [`runner`] performs the measure-at-a-random-time readout.
//!
//! Logical qubit values are never stored in configurations. Every
//! configuration is a placeholder pattern, and the register lives in a
//! separate [`QubitState`] that is updated by the gate events emitted along
//! the history.

pub mod cli;
pub mod error;
pub mod ham5;
pub mod ham8;
pub mod machine;
pub mod oracle;
pub mod qcircuit;
pub mod runner;
pub mod walk;

pub use error::{Error, Result};
pub use machine::{Direction, GateEvent, HistoryTrace, Machine, Scheme, Transition};
pub use qcircuit::{Circuit, Gate, GateSequence, Matrix, QubitState, C64};
