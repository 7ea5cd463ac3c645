// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid targets {targets:?} for a {arity}-qubit gate on {qubits} qubits")]
    InvalidTarget {
        targets: Vec<usize>,
        arity: usize,
        qubits: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix for `{0}` is not unitary")]
    NotUnitary(String),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("gate `{gate}` is not supported by {scheme}")]
    UnsupportedGate { gate: String, scheme: &'static str },

    /// More than one rule instance matched. Legal histories never do this,
    /// so it points at a broken rule table or an illegal configuration.
    #[error("{scheme}: {count} rule instances match ({rules}) in {direction} direction")]
    RuleInconsistency {
        scheme: &'static str,
        direction: &'static str,
        count: usize,
        rules: String,
    },

    #[error("{scheme}: configuration repeats at step {step}")]
    RepeatedConfiguration { scheme: &'static str, step: usize },

    #[error("rule {rule} would read the qubit placeholder at cell {cell}")]
    PlaceholderConditioned { rule: &'static str, cell: usize },

    #[error("gate {gate} at cells ({left}, {right}) would disturb the scaffold bits")]
    ScaffoldDisturbed {
        gate: String,
        left: usize,
        right: usize,
    },

    #[error("configuration is not a history state")]
    NotAHistoryState,

    #[error("accepted shot at t = {t} precedes completion of the circuit at t = {complete}")]
    UnsoundAcceptance { t: usize, complete: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
