// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Interface shared by the two rule engines.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcircuit::{Matrix, QubitState, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Ham5,
    Ham8,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ham5 => "ham5",
            Scheme::Ham8 => "ham8",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ham5" => Ok(Scheme::Ham5),
            "ham8" => Ok(Scheme::Ham8),
            other => Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

/// A gate applied to the logical register by one transition.
#[derive(Clone, Debug, PartialEq)]
pub struct GateEvent {
    /// Transition index: the event sits between history states `step` and
    /// `step + 1`.
    pub step: usize,
    /// Circuit slot `(round, position)`, 0-based. `None` for the identity
    /// instructions that delimit rounds in the 8-state program.
    pub slot: Option<(usize, usize)>,
    pub label: String,
    /// Logical qubits acted on, most significant first. Empty when the gate
    /// only touched scaffold bits.
    pub targets: Vec<usize>,
    /// Action on `targets`: `U` going forward, `U†` going backward.
    pub unitary: Matrix,
    pub direction: Direction,
}

impl GateEvent {
    pub fn is_logical(&self) -> bool {
        !self.targets.is_empty()
    }

    pub fn apply(&self, state: &mut QubitState) {
        if self.is_logical() {
            state.apply_matrix_in_place(&self.unitary, &self.targets);
        }
    }
}

/// One rule instance matched on a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition<C> {
    pub rule: &'static str,
    /// Leftmost site (or cell) of the rewrite window.
    pub position: usize,
    pub config: C,
    pub event: Option<GateEvent>,
}

/// The configurations visited from the initial configuration to the final
/// one, with the rule and gate event of every forward transition.
#[derive(Clone, Debug)]
pub struct HistoryTrace<C> {
    configs: Vec<C>,
    rules: Vec<&'static str>,
    events: Vec<Option<GateEvent>>,
    index: HashMap<C, usize>,
}

impl<C: Clone + Eq + Hash> HistoryTrace<C> {
    /// Number of transitions `T`; there are `T + 1` configurations.
    pub fn transitions(&self) -> usize {
        self.configs.len() - 1
    }

    pub fn configs(&self) -> &[C] {
        &self.configs
    }

    pub fn config(&self, t: usize) -> &C {
        &self.configs[t]
    }

    pub fn rules(&self) -> &[&'static str] {
        &self.rules
    }

    pub fn events(&self) -> &[Option<GateEvent>] {
        &self.events
    }

    pub fn gate_events(&self) -> impl Iterator<Item = &GateEvent> {
        self.events.iter().flatten()
    }

    pub fn index_of(&self, config: &C) -> Option<usize> {
        self.index.get(config).copied()
    }

    /// Register state at every history index, starting from `initial`.
    pub fn qubit_states(&self, initial: &QubitState) -> Vec<QubitState> {
        let mut out = Vec::with_capacity(self.configs.len());
        let mut state = initial.clone();
        out.push(state.clone());
        for ev in &self.events {
            if let Some(ev) = ev {
                ev.apply(&mut state);
            }
            out.push(state.clone());
        }
        out
    }

    /// Register state at history index `t`.
    pub fn qubit_state_at(&self, initial: &QubitState, t: usize) -> QubitState {
        let mut state = initial.clone();
        for ev in self.events[..t].iter().flatten() {
            ev.apply(&mut state);
        }
        state
    }

    /// First history index at which every logical gate from rounds
    /// `0..real_rounds` has fired.
    pub fn completion_index(&self, real_rounds: usize) -> usize {
        self.gate_events()
            .filter(|ev| ev.is_logical() && ev.slot.is_some_and(|(r, _)| r < real_rounds))
            .map(|ev| ev.step + 1)
            .max()
            .unwrap_or(0)
    }
}

/// A deterministic rewrite system on classical configurations, plus the
/// local Hamiltonian built from its rules.
pub trait Machine {
    type Config: Clone + Eq + Hash + fmt::Debug;

    const SCHEME: Scheme;

    fn qubits(&self) -> usize;

    fn initial_config(&self) -> Self::Config;

    /// Every rule instance that matches `config` in `direction`.
    fn successors(
        &self,
        config: &Self::Config,
        direction: Direction,
    ) -> Result<Vec<Transition<Self::Config>>>;

    /// The local Hamiltonian applied to `config ⊗ register`: a list of output
    /// patterns, each with its (unnormalized) register vector. Outputs are
    /// not merged; the same pattern may appear more than once.
    fn apply_terms(
        &self,
        config: &Self::Config,
        register: &[C64],
    ) -> Result<Vec<(Self::Config, Vec<C64>)>>;

    fn render(&self, config: &Self::Config) -> String;

    /// One history entry of a trace dump.
    fn dump_entry(&self, t: usize, config: &Self::Config) -> String {
        format!("{t}\t{}\n", self.render(config))
    }

    /// The unique transition in `direction`, `None` at an endpoint.
    fn step(
        &self,
        config: &Self::Config,
        direction: Direction,
    ) -> Result<Option<Transition<Self::Config>>> {
        let mut found = self.successors(config, direction)?;
        match found.len() {
            0 => Ok(None),
            1 => Ok(found.pop()),
            count => Err(Error::RuleInconsistency {
                scheme: Self::SCHEME.name(),
                direction: direction.name(),
                count,
                rules: found
                    .iter()
                    .map(|t| format!("{}@{}", t.rule, t.position))
                    .collect::<Vec<_>>()
                    .join(", "),
            }),
        }
    }

    fn forward_step(&self, config: &Self::Config) -> Result<Option<Transition<Self::Config>>> {
        self.step(config, Direction::Forward)
    }

    fn backward_step(&self, config: &Self::Config) -> Result<Option<Transition<Self::Config>>> {
        self.step(config, Direction::Backward)
    }

    /// Runs forward from the initial configuration until no rule matches.
    fn enumerate_history(&self) -> Result<HistoryTrace<Self::Config>> {
        let mut current = self.initial_config();
        let mut index = HashMap::new();
        index.insert(current.clone(), 0);
        let mut configs = vec![current.clone()];
        let mut rules = Vec::new();
        let mut events = Vec::new();
        while let Some(tr) = self.forward_step(&current)? {
            let step = configs.len() - 1;
            if index.insert(tr.config.clone(), step + 1).is_some() {
                return Err(Error::RepeatedConfiguration {
                    scheme: Self::SCHEME.name(),
                    step: step + 1,
                });
            }
            rules.push(tr.rule);
            events.push(tr.event.map(|ev| GateEvent { step, ..ev }));
            configs.push(tr.config.clone());
            current = tr.config;
        }
        Ok(HistoryTrace {
            configs,
            rules,
            events,
            index,
        })
    }
}

/// The whole history in the machine's dump format.
pub fn dump_history<M: Machine>(machine: &M, trace: &HistoryTrace<M::Config>) -> String {
    trace
        .configs()
        .iter()
        .enumerate()
        .map(|(t, c)| machine.dump_entry(t, c))
        .collect()
}
