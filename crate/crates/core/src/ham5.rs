// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! The 5-state machine.
//!
//! Sites alternate between two families. Even indices (0, 2, ...) hold one of
//! `MOV ▷`, `MOVLE ◁`, `TUR`, `BUL •`, `PLUS +`; odd indices hold a qubit
//! placeholder `Q`, the gate-qubit placeholder `G`, or `BLANK`. The lattice
//! is one site followed by `R` blocks of `2n` sites. Block boundaries `⊠` are
//! lattice metadata read by rule guards, not symbols.
//!
//! Gates depend on position: rule 1 at a given window always applies the
//! circuit gate scheduled for that slot.

use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Direction, GateEvent, Machine, Scheme, Transition};
use crate::qcircuit::{apply_to_amplitudes, Circuit, Matrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol5 {
    Mov,
    Movle,
    Tur,
    Bul,
    Plus,
    Q,
    G,
    Blank,
}

impl Symbol5 {
    pub const ALL: [Symbol5; 8] = [
        Symbol5::Mov,
        Symbol5::Movle,
        Symbol5::Tur,
        Symbol5::Bul,
        Symbol5::Plus,
        Symbol5::Q,
        Symbol5::G,
        Symbol5::Blank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Symbol5::Mov => "MOV",
            Symbol5::Movle => "MOVLE",
            Symbol5::Tur => "TUR",
            Symbol5::Bul => "BUL",
            Symbol5::Plus => "PLUS",
            Symbol5::Q => "Q",
            Symbol5::G => "G",
            Symbol5::Blank => "BLANK",
        }
    }

    pub fn from_name(name: &str) -> Option<Symbol5> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// True for symbols that live on even site indices.
    pub fn on_even_site(self) -> bool {
        matches!(
            self,
            Symbol5::Mov | Symbol5::Movle | Symbol5::Tur | Symbol5::Bul | Symbol5::Plus
        )
    }

    pub fn is_placeholder(self) -> bool {
        matches!(self, Symbol5::Q | Symbol5::G)
    }

    pub fn is_cursor(self) -> bool {
        matches!(self, Symbol5::Mov | Symbol5::Movle | Symbol5::Tur)
    }
}

impl fmt::Display for Symbol5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice5 {
    n: usize,
    rounds: usize,
}

impl Lattice5 {
    pub fn new(n: usize, rounds: usize) -> Result<Self> {
        if n < 2 || rounds < 1 {
            return Err(Error::InvalidArgument(format!(
                "5-state lattice needs n >= 2 and R >= 1, got n = {n}, R = {rounds}"
            )));
        }
        Ok(Lattice5 { n, rounds })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn sites(&self) -> usize {
        1 + 2 * self.n * self.rounds
    }

    /// Whether a block boundary `⊠` sits between sites `i` and `i + 1`.
    pub fn boundary_after(&self, i: usize) -> bool {
        i == 0 || (i.is_multiple_of(2 * self.n) && i + 1 < self.sites())
    }

    /// Gate slot `(round, position)` of a rule-1 window starting at `i`.
    pub fn slot_at(&self, i: usize) -> Option<(usize, usize)> {
        if i.is_multiple_of(2) {
            return None;
        }
        let block = (i - 1) / (2 * self.n);
        let pos = ((i - 1) % (2 * self.n)) / 2;
        (block < self.rounds && pos + 2 <= self.n).then_some((block, pos))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config5 {
    lattice: Lattice5,
    sites: Vec<Symbol5>,
}

impl Config5 {
    pub fn new(lattice: Lattice5, sites: Vec<Symbol5>) -> Result<Self> {
        if sites.len() != lattice.sites() {
            return Err(Error::DimensionMismatch {
                expected: lattice.sites(),
                found: sites.len(),
            });
        }
        if let Some(i) = sites
            .iter()
            .enumerate()
            .position(|(i, s)| s.on_even_site() != (i % 2 == 0))
        {
            return Err(Error::InvalidArgument(format!(
                "symbol {} cannot sit on site {i}",
                sites[i]
            )));
        }
        Ok(Config5 { lattice, sites })
    }

    pub fn lattice(&self) -> Lattice5 {
        self.lattice
    }

    pub fn sites(&self) -> &[Symbol5] {
        &self.sites
    }

    /// Logical index of the placeholder at `site`: the number of
    /// placeholders to its left.
    fn label(&self, site: usize) -> usize {
        self.sites[..site]
            .iter()
            .filter(|s| s.is_placeholder())
            .count()
    }
}

pub fn initial_config5(lattice: Lattice5) -> Config5 {
    use Symbol5::*;
    let n = lattice.qubits();
    let mut sites = vec![Tur];
    for _ in 0..n {
        sites.extend([Q, Plus]);
    }
    *sites.last_mut().expect("n >= 2") = Bul;
    for _ in 0..(lattice.rounds() - 1) * n {
        sites.extend([Blank, Bul]);
    }
    Config5 { lattice, sites }
}

/// Geometric side condition of a rule, evaluated at window start `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard5 {
    Always,
    /// `⊠` between the second and third window sites.
    BoundaryAfterMiddle,
    /// `⊠` between the first and second window sites.
    BoundaryAfterFirst,
    NoBoundaryAfterFirst,
    /// The third site is neither followed by `⊠` nor the last site.
    OpenAfterLast,
}

impl Guard5 {
    pub fn holds(self, lattice: &Lattice5, i: usize) -> bool {
        match self {
            Guard5::Always => true,
            Guard5::BoundaryAfterMiddle => lattice.boundary_after(i + 1),
            Guard5::BoundaryAfterFirst => lattice.boundary_after(i),
            Guard5::NoBoundaryAfterFirst => !lattice.boundary_after(i),
            Guard5::OpenAfterLast => i + 3 < lattice.sites() && !lattice.boundary_after(i + 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule5 {
    pub name: &'static str,
    pub from: [Symbol5; 3],
    pub to: [Symbol5; 3],
    pub guard: Guard5,
    /// Placeholder moves `(offset before, offset after)` within the window.
    pub carry: &'static [(usize, usize)],
    /// Rule 1: apply the slot's gate to the placeholders at offsets 0 and 2.
    pub applies_gate: bool,
}

/// The rules as data, so tests can remove or alter entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleTable5 {
    rules: Vec<Rule5>,
}

impl RuleTable5 {
    pub fn standard() -> Self {
        use Guard5::*;
        use Symbol5::*;
        let r = |name, from, to, guard, carry, applies_gate| Rule5 {
            name,
            from,
            to,
            guard,
            carry,
            applies_gate,
        };
        RuleTable5 {
            rules: vec![
                r(
                    "1",
                    [G, Plus, Q],
                    [Q, Plus, G],
                    Always,
                    &[(0, 0), (2, 2)],
                    true,
                ),
                r(
                    "2",
                    [G, Bul, Blank],
                    [Q, Tur, Blank],
                    BoundaryAfterMiddle,
                    &[(0, 0)],
                    false,
                ),
                r(
                    "3",
                    [Tur, Blank, Bul],
                    [Movle, Blank, Bul],
                    Always,
                    &[],
                    false,
                ),
                r(
                    "4",
                    [Q, Movle, Blank],
                    [Blank, Movle, Q],
                    Always,
                    &[(0, 2)],
                    false,
                ),
                r(
                    "5a",
                    [Plus, Blank, Movle],
                    [Movle, Blank, Plus],
                    Always,
                    &[],
                    false,
                ),
                r(
                    "5b",
                    [Bul, Blank, Movle],
                    [Bul, Blank, Tur],
                    Always,
                    &[],
                    false,
                ),
                r(
                    "6a",
                    [Tur, Q, Plus],
                    [Bul, G, Plus],
                    BoundaryAfterFirst,
                    &[(1, 1)],
                    false,
                ),
                r(
                    "6b",
                    [Tur, Q, Plus],
                    [Bul, Q, Mov],
                    NoBoundaryAfterFirst,
                    &[(1, 1)],
                    false,
                ),
                r(
                    "7a",
                    [Mov, Q, Plus],
                    [Plus, Q, Mov],
                    Always,
                    &[(1, 1)],
                    false,
                ),
                r(
                    "7b",
                    [Mov, Q, Bul],
                    [Plus, Q, Tur],
                    OpenAfterLast,
                    &[(1, 1)],
                    false,
                ),
            ],
        }
    }

    pub fn rules(&self) -> &[Rule5] {
        &self.rules
    }

    /// The table without the named rule.
    pub fn without(mut self, name: &str) -> Self {
        self.rules.retain(|r| r.name != name);
        self
    }

    /// The table with `rule` appended.
    pub fn with(mut self, rule: Rule5) -> Self {
        self.rules.push(rule);
        self
    }
}

/// One Hamiltonian term `−|output⟩⟨input| ⊗ gate` on sites
/// `start..start + 3`. Forward and reverse instances of a rule are separate
/// terms, so the list is closed under Hermitian conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct Term5 {
    pub rule: &'static str,
    pub direction: Direction,
    pub start: usize,
    pub input: [Symbol5; 3],
    pub output: [Symbol5; 3],
    pub carry: Vec<(usize, usize)>,
    /// Acts on the placeholders at window offsets 0 and 2 (left first).
    pub gate: Option<Matrix>,
}

impl Term5 {
    fn matches(&self, c: &Config5) -> bool {
        c.sites[self.start..self.start + 3] == self.input
    }
}

/// Number of transitions of the 5-state machine, `Rn + (R−1)(3n²+1)`.
pub fn transitions5(n: usize, rounds: usize) -> usize {
    rounds * n + (rounds - 1) * (3 * n * n + 1)
}

/// The frequently quoted count `(R−1)(3n²+n)+n+1`. It agrees with the
/// machine only for `R = 2`; kept so the discrepancy stays testable.
pub fn transitions5_quoted(n: usize, rounds: usize) -> usize {
    (rounds - 1) * (3 * n * n + n) + n + 1
}

#[derive(Clone, Debug)]
pub struct Ham5 {
    lattice: Lattice5,
    gates: Vec<(String, Matrix)>,
    table: RuleTable5,
}

impl Ham5 {
    pub fn new(circuit: &Circuit) -> Result<Self> {
        Self::with_rules(circuit, RuleTable5::standard())
    }

    pub fn with_rules(circuit: &Circuit, table: RuleTable5) -> Result<Self> {
        let lattice = Lattice5::new(circuit.qubits(), circuit.rounds())?;
        let mut gates = Vec::with_capacity(circuit.rounds() * circuit.slots_per_round());
        for (_, _, g) in circuit.schedule() {
            let pair = g.promote_to_pair().map_err(|_| Error::UnsupportedGate {
                gate: g.label().to_string(),
                scheme: "ham5",
            })?;
            gates.push((g.label().to_string(), pair.matrix().clone()));
        }
        Ok(Ham5 {
            lattice,
            gates,
            table,
        })
    }

    pub fn lattice(&self) -> Lattice5 {
        self.lattice
    }

    pub fn table(&self) -> &RuleTable5 {
        &self.table
    }

    fn slot_gate(&self, (round, pos): (usize, usize)) -> &(String, Matrix) {
        &self.gates[round * (self.lattice.qubits() - 1) + pos]
    }

    fn usable(&self, rule: &Rule5, i: usize) -> bool {
        rule.guard.holds(&self.lattice, i)
            && (!rule.applies_gate || self.lattice.slot_at(i).is_some())
    }

    /// Every term of the Hamiltonian, both directions, at every window
    /// where the rule's guard holds and the site families fit.
    pub fn local_terms(&self) -> Vec<Term5> {
        let mut terms = Vec::new();
        let windows = self.lattice.sites() - 2;
        for rule in self.table.rules() {
            for i in 0..windows {
                if rule.from[0].on_even_site() != (i % 2 == 0) || !self.usable(rule, i) {
                    continue;
                }
                let gate = self
                    .lattice
                    .slot_at(i)
                    .filter(|_| rule.applies_gate)
                    .map(|slot| self.slot_gate(slot).1.clone());
                terms.push(Term5 {
                    rule: rule.name,
                    direction: Direction::Forward,
                    start: i,
                    input: rule.from,
                    output: rule.to,
                    carry: rule.carry.to_vec(),
                    gate: gate.clone(),
                });
                terms.push(Term5 {
                    rule: rule.name,
                    direction: Direction::Backward,
                    start: i,
                    input: rule.to,
                    output: rule.from,
                    carry: rule.carry.iter().map(|&(a, b)| (b, a)).collect(),
                    gate: gate.map(|g| g.dagger()),
                });
            }
        }
        terms
    }

    pub fn render_sites(&self, c: &Config5) -> String {
        let mut out = String::new();
        for (i, s) in c.sites.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(s.name());
            if self.lattice.boundary_after(i) {
                out.push_str(" |");
            }
        }
        out
    }
}

impl Machine for Ham5 {
    type Config = Config5;

    const SCHEME: Scheme = Scheme::Ham5;

    fn qubits(&self) -> usize {
        self.lattice.qubits()
    }

    fn initial_config(&self) -> Config5 {
        initial_config5(self.lattice)
    }

    fn successors(&self, c: &Config5, direction: Direction) -> Result<Vec<Transition<Config5>>> {
        if c.lattice != self.lattice {
            return Err(Error::InvalidArgument(
                "configuration from another lattice".into(),
            ));
        }
        let mut out = Vec::new();
        for i in 0..self.lattice.sites() - 2 {
            let window = &c.sites[i..i + 3];
            for rule in self.table.rules() {
                let (src, dst) = match direction {
                    Direction::Forward => (&rule.from, &rule.to),
                    Direction::Backward => (&rule.to, &rule.from),
                };
                if window != src || !self.usable(rule, i) {
                    continue;
                }
                let mut next = c.clone();
                next.sites[i..i + 3].copy_from_slice(dst);
                let event = self
                    .lattice
                    .slot_at(i)
                    .filter(|_| rule.applies_gate)
                    .map(|slot| {
                        let (label, u) = self.slot_gate(slot);
                        let j = c.label(i);
                        let (unitary, label) = match direction {
                            Direction::Forward => (u.clone(), label.clone()),
                            Direction::Backward => (u.dagger(), format!("{label}†")),
                        };
                        GateEvent {
                            step: 0,
                            slot: Some(slot),
                            label,
                            targets: vec![j, j + 1],
                            unitary,
                            direction,
                        }
                    });
                out.push(Transition {
                    rule: rule.name,
                    position: i,
                    config: next,
                    event,
                });
            }
        }
        Ok(out)
    }

    fn apply_terms(&self, c: &Config5, register: &[C64]) -> Result<Vec<(Config5, Vec<C64>)>> {
        let n = self.qubits();
        if register.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: register.len(),
            });
        }
        let mut out = Vec::new();
        for term in self.local_terms().iter().filter(|t| t.matches(c)) {
            let i = term.start;
            let mut next = c.clone();
            next.sites[i..i + 3].copy_from_slice(&term.output);
            debug_assert!(term
                .carry
                .iter()
                .all(|&(a, b)| c.label(i + a) == next.label(i + b)));
            let mut amps: Vec<C64> = register.iter().map(|a| -a).collect();
            if let Some(g) = &term.gate {
                let targets = [c.label(i), c.label(i + 2)];
                apply_to_amplitudes(&mut amps, n, g, &targets);
            }
            out.push((next, amps));
        }
        Ok(out)
    }

    fn render(&self, c: &Config5) -> String {
        self.render_sites(c)
    }
}

/// Parses one rendered configuration (no step prefix). Boundary bars must sit
/// exactly where the lattice puts them.
pub fn parse_config5(lattice: Lattice5, text: &str) -> Result<Config5> {
    let mut sites = Vec::new();
    let mut bars = Vec::new();
    for tok in text.split_whitespace() {
        if tok == "|" {
            match sites.len() {
                0 => return Err(parse_err(0, "boundary before the first site")),
                k => bars.push(k - 1),
            }
            continue;
        }
        let s = Symbol5::from_name(tok)
            .ok_or_else(|| parse_err(0, format!("unknown symbol `{tok}`")))?;
        sites.push(s);
    }
    let expected: Vec<usize> = (0..lattice.sites())
        .filter(|&i| lattice.boundary_after(i))
        .collect();
    if bars != expected {
        return Err(parse_err(
            0,
            format!("boundaries after {bars:?}, expected {expected:?}"),
        ));
    }
    Config5::new(lattice, sites).map_err(|e| parse_err(0, e.to_string()))
}

/// Parses a dump (`t<TAB>configuration` per line).
pub fn parse_dump5(lattice: Lattice5, text: &str) -> Result<Vec<(usize, Config5)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (t, body) = line
            .split_once('\t')
            .ok_or_else(|| parse_err(idx + 1, "expected `t<TAB>configuration`"))?;
        let t = t
            .trim()
            .parse()
            .map_err(|_| parse_err(idx + 1, format!("bad step `{t}`")))?;
        let c = parse_config5(lattice, body).map_err(|e| match e {
            Error::Parse { message, .. } => parse_err(idx + 1, message),
            other => other,
        })?;
        out.push((t, c));
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
