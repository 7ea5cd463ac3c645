// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! The 8-state translation-invariant machine.
//!
//! A unit cell is a cursor site followed by a program/data site. Cursor `k`
//! sits just right of cell `k`. Rule windows come in two shapes:
//!
//! * type A: `(cursor k−1, cell k, cursor k)`,
//! * type B: `(cell k, cursor k, cell k+1)`.
//!
//! The program register holds `I`, `W`, `S` or `•`; the data register holds
//! scaffold bits and, in the qubit block, placeholders `ω₁ … ωₙ` whose values
//! live in the separate register.

use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Direction, GateEvent, Machine, Scheme, Transition};
use crate::qcircuit::{apply_to_amplitudes, Circuit, Gate, Matrix, C64, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cursor {
    /// `▶`
    Gat,
    /// `▷`
    Mov,
    /// `◀`
    Movl,
    /// `◁`
    Movle,
    /// `⇒`
    Dblr,
    /// `→`
    Arr,
    Tur,
    Star,
    /// Inert marker closing a periodic chain. No rule mentions it.
    X,
}

impl Cursor {
    pub const ALL: [Cursor; 9] = [
        Cursor::Gat,
        Cursor::Mov,
        Cursor::Movl,
        Cursor::Movle,
        Cursor::Dblr,
        Cursor::Arr,
        Cursor::Tur,
        Cursor::Star,
        Cursor::X,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Cursor::Gat => "GAT",
            Cursor::Mov => "MOV",
            Cursor::Movl => "MOVL",
            Cursor::Movle => "MOVLE",
            Cursor::Dblr => "DBLR",
            Cursor::Arr => "ARR",
            Cursor::Tur => "TUR",
            Cursor::Star => "STAR",
            Cursor::X => "X",
        }
    }

    pub fn from_name(s: &str) -> Option<Cursor> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prog {
    Bul,
    I,
    W,
    S,
}

impl Prog {
    pub fn name(self) -> &'static str {
        match self {
            Prog::Bul => "BUL",
            Prog::I => "I",
            Prog::W => "W",
            Prog::S => "S",
        }
    }

    pub fn from_name(s: &str) -> Option<Prog> {
        [Prog::Bul, Prog::I, Prog::W, Prog::S]
            .into_iter()
            .find(|p| p.name() == s)
    }

    pub fn gate(self) -> Option<Gate> {
        match self {
            Prog::Bul => None,
            Prog::I => Some(Gate::i2()),
            Prog::W => Some(Gate::w()),
            Prog::S => Some(Gate::s()),
        }
    }

    pub fn is_instruction(self) -> bool {
        self != Prog::Bul
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataSymbol {
    Zero,
    One,
    /// Placeholder for logical qubit `i` (0-based).
    Qubit(usize),
}

impl DataSymbol {
    fn bit(b: bool) -> DataSymbol {
        if b {
            DataSymbol::One
        } else {
            DataSymbol::Zero
        }
    }
}

impl fmt::Display for DataSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSymbol::Zero => f.write_str("0"),
            DataSymbol::One => f.write_str("1"),
            DataSymbol::Qubit(i) => write!(f, "w{}", i + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary8 {
    Open,
    /// Ring closed by one extra column whose cursor site holds `X`.
    PeriodicX,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config8 {
    boundary: Boundary8,
    cursor: Vec<Cursor>,
    program: Vec<Prog>,
    data: Vec<DataSymbol>,
}

impl Config8 {
    pub fn new(
        boundary: Boundary8,
        cursor: Vec<Cursor>,
        program: Vec<Prog>,
        data: Vec<DataSymbol>,
    ) -> Result<Self> {
        if cursor.len() != program.len() || data.len() != program.len() {
            return Err(Error::DimensionMismatch {
                expected: program.len(),
                found: if cursor.len() != program.len() {
                    cursor.len()
                } else {
                    data.len()
                },
            });
        }
        Ok(Config8 {
            boundary,
            cursor,
            program,
            data,
        })
    }

    pub fn cells(&self) -> usize {
        self.program.len()
    }

    pub fn boundary(&self) -> Boundary8 {
        self.boundary
    }

    pub fn cursor(&self) -> &[Cursor] {
        &self.cursor
    }

    pub fn program(&self) -> &[Prog] {
        &self.program
    }

    pub fn data(&self) -> &[DataSymbol] {
        &self.data
    }

    fn wrap(&self, k: usize) -> usize {
        k % self.cells()
    }

    /// Window starts for type A (`k` is the cell index) and type B.
    fn windows(&self) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        let m = self.cells();
        match self.boundary {
            Boundary8::Open => (1..m, 0..m - 1),
            Boundary8::PeriodicX => (0..m, 0..m),
        }
    }
}

/// Program and data registers for a circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgramLayout {
    qubits: usize,
    rounds: usize,
    program: Vec<Prog>,
    data: Vec<DataSymbol>,
    program_start: usize,
}

impl ProgramLayout {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Instructions in execution order: every round is wrapped in `I … I`.
    pub fn program(&self) -> &[Prog] {
        &self.program
    }

    pub fn data(&self) -> &[DataSymbol] {
        &self.data
    }

    pub fn cells(&self) -> usize {
        self.data.len()
    }

    /// Cell holding the first instruction initially.
    pub fn program_start(&self) -> usize {
        self.program_start
    }

    /// Circuit slot of instruction `idx`, `None` for the wrapping `I`s.
    pub fn slot_of(&self, idx: usize) -> Option<(usize, usize)> {
        let per = self.qubits + 1;
        let j = idx % per;
        (1..self.qubits).contains(&j).then(|| (idx / per, j - 1))
    }
}

fn prog_for(g: &Gate) -> Option<Prog> {
    let m = g.matrix();
    if m.is_identity(1e-12) {
        return Some(Prog::I);
    }
    [Prog::W, Prog::S].into_iter().find(|p| {
        p.gate()
            .is_some_and(|pg| pg.matrix().max_abs_diff(m).is_ok_and(|d| d <= 1e-12))
    })
}

/// Lays out `circuit` (gates from `{W, S, I}` only).
pub fn program_layout(circuit: &Circuit) -> Result<ProgramLayout> {
    let n = circuit.qubits();
    let rounds = circuit.rounds();
    let mut program = Vec::with_capacity(rounds * (n + 1));
    for r in 0..rounds {
        program.push(Prog::I);
        for i in 0..circuit.slots_per_round() {
            let g = circuit.get(r, i);
            program.push(prog_for(g).ok_or_else(|| Error::UnsupportedGate {
                gate: g.label().to_string(),
                scheme: "ham8",
            })?);
        }
        program.push(Prog::I);
    }

    use DataSymbol::{One, Zero};
    let spacer = |data: &mut Vec<DataSymbol>| {
        for _ in 0..rounds - 1 {
            data.push(One);
            data.extend(std::iter::repeat_n(Zero, n));
        }
    };
    let mut data = vec![Zero];
    spacer(&mut data);
    data.push(One);
    data.extend((0..n).map(DataSymbol::Qubit));
    spacer(&mut data);
    data.extend([One, Zero]);

    Ok(ProgramLayout {
        qubits: n,
        rounds,
        program,
        data,
        program_start: (rounds - 1) * (n + 1) + 2,
    })
}

/// Number of transitions of the 8-state machine,
/// `6 + (n+1)(3R(R−1)(n+1) + 9R − 5)`.
pub fn transitions8(n: usize, rounds: usize) -> usize {
    6 + (n + 1) * (3 * rounds * (rounds - 1) * (n + 1) + 9 * rounds - 5)
}

/// Program-register pattern in a rule window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgPat {
    Bul,
    /// Any instruction, left unchanged.
    Instr,
}

impl ProgPat {
    fn accepts(self, p: Prog) -> bool {
        match self {
            ProgPat::Bul => p == Prog::Bul,
            ProgPat::Instr => p.is_instruction(),
        }
    }
}

/// Which data cell of a type-B window a rule reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rule8 {
    /// `(left, cell, right) → (new_left, cell, new_right)` on cursors.
    A {
        name: &'static str,
        left: Cursor,
        cell: ProgPat,
        right: Cursor,
        new_left: Cursor,
        new_right: Cursor,
    },
    /// Cursor rewrite between two cells. With `shift`, the instruction in
    /// the right cell moves into the empty left cell; with `gate` it also
    /// acts on the two data cells.
    B {
        name: &'static str,
        cursor: Cursor,
        new_cursor: Cursor,
        shift: bool,
        gate: bool,
        reads: Option<(Side, bool)>,
    },
}

impl Rule8 {
    pub fn name(&self) -> &'static str {
        match self {
            Rule8::A { name, .. } | Rule8::B { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleTable8 {
    rules: Vec<Rule8>,
}

impl RuleTable8 {
    pub fn standard() -> Self {
        use Cursor::*;
        let a = |name, left, cell, right, new_left, new_right| Rule8::A {
            name,
            left,
            cell,
            right,
            new_left,
            new_right,
        };
        let b = |name, cursor, new_cursor, shift, gate, reads| Rule8::B {
            name,
            cursor,
            new_cursor,
            shift,
            gate,
            reads,
        };
        RuleTable8 {
            rules: vec![
                a("1a", Star, ProgPat::Bul, Movl, Movle, Star),
                a("1b", Star, ProgPat::Bul, Movle, Tur, Star),
                a("1c", Star, ProgPat::Instr, Movle, Movle, Star),
                a("2a", Dblr, ProgPat::Bul, Star, Star, Gat),
                a("2b", Arr, ProgPat::Bul, Star, Star, Mov),
                b("3a", Tur, Dblr, false, false, Some((Side::Right, true))),
                b("3b", Tur, Arr, false, false, Some((Side::Right, false))),
                b("4a", Gat, Dblr, true, true, None),
                b("4b", Mov, Arr, true, false, None),
                b("5a", Gat, Movl, false, false, Some((Side::Left, true))),
                b("5b", Mov, Movl, false, false, Some((Side::Left, false))),
            ],
        }
    }

    pub fn rules(&self) -> &[Rule8] {
        &self.rules
    }

    pub fn without(mut self, name: &str) -> Self {
        self.rules.retain(|r| r.name() != name);
        self
    }
}

/// A term template `−|output⟩⟨input|`, tiled over every window.
#[derive(Clone, Debug, PartialEq)]
pub struct Term8 {
    pub rule: &'static str,
    pub direction: Direction,
    pub shape: TermShape,
    /// Projector on one data cell of a type-B window.
    pub reads: Option<(Side, bool)>,
    /// Unitary on the two data cells of a type-B window.
    pub gate: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermShape {
    A {
        cell: ProgPat,
        input: (Cursor, Cursor),
        output: (Cursor, Cursor),
    },
    B {
        input: (Prog, Cursor, Prog),
        output: (Prog, Cursor, Prog),
    },
    /// `(p, c, p')` for any `p`, `p'` matching the patterns.
    BAny {
        left: ProgPat,
        right: ProgPat,
        input: Cursor,
        output: Cursor,
    },
}

/// Reduces a two-cell gate to its action on the logical register.
fn reduce_gate(
    label: &str,
    u: &Matrix,
    left: DataSymbol,
    right: DataSymbol,
    cells: (usize, usize),
) -> Result<(Vec<usize>, Matrix)> {
    use DataSymbol::*;
    let disturbed = || Error::ScaffoldDisturbed {
        gate: label.to_string(),
        left: cells.0,
        right: cells.1,
    };
    let tiny = |z: C64| z.norm() <= 1e-12;
    let bit = |d: DataSymbol| usize::from(d == One);
    match (left, right) {
        (Qubit(i), Qubit(j)) => Ok((vec![i, j], u.clone())),
        (Qubit(i), b) | (b, Qubit(i)) => {
            let b = bit(b);
            let qubit_left = matches!(left, Qubit(_));
            let idx = |q: usize, s: usize| if qubit_left { 2 * q + s } else { 2 * s + q };
            let mut block = Matrix::zeros(2);
            for r in 0..2 {
                for c in 0..2 {
                    if !tiny(u[(idx(r, 1 - b), idx(c, b))]) {
                        return Err(disturbed());
                    }
                    block[(r, c)] = u[(idx(r, b), idx(c, b))];
                }
            }
            Ok((vec![i], block))
        }
        (a, b) => {
            let col = 2 * bit(a) + bit(b);
            for r in 0..4 {
                let want = if r == col { 1.0 } else { 0.0 };
                if !tiny(u[(r, col)] - want) {
                    return Err(disturbed());
                }
            }
            Ok((Vec::new(), Matrix::identity(1)))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Ham8 {
    layout: ProgramLayout,
    boundary: Boundary8,
    table: RuleTable8,
}

impl Ham8 {
    pub fn new(circuit: &Circuit) -> Result<Self> {
        Self::with_options(circuit, Boundary8::Open, RuleTable8::standard())
    }

    pub fn with_options(circuit: &Circuit, boundary: Boundary8, table: RuleTable8) -> Result<Self> {
        Ok(Ham8 {
            layout: program_layout(circuit)?,
            boundary,
            table,
        })
    }

    pub fn layout(&self) -> &ProgramLayout {
        &self.layout
    }

    pub fn boundary(&self) -> Boundary8 {
        self.boundary
    }

    /// Index in the program of the instruction at `cell`.
    fn instruction_index(c: &Config8, cell: usize) -> usize {
        c.program[..cell]
            .iter()
            .filter(|p| p.is_instruction())
            .count()
    }

    fn read(rule: &'static str, c: &Config8, cell: usize, want: bool) -> Result<bool> {
        match c.data[cell] {
            DataSymbol::Qubit(_) => Err(Error::PlaceholderConditioned { rule, cell }),
            d => Ok(d == DataSymbol::bit(want)),
        }
    }

    /// Every term template, both directions. The gate rule gets one template
    /// per instruction, carrying that instruction's matrix.
    pub fn local_terms(&self) -> Vec<Term8> {
        let mut terms = Vec::new();
        for rule in self.table.rules() {
            match *rule {
                Rule8::A {
                    name,
                    left,
                    cell,
                    right,
                    new_left,
                    new_right,
                } => {
                    for (direction, input, output) in [
                        (Direction::Forward, (left, right), (new_left, new_right)),
                        (Direction::Backward, (new_left, new_right), (left, right)),
                    ] {
                        terms.push(Term8 {
                            rule: name,
                            direction,
                            shape: TermShape::A {
                                cell,
                                input,
                                output,
                            },
                            reads: None,
                            gate: None,
                        });
                    }
                }
                Rule8::B {
                    name,
                    cursor,
                    new_cursor,
                    shift: true,
                    gate,
                    ..
                } => {
                    for p in [Prog::I, Prog::W, Prog::S] {
                        let u = p.gate().expect("instruction").matrix().clone();
                        let (fg, bg) = if gate {
                            (Some(u.clone()), Some(u.dagger()))
                        } else {
                            (None, None)
                        };
                        terms.push(Term8 {
                            rule: name,
                            direction: Direction::Forward,
                            shape: TermShape::B {
                                input: (Prog::Bul, cursor, p),
                                output: (p, new_cursor, Prog::Bul),
                            },
                            reads: None,
                            gate: fg,
                        });
                        terms.push(Term8 {
                            rule: name,
                            direction: Direction::Backward,
                            shape: TermShape::B {
                                input: (p, new_cursor, Prog::Bul),
                                output: (Prog::Bul, cursor, p),
                            },
                            reads: None,
                            gate: bg,
                        });
                    }
                }
                Rule8::B {
                    name,
                    cursor,
                    new_cursor,
                    shift: false,
                    reads,
                    ..
                } => {
                    for (direction, input, output) in [
                        (Direction::Forward, cursor, new_cursor),
                        (Direction::Backward, new_cursor, cursor),
                    ] {
                        terms.push(Term8 {
                            rule: name,
                            direction,
                            shape: TermShape::BAny {
                                left: ProgPat::Bul,
                                right: ProgPat::Bul,
                                input,
                                output,
                            },
                            reads,
                            gate: None,
                        });
                    }
                }
            }
        }
        terms
    }

    fn event_for(
        &self,
        c: &Config8,
        k: usize,
        instr_cell: usize,
        direction: Direction,
    ) -> Result<GateEvent> {
        let k1 = c.wrap(k + 1);
        let p = c.program[instr_cell];
        let g = p.gate().expect("shift rules move instructions");
        let (targets, u) = reduce_gate(g.label(), g.matrix(), c.data[k], c.data[k1], (k, k1))?;
        let idx = Self::instruction_index(c, instr_cell);
        let (unitary, label) = match direction {
            Direction::Forward => (u, p.name().to_string()),
            Direction::Backward => (u.dagger(), format!("{}†", p.name())),
        };
        Ok(GateEvent {
            step: 0,
            slot: self.layout.slot_of(idx),
            label,
            targets,
            unitary,
            direction,
        })
    }

    pub fn render_rows(c: &Config8) -> String {
        let join = |v: Vec<String>| v.join(" ");
        format!(
            "cursor  {}\nprogram {}\ndata    {}",
            join(c.cursor.iter().map(|x| x.name().to_string()).collect()),
            join(c.program.iter().map(|x| x.name().to_string()).collect()),
            join(c.data.iter().map(|x| x.to_string()).collect()),
        )
    }
}

impl Machine for Ham8 {
    type Config = Config8;

    const SCHEME: Scheme = Scheme::Ham8;

    fn qubits(&self) -> usize {
        self.layout.qubits
    }

    fn initial_config(&self) -> Config8 {
        let l = self.layout.cells();
        let mut cursor = vec![Cursor::Star; l];
        cursor[l - 1] = Cursor::Movl;
        let mut program = vec![Prog::Bul; l];
        let start = self.layout.program_start;
        program[start..start + self.layout.program.len()].copy_from_slice(&self.layout.program);
        let mut data = self.layout.data.clone();
        if self.boundary == Boundary8::PeriodicX {
            // The closing column sits right of the last cell, so the window
            // (last cell, last cursor, new cell) exists only on the ring. An
            // instruction there keeps every non-shift rule out of it; with a
            // BUL the initial MOVL could step backward through rule 5b.
            cursor.push(Cursor::X);
            program.push(Prog::I);
            data.push(DataSymbol::Zero);
        }
        Config8 {
            boundary: self.boundary,
            cursor,
            program,
            data,
        }
    }

    fn successors(&self, c: &Config8, direction: Direction) -> Result<Vec<Transition<Config8>>> {
        let forward = direction == Direction::Forward;
        let (wa, wb) = c.windows();
        let mut out = Vec::new();
        for rule in self.table.rules() {
            match *rule {
                Rule8::A {
                    name,
                    left,
                    cell,
                    right,
                    new_left,
                    new_right,
                } => {
                    let (from, to) = if forward {
                        ((left, right), (new_left, new_right))
                    } else {
                        ((new_left, new_right), (left, right))
                    };
                    for k in wa.clone() {
                        let km = c.wrap(k + c.cells() - 1);
                        if (c.cursor[km], c.cursor[k]) == from && cell.accepts(c.program[k]) {
                            let mut next = c.clone();
                            next.cursor[km] = to.0;
                            next.cursor[k] = to.1;
                            out.push(Transition {
                                rule: name,
                                position: k,
                                config: next,
                                event: None,
                            });
                        }
                    }
                }
                Rule8::B {
                    name,
                    cursor,
                    new_cursor,
                    shift,
                    gate,
                    reads,
                } => {
                    let (from, to) = if forward {
                        (cursor, new_cursor)
                    } else {
                        (new_cursor, cursor)
                    };
                    for k in wb.clone() {
                        let k1 = c.wrap(k + 1);
                        if c.cursor[k] != from {
                            continue;
                        }
                        let (pl, pr) = (c.program[k], c.program[k1]);
                        let progs_ok = match (shift, forward) {
                            (false, _) => pl == Prog::Bul && pr == Prog::Bul,
                            (true, true) => pl == Prog::Bul && pr.is_instruction(),
                            (true, false) => pl.is_instruction() && pr == Prog::Bul,
                        };
                        if !progs_ok {
                            continue;
                        }
                        if let Some((side, want)) = reads {
                            let cell = if side == Side::Left { k } else { k1 };
                            if !Self::read(name, c, cell, want)? {
                                continue;
                            }
                        }
                        let mut next = c.clone();
                        next.cursor[k] = to;
                        let mut event = None;
                        if shift {
                            let instr_cell = if forward { k1 } else { k };
                            if gate {
                                event = Some(self.event_for(c, k, instr_cell, direction)?);
                            }
                            next.program.swap(k, k1);
                        }
                        out.push(Transition {
                            rule: name,
                            position: k,
                            config: next,
                            event,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    fn apply_terms(&self, c: &Config8, register: &[C64]) -> Result<Vec<(Config8, Vec<C64>)>> {
        let n = self.qubits();
        if register.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: register.len(),
            });
        }
        let neg: Vec<C64> = register.iter().map(|a| -a).collect();
        let (wa, wb) = c.windows();
        let mut out = Vec::new();
        for term in self.local_terms() {
            match &term.shape {
                TermShape::A {
                    cell,
                    input,
                    output,
                } => {
                    for k in wa.clone() {
                        let km = c.wrap(k + c.cells() - 1);
                        if (c.cursor[km], c.cursor[k]) == *input && cell.accepts(c.program[k]) {
                            let mut next = c.clone();
                            next.cursor[km] = output.0;
                            next.cursor[k] = output.1;
                            out.push((next, neg.clone()));
                        }
                    }
                }
                TermShape::B { .. } | TermShape::BAny { .. } => {
                    for k in wb.clone() {
                        let k1 = c.wrap(k + 1);
                        let window = (c.program[k], c.cursor[k], c.program[k1]);
                        let next_window = match &term.shape {
                            TermShape::B { input, output } if window == *input => *output,
                            TermShape::BAny {
                                left,
                                right,
                                input,
                                output,
                            } if left.accepts(window.0)
                                && right.accepts(window.2)
                                && window.1 == *input =>
                            {
                                (window.0, *output, window.2)
                            }
                            _ => continue,
                        };
                        let mut next = c.clone();
                        next.program[k] = next_window.0;
                        next.cursor[k] = next_window.1;
                        next.program[k1] = next_window.2;
                        let mut amps = neg.clone();

                        if let Some((side, want)) = term.reads {
                            let cell = if side == Side::Left { k } else { k1 };
                            match c.data[cell] {
                                DataSymbol::Qubit(q) => project(&mut amps, n, q, want),
                                d if d != DataSymbol::bit(want) => continue,
                                _ => {}
                            }
                        }
                        match &term.gate {
                            None => out.push((next, amps)),
                            Some(u) => expand_gate(&mut out, next, &amps, n, u, (k, k1)),
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn render(&self, c: &Config8) -> String {
        Self::render_rows(c)
    }

    fn dump_entry(&self, t: usize, c: &Config8) -> String {
        format!("[{t}]\n{}\n", Self::render_rows(c))
    }
}

/// Zeroes every amplitude whose qubit `q` differs from `want`.
fn project(amps: &mut [C64], n: usize, q: usize, want: bool) {
    let mask = 1usize << (n - 1 - q);
    for (idx, a) in amps.iter_mut().enumerate() {
        if (idx & mask != 0) != want {
            *a = ZERO;
        }
    }
}

/// Applies a two-cell gate to `next ⊗ amps`, where the data cells may be
/// scaffold bits or placeholders. Each output branch may flip scaffold bits.
fn expand_gate(
    out: &mut Vec<(Config8, Vec<C64>)>,
    next: Config8,
    amps: &[C64],
    n: usize,
    u: &Matrix,
    (k, k1): (usize, usize),
) {
    use DataSymbol::*;
    let bit = |d: DataSymbol| usize::from(d == One);
    let nonzero = |v: &[C64]| v.iter().any(|z| z.norm() > 1e-15);
    let (dl, dr) = (next.data[k], next.data[k1]);
    match (dl, dr) {
        (Qubit(i), Qubit(j)) => {
            let mut v = amps.to_vec();
            apply_to_amplitudes(&mut v, n, u, &[i, j]);
            out.push((next, v));
        }
        (Qubit(q), b) | (b, Qubit(q)) => {
            let qubit_left = matches!(dl, Qubit(_));
            let idx = |x: usize, s: usize| if qubit_left { 2 * x + s } else { 2 * s + x };
            let b = bit(b);
            for b2 in 0..2 {
                let mut block = Matrix::zeros(2);
                for r in 0..2 {
                    for c in 0..2 {
                        block[(r, c)] = u[(idx(r, b2), idx(c, b))];
                    }
                }
                let mut v = amps.to_vec();
                apply_to_amplitudes(&mut v, n, &block, &[q]);
                if nonzero(&v) {
                    let mut cfg = next.clone();
                    let cell = if qubit_left { k1 } else { k };
                    cfg.data[cell] = DataSymbol::bit(b2 == 1);
                    out.push((cfg, v));
                }
            }
        }
        (a, b) => {
            let col = 2 * bit(a) + bit(b);
            for row in 0..4 {
                let s = u[(row, col)];
                if s.norm() <= 1e-15 {
                    continue;
                }
                let mut cfg = next.clone();
                cfg.data[k] = DataSymbol::bit(row >= 2);
                cfg.data[k1] = DataSymbol::bit(row % 2 == 1);
                out.push((cfg, amps.iter().map(|z| z * s).collect()));
            }
        }
    }
}

/// Parses one three-row rendering (`cursor`, `program`, `data` rows).
pub fn parse_config8(boundary: Boundary8, rows: &[&str]) -> Result<Config8> {
    let field = |row: &str, key: &str| -> Result<Vec<String>> {
        let rest = row
            .strip_prefix(key)
            .ok_or_else(|| parse_err(0, format!("expected `{key}` row")))?;
        Ok(rest.split_whitespace().map(str::to_string).collect())
    };
    if rows.len() != 3 {
        return Err(parse_err(0, format!("expected 3 rows, got {}", rows.len())));
    }
    let cursor = field(rows[0], "cursor")?
        .iter()
        .map(|s| Cursor::from_name(s).ok_or_else(|| parse_err(0, format!("bad cursor `{s}`"))))
        .collect::<Result<Vec<_>>>()?;
    let program = field(rows[1], "program")?
        .iter()
        .map(|s| Prog::from_name(s).ok_or_else(|| parse_err(0, format!("bad program `{s}`"))))
        .collect::<Result<Vec<_>>>()?;
    let data = field(rows[2], "data")?
        .iter()
        .map(|s| match s.as_str() {
            "0" => Ok(DataSymbol::Zero),
            "1" => Ok(DataSymbol::One),
            w => w
                .strip_prefix('w')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .map(|i| DataSymbol::Qubit(i - 1))
                .ok_or_else(|| parse_err(0, format!("bad data `{w}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Config8::new(boundary, cursor, program, data).map_err(|e| parse_err(0, e.to_string()))
}

/// Parses a dump of `[t]` headers each followed by three rows.
pub fn parse_dump8(boundary: Boundary8, text: &str) -> Result<Vec<(usize, Config8)>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    let mut out = Vec::new();
    for chunk in lines.chunks(4) {
        let (line, header) = chunk[0];
        let t = header
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(line, format!("expected `[t]`, got `{header}`")))?;
        let rows: Vec<&str> = chunk[1..].iter().map(|(_, l)| *l).collect();
        let c = parse_config8(boundary, &rows).map_err(|e| match e {
            Error::Parse { message, .. } => parse_err(line, message),
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcircuit::{simulate_circuit, QubitState};
    use proptest::prelude::*;

    fn example_circuit() -> Circuit {
        Circuit::from_rounds(
            3,
            vec![vec![Gate::w(), Gate::s()], vec![Gate::s(), Gate::w()]],
        )
        .unwrap()
    }

    fn names(p: &[Prog]) -> String {
        p.iter().map(|x| x.name()).collect::<Vec<_>>().join(" ")
    }

    fn data(d: &[DataSymbol]) -> String {
        d.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn layouts() {
        let l = program_layout(&example_circuit()).unwrap();
        assert_eq!(names(l.program()), "I W S I I S W I");
        assert_eq!(data(l.data()), "0 1 0 0 0 1 w1 w2 w3 1 0 0 0 1 0");
        assert_eq!(l.program_start(), 6);

        let l = program_layout(&Circuit::from_rounds(2, vec![vec![Gate::w()]]).unwrap()).unwrap();
        assert_eq!(names(l.program()), "I W I");
        assert_eq!(data(l.data()), "0 1 w1 w2 1 0");

        // n = 3, R = 3: every round contributes n + 1 instructions and the
        // scaffold 1s are spaced n + 1 apart.
        let l = program_layout(&Circuit::identity(3, 3).unwrap()).unwrap();
        assert_eq!(l.program().len(), 12);
        let ones: Vec<usize> = (0..l.cells())
            .filter(|&i| l.data()[i] == DataSymbol::One)
            .collect();
        assert_eq!(ones, vec![1, 5, 9, 13, 17, 21]);
        assert_eq!(l.cells(), 2 * 2 * 4 + 3 + 4);
    }

    #[test]
    fn unsupported_gates_are_rejected() {
        let c = Circuit::from_rounds(2, vec![vec![Gate::cx()]]).unwrap();
        assert!(matches!(
            program_layout(&c),
            Err(Error::UnsupportedGate { .. })
        ));
    }

    #[test]
    fn initial_configs() {
        let m = Ham8::new(&Circuit::from_rounds(2, vec![vec![Gate::w()]]).unwrap()).unwrap();
        let c = m.initial_config();
        assert_eq!(c.cells(), 6);
        let movl: Vec<usize> = (0..6).filter(|&k| c.cursor()[k] != Cursor::Star).collect();
        assert_eq!(movl, vec![5]);
        assert_eq!(c.cursor()[5], Cursor::Movl);

        let p = Ham8::with_options(
            &Circuit::from_rounds(2, vec![vec![Gate::w()]]).unwrap(),
            Boundary8::PeriodicX,
            RuleTable8::standard(),
        )
        .unwrap();
        let c = p.initial_config();
        assert_eq!(c.cells(), 7);
        assert_eq!(
            (c.cursor()[6], c.program()[6], c.data()[6]),
            (Cursor::X, Prog::I, DataSymbol::Zero)
        );
    }

    #[test]
    fn published_step_rules() {
        let m = Ham8::new(&example_circuit()).unwrap();
        let h = m.enumerate_history().unwrap();
        assert_eq!(h.transitions(), 154);
        assert_eq!(h.rules()[0], "1a");
        assert_eq!(h.rules()[1], "1c");
        assert_eq!(h.rules()[9], "1b");
        assert_eq!(h.rules()[12], "4a");
        assert!(m.forward_step(h.config(154)).unwrap().is_none());
        let back = m.backward_step(h.config(13)).unwrap().unwrap();
        assert_eq!(&back.config, h.config(12));
        assert_eq!(back.event.unwrap().direction, Direction::Backward);
        assert_eq!(
            &m.backward_step(h.config(42)).unwrap().unwrap().config,
            h.config(41)
        );
    }

    #[test]
    fn final_configuration_shape() {
        let m = Ham8::new(&example_circuit()).unwrap();
        let h = m.enumerate_history().unwrap();
        let last = h.config(154);
        assert_eq!(last.cursor()[0], Cursor::Movle);
        assert!(last.cursor()[1..].iter().all(|&c| c == Cursor::Star));
        assert_eq!(names(&last.program()[1..9]), "I W S I I S W I");
        assert_eq!(last.data(), m.layout().data());
    }

    #[test]
    fn events_reproduce_direct_simulation() {
        let circuit = example_circuit();
        let m = Ham8::new(&circuit).unwrap();
        let h = m.enumerate_history().unwrap();
        for bits in ["000", "101", "110", "011"] {
            let s0 = QubitState::from_bits(bits).unwrap();
            let via = h.qubit_state_at(&s0, h.transitions());
            let direct = simulate_circuit(&circuit, &s0).unwrap();
            assert!(via.max_abs_diff(&direct) <= 1e-9);
        }
        // Both passes fire all eight instructions; only the ω block is logical.
        let logical: Vec<(Option<(usize, usize)>, String)> = h
            .gate_events()
            .filter(|e| e.is_logical())
            .map(|e| (e.slot, e.label.clone()))
            .collect();
        assert_eq!(h.gate_events().count(), 16);
        assert_eq!(
            logical,
            vec![
                (None, "I".into()),
                (Some((0, 0)), "W".into()),
                (Some((0, 1)), "S".into()),
                (None, "I".into()),
                (None, "I".into()),
                (Some((1, 0)), "S".into()),
                (Some((1, 1)), "W".into()),
                (None, "I".into()),
            ]
        );
    }

    #[test]
    fn step_count_formula() {
        for n in 2..=4 {
            for r in 1..=3 {
                let m = Ham8::new(&Circuit::identity(n, r).unwrap()).unwrap();
                assert_eq!(
                    m.enumerate_history().unwrap().transitions(),
                    transitions8(n, r)
                );
            }
        }
        for n in 2..=6 {
            assert_eq!(transitions8(n, 1), 6 + (n + 1) * 4);
        }
    }

    #[test]
    fn periodic_boundary_matches_open() {
        for (n, r) in [(2, 1), (3, 2), (2, 3)] {
            let c = Circuit::identity(n, r).unwrap();
            let open = Ham8::new(&c).unwrap().enumerate_history().unwrap();
            let p = Ham8::with_options(&c, Boundary8::PeriodicX, RuleTable8::standard()).unwrap();
            let h = p.enumerate_history().unwrap();
            assert_eq!(h.transitions(), open.transitions());
            let x = h.config(0).cells() - 1;
            assert!(h.configs().iter().all(|c| c.cursor()[x] == Cursor::X));
            assert!(h.configs().iter().all(|c| c.program()[x] == Prog::I));
            assert!(p.backward_step(h.config(0)).unwrap().is_none());
        }
    }

    #[test]
    fn gate_reduction_cases() {
        let w = Gate::w();
        let (t, m) = reduce_gate(
            "W",
            w.matrix(),
            DataSymbol::One,
            DataSymbol::Qubit(0),
            (0, 1),
        )
        .unwrap();
        assert_eq!(t, vec![0]);
        assert!(m.max_abs_diff(Gate::hy().matrix()).unwrap() < 1e-15);
        let (t, m) = reduce_gate(
            "W",
            w.matrix(),
            DataSymbol::Zero,
            DataSymbol::Qubit(2),
            (0, 1),
        )
        .unwrap();
        assert_eq!(t, vec![2]);
        assert!(m.is_identity(1e-15));
        let (t, _) = reduce_gate(
            "S",
            Gate::s().matrix(),
            DataSymbol::Zero,
            DataSymbol::Zero,
            (0, 1),
        )
        .unwrap();
        assert!(t.is_empty());
        assert!(reduce_gate(
            "S",
            Gate::s().matrix(),
            DataSymbol::One,
            DataSymbol::Zero,
            (3, 4)
        )
        .is_err());
        assert!(reduce_gate(
            "S",
            Gate::s().matrix(),
            DataSymbol::One,
            DataSymbol::Qubit(0),
            (3, 4)
        )
        .is_err());
        assert!(reduce_gate("W", w.matrix(), DataSymbol::One, DataSymbol::Zero, (3, 4)).is_err());
        // W with the placeholder as control and a 0 target is still disturbing.
        assert!(reduce_gate(
            "W",
            w.matrix(),
            DataSymbol::Qubit(0),
            DataSymbol::Zero,
            (3, 4)
        )
        .is_err());
    }

    #[test]
    fn turn_rule_reading_a_placeholder_is_reported() {
        // TUR between two empty cells whose right data cell is ω.
        let c = Config8::new(
            Boundary8::Open,
            vec![Cursor::Tur, Cursor::Star, Cursor::Star],
            vec![Prog::Bul; 3],
            vec![DataSymbol::One, DataSymbol::Qubit(0), DataSymbol::Zero],
        )
        .unwrap();
        let m = Ham8::new(&Circuit::identity(2, 1).unwrap()).unwrap();
        assert!(matches!(
            m.successors(&c, Direction::Forward),
            Err(Error::PlaceholderConditioned {
                rule: "3a",
                cell: 1
            })
        ));
    }

    #[test]
    fn dump_round_trips() {
        let m = Ham8::new(&Circuit::from_rounds(2, vec![vec![Gate::w()]]).unwrap()).unwrap();
        let h = m.enumerate_history().unwrap();
        assert_eq!(h.transitions(), 18);
        let text = crate::machine::dump_history(&m, &h);
        let parsed = parse_dump8(Boundary8::Open, &text).unwrap();
        assert_eq!(parsed.len(), 19);
        for (t, c) in parsed {
            assert_eq!(h.index_of(&c), Some(t));
        }
        assert!(parse_dump8(Boundary8::Open, "[0]\ncursor STAR\nprogram BUL\ndata 2\n").is_err());
    }

    #[test]
    fn term_templates() {
        let m = Ham8::new(&example_circuit()).unwrap();
        let terms = m.local_terms();
        let t1a = terms.iter().find(|t| t.rule == "1a").unwrap();
        assert!(t1a.gate.is_none() && t1a.reads.is_none());
        let t3a = terms.iter().find(|t| t.rule == "3a").unwrap();
        assert_eq!(t3a.reads, Some((Side::Right, true)));
        let w_fwd = terms
            .iter()
            .find(|t| {
                t.rule == "4a"
                    && t.direction == Direction::Forward
                    && matches!(
                        t.shape,
                        TermShape::B {
                            input: (_, _, Prog::W),
                            ..
                        }
                    )
            })
            .unwrap();
        assert!(
            w_fwd
                .gate
                .as_ref()
                .unwrap()
                .max_abs_diff(Gate::w().matrix())
                .unwrap()
                < 1e-15
        );
        // 5 type-A rules, 4 unshifted type-B rules, 2 shift rules × 3 instructions.
        assert_eq!(terms.len(), 2 * (5 + 4 + 2 * 3));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn histories_are_unique_reversible_and_distinct(n in 2usize..=4, r in 1usize..=3, seed in 0u64..1000) {
            let mut c = Circuit::identity(n, r).unwrap();
            let mut s = seed;
            for round in 0..r {
                for i in 0..n - 1 {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let g = [Gate::i2(), Gate::w(), Gate::s()][(s >> 33) as usize % 3].clone();
                    c.set(round, i, g).unwrap();
                }
            }
            let m = Ham8::new(&c).unwrap();
            let h = m.enumerate_history().unwrap();
            let last = h.transitions();
            for (t, cfg) in h.configs().iter().enumerate() {
                let fwd = m.successors(cfg, Direction::Forward).unwrap();
                let bwd = m.successors(cfg, Direction::Backward).unwrap();
                prop_assert_eq!(fwd.len(), usize::from(t < last));
                prop_assert_eq!(bwd.len(), usize::from(t > 0));
                prop_assert_eq!(cfg.cursor().iter().filter(|&&x| x != Cursor::Star).count(), 1);
                if let Some(f) = fwd.first() {
                    prop_assert_eq!(&m.backward_step(&f.config).unwrap().unwrap().config, cfg);
                }
            }
            let s0 = QubitState::from_bits(&"10".repeat(n)[..n]).unwrap();
            let via = h.qubit_state_at(&s0, last);
            let direct = simulate_circuit(&c, &s0).unwrap();
            prop_assert!(via.max_abs_diff(&direct) <= 1e-9);
        }
    }
}
