// Copyright 2026 The hqc1d Developers
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage,
//! parse or compatibility errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::ham5::{transitions5, Ham5};
use crate::ham8::{transitions8, Boundary8, Ham8, RuleTable8};
use crate::machine::{dump_history, Machine, Scheme};
use crate::oracle::certify_scheme;
use crate::qcircuit::{check_all_identities, parse_circuit, synth, Circuit, Gate};
use crate::runner::{run as run_plan, RunPlan};
use crate::walk::{avg_csv, default_tau0, evolve_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hqc1d",
    version,
    about = "One-dimensional Hamiltonian quantum computer simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the full history of a circuit.
    Trace(TraceArgs),
    /// Emit walk probabilities as CSV.
    Evolve(EvolveArgs),
    /// Run the random-time measurement protocol.
    Sample(SampleArgs),
    /// Run the built-in verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Circuit file.
    pub circuit: PathBuf,
    #[arg(long, default_value = "ham5")]
    pub scheme: Scheme,
    /// Close the 8-state lattice with the X boundary cell.
    #[arg(long)]
    pub periodic: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Number of transitions T.
    #[arg(long, conflicts_with = "circuit", required_unless_present = "circuit")]
    pub transitions: Option<usize>,
    /// Take T from this circuit's history instead.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long, default_value = "ham5")]
    pub scheme: Scheme,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub tau: Vec<f64>,
    /// `start:stop:count`, evenly spaced and inclusive.
    #[arg(long)]
    pub grid: Option<String>,
    /// Emit the time-averaged distribution `(m, avg_p)` instead.
    #[arg(long)]
    pub average: bool,
    /// Averaging horizon for `--average`; defaults to 10·T·ln(T+2).
    #[arg(long)]
    pub tau0: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    pub circuit: PathBuf,
    #[arg(long, default_value = "ham5")]
    pub scheme: Scheme,
    #[arg(long, default_value_t = 6)]
    pub q: usize,
    #[arg(long)]
    pub tau0: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[arg(long)]
    pub seed: u64,
    /// Initial basis state, qubit 1 first; all zeros by default.
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Identities,
    Subspace,
    Formulas,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub scope: Scope,
    /// Drop one transition rule from the term tables.
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Trace(a) => cmd_trace(a).map(|s| (s, true)),
        Command::Evolve(a) => cmd_evolve(a).map(|s| (s, true)),
        Command::Sample(a) => cmd_sample(a).map(|s| (s, true)),
        Command::Verify(a) => Ok(cmd_verify(a)),
    };
    let out = match &cli.command {
        Command::Trace(a) => a.out.as_deref(),
        Command::Evolve(a) => a.out.as_deref(),
        Command::Sample(a) => a.out.as_deref(),
        Command::Verify(a) => a.out.as_deref(),
    };
    match result {
        Ok((text, ok)) => {
            if let Err(e) = emit(out, &text, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::UnsupportedGate { .. }
        | Error::InvalidTarget { .. }
        | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    parse_circuit(&fs::read_to_string(path)?)
}

fn same(a: &Gate, b: &Gate) -> bool {
    a.matrix()
        .max_abs_diff(b.matrix())
        .is_ok_and(|d| d <= 1e-12)
}

/// Gates for one slot of the 8-state program, in application order.
fn lower_slot(g: &Gate) -> Result<Vec<Gate>> {
    let unsupported = || Error::UnsupportedGate {
        gate: g.label().to_string(),
        scheme: "ham8",
    };
    let pair = g.promote_to_pair().map_err(|_| unsupported())?;
    if [Gate::i2(), Gate::w(), Gate::s()]
        .iter()
        .any(|n| same(&pair, n))
    {
        return Ok(vec![pair]);
    }
    let ops = |name: &str| -> Result<Vec<Gate>> {
        Ok(synth(name)?.ops().iter().map(|(g, _)| g.clone()).collect())
    };
    if same(&pair, &Gate::cx()) {
        return ops("CX");
    }
    // The W/S sequence yields I⊗Z; swapping around it moves Z to the left.
    if same(&pair, &Gate::z().promote_to_pair()?) {
        let mut seq = vec![Gate::s()];
        seq.extend(ops("Z")?);
        seq.push(Gate::s());
        return Ok(seq);
    }
    Err(unsupported())
}

/// Rewrites `CX` and `Z` slots into `W`/`S` rounds so the 8-state machine can
/// run them. Rounds are split so that gates on overlapping pairs keep their
/// order. `H`, `X` and `Y` would need an ancilla and are rejected.
pub fn lower_for_ham8(circuit: &Circuit) -> Result<Circuit> {
    let n = circuit.qubits();
    let per = n - 1;
    let mut rounds: Vec<Vec<Gate>> = Vec::new();
    for r in 0..circuit.rounds() {
        let mut current = vec![Gate::i2(); per];
        let mut dirty = false;
        for p in 0..per {
            let seq = lower_slot(circuit.get(r, p))?;
            if let [single] = seq.as_slice() {
                current[p] = single.clone();
                dirty = true;
                continue;
            }
            if dirty {
                rounds.push(std::mem::replace(&mut current, vec![Gate::i2(); per]));
                dirty = false;
            }
            for g in seq {
                let mut round = vec![Gate::i2(); per];
                round[p] = g;
                rounds.push(round);
            }
        }
        if dirty {
            rounds.push(current);
        }
    }
    Circuit::from_rounds(n, rounds)
}

fn cmd_trace(a: &TraceArgs) -> Result<String> {
    let circuit = load_circuit(&a.circuit)?;
    match a.scheme {
        Scheme::Ham5 => {
            if a.periodic {
                return Err(Error::InvalidArgument(
                    "--periodic applies to ham8 only".into(),
                ));
            }
            let m = Ham5::new(&circuit)?;
            Ok(dump_history(&m, &m.enumerate_history()?))
        }
        Scheme::Ham8 => {
            let boundary = if a.periodic {
                Boundary8::PeriodicX
            } else {
                Boundary8::Open
            };
            let m =
                Ham8::with_options(&lower_for_ham8(&circuit)?, boundary, RuleTable8::standard())?;
            Ok(dump_history(&m, &m.enumerate_history()?))
        }
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("bad grid `{spec}`, expected start:stop:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, k] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    if k == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if k == 1 {
        return Ok(vec![a]);
    }
    Ok((0..k)
        .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
        .collect())
}

fn history_length(circuit: &Circuit, scheme: Scheme) -> Result<usize> {
    Ok(match scheme {
        Scheme::Ham5 => Ham5::new(circuit)?.enumerate_history()?.transitions(),
        Scheme::Ham8 => Ham8::new(&lower_for_ham8(circuit)?)?
            .enumerate_history()?
            .transitions(),
    })
}

fn cmd_evolve(a: &EvolveArgs) -> Result<String> {
    let t = match (&a.circuit, a.transitions) {
        (Some(path), _) => history_length(&load_circuit(path)?, a.scheme)?,
        (None, Some(t)) => t,
        (None, None) => unreachable!("clap requires one of the two"),
    };
    if a.average {
        let tau0 = a.tau0.unwrap_or_else(|| default_tau0(t));
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tau0 must be positive, got {tau0}"
            )));
        }
        return avg_csv(t, tau0);
    }
    let mut taus = a.tau.clone();
    if let Some(g) = &a.grid {
        taus.extend(parse_grid(g)?);
    }
    if taus.is_empty() {
        return Err(Error::InvalidArgument(
            "no times given; use --tau or --grid".into(),
        ));
    }
    if let Some(bad) = taus.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("time {bad} is not finite")));
    }
    evolve_csv(t, &taus)
}

fn cmd_sample(a: &SampleArgs) -> Result<String> {
    let mut circuit = load_circuit(&a.circuit)?;
    if a.scheme == Scheme::Ham8 {
        circuit = lower_for_ham8(&circuit)?;
    }
    let initial = a
        .initial
        .clone()
        .unwrap_or_else(|| "0".repeat(circuit.qubits()));
    let plan = RunPlan {
        circuit,
        scheme: a.scheme,
        q: a.q,
        tau0: a.tau0,
        shots: a.shots,
        seed: a.seed,
        initial,
    };
    Ok(run_plan(&plan)?.to_string())
}

/// Circuits certified by `verify --scope subspace`.
pub fn subspace_instances() -> Result<Vec<(Scheme, Circuit)>> {
    let ham5 =
        parse_circuit("QUBITS 3\nROUNDS 2\nGATE W 1 1\nGATE S 1 2\nGATE H 2 1\nGATE CX 2 2\n")?;
    let ham8 = parse_circuit("QUBITS 2\nROUNDS 1\nGATE W 1 1\n")?;
    Ok(vec![(Scheme::Ham5, ham5), (Scheme::Ham8, ham8)])
}

fn verify_identities(out: &mut String) -> bool {
    let mut ok = true;
    let mut line = |name: &str, dev: f64| {
        let pass = dev <= 1e-12;
        ok &= pass;
        let _ = writeln!(
            out,
            "identity {name} {dev:.3e} {}",
            if pass { "PASS" } else { "FAIL" }
        );
    };
    for (name, dev) in check_all_identities() {
        line(name, dev);
    }
    let w8 = Gate::w().pow(8).matrix().max_abs_diff(Gate::i2().matrix());
    line("W^8", w8.unwrap_or(f64::INFINITY));
    ok
}

fn verify_subspace(fault: bool, out: &mut String) -> bool {
    let instances = match subspace_instances() {
        Ok(i) => i,
        Err(e) => {
            let _ = writeln!(out, "subspace setup FAIL {e}");
            return false;
        }
    };
    let mut ok = true;
    for (scheme, circuit) in instances {
        match certify_scheme(&circuit, scheme, fault) {
            Ok(report) => {
                out.push_str(&report.to_string());
                let _ = writeln!(
                    out,
                    "subspace {scheme} {} states, {} failed {}",
                    report.lines.len(),
                    report.failures(),
                    if report.passed() { "PASS" } else { "FAIL" }
                );
                ok &= report.passed();
            }
            Err(e) => {
                let _ = writeln!(out, "subspace {scheme} FAIL {e}");
                ok = false;
            }
        }
    }
    ok
}

fn verify_formulas(out: &mut String) -> bool {
    let mut ok = true;
    let mut check = |scheme: Scheme, n: usize, r: usize, engine: Result<usize>, formula: usize| {
        let pass = matches!(engine, Ok(t) if t == formula);
        ok &= pass;
        let shown = engine.map_or_else(|e| e.to_string(), |t| t.to_string());
        let _ = writeln!(
            out,
            "formula {scheme} n={n} R={r} engine={shown} formula={formula} {}",
            if pass { "PASS" } else { "FAIL" }
        );
    };
    for n in 2..=5 {
        for r in 1..=4 {
            let engine = Circuit::identity(n, r)
                .and_then(|c| Ham5::new(&c))
                .and_then(|m| m.enumerate_history())
                .map(|h| h.transitions());
            check(Scheme::Ham5, n, r, engine, transitions5(n, r));
        }
    }
    for n in 2..=4 {
        for r in 1..=3 {
            let engine = Circuit::identity(n, r)
                .and_then(|c| Ham8::new(&c))
                .and_then(|m| m.enumerate_history())
                .map(|h| h.transitions());
            check(Scheme::Ham8, n, r, engine, transitions8(n, r));
        }
    }
    ok
}

fn cmd_verify(a: &VerifyArgs) -> (String, bool) {
    let mut out = String::new();
    let mut ok = true;
    let all = a.scope == Scope::All;
    if all || a.scope == Scope::Identities {
        ok &= verify_identities(&mut out);
    }
    if all || a.scope == Scope::Subspace {
        ok &= verify_subspace(a.inject_fault, &mut out);
    }
    if all || a.scope == Scope::Formulas {
        ok &= verify_formulas(&mut out);
    }
    let _ = writeln!(out, "verify {}", if ok { "PASS" } else { "FAIL" });
    (out, ok)
}
