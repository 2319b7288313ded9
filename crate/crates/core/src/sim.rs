//! Bit-exact evaluation of circuits on basis states.
//!
//! Single inputs go through [`State`], a packed multi-word bit vector.
//! Exhaustive sweeps use a bit-sliced engine: each wire holds a `u64` whose
//! lane `j` is the wire's value for input `base + j`, so one pass over the
//! gate list evaluates 64 inputs. Blocks of 64 inputs are independent and
//! are evaluated in parallel.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Wire};
use crate::table::TruthTable;

/// Largest `n` accepted by the exhaustive sweeps.
pub const EXHAUSTIVE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("wire {wire} out of range for state width {width}")]
    IndexOutOfRange { wire: Wire, width: usize },
    #[error("expected {expected} significant bits, got {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("n = {0} exceeds the exhaustive simulation cap of {EXHAUSTIVE_CAP}")]
    TooLarge(usize),
    #[error("probe point {probe} past the end of a {len}-gate circuit")]
    ProbeOutOfRange { probe: usize, len: usize },
}

/// One bit per wire, packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    width: usize,
    words: Vec<u64>,
}

impl State {
    pub fn zeros(width: usize) -> Self {
        State {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    /// Parses a string of `0`/`1`, wire 0 first.
    pub fn from_bits(bits: &str) -> Option<Self> {
        let mut s = State::zeros(bits.len());
        for (i, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => s.set(i, true),
                _ => return None,
            }
        }
        Some(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, wire: Wire) -> bool {
        (self.words[wire / 64] >> (wire % 64)) & 1 == 1
    }

    pub fn set(&mut self, wire: Wire, value: bool) {
        let bit = 1u64 << (wire % 64);
        if value {
            self.words[wire / 64] |= bit;
        } else {
            self.words[wire / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, wire: Wire) {
        self.words[wire / 64] ^= 1u64 << (wire % 64);
    }

    /// Reads `wires` as a word, first wire most significant.
    pub fn read_word(&self, wires: &[Wire]) -> u64 {
        wires
            .iter()
            .fold(0, |acc, &w| (acc << 1) | u64::from(self.get(w)))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in 0..self.width {
            f.write_str(if self.get(w) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Target bit ^= AND of control bits.
pub fn apply_gate(state: &mut State, gate: &Gate) -> Result<(), SimError> {
    if let Some(wire) = gate.support().find(|&w| w >= state.width) {
        return Err(SimError::IndexOutOfRange {
            wire,
            width: state.width,
        });
    }
    if gate.controls().iter().all(|&c| state.get(c)) {
        state.flip(gate.target());
    }
    Ok(())
}

/// Runs the circuit on `input` (one bit per significant input, `x1` first);
/// every other wire starts at 0.
pub fn run(circuit: &Circuit, input: &[bool]) -> Result<State, SimError> {
    if input.len() != circuit.n() {
        return Err(SimError::WidthMismatch {
            expected: circuit.n(),
            found: input.len(),
        });
    }
    let mut state = State::zeros(circuit.width());
    for (&w, &b) in circuit.input_wires().iter().zip(input) {
        state.set(w, b);
    }
    for g in circuit.gates() {
        apply_gate(&mut state, g)?;
    }
    Ok(state)
}

/// [`run`] with the input given as an `n`-bit word, `x1` most significant.
pub fn run_word(circuit: &Circuit, input: u64) -> Result<State, SimError> {
    let n = circuit.n();
    if n < 64 && input >> n != 0 {
        return Err(SimError::WidthMismatch {
            expected: n,
            found: 64 - input.leading_zeros() as usize,
        });
    }
    let bits: Vec<bool> = (0..n).map(|i| (input >> (n - 1 - i)) & 1 == 1).collect();
    run(circuit, &bits)
}

/// What a wire was observed to hold at the end of an exhaustive sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FinalBit {
    AlwaysZero,
    AlwaysOne,
    Varies,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: u64,
    pub expected: u64,
    pub actual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
    /// Final contents of every wire that is neither a significant input nor an output.
    pub ancilla_final: BTreeMap<Wire, FinalBit>,
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Bit-sliced values of every wire after the first `prefix` gates, for the
/// inputs `base..base+64` (or fewer when `2^n < 64`).
fn simulate_block(circuit: &Circuit, prefix: usize, base: u64) -> Vec<u64> {
    let n = circuit.n();
    let mut v = vec![0u64; circuit.width()];
    for (i, &w) in circuit.input_wires().iter().enumerate() {
        let b = n - 1 - i;
        v[w] = if b < 6 {
            LANE_PATTERNS[b]
        } else if (base >> b) & 1 == 1 {
            u64::MAX
        } else {
            0
        };
    }
    for g in &circuit.gates()[..prefix] {
        match *g {
            Gate::Not { target } => v[target] = !v[target],
            Gate::Cnot { control, target } => v[target] ^= v[control],
            Gate::Ccnot { controls, target } => v[target] ^= v[controls[0]] & v[controls[1]],
        }
    }
    v
}

fn lane_layout(n: usize) -> (u64, usize, u64) {
    let total = 1u64 << n;
    if total >= 64 {
        (total / 64, 64, u64::MAX)
    } else {
        (1, total as usize, (1u64 << total) - 1)
    }
}

/// Evaluates `f` on every 64-input block, in parallel, returning results in
/// block order.
fn sweep_blocks<R, F>(circuit: &Circuit, prefix: usize, f: F) -> Result<Vec<R>, SimError>
where
    R: Send,
    F: Fn(u64, usize, u64, &[u64]) -> R + Sync,
{
    let n = circuit.n();
    if n > EXHAUSTIVE_CAP {
        return Err(SimError::TooLarge(n));
    }
    if prefix > circuit.gates().len() {
        return Err(SimError::ProbeOutOfRange {
            probe: prefix,
            len: circuit.gates().len(),
        });
    }
    let (blocks, lanes, mask) = lane_layout(n);
    Ok((0..blocks)
        .into_par_iter()
        .map(|b| {
            let base = b * 64;
            let v = simulate_block(circuit, prefix, base);
            f(base, lanes, mask, &v)
        })
        .collect())
}

/// `entry[x]` = word read on the output wires after running on `x`, for every `x`.
pub fn extract_transformation(circuit: &Circuit) -> Result<TruthTable, SimError> {
    let n = circuit.n();
    if circuit.output_wires().len() != n {
        return Err(SimError::WidthMismatch {
            expected: n,
            found: circuit.output_wires().len(),
        });
    }
    let outs = circuit.output_wires();
    let blocks = sweep_blocks(circuit, circuit.gates().len(), |_, lanes, _, v| {
        (0..lanes)
            .map(|j| {
                outs.iter()
                    .fold(0u64, |acc, &w| (acc << 1) | ((v[w] >> j) & 1))
            })
            .collect::<Vec<u64>>()
    })?;
    let entries = blocks.into_iter().flatten().collect();
    Ok(TruthTable::new(n, entries).expect("extracted table is well formed"))
}

/// Per-wire summary of the values observed after the first `probe` gates.
pub fn wire_summaries_at(circuit: &Circuit, probe: usize) -> Result<Vec<FinalBit>, SimError> {
    let width = circuit.width();
    let blocks = sweep_blocks(circuit, probe, |_, _, mask, v| {
        v.iter()
            .map(|&x| (x & mask != 0, !x & mask != 0))
            .collect::<Vec<_>>()
    })?;
    let mut seen = vec![(false, false); width];
    for block in blocks {
        for (acc, (one, zero)) in seen.iter_mut().zip(block) {
            acc.0 |= one;
            acc.1 |= zero;
        }
    }
    Ok(seen
        .into_iter()
        .map(|(one, zero)| match (one, zero) {
            (true, true) => FinalBit::Varies,
            (true, false) => FinalBit::AlwaysOne,
            _ => FinalBit::AlwaysZero,
        })
        .collect())
}

/// Compares the realized transformation with `tt` on every input.
pub fn verify_against(circuit: &Circuit, tt: &TruthTable) -> Result<VerificationReport, SimError> {
    if tt.n() != circuit.n() {
        return Err(SimError::WidthMismatch {
            expected: circuit.n(),
            found: tt.n(),
        });
    }
    let actual = extract_transformation(circuit)?;
    let mismatches: Vec<Mismatch> = tt
        .entries()
        .iter()
        .zip(actual.entries())
        .enumerate()
        .filter(|(_, (e, a))| e != a)
        .map(|(x, (&expected, &actual))| Mismatch {
            input: x as u64,
            expected,
            actual,
        })
        .collect();
    let summaries = wire_summaries_at(circuit, circuit.gates().len())?;
    let ancilla_final = (0..circuit.width())
        .filter(|w| !circuit.input_wires().contains(w) && !circuit.output_wires().contains(w))
        .map(|w| (w, summaries[w]))
        .collect();
    Ok(VerificationReport {
        passed: mismatches.is_empty(),
        mismatches,
        ancilla_final,
    })
}

/// True iff, for every input `x`, `wire` holds `predicate(x)` after the first
/// `probe` gates.
pub fn wire_predicate_check<P>(
    circuit: &Circuit,
    wire: Wire,
    predicate: P,
    probe: usize,
) -> Result<bool, SimError>
where
    P: Fn(u64) -> bool + Sync,
{
    if wire >= circuit.width() {
        return Err(SimError::IndexOutOfRange {
            wire,
            width: circuit.width(),
        });
    }
    let ok = sweep_blocks(circuit, probe, |base, lanes, _, v| {
        (0..lanes).all(|j| ((v[wire] >> j) & 1 == 1) == predicate(base + j as u64))
    })?;
    Ok(ok.into_iter().all(|b| b))
}

/// True iff every wire in `wires` reads 0 after the first `probe` gates, for every input.
pub fn wires_clean_at(circuit: &Circuit, wires: &[Wire], probe: usize) -> Result<bool, SimError> {
    let ok = sweep_blocks(circuit, probe, |_, _, mask, v| {
        wires.iter().all(|&w| v[w] & mask == 0)
    })?;
    Ok(ok.into_iter().all(|b| b))
}
