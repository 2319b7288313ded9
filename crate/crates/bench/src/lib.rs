//! Fixtures shared by the criterion benches.

use revsynth_core::synth::minimal_budget;
use revsynth_core::{synthesize, Circuit, Overrides, Strategy, TruthTable};

pub const SEED: u64 = 0x5eed;

/// Random table for `n` and the budget `max(minimal, 8n + 1)`.
pub fn fixture(n: usize) -> (TruthTable, usize) {
    let q = minimal_budget(n, Strategy::MinimizeT2, &Overrides::default())
        .expect("n >= 2")
        .max(8 * n + 1);
    (TruthTable::random(n, SEED + n as u64), q)
}

pub fn synthesized(n: usize) -> Circuit {
    let (tt, q) = fixture(n);
    synthesize(&tt, q, Strategy::MinimizeT2, &Overrides::default())
        .expect("fixture budget is feasible")
        .0
}
