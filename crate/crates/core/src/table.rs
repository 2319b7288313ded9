//! Truth tables of transformations `Z_2^n -> Z_2^n`.
//!
//! Bit convention: a word encodes `<x1, ..., xn>` with `x1` as the most
//! significant of its `n` bits. Row `x` of a table holds `f(x)` encoded the
//! same way, so the identity table has `entries[x] == x`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest `n` a table may have.
pub const MAX_TABLE_VARS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table needs 2^{n} = {expected} entries, got {found}")]
    WrongLength { n: usize, expected: usize, found: usize },
    #[error("entry {index} = {value:#x} does not fit in {n} bits")]
    EntryTooWide { index: usize, value: u64, n: usize },
    #[error("n = {0} is outside the supported range 1..={MAX_TABLE_VARS}")]
    BadArity(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    entries: Vec<u64>,
}

impl TruthTable {
    pub fn new(n: usize, entries: Vec<u64>) -> Result<Self, TableError> {
        if n == 0 || n > MAX_TABLE_VARS {
            return Err(TableError::BadArity(n));
        }
        let expected = 1usize << n;
        if entries.len() != expected {
            return Err(TableError::WrongLength {
                n,
                expected,
                found: entries.len(),
            });
        }
        let mask = word_mask(n);
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v & !mask != 0) {
            return Err(TableError::EntryTooWide { index, value, n });
        }
        Ok(TruthTable { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> u64) -> Result<Self, TableError> {
        let entries = (0..1u64 << n).map(f).collect();
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |x| x).expect("identity is well formed")
    }

    pub fn constant_zero(n: usize) -> Self {
        Self::from_fn(n, |_| 0).expect("constant is well formed")
    }

    /// `<x1, ..., xn> -> <xn, ..., x1>`.
    pub fn bit_reversal(n: usize) -> Self {
        Self::from_fn(n, |x| reverse_bits(x, n)).expect("bit reversal is well formed")
    }

    /// `2^n` independent words drawn as `rng.next_u64() & (2^n - 1)` from
    /// ChaCha8 seeded with `seed_from_u64(seed)`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_from(n, &mut rng)
    }

    pub fn random_from(n: usize, rng: &mut impl RngCore) -> Self {
        let mask = word_mask(n);
        let entries = (0..1usize << n).map(|_| rng.next_u64() & mask).collect();
        Self::new(n, entries).expect("masked words are well formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, x: u64) -> u64 {
        self.entries[x as usize]
    }

    /// `f_i(x)` for the 0-based output index `i` (output `i` is bit `n-1-i`).
    pub fn output_bit(&self, x: u64, i: usize) -> bool {
        (self.entries[x as usize] >> (self.n - 1 - i)) & 1 == 1
    }
}

pub(crate) fn word_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn reverse_bits(x: u64, n: usize) -> u64 {
    (0..n).fold(0, |acc, b| acc | (((x >> b) & 1) << (n - 1 - b)))
}
