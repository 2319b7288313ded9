//! Parameter sweeps over `(n, q, strategy)` with CSV output.
//!
//! Each `n` gets one random table, `TruthTable::random(n, table_seed(seed, n))`.
//! Points run in parallel; rows come back in grid order.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bounds;
use crate::sim::{self, EXHAUSTIVE_CAP};
use crate::synth::{full_storage_budget, synthesize, Overrides, Strategy, SynthError};
use crate::table::TruthTable;

pub const CSV_HEADER: &str = "n,q,strategy,k,s,L,D,Q,t1,t2,t3,L_bound,D_bound,valid";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QGrid {
    Explicit(Vec<usize>),
    /// `8n + 1` up to [`full_storage_budget`], evenly spaced.
    Auto { points: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub n_list: Vec<usize>,
    pub q_grid: QGrid,
    pub strategies: Vec<Strategy>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub q: usize,
    pub strategy: Strategy,
    pub k: usize,
    pub s: usize,
    pub gate_count: usize,
    pub depth: usize,
    pub ancilla: usize,
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
    pub l_bound: f64,
    pub d_bound: f64,
    /// Verified, within budget, and `q > 8n` (where the whole-circuit bounds apply).
    pub valid: bool,
    pub verified: bool,
}

pub fn table_seed(seed: u64, n: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(n as u64)
}

pub fn auto_grid(n: usize, points: usize) -> Vec<usize> {
    let lo = 8 * n + 1;
    let hi = full_storage_budget(n).max(lo);
    let points = points.max(2);
    let mut grid: Vec<usize> = (0..points)
        .map(|i| lo + (hi - lo) * i / (points - 1))
        .collect();
    grid.dedup();
    grid
}

pub fn grid_for(cfg: &BenchConfig, n: usize) -> Vec<usize> {
    match &cfg.q_grid {
        QGrid::Explicit(qs) => qs.clone(),
        QGrid::Auto { points } => auto_grid(n, *points),
    }
}

fn run_point(tt: &TruthTable, q: usize, strategy: Strategy) -> Result<BenchRow, SynthError> {
    let n = tt.n();
    let (circuit, report) = synthesize(tt, q, strategy, &Overrides::default())?;
    let verified = n <= EXHAUSTIVE_CAP
        && sim::verify_against(&circuit, tt).is_ok_and(|r| r.passed);
    let (nn, qq) = (n as u64, q as u64);
    let lb = bounds::l_shannon_upper(nn, qq);
    let db = bounds::d_shannon_upper(nn, qq);
    Ok(BenchRow {
        n,
        q,
        strategy,
        k: report.params.k,
        s: report.params.s,
        gate_count: report.gate_count,
        depth: report.depth,
        ancilla: report.ancilla,
        t1: report.t1,
        t2: report.t2,
        t3: report.t3,
        l_bound: lb.value,
        d_bound: db.value,
        valid: verified && report.ancilla <= q && lb.valid,
        verified,
    })
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, SynthError> {
    let mut points = Vec::new();
    for &n in &cfg.n_list {
        let tt = TruthTable::random(n, table_seed(cfg.seed, n));
        for q in grid_for(cfg, n) {
            for &strategy in &cfg.strategies {
                points.push((tt.clone(), q, strategy));
            }
        }
    }
    points
        .into_par_iter()
        .map(|(tt, q, strategy)| run_point(&tt, q, strategy))
        .collect()
}

fn fmt_bound(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3}")
    } else {
        "inf".to_string()
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.q,
            r.strategy.number(),
            r.k,
            r.s,
            r.gate_count,
            r.depth,
            r.ancilla,
            r.t1,
            r.t2,
            r.t3,
            fmt_bound(r.l_bound),
            fmt_bound(r.d_bound),
            r.valid
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchConfig {
        BenchConfig {
            n_list: vec![4],
            q_grid: QGrid::Explicit(vec![33, 40, 64, 128]),
            strategies: Strategy::ALL.to_vec(),
            seed: 5,
        }
    }

    #[test]
    fn eight_rows_all_verified() {
        let rows = run_bench(&small()).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.verified && r.valid));
        let qs: Vec<_> = rows.iter().map(|r| (r.q, r.strategy.number())).collect();
        assert_eq!(qs[..3], [(33, 1), (33, 2), (40, 1)]);
    }

    #[test]
    fn csv_is_reproducible() {
        let a = to_csv(&run_bench(&small()).unwrap());
        let b = to_csv(&run_bench(&small()).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
    }

    #[test]
    fn small_budgets_flagged() {
        let cfg = BenchConfig {
            q_grid: QGrid::Explicit(vec![20, 32]),
            ..small()
        };
        let rows = run_bench(&cfg).unwrap();
        assert!(rows.iter().all(|r| r.verified && !r.valid));
        assert!(to_csv(&rows).contains(",inf,inf,false"));
    }

    #[test]
    fn auto_grid_spans_range() {
        let g = auto_grid(6, 8);
        assert_eq!(g[0], 49);
        assert_eq!(*g.last().unwrap(), full_storage_budget(6).max(49));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
