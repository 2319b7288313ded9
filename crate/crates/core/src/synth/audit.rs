//! Post-synthesis checks: provider gate and depth inequalities, request
//! counts, the ancilla ledger and clean scratch at group boundaries.

use crate::bounds::{d_conj_levels, d_xor_levels, l_conj_levels, l_xor_levels};
use crate::circuit::{Circuit, WireRole};
use crate::sim::{self, SimError};

use super::{Strategy, SynthesisReport};

/// Every inequality the construction guarantees, checked against the
/// recorded counts. Returns a description of each one that fails.
pub fn inequality_violations(report: &SynthesisReport) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            bad.push(what);
        }
    };
    let p = &report.params;
    let (n, k) = (p.n as u64, p.k as u64);
    let suffixes = 1u64 << (n - k);

    check(report.t1 == 1 << (k + 1), format!("t1 = {} != 2^(k+1)", report.t1));
    let t2_cap = match p.strategy {
        Strategy::MinimizeT2 => p.p as u64 * suffixes,
        Strategy::MinimizeT3 => p.p as u64 * n * suffixes,
    };
    check(report.t2 <= t2_cap, format!("t2 = {} > {t2_cap}", report.t2));
    let t3_cap = match p.strategy {
        Strategy::MinimizeT2 => n * suffixes,
        Strategy::MinimizeT3 => 1u64 << p.s,
    };
    for (t, g) in report.groups.iter().enumerate() {
        check(g.t3 <= t3_cap, format!("group {t}: t3 = {} > {t3_cap}", g.t3));
    }

    for name in ["s1", "s2"] {
        let Some(pv) = report.provider(name) else {
            check(false, format!("missing provider {name}"));
            continue;
        };
        let b = pv.budget as u64;
        let l = l_conj_levels(b, pv.r, pv.t);
        let d = d_conj_levels(b, pv.r, pv.t);
        check(pv.emitted <= l, format!("{name}: {} gates > {l}", pv.emitted));
        check(pv.depth as u64 <= d, format!("{name}: depth {} > {d}", pv.depth));
        check(
            pv.wires <= pv.budget + pv.vars - 1,
            format!("{name}: {} wires > q_p + m - 1", pv.wires),
        );
    }
    if let Some(pv) = report.provider("s3") {
        let b = pv.budget as u64;
        check(
            pv.wires <= pv.budget + pv.vars - 1,
            format!("s3: {} wires > q_p + m - 1", pv.wires),
        );
        for (t, g) in report.groups.iter().enumerate() {
            let l = l_xor_levels(b, pv.r, g.t3);
            let d = d_xor_levels(b, pv.r, g.t3);
            check(g.s3_emitted <= l, format!("group {t}: s3 {} gates > {l}", g.s3_emitted));
            check(g.s3_depth as u64 <= d, format!("group {t}: s3 depth {} > {d}", g.s3_depth));
        }
    } else {
        check(false, "missing provider s3".into());
    }

    check(report.ancilla <= report.q, format!("Q = {} > q = {}", report.ancilla, report.q));
    let l4_cap = (p.p * p.n) << (p.n - p.k);
    check(
        report.stages.output <= l4_cap,
        format!("output stage {} > {l4_cap}", report.stages.output),
    );
    check(
        report.stages.total() == report.gate_count,
        format!("stages sum to {} != L = {}", report.stages.total(), report.gate_count),
    );
    bad
}

/// True iff the measured ancilla count fits in `q` and equals the sum of
/// the ledger, with every component matching its allocation rule.
pub fn ancilla_audit(report: &SynthesisReport, q: usize) -> bool {
    let l = &report.ledger;
    let p = &report.params;
    let budgets = p.provider_budgets();
    report.ancilla <= q
        && l.total() == report.ancilla
        && l.negations == p.n
        && l.outputs == p.n
        && l.zero == 1
        && l.holders == p.holders
        && l.s1 <= budgets[0]
        && l.s2 <= budgets[1]
        && l.s3 <= budgets[2]
}

/// Simulates up to every group boundary and lists scratch or linear-form
/// storage wires that are not 0 for some input there.
pub fn boundary_violations(circuit: &Circuit, report: &SynthesisReport) -> Result<Vec<String>, SimError> {
    let mut wires: Vec<_> = circuit.wires_with_role(WireRole::Scratch).collect();
    wires.extend(&report.layout.s3_storage);
    let mut bad = Vec::new();
    for (t, g) in report.groups.iter().enumerate() {
        if !sim::wires_clean_at(circuit, &wires, g.end)? {
            bad.push(format!("group {t}: scratch not clean at gate {}", g.end));
        }
    }
    Ok(bad)
}
