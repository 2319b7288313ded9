//! Truth table to reversible circuit.
//!
//! The circuit computes every output as
//! `f_i(x) = XOR_{t,a} [suffix(x) = a] & L_{i,t,a}(prefix(x))`, where
//! `L_{i,t,a}` is the XOR of the group-`t` prefix minterms selected by the
//! coefficient of `f_i` at suffix `a`. Three providers supply the pieces:
//! a conjunction tree over the prefix (the group's minterms), a conjunction
//! tree over the suffix, and a linear-form tree over the current group's
//! minterms. Each output term is one 2-CNOT onto a fresh output wire.

pub mod audit;
pub mod decompose;
pub mod params;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bounds;
use crate::circuit::{Circuit, CircuitError, Gate, Wire, WireRole};
use crate::metrics;
use crate::product_tree::{ProductTree, ProviderError, ProviderMode, ProviderStats};
use crate::table::TruthTable;

pub use audit::{ancilla_audit, boundary_violations, inequality_violations};
pub use decompose::{plan_groups, recompose_expansion, recompose_grouped, restrict, GroupPlan};
pub use params::{
    default_group_size, full_storage_budget, minimal_budget, select_params, Overrides, Strategy,
    SynthesisParams,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("budget q = {q} is too small; at least {minimum} wires are needed")]
    QBudgetTooSmall { q: usize, minimum: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub negation: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub output: usize,
}

impl StageCounts {
    pub fn total(&self) -> usize {
        self.negation + self.s1 + self.s2 + self.s3 + self.output
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProviderSummary {
    pub name: &'static str,
    pub mode: ProviderMode,
    pub vars: usize,
    pub budget: usize,
    pub stored_outputs: usize,
    pub scratch: usize,
    pub r: u32,
    pub t: u64,
    /// Storage, request and release gates.
    pub emitted: u64,
    pub dematerialized: u64,
    pub wires: usize,
    /// Depth of the provider's own gates taken alone.
    pub depth: usize,
}

/// What one group contributed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupRecord {
    pub members: usize,
    pub t2: u64,
    pub t3: u64,
    /// Linear-form gates of this group without its dematerialization.
    pub s3_emitted: u64,
    pub s3_depth: usize,
    pub s3_dematerialized: u64,
    pub output_gates: usize,
    /// Gate index right after the group.
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AncillaLedger {
    pub negations: usize,
    pub zero: usize,
    pub holders: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub outputs: usize,
}

impl AncillaLedger {
    pub fn total(&self) -> usize {
        self.negations + self.zero + self.holders + self.s1 + self.s2 + self.s3 + self.outputs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WireLayout {
    pub negations: Vec<Wire>,
    pub zero: Wire,
    pub holders: Vec<Wire>,
    pub outputs: Vec<Wire>,
    pub s3_storage: Vec<Wire>,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedBound {
    pub name: &'static str,
    #[serde(serialize_with = "finite_or_null")]
    pub value: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthesisReport {
    pub n: usize,
    pub q: usize,
    pub params: SynthesisParams,
    pub gate_count: usize,
    pub depth: usize,
    pub ancilla: usize,
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
    pub stages: StageCounts,
    pub providers: Vec<ProviderSummary>,
    pub groups: Vec<GroupRecord>,
    pub ledger: AncillaLedger,
    pub layout: WireLayout,
    pub bounds: Vec<NamedBound>,
}

impl SynthesisReport {
    pub fn provider(&self, name: &str) -> Option<&ProviderSummary> {
        self.providers.iter().find(|p| p.name == name)
    }

    /// Largest per-group linear-form request count.
    pub fn t3_max_group(&self) -> u64 {
        self.groups.iter().map(|g| g.t3).max().unwrap_or(0)
    }
}

fn summarize(name: &'static str, p: &ProductTree) -> ProviderSummary {
    let st = p.stats();
    let storage = p.storage();
    ProviderSummary {
        name,
        mode: p.mode(),
        vars: p.vars(),
        budget: p.budget(),
        stored_outputs: storage.stored_outputs,
        scratch: storage.scratch,
        r: storage.r,
        t: st.t,
        emitted: st.emitted(),
        dematerialized: st.dematerialized,
        wires: p.wires(),
        depth: metrics::depth_of(p.gate_log()),
    }
}

/// Synthesizes `tt` with at most `q` ancillae, choosing unset parameters by
/// [`select_params`].
pub fn synthesize(
    tt: &TruthTable,
    q: usize,
    strategy: Strategy,
    overrides: &Overrides,
) -> Result<(Circuit, SynthesisReport), SynthError> {
    let params = select_params(tt.n(), q, strategy, overrides)?;
    synthesize_with(tt, &params)
}

/// Synthesizes `tt` with fixed parameters.
pub fn synthesize_with(
    tt: &TruthTable,
    params: &SynthesisParams,
) -> Result<(Circuit, SynthesisReport), SynthError> {
    let n = tt.n();
    if params.n != n {
        return Err(SynthError::InvalidParams(format!(
            "parameters for n = {}, table has n = {n}",
            params.n
        )));
    }
    let (k, s) = (params.k, params.s);
    let plan = plan_groups(tt, k, s);
    let [b1, b2, b3] = params.provider_budgets();

    let mut c = Circuit::new(n);
    let negations: Vec<Wire> = (0..n).map(|_| c.alloc_wire(WireRole::Negation)).collect();
    let zero = c.alloc_wire(WireRole::Scratch);
    let mut s1 = ProductTree::new(ProviderMode::And, k, b1);
    let mut s2 = ProductTree::new(ProviderMode::And, n - k, b2);
    let mut s3 = ProductTree::new(ProviderMode::Xor, s, b3);
    s1.allocate(&mut c);
    s2.allocate(&mut c);
    s3.allocate(&mut c);
    let resident = s1.root_resident();
    let holders: Vec<Wire> = if resident {
        Vec::new()
    } else {
        (0..s).map(|_| c.alloc_wire(WireRole::Scratch)).collect()
    };
    let outputs: Vec<Wire> = (0..n).map(|_| c.alloc_wire(WireRole::Output)).collect();

    for (i, &w) in negations.iter().enumerate() {
        c.add_gate(Gate::cnot(i, w))?;
        c.add_gate(Gate::not(w))?;
    }
    let literals: Vec<(Wire, Wire)> = (0..n).map(|i| (i, negations[i])).collect();
    s2.materialize(&mut c, &literals[k..])?;
    s1.materialize(&mut c, &literals[..k])?;

    let mut output_gates = 0;
    let mut groups = Vec::with_capacity(plan.p());
    let mut t2_total = 0;
    for (t, members) in plan.groups().iter().enumerate() {
        let t2_before = s2.stats().t;
        let mut member_wires = Vec::with_capacity(s);
        let mut held = Vec::new();
        for (j, &sigma) in members.iter().enumerate() {
            if resident {
                let h = s1.request(&mut c, sigma)?;
                member_wires.push(h.wire);
                held.push(h);
            } else {
                s1.compute_into(&mut c, sigma, holders[j])?;
                member_wires.push(holders[j]);
            }
        }
        let lits3: Vec<(Wire, Wire)> = (0..s)
            .map(|j| (member_wires.get(j).copied().unwrap_or(zero), zero))
            .collect();
        let s3_before: ProviderStats = s3.stats();
        let log_start = s3.gate_log().len();
        s3.materialize(&mut c, &lits3)?;

        let out_before = output_gates;
        let suffixes = plan.suffixes();
        match params.strategy {
            Strategy::MinimizeT2 => {
                for a in 0..suffixes {
                    let gs: Vec<u64> = (0..n).map(|i| plan.selector(i, t, a)).collect();
                    let mut distinct: Vec<u64> = gs.iter().copied().filter(|&g| g != 0).collect();
                    if distinct.is_empty() {
                        continue;
                    }
                    distinct.sort_unstable();
                    distinct.dedup();
                    let h2 = s2.request(&mut c, a)?;
                    for g in distinct {
                        let h3 = s3.request(&mut c, g)?;
                        for i in (0..n).filter(|&i| gs[i] == g) {
                            c.add_gate(Gate::ccnot(h2.wire, h3.wire, outputs[i]))?;
                            output_gates += 1;
                        }
                        s3.release(&mut c, &h3)?;
                    }
                    s2.release(&mut c, &h2)?;
                }
            }
            Strategy::MinimizeT3 => {
                for g in plan.distinct_selectors(t) {
                    let h3 = s3.request(&mut c, g)?;
                    for a in 0..suffixes {
                        let targets: Vec<usize> =
                            (0..n).filter(|&i| plan.selector(i, t, a) == g).collect();
                        if targets.is_empty() {
                            continue;
                        }
                        let h2 = s2.request(&mut c, a)?;
                        for i in targets {
                            c.add_gate(Gate::ccnot(h2.wire, h3.wire, outputs[i]))?;
                            output_gates += 1;
                        }
                        s2.release(&mut c, &h2)?;
                    }
                    s3.release(&mut c, &h3)?;
                }
            }
        }

        let log_live = s3.gate_log().len();
        s3.dematerialize(&mut c)?;
        let s3_delta = s3.stats().since(&s3_before);
        for (j, &sigma) in members.iter().enumerate() {
            if resident {
                let h = s1.request(&mut c, sigma)?;
                held.push(h);
            } else {
                s1.compute_into(&mut c, sigma, holders[j])?;
            }
        }
        for h in &held {
            s1.release(&mut c, h)?;
        }
        let t2 = s2.stats().t - t2_before;
        t2_total += t2;
        groups.push(GroupRecord {
            members: members.len(),
            t2,
            t3: s3_delta.t,
            s3_emitted: s3_delta.emitted(),
            s3_depth: metrics::depth_of(&s3.gate_log()[log_start..log_live]),
            s3_dematerialized: s3_delta.dematerialized,
            output_gates: output_gates - out_before,
            end: c.gates().len(),
        });
    }

    let stages = StageCounts {
        negation: 2 * n,
        s1: (s1.stats().emitted() + s1.stats().dematerialized) as usize,
        s2: (s2.stats().emitted() + s2.stats().dematerialized) as usize,
        s3: (s3.stats().emitted() + s3.stats().dematerialized) as usize,
        output: output_gates,
    };
    let ledger = AncillaLedger {
        negations: n,
        zero: 1,
        holders: holders.len(),
        s1: s1.wires(),
        s2: s2.wires(),
        s3: s3.wires(),
        outputs: n,
    };
    let m = metrics::measure(&c);
    assert_eq!(stages.total(), m.gate_count, "stage counts must add up");
    let (nn, qq) = (n as u64, params.q as u64);
    let (t1, t3) = (s1.stats().t, s3.stats().t);
    let named = |name, b: bounds::BoundReport| NamedBound {
        name,
        value: b.value,
        valid: b.valid,
    };
    let bounds = vec![
        named("l_shannon_upper", bounds::l_shannon_upper(nn, qq)),
        named("d_shannon_upper", bounds::d_shannon_upper(nn, qq)),
        named("l_conj_s1", bounds::l_conj(k as u64, params.q1 as u64, t1)),
        named("l_conj_s2", bounds::l_conj((n - k) as u64, params.q2 as u64, t2_total)),
        named(
            "l_xor_s3",
            bounds::l_xor(s as u64, params.q3 as u64, groups.iter().map(|g| g.t3).max().unwrap_or(0)),
        ),
    ];
    let report = SynthesisReport {
        n,
        q: params.q,
        params: params.clone(),
        gate_count: m.gate_count,
        depth: m.depth,
        ancilla: m.ancilla,
        t1,
        t2: t2_total,
        t3,
        stages,
        providers: vec![summarize("s1", &s1), summarize("s2", &s2), summarize("s3", &s3)],
        groups,
        ledger,
        layout: WireLayout {
            negations,
            zero,
            holders,
            outputs,
            s3_storage: s3.storage_wires(),
        },
        bounds,
    };
    Ok((c, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim;

    fn check(tt: &TruthTable, q: usize, strategy: Strategy, ov: &Overrides) -> SynthesisReport {
        let (c, report) = synthesize(tt, q, strategy, ov).unwrap();
        assert_eq!(sim::extract_transformation(&c).unwrap(), *tt, "{:?}", report.params);
        assert_eq!(inequality_violations(&report), Vec::<String>::new());
        assert!(ancilla_audit(&report, q));
        assert_eq!(boundary_violations(&c, &report).unwrap(), Vec::<String>::new());
        report
    }

    #[test]
    fn identity_three() {
        for strategy in Strategy::ALL {
            check(&TruthTable::identity(3), 32, strategy, &Overrides::default());
        }
    }

    #[test]
    fn random_four_at_forty() {
        for seed in 0..100 {
            let tt = TruthTable::random(4, seed);
            for strategy in Strategy::ALL {
                let r = check(&tt, 40, strategy, &Overrides::default());
                assert!(r.ancilla <= 40);
            }
        }
    }

    #[test]
    fn every_split_point() {
        let tt = TruthTable::random(5, 99);
        for k in 1..5 {
            for strategy in Strategy::ALL {
                let ov = Overrides {
                    k: Some(k),
                    ..Overrides::default()
                };
                let q = minimal_budget(5, strategy, &ov).unwrap();
                for q in [q, q + 10, q + 200] {
                    let r = check(&tt, q, strategy, &ov);
                    assert_eq!(r.t1, 1 << (k + 1));
                }
            }
        }
    }

    #[test]
    fn prefix_scratch_without_budget() {
        let tt = TruthTable::random(6, 3);
        let ov = Overrides {
            k: Some(4),
            ..Overrides::default()
        };
        let r = check(&tt, 200, Strategy::MinimizeT2, &ov);
        assert_eq!(r.ledger.s1, 3);
    }

    #[test]
    fn resident_prefix_values() {
        let tt = TruthTable::random(5, 8);
        let ov = Overrides {
            k: Some(2),
            q1: Some(10),
            ..Overrides::default()
        };
        let r = check(&tt, 120, Strategy::MinimizeT3, &ov);
        assert_eq!(r.ledger.holders, 0);
    }

    #[test]
    fn strategy_caps() {
        let tt = TruthTable::random(6, 17);
        let r1 = check(&tt, 120, Strategy::MinimizeT2, &Overrides::default());
        let p = &r1.params;
        assert!(r1.t2 <= (p.p as u64) << (6 - p.k));
        let r2 = check(&tt, 120, Strategy::MinimizeT3, &Overrides::default());
        assert!(r2.t3_max_group() < 1 << r2.params.s);
    }

    #[test]
    fn corrupted_ledger_fails_audit() {
        let (_, mut r) = synthesize(&TruthTable::random(4, 1), 40, Strategy::MinimizeT2, &Overrides::default()).unwrap();
        assert!(ancilla_audit(&r, 40));
        r.ledger.s2 += 1;
        assert!(!ancilla_audit(&r, 40));
        assert!(!ancilla_audit(&r, r.ancilla - 1));
    }

    #[test]
    fn deterministic() {
        let tt = TruthTable::random(5, 4);
        let a = synthesize(&tt, 60, Strategy::MinimizeT3, &Overrides::default()).unwrap();
        let b = synthesize(&tt, 60, Strategy::MinimizeT3, &Overrides::default()).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
