use proptest::prelude::*;

use revsynth_core::circuit::inverse_sequence;
use revsynth_core::io;
use revsynth_core::metrics;
use revsynth_core::product_tree::{ProductTree, ProviderMode};
use revsynth_core::sim::{self, State};
use revsynth_core::synth::{self, ancilla_audit, inequality_violations};
use revsynth_core::{Circuit, Gate, Overrides, Strategy as Plan, TruthTable, WireRole};

fn gate(width: usize) -> impl Strategy<Value = Gate> {
    proptest::sample::subsequence((0..width).collect::<Vec<_>>(), 1..=3.min(width))
        .prop_shuffle()
        .prop_map(|ws| match ws[..] {
            [t] => Gate::not(t),
            [a, t] => Gate::cnot(a, t),
            [a, b, t] => Gate::ccnot(a, b, t),
            _ => unreachable!(),
        })
}

fn gates(max_width: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (1..=max_width).prop_flat_map(move |w| (Just(w), proptest::collection::vec(gate(w), 0..max_len)))
}

fn apply_all(state: &mut State, gs: &[Gate]) {
    for g in gs {
        sim::apply_gate(state, g).unwrap();
    }
}

fn dag_depth(gs: &[Gate]) -> usize {
    let mut longest = vec![1usize; gs.len()];
    for j in 0..gs.len() {
        for i in 0..j {
            if gs[i].support().any(|w| gs[j].support().any(|v| v == w)) {
                longest[j] = longest[j].max(longest[i] + 1);
            }
        }
    }
    longest.into_iter().max().unwrap_or(0)
}

fn circuit_with_roles(width: usize, inputs: usize, gs: &[Gate], roles: &[u8]) -> Circuit {
    let mut c = Circuit::new(inputs);
    for w in inputs..width {
        let role = match roles[w % roles.len()] % 4 {
            0 => WireRole::Negation,
            1 => WireRole::Storage,
            2 => WireRole::Scratch,
            _ => WireRole::Output,
        };
        c.alloc_wire(role);
    }
    c.extend_gates(gs.iter().copied()).unwrap();
    c
}

proptest! {
    #[test]
    fn gates_are_involutions((width, gs) in gates(10, 20), bits in any::<u64>()) {
        let start = State::from_bits(&(0..width).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect::<String>()).unwrap();
        for g in &gs {
            let mut s = start.clone();
            sim::apply_gate(&mut s, g).unwrap();
            sim::apply_gate(&mut s, g).unwrap();
            prop_assert_eq!(&s, &start);
        }
    }

    #[test]
    fn inverse_suffix_restores((width, gs) in gates(12, 60), bits in any::<u64>()) {
        let start = State::from_bits(&(0..width).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect::<String>()).unwrap();
        let mut s = start.clone();
        apply_all(&mut s, &gs);
        apply_all(&mut s, &inverse_sequence(&gs));
        prop_assert_eq!(s, start);
    }

    #[test]
    fn circuits_permute_states((width, gs) in gates(10, 40)) {
        let mut seen = vec![false; 1 << width];
        for x in 0..1u64 << width {
            let mut s = State::zeros(width);
            for w in 0..width {
                s.set(w, x >> w & 1 == 1);
            }
            apply_all(&mut s, &gs);
            let y = (0..width).fold(0usize, |acc, w| acc | (usize::from(s.get(w)) << w));
            prop_assert!(!seen[y]);
            seen[y] = true;
        }
    }

    #[test]
    fn greedy_depth_is_longest_path((_, gs) in gates(16, 200)) {
        prop_assert_eq!(metrics::depth_of(&gs), dag_depth(&gs));
    }

    #[test]
    fn netlist_round_trip(
        (width, gs) in gates(12, 50),
        inputs in 1usize..=12,
        roles in proptest::collection::vec(any::<u8>(), 1..8),
    ) {
        let inputs = inputs.min(width);
        let c = circuit_with_roles(width, inputs, &gs, &roles);
        let back = io::parse_netlist(&io::write_netlist(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn truth_table_round_trip(n in 1usize..=8, seed in any::<u64>()) {
        let tt = TruthTable::random(n, seed);
        prop_assert_eq!(io::parse_truth_table(&io::write_truth_table(&tt)).unwrap(), tt);
    }

    #[test]
    fn provider_values_match(m in 1usize..=7, budget in 0usize..80, sel in any::<u64>(), xor in any::<bool>()) {
        let sel = sel & ((1 << m) - 1);
        let mut c = Circuit::new(m);
        let mode = if xor { ProviderMode::Xor } else { ProviderMode::And };
        let lits: Vec<(usize, usize)> = if xor {
            let zero = c.alloc_wire(WireRole::Scratch);
            (0..m).map(|i| (i, zero)).collect()
        } else {
            let negs: Vec<_> = (0..m).map(|_| c.alloc_wire(WireRole::Negation)).collect();
            for (i, &w) in negs.iter().enumerate() {
                c.add_gate(Gate::cnot(i, w)).unwrap();
                c.add_gate(Gate::not(w)).unwrap();
            }
            (0..m).zip(negs).collect()
        };
        let mut p = ProductTree::new(mode, m, budget);
        p.materialize(&mut c, &lits).unwrap();
        prop_assert!(p.wires() <= budget + m - 1);
        let h = p.request(&mut c, sel).unwrap();
        let expect = move |x: u64| if xor { (x & sel).count_ones() % 2 == 1 } else { x == sel };
        prop_assert!(sim::wire_predicate_check(&c, h.wire, expect, c.gates().len()).unwrap());
        p.release(&mut c, &h).unwrap();
        prop_assert!(sim::wires_clean_at(&c, &p.scratch_wires(), c.gates().len()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesis_is_exact(n in 2usize..=5, seed in any::<u64>(), extra in 0usize..120, t2 in any::<bool>()) {
        let tt = TruthTable::random(n, seed);
        let strategy = if t2 { Plan::MinimizeT2 } else { Plan::MinimizeT3 };
        let q = synth::minimal_budget(n, strategy, &Overrides::default()).unwrap() + extra;
        let (c, report) = synth::synthesize(&tt, q, strategy, &Overrides::default()).unwrap();
        prop_assert_eq!(sim::extract_transformation(&c).unwrap(), tt);
        prop_assert!(inequality_violations(&report).is_empty());
        prop_assert!(ancilla_audit(&report, q));
    }
}
