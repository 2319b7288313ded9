//! Gate complexity, depth and ancilla count of a circuit.

use serde::Serialize;

use crate::circuit::{Circuit, Gate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub gate_count: usize,
    pub depth: usize,
    pub ancilla: usize,
    /// Number of gates placed in each layer, first layer first.
    pub per_level_histogram: Vec<usize>,
}

pub fn gate_count(circuit: &Circuit) -> usize {
    circuit.gates().len()
}

pub fn ancilla_count(circuit: &Circuit) -> usize {
    circuit.width() - circuit.n()
}

pub fn depth(circuit: &Circuit) -> usize {
    depth_of(circuit.gates())
}

/// Greedy levelization: a gate lands one layer after the latest gate that
/// touched any wire of its support. Two gates conflict whenever their
/// supports share a wire, controls included.
pub fn levels_of(gates: &[Gate]) -> Vec<usize> {
    let width = gates.iter().map(|g| g.max_wire() + 1).max().unwrap_or(0);
    let mut wire_level = vec![0usize; width];
    gates
        .iter()
        .map(|g| {
            let level = 1 + g.support().map(|w| wire_level[w]).max().unwrap_or(0);
            for w in g.support() {
                wire_level[w] = level;
            }
            level
        })
        .collect()
}

pub fn depth_of(gates: &[Gate]) -> usize {
    levels_of(gates).into_iter().max().unwrap_or(0)
}

pub fn measure(circuit: &Circuit) -> Metrics {
    let levels = levels_of(circuit.gates());
    let depth = levels.iter().copied().max().unwrap_or(0);
    let mut per_level_histogram = vec![0; depth];
    for l in levels {
        per_level_histogram[l - 1] += 1;
    }
    Metrics {
        gate_count: gate_count(circuit),
        depth,
        ancilla: ancilla_count(circuit),
        per_level_histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::WireRole;

    #[test]
    fn empty() {
        let c = Circuit::new(3);
        let m = measure(&c);
        assert_eq!((m.gate_count, m.depth, m.ancilla), (0, 0, 0));
        assert!(m.per_level_histogram.is_empty());
    }

    #[test]
    fn chain_and_parallel() {
        let t = 7;
        let mut c = Circuit::new(t + 1);
        for i in 0..t {
            c.add_gate(Gate::cnot(i, t)).unwrap();
        }
        assert_eq!(depth(&c), t);

        let mut c = Circuit::new(3 * t);
        for i in 0..t {
            c.add_gate(Gate::ccnot(3 * i, 3 * i + 1, 3 * i + 2)).unwrap();
        }
        assert_eq!(depth(&c), 1);
        assert_eq!(measure(&c).per_level_histogram, vec![t]);
    }

    #[test]
    fn shared_controls_conflict() {
        let mut c = Circuit::new(3);
        c.add_gate(Gate::cnot(0, 1)).unwrap();
        c.add_gate(Gate::cnot(0, 2)).unwrap();
        assert_eq!(depth(&c), 2);
    }

    #[test]
    fn ancilla_is_width_minus_n() {
        let mut c = Circuit::new(4);
        assert_eq!(ancilla_count(&c), 0);
        c.alloc_wire(WireRole::Negation);
        c.alloc_wire(WireRole::Output);
        assert_eq!(ancilla_count(&c), 2);
    }
}
