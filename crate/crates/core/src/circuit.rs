//! Gates, wire roles and the flat circuit container.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense wire index. The first `n` wires of a circuit are its significant inputs.
pub type Wire = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Not,
    Cnot,
    Ccnot,
}

impl GateKind {
    pub fn control_count(self) -> usize {
        match self {
            GateKind::Not => 0,
            GateKind::Cnot => 1,
            GateKind::Ccnot => 2,
        }
    }
}

/// A reversible element: the target is XORed with the AND of the controls
/// (the empty AND is 1, so `Not` flips its target unconditionally).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not { target: Wire },
    Cnot { control: Wire, target: Wire },
    Ccnot { controls: [Wire; 2], target: Wire },
}

impl Gate {
    pub fn not(target: Wire) -> Self {
        Gate::Not { target }
    }

    pub fn cnot(control: Wire, target: Wire) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn ccnot(c0: Wire, c1: Wire, target: Wire) -> Self {
        Gate::Ccnot {
            controls: [c0, c1],
            target,
        }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not { .. } => GateKind::Not,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Ccnot { .. } => GateKind::Ccnot,
        }
    }

    pub fn target(&self) -> Wire {
        match *self {
            Gate::Not { target } | Gate::Cnot { target, .. } | Gate::Ccnot { target, .. } => target,
        }
    }

    pub fn controls(&self) -> &[Wire] {
        match self {
            Gate::Not { .. } => &[],
            Gate::Cnot { control, .. } => std::slice::from_ref(control),
            Gate::Ccnot { controls, .. } => controls,
        }
    }

    /// Controls followed by the target.
    pub fn support(&self) -> impl Iterator<Item = Wire> + '_ {
        self.controls()
            .iter()
            .copied()
            .chain(std::iter::once(self.target()))
    }

    pub fn max_wire(&self) -> Wire {
        self.support().max().unwrap_or(0)
    }

    /// Checks distinct controls, target not among the controls and all
    /// indices below `width`.
    pub fn validate(&self, width: usize) -> Result<(), CircuitError> {
        if let Some(wire) = self.support().find(|&w| w >= width) {
            return Err(CircuitError::IndexOutOfRange { wire, width });
        }
        let target = self.target();
        let controls = self.controls();
        if controls.contains(&target) || (controls.len() == 2 && controls[0] == controls[1]) {
            return Err(CircuitError::DegenerateGate(*self));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Not { target } => write!(f, "NOT({target})"),
            Gate::Cnot { control, target } => write!(f, "CNOT({control} -> {target})"),
            Gate::Ccnot { controls, target } => {
                write!(f, "CCNOT({},{} -> {target})", controls[0], controls[1])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WireRole {
    SignificantInput,
    Negation,
    Storage,
    Scratch,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("wire {wire} out of range for width {width}")]
    IndexOutOfRange { wire: Wire, width: usize },
    #[error("degenerate gate {0}: repeated wire among controls and target")]
    DegenerateGate(Gate),
}

/// Ordered gate list over a fixed, growing wire set.
///
/// Gates are stored flat; the order of `gates` is the composition order of
/// the transformation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    roles: Vec<WireRole>,
    input_wires: Vec<Wire>,
    output_wires: Vec<Wire>,
}

impl Circuit {
    /// Circuit with `n` significant inputs (wires `0..n`) and no gates.
    pub fn new(n: usize) -> Self {
        let mut c = Circuit::default();
        for _ in 0..n {
            c.alloc_wire(WireRole::SignificantInput);
        }
        c
    }

    /// Appends a fresh wire carrying `role` and returns its index (the old width).
    ///
    /// Output wires are also appended to the output list.
    ///
    /// # Panics
    /// When a significant input is requested after an ancilla or a gate was added;
    /// the input wires must occupy the first indices.
    pub fn alloc_wire(&mut self, role: WireRole) -> Wire {
        let wire = self.width;
        if role == WireRole::SignificantInput {
            assert!(
                self.input_wires.len() == self.width && self.gates.is_empty(),
                "significant inputs must be allocated before any ancilla or gate"
            );
            self.input_wires.push(wire);
        }
        if role == WireRole::Output {
            self.output_wires.push(wire);
        }
        self.roles.push(role);
        self.width += 1;
        wire
    }

    pub fn add_gate(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend_gates<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<(), CircuitError> {
        for g in gates {
            self.add_gate(g)?;
        }
        Ok(())
    }

    /// Replaces the output list (e.g. when outputs are read off input wires).
    pub fn set_output_wires(&mut self, wires: Vec<Wire>) -> Result<(), CircuitError> {
        if let Some(&wire) = wires.iter().find(|&&w| w >= self.width) {
            return Err(CircuitError::IndexOutOfRange {
                wire,
                width: self.width,
            });
        }
        self.output_wires = wires;
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of significant inputs.
    pub fn n(&self) -> usize {
        self.input_wires.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn roles(&self) -> &[WireRole] {
        &self.roles
    }

    pub fn role(&self, wire: Wire) -> Option<WireRole> {
        self.roles.get(wire).copied()
    }

    pub fn input_wires(&self) -> &[Wire] {
        &self.input_wires
    }

    pub fn output_wires(&self) -> &[Wire] {
        &self.output_wires
    }

    pub fn wires_with_role(&self, role: WireRole) -> impl Iterator<Item = Wire> + '_ {
        self.roles
            .iter()
            .enumerate()
            .filter(move |(_, r)| **r == role)
            .map(|(w, _)| w)
    }

    /// Copy of this circuit with only the first `len` gates.
    pub fn truncated(&self, len: usize) -> Circuit {
        let mut c = self.clone();
        c.gates.truncate(len);
        c
    }
}

/// The reversed gate list. Every gate is an involution, so appending the
/// result after `gates` restores the state reached before them.
pub fn inverse_sequence(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().copied().collect()
}
