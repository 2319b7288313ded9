//! Reversible circuit synthesis from truth tables with a bounded number of
//! ancillary wires, using NOT, CNOT and 2-CNOT gates.
//!
//! The pipeline: [`TruthTable`] in, [`synth::synthesize`] builds a
//! [`Circuit`], [`sim`] checks it exhaustively, [`metrics`] measures it, and
//! [`io`] reads and writes the text formats.

pub mod bounds;
pub mod circuit;
pub mod io;
pub mod metrics;
pub mod product_tree;
pub mod sim;
pub mod sweep;
pub mod synth;
pub mod table;

pub use circuit::{Circuit, CircuitError, Gate, GateKind, Wire, WireRole};
pub use metrics::Metrics;
pub use product_tree::{Handle, ProductTree, ProviderError, ProviderMode, ProviderStats};
pub use sim::{SimError, VerificationReport};
pub use synth::{
    synthesize, synthesize_with, Overrides, Strategy, SynthError, SynthesisParams, SynthesisReport,
};
pub use table::{TableError, TruthTable};
