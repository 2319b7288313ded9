//! Balanced product trees over literal wires.
//!
//! A tree over `m` variables has a node for every contiguous variable range
//! produced by recursive halving (first child `floor(len/2)` variables,
//! second child `ceil(len/2)`). A node over `len` variables has `2^len`
//! outputs indexed by a polarity word: in [`ProviderMode::And`] output `a` is
//! the conjunction `x_1^a_1 & ... & x_len^a_len`, in [`ProviderMode::Xor`]
//! it is the linear form `a_1 x_1 ^ ... ^ a_len x_len`. Each output of a node
//! is one 2-CNOT (or up to two CNOTs) over one output of each child.
//!
//! Levels are numbered from the root (level 1) towards the leaves (level
//! `K = ceil(log2 m)`). Under a wire budget the deepest levels are
//! materialized once onto storage wires; the remaining `r` levels are built
//! on demand onto a scratch pool and uncomputed by replaying the same gates
//! in reverse when the caller releases the value.
//!
//! Selector words are read most significant bit first: variable `j` of an
//! `m`-variable provider is bit `m - 1 - j`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{inverse_sequence, Circuit, CircuitError, Gate, Wire, WireRole};
use crate::metrics;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ProviderMode {
    And,
    Xor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// First variable (inclusive).
    pub lo: usize,
    /// One past the last variable.
    pub hi: usize,
    pub level: u32,
    pub children: Option<(NodeId, NodeId)>,
}

impl TreeNode {
    pub fn len(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    /// Single-variable node: its outputs are the literal wires themselves.
    pub fn is_literal(&self) -> bool {
        self.len() == 1
    }

    /// Leaves of the tree proper hold one or two variables.
    pub fn is_leaf(&self) -> bool {
        self.len() <= 2
    }

    pub fn outputs(&self) -> usize {
        1 << self.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePlan {
    vars: usize,
    /// Children precede their parents.
    nodes: Vec<TreeNode>,
    root: NodeId,
    levels: u32,
}

impl TreePlan {
    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// `K`: the deepest level holding a node with gates (0 for a single variable).
    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Non-literal nodes at `level`. Literal children of a pair sit one
    /// level below it but are never listed.
    pub fn nodes_at_level(&self, level: u32) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.level == level && !n.is_literal())
            .map(|(id, _)| id)
    }

    /// Outputs (and therefore 2-CNOTs) at `level`.
    pub fn level_size(&self, level: u32) -> usize {
        self.nodes_at_level(level).map(|id| self.nodes[id].outputs()).sum()
    }

    /// Children of a pair node are its two literal nodes.
    pub fn children(&self, id: NodeId) -> Option<(NodeId, NodeId)> {
        self.nodes[id].children
    }
}

/// Recursive halving of `vars` variables.
///
/// # Panics
/// When `vars == 0`.
pub fn plan_tree(vars: usize) -> TreePlan {
    assert!(vars > 0, "a product tree needs at least one variable");
    fn build(nodes: &mut Vec<TreeNode>, lo: usize, hi: usize, level: u32) -> NodeId {
        let len = hi - lo;
        let children = if len == 1 {
            None
        } else {
            let mid = lo + len / 2;
            let a = build(nodes, lo, mid, level + 1);
            let b = build(nodes, mid, hi, level + 1);
            Some((a, b))
        };
        nodes.push(TreeNode {
            lo,
            hi,
            level,
            children,
        });
        nodes.len() - 1
    }
    let mut nodes = Vec::new();
    let root = build(&mut nodes, 0, vars, 1);
    let levels = nodes
        .iter()
        .filter(|n| !n.is_literal())
        .map(|n| n.level)
        .max()
        .unwrap_or(0);
    TreePlan {
        vars,
        nodes,
        root,
        levels,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoragePlan {
    /// Levels `stored_from..=K` are stored; `stored_from = K + 1` stores nothing.
    pub stored_from: u32,
    /// On-demand levels (`stored_from - 1`).
    pub r: u32,
    /// Scratch wires: one per non-literal node above the cut.
    pub scratch: usize,
    /// Storage wires: one per output of every stored node.
    pub stored_outputs: usize,
    pub budget: usize,
}

impl StoragePlan {
    pub fn is_stored_level(&self, level: u32) -> bool {
        level >= self.stored_from
    }

    /// Wires the provider allocates.
    pub fn wires(&self) -> usize {
        self.stored_outputs + self.scratch
    }
}

/// Stores whole levels from the deepest one upwards while stored outputs plus
/// the scratch still needed for the levels above fit in `budget`.
///
/// Storing nothing is always possible; its scratch (`m - 1` wires for `m`
/// variables) is then charged beyond the budget.
pub fn storage_split(plan: &TreePlan, budget: usize) -> StoragePlan {
    let k = plan.levels();
    let scratch_above = |cut: u32| {
        plan.nodes()
            .iter()
            .filter(|n| !n.is_literal() && n.level < cut)
            .count()
    };
    let mut best = StoragePlan {
        stored_from: k + 1,
        r: k,
        scratch: scratch_above(k + 1),
        stored_outputs: 0,
        budget,
    };
    let mut stored = 0;
    for cut in (1..=k).rev() {
        stored += plan.level_size(cut);
        let scratch = scratch_above(cut);
        if stored + scratch > budget {
            break;
        }
        best = StoragePlan {
            stored_from: cut,
            r: cut - 1,
            scratch,
            stored_outputs: stored,
            budget,
        };
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("scratch pool busy: release the outstanding on-demand value first")]
    ScratchExhausted,
    #[error("handle {0} was already released")]
    DoubleRelease(u64),
    #[error("selector {selector:#b} is wider than {vars} variables")]
    SelectorOutOfRange { selector: u64, vars: usize },
    #[error("expected {expected} literal pairs, got {found}")]
    LiteralCount { expected: usize, found: usize },
    #[error("provider has not been materialized")]
    NotMaterialized,
    #[error("provider is already materialized")]
    AlreadyMaterialized,
    #[error("{0} handles still outstanding")]
    HandlesOutstanding(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A requested value. `trace` is what was emitted to produce it (empty when
/// the value already sat on a stored or literal wire).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Handle {
    id: u64,
    pub wire: Wire,
    pub trace: Vec<Gate>,
}

impl Handle {
    pub fn id(&self) -> u64 {
        self.id
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ProviderStats {
    /// Requests served (including [`ProductTree::compute_into`] calls).
    pub t: u64,
    pub materialized: u64,
    pub requested: u64,
    pub released: u64,
    pub dematerialized: u64,
}

impl ProviderStats {
    /// Gates emitted for storage, requests and releases.
    pub fn emitted(&self) -> u64 {
        self.materialized + self.requested + self.released
    }

    pub fn since(&self, earlier: &ProviderStats) -> ProviderStats {
        ProviderStats {
            t: self.t - earlier.t,
            materialized: self.materialized - earlier.materialized,
            requested: self.requested - earlier.requested,
            released: self.released - earlier.released,
            dematerialized: self.dematerialized - earlier.dematerialized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Wire(Wire),
    Zero,
}

/// Conjunction (`And`) or linear-form (`Xor`) provider bound to one circuit.
#[derive(Debug, Clone)]
pub struct ProductTree {
    mode: ProviderMode,
    plan: TreePlan,
    storage: StoragePlan,
    /// Height of the on-demand part below each node (0 for resident nodes).
    height: Vec<u32>,
    storage_base: Vec<Option<Wire>>,
    scratch: Vec<Option<Wire>>,
    allocated: bool,
    /// Per variable: the wire of `x` and the wire of `!x` (`And`) or of the
    /// constant 0 (`Xor`).
    literals: Vec<(Wire, Wire)>,
    materialized: Option<Vec<Gate>>,
    next_handle: u64,
    outstanding: BTreeMap<u64, bool>,
    scratch_busy: bool,
    stats: ProviderStats,
    log: Vec<Gate>,
}

impl ProductTree {
    pub fn new(mode: ProviderMode, vars: usize, budget: usize) -> Self {
        let plan = plan_tree(vars);
        let storage = storage_split(&plan, budget);
        let mut height = vec![0u32; plan.nodes().len()];
        for (id, node) in plan.nodes().iter().enumerate() {
            if node.is_literal() || storage.is_stored_level(node.level) {
                continue;
            }
            let (a, b) = node.children.expect("non-literal node has children");
            height[id] = 1 + height[a].max(height[b]);
        }
        let count = plan.nodes().len();
        ProductTree {
            mode,
            plan,
            storage,
            height,
            storage_base: vec![None; count],
            scratch: vec![None; count],
            allocated: false,
            literals: Vec::new(),
            materialized: None,
            next_handle: 0,
            outstanding: BTreeMap::new(),
            scratch_busy: false,
            stats: ProviderStats::default(),
            log: Vec::new(),
        }
    }

    pub fn mode(&self) -> ProviderMode {
        self.mode
    }

    pub fn vars(&self) -> usize {
        self.plan.vars()
    }

    pub fn plan(&self) -> &TreePlan {
        &self.plan
    }

    pub fn storage(&self) -> &StoragePlan {
        &self.storage
    }

    pub fn r(&self) -> u32 {
        self.storage.r
    }

    pub fn budget(&self) -> usize {
        self.storage.budget
    }

    pub fn stats(&self) -> ProviderStats {
        self.stats
    }

    /// Every gate this provider has emitted, in order.
    pub fn gate_log(&self) -> &[Gate] {
        &self.log
    }

    /// Wires allocated by this provider (storage plus scratch).
    pub fn wires(&self) -> usize {
        self.storage.wires()
    }

    pub fn scratch_wires(&self) -> Vec<Wire> {
        self.scratch.iter().flatten().copied().collect()
    }

    pub fn storage_wires(&self) -> Vec<Wire> {
        self.plan
            .nodes()
            .iter()
            .zip(&self.storage_base)
            .filter_map(|(n, b)| b.map(|b| b..b + n.outputs()))
            .flatten()
            .collect()
    }

    /// Non-literal nodes built per request (each contributes one 2-CNOT, or
    /// at most two CNOTs in `Xor` mode).
    pub fn ondemand_nodes(&self) -> usize {
        self.storage.scratch
    }

    /// True when the full-width values already sit on literal or storage wires.
    pub fn root_resident(&self) -> bool {
        self.is_resident(self.plan.root())
    }

    fn is_resident(&self, id: NodeId) -> bool {
        let node = self.plan.node(id);
        node.is_literal() || self.storage.is_stored_level(node.level)
    }

    /// Allocates storage and scratch wires. Called implicitly by the first
    /// [`materialize`](Self::materialize).
    pub fn allocate(&mut self, circuit: &mut Circuit) {
        if self.allocated {
            return;
        }
        for (id, node) in self.plan.nodes().iter().enumerate() {
            if node.is_literal() {
                continue;
            }
            if self.storage.is_stored_level(node.level) {
                let base = circuit.alloc_wire(WireRole::Storage);
                for _ in 1..node.outputs() {
                    circuit.alloc_wire(WireRole::Storage);
                }
                self.storage_base[id] = Some(base);
            } else {
                self.scratch[id] = Some(circuit.alloc_wire(WireRole::Scratch));
            }
        }
        self.allocated = true;
    }

    /// Binds the literal wires and emits the gates of every stored node,
    /// children before parents. In `Xor` mode the second wire of each pair
    /// must be a wire that stays 0.
    pub fn materialize(
        &mut self,
        circuit: &mut Circuit,
        literals: &[(Wire, Wire)],
    ) -> Result<(), ProviderError> {
        if self.materialized.is_some() {
            return Err(ProviderError::AlreadyMaterialized);
        }
        if literals.len() != self.vars() {
            return Err(ProviderError::LiteralCount {
                expected: self.vars(),
                found: literals.len(),
            });
        }
        self.allocate(circuit);
        self.literals = literals.to_vec();
        let mut gates = Vec::new();
        for (id, node) in self.plan.nodes().iter().enumerate() {
            let Some(base) = self.storage_base[id] else {
                continue;
            };
            let (a, b) = node.children.expect("stored node has children");
            let right_len = self.plan.node(b).len();
            for idx in 0..node.outputs() {
                let left = self.resident_source(a, idx >> right_len);
                let right = self.resident_source(b, idx & ((1 << right_len) - 1));
                self.combine(left, right, a, b, base + idx, true, &mut gates);
            }
        }
        self.emit(circuit, &gates)?;
        self.stats.materialized += gates.len() as u64;
        self.materialized = Some(gates);
        Ok(())
    }

    /// Uncomputes every stored node by replaying the materialization in reverse.
    pub fn dematerialize(&mut self, circuit: &mut Circuit) -> Result<(), ProviderError> {
        if !self.outstanding.is_empty() {
            return Err(ProviderError::HandlesOutstanding(self.outstanding.len()));
        }
        let gates = self.materialized.take().ok_or(ProviderError::NotMaterialized)?;
        let inverse = inverse_sequence(&gates);
        self.emit(circuit, &inverse)?;
        self.stats.dematerialized += inverse.len() as u64;
        Ok(())
    }

    /// Returns a wire carrying the value selected by `selector`, building the
    /// on-demand levels onto scratch wires when needed.
    ///
    /// In `Xor` mode the all-zero selector yields the constant-0 wire and a
    /// node with exactly one non-zero child forwards that child's wire.
    pub fn request(&mut self, circuit: &mut Circuit, selector: u64) -> Result<Handle, ProviderError> {
        self.check_request(selector)?;
        let mut trace = Vec::new();
        let root = self.plan.root();
        let source = self.eval(root, selector, None, &mut trace);
        let wire = match source {
            Source::Wire(w) => w,
            Source::Zero => self.literals[0].1,
        };
        let uses_scratch = !trace.is_empty();
        if uses_scratch && self.scratch_busy {
            return Err(ProviderError::ScratchExhausted);
        }
        self.emit(circuit, &trace)?;
        self.stats.t += 1;
        self.stats.requested += trace.len() as u64;
        self.scratch_busy |= uses_scratch;
        let id = self.next_handle;
        self.next_handle += 1;
        self.outstanding.insert(id, uses_scratch);
        Ok(Handle { id, wire, trace })
    }

    /// Replays the handle's trace in reverse, returning its scratch wires to 0.
    pub fn release(&mut self, circuit: &mut Circuit, handle: &Handle) -> Result<(), ProviderError> {
        let uses_scratch = self
            .outstanding
            .remove(&handle.id)
            .ok_or(ProviderError::DoubleRelease(handle.id))?;
        let inverse = inverse_sequence(&handle.trace);
        self.emit(circuit, &inverse)?;
        self.stats.released += inverse.len() as u64;
        if uses_scratch {
            self.scratch_busy = false;
        }
        Ok(())
    }

    /// XORs the selected value into `target`, a wire owned by the caller,
    /// leaving every scratch wire at 0. The root node's gate lands directly on
    /// `target`; the levels below it are built and then uncomputed. Calling it
    /// twice with the same selector restores `target`.
    ///
    /// Counts as one request.
    pub fn compute_into(
        &mut self,
        circuit: &mut Circuit,
        selector: u64,
        target: Wire,
    ) -> Result<(), ProviderError> {
        self.check_request(selector)?;
        let root = self.plan.root();
        let mut below = Vec::new();
        let mut top = Vec::new();
        if self.is_resident(root) {
            if let Source::Wire(w) = self.resident_source(root, selector as usize) {
                top.push(Gate::cnot(w, target));
            }
        } else {
            let (a, b) = self.plan.children(root).expect("non-literal root");
            let left = self.eval(a, selector, None, &mut below);
            let right = self.eval(b, selector, None, &mut below);
            self.combine(left, right, a, b, target, true, &mut top);
        }
        if !below.is_empty() && self.scratch_busy {
            return Err(ProviderError::ScratchExhausted);
        }
        let inverse = inverse_sequence(&below);
        self.emit(circuit, &below)?;
        self.emit(circuit, &top)?;
        self.emit(circuit, &inverse)?;
        self.stats.t += 1;
        self.stats.requested += (below.len() + top.len()) as u64;
        self.stats.released += inverse.len() as u64;
        Ok(())
    }

    fn check_request(&self, selector: u64) -> Result<(), ProviderError> {
        if self.materialized.is_none() {
            return Err(ProviderError::NotMaterialized);
        }
        let vars = self.vars();
        if vars < 64 && selector >> vars != 0 {
            return Err(ProviderError::SelectorOutOfRange { selector, vars });
        }
        Ok(())
    }

    fn emit(&mut self, circuit: &mut Circuit, gates: &[Gate]) -> Result<(), ProviderError> {
        circuit.extend_gates(gates.iter().copied())?;
        self.log.extend_from_slice(gates);
        Ok(())
    }

    /// Output index of `id` selected by the full-width `selector`.
    fn local_index(&self, id: NodeId, selector: u64) -> usize {
        let node = self.plan.node(id);
        let shift = self.vars() - node.hi;
        ((selector >> shift) & ((1u64 << node.len()) - 1)) as usize
    }

    /// Value of output `idx` of a literal or stored node.
    fn resident_source(&self, id: NodeId, idx: usize) -> Source {
        let node = self.plan.node(id);
        if node.is_literal() {
            let (pos, neg) = self.literals[node.lo];
            return match (self.mode, idx) {
                (_, 1) => Source::Wire(pos),
                (ProviderMode::And, _) => Source::Wire(neg),
                (ProviderMode::Xor, _) => Source::Zero,
            };
        }
        let base = self.storage_base[id].expect("resident node is stored");
        Source::Wire(base + idx)
    }

    fn eval(&self, id: NodeId, selector: u64, target: Option<Wire>, gates: &mut Vec<Gate>) -> Source {
        if self.is_resident(id) {
            return self.resident_source(id, self.local_index(id, selector));
        }
        let (a, b) = self.plan.children(id).expect("non-literal node has children");
        let left = self.eval(a, selector, None, gates);
        let right = self.eval(b, selector, None, gates);
        let dest = target.unwrap_or_else(|| self.scratch[id].expect("on-demand node has scratch"));
        self.combine(left, right, a, b, dest, target.is_some(), gates)
    }

    /// Emits the gates putting `left op right` on `dest`. In `Xor` mode a
    /// constant-0 operand contributes no gate and, unless `must_land`, a
    /// single live operand is forwarded instead of copied.
    #[allow(clippy::too_many_arguments)]
    fn combine(
        &self,
        left: Source,
        right: Source,
        left_id: NodeId,
        right_id: NodeId,
        dest: Wire,
        must_land: bool,
        gates: &mut Vec<Gate>,
    ) -> Source {
        match self.mode {
            ProviderMode::And => {
                let (Source::Wire(l), Source::Wire(r)) = (left, right) else {
                    unreachable!("conjunction operands are always wires");
                };
                gates.push(Gate::ccnot(l, r, dest));
                Source::Wire(dest)
            }
            ProviderMode::Xor => match (left, right) {
                (Source::Zero, Source::Zero) => {
                    if must_land {
                        Source::Wire(dest)
                    } else {
                        Source::Zero
                    }
                }
                (Source::Wire(w), Source::Zero) | (Source::Zero, Source::Wire(w)) => {
                    if must_land {
                        gates.push(Gate::cnot(w, dest));
                        Source::Wire(dest)
                    } else {
                        Source::Wire(w)
                    }
                }
                (Source::Wire(l), Source::Wire(r)) => {
                    // the operand finishing later goes first so the pair
                    // costs exactly two layers after it
                    if self.height[right_id] > self.height[left_id] {
                        gates.push(Gate::cnot(r, dest));
                        gates.push(Gate::cnot(l, dest));
                    } else {
                        gates.push(Gate::cnot(l, dest));
                        gates.push(Gate::cnot(r, dest));
                    }
                    Source::Wire(dest)
                }
            },
        }
    }

    /// Depth of this provider's gates taken on their own.
    pub fn standalone_depth(&self, range: std::ops::Range<usize>) -> usize {
        metrics::depth_of(&self.log[range])
    }
}
