//! Strategy graphs mixing branching and circuit nodes: leaves carry a fixed
//! three-valued decision, if-else nodes branch on an existential variable,
//! and union nodes join two consistent sub-strategies pointwise. The union
//! node makes the representation closed under every resolution rule of the
//! consistency-gated proof system.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::assign::PartialAssignment;
use crate::qbf::Var;
use crate::table::{SemError, StrategyTable};
use crate::trival::TriVal;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TNode {
    Leaf(TriVal),
    /// Branch on `var`: `hi` along the positive edge, `lo` along the
    /// negated edge.
    IfElse { var: Var, hi: NodeId, lo: NodeId },
    /// Pointwise union of two sub-strategies. Only introduced by union
    /// steps whose operand tables are consistent; that gate is enforced by
    /// the checker, not by the structure.
    Hash { a: NodeId, b: NodeId },
}

/// Append-only arena; children always precede parents, so node ids are a
/// valid topological order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TGraphStore {
    nodes: Vec<TNode>,
}

/// Handle to a strategy graph inside a store.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TGraph {
    pub root: NodeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// A union node joined `0` against `1`; cannot happen in a proof
    /// accepted by the checker.
    UnionClash(NodeId),
    MissingVariable(Var),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnionClash(id) => write!(f, "0/1 clash at union node {id}"),
            EvalError::MissingVariable(v) => write!(f, "branch variable {v} unassigned"),
        }
    }
}

impl TGraphStore {
    pub fn new() -> TGraphStore {
        TGraphStore::default()
    }

    pub fn node(&self, id: NodeId) -> TNode {
        self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaf(&mut self, value: TriVal) -> TGraph {
        self.push(TNode::Leaf(value))
    }

    pub fn ifelse(&mut self, var: Var, hi: TGraph, lo: TGraph) -> TGraph {
        self.push(TNode::IfElse {
            var,
            hi: hi.root,
            lo: lo.root,
        })
    }

    pub fn hash(&mut self, a: TGraph, b: TGraph) -> TGraph {
        self.push(TNode::Hash {
            a: a.root,
            b: b.root,
        })
    }

    fn push(&mut self, n: TNode) -> TGraph {
        if let TNode::IfElse { hi, lo, .. } = n {
            debug_assert!(hi < self.nodes.len() && lo < self.nodes.len());
        }
        if let TNode::Hash { a, b } = n {
            debug_assert!(a < self.nodes.len() && b < self.nodes.len());
        }
        self.nodes.push(n);
        TGraph {
            root: self.nodes.len() - 1,
        }
    }

    /// A graph is trivial when its root is the `*` leaf.
    pub fn is_trivial(&self, g: TGraph) -> bool {
        self.nodes[g.root] == TNode::Leaf(TriVal::Star)
    }

    /// Nodes reachable from the root, ascending (children before parents).
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            match self.nodes[id] {
                TNode::Leaf(_) => {}
                TNode::IfElse { hi, lo, .. } => {
                    stack.push(hi);
                    stack.push(lo);
                }
                TNode::Hash { a, b } => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn node_count(&self, g: TGraph) -> usize {
        self.reachable(g.root).len()
    }

    /// Branch variables reachable from the root, sorted.
    pub fn support(&self, g: TGraph) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .reachable(g.root)
            .into_iter()
            .filter_map(|id| match self.nodes[id] {
                TNode::IfElse { var, .. } => Some(var),
                _ => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Evaluates the graph under an assignment covering every branch
    /// variable. Leaves return their value, if-else follows the assigned
    /// edge, union joins its children.
    pub fn eval(&self, g: TGraph, a: &PartialAssignment) -> Result<TriVal, EvalError> {
        let mut memo: BTreeMap<NodeId, TriVal> = BTreeMap::new();
        self.eval_node(g.root, a, &mut memo)
    }

    fn eval_node(
        &self,
        id: NodeId,
        a: &PartialAssignment,
        memo: &mut BTreeMap<NodeId, TriVal>,
    ) -> Result<TriVal, EvalError> {
        if let Some(&v) = memo.get(&id) {
            return Ok(v);
        }
        let v = match self.nodes[id] {
            TNode::Leaf(v) => v,
            TNode::IfElse { var, hi, lo } => match a.get(var).as_bool() {
                Some(true) => self.eval_node(hi, a, memo)?,
                Some(false) => self.eval_node(lo, a, memo)?,
                None => return Err(EvalError::MissingVariable(var)),
            },
            TNode::Hash { a: x, b: y } => {
                let va = self.eval_node(x, a, memo)?;
                let vb = self.eval_node(y, a, memo)?;
                va.join(vb).ok_or(EvalError::UnionClash(id))?
            }
        };
        memo.insert(id, v);
        Ok(v)
    }

    /// Builds a decision tree computing the given table, branching over its
    /// support. Constant sub-blocks collapse to leaves.
    pub fn from_table(&mut self, t: &StrategyTable) -> TGraph {
        self.from_table_at(t, t.support().len(), 0)
    }

    /// `depth` support variables are still free; the rest are fixed by the
    /// high bits of `bits`.
    fn from_table_at(&mut self, t: &StrategyTable, depth: usize, bits: usize) -> TGraph {
        let first = t.get_row(bits);
        let block = 1usize << depth;
        if (0..block).all(|low| t.get_row(bits | low) == first) {
            return self.leaf(first);
        }
        let var = t.support()[depth - 1];
        let hi = self.from_table_at(t, depth - 1, bits | 1 << (depth - 1));
        let lo = self.from_table_at(t, depth - 1, bits);
        self.ifelse(var, hi, lo)
    }

    /// Compiles the graph to its function table over the branch-variable
    /// support. A union clash surfaces as an error.
    pub fn table(&self, g: TGraph, u: Var) -> Result<StrategyTable, TableError> {
        let support = self.support(g);
        let probe = StrategyTable::undefined(u, &support).map_err(TableError::Sem)?;
        let mut out = StrategyTable::undefined(u, &support).map_err(TableError::Sem)?;
        for r in 0..out.rows() {
            let v = self
                .eval(g, &probe.assignment_of(r))
                .map_err(TableError::Eval)?;
            out.set_row(r, v);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableError {
    Sem(SemError),
    Eval(EvalError),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::Sem(e) => write!(f, "{e}"),
            TableError::Eval(e) => write!(f, "{e}"),
        }
    }
}
