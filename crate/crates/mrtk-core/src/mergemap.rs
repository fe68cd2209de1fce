//! Merge maps: deterministic branching DAGs representing universal-player
//! strategies inside merge-resolution proofs. Nodes are tagged with the
//! proof line that created them; sharing happens only through identical
//! line tags. Isomorphism is decided through canonical forms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::assign::PartialAssignment;
use crate::qbf::{PrefixOrder, Var};
use crate::table::{SemError, StrategyTable};
use crate::trival::TriVal;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmNode {
    Leaf(TriVal),
    /// Branch on an existential variable: `lo` along the negated edge,
    /// `hi` along the positive edge.
    Branch { var: Var, lo: NodeId, hi: NodeId },
}

/// Append-only arena for one proof's merge maps. Node ids are topological
/// by construction (children precede parents).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeMapStore {
    nodes: Vec<MmNode>,
    tags: Vec<usize>,
}

/// Handle to a merge map inside a store.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeMap {
    pub root: NodeId,
}

impl MergeMapStore {
    pub fn new() -> MergeMapStore {
        MergeMapStore::default()
    }

    pub fn node(&self, id: NodeId) -> MmNode {
        self.nodes[id]
    }

    pub fn tag(&self, id: NodeId) -> usize {
        self.tags[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaf(&mut self, value: TriVal, line_tag: usize) -> MergeMap {
        self.nodes.push(MmNode::Leaf(value));
        self.tags.push(line_tag);
        MergeMap {
            root: self.nodes.len() - 1,
        }
    }

    /// A merge map is trivial when its root is the `*` leaf.
    pub fn is_trivial(&self, m: MergeMap) -> bool {
        self.nodes[m.root] == MmNode::Leaf(TriVal::Star)
    }

    /// Root-to-leaf evaluation following the edges labelled by `a`.
    pub fn eval(&self, m: MergeMap, a: &PartialAssignment) -> Result<TriVal, SemError> {
        let mut id = m.root;
        loop {
            match self.nodes[id] {
                MmNode::Leaf(v) => return Ok(v),
                MmNode::Branch { var, lo, hi } => match a.get(var).as_bool() {
                    Some(true) => id = hi,
                    Some(false) => id = lo,
                    None => return Err(SemError::MissingVariable(var)),
                },
            }
        }
    }

    /// Branch variables reachable from the root, sorted.
    pub fn support(&self, m: MergeMap) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .reachable(m.root)
            .into_iter()
            .filter_map(|id| match self.nodes[id] {
                MmNode::Branch { var, .. } => Some(var),
                MmNode::Leaf(_) => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = alloc::collections::BTreeSet::new();
        let mut stack = alloc::vec![root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if let MmNode::Branch { lo, hi, .. } = self.nodes[id] {
                stack.push(lo);
                stack.push(hi);
            }
        }
        seen.into_iter().collect()
    }

    /// Compiles the map to its function table.
    pub fn table(&self, m: MergeMap, u: Var) -> Result<StrategyTable, SemError> {
        let support = self.support(m);
        let probe = StrategyTable::undefined(u, &support)?;
        StrategyTable::build(u, &support, |r| {
            self.eval(m, &probe.assignment_of(r)).unwrap()
        })
    }

    /// Canonical form id: equal ids mean structurally equal maps after
    /// maximal sharing, which is the isomorphism test.
    fn canon(&self, root: NodeId, memo: &mut BTreeMap<NodeId, usize>, interner: &mut Interner) -> usize {
        if let Some(&c) = memo.get(&root) {
            return c;
        }
        let key = match self.nodes[root] {
            MmNode::Leaf(v) => CanonKey::Leaf(v),
            MmNode::Branch { var, lo, hi } => CanonKey::Branch(
                var,
                self.canon(lo, memo, interner),
                self.canon(hi, memo, interner),
            ),
        };
        let c = interner.intern(key);
        memo.insert(root, c);
        c
    }

    pub fn isomorphic(&self, a: MergeMap, b: MergeMap) -> bool {
        let mut interner = Interner::default();
        let mut memo = BTreeMap::new();
        self.canon(a.root, &mut memo, &mut interner) == self.canon(b.root, &mut memo, &mut interner)
    }

    /// Select: isomorphic maps yield the first operand, otherwise a trivial
    /// operand yields the other. Anything else is a blocked resolution.
    pub fn select(&self, a: MergeMap, b: MergeMap) -> Result<MergeMap, SelectError> {
        if self.isomorphic(a, b) {
            Ok(a)
        } else if self.is_trivial(a) {
            Ok(b)
        } else if self.is_trivial(b) {
            Ok(a)
        } else {
            Err(SelectError::Blocked)
        }
    }

    /// Merge: a fresh branch on `x` tagged with the creating line, negated
    /// edge to `a` and positive edge to `b`. The caller guarantees `x` is an
    /// existential left of the universal in question.
    pub fn merge(
        &mut self,
        order: &PrefixOrder,
        a: MergeMap,
        b: MergeMap,
        line_tag: usize,
        x: Var,
        u: Var,
    ) -> Result<MergeMap, SemError> {
        if !order.is_existential(x) {
            return Err(SemError::NotExistential(x));
        }
        if !order.left_of(x, u).unwrap_or(false) {
            return Err(SemError::PivotNotLeftOfUniversal { x, u });
        }
        self.nodes.push(MmNode::Branch {
            var: x,
            lo: a.root,
            hi: b.root,
        });
        self.tags.push(line_tag);
        Ok(MergeMap {
            root: self.nodes.len() - 1,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectError {
    /// Operands neither isomorphic nor either trivial.
    Blocked,
}

impl fmt::Display for SelectError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectError::Blocked => write!(f, "select blocked: maps not isomorphic, none trivial"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum CanonKey {
    Leaf(TriVal),
    Branch(Var, usize, usize),
}

#[derive(Default)]
struct Interner {
    ids: BTreeMap<CanonKey, usize>,
}

impl Interner {
    fn intern(&mut self, key: CanonKey) -> usize {
        let next = self.ids.len();
        *self.ids.entry(key).or_insert(next)
    }
}
