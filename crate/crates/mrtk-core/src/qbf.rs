//! QBF data model: literals, clauses, the alternating quantifier prefix and
//! the prefix-order queries every checker relies on.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::assign::PartialAssignment;
use crate::trival::TriVal;

/// Variables are dense positive integers; names are kept only for display.
pub type Var = u32;

/// A literal, encoded as `var << 1 | negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        debug_assert!(var >= 1);
        Lit(var << 1 | u32::from(!positive))
    }

    pub fn positive(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn negative(var: Var) -> Lit {
        Lit::new(var, false)
    }

    /// Build from a DIMACS-style signed integer (non-zero).
    pub fn from_dimacs(n: i64) -> Lit {
        debug_assert!(n != 0);
        Lit::new(n.unsigned_abs() as Var, n > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negated(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A clause: duplicate-free literals sorted by variable, no variable with
/// both polarities (tautologies are rejected at construction).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Normalizes literal order and drops duplicates; a variable occurring
    /// with both polarities is an error.
    pub fn new(mut lits: Vec<Lit>) -> Result<Clause, QbfError> {
        lits.sort();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(QbfError::TautologicalClause(w[0].var()));
            }
        }
        Ok(Clause { lits })
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    /// Number of distinct variables (clause width).
    pub fn width(&self) -> usize {
        self.lits.len()
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.lits.iter().any(|l| l.var() == var)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    /// Propositional resolvent on `pivot`; requires `pivot` positive in
    /// `self` and negative in `other`. Tautological resolvents are an error.
    pub fn resolve(&self, other: &Clause, pivot: Var) -> Result<Clause, QbfError> {
        if !self.contains(Lit::positive(pivot)) || !other.contains(Lit::negative(pivot)) {
            return Err(QbfError::PivotMissing(pivot));
        }
        let mut lits: Vec<Lit> = self
            .lits
            .iter()
            .chain(other.lits.iter())
            .copied()
            .filter(|l| l.var() != pivot)
            .collect();
        lits.sort();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(QbfError::TautologicalResolvent(w[0].var()));
            }
        }
        Ok(Clause { lits })
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Exists,
    Forall,
}

/// Total preorder on variables induced by the quantifier blocks.
#[derive(Clone, Debug)]
pub struct PrefixOrder {
    /// Block index per variable, `level[var - 1]`; `None` for unquantified.
    level: Vec<Option<u32>>,
    quant: Vec<Option<Quant>>,
}

impl PrefixOrder {
    pub fn level(&self, v: Var) -> Result<u32, QbfError> {
        self.level
            .get(v as usize - 1)
            .copied()
            .flatten()
            .ok_or(QbfError::UnknownVariable(v))
    }

    pub fn quant(&self, v: Var) -> Result<Quant, QbfError> {
        self.quant
            .get(v as usize - 1)
            .copied()
            .flatten()
            .ok_or(QbfError::UnknownVariable(v))
    }

    /// `y` occurs strictly to the left of `x`: same-block variables are
    /// neither left nor right of each other.
    pub fn left_of(&self, y: Var, x: Var) -> Result<bool, QbfError> {
        Ok(self.level(y)? < self.level(x)?)
    }

    pub fn is_existential(&self, v: Var) -> bool {
        matches!(self.quant(v), Ok(Quant::Exists))
    }

    pub fn is_universal(&self, v: Var) -> bool {
        matches!(self.quant(v), Ok(Quant::Forall))
    }
}

/// A QBF in closed prenex CNF form: alternating quantifier blocks over
/// pairwise disjoint variable sets, plus the clause matrix.
#[derive(Clone, Debug)]
pub struct Qbf {
    blocks: Vec<(Quant, Vec<Var>)>,
    matrix: Vec<Clause>,
    num_vars: Var,
    order: PrefixOrder,
}

impl Qbf {
    /// Builds a QBF, checking the prefix invariants. Blocks must alternate,
    /// variable sets must be disjoint and every matrix variable quantified.
    pub fn new(
        blocks: Vec<(Quant, Vec<Var>)>,
        matrix: Vec<Clause>,
        num_vars: Var,
    ) -> Result<Qbf, QbfError> {
        let mut level = alloc::vec![None; num_vars as usize];
        let mut quant = alloc::vec![None; num_vars as usize];
        for (i, (q, vars)) in blocks.iter().enumerate() {
            if i > 0 && blocks[i - 1].0 == *q {
                return Err(QbfError::NonAlternatingBlocks);
            }
            if vars.is_empty() {
                return Err(QbfError::EmptyBlock);
            }
            for &v in vars {
                if v < 1 || v > num_vars {
                    return Err(QbfError::VarOutOfRange(v));
                }
                let slot = &mut level[v as usize - 1];
                if slot.is_some() {
                    return Err(QbfError::DuplicateQuantification(v));
                }
                *slot = Some(i as u32);
                quant[v as usize - 1] = Some(*q);
            }
        }
        let order = PrefixOrder { level, quant };
        for c in &matrix {
            for v in c.vars() {
                order.level(v)?;
            }
        }
        Ok(Qbf {
            blocks,
            matrix,
            num_vars,
            order,
        })
    }

    pub fn blocks(&self) -> &[(Quant, Vec<Var>)] {
        &self.blocks
    }

    pub fn matrix(&self) -> &[Clause] {
        &self.matrix
    }

    pub fn clause(&self, idx: usize) -> Option<&Clause> {
        self.matrix.get(idx)
    }

    pub fn num_vars(&self) -> Var {
        self.num_vars
    }

    pub fn order(&self) -> &PrefixOrder {
        &self.order
    }

    pub fn left_of(&self, y: Var, x: Var) -> Result<bool, QbfError> {
        self.order.left_of(y, x)
    }

    pub fn is_existential(&self, v: Var) -> bool {
        self.order.is_existential(v)
    }

    pub fn is_universal(&self, v: Var) -> bool {
        self.order.is_universal(v)
    }

    /// All existential variables in prefix order.
    pub fn existentials(&self) -> Vec<Var> {
        self.vars_with(Quant::Exists)
    }

    /// All universal variables in prefix order.
    pub fn universals(&self) -> Vec<Var> {
        self.vars_with(Quant::Forall)
    }

    fn vars_with(&self, q: Quant) -> Vec<Var> {
        let mut out = Vec::new();
        for (quant, vars) in &self.blocks {
            if *quant == q {
                let mut vs = vars.clone();
                vs.sort_unstable();
                out.extend(vs);
            }
        }
        out
    }

    /// Existential variables strictly left of the universal `u`.
    pub fn existentials_left_of(&self, u: Var) -> Result<Vec<Var>, QbfError> {
        if !self.is_universal(u) {
            return Err(QbfError::NotUniversal(u));
        }
        let ul = self.order.level(u)?;
        let mut out: Vec<Var> = self
            .existentials()
            .into_iter()
            .filter(|&x| self.order.level(x).unwrap() < ul)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The clause restricted to its existential literals, order preserved.
    pub fn existential_subclause(&self, c: &Clause) -> Result<Clause, QbfError> {
        let mut lits = Vec::new();
        for &l in c.lits() {
            match self.order.quant(l.var())? {
                Quant::Exists => lits.push(l),
                Quant::Forall => {}
            }
        }
        Ok(Clause { lits })
    }

    /// `0` if `u` occurs positively in the clause, `1` if negatively and
    /// `*` if `u` does not occur at all.
    pub fn falsifying_u_literal(&self, c: &Clause, u: Var) -> Result<TriVal, QbfError> {
        if !self.is_universal(u) {
            return Err(QbfError::NotUniversal(u));
        }
        if c.contains(Lit::positive(u)) {
            Ok(TriVal::False)
        } else if c.contains(Lit::negative(u)) {
            Ok(TriVal::True)
        } else {
            Ok(TriVal::Star)
        }
    }

    /// Evaluates the matrix under a complete assignment of all quantified
    /// variables; true iff every clause is satisfied.
    pub fn matrix_eval(&self, alpha: &PartialAssignment) -> Result<bool, QbfError> {
        for (_, vars) in &self.blocks {
            for &v in vars {
                if alpha.get(v).is_star() {
                    return Err(QbfError::IncompleteAssignment(v));
                }
            }
        }
        Ok(self
            .matrix
            .iter()
            .all(|c| c.lits().iter().any(|&l| alpha.satisfies(l) == Some(true))))
    }

    /// Display name of a variable (decimal id).
    pub fn var_name(&self, v: Var) -> String {
        use alloc::string::ToString;
        v.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QbfError {
    TautologicalClause(Var),
    TautologicalResolvent(Var),
    PivotMissing(Var),
    UnknownVariable(Var),
    VarOutOfRange(Var),
    DuplicateQuantification(Var),
    NonAlternatingBlocks,
    EmptyBlock,
    NotUniversal(Var),
    NotExistential(Var),
    IncompleteAssignment(Var),
}

impl fmt::Display for QbfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QbfError::TautologicalClause(v) => write!(f, "tautological clause on variable {v}"),
            QbfError::TautologicalResolvent(v) => {
                write!(f, "tautological resolvent on variable {v}")
            }
            QbfError::PivotMissing(v) => write!(f, "pivot {v} not present with required polarity"),
            QbfError::UnknownVariable(v) => write!(f, "variable {v} is not quantified"),
            QbfError::VarOutOfRange(v) => write!(f, "variable {v} out of declared range"),
            QbfError::DuplicateQuantification(v) => write!(f, "variable {v} quantified twice"),
            QbfError::NonAlternatingBlocks => write!(f, "quantifier blocks do not alternate"),
            QbfError::EmptyBlock => write!(f, "empty quantifier block"),
            QbfError::NotUniversal(v) => write!(f, "variable {v} is not universal"),
            QbfError::NotExistential(v) => write!(f, "variable {v} is not existential"),
            QbfError::IncompleteAssignment(v) => write!(f, "variable {v} unassigned"),
        }
    }
}

/// Collects the set of variables appearing in a slice of clauses.
pub fn clause_vars(clauses: &[Clause]) -> BTreeSet<Var> {
    clauses.iter().flat_map(|c| c.vars()).collect()
}
