//! Partial assignments over three-valued logic and their two operations:
//! consistency and union.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::qbf::{Lit, Var};
use crate::trival::TriVal;

/// A partial assignment. Only `0`/`1` bindings are stored; every other
/// variable is implicitly `*`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    map: BTreeMap<Var, bool>,
}

impl PartialAssignment {
    pub fn new() -> PartialAssignment {
        PartialAssignment::default()
    }

    pub fn from_pairs(pairs: &[(Var, bool)]) -> PartialAssignment {
        PartialAssignment {
            map: pairs.iter().copied().collect(),
        }
    }

    pub fn get(&self, v: Var) -> TriVal {
        match self.map.get(&v) {
            Some(&b) => TriVal::from_bool(b),
            None => TriVal::Star,
        }
    }

    /// Binds `v`; setting `*` removes any binding.
    pub fn set(&mut self, v: Var, value: TriVal) {
        match value.as_bool() {
            Some(b) => {
                self.map.insert(v, b);
            }
            None => {
                self.map.remove(&v);
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.map.iter().map(|(&v, &b)| (v, b))
    }

    /// Whether the literal is satisfied, or `None` if its variable is unset.
    pub fn satisfies(&self, lit: Lit) -> Option<bool> {
        self.map.get(&lit.var()).map(|&b| b == lit.is_positive())
    }

    /// The smallest assignment falsifying a clause: every literal negated.
    pub fn falsifying(clause: &crate::qbf::Clause) -> PartialAssignment {
        PartialAssignment {
            map: clause
                .lits()
                .iter()
                .map(|l| (l.var(), !l.is_positive()))
                .collect(),
        }
    }

    /// Consistent iff no variable is bound to `1` in one and `0` in the other.
    pub fn consistent(&self, other: &PartialAssignment) -> bool {
        let (small, large) = if self.map.len() <= other.map.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .map
            .iter()
            .all(|(v, &b)| large.map.get(v).map_or(true, |&c| b == c))
    }

    /// Pointwise join; defined only for consistent assignments.
    pub fn union(&self, other: &PartialAssignment) -> Result<PartialAssignment, AssignError> {
        let mut map = self.map.clone();
        for (&v, &b) in &other.map {
            match map.insert(v, b) {
                Some(prev) if prev != b => return Err(AssignError::Inconsistent(v)),
                _ => {}
            }
        }
        Ok(PartialAssignment { map })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssignError {
    Inconsistent(Var),
}

impl fmt::Display for AssignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssignError::Inconsistent(v) => {
                write!(f, "assignments clash on variable {v}")
            }
        }
    }
}
