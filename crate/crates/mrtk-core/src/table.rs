//! Explicit function tables for universal-player strategies. Tables are the
//! ground-truth semantics every strategy representation is compared through:
//! merge maps and branch/union graphs are always compiled to tables before
//! consistency or equality is judged.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::assign::PartialAssignment;
use crate::qbf::{PrefixOrder, Quant, Var};
use crate::trival::TriVal;

/// Hard cap on table support size; larger supports are a checker error,
/// never a silent truncation.
pub const MAX_SUPPORT: usize = 20;

/// Packed bit rows; `val` bits are kept zero wherever `def` is zero so that
/// equal functions have equal words.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Rows {
    words: Vec<u64>,
}

impl Rows {
    fn zeroed(rows: usize) -> Rows {
        Rows {
            words: alloc::vec![0; rows.div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, b: bool) {
        let w = &mut self.words[i / 64];
        if b {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }
}

/// A strategy for one universal variable as an explicit table over an
/// ordered existential support. Row index bit `j` carries the value of
/// `support[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTable {
    u: Var,
    support: Vec<Var>,
    def: Rows,
    val: Rows,
}

impl StrategyTable {
    /// Table with every row set to `value`.
    pub fn constant(u: Var, support: &[Var], value: TriVal) -> Result<StrategyTable, SemError> {
        let mut t = StrategyTable::undefined(u, support)?;
        for r in 0..t.rows() {
            t.set_row(r, value);
        }
        Ok(t)
    }

    /// All-`*` table over the given support.
    pub fn undefined(u: Var, support: &[Var]) -> Result<StrategyTable, SemError> {
        let mut support: Vec<Var> = support.to_vec();
        support.sort_unstable();
        support.dedup();
        if support.len() > MAX_SUPPORT {
            return Err(SemError::SupportTooLarge(support.len()));
        }
        let rows = 1usize << support.len();
        Ok(StrategyTable {
            u,
            support,
            def: Rows::zeroed(rows),
            val: Rows::zeroed(rows),
        })
    }

    /// Builds a table row by row from an index-valued function.
    pub fn build(
        u: Var,
        support: &[Var],
        f: impl Fn(usize) -> TriVal,
    ) -> Result<StrategyTable, SemError> {
        let mut t = StrategyTable::undefined(u, support)?;
        for r in 0..t.rows() {
            t.set_row(r, f(r));
        }
        Ok(t)
    }

    pub fn universal(&self) -> Var {
        self.u
    }

    pub fn support(&self) -> &[Var] {
        &self.support
    }

    pub fn rows(&self) -> usize {
        1usize << self.support.len()
    }

    pub fn get_row(&self, r: usize) -> TriVal {
        if !self.def.get(r) {
            TriVal::Star
        } else if self.val.get(r) {
            TriVal::True
        } else {
            TriVal::False
        }
    }

    pub fn set_row(&mut self, r: usize, value: TriVal) {
        match value.as_bool() {
            Some(b) => {
                self.def.set(r, true);
                self.val.set(r, b);
            }
            None => {
                self.def.set(r, false);
                self.val.set(r, false);
            }
        }
    }

    /// Row index of a complete assignment of the support.
    pub fn row_of(&self, a: &PartialAssignment) -> Result<usize, SemError> {
        let mut r = 0usize;
        for (j, &v) in self.support.iter().enumerate() {
            match a.get(v).as_bool() {
                Some(true) => r |= 1 << j,
                Some(false) => {}
                None => return Err(SemError::MissingVariable(v)),
            }
        }
        Ok(r)
    }

    /// Assignment of the support encoded by a row index.
    pub fn assignment_of(&self, r: usize) -> PartialAssignment {
        let mut a = PartialAssignment::new();
        for (j, &v) in self.support.iter().enumerate() {
            a.set(v, TriVal::from_bool(r >> j & 1 == 1));
        }
        a
    }

    pub fn eval(&self, a: &PartialAssignment) -> Result<TriVal, SemError> {
        Ok(self.get_row(self.row_of(a)?))
    }

    /// Reinterprets the table over a larger support (row values replicated
    /// across the new variables).
    pub fn expand(&self, support: &[Var]) -> Result<StrategyTable, SemError> {
        let mut out = StrategyTable::undefined(self.u, support)?;
        debug_assert!(self.support.iter().all(|v| out.support.contains(v)));
        // Position of each old support variable inside the new support.
        let map: Vec<usize> = self
            .support
            .iter()
            .map(|v| out.support.iter().position(|w| w == v).unwrap())
            .collect();
        for big in 0..out.rows() {
            let mut small = 0usize;
            for (j, &pos) in map.iter().enumerate() {
                if big >> pos & 1 == 1 {
                    small |= 1 << j;
                }
            }
            out.set_row(big, self.get_row(small));
        }
        Ok(out)
    }

    fn union_support(&self, other: &StrategyTable) -> Result<Vec<Var>, SemError> {
        if self.u != other.u {
            return Err(SemError::DifferentUniversal(self.u, other.u));
        }
        let mut s: Vec<Var> = self
            .support
            .iter()
            .chain(other.support.iter())
            .copied()
            .collect();
        s.sort_unstable();
        s.dedup();
        if s.len() > MAX_SUPPORT {
            return Err(SemError::SupportTooLarge(s.len()));
        }
        Ok(s)
    }

    /// Consistency over every complete assignment of the union of supports:
    /// the two outputs never clash with `0` against `1`.
    pub fn consistent(&self, other: &StrategyTable) -> Result<bool, SemError> {
        if self.u == other.u && self.support == other.support {
            return Ok(!clash_words(self, other));
        }
        let s = self.union_support(other)?;
        let a = self.expand(&s)?;
        let b = other.expand(&s)?;
        Ok(!clash_words(&a, &b))
    }

    /// Union strategy: pointwise join over the union of supports. Requires
    /// consistency.
    pub fn union(&self, other: &StrategyTable) -> Result<StrategyTable, SemError> {
        if !self.consistent(other)? {
            return Err(SemError::InconsistentStrategies);
        }
        if self.u == other.u && self.support == other.support {
            return Ok(join_words(self, other));
        }
        let s = self.union_support(other)?;
        let a = self.expand(&s)?;
        let b = other.expand(&s)?;
        Ok(join_words(&a, &b))
    }

    /// If-else on pivot `x`: `hi` where `x = 1`, `lo` where `x = 0`. The
    /// operands need not be consistent. `x` joins the support even when both
    /// branches ignore it, which merely dilutes the strategy.
    pub fn ifelse(
        order: &PrefixOrder,
        hi: &StrategyTable,
        lo: &StrategyTable,
        x: Var,
    ) -> Result<StrategyTable, SemError> {
        if hi.u != lo.u {
            return Err(SemError::DifferentUniversal(hi.u, lo.u));
        }
        if order.quant(x).ok() != Some(Quant::Exists) {
            return Err(SemError::NotExistential(x));
        }
        if !order.left_of(x, hi.u).unwrap_or(false) {
            return Err(SemError::PivotNotLeftOfUniversal { x, u: hi.u });
        }
        let mut s = hi.union_support(lo)?;
        if !s.contains(&x) {
            s.push(x);
            s.sort_unstable();
        }
        if s.len() > MAX_SUPPORT {
            return Err(SemError::SupportTooLarge(s.len()));
        }
        let a = hi.expand(&s)?;
        let b = lo.expand(&s)?;
        let xbit = s.iter().position(|&v| v == x).unwrap();
        let mut out = StrategyTable::undefined(hi.u, &s)?;
        for r in 0..out.rows() {
            let v = if r >> xbit & 1 == 1 {
                a.get_row(r)
            } else {
                b.get_row(r)
            };
            out.set_row(r, v);
        }
        Ok(out)
    }

    /// Equality as functions over the union of supports.
    pub fn same_function(&self, other: &StrategyTable) -> Result<bool, SemError> {
        let s = self.union_support(other)?;
        let a = self.expand(&s)?;
        let b = other.expand(&s)?;
        Ok(a.def == b.def && a.val == b.val)
    }

    /// Whether any row pair differing only in `support[j]` differs in value.
    pub fn depends_on(&self, j: usize) -> bool {
        let bit = 1usize << j;
        (0..self.rows())
            .filter(|r| r & bit == 0)
            .any(|r| self.get_row(r) != self.get_row(r | bit))
    }

    /// Drops support variables the table does not depend on.
    pub fn minimized(&self) -> StrategyTable {
        let keep: Vec<Var> = self
            .support
            .iter()
            .enumerate()
            .filter(|&(j, _)| self.depends_on(j))
            .map(|(_, &v)| v)
            .collect();
        let mut out = StrategyTable::undefined(self.u, &keep).unwrap();
        for r in 0..out.rows() {
            let a = out.assignment_of(r);
            // Unkept variables cannot change the value; read them as 0.
            let mut full = 0usize;
            for (j, &v) in self.support.iter().enumerate() {
                if a.get(v) == TriVal::True {
                    full |= 1 << j;
                }
            }
            out.set_row(r, self.get_row(full));
        }
        out
    }
}

impl fmt::Display for StrategyTable {
    /// Debug dump: support header first, then one `<bits> -> {0|1|*}` row
    /// per line, bits in support order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "support:")?;
        for v in &self.support {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        for r in 0..self.rows() {
            let mut bits = String::new();
            for j in 0..self.support.len() {
                bits.push(if r >> j & 1 == 1 { '1' } else { '0' });
            }
            writeln!(f, "{bits} -> {}", self.get_row(r))?;
        }
        Ok(())
    }
}

/// Whether two same-support tables disagree with `0` against `1` anywhere.
fn clash_words(a: &StrategyTable, b: &StrategyTable) -> bool {
    a.def
        .words
        .iter()
        .zip(&b.def.words)
        .zip(a.val.words.iter().zip(&b.val.words))
        .any(|((da, db), (va, vb))| (da & db) & (va ^ vb) != 0)
}

/// Pointwise join of two same-support clash-free tables.
fn join_words(a: &StrategyTable, b: &StrategyTable) -> StrategyTable {
    let mut out = a.clone();
    for (i, w) in out.def.words.iter_mut().enumerate() {
        *w = a.def.words[i] | b.def.words[i];
    }
    for (i, w) in out.val.words.iter_mut().enumerate() {
        *w = (a.def.words[i] & a.val.words[i]) | (b.def.words[i] & b.val.words[i]);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemError {
    DifferentUniversal(Var, Var),
    InconsistentStrategies,
    SupportTooLarge(usize),
    PivotNotLeftOfUniversal { x: Var, u: Var },
    NotExistential(Var),
    MissingVariable(Var),
}

impl fmt::Display for SemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemError::DifferentUniversal(a, b) => {
                write!(f, "strategies for different universals {a} and {b}")
            }
            SemError::InconsistentStrategies => write!(f, "strategies are inconsistent"),
            SemError::SupportTooLarge(n) => {
                write!(f, "support of {n} variables exceeds the cap of {MAX_SUPPORT}")
            }
            SemError::PivotNotLeftOfUniversal { x, u } => {
                write!(f, "pivot {x} is not left of universal {u}")
            }
            SemError::NotExistential(v) => write!(f, "variable {v} is not existential"),
            SemError::MissingVariable(v) => write!(f, "support variable {v} unassigned"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{Qbf, Quant};

    /// exists x1 x2 x3, forall u(4).
    fn order() -> Qbf {
        Qbf::new(
            alloc::vec![
                (Quant::Exists, alloc::vec![1, 2, 3]),
                (Quant::Forall, alloc::vec![4]),
            ],
            alloc::vec![],
            4,
        )
        .unwrap()
    }

    fn tbl(support: &[Var], vals: &[TriVal]) -> StrategyTable {
        StrategyTable::build(4, support, |r| vals[r]).unwrap()
    }

    use TriVal::{False as F, Star as S, True as T};

    #[test]
    fn union_worked_example() {
        // H: x=1 -> 1, x=0 -> *; H': x=1 -> *, x=0 -> 0. Union: 1/0.
        let h = tbl(&[1], &[S, T]);
        let hp = tbl(&[1], &[F, S]);
        assert!(h.consistent(&hp).unwrap());
        let u = h.union(&hp).unwrap();
        assert_eq!(u.get_row(0), F);
        assert_eq!(u.get_row(1), T);
    }

    #[test]
    fn union_identity_and_idempotence() {
        let h = tbl(&[1], &[F, S]);
        let star = StrategyTable::constant(4, &[], S).unwrap();
        assert!(h.union(&star).unwrap().same_function(&h).unwrap());
        assert!(h.union(&h).unwrap().same_function(&h).unwrap());
    }

    #[test]
    fn consistency_examples() {
        // Strategies of the motivating example: consistent but different.
        let h3 = tbl(&[1], &[F, S]);
        let h6 = tbl(&[1], &[S, T]);
        assert!(h3.consistent(&h6).unwrap());
        assert!(!h3.same_function(&h6).unwrap());
        let zero = StrategyTable::constant(4, &[1], F).unwrap();
        let one = StrategyTable::constant(4, &[1], T).unwrap();
        assert!(!zero.consistent(&one).unwrap());
        assert_eq!(zero.union(&one), Err(SemError::InconsistentStrategies));
        let star = StrategyTable::constant(4, &[1], S).unwrap();
        assert!(zero.consistent(&star).unwrap());
        assert!(one.consistent(&star).unwrap());
    }

    #[test]
    fn ifelse_worked_example() {
        // H on y(2): y -> 1, !y -> *. H' on z(3): z -> *, !z -> 0.
        // H ifelse_x H' (x = 1): xy -> 1, x!y -> *, !xz -> *, !x!z -> 0.
        let q = order();
        let h = tbl(&[2], &[S, T]);
        let hp = tbl(&[3], &[F, S]);
        let r = StrategyTable::ifelse(q.order(), &h, &hp, 1).unwrap();
        assert_eq!(r.support(), &[1, 2, 3]);
        let at = |x: bool, y: bool, z: bool| {
            r.eval(&PartialAssignment::from_pairs(&[(1, x), (2, y), (3, z)]))
                .unwrap()
        };
        assert_eq!(at(true, true, false), T);
        assert_eq!(at(true, true, true), T);
        assert_eq!(at(true, false, true), S);
        assert_eq!(at(false, true, true), S);
        assert_eq!(at(false, false, false), F);
        assert_eq!(at(false, true, false), F);
    }

    #[test]
    fn ifelse_dilutes_on_same_operand() {
        let q = order();
        let h = tbl(&[2], &[F, T]);
        let r = StrategyTable::ifelse(q.order(), &h, &h, 1).unwrap();
        assert_eq!(r.support(), &[1, 2]);
        assert!(r.same_function(&h).unwrap());
        // Pivot is in the support even though both branches ignore it.
        assert!(!r.depends_on(0));
    }

    #[test]
    fn ifelse_of_constants_is_pivot_indicator() {
        let q = order();
        let one = StrategyTable::constant(4, &[], T).unwrap();
        let zero = StrategyTable::constant(4, &[], F).unwrap();
        let r = StrategyTable::ifelse(q.order(), &one, &zero, 1).unwrap();
        assert_eq!(r.support(), &[1]);
        assert_eq!(r.get_row(0), F);
        assert_eq!(r.get_row(1), T);
    }

    #[test]
    fn ifelse_pivot_must_be_existential_left_of_u() {
        let q = order();
        let h = tbl(&[1], &[F, T]);
        assert_eq!(
            StrategyTable::ifelse(q.order(), &h, &h, 4),
            Err(SemError::NotExistential(4))
        );
    }

    #[test]
    fn minimization_by_brute_force() {
        let q = order();
        let h = tbl(&[2], &[F, T]);
        let diluted = StrategyTable::ifelse(q.order(), &h, &h, 1).unwrap();
        let min = diluted.minimized();
        assert_eq!(min.support(), &[2]);
        assert!(min.same_function(&diluted).unwrap());
    }

    #[test]
    fn dump_format() {
        let h = tbl(&[1, 3], &[F, T, S, T]);
        let s = alloc::format!("{h}");
        assert_eq!(s, "support: 1 3\n00 -> 0\n10 -> 1\n01 -> *\n11 -> 1\n");
    }

    #[test]
    fn support_cap_enforced() {
        let support: alloc::vec::Vec<Var> = (1..=21).collect();
        assert_eq!(
            StrategyTable::undefined(30, &support),
            Err(SemError::SupportTooLarge(21))
        );
    }
}
