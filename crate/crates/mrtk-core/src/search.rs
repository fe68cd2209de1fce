//! Bounded refutation search: iterative deepening over rule skeletons,
//! tracking per-line strategy tables so union steps are gated exactly as
//! the checker gates them. Candidate proofs are replayed through the
//! checker before being returned.
//!
//! Pruning is restricted to what provably preserves completeness within
//! the line bound: duplicate lines (same clause and same strategy
//! functions) are skipped and futile states are memoized. Clause
//! subsumption is deliberately not used to discard lines: a narrower
//! clause carries a different strategy, which can change downstream
//! consistency gates. A closed search space is therefore an exhaustive
//! answer, distinct from an exhausted step budget.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::mrest::{check, replay_script, MresTProof, ProofRule};
use crate::qbf::{Clause, Lit, Qbf, Var};
use crate::table::StrategyTable;

/// Search is exhaustive only at desk scale.
pub const SEARCH_EXISTENTIAL_CAP: usize = 12;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Explored-state budget across all deepening rounds.
    pub max_states: usize,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            max_states: 2_000_000,
        }
    }
}

#[derive(Debug)]
pub enum SearchOutcome {
    Found(MresTProof),
    /// The space of proofs within the line bound is exhausted without a
    /// refutation.
    Closed,
    Budget {
        explored: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchError {
    TooManyExistentials { vars: usize, cap: usize },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::TooManyExistentials { vars, cap } => {
                write!(f, "{vars} existential variables exceed the search cap of {cap}")
            }
        }
    }
}

type LineKey = (Vec<i64>, Vec<(Vec<Var>, Vec<u64>, Vec<u64>)>);
type StateKey = Vec<LineKey>;

struct SearchLine {
    clause: Clause,
    tables: Vec<StrategyTable>,
    rule: ProofRule,
    key: LineKey,
}

struct Searcher<'a> {
    q: &'a Qbf,
    universals: Vec<Var>,
    axioms: Vec<(Clause, Vec<StrategyTable>)>,
    /// State -> largest remaining budget already proven futile.
    futile: BTreeMap<StateKey, usize>,
    explored: usize,
    max_states: usize,
}

enum Dfs {
    Found(Vec<ProofRule>),
    Exhausted,
    Aborted,
}

impl<'a> Searcher<'a> {
    fn line_key(clause: &Clause, tables: &[StrategyTable]) -> LineKey {
        let lits = clause.lits().iter().map(|l| l.to_dimacs()).collect();
        let tkeys = tables
            .iter()
            .map(|t| {
                let m = t.minimized();
                let rows = m.rows();
                let mut def = alloc::vec![0u64; rows.div_ceil(64)];
                let mut val = alloc::vec![0u64; rows.div_ceil(64)];
                for r in 0..rows {
                    match m.get_row(r).as_bool() {
                        Some(b) => {
                            def[r / 64] |= 1 << (r % 64);
                            if b {
                                val[r / 64] |= 1 << (r % 64);
                            }
                        }
                        None => {}
                    }
                }
                (m.support().to_vec(), def, val)
            })
            .collect();
        (lits, tkeys)
    }

    fn state_key(state: &[SearchLine]) -> StateKey {
        let mut key: StateKey = state.iter().map(|l| l.key.clone()).collect();
        key.sort();
        key
    }

    fn push_line(
        state: &mut Vec<SearchLine>,
        clause: Clause,
        tables: Vec<StrategyTable>,
        rule: ProofRule,
    ) {
        let key = Searcher::line_key(&clause, &tables);
        state.push(SearchLine {
            clause,
            tables,
            rule,
            key,
        });
    }

    /// All legal next lines, narrowest resolvents first, axioms and lower
    /// premise indices breaking ties.
    fn moves(&self, state: &[SearchLine]) -> Vec<(Clause, Vec<StrategyTable>, ProofRule)> {
        let mut out: Vec<(usize, usize, Clause, Vec<StrategyTable>, ProofRule)> = Vec::new();
        for (ci, (clause, tables)) in self.axioms.iter().enumerate() {
            out.push((
                clause.width(),
                0,
                clause.clone(),
                tables.clone(),
                ProofRule::Axiom(ci),
            ));
        }
        for j in 0..state.len() {
            for k in 0..state.len() {
                if j == k {
                    continue;
                }
                for &lit in state[j].clause.lits() {
                    if !lit.is_positive() {
                        continue;
                    }
                    let pivot = lit.var();
                    if !state[k].clause.contains(Lit::negative(pivot)) {
                        continue;
                    }
                    let Ok(resolvent) = state[j].clause.resolve(&state[k].clause, pivot) else {
                        continue;
                    };
                    let mut tables = Vec::with_capacity(self.universals.len());
                    let mut ok = true;
                    for (ui, &u) in self.universals.iter().enumerate() {
                        let tj = &state[j].tables[ui];
                        let tk = &state[k].tables[ui];
                        let t = if self.q.left_of(pivot, u).unwrap() {
                            StrategyTable::ifelse(self.q.order(), tk, tj, pivot).unwrap()
                        } else {
                            match tj.union(tk) {
                                Ok(t) => t,
                                Err(_) => {
                                    ok = false;
                                    break;
                                }
                            }
                        };
                        tables.push(t);
                    }
                    if !ok {
                        continue;
                    }
                    out.push((
                        resolvent.width(),
                        1,
                        resolvent,
                        tables,
                        ProofRule::Resolution { j, k, pivot },
                    ));
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1, a.4).cmp(&(b.0, b.1, b.4)));
        out.into_iter().map(|(_, _, c, t, r)| (c, t, r)).collect()
    }

    fn dfs(&mut self, state: &mut Vec<SearchLine>, remaining: usize) -> Dfs {
        if remaining == 0 {
            return Dfs::Exhausted;
        }
        self.explored += 1;
        if self.explored > self.max_states {
            return Dfs::Aborted;
        }
        let key = Searcher::state_key(state);
        if self.futile.get(&key).is_some_and(|&b| b >= remaining) {
            return Dfs::Exhausted;
        }
        for (clause, tables, rule) in self.moves(state) {
            let lkey = Searcher::line_key(&clause, &tables);
            if state.iter().any(|l| l.key == lkey) {
                continue;
            }
            let empty = clause.is_empty();
            Searcher::push_line(state, clause, tables, rule);
            if empty {
                return Dfs::Found(state.iter().map(|l| l.rule).collect());
            }
            match self.dfs(state, remaining - 1) {
                Dfs::Found(s) => return Dfs::Found(s),
                Dfs::Aborted => return Dfs::Aborted,
                Dfs::Exhausted => {}
            }
            state.pop();
        }
        let entry = self.futile.entry(key).or_insert(0);
        *entry = (*entry).max(remaining);
        Dfs::Exhausted
    }
}

/// Iterative-deepening search for a refutation of at most `max_lines`
/// lines. Every outcome is exact: `Found` proofs pass the checker,
/// `Closed` means no refutation exists within the bound, `Budget` means
/// the verdict is unknown.
pub fn bounded_search(
    q: &Qbf,
    max_lines: usize,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let existentials = q.existentials();
    if existentials.len() > SEARCH_EXISTENTIAL_CAP {
        return Err(SearchError::TooManyExistentials {
            vars: existentials.len(),
            cap: SEARCH_EXISTENTIAL_CAP,
        });
    }
    let universals = q.universals();
    let mut axioms = Vec::new();
    for c in q.matrix() {
        let clause = q.existential_subclause(c).unwrap();
        let tables = universals
            .iter()
            .map(|&u| {
                let v = q.falsifying_u_literal(c, u).unwrap();
                StrategyTable::constant(u, &[], v).unwrap()
            })
            .collect();
        axioms.push((clause, tables));
    }
    let mut searcher = Searcher {
        q,
        universals,
        axioms,
        futile: BTreeMap::new(),
        explored: 0,
        max_states: opts.max_states,
    };
    for depth in 1..=max_lines {
        let mut state = Vec::new();
        match searcher.dfs(&mut state, depth) {
            Dfs::Found(steps) => {
                let proof = replay_script(q, &steps).expect("found script must replay");
                let report = check(q, &proof).expect("found proof within caps");
                debug_assert!(report.valid);
                return Ok(SearchOutcome::Found(proof));
            }
            Dfs::Aborted => {
                return Ok(SearchOutcome::Budget {
                    explored: searcher.explored,
                })
            }
            Dfs::Exhausted => {}
        }
    }
    Ok(SearchOutcome::Closed)
}
