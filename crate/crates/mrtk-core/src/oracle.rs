//! Exhaustive two-player game evaluation of small QBFs: decides falsity
//! and, for false inputs, tabulates the universal player's winning moves.
//!
//! Tables are indexed by the existentials left of each universal; earlier
//! universals are played at their canonical (least) winning value when a
//! later table is computed, so the canonical selection always composes to
//! a countermodel. Arbitrary viable selections compose when there is a
//! single universal.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::assign::PartialAssignment;
use crate::qbf::{Qbf, Quant, Var};
use crate::table::StrategyTable;
use crate::trival::TriVal;

/// Exhaustive game evaluation works up to this many total variables.
pub const ORACLE_VAR_CAP: usize = 16;

/// Winning moves for one universal over the existentials left of it.
#[derive(Clone, Debug)]
pub struct WinningMoves {
    pub u: Var,
    /// Sorted existentials left of `u`; row bit `j` carries `support[j]`.
    pub support: Vec<Var>,
    /// Per row: whether playing 0 (resp. 1) still wins.
    moves: Vec<(bool, bool)>,
}

impl WinningMoves {
    pub fn rows(&self) -> usize {
        self.moves.len()
    }

    pub fn viable(&self, row: usize, value: bool) -> bool {
        let (zero, one) = self.moves[row];
        if value {
            one
        } else {
            zero
        }
    }

    pub fn has_winning_move(&self, row: usize) -> bool {
        let (zero, one) = self.moves[row];
        zero || one
    }

    /// Least winning value per row as a total strategy table.
    pub fn canonical_table(&self) -> StrategyTable {
        StrategyTable::build(self.u, &self.support, |r| {
            let (zero, one) = self.moves[r];
            debug_assert!(zero || one);
            TriVal::from_bool(!zero && one)
        })
        .unwrap()
    }
}

/// Per-universal winning-move tables of a false QBF.
#[derive(Clone, Debug)]
pub struct CountermodelOracle {
    pub per_universal: BTreeMap<Var, WinningMoves>,
}

impl CountermodelOracle {
    pub fn canonical_tables(&self) -> BTreeMap<Var, StrategyTable> {
        self.per_universal
            .iter()
            .map(|(&u, w)| (u, w.canonical_table()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    TooManyVariables { vars: usize, cap: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyVariables { vars, cap } => {
                write!(f, "{vars} variables exceed the game-tree cap of {cap}")
            }
        }
    }
}

struct Game<'a> {
    q: &'a Qbf,
    /// Prefix variables flattened in block order, ascending within blocks.
    prefix: Vec<(Var, Quant)>,
    memo: BTreeMap<(usize, u32), bool>,
}

impl<'a> Game<'a> {
    fn new(q: &'a Qbf) -> Game<'a> {
        let mut prefix = Vec::new();
        for (quant, vars) in q.blocks() {
            let mut vs = vars.clone();
            vs.sort_unstable();
            prefix.extend(vs.into_iter().map(|v| (v, *quant)));
        }
        Game {
            q,
            prefix,
            memo: BTreeMap::new(),
        }
    }

    fn assignment(&self, upto: usize, bits: u32) -> PartialAssignment {
        let mut a = PartialAssignment::new();
        for (i, &(v, _)) in self.prefix.iter().take(upto).enumerate() {
            a.set(v, TriVal::from_bool(bits >> i & 1 == 1));
        }
        a
    }

    /// True iff the universal player wins from this position: against
    /// every existential move there is a universal continuation falsifying
    /// the matrix.
    fn universal_wins(&mut self, idx: usize, bits: u32) -> bool {
        if idx == self.prefix.len() {
            return !self.q.matrix_eval(&self.assignment(idx, bits)).unwrap();
        }
        let key = (idx, bits & ((1u32 << idx) - 1));
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let (_, quant) = self.prefix[idx];
        let w0 = self.universal_wins(idx + 1, bits);
        let w = match quant {
            Quant::Exists => w0 && self.universal_wins(idx + 1, bits | 1 << idx),
            Quant::Forall => w0 || self.universal_wins(idx + 1, bits | 1 << idx),
        };
        self.memo.insert(key, w);
        w
    }
}

/// Evaluates the QBF as a game. Returns the winning-move tables when the
/// universal player wins (the QBF is false) and `None` when it is true.
pub fn brute_force_countermodel(q: &Qbf) -> Result<Option<CountermodelOracle>, OracleError> {
    let total: usize = q.blocks().iter().map(|(_, vs)| vs.len()).sum();
    if total > ORACLE_VAR_CAP {
        return Err(OracleError::TooManyVariables {
            vars: total,
            cap: ORACLE_VAR_CAP,
        });
    }
    let mut game = Game::new(q);
    if !game.universal_wins(0, 0) {
        return Ok(None);
    }

    let mut per_universal = BTreeMap::new();
    for (pos, (u, quant)) in game.prefix.clone().into_iter().enumerate() {
        if quant != Quant::Forall {
            continue;
        }
        let support = q.existentials_left_of(u).unwrap();
        let rows = 1usize << support.len();
        let mut moves = Vec::with_capacity(rows);
        for row in 0..rows {
            let eps =
                |v: Var| support.iter().position(|&s| s == v).map(|j| row >> j & 1 == 1);
            // Walk the prefix to the position of u, existentials per the
            // row, earlier universals at their least winning value.
            let mut bits = 0u32;
            for (i, &(w, wq)) in game.prefix.clone().iter().enumerate().take(pos) {
                let value = match wq {
                    Quant::Exists => eps(w).unwrap_or(false),
                    Quant::Forall => {
                        debug_assert!(game.universal_wins(i, bits));
                        !game.universal_wins(i + 1, bits)
                    }
                };
                if value {
                    bits |= 1 << i;
                }
            }
            let zero = game.universal_wins(pos + 1, bits);
            let one = game.universal_wins(pos + 1, bits | 1 << pos);
            moves.push((zero, one));
        }
        per_universal.insert(
            u,
            WinningMoves {
                u,
                support,
                moves,
            },
        );
    }
    Ok(Some(CountermodelOracle { per_universal }))
}
