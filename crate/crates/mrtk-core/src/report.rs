//! Check verdicts shared by the proof checkers.

use core::fmt;

/// Why a proof line was rejected. Displayed in kebab-case in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    BadAxiom,
    BadResolvent,
    TautologicalResolvent,
    InconsistentUnion,
    WrongNodeKind,
    PivotUniversal,
    BlockedSelect,
    BadMerge,
    NoEmptyClause,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::BadAxiom => "bad-axiom",
            Reason::BadResolvent => "bad-resolvent",
            Reason::TautologicalResolvent => "tautological-resolvent",
            Reason::InconsistentUnion => "inconsistent-union",
            Reason::WrongNodeKind => "wrong-node-kind",
            Reason::PivotUniversal => "pivot-universal",
            Reason::BlockedSelect => "blocked-select",
            Reason::BadMerge => "bad-merge",
            Reason::NoEmptyClause => "no-empty-clause",
        };
        write!(f, "{s}")
    }
}

/// Outcome of checking a whole proof. `line_status` holds per-line verdicts
/// up to and including the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    pub failing_line: Option<usize>,
    pub reason: Option<Reason>,
    pub line_status: alloc::vec::Vec<bool>,
    /// Number of proof lines.
    pub size: usize,
    /// Maximum clause width over all lines.
    pub max_width: usize,
    /// Regular with respect to every existential pivot.
    pub regular: Option<bool>,
    /// Total strategy nodes summed over all lines and universals.
    pub total_nodes: usize,
}

impl CheckReport {
    pub fn invalid_at(line: usize, reason: Reason) -> CheckReport {
        CheckReport {
            valid: false,
            failing_line: Some(line),
            reason: Some(reason),
            line_status: alloc::vec::Vec::new(),
            size: 0,
            max_width: 0,
            regular: None,
            total_nodes: 0,
        }
    }
}

/// A resource cap was hit before a verdict could be reached. Distinct from
/// an invalid proof: the checker refuses to guess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CapError {
    /// Consistency oracle support exceeded `table::MAX_SUPPORT` at a line.
    UnverifiableLine { line: usize, support: usize },
    /// Too many variables for an exhaustive pass.
    TooManyVariables { vars: usize, cap: usize },
    /// Search step budget exhausted.
    BudgetExhausted { explored: usize },
}

impl fmt::Display for CapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapError::UnverifiableLine { line, support } => write!(
                f,
                "line {line} unverifiable: consistency support of {support} variables exceeds the cap"
            ),
            CapError::TooManyVariables { vars, cap } => {
                write!(f, "{vars} variables exceed the exhaustive cap of {cap}")
            }
            CapError::BudgetExhausted { explored } => {
                write!(f, "search budget exhausted after {explored} states")
            }
        }
    }
}
