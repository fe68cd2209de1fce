//! Shared fixtures for unit tests: the two worked QBFs and their
//! refutations, constructed programmatically.

use alloc::vec::Vec;

use crate::mres::{Choice, MresRule};
use crate::mrest::ProofRule;
use crate::qbf::{Clause, Lit, Qbf, Quant, Var};

pub fn clause(lits: &[i64]) -> Clause {
    Clause::new(lits.iter().map(|&n| Lit::from_dimacs(n)).collect()).unwrap()
}

/// exists x(1) forall u(2) exists y(3);
/// (y|x|u) (y|!x) (!y|x) (!y|!x|!u).
pub fn example3() -> Qbf {
    Qbf::new(
        alloc::vec![
            (Quant::Exists, alloc::vec![1]),
            (Quant::Forall, alloc::vec![2]),
            (Quant::Exists, alloc::vec![3]),
        ],
        alloc::vec![
            clause(&[3, 1, 2]),
            clause(&[3, -1]),
            clause(&[-3, 1]),
            clause(&[-3, -1, -2]),
        ],
        3,
    )
    .unwrap()
}

/// The 7-line refutation of [`example3`], 0-based premise indices.
pub fn table1_steps() -> Vec<ProofRule> {
    use ProofRule::Axiom as A;
    let r = |j, k, pivot| ProofRule::Resolution { j, k, pivot };
    alloc::vec![A(0), A(1), r(0, 1, 1), A(2), A(3), r(3, 4, 1), r(2, 5, 3)]
}

/// exists x(1) y(2) forall u(3) exists a(4) b(5); the seven-clause QBF
/// refuted in thirteen lines.
pub fn example5() -> Qbf {
    Qbf::new(
        alloc::vec![
            (Quant::Exists, alloc::vec![1, 2]),
            (Quant::Forall, alloc::vec![3]),
            (Quant::Exists, alloc::vec![4, 5]),
        ],
        alloc::vec![
            clause(&[1, -2, -3, 4]),
            clause(&[-1, -2, 4]),
            clause(&[-1, -2, -3, -4]),
            clause(&[1, -2, -4]),
            clause(&[-1, 2, -3, 5]),
            clause(&[1, 2, 3, 5]),
            clause(&[2, -5]),
        ],
        5,
    )
    .unwrap()
}

/// The 13-line refutation of [`example5`].
pub fn table2_steps() -> Vec<ProofRule> {
    use ProofRule::Axiom as A;
    let r = |j, k, pivot| ProofRule::Resolution { j, k, pivot };
    alloc::vec![
        A(0),
        A(1),
        r(0, 1, 1),
        A(2),
        A(3),
        r(4, 3, 1),
        r(2, 5, 4),
        A(4),
        A(5),
        r(8, 7, 1),
        A(6),
        r(9, 10, 5),
        r(11, 6, 2),
    ]
}

/// Merge-map transcription of the 13-line refutation that the classic
/// checker accepts: select where an operand is trivial or both leaves
/// agree, merge where branching is unavoidable.
pub fn table2_transcription() -> Vec<MresRule> {
    use MresRule::Axiom as A;
    let r = |j, k, pivot: Var, choice: Option<Choice>| {
        let rule = MresRule::resolution(j, k, pivot);
        match choice {
            Some(c) => rule.with_choice(3, c),
            None => rule,
        }
    };
    alloc::vec![
        A(0),
        A(1),
        r(0, 1, 1, Some(Choice::Select)),
        A(2),
        A(3),
        r(4, 3, 1, Some(Choice::Select)),
        r(2, 5, 4, None),
        A(4),
        A(5),
        r(8, 7, 1, Some(Choice::Merge)),
        A(6),
        r(9, 10, 5, None),
        r(11, 6, 2, Some(Choice::Merge)),
    ]
}
