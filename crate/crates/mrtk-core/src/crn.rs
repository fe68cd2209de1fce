//! Completion-principle benchmark formulas: an n-by-n grid of existential
//! selectors around a single universal, hard for every regular proof system
//! of the consistency-gated family.

use alloc::vec::Vec;

use crate::qbf::{Clause, Lit, Qbf, Quant, Var};

/// A generated instance with its variable layout. Variables are laid out
/// as `x_ij` row-major in `1..=n*n`, then `z`, then `a_1..a_n`, then
/// `b_1..b_n`; prefix `exists X, forall z, exists A+B`.
#[derive(Clone, Debug)]
pub struct CrInstance {
    pub n: usize,
    pub qbf: Qbf,
}

impl CrInstance {
    pub fn x(&self, i: usize, j: usize) -> Var {
        debug_assert!(1 <= i && i <= self.n && 1 <= j && j <= self.n);
        ((i - 1) * self.n + j) as Var
    }

    pub fn z(&self) -> Var {
        (self.n * self.n + 1) as Var
    }

    pub fn a(&self, i: usize) -> Var {
        (self.n * self.n + 1 + i) as Var
    }

    pub fn b(&self, j: usize) -> Var {
        (self.n * self.n + 1 + self.n + j) as Var
    }

    pub fn num_vars(&self) -> usize {
        self.n * self.n + 2 * self.n + 1
    }
}

/// Generates the instance of side length `n`: clauses `A_ij = x_ij | z |
/// a_i` and `B_ij = !x_ij | !z | b_j` in row-major order, then the two
/// completion clauses `!a_1 | .. | !a_n` and `!b_1 | .. | !b_n`.
pub fn gen_cr(n: usize) -> CrInstance {
    assert!(n >= 1);
    let nn = n * n;
    let num_vars = (nn + 2 * n + 1) as Var;
    let x = |i: usize, j: usize| ((i - 1) * n + j) as Var;
    let z = (nn + 1) as Var;
    let a = |i: usize| (nn + 1 + i) as Var;
    let b = |j: usize| (nn + 1 + n + j) as Var;

    let mut matrix = Vec::with_capacity(2 * nn + 2);
    for i in 1..=n {
        for j in 1..=n {
            matrix.push(
                Clause::new(alloc::vec![
                    Lit::positive(x(i, j)),
                    Lit::positive(z),
                    Lit::positive(a(i)),
                ])
                .unwrap(),
            );
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            matrix.push(
                Clause::new(alloc::vec![
                    Lit::negative(x(i, j)),
                    Lit::negative(z),
                    Lit::positive(b(j)),
                ])
                .unwrap(),
            );
        }
    }
    matrix.push(Clause::new((1..=n).map(|i| Lit::negative(a(i))).collect()).unwrap());
    matrix.push(Clause::new((1..=n).map(|j| Lit::negative(b(j))).collect()).unwrap());

    let blocks = alloc::vec![
        (Quant::Exists, (1..=nn as Var).collect::<Vec<Var>>()),
        (Quant::Forall, alloc::vec![z]),
        (Quant::Exists, (nn as Var + 2..=num_vars).collect::<Vec<Var>>()),
    ];
    let qbf = Qbf::new(blocks, matrix, num_vars).unwrap();
    CrInstance { n, qbf }
}

/// The closed-form countermodel rule for the single universal: play 1
/// exactly when some row of the grid is all ones. Validated against the
/// game oracle at small n before use at larger n; it is a derived artifact
/// of this module, not ground truth.
pub fn z_rule(n: usize, grid: &dyn Fn(usize, usize) -> bool) -> bool {
    (1..=n).any(|i| (1..=n).all(|j| grid(i, j)))
}
