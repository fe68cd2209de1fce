//! Proof-theoretic toolkit for merge-resolution refutations of false QBFs.
//!
//! The crate models QBFs in closed prenex CNF form together with two proof
//! systems that build universal winning strategies directly into their lines:
//! classic merge resolution (strategies as merge maps, resolution gated by
//! isomorphism) and its consistency-gated variant whose strategies are hybrid
//! branch/union graphs. On top of the two checkers sit strategy extraction,
//! countermodel verification, conversion between the systems, emission of
//! extended-Frege certificates with universal reduction, benchmark formula
//! generation, an exhaustive game-tree oracle and a bounded refutation search.
//!
//! Everything in here is pure computation over owned data; file formats and
//! IO live in the companion `mrtk` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assign;
pub mod convert;
pub mod crn;
pub mod efrege;
pub mod formula;
pub mod mergemap;
pub mod mres;
pub mod mrest;
pub mod oracle;
pub mod qbf;
pub mod report;
pub mod search;
pub mod table;
pub mod tgraph;
pub mod trival;

#[cfg(test)]
pub(crate) mod testutil;

pub use assign::PartialAssignment;
pub use qbf::{Clause, Lit, PrefixOrder, Qbf, QbfError, Quant, Var};
pub use report::{CapError, CheckReport, Reason};
pub use trival::TriVal;
