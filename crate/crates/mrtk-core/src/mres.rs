//! The classic merge-resolution proof system: lines pair existential
//! clauses with per-universal merge maps, and resolution is gated by map
//! isomorphism (select) or builds a fresh branch node (merge). Needed as a
//! conversion source and as the contrast case for the consistency-gated
//! system: steps blocked here can be legal there.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::mergemap::{MergeMap, MergeMapStore, MmNode};
use crate::mrest::{regularity, ProofRule};
use crate::qbf::{Clause, Qbf, QbfError, Var};
use crate::report::{CheckReport, Reason};

/// Per-universal choice at a resolution step whose pivot is left of the
/// universal. Pivots right of the universal always select.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    Select,
    Merge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MresRule {
    Axiom(usize),
    Resolution {
        j: usize,
        k: usize,
        pivot: Var,
        /// Missing entries default to select.
        choices: BTreeMap<Var, Choice>,
    },
}

impl MresRule {
    pub fn resolution(j: usize, k: usize, pivot: Var) -> MresRule {
        MresRule::Resolution {
            j,
            k,
            pivot,
            choices: BTreeMap::new(),
        }
    }

    pub fn with_choice(self, u: Var, c: Choice) -> MresRule {
        match self {
            MresRule::Resolution {
                j,
                k,
                pivot,
                mut choices,
            } => {
                choices.insert(u, c);
                MresRule::Resolution {
                    j,
                    k,
                    pivot,
                    choices,
                }
            }
            ax => ax,
        }
    }

    /// Rule skeleton with annotations dropped.
    pub fn skeleton(&self) -> ProofRule {
        match *self {
            MresRule::Axiom(ci) => ProofRule::Axiom(ci),
            MresRule::Resolution { j, k, pivot, .. } => ProofRule::Resolution { j, k, pivot },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MresLine {
    pub clause: Clause,
    pub rule: MresRule,
    pub maps: BTreeMap<Var, MergeMap>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MresProof {
    pub lines: Vec<MresLine>,
    pub store: MergeMapStore,
}

impl MresProof {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn steps(&self) -> Vec<ProofRule> {
        self.lines.iter().map(|l| l.rule.skeleton()).collect()
    }

    pub fn total_nodes(&self) -> usize {
        self.lines
            .iter()
            .map(|l| {
                l.maps
                    .values()
                    .map(|m| self.store.reachable(m.root).len())
                    .sum::<usize>()
            })
            .sum()
    }
}

/// Rebuilds a proof from rules and select/merge annotations. Fails with the
/// 1-based line and reason where construction is impossible (which for this
/// system already includes blocked selects).
pub fn replay_mres(q: &Qbf, rules: &[MresRule]) -> Result<MresProof, (usize, Reason)> {
    let universals = q.universals();
    let mut proof = MresProof::default();
    for (i, rule) in rules.iter().enumerate() {
        let lineno = i + 1;
        let line = match rule {
            MresRule::Axiom(ci) => {
                let c = q.clause(*ci).ok_or((lineno, Reason::BadAxiom))?;
                let clause = q
                    .existential_subclause(c)
                    .map_err(|_| (lineno, Reason::BadAxiom))?;
                let maps = universals
                    .iter()
                    .map(|&u| {
                        let v = q.falsifying_u_literal(c, u).unwrap();
                        (u, proof.store.leaf(v, i))
                    })
                    .collect();
                MresLine {
                    clause,
                    rule: rule.clone(),
                    maps,
                }
            }
            MresRule::Resolution {
                j,
                k,
                pivot,
                choices,
            } => {
                let (j, k, pivot) = (*j, *k, *pivot);
                if j >= i || k >= i {
                    return Err((lineno, Reason::BadResolvent));
                }
                if q.is_universal(pivot) {
                    return Err((lineno, Reason::PivotUniversal));
                }
                if !q.is_existential(pivot) {
                    return Err((lineno, Reason::BadResolvent));
                }
                let clause = proof.lines[j]
                    .clause
                    .resolve(&proof.lines[k].clause, pivot)
                    .map_err(|e| match e {
                        QbfError::TautologicalResolvent(_) => {
                            (lineno, Reason::TautologicalResolvent)
                        }
                        _ => (lineno, Reason::BadResolvent),
                    })?;
                let mut maps = BTreeMap::new();
                for &u in &universals {
                    let mj = proof.lines[j].maps[&u];
                    let mk = proof.lines[k].maps[&u];
                    let choice = choices.get(&u).copied().unwrap_or(Choice::Select);
                    let m = match choice {
                        Choice::Select => proof
                            .store
                            .select(mj, mk)
                            .map_err(|_| (lineno, Reason::BlockedSelect))?,
                        Choice::Merge => {
                            if !q.left_of(pivot, u).unwrap() {
                                return Err((lineno, Reason::BadMerge));
                            }
                            proof
                                .store
                                .merge(q.order(), mj, mk, i, pivot, u)
                                .map_err(|_| (lineno, Reason::BadMerge))?
                        }
                    };
                    maps.insert(u, m);
                }
                MresLine {
                    clause,
                    rule: rule.clone(),
                    maps,
                }
            }
        };
        proof.lines.push(line);
    }
    Ok(proof)
}

/// Checks a proof line by line: axiom maps must be falsifying-literal
/// leaves, selects must be legal (isomorphic or one operand trivial) and
/// yield the pinned operand, merges must be fresh branch nodes on the pivot
/// with correct edges and line tag.
pub fn check_mres(q: &Qbf, proof: &MresProof) -> CheckReport {
    let universals = q.universals();
    let mut status = Vec::new();
    let mut max_width = 0;
    for (i, line) in proof.lines.iter().enumerate() {
        max_width = max_width.max(line.clause.width());
        if let Some(reason) = check_line(q, proof, i, &universals) {
            return CheckReport {
                valid: false,
                failing_line: Some(i + 1),
                reason: Some(reason),
                line_status: status,
                size: proof.lines.len(),
                max_width,
                regular: None,
                total_nodes: proof.total_nodes(),
            };
        }
        status.push(true);
    }
    let derives_bot = proof.lines.last().is_some_and(|l| l.clause.is_empty());
    let existentials: BTreeSet<Var> = q.existentials().into_iter().collect();
    CheckReport {
        valid: derives_bot,
        failing_line: if derives_bot {
            None
        } else {
            Some(proof.lines.len())
        },
        reason: if derives_bot {
            None
        } else {
            Some(Reason::NoEmptyClause)
        },
        line_status: status,
        size: proof.lines.len(),
        max_width,
        regular: Some(regularity(&proof.steps(), &existentials)),
        total_nodes: proof.total_nodes(),
    }
}

fn check_line(q: &Qbf, proof: &MresProof, i: usize, universals: &[Var]) -> Option<Reason> {
    let line = &proof.lines[i];
    if line.maps.len() != universals.len() || universals.iter().any(|u| !line.maps.contains_key(u))
    {
        return Some(Reason::BadMerge);
    }
    match &line.rule {
        MresRule::Axiom(ci) => {
            let Some(c) = q.clause(*ci) else {
                return Some(Reason::BadAxiom);
            };
            match q.existential_subclause(c) {
                Ok(sub) if sub == line.clause => {}
                _ => return Some(Reason::BadAxiom),
            }
            for &u in universals {
                let expect = q.falsifying_u_literal(c, u).unwrap();
                if proof.store.node(line.maps[&u].root) != MmNode::Leaf(expect) {
                    return Some(Reason::BadAxiom);
                }
            }
            None
        }
        MresRule::Resolution {
            j,
            k,
            pivot,
            choices,
        } => {
            let (j, k, pivot) = (*j, *k, *pivot);
            if j >= i || k >= i {
                return Some(Reason::BadResolvent);
            }
            if q.is_universal(pivot) {
                return Some(Reason::PivotUniversal);
            }
            if !q.is_existential(pivot) {
                return Some(Reason::BadResolvent);
            }
            match proof.lines[j].clause.resolve(&proof.lines[k].clause, pivot) {
                Ok(r) if r == line.clause => {}
                _ => return Some(Reason::BadResolvent),
            }
            for &u in universals {
                let mj = proof.lines[j].maps[&u];
                let mk = proof.lines[k].maps[&u];
                let choice = choices.get(&u).copied().unwrap_or(Choice::Select);
                let actual = line.maps[&u];
                match choice {
                    Choice::Select => match proof.store.select(mj, mk) {
                        Ok(sel) if sel == actual => {}
                        Ok(_) => return Some(Reason::BadMerge),
                        Err(_) => return Some(Reason::BlockedSelect),
                    },
                    Choice::Merge => {
                        if !q.left_of(pivot, u).unwrap() {
                            return Some(Reason::BadMerge);
                        }
                        let expect = MmNode::Branch {
                            var: pivot,
                            lo: mj.root,
                            hi: mk.root,
                        };
                        if proof.store.node(actual.root) != expect
                            || proof.store.tag(actual.root) != i
                        {
                            return Some(Reason::BadMerge);
                        }
                    }
                }
            }
            None
        }
    }
}
