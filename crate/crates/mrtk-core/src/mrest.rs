//! The consistency-gated merge-resolution proof system over strategy
//! graphs: proof lines, the forced graph construction, the checker with its
//! brute-force consistency oracle, regularity detection, and countermodel
//! extraction and verification.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::assign::PartialAssignment;
use crate::qbf::{Clause, Qbf, QbfError, Var};
use crate::report::{CapError, CheckReport, Reason};
use crate::table::MAX_SUPPORT;
use crate::tgraph::{EvalError, TGraph, TGraphStore, TNode, TableError};
use crate::trival::TriVal;

/// One derivation step. Premise indices are 0-based positions in the line
/// list; reports show them 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProofRule {
    Axiom(usize),
    /// `clause = res(C_j, C_k, pivot)` with the pivot positive in line `j`
    /// and negative in line `k`.
    Resolution { j: usize, k: usize, pivot: Var },
}

/// A proof line: existential clause, rule, and one strategy graph per
/// universal variable. Resolution graphs are rule-determined: an if-else
/// node when the pivot is left of the universal, a union node when right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MresTLine {
    pub clause: Clause,
    pub rule: ProofRule,
    pub graphs: BTreeMap<Var, TGraph>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MresTProof {
    pub lines: Vec<MresTLine>,
    pub store: TGraphStore,
}

impl MresTProof {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Rule skeleton of the proof.
    pub fn steps(&self) -> Vec<ProofRule> {
        self.lines.iter().map(|l| l.rule).collect()
    }

    /// Strategy nodes summed over all lines and universals.
    pub fn total_nodes(&self) -> usize {
        self.lines
            .iter()
            .map(|l| {
                l.graphs
                    .values()
                    .map(|&g| self.store.node_count(g))
                    .sum::<usize>()
            })
            .sum()
    }
}

/// Rebuilds a proof from its rule skeleton: clauses are replayed through
/// axiom download and resolution, graphs are constructed per the forced
/// rules. Structural failures return the 1-based line and reason; the
/// consistency gates are left to [`check`].
pub fn replay_script(q: &Qbf, steps: &[ProofRule]) -> Result<MresTProof, (usize, Reason)> {
    let universals = q.universals();
    let mut proof = MresTProof::default();
    for (i, &rule) in steps.iter().enumerate() {
        let lineno = i + 1;
        let line = match rule {
            ProofRule::Axiom(ci) => {
                let c = q.clause(ci).ok_or((lineno, Reason::BadAxiom))?;
                let clause = q
                    .existential_subclause(c)
                    .map_err(|_| (lineno, Reason::BadAxiom))?;
                let graphs = universals
                    .iter()
                    .map(|&u| {
                        let v = q.falsifying_u_literal(c, u).unwrap();
                        (u, proof.store.leaf(v))
                    })
                    .collect();
                MresTLine {
                    clause,
                    rule,
                    graphs,
                }
            }
            ProofRule::Resolution { j, k, pivot } => {
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
                let mut graphs = BTreeMap::new();
                for &u in &universals {
                    let gj = proof.lines[j].graphs[&u];
                    let gk = proof.lines[k].graphs[&u];
                    let g = if q.left_of(pivot, u).unwrap() {
                        // Positive edge selects the premise whose clause the
                        // pivot satisfies is the other one, i.e. line k.
                        proof.store.ifelse(pivot, gk, gj)
                    } else {
                        proof.store.hash(gj, gk)
                    };
                    graphs.insert(u, g);
                }
                MresTLine {
                    clause,
                    rule,
                    graphs,
                }
            }
        };
        proof.lines.push(line);
    }
    Ok(proof)
}

/// Checks a proof line by line: axiom lines must match the existential
/// subclause with falsifying-literal leaves, resolution lines must carry
/// the exact rule-determined graphs, and every union step must join
/// consistent strategies (verified by the exhaustive table oracle).
pub fn check(q: &Qbf, proof: &MresTProof) -> Result<CheckReport, CapError> {
    let universals = q.universals();
    let mut status = Vec::new();
    let mut max_width = 0;
    for (i, line) in proof.lines.iter().enumerate() {
        max_width = max_width.max(line.clause.width());
        match check_line(q, proof, i, &universals)? {
            Some(reason) => {
                return Ok(CheckReport {
                    valid: false,
                    failing_line: Some(i + 1),
                    reason: Some(reason),
                    line_status: status,
                    size: proof.lines.len(),
                    max_width,
                    regular: None,
                    total_nodes: proof.total_nodes(),
                })
            }
            None => status.push(true),
        }
    }
    let derives_bot = proof.lines.last().is_some_and(|l| l.clause.is_empty());
    let existentials: BTreeSet<Var> = q.existentials().into_iter().collect();
    Ok(CheckReport {
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
    })
}

fn check_line(
    q: &Qbf,
    proof: &MresTProof,
    i: usize,
    universals: &[Var],
) -> Result<Option<Reason>, CapError> {
    let line = &proof.lines[i];
    if line.graphs.len() != universals.len() || universals.iter().any(|u| !line.graphs.contains_key(u))
    {
        return Ok(Some(Reason::WrongNodeKind));
    }
    match line.rule {
        ProofRule::Axiom(ci) => {
            let Some(c) = q.clause(ci) else {
                return Ok(Some(Reason::BadAxiom));
            };
            match q.existential_subclause(c) {
                Ok(sub) if sub == line.clause => {}
                _ => return Ok(Some(Reason::BadAxiom)),
            }
            for &u in universals {
                let expect = q.falsifying_u_literal(c, u).unwrap();
                if proof.store.node(line.graphs[&u].root) != TNode::Leaf(expect) {
                    return Ok(Some(Reason::BadAxiom));
                }
            }
            Ok(None)
        }
        ProofRule::Resolution { j, k, pivot } => {
            if j >= i || k >= i {
                return Ok(Some(Reason::BadResolvent));
            }
            if q.is_universal(pivot) {
                return Ok(Some(Reason::PivotUniversal));
            }
            if !q.is_existential(pivot) {
                return Ok(Some(Reason::BadResolvent));
            }
            match proof.lines[j].clause.resolve(&proof.lines[k].clause, pivot) {
                Ok(r) if r == line.clause => {}
                Err(QbfError::TautologicalResolvent(_)) => {
                    return Ok(Some(Reason::TautologicalResolvent))
                }
                _ => return Ok(Some(Reason::BadResolvent)),
            }
            for &u in universals {
                let gj = proof.lines[j].graphs[&u];
                let gk = proof.lines[k].graphs[&u];
                let actual = proof.store.node(line.graphs[&u].root);
                if q.left_of(pivot, u).unwrap() {
                    let expect = TNode::IfElse {
                        var: pivot,
                        hi: gk.root,
                        lo: gj.root,
                    };
                    if actual != expect {
                        return Ok(Some(Reason::WrongNodeKind));
                    }
                } else {
                    let expect = TNode::Hash {
                        a: gj.root,
                        b: gk.root,
                    };
                    if actual != expect {
                        return Ok(Some(Reason::WrongNodeKind));
                    }
                    match union_consistent(q, &proof.store, gj, gk, u, i + 1)? {
                        true => {}
                        false => return Ok(Some(Reason::InconsistentUnion)),
                    }
                }
            }
            Ok(None)
        }
    }
}

fn union_consistent(
    _q: &Qbf,
    store: &TGraphStore,
    gj: TGraph,
    gk: TGraph,
    u: Var,
    lineno: usize,
) -> Result<bool, CapError> {
    let support: BTreeSet<Var> = store
        .support(gj)
        .into_iter()
        .chain(store.support(gk))
        .collect();
    if support.len() > MAX_SUPPORT {
        return Err(CapError::UnverifiableLine {
            line: lineno,
            support: support.len(),
        });
    }
    let tj = table_or_cap(store, gj, u, lineno)?;
    let tk = table_or_cap(store, gk, u, lineno)?;
    match tj.consistent(&tk) {
        Ok(b) => Ok(b),
        // A clash inside an already-accepted premise graph cannot happen;
        // reaching this means the proof object was tampered with.
        Err(_) => Ok(false),
    }
}

fn table_or_cap(
    store: &TGraphStore,
    g: TGraph,
    u: Var,
    lineno: usize,
) -> Result<crate::table::StrategyTable, CapError> {
    match store.table(g, u) {
        Ok(t) => Ok(t),
        Err(TableError::Sem(crate::table::SemError::SupportTooLarge(n))) => {
            Err(CapError::UnverifiableLine {
                line: lineno,
                support: n,
            })
        }
        Err(_) => Err(CapError::UnverifiableLine {
            line: lineno,
            support: usize::MAX,
        }),
    }
}

/// `S`-regularity: for each variable in `s`, no derivation path from an
/// axiom to the final line uses it as pivot more than once. Checked by
/// propagating, per line, the set of pivots used on some path into it.
pub fn regularity(steps: &[ProofRule], s: &BTreeSet<Var>) -> bool {
    let mut path_pivots: Vec<BTreeSet<Var>> = Vec::with_capacity(steps.len());
    for step in steps {
        let set = match *step {
            ProofRule::Axiom(_) => BTreeSet::new(),
            ProofRule::Resolution { j, k, pivot } => {
                let mut set: BTreeSet<Var> = path_pivots[j]
                    .union(&path_pivots[k])
                    .copied()
                    .collect();
                if s.contains(&pivot)
                    && (path_pivots[j].contains(&pivot) || path_pivots[k].contains(&pivot))
                {
                    return false;
                }
                set.insert(pivot);
                set
            }
        };
        path_pivots.push(set);
    }
    true
}

/// The countermodel carried by a valid refutation: the final line's
/// strategy graphs.
pub fn extract_countermodel(
    q: &Qbf,
    proof: &MresTProof,
) -> Result<BTreeMap<Var, TGraph>, ExtractError> {
    let report = check(q, proof).map_err(ExtractError::Cap)?;
    if !report.valid {
        return Err(ExtractError::InvalidProof(report));
    }
    Ok(proof.lines.last().unwrap().graphs.clone())
}

#[derive(Clone, Debug)]
pub enum ExtractError {
    InvalidProof(CheckReport),
    Cap(CapError),
}

impl fmt::Display for ExtractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractError::InvalidProof(r) => write!(
                f,
                "proof invalid at line {:?}: {:?}",
                r.failing_line, r.reason
            ),
            ExtractError::Cap(c) => write!(f, "{c}"),
        }
    }
}

/// Outcome of an exhaustive countermodel check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountermodelReport {
    pub holds: bool,
    /// Assignments where only the `*`-defaulted completion falsified a
    /// clause. Nonzero on a strategy extracted from a valid proof signals a
    /// checker bug; on external strategies it flags ambiguity.
    pub ambiguous: usize,
    pub first_failure: Option<PartialAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    TooManyVariables { vars: usize, cap: usize },
    MalformedStrategy(EvalError),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::TooManyVariables { vars, cap } => {
                write!(f, "{vars} existential variables exceed the cap of {cap}")
            }
            VerifyError::MalformedStrategy(e) => write!(f, "malformed strategy: {e}"),
        }
    }
}

/// Checks that the per-universal strategies form a countermodel: for every
/// complete existential assignment, playing the strategies falsifies some
/// matrix clause. Residual `*` values are defaulted to 0 but flagged; a
/// countermodel from a valid proof never needs the default.
pub fn verify_countermodel(
    q: &Qbf,
    store: &TGraphStore,
    strategies: &BTreeMap<Var, TGraph>,
) -> Result<CountermodelReport, VerifyError> {
    let existentials = q.existentials();
    if existentials.len() > MAX_SUPPORT {
        return Err(VerifyError::TooManyVariables {
            vars: existentials.len(),
            cap: MAX_SUPPORT,
        });
    }
    let mut ambiguous = 0usize;
    for bits in 0..(1usize << existentials.len()) {
        let mut alpha = PartialAssignment::new();
        for (i, &x) in existentials.iter().enumerate() {
            alpha.set(x, TriVal::from_bool(bits >> i & 1 == 1));
        }
        let mut strict = alpha.clone();
        let mut starred: Vec<Var> = Vec::new();
        for (&u, &g) in strategies {
            match store.eval(g, &alpha).map_err(VerifyError::MalformedStrategy)? {
                TriVal::Star => starred.push(u),
                v => strict.set(u, v),
            }
        }
        if falsifies_some_clause(q, &strict) {
            continue;
        }
        let mut defaulted = strict.clone();
        for &u in &starred {
            defaulted.set(u, TriVal::False);
        }
        if falsifies_some_clause(q, &defaulted) {
            ambiguous += 1;
        } else {
            return Ok(CountermodelReport {
                holds: false,
                ambiguous,
                first_failure: Some(alpha),
            });
        }
    }
    Ok(CountermodelReport {
        holds: true,
        ambiguous,
        first_failure: None,
    })
}

/// True iff some matrix clause has every literal assigned false.
fn falsifies_some_clause(q: &Qbf, a: &PartialAssignment) -> bool {
    q.matrix()
        .iter()
        .any(|c| c.lits().iter().all(|&l| a.satisfies(l) == Some(false)))
}

/// Line-local soundness: for every line and every complete existential
/// assignment falsifying its clause, the matrix restricted by the
/// assignment plus the line's non-`*` strategy values contains an empty
/// clause. Returns the first violating (1-based line, assignment), if any.
pub fn line_local_soundness(
    q: &Qbf,
    proof: &MresTProof,
) -> Result<Option<(usize, PartialAssignment)>, VerifyError> {
    let existentials = q.existentials();
    if existentials.len() > MAX_SUPPORT {
        return Err(VerifyError::TooManyVariables {
            vars: existentials.len(),
            cap: MAX_SUPPORT,
        });
    }
    for (i, line) in proof.lines.iter().enumerate() {
        for bits in 0..(1usize << existentials.len()) {
            let mut alpha = PartialAssignment::new();
            for (bi, &x) in existentials.iter().enumerate() {
                alpha.set(x, TriVal::from_bool(bits >> bi & 1 == 1));
            }
            let falsifies_line = line
                .clause
                .lits()
                .iter()
                .all(|&l| alpha.satisfies(l) == Some(false));
            if !falsifies_line {
                continue;
            }
            let mut with_strats = alpha.clone();
            for (&u, &g) in &line.graphs {
                match proof
                    .store
                    .eval(g, &alpha)
                    .map_err(VerifyError::MalformedStrategy)?
                {
                    TriVal::Star => {}
                    v => with_strats.set(u, v),
                }
            }
            if !falsifies_some_clause(q, &with_strats) {
                return Ok(Some((i + 1, alpha)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{example3, example5, table1_steps, table2_steps};
    use ProofRule::{Axiom as A, Resolution};
    use TriVal::{False as F, Star as S, True as T};

    fn r(j: usize, k: usize, pivot: Var) -> ProofRule {
        Resolution { j, k, pivot }
    }

    #[test]
    fn table1_checks_valid() {
        let q = example3();
        let proof = replay_script(&q, &table1_steps()).unwrap();
        let report = check(&q, &proof).unwrap();
        assert!(report.valid, "{report:?}");
        assert_eq!(report.size, 7);
        assert_eq!(report.max_width, 2);
        assert_eq!(report.regular, Some(true));
        assert_eq!(report.total_nodes, 17);
        // Strategy tables at lines 3 and 6 match the motivating example.
        let t3 = proof.store.table(proof.lines[2].graphs[&2], 2).unwrap();
        assert_eq!((t3.get_row(0), t3.get_row(1)), (F, S));
        let t6 = proof.store.table(proof.lines[5].graphs[&2], 2).unwrap();
        assert_eq!((t6.get_row(0), t6.get_row(1)), (S, T));
    }

    #[test]
    fn table1_final_strategy_is_identity_on_x() {
        let q = example3();
        let proof = replay_script(&q, &table1_steps()).unwrap();
        let cm = extract_countermodel(&q, &proof).unwrap();
        let t = proof.store.table(cm[&2], 2).unwrap();
        assert_eq!(t.support(), &[1]);
        assert_eq!((t.get_row(0), t.get_row(1)), (F, T));
        let report = verify_countermodel(&q, &proof.store, &cm).unwrap();
        assert!(report.holds);
        assert_eq!(report.ambiguous, 0);
    }

    #[test]
    fn table2_checks_valid() {
        let q = example5();
        let proof = replay_script(&q, &table2_steps()).unwrap();
        let report = check(&q, &proof).unwrap();
        assert!(report.valid, "{report:?}");
        assert_eq!(report.size, 13);
        assert_eq!(report.regular, Some(true));

        let u = 3;
        let t3 = proof.store.table(proof.lines[2].graphs[&u], u).unwrap();
        assert_eq!(t3.support(), &[1]);
        assert_eq!((t3.get_row(0), t3.get_row(1)), (T, S));
        let t7 = proof.store.table(proof.lines[6].graphs[&u], u).unwrap();
        assert_eq!(t7.support(), &[1]);
        assert_eq!((t7.get_row(0), t7.get_row(1)), (T, T));
    }

    #[test]
    fn table2_final_strategy_table_and_evals() {
        let q = example5();
        let proof = replay_script(&q, &table2_steps()).unwrap();
        let cm = extract_countermodel(&q, &proof).unwrap();
        let g = cm[&3];
        let t = proof.store.table(g, 3).unwrap();
        assert_eq!(t.support(), &[1, 2]);
        let at = |x: bool, y: bool| {
            t.eval(&PartialAssignment::from_pairs(&[(1, x), (2, y)]))
                .unwrap()
        };
        assert_eq!(at(true, true), T);
        assert_eq!(at(false, true), T);
        assert_eq!(at(true, false), T);
        assert_eq!(at(false, false), F);
        // Spot evaluations straight on the graph.
        let e = |x: bool, y: bool| {
            proof
                .store
                .eval(g, &PartialAssignment::from_pairs(&[(1, x), (2, y)]))
                .unwrap()
        };
        assert_eq!(e(true, false), T);
        assert_eq!(e(false, false), F);

        let report = verify_countermodel(&q, &proof.store, &cm).unwrap();
        assert!(report.holds);
        assert_eq!(report.ambiguous, 0);
    }

    #[test]
    fn trivial_strategy_is_no_countermodel() {
        let q = example5();
        let mut store = TGraphStore::new();
        let star = store.leaf(S);
        let mut m = BTreeMap::new();
        m.insert(3, star);
        let report = verify_countermodel(&q, &store, &m).unwrap();
        assert!(!report.holds);
    }

    #[test]
    fn example3_u_equals_x_is_countermodel() {
        let q = example3();
        let mut store = TGraphStore::new();
        let zero = store.leaf(F);
        let one = store.leaf(T);
        let ux = store.ifelse(1, one, zero);
        let mut m = BTreeMap::new();
        m.insert(2, ux);
        let report = verify_countermodel(&q, &store, &m).unwrap();
        assert!(report.holds);
        assert_eq!(report.ambiguous, 0);
    }

    #[test]
    fn line_local_soundness_on_golden_proofs() {
        let q = example3();
        let proof = replay_script(&q, &table1_steps()).unwrap();
        assert_eq!(line_local_soundness(&q, &proof).unwrap(), None);
        let q = example5();
        let proof = replay_script(&q, &table2_steps()).unwrap();
        assert_eq!(line_local_soundness(&q, &proof).unwrap(), None);
    }

    #[test]
    fn eval_never_errors_on_checked_proofs() {
        for (q, steps) in [(example3(), table1_steps()), (example5(), table2_steps())] {
            let proof = replay_script(&q, &steps).unwrap();
            assert!(check(&q, &proof).unwrap().valid);
            let existentials = q.existentials();
            for line in &proof.lines {
                for &g in line.graphs.values() {
                    for bits in 0..(1usize << existentials.len()) {
                        let mut a = PartialAssignment::new();
                        for (i, &x) in existentials.iter().enumerate() {
                            a.set(x, TriVal::from_bool(bits >> i & 1 == 1));
                        }
                        assert!(proof.store.eval(g, &a).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn resolution_steps_match_table_operations() {
        use crate::table::StrategyTable;
        for (q, steps) in [(example3(), table1_steps()), (example5(), table2_steps())] {
            let proof = replay_script(&q, &steps).unwrap();
            for line in &proof.lines {
                let ProofRule::Resolution { j, k, pivot } = line.rule else {
                    continue;
                };
                for (&u, &g) in &line.graphs {
                    let ti = proof.store.table(g, u).unwrap();
                    let tj = proof.store.table(proof.lines[j].graphs[&u], u).unwrap();
                    let tk = proof.store.table(proof.lines[k].graphs[&u], u).unwrap();
                    let expect = if q.left_of(pivot, u).unwrap() {
                        StrategyTable::ifelse(q.order(), &tk, &tj, pivot).unwrap()
                    } else {
                        tj.union(&tk).unwrap()
                    };
                    assert!(ti.same_function(&expect).unwrap());
                }
            }
        }
    }

    #[test]
    fn empty_proof_is_invalid() {
        let q = example3();
        let proof = MresTProof::default();
        let report = check(&q, &proof).unwrap();
        assert!(!report.valid);
        assert_eq!(report.reason, Some(Reason::NoEmptyClause));
    }

    #[test]
    fn flipped_axiom_leaf_is_bad_axiom() {
        let q = example3();
        let mut proof = replay_script(&q, &table1_steps()).unwrap();
        // Flip line 1's leaf from 0 to 1.
        let one = proof.store.leaf(T);
        proof.lines[0].graphs.insert(2, one);
        let report = check(&q, &proof).unwrap();
        assert!(!report.valid);
        assert_eq!(report.failing_line, Some(1));
        assert_eq!(report.reason, Some(Reason::BadAxiom));
    }

    #[test]
    fn premise_swap_triggers_inconsistent_union() {
        // Replace the final union res(L3, L6, y) with res(L1, L6, y): the
        // constant-0 strategy of line 1 clashes with line 6 at x = 1.
        let q = example3();
        let mut steps = table1_steps();
        steps[6] = r(0, 5, 3);
        let proof = replay_script(&q, &steps).unwrap();
        let report = check(&q, &proof).unwrap();
        assert!(!report.valid);
        assert_eq!(report.failing_line, Some(7));
        assert_eq!(report.reason, Some(Reason::InconsistentUnion));
    }

    #[test]
    fn wrong_node_kind_detected() {
        let q = example3();
        let mut proof = replay_script(&q, &table1_steps()).unwrap();
        // Replace line 3's if-else with a union of the same premises.
        let gj = proof.lines[0].graphs[&2];
        let gk = proof.lines[1].graphs[&2];
        let h = proof.store.hash(gj, gk);
        proof.lines[2].graphs.insert(2, h);
        let report = check(&q, &proof).unwrap();
        assert!(!report.valid);
        assert_eq!(report.failing_line, Some(3));
        assert_eq!(report.reason, Some(Reason::WrongNodeKind));
    }

    #[test]
    fn tautological_resolvent_detected() {
        let q = example3();
        // Download (y ∨ x) and (¬y ∨ ¬x), resolving on x gives y ∨ ¬y.
        let steps = alloc::vec![A(0), A(3), r(0, 1, 1)];
        assert_eq!(
            replay_script(&q, &steps),
            Err((3, Reason::TautologicalResolvent))
        );
    }

    #[test]
    fn universal_pivot_detected() {
        let q = example3();
        let steps = alloc::vec![A(0), A(3), r(0, 1, 2)];
        assert_eq!(replay_script(&q, &steps), Err((3, Reason::PivotUniversal)));
    }

    #[test]
    fn bad_resolvent_detected() {
        let q = example3();
        // Pivot x is not positive in clause of line 2.
        let steps = alloc::vec![A(1), A(3), r(0, 1, 1)];
        assert_eq!(replay_script(&q, &steps), Err((3, Reason::BadResolvent)));
        // Forward reference.
        let steps = alloc::vec![A(0), r(0, 1, 1)];
        assert_eq!(replay_script(&q, &steps), Err((2, Reason::BadResolvent)));
    }

    #[test]
    fn regularity_cases() {
        let q = example5();
        let steps = table2_steps();
        let all: BTreeSet<Var> = q.existentials().into_iter().collect();
        assert!(regularity(&steps, &all));
        let ab: BTreeSet<Var> = [4, 5].into_iter().collect();
        assert!(regularity(&steps, &ab));
        assert!(regularity(&steps, &BTreeSet::new()));

        // A chain reusing pivot x on one path.
        let chain = alloc::vec![A(0), A(1), r(0, 1, 1), A(0), r(3, 2, 1)];
        let x: BTreeSet<Var> = [1].into_iter().collect();
        assert!(!regularity(&chain, &x));
        let y: BTreeSet<Var> = [3].into_iter().collect();
        assert!(regularity(&chain, &y));
    }

    #[test]
    fn regularity_is_monotone_under_subset() {
        let chain = alloc::vec![A(0), A(1), r(0, 1, 1), A(0), r(3, 2, 1), r(4, 1, 3)];
        let big: BTreeSet<Var> = [1, 3].into_iter().collect();
        let small: BTreeSet<Var> = [3].into_iter().collect();
        if regularity(&chain, &big) {
            assert!(regularity(&chain, &small));
        }
        // Here the big set is violated but the subset is not.
        assert!(!regularity(&chain, &big));
        assert!(regularity(&chain, &small));
    }

    #[test]
    fn extract_requires_validity() {
        let q = example3();
        let proof = replay_script(&q, &alloc::vec![A(0)]).unwrap();
        assert!(matches!(
            extract_countermodel(&q, &proof),
            Err(ExtractError::InvalidProof(_))
        ));
    }
}
