//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its runtime. Run with `cargo test --test acceptance` (add
//! `-- --nocapture` to see the lines).

use std::collections::{BTreeMap, BTreeSet};
use std::panic::AssertUnwindSafe;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mrtk::formats::{mrs, mrt, qdimacs};
use mrtk_core::convert::{mres_to_mrest, script_to_mrest, RuleScript};
use mrtk_core::crn::{gen_cr, z_rule};
use mrtk_core::efrege::{check_efrege, emit_efrege, emit_efrege_unchecked, EfRule};
use mrtk_core::formula::Formula;
use mrtk_core::mergemap::MergeMapStore;
use mrtk_core::mres::{check_mres, replay_mres};
use mrtk_core::mrest::{
    check, extract_countermodel, line_local_soundness, regularity, replay_script,
    verify_countermodel, MresTProof, ProofRule,
};
use mrtk_core::oracle::brute_force_countermodel;
use mrtk_core::qbf::{Clause, Lit, Qbf, Quant, Var};
use mrtk_core::report::Reason;
use mrtk_core::search::{bounded_search, SearchOptions, SearchOutcome};
use mrtk_core::table::StrategyTable;
use mrtk_core::tgraph::TNode;
use mrtk_core::trival::TriVal;
use TriVal::{False as F, Star as S, True as T};

const EXAMPLE3: &str = include_str!("fixtures/example3.qdimacs");
const EXAMPLE5: &str = include_str!("fixtures/example5.qdimacs");
const TABLE1_MRT: &str = include_str!("fixtures/table1.mrt");
const TABLE2_MRT: &str = include_str!("fixtures/table2.mrt");
const TABLE1_MRS: &str = include_str!("fixtures/table1.mrs");
const TABLE2_MRS: &str = include_str!("fixtures/table2.mrs");

fn criterion(n: u32, what: &str, budget: Duration, f: impl FnOnce()) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) if elapsed <= budget => {
            println!("criterion {n}: PASS ({elapsed:.2?}) - {what}");
        }
        Ok(()) => {
            println!(
                "criterion {n}: FAIL (exceeded {budget:?}, took {elapsed:.2?}) - {what}"
            );
            panic!("criterion {n} exceeded its time budget");
        }
        Err(e) => {
            println!("criterion {n}: FAIL ({elapsed:.2?}) - {what}");
            std::panic::resume_unwind(e);
        }
    }
}

fn load(q: &str, proof: &str) -> (Qbf, MresTProof) {
    let q = qdimacs::parse(q).unwrap();
    let script = mrt::parse(proof).unwrap();
    let p = replay_script(&q, &script.steps).unwrap();
    (q, p)
}

#[test]
fn criterion_1_golden_seven_line_refutation() {
    criterion(
        1,
        "7-line refutation valid; strategy tables match; merge-map select blocked",
        Duration::from_secs(1),
        || {
            let (q, proof) = load(EXAMPLE3, TABLE1_MRT);
            let report = check(&q, &proof).unwrap();
            assert!(report.valid);
            assert_eq!(report.size, 7);

            let u = 2;
            let t3 = proof.store.table(proof.lines[2].graphs[&u], u).unwrap();
            assert_eq!(t3.support(), &[1]);
            assert_eq!((t3.get_row(0), t3.get_row(1)), (F, S));
            let t6 = proof.store.table(proof.lines[5].graphs[&u], u).unwrap();
            assert_eq!(t6.support(), &[1]);
            assert_eq!((t6.get_row(0), t6.get_row(1)), (S, T));

            // The same final step is rejected by the merge-map checker.
            let rules = mrs::parse(TABLE1_MRS).unwrap();
            match replay_mres(&q, &rules) {
                Err((7, Reason::BlockedSelect)) => {}
                other => panic!("expected blocked select at line 7, got {other:?}"),
            }
        },
    );
}

#[test]
fn criterion_2_golden_thirteen_line_refutation() {
    criterion(
        2,
        "13-line refutation valid; extracted strategy table exact; countermodel verified",
        Duration::from_secs(1),
        || {
            let (q, proof) = load(EXAMPLE5, TABLE2_MRT);
            let report = check(&q, &proof).unwrap();
            assert!(report.valid);
            assert_eq!(report.size, 13);

            let cm = extract_countermodel(&q, &proof).unwrap();
            let t = proof.store.table(cm[&3], 3).unwrap();
            assert_eq!(t.support(), &[1, 2]);
            // Row bit 0 is x(1), bit 1 is y(2).
            assert_eq!(t.get_row(0b00), F);
            assert_eq!(t.get_row(0b01), T);
            assert_eq!(t.get_row(0b10), T);
            assert_eq!(t.get_row(0b11), T);

            let v = verify_countermodel(&q, &proof.store, &cm).unwrap();
            assert!(v.holds);
            assert_eq!(v.ambiguous, 0);
        },
    );
}

/// Deterministic sample of random false QBFs with small refutations. Each
/// instance is certified false by the game oracle and refuted by the
/// bounded search.
fn sampled_refuted_instances(count: usize) -> Vec<(Qbf, MresTProof)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d7274);
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 50_000, "instance generation stalled");
        let existentials: usize = rng.gen_range(2..=4);
        let universals: usize = rng.gen_range(1..=2);
        let total = existentials + universals;
        // Random quantifier word with the required letter counts.
        let mut letters: Vec<Quant> = (0..existentials)
            .map(|_| Quant::Exists)
            .chain((0..universals).map(|_| Quant::Forall))
            .collect();
        for i in (1..letters.len()).rev() {
            letters.swap(i, rng.gen_range(0..=i));
        }
        let mut blocks: Vec<(Quant, Vec<Var>)> = Vec::new();
        for (i, &q) in letters.iter().enumerate() {
            let v = (i + 1) as Var;
            match blocks.last_mut() {
                Some((bq, vs)) if *bq == q => vs.push(v),
                _ => blocks.push((q, vec![v])),
            }
        }
        let n_clauses = rng.gen_range(3..=8);
        let mut clauses = Vec::new();
        for _ in 0..n_clauses {
            let width = rng.gen_range(1..=3.min(total));
            let mut vars: Vec<Var> = (1..=total as Var).collect();
            for i in (1..vars.len()).rev() {
                vars.swap(i, rng.gen_range(0..=i));
            }
            let lits: Vec<Lit> = vars[..width]
                .iter()
                .map(|&v| Lit::new(v, rng.gen_bool(0.5)))
                .collect();
            clauses.push(Clause::new(lits).unwrap());
        }
        let Ok(q) = Qbf::new(blocks, clauses, total as Var) else {
            continue;
        };
        match brute_force_countermodel(&q) {
            Ok(Some(_)) => {}
            _ => continue,
        }
        match bounded_search(&q, 12, &SearchOptions::default()) {
            Ok(SearchOutcome::Found(p)) => out.push((q, p)),
            _ => continue,
        }
    }
    out
}

#[test]
fn criterion_3_line_local_soundness_suite() {
    criterion(
        3,
        "per-line strategy values falsify a clause, exhaustively, on golden and 200 random proofs",
        Duration::from_secs(60),
        || {
            for (q, proof) in [load(EXAMPLE3, TABLE1_MRT), load(EXAMPLE5, TABLE2_MRT)] {
                assert_eq!(line_local_soundness(&q, &proof).unwrap(), None);
            }
            let instances = sampled_refuted_instances(200);
            assert_eq!(instances.len(), 200);
            for (q, proof) in &instances {
                assert!(check(q, proof).unwrap().valid);
                assert_eq!(line_local_soundness(q, proof).unwrap(), None, "{q:?}");
            }
        },
    );
}

#[test]
fn criterion_4_operation_algebra() {
    criterion(
        4,
        "union/if-else algebra exhaustive on <= 3 variables; isomorphism implies equality implies consistency",
        Duration::from_secs(30),
        || {
            let order_q = Qbf::new(
                vec![
                    (Quant::Exists, vec![1, 2, 3]),
                    (Quant::Forall, vec![4]),
                ],
                vec![],
                4,
            )
            .unwrap();
            let order = order_q.order();

            // Every strategy on <= 3 variables, as a table over {1,2,3}.
            let all: Vec<StrategyTable> = (0..3usize.pow(8))
                .map(|mut code| {
                    StrategyTable::build(4, &[1, 2, 3], |_r| {
                        let v = match code % 3 {
                            0 => F,
                            1 => T,
                            _ => S,
                        };
                        code /= 3;
                        v
                    })
                    .unwrap()
                })
                .collect();
            let star = StrategyTable::constant(4, &[], S).unwrap();
            for a in &all {
                assert!(a.union(a).unwrap().same_function(a).unwrap());
                assert!(a.union(&star).unwrap().same_function(a).unwrap());
            }
            for a in &all {
                for b in &all {
                    let c = a.consistent(b).unwrap();
                    assert_eq!(c, b.consistent(a).unwrap());
                    if c {
                        let ab = a.union(b).unwrap();
                        let ba = b.union(a).unwrap();
                        assert_eq!(ab, ba);
                    } else {
                        assert!(a.union(b).is_err());
                    }
                    // If-else restriction: fixing the pivot reproduces the
                    // corresponding operand row for row.
                    let r = StrategyTable::ifelse(order, a, b, 1).unwrap();
                    for row in 0..r.rows() {
                        let expect = if row & 1 == 1 {
                            a.get_row(row)
                        } else {
                            b.get_row(row)
                        };
                        assert_eq!(r.get_row(row), expect);
                    }
                }
            }

            // Mixed supports, exhaustive over a 2-variable universe with a
            // pivot outside both supports.
            let mut mixed: Vec<StrategyTable> = Vec::new();
            for support in [vec![], vec![1], vec![2], vec![1, 2]] {
                let rows = 1usize << support.len();
                for code in 0..3usize.pow(rows as u32) {
                    let mut c = code;
                    mixed.push(
                        StrategyTable::build(4, &support, |_r| {
                            let v = match c % 3 {
                                0 => F,
                                1 => T,
                                _ => S,
                            };
                            c /= 3;
                            v
                        })
                        .unwrap(),
                    );
                }
            }
            for a in &mixed {
                for b in &mixed {
                    assert_eq!(a.consistent(b).unwrap(), b.consistent(a).unwrap());
                    if a.consistent(b).unwrap() {
                        let ab = a.union(b).unwrap();
                        assert!(ab.same_function(&b.union(a).unwrap()).unwrap());
                        assert!(ab.consistent(a).unwrap());
                    }
                    for pivot in [1, 2, 3] {
                        let r = StrategyTable::ifelse(order, a, b, pivot).unwrap();
                        assert!(r.support().contains(&pivot));
                        for row in 0..r.rows() {
                            let assign = r.assignment_of(row);
                            let expect = if assign.get(pivot) == T {
                                a.eval(&assign).unwrap()
                            } else {
                                b.eval(&assign).unwrap()
                            };
                            assert_eq!(r.get_row(row), expect);
                        }
                    }
                }
            }

            // Isomorphism implies table equality implies consistency; the
            // stored witness shows consistency does not imply isomorphism.
            let mut st = MergeMapStore::new();
            let leaves = [F, T, S].map(|v| st.leaf(v, 0));
            let mut maps = leaves.to_vec();
            for x in [1u32, 2] {
                for &lo in &leaves {
                    for &hi in &leaves {
                        maps.push(st.merge(order, lo, hi, 0, x, 4).unwrap());
                    }
                }
            }
            for &a in &maps {
                for &b in &maps {
                    if st.isomorphic(a, b) {
                        let ta = st.table(a, 4).unwrap();
                        let tb = st.table(b, 4).unwrap();
                        assert!(ta.same_function(&tb).unwrap());
                        assert!(ta.consistent(&tb).unwrap());
                    }
                }
            }
            let (q3, proof) = load(EXAMPLE3, TABLE1_MRT);
            let _ = q3;
            let h3 = proof.store.table(proof.lines[2].graphs[&2], 2).unwrap();
            let h6 = proof.store.table(proof.lines[5].graphs[&2], 2).unwrap();
            assert!(h3.consistent(&h6).unwrap());
            assert!(!h3.same_function(&h6).unwrap());
        },
    );
}

#[test]
fn criterion_5_conversion_reproduces_golden_proofs() {
    criterion(
        5,
        "skeleton replay reproduces printed proofs; merge-map conversion verified end to end",
        Duration::from_secs(1),
        || {
            let q3 = qdimacs::parse(EXAMPLE3).unwrap();
            let s1 = mrt::parse(TABLE1_MRT).unwrap();
            let p1 = script_to_mrest(&q3, &s1).unwrap();
            assert_eq!(mrt::serialize(&RuleScript::new(p1.steps())), TABLE1_MRT);

            let q5 = qdimacs::parse(EXAMPLE5).unwrap();
            let s2 = mrt::parse(TABLE2_MRT).unwrap();
            let p2 = script_to_mrest(&q5, &s2).unwrap();
            assert_eq!(mrt::serialize(&RuleScript::new(p2.steps())), TABLE2_MRT);
            assert_eq!(p2.len(), 13);

            // Merge-map transcription converts line for line and its final
            // countermodel verifies.
            let rules = mrs::parse(TABLE2_MRS).unwrap();
            let mres = replay_mres(&q5, &rules).unwrap();
            assert!(check_mres(&q5, &mres).valid);
            let converted = mres_to_mrest(&q5, &mres).unwrap();
            assert_eq!(converted.len(), mres.len());
            assert_eq!(
                mrt::serialize(&RuleScript::new(converted.steps())),
                TABLE2_MRT
            );
            let cm = extract_countermodel(&q5, &converted).unwrap();
            assert!(verify_countermodel(&q5, &converted.store, &cm)
                .unwrap()
                .holds);

            let mrs1 = mrs::parse(TABLE1_MRS).unwrap();
            assert!(replay_mres(&q3, &mrs1).is_err());
        },
    );
}

#[test]
fn criterion_6_certificate_emission() {
    criterion(
        6,
        "certificates check, end in false, and stay within the pinned length bound (c = 2)",
        Duration::from_secs(5),
        || {
            for (q, proof) in [load(EXAMPLE3, TABLE1_MRT), load(EXAMPLE5, TABLE2_MRT)] {
                let cert = emit_efrege(&q, &proof).unwrap();
                let report = check_efrege(&q, &cert.symbols, &cert.lines);
                assert!(report.valid, "{report:?}");
                assert_eq!(cert.lines.last().unwrap().formula, Formula::False);

                let bound = 2.0 * (proof.len() * proof.total_nodes()) as f64;
                assert!(
                    (cert.len() as f64) <= bound,
                    "{} certificate lines exceed pinned bound {bound}",
                    cert.len()
                );

                // One elimination round per universal.
                let reds = cert
                    .lines
                    .iter()
                    .filter(|l| matches!(l.rule, EfRule::ForallRed { .. }))
                    .count();
                assert_eq!(reds, 2 * q.universals().len());
            }
        },
    );
}

#[test]
fn criterion_7_completion_formula_structure() {
    criterion(
        7,
        "instance shape exact for n = 1..3; falsity certified; closed-form rule falsifies everywhere",
        Duration::from_secs(30),
        || {
            for n in 1..=3usize {
                let cr = gen_cr(n);
                assert_eq!(cr.qbf.matrix().len(), 2 * n * n + 2);
                assert_eq!(cr.num_vars(), n * n + 2 * n + 1);
            }
            for n in 1..=2usize {
                let cr = gen_cr(n);
                assert!(brute_force_countermodel(&cr.qbf).unwrap().is_some());
            }
            // n = 3: the rule value falsifies a clause for every grid and
            // every completion of the inner existentials.
            let cr = gen_cr(3);
            let nn = 9;
            for grid_bits in 0..(1usize << nn) {
                let grid = |i: usize, j: usize| grid_bits >> ((i - 1) * 3 + (j - 1)) & 1 == 1;
                let z = z_rule(3, &grid);
                for ab_bits in 0..(1usize << 6) {
                    let mut a = mrtk_core::assign::PartialAssignment::new();
                    for v in 1..=nn {
                        a.set(v as Var, TriVal::from_bool(grid_bits >> (v - 1) & 1 == 1));
                    }
                    a.set(cr.z(), TriVal::from_bool(z));
                    for t in 0..6 {
                        a.set((nn + 2 + t) as Var, TriVal::from_bool(ab_bits >> t & 1 == 1));
                    }
                    assert!(!cr.qbf.matrix_eval(&a).unwrap());
                }
            }
        },
    );
}

#[test]
fn criterion_8_regularity_and_search_smoke() {
    criterion(
        8,
        "13-line proof regular; smallest completion instance refuted in <= 8 lines, closed below 4",
        Duration::from_secs(120),
        || {
            let (q, proof) = load(EXAMPLE5, TABLE2_MRT);
            let steps = proof.steps();
            let inner: BTreeSet<Var> = [4u32, 5].into_iter().collect();
            assert!(regularity(&steps, &inner));
            let all: BTreeSet<Var> = q.existentials().into_iter().collect();
            assert!(regularity(&steps, &all));

            // Detector correctness: a pivot reused along one path.
            let chain = vec![
                ProofRule::Axiom(0),
                ProofRule::Axiom(1),
                ProofRule::Resolution { j: 0, k: 1, pivot: 1 },
                ProofRule::Axiom(0),
                ProofRule::Resolution { j: 3, k: 2, pivot: 1 },
            ];
            let x: BTreeSet<Var> = [1u32].into_iter().collect();
            assert!(!regularity(&chain, &x));
            assert!(regularity(&chain, &BTreeSet::new()));

            let cr = gen_cr(1);
            match bounded_search(&cr.qbf, 8, &SearchOptions::default()).unwrap() {
                SearchOutcome::Found(p) => {
                    assert!(p.len() <= 8);
                    assert!(check(&cr.qbf, &p).unwrap().valid);
                }
                other => panic!("expected refutation, got {other:?}"),
            }
            match bounded_search(&cr.qbf, 3, &SearchOptions::default()).unwrap() {
                SearchOutcome::Closed => {}
                other => panic!("expected closed space below 4 lines, got {other:?}"),
            }
        },
    );
}

#[test]
fn criterion_9_negative_paths() {
    criterion(
        9,
        "each checker reason code fires; forced emission of an invalid proof may still check",
        Duration::from_secs(5),
        || {
            let q = qdimacs::parse(EXAMPLE3).unwrap();

            let expect_invalid = |text: &str, line: usize, reason: Reason| {
                let script = mrt::parse(text).unwrap();
                let verdict = match replay_script(&q, &script.steps) {
                    Ok(p) => {
                        let r = check(&q, &p).unwrap();
                        assert!(!r.valid);
                        (r.failing_line.unwrap(), r.reason.unwrap())
                    }
                    Err(e) => e,
                };
                assert_eq!(verdict, (line, reason));
            };
            expect_invalid(
                include_str!("fixtures/table1_union_clash.mrt"),
                7,
                Reason::InconsistentUnion,
            );
            expect_invalid(
                include_str!("fixtures/table1_taut.mrt"),
                3,
                Reason::TautologicalResolvent,
            );
            expect_invalid(
                include_str!("fixtures/table1_bad_axiom.mrt"),
                1,
                Reason::BadAxiom,
            );
            expect_invalid(
                include_str!("fixtures/table1_bad_resolvent.mrt"),
                3,
                Reason::BadResolvent,
            );
            expect_invalid(
                include_str!("fixtures/table1_pivot_universal.mrt"),
                3,
                Reason::PivotUniversal,
            );

            // Graph-level mutants: a flipped axiom leaf and a wrong node kind.
            let (_, mut proof) = load(EXAMPLE3, TABLE1_MRT);
            let one = proof.store.leaf(T);
            proof.lines[0].graphs.insert(2, one);
            let r = check(&q, &proof).unwrap();
            assert_eq!(
                (r.failing_line.unwrap(), r.reason.unwrap()),
                (1, Reason::BadAxiom)
            );

            let (_, mut proof) = load(EXAMPLE3, TABLE1_MRT);
            let gj = proof.lines[0].graphs[&2];
            let gk = proof.lines[1].graphs[&2];
            let h = proof.store.hash(gj, gk);
            proof.lines[2].graphs.insert(2, h);
            let r = check(&q, &proof).unwrap();
            assert_eq!(
                (r.failing_line.unwrap(), r.reason.unwrap()),
                (3, Reason::WrongNodeKind)
            );

            // Documented one-way behavior: an invalid proof (union node
            // where a branch is forced, on an unused line) force-emits a
            // certificate that checks.
            let mut steps = mrt::parse(TABLE1_MRT).unwrap().steps;
            let last = steps.pop().unwrap();
            steps.push(ProofRule::Resolution { j: 0, k: 1, pivot: 1 });
            steps.push(last);
            let mut proof = replay_script(&q, &steps).unwrap();
            let gj = proof.lines[0].graphs[&2];
            let gk = proof.lines[1].graphs[&2];
            let h = proof.store.hash(gj, gk);
            proof.lines[6].graphs.insert(2, h);
            let r = check(&q, &proof).unwrap();
            assert_eq!(
                (r.failing_line.unwrap(), r.reason.unwrap()),
                (7, Reason::WrongNodeKind)
            );
            assert!(matches!(
                proof.store.node(proof.lines[6].graphs[&2].root),
                TNode::Hash { .. }
            ));
            let cert = emit_efrege_unchecked(&q, &proof);
            let report = check_efrege(&q, &cert.symbols, &cert.lines);
            assert!(report.valid, "{report:?}");
        },
    );
}
