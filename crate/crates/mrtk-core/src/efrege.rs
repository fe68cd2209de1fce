//! Extended-Frege certificates with universal reduction: emission from
//! valid graph-strategy refutations and an independent line checker.
//!
//! Every strategy node gets a pair of extension variables: a value bit and
//! a definedness bit, the two-variable encoding of the three-valued node
//! semantics. Definitions are placed in the prefix immediately left of the
//! node's universal, which both legitimises them (they depend only on
//! variables further left) and keeps universal reduction applicable.
//!
//! The derivation proves, per proof line, that the universals agreeing
//! with their strategy roots wherever defined forces the line's clause;
//! the per-universal agreement is guarded by the definedness bit, so
//! trivial strategies impose no constraint. From the final line the
//! negated-strategy disjunction follows, and universal reduction
//! eliminates the universals right to left.
//!
//! Certificates are one-way evidence: emission assumes validity, and a
//! certificate that checks does not certify the input proof (an invalid
//! proof can force-emit a perfectly valid certificate).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{
    and, conj, disj, entails, iff, imp, not, or, var, xor, Formula, Sym, SymbolTable,
};
use crate::mrest::{check, MresTProof, ProofRule};
use crate::qbf::{Clause, Lit, Qbf, Var};
use crate::report::{CapError, CheckReport};
use crate::tgraph::{TNode, TGraphStore};

/// Infer lines may cite at most this many premises.
pub const MAX_PREMISES: usize = 4;
/// Infer entailment is evaluated exhaustively over at most this many
/// distinct variables. Both budgets are part of the certificate format.
pub const MAX_ENTAIL_VARS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EfRule {
    /// Defines a fresh extension variable; the line formula is the
    /// biconditional `var <-> body`.
    ExtDef { var: Sym },
    /// The formula is semantically entailed by the cited premises.
    Infer { premises: Vec<usize> },
    /// The formula is the premise with `u` replaced by the constant; `u`
    /// must be rightmost in the premise.
    ForallRed {
        premise: usize,
        u: Var,
        constant: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfLine {
    /// Line index as cited by later lines. Matrix clauses implicitly
    /// occupy indices `1..=K`; certificate lines start above `K`.
    pub index: usize,
    pub rule: EfRule,
    pub formula: Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EfReason {
    BadIndex,
    BadPremise,
    PremiseBudget,
    VariableBudget,
    NotEntailed,
    Freshness,
    UnknownVariable,
    BadPlacement,
    Malformed,
    RedNotUniversal,
    RedSideCondition,
    RedMismatch,
    FinalNotFalse,
}

impl fmt::Display for EfReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EfReason::BadIndex => "bad-index",
            EfReason::BadPremise => "bad-premise",
            EfReason::PremiseBudget => "premise-budget",
            EfReason::VariableBudget => "variable-budget",
            EfReason::NotEntailed => "not-entailed",
            EfReason::Freshness => "freshness-violation",
            EfReason::UnknownVariable => "unknown-variable",
            EfReason::BadPlacement => "bad-placement",
            EfReason::Malformed => "malformed-line",
            EfReason::RedNotUniversal => "red-not-universal",
            EfReason::RedSideCondition => "red-side-condition",
            EfReason::RedMismatch => "red-mismatch",
            EfReason::FinalNotFalse => "final-not-false",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfReport {
    pub valid: bool,
    pub failing_line: Option<usize>,
    pub reason: Option<EfReason>,
    pub size: usize,
}

/// Extension variable names carry their placement: `v_<line>_<u>_<node>`
/// or `d_<line>_<u>_<node>`, all components decimal, `u` a universal of
/// the input QBF.
pub fn parse_ext_name(name: &str) -> Option<(char, usize, Var, usize)> {
    let mut parts = name.split('_');
    let kind = parts.next()?;
    let kind = match kind {
        "v" => 'v',
        "d" => 'd',
        _ => return None,
    };
    let line: usize = parts.next()?.parse().ok()?;
    let u: Var = parts.next()?.parse().ok()?;
    let node: usize = parts.next()?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((kind, line, u, node))
}

fn ext_name(kind: char, line: usize, u: Var, node: usize) -> String {
    alloc::format!("{kind}_{line}_{u}_{node}")
}

/// Prefix position scalar: original variables sit at `2*block + 2`,
/// extension variables for a universal immediately left of it at
/// `2*block(u) + 1`. Larger means further right.
fn orig_scalar(q: &Qbf, v: Var) -> u64 {
    2 * q.order().level(v).unwrap() as u64 + 2
}

#[derive(Clone, Copy, Debug)]
enum VInfo {
    Orig { scalar: u64 },
    Ext { scalar: u64, seq: u64 },
}

impl VInfo {
    fn scalar(&self) -> u64 {
        match self {
            VInfo::Orig { scalar, .. } | VInfo::Ext { scalar, .. } => *scalar,
        }
    }

    /// Fine-grained position for extension placement checks.
    fn fine(&self) -> (u64, u64) {
        match self {
            VInfo::Orig { scalar, .. } => (*scalar, 0),
            VInfo::Ext { scalar, seq } => (*scalar, *seq),
        }
    }
}

struct VarEnv<'a> {
    q: &'a Qbf,
    info: BTreeMap<Sym, VInfo>,
    next_seq: u64,
}

impl<'a> VarEnv<'a> {
    fn new(q: &'a Qbf) -> VarEnv<'a> {
        VarEnv {
            q,
            info: BTreeMap::new(),
            next_seq: 1,
        }
    }

    /// Classifies a symbol: original variables are known by their decimal
    /// name, extension variables only once defined.
    fn lookup(&mut self, syms: &SymbolTable, s: Sym) -> Option<VInfo> {
        if let Some(&i) = self.info.get(&s) {
            return Some(i);
        }
        let name = syms.name(s);
        let v: Var = name.parse().ok()?;
        self.q.order().level(v).ok()?;
        let i = VInfo::Orig {
            scalar: orig_scalar(self.q, v),
        };
        self.info.insert(s, i);
        Some(i)
    }

    fn define_ext(&mut self, s: Sym, u: Var) -> VInfo {
        let i = VInfo::Ext {
            scalar: 2 * self.q.order().level(u).unwrap() as u64 + 1,
            seq: self.next_seq,
        };
        self.next_seq += 1;
        self.info.insert(s, i);
        i
    }
}

fn clause_formula(syms: &mut SymbolTable, clause: &Clause) -> Formula {
    disj(
        clause
            .lits()
            .iter()
            .map(|l| {
                let s = syms.intern(&alloc::format!("{}", l.var()));
                if l.is_positive() {
                    var(s)
                } else {
                    not(var(s))
                }
            })
            .collect(),
    )
}

/// Checks a certificate against a QBF. Matrix clauses are implicit
/// premises `1..=K`; certificate indices must be strictly increasing and
/// above `K`. Infer lines are verified by bounded semantic entailment,
/// extension definitions by freshness and prefix placement, reductions by
/// the rightmost-universal side condition and exact substitution.
pub fn check_efrege(q: &Qbf, symbols: &SymbolTable, cert: &[EfLine]) -> EfReport {
    let mut syms = symbols.clone();
    let mut env = VarEnv::new(q);
    let k = q.matrix().len();
    let mut by_index: BTreeMap<usize, &EfLine> = BTreeMap::new();
    let mut last_index = k;

    let fail = |line: &EfLine, reason: EfReason| EfReport {
        valid: false,
        failing_line: Some(line.index),
        reason: Some(reason),
        size: cert.len(),
    };

    for line in cert {
        if line.index <= last_index {
            return fail(line, EfReason::BadIndex);
        }
        last_index = line.index;

        match &line.rule {
            EfRule::ExtDef { var: v } => {
                let Formula::Iff(lhs, body) = &line.formula else {
                    return fail(line, EfReason::Malformed);
                };
                if **lhs != Formula::Var(*v) {
                    return fail(line, EfReason::Malformed);
                }
                let name = String::from(syms.name(*v));
                let Some((_, _, u, _)) = parse_ext_name(&name) else {
                    return fail(line, EfReason::BadPlacement);
                };
                if !q.is_universal(u) {
                    return fail(line, EfReason::BadPlacement);
                }
                if env.lookup(&syms, *v).is_some() {
                    return fail(line, EfReason::Freshness);
                }
                let mut body_fine = Vec::new();
                for w in body.vars() {
                    match env.lookup(&syms, w) {
                        Some(info) => body_fine.push(info.fine()),
                        None => return fail(line, EfReason::UnknownVariable),
                    }
                }
                let vinfo = env.define_ext(*v, u);
                if body_fine.iter().any(|&p| p >= vinfo.fine()) {
                    return fail(line, EfReason::BadPlacement);
                }
            }
            EfRule::Infer { premises } => {
                if premises.len() > MAX_PREMISES {
                    return fail(line, EfReason::PremiseBudget);
                }
                let mut prem_formulas: Vec<Formula> = Vec::new();
                for &p in premises {
                    if p >= 1 && p <= k {
                        prem_formulas.push(clause_formula(&mut syms, &q.matrix()[p - 1]));
                    } else if let Some(l) = by_index.get(&p) {
                        prem_formulas.push(l.formula.clone());
                    } else {
                        return fail(line, EfReason::BadPremise);
                    }
                }
                for w in line.formula.vars() {
                    if env.lookup(&syms, w).is_none() {
                        return fail(line, EfReason::UnknownVariable);
                    }
                }
                let refs: Vec<&Formula> = prem_formulas.iter().collect();
                match entails(&refs, &line.formula, MAX_ENTAIL_VARS) {
                    Some(true) => {}
                    Some(false) => return fail(line, EfReason::NotEntailed),
                    None => return fail(line, EfReason::VariableBudget),
                }
            }
            EfRule::ForallRed {
                premise,
                u,
                constant,
            } => {
                let prem = if *premise >= 1 && *premise <= k {
                    clause_formula(&mut syms, &q.matrix()[premise - 1])
                } else if let Some(l) = by_index.get(premise) {
                    l.formula.clone()
                } else {
                    return fail(line, EfReason::BadPremise);
                };
                if !q.is_universal(*u) {
                    return fail(line, EfReason::RedNotUniversal);
                }
                let u_scalar = orig_scalar(q, *u);
                let u_sym = syms.intern(&alloc::format!("{u}"));
                for w in prem.vars() {
                    if w == u_sym {
                        continue;
                    }
                    match env.lookup(&syms, w) {
                        Some(info) if info.scalar() <= u_scalar => {}
                        Some(_) => return fail(line, EfReason::RedSideCondition),
                        None => return fail(line, EfReason::UnknownVariable),
                    }
                }
                if line.formula != prem.subst(u_sym, *constant) {
                    return fail(line, EfReason::RedMismatch);
                }
            }
        }
        by_index.insert(line.index, line);
    }

    let final_ok = cert.last().map(|l| &l.formula) == Some(&Formula::False);
    EfReport {
        valid: final_ok,
        failing_line: if final_ok {
            None
        } else {
            cert.last().map(|l| l.index)
        },
        reason: if final_ok {
            None
        } else {
            Some(EfReason::FinalNotFalse)
        },
        size: cert.len(),
    }
}

/// A certificate together with the symbol table interpreting it.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub symbols: SymbolTable,
    pub lines: Vec<EfLine>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Extension environment: the two variables of every (line, universal,
/// node) triple plus their definition lines.
#[derive(Clone, Debug)]
pub struct Extensions {
    pub symbols: SymbolTable,
    pub lines: Vec<EfLine>,
    /// `(line, universal, node) -> (value sym, definedness sym)`.
    pub vars: BTreeMap<(usize, Var, usize), (Sym, Sym)>,
    /// Extension sym -> index of its definition line.
    pub def_line: BTreeMap<Sym, usize>,
    pub next_index: usize,
}

fn node_bodies(
    store: &TGraphStore,
    vars: &BTreeMap<(usize, Var, usize), (Sym, Sym)>,
    i: usize,
    u: Var,
    u_sym: impl Fn(Var) -> Sym,
    t: usize,
) -> (Formula, Formula) {
    match store.node(t) {
        TNode::Leaf(v) => {
            let (vb, db) = match v.as_bool() {
                Some(true) => (Formula::True, Formula::True),
                Some(false) => (Formula::False, Formula::True),
                None => (Formula::False, Formula::False),
            };
            (vb, db)
        }
        TNode::IfElse { var: y, hi, lo } => {
            let y = var(u_sym(y));
            let (vh, dh) = vars[&(i, u, hi)];
            let (vl, dl) = vars[&(i, u, lo)];
            (
                or(and(y.clone(), var(vh)), and(not(y.clone()), var(vl))),
                or(and(y.clone(), var(dh)), and(not(y), var(dl))),
            )
        }
        TNode::Hash { a, b } => {
            let (va, da) = vars[&(i, u, a)];
            let (vb, db) = vars[&(i, u, b)];
            (
                or(and(var(da), var(va)), and(var(db), var(vb))),
                or(var(da), var(db)),
            )
        }
    }
}

/// Creates the extension variables and their definition lines for every
/// node of every strategy graph in the proof: one value/definedness pair
/// per (line, universal, node), children defined before parents, shared
/// nodes defined once per line.
pub fn define_extensions(q: &Qbf, proof: &MresTProof) -> Extensions {
    let mut symbols = SymbolTable::new();
    let mut vars = BTreeMap::new();
    let mut def_line = BTreeMap::new();
    let mut lines = Vec::new();
    let mut next_index = q.matrix().len() + 1;
    let universals = q.universals();
    // Original variable syms first so clause formulas are stable.
    for v in 1..=q.num_vars() {
        symbols.intern(&alloc::format!("{v}"));
    }
    for (i, line) in proof.lines.iter().enumerate() {
        for &u in &universals {
            let g = line.graphs[&u];
            for t in proof.store.reachable(g.root) {
                let vs = symbols.intern(&ext_name('v', i + 1, u, t));
                let ds = symbols.intern(&ext_name('d', i + 1, u, t));
                vars.insert((i, u, t), (vs, ds));
            }
        }
    }
    for (i, line) in proof.lines.iter().enumerate() {
        for &u in &universals {
            let g = line.graphs[&u];
            for t in proof.store.reachable(g.root) {
                let (vs, ds) = vars[&(i, u, t)];
                let (vb, db) = node_bodies(
                    &proof.store,
                    &vars,
                    i,
                    u,
                    |w| symbols.lookup(&alloc::format!("{w}")).unwrap(),
                    t,
                );
                lines.push(EfLine {
                    index: next_index,
                    rule: EfRule::ExtDef { var: vs },
                    formula: iff(var(vs), vb),
                });
                def_line.insert(vs, next_index);
                next_index += 1;
                lines.push(EfLine {
                    index: next_index,
                    rule: EfRule::ExtDef { var: ds },
                    formula: iff(var(ds), db),
                });
                def_line.insert(ds, next_index);
                next_index += 1;
            }
        }
    }
    Extensions {
        symbols,
        lines,
        vars,
        def_line,
        next_index,
    }
}

#[derive(Clone, Debug)]
pub enum EmitError {
    InvalidProof(CheckReport),
    Cap(CapError),
}

impl fmt::Display for EmitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmitError::InvalidProof(r) => {
                write!(f, "input proof invalid at line {:?}", r.failing_line)
            }
            EmitError::Cap(c) => write!(f, "{c}"),
        }
    }
}

/// Emits a certificate from a checked-valid proof.
pub fn emit_efrege(q: &Qbf, proof: &MresTProof) -> Result<Certificate, EmitError> {
    let report = check(q, proof).map_err(EmitError::Cap)?;
    if !report.valid {
        return Err(EmitError::InvalidProof(report));
    }
    Ok(emit_efrege_unchecked(q, proof))
}

/// Emission without the validity gate. Guaranteed to produce a checking
/// certificate only for valid proofs; on invalid proofs the result may or
/// may not check, and a checking result says nothing about the proof.
pub fn emit_efrege_unchecked(q: &Qbf, proof: &MresTProof) -> Certificate {
    Emitter::new(q, proof).run()
}

struct Emitter<'a> {
    q: &'a Qbf,
    proof: &'a MresTProof,
    ext: Extensions,
    out: Vec<EfLine>,
    universals: Vec<Var>,
    /// Per (line, universal, node): index of the bundled-definition line.
    bundles: BTreeMap<(usize, Var, usize), usize>,
    /// Per proof line: index of its clause-implication line.
    implication: Vec<usize>,
}

impl<'a> Emitter<'a> {
    fn new(q: &'a Qbf, proof: &'a MresTProof) -> Emitter<'a> {
        let ext = define_extensions(q, proof);
        let out = ext.lines.clone();
        Emitter {
            q,
            proof,
            ext,
            out,
            universals: q.universals(),
            bundles: BTreeMap::new(),
            implication: Vec::new(),
        }
    }

    fn push(&mut self, rule: EfRule, formula: Formula) -> usize {
        let index = self.ext.next_index;
        self.ext.next_index += 1;
        self.out.push(EfLine {
            index,
            rule,
            formula,
        });
        index
    }

    fn infer(&mut self, premises: Vec<usize>, formula: Formula) -> usize {
        self.push(EfRule::Infer { premises }, formula)
    }

    fn orig(&mut self, v: Var) -> Sym {
        self.ext.symbols.intern(&alloc::format!("{v}"))
    }

    fn pair(&self, i: usize, u: Var, t: usize) -> (Sym, Sym) {
        self.ext.vars[&(i, u, t)]
    }

    /// `d -> (u <-> v)` for the root of line `i`'s strategy for `u`.
    fn gamma(&mut self, i: usize, u: Var) -> Formula {
        let root = self.proof.lines[i].graphs[&u].root;
        let (vs, ds) = self.pair(i, u, root);
        let us = self.orig(u);
        imp(var(ds), iff(var(us), var(vs)))
    }

    /// Conjunction of root agreements for line `i`, every universal, in
    /// prefix order.
    fn antecedent(&mut self, i: usize) -> Formula {
        let us = self.universals.clone();
        conj(us.into_iter().map(|u| self.gamma(i, u)).collect())
    }

    fn lits_formula(&mut self, lits: &[Lit]) -> Formula {
        disj(
            lits.iter()
                .map(|l| {
                    let s = self.orig(l.var());
                    if l.is_positive() {
                        var(s)
                    } else {
                        not(var(s))
                    }
                })
                .collect(),
        )
    }

    /// Bundles a node's two definitions into one conjunction line.
    fn bundle(&mut self, i: usize, u: Var, t: usize) -> usize {
        if let Some(&idx) = self.bundles.get(&(i, u, t)) {
            return idx;
        }
        let (vs, ds) = self.pair(i, u, t);
        let (vb, db) = node_bodies(&self.proof.store, &self.ext.vars, i, u, |w| {
            self.ext.symbols.lookup(&alloc::format!("{w}")).unwrap()
        }, t);
        let f = and(iff(var(vs), vb), iff(var(ds), db));
        let prem = alloc::vec![self.ext.def_line[&vs], self.ext.def_line[&ds]];
        let idx = self.infer(prem, f);
        self.bundles.insert((i, u, t), idx);
        idx
    }

    /// Per-node equivalence between line `i`'s and premise line `p`'s
    /// variables over the shared graph, derived bottom-up.
    fn equiv_chain(&mut self, i: usize, p: usize, u: Var) -> BTreeMap<usize, usize> {
        let root = self.proof.lines[p].graphs[&u].root;
        let mut lines = BTreeMap::new();
        for t in self.proof.store.reachable(root) {
            let mut prem = alloc::vec![self.bundle(i, u, t), self.bundle(p, u, t)];
            match self.proof.store.node(t) {
                TNode::Leaf(_) => {}
                TNode::IfElse { hi, lo, .. } => {
                    prem.push(lines[&hi]);
                    prem.push(lines[&lo]);
                }
                TNode::Hash { a, b } => {
                    prem.push(lines[&a]);
                    prem.push(lines[&b]);
                }
            }
            let (vi, di) = self.pair(i, u, t);
            let (vp, dp) = self.pair(p, u, t);
            let f = and(iff(var(vi), var(vp)), iff(var(di), var(dp)));
            lines.insert(t, self.infer(prem, f));
        }
        lines
    }

    /// No-clash lemma for a node pair of line `i`'s graph for `u` under a
    /// guard of branch literals: along any assignment satisfying the guard,
    /// the two nodes never witness defined opposite values. Branch nodes on
    /// the same variable decompose in lockstep; a lone branch node
    /// decomposes with its pivot literal added to the guard, which is what
    /// keeps children of opposite branches from being paired unguarded.
    /// Union nodes also cite their own children's no-clash lemma.
    fn no_clash(
        &mut self,
        i: usize,
        u: Var,
        s: usize,
        t: usize,
        guard: &BTreeSet<Lit>,
        memo: &mut BTreeMap<(usize, usize, Vec<Lit>), usize>,
    ) -> usize {
        let guard_key: Vec<Lit> = guard.iter().copied().collect();
        let key = (s.min(t), s.max(t), guard_key);
        if let Some(&idx) = memo.get(&key) {
            return idx;
        }
        let (lo, hi) = (s.min(t), s.max(t));
        let (v_lo, d_lo) = self.pair(i, u, lo);
        let (v_hi, d_hi) = self.pair(i, u, hi);
        let body = not(and(
            var(d_lo),
            and(var(d_hi), xor(var(v_lo), var(v_hi))),
        ));
        let guard_f: Vec<Formula> = guard
            .iter()
            .map(|l| {
                let sym = self.orig(l.var());
                if l.is_positive() {
                    var(sym)
                } else {
                    not(var(sym))
                }
            })
            .collect();
        let f = if guard_f.is_empty() {
            body
        } else {
            imp(conj(guard_f), body)
        };

        let dead_path = guard.iter().any(|l| guard.contains(&l.negated()));
        let star = |n: TNode| n == TNode::Leaf(crate::trival::TriVal::Star);
        let ns = self.proof.store.node(s);
        let nt = self.proof.store.node(t);
        let with = |g: &BTreeSet<Lit>, l: Lit| {
            let mut g = g.clone();
            g.insert(l);
            g
        };
        let prem = if s == t || dead_path {
            Vec::new()
        } else if star(ns) {
            alloc::vec![self.bundle(i, u, s)]
        } else if star(nt) {
            alloc::vec![self.bundle(i, u, t)]
        } else if let (
            TNode::IfElse {
                var: xs,
                hi: sh,
                lo: sl,
            },
            TNode::IfElse {
                var: xt,
                hi: th,
                lo: tl,
            },
        ) = (ns, nt)
        {
            if xs == xt {
                let a = self.no_clash(i, u, sh, th, &with(guard, Lit::positive(xs)), memo);
                let b = self.no_clash(i, u, sl, tl, &with(guard, Lit::negative(xs)), memo);
                alloc::vec![self.bundle(i, u, s), self.bundle(i, u, t), a, b]
            } else {
                let a = self.no_clash(i, u, sh, t, &with(guard, Lit::positive(xs)), memo);
                let b = self.no_clash(i, u, sl, t, &with(guard, Lit::negative(xs)), memo);
                alloc::vec![self.bundle(i, u, s), a, b]
            }
        } else if let TNode::IfElse { var: x, hi, lo } = ns {
            let a = self.no_clash(i, u, hi, t, &with(guard, Lit::positive(x)), memo);
            let b = self.no_clash(i, u, lo, t, &with(guard, Lit::negative(x)), memo);
            alloc::vec![self.bundle(i, u, s), a, b]
        } else if let TNode::IfElse { var: x, hi, lo } = nt {
            let a = self.no_clash(i, u, s, hi, &with(guard, Lit::positive(x)), memo);
            let b = self.no_clash(i, u, s, lo, &with(guard, Lit::negative(x)), memo);
            alloc::vec![self.bundle(i, u, t), a, b]
        } else if let TNode::Hash { a, b } = ns {
            let pa = self.no_clash(i, u, a, t, guard, memo);
            let pb = self.no_clash(i, u, b, t, guard, memo);
            let pab = self.no_clash(i, u, a, b, guard, memo);
            alloc::vec![self.bundle(i, u, s), pa, pb, pab]
        } else if let TNode::Hash { a, b } = nt {
            let pa = self.no_clash(i, u, s, a, guard, memo);
            let pb = self.no_clash(i, u, s, b, guard, memo);
            let pab = self.no_clash(i, u, a, b, guard, memo);
            alloc::vec![self.bundle(i, u, t), pa, pb, pab]
        } else {
            // Two definite leaves: under a live guard this is entailed only
            // when the constants agree, which the union gate guarantees for
            // co-selected leaves of a valid proof.
            alloc::vec![self.bundle(i, u, s), self.bundle(i, u, t)]
        };
        let idx = self.infer(prem, f);
        memo.insert(key, idx);
        idx
    }

    /// Rewrites the clause implication of premise `p` so its strategy-root
    /// agreements refer to line `i`'s roots, one universal at a time.
    fn adjust(
        &mut self,
        i: usize,
        p: usize,
        nc: &BTreeMap<Var, usize>,
        equiv: &BTreeMap<(usize, Var), BTreeMap<usize, usize>>,
    ) -> usize {
        let mut cur = self.implication[p];
        let clause = self.proof.lines[p].clause.clone();
        let universals = self.universals.clone();
        let mut done: BTreeSet<Var> = BTreeSet::new();
        for &u in &universals {
            done.insert(u);
            let ri = self.proof.lines[i].graphs[&u].root;
            let rp = self.proof.lines[p].graphs[&u].root;
            let mut prem = alloc::vec![cur, self.bundle(i, u, ri), equiv[&(p, u)][&rp]];
            if let TNode::Hash { .. } = self.proof.store.node(ri) {
                prem.push(nc[&u]);
            }
            let parts: Vec<Formula> = universals
                .iter()
                .map(|&w| {
                    if done.contains(&w) {
                        self.gamma(i, w)
                    } else {
                        self.gamma(p, w)
                    }
                })
                .collect();
            let cf = self.clause_to_formula(&clause);
            cur = self.infer(prem, imp(conj(parts), cf));
        }
        cur
    }

    fn clause_to_formula(&mut self, c: &Clause) -> Formula {
        self.lits_formula(&c.lits().to_vec())
    }

    fn run(mut self) -> Certificate {
        if self.proof.lines.is_empty() {
            return Certificate {
                symbols: self.ext.symbols,
                lines: self.out,
            };
        }
        let universals = self.universals.clone();
        for i in 0..self.proof.lines.len() {
            for &u in &universals {
                let g = self.proof.lines[i].graphs[&u];
                for t in self.proof.store.reachable(g.root) {
                    self.bundle(i, u, t);
                }
            }
            let line = self.proof.lines[i].clone();
            match line.rule {
                ProofRule::Axiom(ci) => {
                    let mut cur = ci + 1;
                    let full = self.q.matrix()[ci].clone();
                    let mut remaining: Vec<Lit> = full.lits().to_vec();
                    let mut acc: Vec<Formula> = Vec::new();
                    if universals.is_empty() {
                        let cf = self.clause_to_formula(&line.clause);
                        cur = self.infer(alloc::vec![cur], imp(Formula::True, cf));
                    }
                    for &u in &universals {
                        acc.push(self.gamma(i, u));
                        remaining.retain(|l| l.var() != u);
                        let root = line.graphs[&u].root;
                        let b = self.bundle(i, u, root);
                        let body = self.lits_formula(&remaining);
                        cur = self.infer(alloc::vec![cur, b], imp(conj(acc.clone()), body));
                    }
                    self.implication.push(cur);
                }
                ProofRule::Resolution { j, k, .. } => {
                    let mut equiv = BTreeMap::new();
                    for &u in &universals {
                        equiv.insert((j, u), self.equiv_chain(i, j, u));
                        if k != j {
                            equiv.insert((k, u), self.equiv_chain(i, k, u));
                        }
                    }
                    let mut nc: BTreeMap<Var, usize> = BTreeMap::new();
                    for &u in &universals {
                        let ri = self.proof.lines[i].graphs[&u].root;
                        if let TNode::Hash { a, b } = self.proof.store.node(ri) {
                            let mut memo = BTreeMap::new();
                            let idx = self.no_clash(i, u, a, b, &BTreeSet::new(), &mut memo);
                            nc.insert(u, idx);
                        }
                    }
                    let adj_j = self.adjust(i, j, &nc, &equiv);
                    let adj_k = self.adjust(i, k, &nc, &equiv);
                    let ante = self.antecedent(i);
                    let cf = self.clause_to_formula(&line.clause);
                    let g = self.infer(alloc::vec![adj_j, adj_k], imp(ante, cf));
                    self.implication.push(g);
                }
            }
        }

        // Negated-strategy disjunction and right-to-left elimination.
        let m = self.proof.lines.len() - 1;
        let mut terms: Vec<Formula> = Vec::new();
        for &u in &universals {
            let root = self.proof.lines[m].graphs[&u].root;
            let (vs, ds) = self.pair(m, u, root);
            let us = self.orig(u);
            terms.push(and(var(ds), xor(var(us), var(vs))));
        }
        let g_final = self.implication[m];
        let mut cur = self.infer(alloc::vec![g_final], disj(terms.clone()));
        for p in (0..universals.len()).rev() {
            let u = universals[p];
            let us = self.orig(u);
            let root = self.proof.lines[m].graphs[&u].root;
            let (vs, ds) = self.pair(m, u, root);
            let live = disj(terms[0..=p].to_vec());
            let i0 = self.push(
                EfRule::ForallRed {
                    premise: cur,
                    u,
                    constant: false,
                },
                live.subst(us, false),
            );
            let i1 = self.push(
                EfRule::ForallRed {
                    premise: cur,
                    u,
                    constant: true,
                },
                live.subst(us, true),
            );
            let rest: Vec<Formula> = terms[0..p].to_vec();
            let mut with = rest.clone();
            with.push(and(var(ds), var(vs)));
            let g0 = self.infer(alloc::vec![i0], disj(with));
            let mut with = rest.clone();
            with.push(and(var(ds), not(var(vs))));
            let g1 = self.infer(alloc::vec![i1], disj(with));
            cur = self.infer(alloc::vec![g0, g1], disj(rest));
        }
        let _ = cur;

        Certificate {
            symbols: self.ext.symbols,
            lines: self.out,
        }
    }
}
