//! QDIMACS: DIMACS CNF with `a`/`e` prefix lines, clauses 0-terminated.
//!
//! Parsing is strict: the `p cnf` header must come first, declared counts
//! must match, variables must stay in range, a variable may be quantified
//! once, and tautological clauses are an error rather than dropped. Free
//! variables occurring in the matrix are placed in an implicit outermost
//! existential block. Serialization is byte-stable.

use std::collections::BTreeSet;

use mrtk_core::qbf::{Clause, Lit, Qbf, QbfError, Quant, Var};

use super::ParseError;

pub fn parse(text: &str) -> Result<Qbf, ParseError> {
    let mut num_vars: Option<Var> = None;
    let mut num_clauses = 0usize;
    let mut blocks: Vec<(Quant, Vec<Var>)> = Vec::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut quantified: BTreeSet<Var> = BTreeSet::new();
    let mut prefix_done = false;
    let mut pending: Vec<Lit> = Vec::new();
    let mut pending_line = 0usize;

    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if num_vars.is_some() {
                return Err(ParseError::new(lineno, "duplicate p-line"));
            }
            let mut it = line.split_whitespace();
            let (p, cnf) = (it.next(), it.next());
            let nv = it.next().and_then(|t| t.parse::<Var>().ok());
            let nc = it.next().and_then(|t| t.parse::<usize>().ok());
            if p != Some("p") || cnf != Some("cnf") || nv.is_none() || nc.is_none()
                || it.next().is_some()
            {
                return Err(ParseError::new(lineno, "malformed p-line"));
            }
            num_vars = nv;
            num_clauses = nc.unwrap();
            continue;
        }
        let Some(nv) = num_vars else {
            return Err(ParseError::new(lineno, "expected p-line before content"));
        };
        if line.starts_with('a') || line.starts_with('e') {
            if prefix_done || !pending.is_empty() {
                return Err(ParseError::new(lineno, "prefix line after clauses"));
            }
            let quant = if line.starts_with('a') {
                Quant::Forall
            } else {
                Quant::Exists
            };
            let mut vars = Vec::new();
            let mut closed = false;
            for tok in line[1..].split_whitespace() {
                let n: i64 = tok
                    .parse()
                    .map_err(|_| ParseError::new(lineno, format!("bad token '{tok}'")))?;
                if n == 0 {
                    closed = true;
                    break;
                }
                if n < 0 {
                    return Err(ParseError::new(lineno, "negative variable in prefix"));
                }
                let v = n as Var;
                if v > nv {
                    return Err(ParseError::new(
                        lineno,
                        format!("variable {v} out of declared range"),
                    ));
                }
                if !quantified.insert(v) {
                    return Err(ParseError::new(
                        lineno,
                        format!("variable {v} quantified twice"),
                    ));
                }
                vars.push(v);
            }
            if !closed {
                return Err(ParseError::new(lineno, "prefix line not 0-terminated"));
            }
            if vars.is_empty() {
                return Err(ParseError::new(lineno, "empty quantifier block"));
            }
            // Adjacent blocks with the same quantifier merge.
            match blocks.last_mut() {
                Some((q, vs)) if *q == quant => vs.extend(vars),
                _ => blocks.push((quant, vars)),
            }
            continue;
        }
        prefix_done = true;
        if pending.is_empty() {
            pending_line = lineno;
        }
        for tok in line.split_whitespace() {
            let n: i64 = tok
                .parse()
                .map_err(|_| ParseError::new(lineno, format!("bad token '{tok}'")))?;
            if n == 0 {
                let clause = Clause::new(std::mem::take(&mut pending)).map_err(|e| match e {
                    QbfError::TautologicalClause(v) => ParseError::new(
                        lineno,
                        format!("tautological clause on variable {v}"),
                    ),
                    other => ParseError::new(lineno, other.to_string()),
                })?;
                clauses.push(clause);
            } else {
                let v = n.unsigned_abs() as Var;
                if v > nv {
                    return Err(ParseError::new(
                        lineno,
                        format!("variable {v} out of declared range"),
                    ));
                }
                pending.push(Lit::from_dimacs(n));
            }
        }
    }

    let Some(nv) = num_vars else {
        return Err(ParseError::new(1, "missing p-line"));
    };
    if !pending.is_empty() {
        return Err(ParseError::new(pending_line, "clause not 0-terminated"));
    }
    if clauses.len() != num_clauses {
        return Err(ParseError::new(
            1,
            format!(
                "p-line declares {num_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }

    // Free matrix variables become outermost existentials.
    let mut free: Vec<Var> = clauses
        .iter()
        .flat_map(|c| c.vars().collect::<Vec<_>>())
        .filter(|v| !quantified.contains(v))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    free.sort_unstable();
    if !free.is_empty() {
        match blocks.first_mut() {
            Some((Quant::Exists, vs)) => {
                let mut nvs = free;
                nvs.extend(vs.iter().copied());
                *vs = nvs;
            }
            _ => blocks.insert(0, (Quant::Exists, free)),
        }
    }

    Qbf::new(blocks, clauses, nv).map_err(|e| ParseError::new(1, e.to_string()))
}

pub fn serialize(q: &Qbf) -> String {
    let mut out = String::new();
    out.push_str(&format!("p cnf {} {}\n", q.num_vars(), q.matrix().len()));
    for (quant, vars) in q.blocks() {
        let c = match quant {
            Quant::Exists => 'e',
            Quant::Forall => 'a',
        };
        let mut vs = vars.clone();
        vs.sort_unstable();
        out.push(c);
        for v in vs {
            out.push_str(&format!(" {v}"));
        }
        out.push_str(" 0\n");
    }
    for clause in q.matrix() {
        for l in clause.lits() {
            out.push_str(&format!("{} ", l.to_dimacs()));
        }
        out.push_str("0\n");
    }
    out
}
