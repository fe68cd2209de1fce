//! Strategy dump format: one section per universal listing its graph one
//! node per line in topological order (children first, root last). Node
//! ids are section-local and 1-based.
//!
//! ```text
//! p strat <universal-count>
//! u <var> <node-count>
//! <id> LEAF <0|1|*>
//! <id> ITE <var> <hi-id> <lo-id>
//! <id> HASH <a-id> <b-id>
//! ```

use std::collections::BTreeMap;

use mrtk_core::qbf::Var;
use mrtk_core::tgraph::{TGraph, TGraphStore, TNode};
use mrtk_core::trival::TriVal;

use super::ParseError;

pub fn serialize(store: &TGraphStore, strategies: &BTreeMap<Var, TGraph>) -> String {
    let mut out = format!("p strat {}\n", strategies.len());
    for (&u, &g) in strategies {
        let nodes = store.reachable(g.root);
        debug_assert_eq!(nodes.last(), Some(&g.root));
        // Ascending arena order is topological; remap to local 1-based ids.
        let local: BTreeMap<usize, usize> =
            nodes.iter().enumerate().map(|(i, &n)| (n, i + 1)).collect();
        out.push_str(&format!("u {u} {}\n", nodes.len()));
        for &n in &nodes {
            let id = local[&n];
            match store.node(n) {
                TNode::Leaf(v) => out.push_str(&format!("{id} LEAF {v}\n")),
                TNode::IfElse { var, hi, lo } => out.push_str(&format!(
                    "{id} ITE {var} {} {}\n",
                    local[&hi], local[&lo]
                )),
                TNode::Hash { a, b } => {
                    out.push_str(&format!("{id} HASH {} {}\n", local[&a], local[&b]))
                }
            }
        }
    }
    out
}

pub fn parse(text: &str) -> Result<(TGraphStore, BTreeMap<Var, TGraph>), ParseError> {
    let mut store = TGraphStore::new();
    let mut strategies: BTreeMap<Var, TGraph> = BTreeMap::new();
    let mut declared: Option<usize> = None;
    let mut section: Option<(Var, usize)> = None;
    let mut local: BTreeMap<usize, usize> = BTreeMap::new();

    let close_section = |section: &Option<(Var, usize)>,
                         local: &BTreeMap<usize, usize>,
                         strategies: &mut BTreeMap<Var, TGraph>,
                         lineno: usize|
     -> Result<(), ParseError> {
        if let Some((u, n)) = section {
            if local.len() != *n {
                return Err(ParseError::new(
                    lineno,
                    format!("section for {u} declares {n} nodes, found {}", local.len()),
                ));
            }
            let root = local
                .get(n)
                .ok_or_else(|| ParseError::new(lineno, "missing root node"))?;
            strategies.insert(*u, TGraph { root: *root });
        }
        Ok(())
    };

    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if toks.len() != 3 || toks[1] != "strat" {
                    return Err(ParseError::new(lineno, "malformed header"));
                }
                declared = Some(
                    toks[2]
                        .parse()
                        .map_err(|_| ParseError::new(lineno, "bad count"))?,
                );
            }
            "u" => {
                if declared.is_none() {
                    return Err(ParseError::new(lineno, "section before header"));
                }
                close_section(&section, &local, &mut strategies, lineno)?;
                local.clear();
                if toks.len() != 3 {
                    return Err(ParseError::new(lineno, "section takes var and count"));
                }
                let u: Var = toks[1]
                    .parse()
                    .map_err(|_| ParseError::new(lineno, "bad universal"))?;
                let n: usize = toks[2]
                    .parse()
                    .map_err(|_| ParseError::new(lineno, "bad node count"))?;
                section = Some((u, n));
            }
            idtok => {
                if section.is_none() {
                    return Err(ParseError::new(lineno, "node before section"));
                }
                let id: usize = idtok
                    .parse()
                    .map_err(|_| ParseError::new(lineno, "bad node id"))?;
                if id != local.len() + 1 {
                    return Err(ParseError::new(lineno, "node ids must be sequential"));
                }
                if toks.len() < 2 {
                    return Err(ParseError::new(lineno, "missing node kind"));
                }
                let child = |tok: &str| -> Result<TGraph, ParseError> {
                    let c: usize = tok
                        .parse()
                        .map_err(|_| ParseError::new(lineno, "bad child id"))?;
                    local
                        .get(&c)
                        .map(|&root| TGraph { root })
                        .ok_or_else(|| ParseError::new(lineno, "child must precede parent"))
                };
                let g = match (toks[1], toks.len()) {
                    ("LEAF", 3) => {
                        let v = match toks[2] {
                            "0" => TriVal::False,
                            "1" => TriVal::True,
                            "*" => TriVal::Star,
                            other => {
                                return Err(ParseError::new(
                                    lineno,
                                    format!("bad leaf value '{other}'"),
                                ))
                            }
                        };
                        store.leaf(v)
                    }
                    ("ITE", 5) => {
                        let var: Var = toks[2]
                            .parse()
                            .map_err(|_| ParseError::new(lineno, "bad branch variable"))?;
                        let hi = child(toks[3])?;
                        let lo = child(toks[4])?;
                        store.ifelse(var, hi, lo)
                    }
                    ("HASH", 4) => {
                        let a = child(toks[2])?;
                        let b = child(toks[3])?;
                        store.hash(a, b)
                    }
                    (kind, _) => {
                        return Err(ParseError::new(lineno, format!("bad node '{kind}'")))
                    }
                };
                local.insert(id, g.root);
            }
        }
    }
    let n_lines = text.lines().count();
    close_section(&section, &local, &mut strategies, n_lines)?;
    let Some(n) = declared else {
        return Err(ParseError::new(1, "missing header"));
    };
    if strategies.len() != n {
        return Err(ParseError::new(
            1,
            format!("header declares {n} universals, found {}", strategies.len()),
        ));
    }
    Ok((store, strategies))
}
