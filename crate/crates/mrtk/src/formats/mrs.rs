//! Proof format for the merge-map system. Header `p mrs <lines>`, then
//! `A <matrix-clause-index>` or `R <j> <k> <pivot> [<u>:S|<u>:M]*`, `j`
//! the premise holding the pivot positively. Per-universal choices apply
//! to pivots left of the universal and default to select.

use mrtk_core::mres::{Choice, MresRule};

use super::ParseError;

pub fn parse(text: &str) -> Result<Vec<MresRule>, ParseError> {
    let mut declared: Option<usize> = None;
    let mut rules: Vec<MresRule> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if declared.is_some() {
                    return Err(ParseError::new(lineno, "duplicate header"));
                }
                if toks.len() != 3 || toks[1] != "mrs" {
                    return Err(ParseError::new(lineno, "malformed header"));
                }
                declared = Some(
                    toks[2]
                        .parse()
                        .map_err(|_| ParseError::new(lineno, "bad line count"))?,
                );
            }
            "A" => {
                if declared.is_none() {
                    return Err(ParseError::new(lineno, "rule before header"));
                }
                if toks.len() != 2 {
                    return Err(ParseError::new(lineno, "axiom takes one index"));
                }
                let ci: usize = toks[1]
                    .parse()
                    .map_err(|_| ParseError::new(lineno, "bad clause index"))?;
                if ci == 0 {
                    return Err(ParseError::new(lineno, "clause indices are 1-based"));
                }
                rules.push(MresRule::Axiom(ci - 1));
            }
            "R" => {
                if declared.is_none() {
                    return Err(ParseError::new(lineno, "rule before header"));
                }
                if toks.len() < 4 {
                    return Err(ParseError::new(lineno, "resolution takes j k pivot"));
                }
                let nums: Vec<usize> = toks[1..4]
                    .iter()
                    .map(|t| t.parse().map_err(|_| ParseError::new(lineno, "bad number")))
                    .collect::<Result<_, _>>()?;
                if nums[0] == 0 || nums[1] == 0 || nums[2] == 0 {
                    return Err(ParseError::new(lineno, "indices are 1-based"));
                }
                let mut rule = MresRule::resolution(nums[0] - 1, nums[1] - 1, nums[2] as u32);
                for tok in &toks[4..] {
                    let Some((u, c)) = tok.split_once(':') else {
                        return Err(ParseError::new(lineno, format!("bad choice '{tok}'")));
                    };
                    let u: u32 = u
                        .parse()
                        .map_err(|_| ParseError::new(lineno, "bad universal in choice"))?;
                    let choice = match c {
                        "S" => Choice::Select,
                        "M" => Choice::Merge,
                        _ => return Err(ParseError::new(lineno, format!("bad choice '{tok}'"))),
                    };
                    rule = rule.with_choice(u, choice);
                }
                rules.push(rule);
            }
            other => return Err(ParseError::new(lineno, format!("unknown rule '{other}'"))),
        }
    }
    let Some(n) = declared else {
        return Err(ParseError::new(1, "missing header"));
    };
    if rules.len() != n {
        return Err(ParseError::new(
            1,
            format!("header declares {n} lines, found {}", rules.len()),
        ));
    }
    Ok(rules)
}

pub fn serialize(rules: &[MresRule]) -> String {
    let mut out = format!("p mrs {}\n", rules.len());
    for rule in rules {
        match rule {
            MresRule::Axiom(ci) => out.push_str(&format!("A {}\n", ci + 1)),
            MresRule::Resolution {
                j,
                k,
                pivot,
                choices,
            } => {
                out.push_str(&format!("R {} {} {}", j + 1, k + 1, pivot));
                for (u, c) in choices {
                    let c = match c {
                        Choice::Select => 'S',
                        Choice::Merge => 'M',
                    };
                    out.push_str(&format!(" {u}:{c}"));
                }
                out.push('\n');
            }
        }
    }
    out
}
