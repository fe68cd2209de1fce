//! Proof format for the graph-strategy system: rule skeletons only, since
//! strategies are rule-determined. Header `p mrt <lines>`, then one rule
//! per line: `A <matrix-clause-index>` or `R <j> <k> <pivot>` with the
//! pivot positive in line `j`. Indices are 1-based in the file.

use mrtk_core::convert::RuleScript;
use mrtk_core::mrest::ProofRule;

use super::ParseError;

pub fn parse(text: &str) -> Result<RuleScript, ParseError> {
    let mut declared: Option<usize> = None;
    let mut steps: Vec<ProofRule> = Vec::new();
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
                if toks.len() != 3 || toks[1] != "mrt" {
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
                steps.push(ProofRule::Axiom(ci - 1));
            }
            "R" => {
                if declared.is_none() {
                    return Err(ParseError::new(lineno, "rule before header"));
                }
                if toks.len() != 4 {
                    return Err(ParseError::new(lineno, "resolution takes j k pivot"));
                }
                let nums: Vec<usize> = toks[1..4]
                    .iter()
                    .map(|t| t.parse().map_err(|_| ParseError::new(lineno, "bad number")))
                    .collect::<Result<_, _>>()?;
                if nums[0] == 0 || nums[1] == 0 || nums[2] == 0 {
                    return Err(ParseError::new(lineno, "indices are 1-based"));
                }
                steps.push(ProofRule::Resolution {
                    j: nums[0] - 1,
                    k: nums[1] - 1,
                    pivot: nums[2] as u32,
                });
            }
            other => return Err(ParseError::new(lineno, format!("unknown rule '{other}'"))),
        }
    }
    let Some(n) = declared else {
        return Err(ParseError::new(1, "missing header"));
    };
    if steps.len() != n {
        return Err(ParseError::new(
            1,
            format!("header declares {n} lines, found {}", steps.len()),
        ));
    }
    Ok(RuleScript::new(steps))
}

pub fn serialize(script: &RuleScript) -> String {
    let mut out = format!("p mrt {}\n", script.steps.len());
    for step in &script.steps {
        match *step {
            ProofRule::Axiom(ci) => out.push_str(&format!("A {}\n", ci + 1)),
            ProofRule::Resolution { j, k, pivot } => {
                out.push_str(&format!("R {} {} {}\n", j + 1, k + 1, pivot))
            }
        }
    }
    out
}
