//! Certificate format: one line per derivation step.
//!
//! ```text
//! <idx> EXT <var> <formula>
//! <idx> INF <i1> [i2 i3 i4] <formula>
//! <idx> RED <i> <u> <0|1> <formula>
//! ```
//!
//! Formulas use a parenthesized prefix grammar: `T`, `F`, `<name>`,
//! `(~ f)`, `(& f g)`, `(| f g)`, `(-> f g)`, `(<-> f g)`, `(^ f g)`.
//! Names match `[A-Za-z0-9_]+`; original QBF variables go by their decimal
//! name. Whitespace is insignificant within a line. Premise indices
//! `1..=K` refer to the QBF's matrix clauses; certificate lines are
//! numbered from `K+1` up. In an `INF` line the leading integer tokens are
//! the cited premises; if the whole tail is integers, the last one is the
//! formula (a decimal variable).

use mrtk_core::efrege::{EfLine, EfRule};
use mrtk_core::formula::{self, Formula, SymbolTable};
use mrtk_core::qbf::Var;

use super::ParseError;

fn tokenize(line: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for ch in line.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    toks
}

fn valid_name(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_formula(
    toks: &[String],
    pos: &mut usize,
    syms: &mut SymbolTable,
    lineno: usize,
) -> Result<Formula, ParseError> {
    let err = |m: &str| ParseError::new(lineno, m.to_string());
    let Some(tok) = toks.get(*pos) else {
        return Err(err("unexpected end of formula"));
    };
    *pos += 1;
    match tok.as_str() {
        "T" => Ok(Formula::True),
        "F" => Ok(Formula::False),
        "(" => {
            let Some(op) = toks.get(*pos) else {
                return Err(err("missing operator"));
            };
            *pos += 1;
            let f = match op.as_str() {
                "~" => {
                    let a = parse_formula(toks, pos, syms, lineno)?;
                    formula::not(a)
                }
                "&" | "|" | "->" | "<->" | "^" => {
                    let a = parse_formula(toks, pos, syms, lineno)?;
                    let b = parse_formula(toks, pos, syms, lineno)?;
                    match op.as_str() {
                        "&" => formula::and(a, b),
                        "|" => formula::or(a, b),
                        "->" => formula::imp(a, b),
                        "<->" => formula::iff(a, b),
                        _ => formula::xor(a, b),
                    }
                }
                other => return Err(ParseError::new(lineno, format!("bad operator '{other}'"))),
            };
            if toks.get(*pos).map(String::as_str) != Some(")") {
                return Err(err("missing closing parenthesis"));
            }
            *pos += 1;
            Ok(f)
        }
        name if valid_name(name) => Ok(Formula::Var(syms.intern(name))),
        other => Err(ParseError::new(lineno, format!("bad token '{other}'"))),
    }
}

pub fn parse(text: &str) -> Result<(SymbolTable, Vec<EfLine>), ParseError> {
    let mut syms = SymbolTable::new();
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("c ") || line == "c" {
            continue;
        }
        let toks = tokenize(line);
        if toks.len() < 2 {
            return Err(ParseError::new(lineno, "truncated line"));
        }
        let index: usize = toks[0]
            .parse()
            .map_err(|_| ParseError::new(lineno, "bad line index"))?;
        let mut pos = 2usize;
        let (rule, formula) = match toks[1].as_str() {
            "EXT" => {
                let Some(name) = toks.get(pos) else {
                    return Err(ParseError::new(lineno, "missing variable"));
                };
                if !valid_name(name) {
                    return Err(ParseError::new(lineno, format!("bad variable '{name}'")));
                }
                let v = syms.intern(name);
                pos += 1;
                let body = parse_formula(&toks, &mut pos, &mut syms, lineno)?;
                (EfRule::ExtDef { var: v }, formula::iff(Formula::Var(v), body))
            }
            "INF" => {
                let mut premises = Vec::new();
                while let Some(tok) = toks.get(pos) {
                    let all_digits = tok.chars().all(|c| c.is_ascii_digit()) && !tok.is_empty();
                    if !all_digits {
                        break;
                    }
                    premises.push(tok.parse::<usize>().unwrap());
                    pos += 1;
                }
                // A bare trailing integer is the formula, a decimal variable.
                let f = if pos == toks.len() {
                    let Some(last) = premises.pop() else {
                        return Err(ParseError::new(lineno, "missing formula"));
                    };
                    Formula::Var(syms.intern(&last.to_string()))
                } else {
                    parse_formula(&toks, &mut pos, &mut syms, lineno)?
                };
                (EfRule::Infer { premises }, f)
            }
            "RED" => {
                let prem: usize = toks
                    .get(pos)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| ParseError::new(lineno, "bad premise"))?;
                let u: Var = toks
                    .get(pos + 1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| ParseError::new(lineno, "bad universal"))?;
                let constant = match toks.get(pos + 2).map(String::as_str) {
                    Some("0") => false,
                    Some("1") => true,
                    _ => return Err(ParseError::new(lineno, "constant must be 0 or 1")),
                };
                pos += 3;
                let f = parse_formula(&toks, &mut pos, &mut syms, lineno)?;
                (
                    EfRule::ForallRed {
                        premise: prem,
                        u,
                        constant,
                    },
                    f,
                )
            }
            other => return Err(ParseError::new(lineno, format!("unknown rule '{other}'"))),
        };
        if pos != toks.len() {
            return Err(ParseError::new(lineno, "trailing tokens"));
        }
        lines.push(EfLine {
            index,
            rule,
            formula,
        });
    }
    Ok((syms, lines))
}

fn print_formula(f: &Formula, syms: &SymbolTable, out: &mut String) {
    match f {
        Formula::True => out.push('T'),
        Formula::False => out.push('F'),
        Formula::Var(s) => out.push_str(syms.name(*s)),
        Formula::Not(a) => {
            out.push_str("(~ ");
            print_formula(a, syms, out);
            out.push(')');
        }
        Formula::And(a, b) => print_binary("&", a, b, syms, out),
        Formula::Or(a, b) => print_binary("|", a, b, syms, out),
        Formula::Imp(a, b) => print_binary("->", a, b, syms, out),
        Formula::Iff(a, b) => print_binary("<->", a, b, syms, out),
        Formula::Xor(a, b) => print_binary("^", a, b, syms, out),
    }
}

fn print_binary(op: &str, a: &Formula, b: &Formula, syms: &SymbolTable, out: &mut String) {
    out.push('(');
    out.push_str(op);
    out.push(' ');
    print_formula(a, syms, out);
    out.push(' ');
    print_formula(b, syms, out);
    out.push(')');
}

pub fn serialize(syms: &SymbolTable, lines: &[EfLine]) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(&line.index.to_string());
        match &line.rule {
            EfRule::ExtDef { var } => {
                out.push_str(" EXT ");
                out.push_str(syms.name(*var));
                out.push(' ');
                // The stored formula is `var <-> body`; the file carries
                // only the body.
                match &line.formula {
                    Formula::Iff(_, body) => print_formula(body, syms, &mut out),
                    other => print_formula(other, syms, &mut out),
                }
            }
            EfRule::Infer { premises } => {
                out.push_str(" INF");
                for p in premises {
                    out.push_str(&format!(" {p}"));
                }
                out.push(' ');
                print_formula(&line.formula, syms, &mut out);
            }
            EfRule::ForallRed {
                premise,
                u,
                constant,
            } => {
                out.push_str(&format!(" RED {premise} {u} {} ", u8::from(*constant)));
                print_formula(&line.formula, syms, &mut out);
            }
        }
        out.push('\n');
    }
    out
}
