//! Propositional formulas over interned variable symbols, used by the
//! certificate emitter and checker.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

/// Index into a [`SymbolTable`].
pub type Sym = u32;

/// Interns variable names; original QBF variables use their decimal name.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    by_name: BTreeMap<String, Sym>,
}

impl SymbolTable {
    pub fn new() -> SymbolTable {
        SymbolTable::default()
    }

    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.by_name.get(name) {
            return s;
        }
        let s = self.names.len() as Sym;
        self.names.push(String::from(name));
        self.by_name.insert(String::from(name), s);
        s
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Var(Sym),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
}

pub fn var(s: Sym) -> Formula {
    Formula::Var(s)
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn imp(a: Formula, b: Formula) -> Formula {
    Formula::Imp(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

pub fn xor(a: Formula, b: Formula) -> Formula {
    Formula::Xor(Box::new(a), Box::new(b))
}

/// Right-folded conjunction; empty is true.
pub fn conj(mut fs: Vec<Formula>) -> Formula {
    match fs.len() {
        0 => Formula::True,
        1 => fs.pop().unwrap(),
        _ => {
            let mut out = fs.pop().unwrap();
            while let Some(f) = fs.pop() {
                out = and(f, out);
            }
            out
        }
    }
}

/// Right-folded disjunction; empty is false.
pub fn disj(mut fs: Vec<Formula>) -> Formula {
    match fs.len() {
        0 => Formula::False,
        1 => fs.pop().unwrap(),
        _ => {
            let mut out = fs.pop().unwrap();
            while let Some(f) = fs.pop() {
                out = or(f, out);
            }
            out
        }
    }
}

impl Formula {
    pub fn eval(&self, vals: &BTreeMap<Sym, bool>) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(s) => *vals.get(s).unwrap_or(&false),
            Formula::Not(f) => !f.eval(vals),
            Formula::And(a, b) => a.eval(vals) && b.eval(vals),
            Formula::Or(a, b) => a.eval(vals) || b.eval(vals),
            Formula::Imp(a, b) => !a.eval(vals) || b.eval(vals),
            Formula::Iff(a, b) => a.eval(vals) == b.eval(vals),
            Formula::Xor(a, b) => a.eval(vals) != b.eval(vals),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(s) => {
                out.insert(*s);
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b)
            | Formula::Xor(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Substitutes a constant for a variable.
    pub fn subst(&self, v: Sym, value: bool) -> Formula {
        let c = if value { Formula::True } else { Formula::False };
        self.map_vars(&|s| if s == v { c.clone() } else { Formula::Var(s) })
    }

    fn map_vars(&self, f: &impl Fn(Sym) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Var(s) => f(*s),
            Formula::Not(a) => not(a.map_vars(f)),
            Formula::And(a, b) => and(a.map_vars(f), b.map_vars(f)),
            Formula::Or(a, b) => or(a.map_vars(f), b.map_vars(f)),
            Formula::Imp(a, b) => imp(a.map_vars(f), b.map_vars(f)),
            Formula::Iff(a, b) => iff(a.map_vars(f), b.map_vars(f)),
            Formula::Xor(a, b) => xor(a.map_vars(f), b.map_vars(f)),
        }
    }
}

/// Semantic entailment by exhaustive evaluation over the variables of
/// premises and conclusion. Returns `None` when the variable count exceeds
/// `budget`.
pub fn entails(premises: &[&Formula], conclusion: &Formula, budget: usize) -> Option<bool> {
    let mut vars = conclusion.vars();
    for p in premises {
        p.collect_vars(&mut vars);
    }
    if vars.len() > budget {
        return None;
    }
    let vars: Vec<Sym> = vars.into_iter().collect();
    for bits in 0..(1usize << vars.len()) {
        let vals: BTreeMap<Sym, bool> = vars
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, bits >> i & 1 == 1))
            .collect();
        if premises.iter().all(|p| p.eval(&vals)) && !conclusion.eval(&vals) {
            return Some(false);
        }
    }
    Some(true)
}
