//! Propositional formulas over a feature space.
//!
//! Rendering grammar: `!` negation, `&` conjunction, `|` disjunction,
//! parentheses, identifiers, `true` and `false`, with precedence
//! `!` > `&` > `|`.

use std::fmt;

use crate::configspace::{ConfigSet, Engine, Feature, FeatureSpace, PartialConfig};

/// A literal: feature and polarity (`true` for the plain feature).
pub type Literal = (Feature, bool);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Lit(Feature, bool),
    Not(Box<Formula>),
    /// At least two children, none of them a conjunction.
    And(Vec<Formula>),
    /// At least two children, none of them a disjunction.
    Or(Vec<Formula>),
}

impl Formula {
    pub fn var(feature: Feature) -> Formula {
        Formula::Lit(feature, true)
    }

    /// Conjunction, flattening nested conjunctions. An empty list yields
    /// `true`, a single child is returned as is.
    pub fn and(children: impl IntoIterator<Item = Formula>) -> Formula {
        let mut flat = Vec::new();
        for c in children {
            match c {
                Formula::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::True,
            1 => flat.pop().unwrap(),
            _ => Formula::And(flat),
        }
    }

    /// Disjunction, flattening nested disjunctions. An empty list yields
    /// `false`, a single child is returned as is.
    pub fn or(children: impl IntoIterator<Item = Formula>) -> Formula {
        let mut flat = Vec::new();
        for c in children {
            match c {
                Formula::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::False,
            1 => flat.pop().unwrap(),
            _ => Formula::Or(flat),
        }
    }

    /// Negation; literals and constants absorb it.
    pub fn negate(self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Lit(f, v) => Formula::Lit(f, !v),
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    /// Conjunction of the literals of `p` in declaration order.
    pub fn cube(p: &PartialConfig) -> Formula {
        Formula::and(p.literals().map(|(f, v)| Formula::Lit(f, v)))
    }

    /// Conjunction of a literal list.
    pub fn from_literals(literals: &[Literal]) -> Formula {
        Formula::and(literals.iter().map(|&(f, v)| Formula::Lit(f, v)))
    }

    /// Length with constants and variables counting one, negation adding one,
    /// and each binary connective adding one. An n-ary node therefore counts
    /// `n - 1` connectives.
    pub fn length(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Lit(_, true) => 1,
            Formula::Lit(_, false) => 2,
            Formula::Not(inner) => inner.length() + 1,
            Formula::And(cs) | Formula::Or(cs) => cs.iter().map(Formula::length).sum::<usize>() + cs.len() - 1,
        }
    }

    /// The set of total configurations satisfying the formula.
    pub fn to_set(&self, engine: &Engine) -> ConfigSet {
        match self {
            Formula::True => engine.full(),
            Formula::False => engine.empty(),
            Formula::Lit(f, v) => engine.literal(*f, *v),
            Formula::Not(inner) => inner.to_set(engine).complement(),
            Formula::And(cs) => cs.iter().fold(engine.full(), |acc, c| &acc & &c.to_set(engine)),
            Formula::Or(cs) => cs.iter().fold(engine.empty(), |acc, c| &acc | &c.to_set(engine)),
        }
    }

    /// The cubes of a formula in disjunctive normal form, each with literals
    /// sorted and deduplicated. `None` if the formula is not a DNF.
    pub fn dnf_cubes(&self) -> Option<Vec<Vec<Literal>>> {
        fn cube_of(f: &Formula) -> Option<Vec<Literal>> {
            let mut lits = match f {
                Formula::True => Vec::new(),
                Formula::Lit(x, v) => vec![(*x, *v)],
                Formula::And(cs) => cs
                    .iter()
                    .map(|c| match c {
                        Formula::Lit(x, v) => Some((*x, *v)),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()?,
                _ => return None,
            };
            lits.sort_by_key(|&(x, v)| (x, !v));
            lits.dedup();
            Some(lits)
        }
        match self {
            Formula::False => Some(Vec::new()),
            Formula::Or(cs) => cs
                .iter()
                .map(|c| match c {
                    Formula::False => Some(None),
                    other => cube_of(other).map(Some),
                })
                .collect::<Option<Vec<_>>>()
                .map(|v| v.into_iter().flatten().collect()),
            other => cube_of(other).map(|c| vec![c]),
        }
    }

    /// Negation-normal form: negation only on literals.
    pub fn nnf(&self) -> Formula {
        fn go(f: &Formula, positive: bool) -> Formula {
            match (f, positive) {
                (Formula::True, true) | (Formula::False, false) => Formula::True,
                (Formula::True, false) | (Formula::False, true) => Formula::False,
                (Formula::Lit(x, v), p) => Formula::Lit(*x, *v == p),
                (Formula::Not(inner), p) => go(inner, !p),
                (Formula::And(cs), true) | (Formula::Or(cs), false) => Formula::and(cs.iter().map(|c| go(c, positive))),
                (Formula::Or(cs), true) | (Formula::And(cs), false) => Formula::or(cs.iter().map(|c| go(c, positive))),
            }
        }
        go(self, true)
    }

    pub fn display<'a>(&'a self, space: &'a FeatureSpace) -> Rendered<'a> {
        Rendered { formula: self, space }
    }
}

/// Display adapter produced by [`Formula::display`].
pub struct Rendered<'a> {
    formula: &'a Formula,
    space: &'a FeatureSpace,
}

impl Rendered<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, parent: u8) -> fmt::Result {
        // 0: top or inside |, 1: inside &, 2: under !
        let space = self.space;
        match node {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Lit(x, true) => f.write_str(space.name(*x)),
            Formula::Lit(x, false) => write!(f, "!{}", space.name(*x)),
            Formula::Not(inner) => {
                f.write_str("!")?;
                self.write(f, inner, 2)
            }
            Formula::And(cs) | Formula::Or(cs) => {
                let (sep, level) = match node {
                    Formula::And(_) => (" & ", 1),
                    _ => (" | ", 0),
                };
                let paren = parent > level;
                if paren {
                    f.write_str("(")?;
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    self.write(f, c, level + 1)?;
                }
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}
