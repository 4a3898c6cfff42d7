//! Formulas of interpretability logic.
//!
//! The tree has exactly five constructors. Negation, the diamond and the
//! binary boolean connectives are abbreviations that the parser expands and
//! the printer folds back, so `print(parse(s))` keeps the shape of `s`.

mod parser;
mod printer;
mod schema;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse, parse_with_lints, Lint, ParseError};
pub use schema::{schema, schemas, Schema, LEMMA_BATTERY};

/// A formula over propositional variables, `bot`, implication, box and `|>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bot,
    Var(String),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Rhd(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn boxed(inner: Formula) -> Formula {
        Formula::Box(Box::new(inner))
    }

    pub fn rhd(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Rhd(Box::new(lhs), Box::new(rhs))
    }

    /// `A -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Formula) -> Formula {
        Formula::implies(inner, Formula::Bot)
    }

    /// `~[]~A`.
    pub fn diamond(inner: Formula) -> Formula {
        Formula::neg(Formula::boxed(Formula::neg(inner)))
    }

    /// `~(A -> ~B)`.
    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::neg(Formula::implies(lhs, Formula::neg(rhs)))
    }

    /// `~A -> B`.
    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::implies(Formula::neg(lhs), rhs)
    }

    /// `(A -> B) /\ (B -> A)`.
    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::and(
            Formula::implies(lhs.clone(), rhs.clone()),
            Formula::implies(rhs, lhs),
        )
    }

    /// Conjunction of a list; the empty conjunction is `~bot`.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::neg(Formula::Bot),
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// The operand if this formula is `A -> bot`.
    pub fn as_neg(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(lhs, rhs) if **rhs == Formula::Bot => Some(lhs),
            _ => None,
        }
    }

    pub fn as_box(&self) -> Option<&Formula> {
        match self {
            Formula::Box(inner) => Some(inner),
            _ => None,
        }
    }

    pub fn as_rhd(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Rhd(lhs, rhs) => Some((lhs, rhs)),
            _ => None,
        }
    }

    /// Single negation: strips one leading negation or adds one.
    pub fn single_negation(&self) -> Formula {
        match self.as_neg() {
            Some(inner) => inner.clone(),
            None => Formula::neg(self.clone()),
        }
    }

    /// Immediate subformulas. A negation has only its operand: `bot` is
    /// not counted as a subformula of `~A`.
    pub fn children(&self) -> Vec<&Formula> {
        if let Some(inner) = self.as_neg() {
            return vec![inner];
        }
        match self {
            Formula::Bot | Formula::Var(_) => vec![],
            Formula::Implies(l, r) | Formula::Rhd(l, r) => vec![l, r],
            Formula::Box(inner) => vec![inner],
        }
    }

    /// All subformulas including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if out.insert(f.clone()) {
                stack.extend(f.children());
            }
        }
        out
    }

    /// Propositional variables in order of name.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bot => {}
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Implies(l, r) | Formula::Rhd(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Box(inner) => inner.collect_vars(out),
        }
    }

    /// Replace variables by formulas; unmapped variables stay.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Formula::Implies(l, r) => Formula::implies(l.substitute(map), r.substitute(map)),
            Formula::Box(inner) => Formula::boxed(inner.substitute(map)),
            Formula::Rhd(l, r) => Formula::rhd(l.substitute(map), r.substitute(map)),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bot | Formula::Var(_) => 1,
            Formula::Implies(l, r) | Formula::Rhd(l, r) => 1 + l.size() + r.size(),
            Formula::Box(inner) => 1 + inner.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::print(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Canonical text of a formula with minimal parentheses.
pub fn print(formula: &Formula) -> String {
    printer::print(formula)
}

/// A finite set of formulas closed under subformulas and single negation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdequateSet {
    formulas: BTreeSet<Formula>,
}

impl AdequateSet {
    pub fn contains(&self, formula: &Formula) -> bool {
        self.formulas.contains(formula)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn as_set(&self) -> &BTreeSet<Formula> {
        &self.formulas
    }

    /// `A |> B` members.
    pub fn rhd_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter().filter(|f| f.as_rhd().is_some())
    }

    /// `[]A` members.
    pub fn box_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter().filter(|f| f.as_box().is_some())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.formulas.iter().flat_map(|f| f.variables()).collect()
    }

    /// True when the set is closed under subformulas and single negation.
    pub fn is_closed(set: &BTreeSet<Formula>) -> bool {
        set.iter().all(|f| {
            set.contains(&f.single_negation()) && f.children().into_iter().all(|c| set.contains(c))
        })
    }
}

impl<'a> IntoIterator for &'a AdequateSet {
    type Item = &'a Formula;
    type IntoIter = std::collections::btree_set::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.formulas.iter()
    }
}

/// The smallest superset of `seed` closed under subformulas and single
/// negation.
pub fn adequate_closure<'a>(seed: impl IntoIterator<Item = &'a Formula>) -> AdequateSet {
    let mut formulas = BTreeSet::new();
    for f in seed {
        formulas.extend(f.subformulas());
    }
    let negations: Vec<Formula> = formulas.iter().map(Formula::single_negation).collect();
    for n in negations {
        // The single negation of a subformula only adds one outer `~`, whose
        // other subformulas are already present.
        formulas.insert(n);
    }
    AdequateSet { formulas }
}

/// The label ambient for a construction: `adequate_closure(D)` extended by
/// `[]~A` and its single negation for every `A` in `D`.
pub fn label_ambient(adequate: &AdequateSet) -> AdequateSet {
    let mut seed: Vec<Formula> = adequate.iter().cloned().collect();
    for a in adequate.iter() {
        seed.push(Formula::boxed(Formula::neg(a.clone())));
    }
    adequate_closure(&seed)
}
