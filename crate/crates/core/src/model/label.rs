use crate::formula::{AdequateSet, Formula};
use std::collections::BTreeSet;
use std::sync::Arc;

/// A finite set of formulas standing for a maximal consistent set.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<BTreeSet<Formula>>);

impl Label {
    pub fn new(formulas: BTreeSet<Formula>) -> Label {
        Label(Arc::new(formulas))
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn formulas(&self) -> &BTreeSet<Formula> {
        &self.0
    }

    pub fn boxes(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter().filter(|f| f.as_box().is_some())
    }

    /// Propositionally saturated over `ambient`: a subset of it, free of
    /// `bot`, holding exactly one of each `A` / `~A`, and respecting every
    /// implication whose parts are tracked.
    pub fn is_saturated(&self, ambient: &AdequateSet) -> bool {
        if self.contains(&Formula::Bot) || !self.iter().all(|f| ambient.contains(f)) {
            return false;
        }
        ambient.iter().all(|f| {
            let one_of = self.contains(f) != self.contains(&f.single_negation());
            let implication = match f {
                Formula::Implies(a, b) if ambient.contains(a) && ambient.contains(b) => {
                    self.contains(f) == (!self.contains(a) || self.contains(b))
                }
                _ => true,
            };
            one_of && implication
        })
    }
}

impl FromIterator<Formula> for Label {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Label::new(iter.into_iter().collect())
    }
}

/// `[]A` in the lower label puts `A` and `[]A` in the upper one.
pub fn prec(lower: &Label, upper: &Label) -> bool {
    lower.iter().all(|f| match f.as_box() {
        Some(a) => upper.contains(a) && upper.contains(f),
        None => true,
    })
}

/// `prec` plus: every `A |> C` in the lower label, and the instance
/// `C |> C`, keeps `A` and `<>A` out of the upper label.
///
/// The conditions are checked in refutation form (`A` absent rather than
/// `~A` present) so they read the same over any ambient set.
pub fn crit(lower: &Label, upper: &Label, target: &Formula) -> bool {
    let excluded = |a: &Formula| !upper.contains(a) && !upper.contains(&Formula::diamond(a.clone()));
    prec(lower, upper)
        && excluded(target)
        && lower.iter().all(|f| match f.as_rhd() {
            Some((a, c)) if c == target => excluded(a),
            _ => true,
        })
}

/// Every box of the lower label is in the upper one.
pub fn subset_box(lower: &Label, upper: &Label) -> bool {
    lower.boxes().all(|f| upper.contains(f))
}

/// `subset_box` and some box from `tracked` is gained.
pub fn strict_subset_box(lower: &Label, upper: &Label, tracked: &AdequateSet) -> bool {
    subset_box(lower, upper)
        && upper
            .boxes()
            .any(|f| tracked.contains(f) && !lower.contains(f))
}
