//! Label selection for new worlds.
//!
//! Candidates are the types realized at roots of small models of the target
//! class; a request is answered by filtering them against its membership
//! and relational constraints, preferring labels that create the least
//! follow-up work.

use crate::conditions::{as_interpretability, FrameClass};
use crate::formula::{label_ambient, AdequateSet, Formula};
use crate::model::{crit, subset_box, Label};
use crate::search::{realized_types, SearchOptions};
use std::fmt;

/// Constraints shared by the two existence requests.
#[derive(Clone, Debug, PartialEq)]
pub struct ExistenceRequest {
    pub gamma: Label,
    /// Every answer lies critical above `gamma` for this formula.
    pub cone: Formula,
    /// Every answer lies `⊆□` above each of these.
    pub lower: Vec<Label>,
    pub antecedent: Formula,
    /// The first answer contains it.
    pub consequent: Formula,
    /// `(S, T)` pairs: an `S` in some answer needs a `T` in some answer.
    pub obligations: Vec<(Formula, Formula)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LabelRequest {
    /// `Δ` with `gamma ≺_consequent Δ` and `antecedent, [](~antecedent) ∈ Δ`.
    Problem { gamma: Label, antecedent: Formula, consequent: Formula },
    /// `Δ` with `gamma ≺_cone Δ`, `target, [](~target) ∈ Δ`, above `lower`
    /// and, when given, `[](~avoid) ∈ Δ`.
    Deficiency { gamma: Label, cone: Formula, target: Formula, lower: Vec<Label>, avoid: Option<Formula> },
    M0Existence(ExistenceRequest),
    /// As `M0Existence`, and every answer has `[](~antecedent)`.
    WstarExistence(ExistenceRequest),
}

impl fmt::Display for LabelRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelRequest::Problem { antecedent, consequent, .. } => {
                write!(f, "problem label for ~({antecedent} |> {consequent})")
            }
            LabelRequest::Deficiency { cone, target, lower, avoid, .. } => {
                write!(f, "deficiency label with {target} critical for {cone} above {} labels", lower.len())?;
                if let Some(a) = avoid {
                    write!(f, " avoiding {a}")?;
                }
                Ok(())
            }
            LabelRequest::M0Existence(r) | LabelRequest::WstarExistence(r) => {
                let kind = if matches!(self, LabelRequest::M0Existence(_)) { "M0" } else { "W*" };
                write!(
                    f,
                    "{kind} existence for {} |> {} critical for {} with {} obligations",
                    r.antecedent,
                    r.consequent,
                    r.cone,
                    r.obligations.len()
                )
            }
        }
    }
}

fn not_box(f: &Formula) -> Formula {
    Formula::boxed(Formula::neg(f.clone()))
}

fn is_negated_modal(f: &Formula) -> bool {
    f.as_neg().and_then(as_interpretability).is_some()
}

impl LabelRequest {
    /// Whether a single label meets the per-label constraints.
    fn admits(&self, delta: &Label) -> bool {
        match self {
            LabelRequest::Problem { gamma, antecedent, consequent } => {
                delta.contains(antecedent) && delta.contains(&not_box(antecedent)) && crit(gamma, delta, consequent)
            }
            LabelRequest::Deficiency { gamma, cone, target, lower, avoid } => {
                delta.contains(target)
                    && delta.contains(&not_box(target))
                    && avoid.as_ref().is_none_or(|a| delta.contains(&not_box(a)))
                    && lower.iter().all(|l| subset_box(l, delta))
                    && crit(gamma, delta, cone)
            }
            LabelRequest::M0Existence(r) => base_ok(r, delta),
            LabelRequest::WstarExistence(r) => base_ok(r, delta) && delta.contains(&not_box(&r.antecedent)),
        }
    }

    fn gamma(&self) -> &Label {
        match self {
            LabelRequest::Problem { gamma, .. } | LabelRequest::Deficiency { gamma, .. } => gamma,
            LabelRequest::M0Existence(r) | LabelRequest::WstarExistence(r) => &r.gamma,
        }
    }

    /// Re-checks an answer against every constraint of the request.
    pub fn verify(&self, answer: &[Label]) -> bool {
        if answer.is_empty() || !answer.iter().all(|d| self.admits(d)) {
            return false;
        }
        match self {
            LabelRequest::Problem { .. } | LabelRequest::Deficiency { .. } => answer.len() == 1,
            LabelRequest::M0Existence(r) | LabelRequest::WstarExistence(r) => {
                answer.len() <= r.obligations.len() + 1
                    && answer[0].contains(&r.consequent)
                    && uncovered(&r.obligations, answer).is_none()
            }
        }
    }
}

fn base_ok(r: &ExistenceRequest, delta: &Label) -> bool {
    r.lower.iter().all(|l| subset_box(l, delta)) && crit(&r.gamma, delta, &r.cone)
}

/// Least obligation whose antecedent occurs in `chosen` without its consequent.
fn uncovered(obligations: &[(Formula, Formula)], chosen: &[Label]) -> Option<usize> {
    obligations.iter().position(|(s, t)| {
        chosen.iter().any(|d| d.contains(s)) && !chosen.iter().any(|d| d.contains(t))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no label satisfies the {request} among types realized up to {bound} worlds")]
pub struct Unsatisfied {
    pub request: String,
    pub bound: usize,
}

/// Search nodes the covering search may visit before giving up.
const COVER_NODES: usize = 200_000;

/// Realized types over the label ambient of an adequate set.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub class: FrameClass,
    pub bound: usize,
    adequate: AdequateSet,
    ambient: AdequateSet,
    types: Vec<Label>,
}

impl Oracle {
    pub fn new(adequate: &AdequateSet, class: FrameClass, bound: usize, opts: SearchOptions) -> Oracle {
        let ambient = label_ambient(adequate);
        let types = realized_types(&ambient, class, bound, opts);
        Oracle { class, bound, adequate: adequate.clone(), ambient, types }
    }

    pub fn ambient(&self) -> &AdequateSet {
        &self.ambient
    }

    pub fn types(&self) -> &[Label] {
        &self.types
    }

    /// Follow-up work a label would create, then canonical order.
    fn score(&self, gamma: Option<&Label>, delta: &Label) -> (usize, usize) {
        let open = gamma.map_or(0, |g| {
            g.iter()
                .filter(|f| self.adequate.contains(f))
                .filter_map(Formula::as_rhd)
                .filter(|(s, t)| delta.contains(s) && !delta.contains(t))
                .count()
        });
        let negated = delta
            .iter()
            .filter(|f| self.adequate.contains(f) && is_negated_modal(f))
            .count();
        (open, negated)
    }

    fn ranked<'a>(&'a self, gamma: Option<&Label>, keep: impl Fn(&Label) -> bool) -> Vec<&'a Label> {
        let mut out: Vec<(&Label, (usize, usize))> = self
            .types
            .iter()
            .filter(|d| keep(d))
            .map(|d| (d, self.score(gamma, d)))
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(b.0)));
        out.into_iter().map(|(d, _)| d).collect()
    }

    /// The preferred type containing `phi`, if any is realized.
    pub fn root_label(&self, phi: &Formula) -> Option<Label> {
        self.ranked(None, |d| d.contains(phi)).first().map(|d| (*d).clone())
    }

    pub fn answer(&self, req: &LabelRequest) -> Result<Vec<Label>, Unsatisfied> {
        let fail = || Unsatisfied { request: req.to_string(), bound: self.bound };
        let gamma = Some(req.gamma());
        let answer = match req {
            LabelRequest::Problem { .. } | LabelRequest::Deficiency { .. } => {
                let best = self.ranked(gamma, |d| req.admits(d));
                vec![(*best.first().ok_or_else(fail)?).clone()]
            }
            LabelRequest::M0Existence(r) | LabelRequest::WstarExistence(r) => {
                let pool = self.ranked(gamma, |d| req.admits(d));
                let mut nodes = 0;
                let mut found = None;
                for first in pool.iter().filter(|d| d.contains(&r.consequent)) {
                    let mut chosen = vec![(*first).clone()];
                    if cover(&pool, &r.obligations, &mut chosen, &mut nodes) {
                        found = Some(chosen);
                        break;
                    }
                    if nodes > COVER_NODES {
                        break;
                    }
                }
                found.ok_or_else(fail)?
            }
        };
        debug_assert!(req.verify(&answer));
        Ok(answer)
    }
}

/// Depth-first covering search: extends `chosen` until every obligation
/// triggered by it is met, with at most one label per obligation.
fn cover(pool: &[&Label], obligations: &[(Formula, Formula)], chosen: &mut Vec<Label>, nodes: &mut usize) -> bool {
    *nodes += 1;
    let Some(j) = uncovered(obligations, chosen) else {
        return true;
    };
    if chosen.len() > obligations.len() || *nodes > COVER_NODES {
        return false;
    }
    let target = &obligations[j].1;
    for cand in pool.iter().filter(|d| d.contains(target)) {
        if chosen.contains(cand) {
            continue;
        }
        chosen.push((*cand).clone());
        if cover(pool, obligations, chosen, nodes) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{adequate_closure, parse};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn problem_label_for_negated_rhd() {
        let phi = f("~(p |> q)");
        let d = adequate_closure([&phi]);
        let oracle = Oracle::new(&d, FrameClass::IL, 3, SearchOptions::default());
        let gamma = oracle.root_label(&phi).unwrap();
        let req = LabelRequest::Problem { gamma, antecedent: f("p"), consequent: f("q") };
        let ans = oracle.answer(&req).unwrap();
        for g in ["p", "[]~p", "~q", "[]~q"] {
            assert!(ans[0].contains(&f(g)), "{g} missing");
        }
        assert!(req.verify(&ans));
    }

    #[test]
    fn deficiency_label_with_bot_cone() {
        let phi = f("(p |> q) /\\ <>p");
        let d = adequate_closure([&phi]);
        let oracle = Oracle::new(&d, FrameClass::IL, 3, SearchOptions::default());
        let gamma = oracle.root_label(&phi).unwrap();
        let req = LabelRequest::Deficiency { gamma: gamma.clone(), cone: Formula::Bot, target: f("q"), lower: vec![], avoid: None };
        let ans = oracle.answer(&req).unwrap();
        assert!(ans[0].contains(&f("q")) && ans[0].contains(&f("[]~q")));
        assert!(crate::model::prec(&gamma, &ans[0]));
    }

    #[test]
    fn existence_without_obligations_is_one_label() {
        let phi = f("(p |> q) /\\ <>p");
        let d = adequate_closure([&phi]);
        let oracle = Oracle::new(&d, FrameClass::ILM0, 3, SearchOptions::default());
        let gamma = oracle.root_label(&phi).unwrap();
        let req = LabelRequest::M0Existence(ExistenceRequest {
            gamma,
            cone: Formula::Bot,
            lower: vec![],
            antecedent: f("p"),
            consequent: f("q"),
            obligations: vec![],
        });
        let ans = oracle.answer(&req).unwrap();
        assert_eq!(ans.len(), 1);
        assert!(ans[0].contains(&f("q")));
    }

    #[test]
    fn verify_rejects_uncovered() {
        let req = LabelRequest::M0Existence(ExistenceRequest {
            gamma: Label::default(),
            cone: Formula::Bot,
            lower: vec![],
            antecedent: f("p"),
            consequent: f("q"),
            obligations: vec![(f("q"), f("r"))],
        });
        let only_q: Label = [f("q")].into_iter().collect();
        assert!(!req.verify(std::slice::from_ref(&only_q)));
        let r: Label = [f("r")].into_iter().collect();
        assert!(req.verify(&[only_q, r]));
    }
}
