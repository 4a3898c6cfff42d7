//! Frame conditions, adequacy and quasi-frame checks, invariants of the
//! construction, problems, deficiencies and the truth lemma.

use crate::formula::{label_ambient, AdequateSet, Formula};
use crate::model::{crit, prec, strict_subset_box, subset_box, Frame, LabeledFrame, Model};
use crate::relations::{critical_cone, generalized_cone, n_cone, world_set, Rel};
use crate::report::Report;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Frame classes with a decision procedure in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FrameClass {
    IL,
    ILM0,
    ILW,
    ILWstar,
}

impl FrameClass {
    pub const ALL: [FrameClass; 4] = [FrameClass::IL, FrameClass::ILM0, FrameClass::ILW, FrameClass::ILWstar];

    /// Whether bounded search can be trusted in both directions at desk
    /// scale, i.e. the class has the finite model property.
    pub fn has_fmp(self) -> bool {
        matches!(self, FrameClass::IL | FrameClass::ILW)
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameClass::IL => "IL",
            FrameClass::ILM0 => "ILM0",
            FrameClass::ILW => "ILW",
            FrameClass::ILWstar => "ILWstar",
        })
    }
}

impl FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "il" => Ok(FrameClass::IL),
            "ilm0" => Ok(FrameClass::ILM0),
            "ilw" => Ok(FrameClass::ILW),
            "ilwstar" | "ilw*" => Ok(FrameClass::ILWstar),
            other => Err(format!("unknown class {other:?}; expected il, ilm0, ilw or ilwstar")),
        }
    }
}

fn m0_violations(frame: &Frame, tag: &'static str, report: &mut Report) {
    let n = frame.len();
    for w in 0..n {
        for x in frame.r.succ(w) {
            for y in frame.r.succ(x) {
                for y2 in frame.s[w].succ(y) {
                    for z in frame.r.succ(y2) {
                        if !frame.r.contains(x, z) {
                            report.push(tag, frame.names(&[w, x, y, y2, z]), "w R x R y S_w y' R z without x R z");
                        }
                    }
                }
            }
        }
    }
}

fn w_violations(frame: &Frame, report: &mut Report) {
    for w in 0..frame.len() {
        let step = frame.s[w].compose(&frame.r).expect("same carrier");
        if let Some(x) = step.cycle_witness() {
            report.push("W", frame.names(&[w, x]), "S_w;R has a cycle");
        }
    }
}

/// IL-frame clauses plus the class condition.
pub fn check_class_condition(frame: &Frame, class: FrameClass) -> Report {
    let mut report = frame.validate();
    if matches!(class, FrameClass::ILM0 | FrameClass::ILWstar) {
        m0_violations(frame, "M0", &mut report);
    }
    if matches!(class, FrameClass::ILW | FrameClass::ILWstar) {
        w_violations(frame, &mut report);
    }
    report
}

/// Labels along `R`, disjoint generalized cones and critical cone labels,
/// tagged with `tags`.
fn label_clauses(lf: &LabeledFrame, tags: [&'static str; 3], report: &mut Report) {
    let frame = lf.frame();
    for (x, y) in frame.r.pairs() {
        if !prec(lf.label(x), lf.label(y)) {
            report.push(tags[0], lf.names(&[x, y]), "x R y but not label(x) ≺ label(y)");
        }
    }
    let formulas = lf.edge_formulas();
    for x in 0..lf.len() {
        let used: Vec<&Formula> = formulas
            .iter()
            .filter(|c| lf.edge_labels().any(|(a, _, f)| a == x && f == *c))
            .collect();
        let cones: Vec<_> = used.iter().map(|c| generalized_cone(lf, x, c)).collect();
        for i in 0..used.len() {
            for j in i + 1..used.len() {
                if let Some(y) = cones[i].intersection(&cones[j]).next() {
                    report.push(
                        tags[1],
                        lf.names(&[x, y]),
                        format!("generalized cones of {} and {} meet", used[i], used[j]),
                    );
                }
            }
        }
        for c in &used {
            for y in critical_cone(lf, x, c).ones() {
                if !crit(lf.label(x), lf.label(y), c) {
                    report.push(tags[2], lf.names(&[x, y]), format!("cone member not {c}-critical"));
                }
            }
        }
    }
}

pub fn check_quasi_frame(lf: &LabeledFrame) -> Report {
    let frame = lf.frame();
    let mut report = Report::new();
    if let Some(x) = frame.r.cycle_witness() {
        report.push("quasi.1", lf.names(&[x]), "R is not conversely well-founded");
    }
    for (x, y, z) in frame.s_triples() {
        if !frame.r.contains(x, y) || !frame.r.contains(x, z) {
            report.push("quasi.2", lf.names(&[x, y, z]), "S_x relates a world outside R(x)");
        }
    }
    label_clauses(lf, ["quasi.3", "quasi.4", "quasi.5"], &mut report);
    report
}

pub fn check_adequate(lf: &LabeledFrame) -> Report {
    let mut report = lf.frame().validate();
    label_clauses(lf, ["adequate.1", "adequate.2", "adequate.3"], &mut report);
    report
}

/// `x (S̆_w ∪ R)* y` for every `x S_w y`.
fn s_through_pure(lf: &LabeledFrame, tag: &'static str, report: &mut Report) {
    let frame = lf.frame();
    let d = lf.derived();
    for w in 0..lf.len() {
        let steps = d.pure_s[w].union(&frame.r).expect("same carrier").reflexive_transitive_closure();
        for (x, y) in frame.s[w].pairs() {
            if !steps.contains(x, y) {
                report.push(tag, lf.names(&[w, x, y]), "x S_w y not reached by pure S_w and R");
            }
        }
    }
}

/// `x R y` implies `x (R¹)^tr y`.
fn r_through_one_step(lf: &LabeledFrame, tag: &'static str, report: &mut Report) {
    let frame = lf.frame();
    let tc = lf.derived().r_one.transitive_closure();
    for (x, y) in frame.r.pairs() {
        if !tc.contains(x, y) {
            report.push(tag, lf.names(&[x, y]), "x R y not reached by one-step R");
        }
    }
}

/// `w A x A y (S_w ∪ A)* y'` implies `label(x) ⊆□ label(y')`.
fn box_inclusion(lf: &LabeledFrame, above: &Rel, tag: &'static str, report: &mut Report) {
    let frame = lf.frame();
    for w in 0..lf.len() {
        let step = frame.s[w].union(above).expect("same carrier");
        for x in above.succ(w) {
            for y2 in step.reach(above.row(x)).ones() {
                if !subset_box(lf.label(x), lf.label(y2)) {
                    report.push(tag, lf.names(&[w, x, y2]), "label(x) not ⊆□ label(y')");
                }
            }
        }
    }
}

pub fn check_adequate_m0(lf: &LabeledFrame) -> Report {
    let mut report = check_adequate(lf);
    let frame = lf.frame();
    m0_violations(frame, "adequate-m0.4", &mut report);
    for w in 0..lf.len() {
        for x in frame.r.succ(w) {
            for y in frame.r.succ(x) {
                for y2 in frame.s[w].succ(y) {
                    if !subset_box(lf.label(x), lf.label(y2)) {
                        report.push("adequate-m0.5", lf.names(&[w, x, y, y2]), "label(x) not ⊆□ label(y')");
                    }
                }
            }
        }
    }
    s_through_pure(lf, "adequate-m0.6", &mut report);
    r_through_one_step(lf, "adequate-m0.7", &mut report);
    report
}

pub fn check_quasi_m0(lf: &LabeledFrame) -> Report {
    let mut report = check_quasi_frame(lf);
    let d = lf.derived();
    if let Some(x) = d.k.cycle_witness() {
        report.push("quasi-m0.6", lf.names(&[x]), "K is not conversely well-founded");
    }
    for (x, y) in d.k.pairs() {
        if !prec(lf.label(x), lf.label(y)) {
            report.push("quasi-m0.7", lf.names(&[x, y]), "x K y but not label(x) ≺ label(y)");
        }
    }
    n_cone_labels(lf, "quasi-m0.8", &mut report);
    box_inclusion(lf, &d.k, "quasi-m0.9", &mut report);
    s_through_pure(lf, "quasi-m0.10", &mut report);
    let k1_tr = d.k_one.transitive_closure();
    for w in 0..lf.len() {
        for x in d.k.succ(w) {
            for y in d.k_one.succ(x) {
                for y2 in d.pure_s_tr[w].succ(y) {
                    for z in d.k_one.succ(y2) {
                        if !k1_tr.contains(x, z) {
                            report.push("quasi-m0.11", lf.names(&[w, x, y, y2, z]), "x (K¹)^tr z fails");
                        }
                    }
                }
            }
        }
    }
    r_through_one_step(lf, "quasi-m0.12", &mut report);
    report
}

fn n_cone_labels(lf: &LabeledFrame, tag: &'static str, report: &mut Report) {
    for w in 0..lf.len() {
        for c in lf.edge_formulas() {
            for x in n_cone(lf, w, &c).ones() {
                if !crit(lf.label(w), lf.label(x), &c) {
                    report.push(tag, lf.names(&[w, x]), format!("N-cone member not {c}-critical"));
                }
            }
        }
    }
}

/// `w A x A y (S̆_w)^tr y'` implies `label(x) ⊊□ label(y')` over `tracked`.
fn strict_gain(lf: &LabeledFrame, above: &Rel, tracked: &AdequateSet, tag: &'static str, report: &mut Report) {
    let d = lf.derived();
    for w in 0..lf.len() {
        for x in above.succ(w) {
            for y in above.succ(x) {
                for y2 in d.pure_s_tr[w].succ(y) {
                    if !strict_subset_box(lf.label(x), lf.label(y2), tracked) {
                        report.push(tag, lf.names(&[w, x, y, y2]), "label(x) not strictly ⊆□ label(y')");
                    }
                }
            }
        }
    }
}

pub fn check_quasi_wstar(lf: &LabeledFrame, d: &AdequateSet) -> Report {
    let mut report = check_quasi_m0(lf);
    let tracked = label_ambient(d);
    let k = lf.derived().k.clone();
    strict_gain(lf, &k, &tracked, "quasi-wstar.13", &mut report);
    report
}

pub fn check_adequate_wstar(lf: &LabeledFrame, d: &AdequateSet) -> Report {
    let mut report = check_adequate_m0(lf);
    let tracked = label_ambient(d);
    strict_gain(lf, &lf.frame().r.clone(), &tracked, "adequate-wstar.8", &mut report);
    report
}

/// `¬(A |> B)` or `¬[]C` in a label with no witness yet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Problem {
    pub world: usize,
    pub formula: Formula,
}

/// `x R y` with `A |> B` (or `[]C`) at `x`, the antecedent at `y` and no
/// `S_x`-successor of `y` carrying the consequent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Deficiency {
    pub x: usize,
    pub y: usize,
    pub formula: Formula,
}

/// Antecedent and consequent of a modal formula read as `|>`:
/// `A |> B` gives `(A, B)` and `[]C` gives `(~C, bot)`.
pub fn as_interpretability(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Rhd(a, b) => Some(((**a).clone(), (**b).clone())),
        Formula::Box(c) => Some((c.single_negation(), Formula::Bot)),
        _ => None,
    }
}

impl Problem {
    /// The `(A, B)` pair of the negated formula.
    pub fn parts(&self) -> (Formula, Formula) {
        let inner = self.formula.as_neg().expect("problem formulas are negations");
        as_interpretability(inner).expect("problem formulas negate a modal formula")
    }
}

impl Deficiency {
    pub fn parts(&self) -> (Formula, Formula) {
        as_interpretability(&self.formula).expect("deficiency formulas are modal")
    }
}

fn negated_modal(f: &Formula) -> bool {
    f.as_neg().and_then(as_interpretability).is_some()
}

/// Problems: `¬(A |> B) ∈ label(x) ∩ d` and no `y` in the `B`-critical cone
/// of `x` has `A`.
pub fn find_problems(lf: &LabeledFrame, d: &AdequateSet) -> Vec<Problem> {
    let mut out = Vec::new();
    for x in 0..lf.len() {
        for f in lf.label(x).iter().filter(|f| d.contains(f) && negated_modal(f)) {
            let p = Problem { world: x, formula: f.clone() };
            let (a, b) = p.parts();
            let cone = critical_cone(lf, x, &b);
            if !cone.ones().any(|y| lf.label(y).contains(&a)) {
                out.push(p);
            }
        }
    }
    out
}

/// Problems in the weaker sense: every `R`-successor with `A` already sees
/// a `B` through `S_x`.
pub fn find_problems_old_style(lf: &LabeledFrame, d: &AdequateSet) -> Vec<Problem> {
    let frame = lf.frame();
    let mut out = Vec::new();
    for x in 0..lf.len() {
        for f in lf.label(x).iter().filter(|f| d.contains(f) && negated_modal(f)) {
            let p = Problem { world: x, formula: f.clone() };
            let inner = f.as_neg().expect("negation");
            let witnessed = frame.r.succ(x).any(|y| match inner {
                Formula::Box(c) => !lf.label(y).contains(c),
                Formula::Rhd(a, b) => {
                    lf.label(y).contains(a) && !frame.s[x].succ(y).any(|z| lf.label(z).contains(b))
                }
                _ => unreachable!("negated_modal"),
            });
            if !witnessed {
                out.push(p);
            }
        }
    }
    out
}

pub fn find_deficiencies(lf: &LabeledFrame, d: &AdequateSet) -> Vec<Deficiency> {
    let frame = lf.frame();
    let mut out = Vec::new();
    for x in 0..lf.len() {
        let modal: Vec<&Formula> = lf
            .label(x)
            .iter()
            .filter(|f| d.contains(f) && as_interpretability(f).is_some())
            .collect();
        for y in frame.r.succ(x) {
            for f in &modal {
                if deficient(lf, x, y, f) {
                    out.push(Deficiency { x, y, formula: (*f).clone() });
                }
            }
        }
    }
    out
}

fn deficient(lf: &LabeledFrame, x: usize, y: usize, f: &Formula) -> bool {
    match f {
        Formula::Box(c) => !lf.label(y).contains(c),
        Formula::Rhd(a, b) => {
            lf.label(y).contains(a) && !lf.frame().s[x].succ(y).any(|z| lf.label(z).contains(b))
        }
        _ => false,
    }
}

/// Deficiencies at `x` with respect to the successor `y`.
pub fn deficiencies_at(lf: &LabeledFrame, d: &AdequateSet, x: usize, y: usize) -> Vec<Formula> {
    lf.label(x)
        .iter()
        .filter(|f| d.contains(f) && deficient(lf, x, y, f))
        .cloned()
        .collect()
}

/// Outcome of the two truth lemma checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TruthReport {
    pub problems: Vec<Problem>,
    pub deficiencies: Vec<Deficiency>,
    /// `(world, formula)` where forcing and membership differ.
    pub mismatches: Vec<(String, String)>,
}

impl TruthReport {
    pub fn combinatorial_ok(&self) -> bool {
        self.problems.is_empty() && self.deficiencies.is_empty()
    }

    pub fn direct_ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn holds(&self) -> bool {
        self.combinatorial_ok() && self.direct_ok()
    }

    /// The two computations disagree only on a non-adequate input or a bug.
    pub fn disagreement(&self) -> bool {
        self.combinatorial_ok() != self.direct_ok()
    }
}

/// Both truth lemma checks against the induced model.
pub fn truth_lemma_check(lf: &LabeledFrame, d: &AdequateSet) -> TruthReport {
    truth_lemma_check_model(lf, &lf.induced_model_unchecked(), d)
}

/// Both truth lemma checks with the direct check run on `model`.
pub fn truth_lemma_check_model(lf: &LabeledFrame, model: &Model, d: &AdequateSet) -> TruthReport {
    let mut mismatches = Vec::new();
    for f in d.iter() {
        let truth = model.truth_set(f);
        for x in 0..lf.len() {
            if truth.contains(x) != lf.label(x).contains(f) {
                mismatches.push((lf.name(x).to_string(), f.to_string()));
            }
        }
    }
    TruthReport {
        problems: find_problems(lf, d),
        deficiencies: find_deficiencies(lf, d),
        mismatches,
    }
}

/// The construction invariants for `class` (`IL`, `ILM0` or `ILWstar`).
pub fn check_invariants(lf: &LabeledFrame, d: &AdequateSet, class: FrameClass) -> Report {
    let tracked = label_ambient(d);
    let mut report = if class == FrameClass::IL {
        check_adequate(lf)
    } else {
        check_adequate_m0(lf)
    };
    invariant_depth_gain(lf, &tracked, &mut report);
    if class == FrameClass::IL || class == FrameClass::ILW {
        return report;
    }
    main_invariants(lf, d, &mut report);
    sub_invariants(lf, &mut report);
    if class == FrameClass::ILWstar {
        let k = lf.derived().k.clone();
        strict_gain(lf, &k, &tracked, "I_w*", &mut report);
    }
    report
}

/// `x R y` gains a tracked box.
fn invariant_depth_gain(lf: &LabeledFrame, tracked: &AdequateSet, report: &mut Report) {
    for (x, y) in lf.frame().r.pairs() {
        let gained = lf
            .label(y)
            .boxes()
            .any(|f| tracked.contains(f) && !lf.label(x).contains(f));
        if !gained {
            report.push("I_D", lf.names(&[x, y]), "x R y without a new box in label(y)");
        }
    }
}

/// The `⊆□`-greatest label among `xs`, if the labels have one.
fn box_max(lf: &LabeledFrame, xs: &[usize]) -> Option<usize> {
    xs.iter()
        .copied()
        .find(|&m| xs.iter().all(|&t| subset_box(lf.label(t), lf.label(m))))
}

fn main_invariants(lf: &LabeledFrame, d: &AdequateSet, report: &mut Report) {
    let frame = lf.frame();
    let der = lf.derived();
    let n = lf.len();
    for y in 0..n {
        let preds: Vec<usize> = der.k_one.pred(y).collect();
        for (i, &a) in preds.iter().enumerate() {
            for &b in &preds[i + 1..] {
                if !subset_box(lf.label(a), lf.label(b)) && !subset_box(lf.label(b), lf.label(a)) {
                    report.push("I_box", lf.names(&[a, b, y]), "K¹-predecessors not ⊆□-comparable");
                }
            }
        }
    }
    for w in 0..n {
        let step = frame.s[w].union(&der.k).expect("same carrier");
        let mut late = world_set(n);
        for x2 in der.k_multi.succ(w) {
            late.insert(x2);
        }
        let reached = step.reach(&late);
        for x in der.k_one.succ(w) {
            if reached.contains(x) {
                for f in deficiencies_at(lf, d, w, x) {
                    report.push("I_d", lf.names(&[w, x]), format!("deficiency {f} behind a K^≥2 successor"));
                }
            }
        }
    }
    for w in 0..n {
        let step = frame.s[w].union(&der.k).expect("same carrier");
        for x in der.k.succ(w) {
            for y2 in step.reach(der.k.row(x)).ones() {
                let tops: Vec<usize> = der.k.succ(w).filter(|&t| der.k_one.contains(t, y2)).collect();
                if let Some(m) = box_max(lf, &tops) {
                    if !subset_box(lf.label(x), lf.label(m)) {
                        report.push("I_S", lf.names(&[w, x, y2, m]), "⊆□-maximum below y' is not above label(x)");
                    }
                }
            }
        }
    }
    for w in 0..n {
        for c in lf.edge_formulas() {
            let cone = n_cone(lf, w, &c);
            for x in der.k.succ(w) {
                if cone.contains(x) {
                    continue;
                }
                if let Some(y) = der.k.succ(x).find(|&y| cone.contains(y)) {
                    report.push("I_N", lf.names(&[w, x, y]), format!("y in N-cone of {c} but x is not"));
                }
            }
        }
    }
}

fn sub_invariants(lf: &LabeledFrame, report: &mut Report) {
    let der = lf.derived();
    let n = lf.len();
    let k_one = |x: usize, z: usize| der.k_one.contains(x, z);
    for w in 0..n {
        for y in 0..n {
            let sources: Vec<usize> = der
                .k_multi
                .succ(w)
                .filter(|&x| der.pure_s_tr[w].contains(x, y))
                .collect();
            if sources.len() > 1 {
                report.push("J_u", lf.names(&[w, sources[0], sources[1], y]), "two K^≥2 sources reach y by pure S_w");
            }
        }
    }
    for w in 0..n {
        for x in der.k.succ(w) {
            for y in der.k_one.succ(x) {
                for y2 in der.pure_s_tr[w].succ(y) {
                    for z in der.k_one.succ(y2) {
                        if !k_one(x, z) {
                            report.push("J_K1", lf.names(&[w, x, y, y2, z]), "x K¹ z fails");
                        }
                    }
                }
            }
        }
    }
    for (x, y) in der.below.pairs() {
        if x < y && der.below.contains(y, x) {
            report.push("J_sub", lf.names(&[x, y]), "⊂ is not antisymmetric");
        }
    }
    let cones: Vec<(usize, Formula, crate::relations::WorldSet)> = (0..n)
        .flat_map(|w| lf.edge_formulas().into_iter().map(move |c| (w, c)))
        .map(|(w, c)| {
            let cone = n_cone(lf, w, &c);
            (w, c, cone)
        })
        .collect();
    for (w, c, cone) in &cones {
        for v in 0..n {
            for (x, y) in der.pure_s_tr[v].pairs() {
                if der.k.contains(*w, y) && cone.contains(x) && !cone.contains(y) {
                    report.push("J_N1", lf.names(&[v, *w, x, y]), format!("N-cone of {c} not closed forward"));
                }
            }
        }
        for (x, y) in der.pure_s_tr[*w].pairs() {
            if cone.contains(y) && !cone.contains(x) {
                report.push("J_N2", lf.names(&[*w, x, y]), format!("N-cone of {c} not closed backward"));
            }
        }
    }
    let edges: Vec<(usize, usize)> = lf.edge_labels().map(|(a, b, _)| (a, b)).collect();
    for &(w, y) in &edges {
        for v in der.k.pred(y) {
            if !der.below.contains(v, w) {
                report.push("J_nu1", lf.names(&[w, y, v]), "v K y but not v ⊂ w");
            }
        }
        if !der.k_one.contains(w, y) {
            report.push("J_nu2", lf.names(&[w, y]), "labeled edge is not K¹");
        }
    }
    for w in 0..n {
        for (_, y) in der.pure_s_tr[w].pairs() {
            if lf.edge_label(w, y).is_none() {
                report.push("J_nu4", lf.names(&[w, y]), "pure S_w target without edge label");
            }
        }
    }
    for &(v, y) in &edges {
        for &(w, y2) in &edges {
            if y == y2 && v < w {
                report.push("J_nu3", lf.names(&[v, w, y]), "two labeled edges into one world");
            }
        }
    }
}
