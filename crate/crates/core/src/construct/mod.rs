//! Step-by-step model construction.
//!
//! Starting from a one-world labeled frame whose label contains the input
//! formula, problems and then deficiencies are eliminated one at a time.
//! Each elimination adds fresh worlds labeled by the [`Oracle`] and closes
//! the result back to an adequate frame of the target logic.

mod oracle;

pub use oracle::{ExistenceRequest, LabelRequest, Oracle, Unsatisfied};

use crate::closure::{il_close_with, m0_close_with, wstar_close_with, ClosureError, ClosureOptions};
use crate::conditions::{check_invariants, find_deficiencies, find_problems, truth_lemma_check, Deficiency, FrameClass, Problem, TruthReport};
use crate::formula::{adequate_closure, AdequateSet, Formula};
use crate::model::{subset_box, Frame, Label, LabeledFrame, Model};
use crate::relations::{cone_formula, n_cone_formula};
use crate::report::Report;
use crate::search::SearchOptions;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepKind {
    #[serde(rename = "PROBLEM")]
    Problem,
    #[serde(rename = "DEFICIENCY")]
    Deficiency,
}

/// One applied elimination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub index: usize,
    pub kind: StepKind,
    pub worlds: Vec<String>,
    pub formula: Formula,
    pub added: Vec<String>,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            StepKind::Problem => "PROBLEM",
            StepKind::Deficiency => "DEFICIENCY",
        };
        write!(
            f,
            "STEP {} {} {} {} -> +{}",
            self.index,
            kind,
            self.worlds.join(","),
            self.formula,
            self.added.join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("construction supports IL, ILM0 and ILWstar, not {0}")]
    UnsupportedLogic(FrameClass),
    #[error("no model of {phi} up to {bound} worlds; presumed inconsistent at bound {bound}")]
    Unsatisfiable { phi: String, bound: usize },
    #[error("step {step}: {source}")]
    Oracle { step: usize, source: Unsatisfied },
    #[error("budget of {budget} eliminations exhausted")]
    Budget { budget: usize, steps: Vec<Step> },
    #[error("step {step}: {source}")]
    Closure { step: usize, source: ClosureError },
    #[error("invariants fail after step {step}:\n{report}")]
    Invariant { step: usize, report: Report },
    #[error("step {step}: R-chain of {depth} worlds exceeds the bound {limit}")]
    Depth { step: usize, depth: usize, limit: usize },
    #[error("step {step}: problem {formula} at {world} came back")]
    Recurrence { step: usize, world: String, formula: String },
    #[error("step {step}: deficiency ({a}, {b}, {formula}) has no ⊆□-maximal K-predecessor")]
    NoMaximum { step: usize, a: String, b: String, formula: String },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

impl ConstructError {
    /// Steps applied before an abort on budget.
    pub fn steps(&self) -> &[Step] {
        match self {
            ConstructError::Budget { steps, .. } => steps,
            _ => &[],
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ConstructOptions {
    /// Check the invariants of the target logic after every step and run
    /// closure with its own per-step checks.
    pub debug: bool,
    /// Worker count for the oracle's type enumeration.
    pub search: SearchOptions,
}

/// Mutable state of one run.
#[derive(Clone, Debug)]
pub struct ConstructionState {
    pub frame: LabeledFrame,
    pub logic: FrameClass,
    pub adequate: AdequateSet,
    pub steps: Vec<Step>,
    pub budget: usize,
}

/// A finished run.
#[derive(Clone, Debug)]
pub struct Construction {
    pub frame: LabeledFrame,
    pub model: Model,
    pub root: String,
    pub steps: Vec<Step>,
    pub truth: TruthReport,
}

impl Construction {
    pub fn log(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

pub fn construct_model(phi: &Formula, logic: FrameClass, budget: usize, bound: usize) -> Result<Construction, ConstructError> {
    construct_model_with(phi, logic, budget, bound, ConstructOptions::default())
}

pub fn construct_model_with(
    phi: &Formula,
    logic: FrameClass,
    budget: usize,
    bound: usize,
    opts: ConstructOptions,
) -> Result<Construction, ConstructError> {
    if !matches!(logic, FrameClass::IL | FrameClass::ILM0 | FrameClass::ILWstar) {
        return Err(ConstructError::UnsupportedLogic(logic));
    }
    let adequate = adequate_closure([phi]);
    let oracle = Oracle::new(&adequate, logic, bound, opts.search);
    let root_label = oracle.root_label(phi).ok_or_else(|| ConstructError::Unsatisfiable { phi: phi.to_string(), bound })?;
    let mut frame = LabeledFrame::new(Frame::new(["w0"]).expect("one world"));
    frame.set_label(0, root_label);
    let mut st = ConstructionState { frame, logic, adequate, steps: Vec::new(), budget };
    let depth_limit = oracle.ambient().box_formulas().count() + 1;
    let mut solved: BTreeSet<(usize, Formula)> = BTreeSet::new();
    check_state(&st, opts, depth_limit, 0)?;
    loop {
        let problems = find_problems(&st.frame, &st.adequate);
        for p in &problems {
            if solved.contains(&(p.world, p.formula.clone())) {
                return Err(ConstructError::Recurrence {
                    step: st.steps.len(),
                    world: st.frame.name(p.world).to_string(),
                    formula: p.formula.to_string(),
                });
            }
        }
        let deficiencies = if problems.is_empty() { find_deficiencies(&st.frame, &st.adequate) } else { Vec::new() };
        if problems.is_empty() && deficiencies.is_empty() {
            break;
        }
        if st.steps.len() >= st.budget {
            return Err(ConstructError::Budget { budget, steps: st.steps });
        }
        let step_no = st.steps.len() + 1;
        let before = st.frame.len();
        let (kind, worlds, formula) = if let Some(p) = problems.first() {
            eliminate_problem(&mut st, &oracle, p, opts, step_no)?;
            solved.insert((p.world, p.formula.clone()));
            (StepKind::Problem, vec![p.world], p.formula.clone())
        } else {
            let d = &deficiencies[0];
            eliminate_deficiency(&mut st, &oracle, d, opts, step_no)?;
            (StepKind::Deficiency, vec![d.x, d.y], d.formula.clone())
        };
        let added = (before..st.frame.len()).map(|x| st.frame.name(x).to_string()).collect();
        st.steps.push(Step { index: step_no, kind, worlds: st.frame.names(&worlds), formula, added });
        check_state(&st, opts, depth_limit, step_no)?;
    }
    finish(st, phi)
}

fn check_state(st: &ConstructionState, opts: ConstructOptions, limit: usize, step: usize) -> Result<(), ConstructError> {
    let depth = longest_chain(&st.frame);
    if depth > limit {
        return Err(ConstructError::Depth { step, depth, limit });
    }
    if opts.debug {
        let report = check_invariants(&st.frame, &st.adequate, st.logic);
        if !report.is_ok() {
            return Err(ConstructError::Invariant { step, report });
        }
    }
    Ok(())
}

/// Worlds on the longest `R`-chain.
fn longest_chain(lf: &LabeledFrame) -> usize {
    let r = &lf.frame().r;
    let n = lf.len();
    let mut memo = vec![0usize; n];
    fn go(x: usize, r: &crate::relations::Rel, memo: &mut [usize]) -> usize {
        if memo[x] == 0 {
            let best = r.succ(x).map(|y| go(y, r, memo)).max().unwrap_or(0);
            memo[x] = best + 1;
        }
        memo[x]
    }
    (0..n).map(|x| go(x, r, &mut memo)).max().unwrap_or(0)
}

fn finish(st: ConstructionState, phi: &Formula) -> Result<Construction, ConstructError> {
    let truth = truth_lemma_check(&st.frame, &st.adequate);
    if !truth.holds() {
        return Err(ConstructError::Postcondition(format!("truth lemma fails: {truth:?}")));
    }
    let model = st
        .frame
        .induced_model()
        .map_err(|e| ConstructError::Postcondition(e.to_string()))?;
    let root = st.frame.name(0).to_string();
    if !model.forces_at(0, phi) {
        return Err(ConstructError::Postcondition(format!("{root} does not force {phi}")));
    }
    Ok(Construction { frame: st.frame, model, root, steps: st.steps, truth })
}

fn close(st: &mut ConstructionState, opts: ConstructOptions, step: usize) -> Result<(), ConstructError> {
    let copts = ClosureOptions { debug: opts.debug };
    let closed = match st.logic {
        FrameClass::IL => il_close_with(&st.frame, copts),
        FrameClass::ILWstar => wstar_close_with(&st.frame, &st.adequate, copts),
        _ => m0_close_with(&st.frame, copts),
    }
    .map_err(|source| ConstructError::Closure { step, source })?;
    st.frame = closed.frame;
    Ok(())
}

fn ask(oracle: &Oracle, req: &LabelRequest, step: usize) -> Result<Vec<Label>, ConstructError> {
    let answer = oracle.answer(req).map_err(|source| ConstructError::Oracle { step, source })?;
    assert!(req.verify(&answer), "oracle answer violates its request");
    Ok(answer)
}

fn add_fresh(st: &mut ConstructionState, label: Label) -> usize {
    let name = st.frame.fresh_name();
    st.frame.add_world(name, label).expect("fresh name")
}

/// Adds a world `b` above `a` witnessing the problem, labels the edge with
/// the problem's consequent and closes.
pub fn eliminate_problem(
    st: &mut ConstructionState,
    oracle: &Oracle,
    p: &Problem,
    opts: ConstructOptions,
    step: usize,
) -> Result<(), ConstructError> {
    let a = p.world;
    let (antecedent, consequent) = p.parts();
    let req = LabelRequest::Problem { gamma: st.frame.label(a).clone(), antecedent, consequent: consequent.clone() };
    let label = ask(oracle, &req, step)?.remove(0);
    let b = add_fresh(st, label);
    st.frame.add_r(a, b);
    st.frame.set_edge_label(a, b, consequent).expect("edge in R");
    close(st, opts, step)
}

/// Adds worlds `S_a`-after `b` carrying the deficiency's consequent and
/// closes.
pub fn eliminate_deficiency(
    st: &mut ConstructionState,
    oracle: &Oracle,
    d: &Deficiency,
    opts: ConstructOptions,
    step: usize,
) -> Result<(), ConstructError> {
    let (a, b) = (d.x, d.y);
    let (antecedent, consequent) = d.parts();
    let gamma = st.frame.label(a).clone();
    if st.logic == FrameClass::IL {
        let cone = cone_formula(&st.frame, a, b).unwrap_or(Formula::Bot);
        let req = LabelRequest::Deficiency { gamma, cone, target: consequent, lower: vec![], avoid: None };
        let label = ask(oracle, &req, step)?.remove(0);
        let c = add_fresh(st, label);
        st.frame.add_r(a, c);
        st.frame.add_s(a, b, c);
        return close(st, opts, step);
    }
    let wstar = st.logic == FrameClass::ILWstar;
    let der = st.frame.derived();
    let cone = n_cone_formula(&st.frame, a, b).unwrap_or(Formula::Bot);
    let r = &st.frame.frame().r;
    let s_a = &st.frame.frame().s[a];
    // Everything that will sit S_a-below the new worlds must stay ⊆□ below them.
    let feeders = s_a.inverse().reach(&{
        let mut seed = crate::relations::world_set(st.frame.len());
        seed.insert(b);
        seed
    });
    let mut lower: Vec<Label> = Vec::new();
    for x in r.succ(a) {
        if feeders.ones().any(|y| r.contains(x, y)) {
            lower.push(st.frame.label(x).clone());
        }
    }
    let new_labels = if der.k_one.contains(a, b) {
        let req = LabelRequest::Deficiency {
            gamma,
            cone: cone.clone(),
            target: consequent,
            lower,
            avoid: wstar.then(|| antecedent.clone()),
        };
        ask(oracle, &req, step)?
    } else {
        let tops: Vec<usize> = der.k.succ(a).filter(|&t| der.k_one.contains(t, b)).collect();
        let max = tops
            .iter()
            .copied()
            .find(|&m| tops.iter().all(|&t| subset_box(st.frame.label(t), st.frame.label(m))))
            .ok_or_else(|| ConstructError::NoMaximum {
                step,
                a: st.frame.name(a).to_string(),
                b: st.frame.name(b).to_string(),
                formula: d.formula.to_string(),
            })?;
        lower.push(st.frame.label(max).clone());
        let obligations = gamma
            .iter()
            .filter(|f| st.adequate.contains(f))
            .filter_map(Formula::as_rhd)
            .map(|(s, t)| (s.clone(), t.clone()))
            .collect();
        let req = ExistenceRequest { gamma, cone: cone.clone(), lower, antecedent, consequent, obligations };
        let req = if wstar { LabelRequest::WstarExistence(req) } else { LabelRequest::M0Existence(req) };
        ask(oracle, &req, step)?
    };
    let ys: Vec<usize> = new_labels.into_iter().map(|l| add_fresh(st, l)).collect();
    for &y in &ys {
        st.frame.add_r(a, y);
        st.frame.set_edge_label(a, y, cone.clone()).expect("edge in R");
        st.frame.add_s(a, b, y);
        for &y2 in &ys {
            if y != y2 {
                st.frame.add_s(a, y, y2);
            }
        }
    }
    close(st, opts, step)
}
