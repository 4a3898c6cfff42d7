//! Closure of quasi-frames to adequate frames.
//!
//! Each operator repeatedly repairs the least imperfection (kind first,
//! then world tuple) by adding the pairs it asks for, until none is left.

use crate::conditions::{check_adequate, check_adequate_m0, check_adequate_wstar, check_quasi_frame, check_quasi_m0, check_quasi_wstar};
use crate::formula::AdequateSet;
use crate::model::LabeledFrame;
use crate::relations::{critical_cone, generalized_cone, n_cone};
use crate::report::Report;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("input is not a quasi-frame of the right kind:\n{0}")]
    NotQuasi(Report),
    #[error("check failed after closure step {step}:\n{report}")]
    Broken { step: usize, report: Report },
}

/// A missing pair, tagged by the rule that demands it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Imperfection {
    /// `a R b R c` without `a R c`.
    RTransitive(usize, usize, usize),
    /// `a R b` without `b S_a b`.
    SReflexive(usize, usize),
    /// `b S_a c S_a d` without `b S_a d`.
    STransitive(usize, usize, usize, usize),
    /// `a R b R c` without `b S_a c`.
    RInS(usize, usize, usize),
    /// `w R a R b S_w b' R c` without `a R c`.
    M0(usize, usize, usize, usize, usize),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClosureOptions {
    /// Re-check the quasi-frame conditions after every step.
    pub debug: bool,
}

/// The closed frame and the repairs in the order applied.
#[derive(Clone, Debug)]
pub struct Closed {
    pub frame: LabeledFrame,
    pub steps: Vec<Imperfection>,
}

fn least(lf: &LabeledFrame, with_m0: bool) -> Option<Imperfection> {
    let f = lf.frame();
    let n = lf.len();
    for a in 0..n {
        for b in f.r.succ(a) {
            if let Some(c) = f.r.row(b).difference(f.r.row(a)).next() {
                return Some(Imperfection::RTransitive(a, b, c));
            }
        }
    }
    for a in 0..n {
        if let Some(b) = f.r.succ(a).find(|&b| !f.s[a].contains(b, b)) {
            return Some(Imperfection::SReflexive(a, b));
        }
    }
    for a in 0..n {
        let s = &f.s[a];
        for b in 0..n {
            for c in s.succ(b) {
                if let Some(d) = s.row(c).difference(s.row(b)).next() {
                    return Some(Imperfection::STransitive(a, b, c, d));
                }
            }
        }
    }
    for a in 0..n {
        for b in f.r.succ(a) {
            if let Some(c) = f.r.row(b).difference(f.s[a].row(b)).next() {
                return Some(Imperfection::RInS(a, b, c));
            }
        }
    }
    if with_m0 {
        for w in 0..n {
            for a in f.r.succ(w) {
                for b in f.r.succ(a) {
                    for b2 in f.s[w].succ(b) {
                        if let Some(c) = f.r.row(b2).difference(f.r.row(a)).next() {
                            return Some(Imperfection::M0(w, a, b, b2, c));
                        }
                    }
                }
            }
        }
    }
    None
}

fn repair(lf: &mut LabeledFrame, imp: Imperfection) {
    match imp {
        Imperfection::RTransitive(a, _, c) | Imperfection::M0(_, a, _, _, c) => {
            lf.add_r(a, c);
        }
        Imperfection::SReflexive(a, b) => {
            lf.add_s(a, b, b);
        }
        Imperfection::STransitive(a, b, _, d) => {
            lf.add_s(a, b, d);
        }
        Imperfection::RInS(a, b, c) => {
            lf.add_r(a, c);
            lf.add_s(a, b, c);
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Il,
    M0,
}

fn run(g: &LabeledFrame, mode: Mode, opts: ClosureOptions) -> Result<Closed, ClosureError> {
    let check = |lf: &LabeledFrame| match mode {
        Mode::Il => check_quasi_frame(lf),
        Mode::M0 => check_quasi_m0(lf),
    };
    let initial_k = lf_k(g, mode);
    let mut lf = g.clone();
    let mut steps = Vec::new();
    while let Some(imp) = least(&lf, mode == Mode::M0) {
        repair(&mut lf, imp);
        steps.push(imp);
        if opts.debug {
            let mut report = check(&lf);
            if let Some(k) = &initial_k {
                if lf.derived().k != *k {
                    report.push("closure.K", vec![], "K changed during closure");
                }
            }
            if !report.is_ok() {
                return Err(ClosureError::Broken { step: steps.len(), report });
            }
        }
    }
    if opts.debug {
        let report = cones_preserved(g, &lf);
        if !report.is_ok() {
            return Err(ClosureError::Broken { step: steps.len(), report });
        }
    }
    Ok(Closed { frame: lf, steps })
}

fn lf_k(g: &LabeledFrame, mode: Mode) -> Option<crate::relations::Rel> {
    (mode == Mode::M0).then(|| g.derived().k.clone())
}

/// Critical, generalized and N-cones of `before` are unchanged in `after`.
pub fn cones_preserved(before: &LabeledFrame, after: &LabeledFrame) -> Report {
    let mut report = Report::new();
    for x in 0..before.len() {
        for c in before.edge_formulas() {
            if critical_cone(before, x, &c) != critical_cone(after, x, &c) {
                report.push("closure.cone", before.names(&[x]), format!("critical cone of {c} changed"));
            }
            if generalized_cone(before, x, &c) != generalized_cone(after, x, &c) {
                report.push("closure.gcone", before.names(&[x]), format!("generalized cone of {c} changed"));
            }
        }
    }
    report
}

/// N-cones of `before` are unchanged in `after`.
pub fn n_cones_preserved(before: &LabeledFrame, after: &LabeledFrame) -> Report {
    let mut report = Report::new();
    for w in 0..before.len() {
        for c in before.edge_formulas() {
            if n_cone(before, w, &c) != n_cone(after, w, &c) {
                report.push("closure.ncone", before.names(&[w]), format!("N-cone of {c} changed"));
            }
        }
    }
    report
}

pub fn il_close_with(g: &LabeledFrame, opts: ClosureOptions) -> Result<Closed, ClosureError> {
    let pre = check_quasi_frame(g);
    if !pre.is_ok() {
        return Err(ClosureError::NotQuasi(pre));
    }
    let closed = run(g, Mode::Il, opts)?;
    if opts.debug {
        let post = check_adequate(&closed.frame);
        if !post.is_ok() {
            return Err(ClosureError::Broken { step: closed.steps.len(), report: post });
        }
    }
    Ok(closed)
}

/// The least adequate IL-frame extending a quasi-frame.
pub fn il_close(g: &LabeledFrame) -> Result<LabeledFrame, ClosureError> {
    il_close_with(g, ClosureOptions::default()).map(|c| c.frame)
}

pub fn m0_close_with(g: &LabeledFrame, opts: ClosureOptions) -> Result<Closed, ClosureError> {
    let pre = check_quasi_m0(g);
    if !pre.is_ok() {
        return Err(ClosureError::NotQuasi(pre));
    }
    let closed = run(g, Mode::M0, opts)?;
    if opts.debug {
        let mut post = check_adequate_m0(&closed.frame);
        post.extend(n_cones_preserved(g, &closed.frame));
        if !post.is_ok() {
            return Err(ClosureError::Broken { step: closed.steps.len(), report: post });
        }
    }
    Ok(closed)
}

/// The least adequate ILM0-frame extending a quasi-ILM0-frame.
pub fn m0_close(g: &LabeledFrame) -> Result<LabeledFrame, ClosureError> {
    m0_close_with(g, ClosureOptions::default()).map(|c| c.frame)
}

pub fn wstar_close_with(g: &LabeledFrame, d: &AdequateSet, opts: ClosureOptions) -> Result<Closed, ClosureError> {
    let pre = check_quasi_wstar(g, d);
    if !pre.is_ok() {
        return Err(ClosureError::NotQuasi(pre));
    }
    let closed = run(g, Mode::M0, opts)?;
    let post = check_adequate_wstar(&closed.frame, d);
    if !post.is_ok() {
        return Err(ClosureError::Broken { step: closed.steps.len(), report: post });
    }
    Ok(closed)
}

/// As [`m0_close`], checking the strict box-gain clause before and after.
pub fn wstar_close(g: &LabeledFrame, d: &AdequateSet) -> Result<LabeledFrame, ClosureError> {
    wstar_close_with(g, d, ClosureOptions::default()).map(|c| c.frame)
}
