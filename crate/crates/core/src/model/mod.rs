//! Frames, models and labeled frames.

mod dot;
mod io;
mod label;
mod labeled;

use crate::formula::Formula;
use crate::relations::{world_set, Rel, WorldSet};
use crate::report::Report;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub use dot::to_dot;
pub use io::FrameFile;
pub use label::{prec, crit, strict_subset_box, subset_box, Label};
pub use labeled::{induced_model, LabeledFrame};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("duplicate world {0:?}")]
    DuplicateWorld(String),
    #[error("edge label on ({0}, {1}) which is not an R-pair")]
    EdgeNotInR(String, String),
    #[error("formula {text:?} in {place}: {source}")]
    Formula {
        text: String,
        place: String,
        #[source]
        source: crate::formula::ParseError,
    },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("skeleton is not an IL-frame: {0}")]
    NotAnIlFrame(Report),
}

/// Worlds with an accessibility relation `R` and one relation `S_w` per
/// world. World ids are opaque strings; algorithms iterate in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    pub r: Rel,
    pub s: Vec<Rel>,
}

impl Frame {
    pub fn new<S: Into<String>>(worlds: impl IntoIterator<Item = S>) -> Result<Frame, ModelError> {
        let mut frame = Frame {
            worlds: Vec::new(),
            index: HashMap::new(),
            r: Rel::empty(0),
            s: Vec::new(),
        };
        for w in worlds {
            frame.add_world(w)?;
        }
        Ok(frame)
    }

    /// Frame on worlds named `"0"`, `"1"`, ...
    pub fn numbered(n: usize) -> Frame {
        Frame::new((0..n).map(|i| i.to_string())).expect("distinct names")
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn name(&self, x: usize) -> &str {
        &self.worlds[x]
    }

    pub fn names(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.worlds[x].clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    pub fn add_world(&mut self, name: impl Into<String>) -> Result<usize, ModelError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(ModelError::DuplicateWorld(name));
        }
        let x = self.worlds.len();
        self.index.insert(name.clone(), x);
        self.worlds.push(name);
        let n = x + 1;
        self.r.grow(n);
        for s in &mut self.s {
            s.grow(n);
        }
        self.s.push(Rel::empty(n));
        Ok(x)
    }

    /// `S` as a set of triples `(w, x, y)` meaning `x S_w y`.
    pub fn s_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.s
            .iter()
            .enumerate()
            .flat_map(|(w, s)| s.pairs().map(move |(x, y)| (w, x, y)))
    }

    /// The union of all `S_w`.
    pub fn s_union(&self) -> Rel {
        let mut out = Rel::empty(self.len());
        for s in &self.s {
            out.union_with(s);
        }
        out
    }

    /// Every violated clause of the IL-frame definition, each with a witness.
    pub fn validate(&self) -> Report {
        let n = self.len();
        let mut report = Report::new();
        let tc = self.r.transitive_closure();
        for x in 0..n {
            if tc.contains(x, x) {
                report.push("IL.1", self.names(&[x]), "R is not conversely well-founded");
            }
        }
        for (a, b) in self.r.pairs() {
            for c in self.r.succ(b) {
                if !self.r.contains(a, c) {
                    report.push("IL.2", self.names(&[a, b, c]), "R is not transitive");
                }
            }
        }
        for (x, y, z) in self.s_triples() {
            if !self.r.contains(x, y) || !self.r.contains(x, z) {
                report.push("IL.3", self.names(&[x, y, z]), "S_x relates a world outside R(x)");
            }
        }
        for (x, y) in self.r.pairs() {
            if !self.s[x].contains(y, y) {
                report.push("IL.4", self.names(&[x, y]), "missing y S_x y");
            }
        }
        for (x, y) in self.r.pairs() {
            for z in self.r.succ(y) {
                if !self.s[x].contains(y, z) {
                    report.push("IL.5", self.names(&[x, y, z]), "x R y R z without y S_x z");
                }
            }
        }
        for x in 0..n {
            let s = &self.s[x];
            for (u, v) in s.pairs() {
                for w in s.succ(v) {
                    if !s.contains(u, w) {
                        report.push("IL.6", self.names(&[x, u, v, w]), "S_x is not transitive");
                    }
                }
            }
        }
        report
    }
}

pub fn validate_frame(frame: &Frame) -> Report {
    frame.validate()
}

/// A frame together with a valuation of propositional variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    pub valuation: BTreeMap<String, WorldSet>,
}

impl Model {
    pub fn new(frame: Frame) -> Model {
        Model {
            frame,
            valuation: BTreeMap::new(),
        }
    }

    pub fn set_true(&mut self, var: &str, x: usize) {
        let n = self.frame.len();
        let set = self
            .valuation
            .entry(var.to_string())
            .or_insert_with(|| world_set(n));
        set.grow(n);
        set.insert(x);
    }

    /// Worlds where `formula` holds.
    pub fn truth_set(&self, formula: &Formula) -> WorldSet {
        let n = self.frame.len();
        match formula {
            Formula::Bot => world_set(n),
            Formula::Var(v) => {
                let mut set = world_set(n);
                if let Some(vals) = self.valuation.get(v) {
                    set.extend(vals.ones().filter(|&x| x < n));
                }
                set
            }
            Formula::Implies(a, b) => {
                let mut out = self.truth_set(a);
                out.toggle_range(..);
                out.union_with(&self.truth_set(b));
                out
            }
            Formula::Box(a) => {
                let ta = self.truth_set(a);
                let mut out = world_set(n);
                for w in 0..n {
                    if self.frame.r.row(w).is_subset(&ta) {
                        out.insert(w);
                    }
                }
                out
            }
            Formula::Rhd(a, b) => {
                let ta = self.truth_set(a);
                let tb = self.truth_set(b);
                let mut out = world_set(n);
                for w in 0..n {
                    let s = &self.frame.s[w];
                    let ok = self
                        .frame
                        .r
                        .succ(w)
                        .filter(|&u| ta.contains(u))
                        .all(|u| !s.row(u).is_disjoint(&tb));
                    if ok {
                        out.insert(w);
                    }
                }
                out
            }
        }
    }

    pub fn forces_at(&self, x: usize, formula: &Formula) -> bool {
        self.truth_set(formula).contains(x)
    }

    /// Truth of `formula` at the world named `world`.
    pub fn forces(&self, world: &str, formula: &Formula) -> Result<bool, ModelError> {
        let x = self.frame.index_of(world)?;
        Ok(self.forces_at(x, formula))
    }

    /// The submodel on `{world} ∪ R(world)`.
    pub fn generated_submodel(&self, world: &str) -> Result<Model, ModelError> {
        let root = self.frame.index_of(world)?;
        let n = self.frame.len();
        let keep: Vec<usize> = (0..n)
            .filter(|&x| x == root || self.frame.r.contains(root, x))
            .collect();
        let mut map = vec![None; n];
        for (i, &x) in keep.iter().enumerate() {
            map[x] = Some(i);
        }
        let mut frame = Frame::new(keep.iter().map(|&x| self.frame.name(x).to_string()))?;
        frame.r = self.frame.r.project(&map, keep.len());
        for (i, &x) in keep.iter().enumerate() {
            frame.s[i] = self.frame.s[x].project(&map, keep.len());
        }
        let mut model = Model::new(frame);
        for (var, set) in &self.valuation {
            let mut sub = world_set(keep.len());
            for x in set.ones() {
                if let Some(Some(i)) = map.get(x) {
                    sub.insert(*i);
                }
            }
            model.valuation.insert(var.clone(), sub);
        }
        Ok(model)
    }
}

pub fn forces(model: &Model, world: &str, formula: &Formula) -> Result<bool, ModelError> {
    model.forces(world, formula)
}

pub fn generated_submodel(model: &Model, world: &str) -> Result<Model, ModelError> {
    model.generated_submodel(world)
}
