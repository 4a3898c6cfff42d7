use super::{Frame, Label, Model, ModelError};
use crate::formula::Formula;
use crate::relations::DerivedRelations;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// A frame whose worlds carry labels and some of whose `R`-edges carry a
/// formula. Structural changes go through methods that drop the cached
/// derived relations and bump [`LabeledFrame::version`].
#[derive(Clone, Debug)]
pub struct LabeledFrame {
    frame: Frame,
    nu_world: Vec<Label>,
    nu_edge: BTreeMap<(usize, usize), Formula>,
    version: u64,
    derived: OnceLock<Arc<DerivedRelations>>,
}

impl PartialEq for LabeledFrame {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.nu_world == other.nu_world && self.nu_edge == other.nu_edge
    }
}

impl Eq for LabeledFrame {}

impl LabeledFrame {
    pub fn new(frame: Frame) -> LabeledFrame {
        let n = frame.len();
        LabeledFrame {
            frame,
            nu_world: vec![Label::default(); n],
            nu_edge: BTreeMap::new(),
            version: 0,
            derived: OnceLock::new(),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        self.frame.name(x)
    }

    pub fn names(&self, xs: &[usize]) -> Vec<String> {
        self.frame.names(xs)
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn label(&self, x: usize) -> &Label {
        &self.nu_world[x]
    }

    pub fn labels(&self) -> &[Label] {
        &self.nu_world
    }

    pub fn edge_label(&self, x: usize, y: usize) -> Option<&Formula> {
        self.nu_edge.get(&(x, y))
    }

    pub fn edge_labels(&self) -> impl Iterator<Item = (usize, usize, &Formula)> {
        self.nu_edge.iter().map(|(&(x, y), f)| (x, y, f))
    }

    /// Distinct formulas used as edge labels.
    pub fn edge_formulas(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.nu_edge.values().cloned().collect();
        out.sort();
        out.dedup();
        out
    }

    /// Cached `K`, pure `S` and the derived orders.
    pub fn derived(&self) -> Arc<DerivedRelations> {
        self.derived
            .get_or_init(|| Arc::new(DerivedRelations::compute(self)))
            .clone()
    }

    fn touch(&mut self) {
        self.version += 1;
        self.derived = OnceLock::new();
    }

    pub fn add_world(&mut self, name: impl Into<String>, label: Label) -> Result<usize, ModelError> {
        let x = self.frame.add_world(name)?;
        self.nu_world.push(label);
        self.touch();
        Ok(x)
    }

    /// Adds `x R y`; returns whether it was new.
    pub fn add_r(&mut self, x: usize, y: usize) -> bool {
        let new = self.frame.r.insert(x, y);
        if new {
            self.touch();
        }
        new
    }

    /// Adds `x S_w y`; returns whether it was new.
    pub fn add_s(&mut self, w: usize, x: usize, y: usize) -> bool {
        let new = self.frame.s[w].insert(x, y);
        if new {
            self.touch();
        }
        new
    }

    pub fn set_label(&mut self, x: usize, label: Label) {
        self.nu_world[x] = label;
        self.touch();
    }

    pub fn set_edge_label(&mut self, x: usize, y: usize, f: Formula) -> Result<(), ModelError> {
        if !self.frame.r.contains(x, y) {
            return Err(ModelError::EdgeNotInR(self.name(x).into(), self.name(y).into()));
        }
        self.nu_edge.insert((x, y), f);
        self.touch();
        Ok(())
    }

    /// First unused id of the form `w<k>`.
    pub fn fresh_name(&self) -> String {
        (0..)
            .map(|k| format!("w{k}"))
            .find(|c| self.frame.index_of(c).is_err())
            .expect("unbounded supply")
    }

    /// The model whose valuation makes `p` true exactly where `p` is in the
    /// label. Requires the skeleton to be an IL-frame.
    pub fn induced_model(&self) -> Result<Model, ModelError> {
        let report = self.frame.validate();
        if !report.is_ok() {
            return Err(ModelError::NotAnIlFrame(report));
        }
        Ok(self.induced_model_unchecked())
    }

    /// As [`LabeledFrame::induced_model`] without validating the skeleton.
    pub fn induced_model_unchecked(&self) -> Model {
        let mut model = Model::new(self.frame.clone());
        for (x, label) in self.nu_world.iter().enumerate() {
            for f in label.iter() {
                if let Formula::Var(v) = f {
                    model.set_true(v, x);
                }
            }
        }
        model
    }
}

pub fn induced_model(lf: &LabeledFrame) -> Result<Model, ModelError> {
    lf.induced_model()
}
