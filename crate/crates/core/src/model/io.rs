use super::{Frame, Label, LabeledFrame, Model, ModelError};
use crate::formula::{parse, Formula};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// On-disk form shared by frames, models and labeled frames.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub worlds: Vec<String>,
    #[serde(rename = "R")]
    pub r: Vec<(String, String)>,
    #[serde(rename = "S")]
    pub s: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub val: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub nu_world: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nu_edge: Vec<(String, String, String)>,
}

fn formula(text: &str, place: String) -> Result<Formula, ModelError> {
    parse(text).map_err(|source| ModelError::Formula {
        text: text.to_string(),
        place,
        source,
    })
}

impl FrameFile {
    pub fn from_json(text: &str) -> Result<FrameFile, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// The skeleton. Worlds are indexed in lexicographic order of their ids.
    pub fn frame(&self) -> Result<Frame, ModelError> {
        let mut worlds = self.worlds.clone();
        worlds.sort();
        let mut frame = Frame::new(Vec::<String>::new())?;
        for w in worlds {
            frame.add_world(w)?;
        }
        for (x, y) in &self.r {
            let (x, y) = (frame.index_of(x)?, frame.index_of(y)?);
            frame.r.insert(x, y);
        }
        for (w, pairs) in &self.s {
            let w = frame.index_of(w)?;
            for (x, y) in pairs {
                let (x, y) = (frame.index_of(x)?, frame.index_of(y)?);
                frame.s[w].insert(x, y);
            }
        }
        Ok(frame)
    }

    pub fn model(&self) -> Result<Model, ModelError> {
        let mut model = Model::new(self.frame()?);
        for (var, worlds) in &self.val {
            model.valuation.entry(var.clone()).or_insert_with(|| {
                crate::relations::world_set(model.frame.len())
            });
            for w in worlds {
                let x = model.frame.index_of(w)?;
                model.set_true(var, x);
            }
        }
        Ok(model)
    }

    pub fn labeled_frame(&self) -> Result<LabeledFrame, ModelError> {
        let mut lf = LabeledFrame::new(self.frame()?);
        for (w, formulas) in &self.nu_world {
            let x = lf.frame().index_of(w)?;
            let label = formulas
                .iter()
                .map(|t| formula(t, format!("nu_world[{w}]")))
                .collect::<Result<Label, _>>()?;
            lf.set_label(x, label);
        }
        for (a, b, text) in &self.nu_edge {
            let x = lf.frame().index_of(a)?;
            let y = lf.frame().index_of(b)?;
            let f = formula(text, format!("nu_edge[{a},{b}]"))?;
            lf.set_edge_label(x, y, f)?;
        }
        Ok(lf)
    }

    fn skeleton(frame: &Frame) -> FrameFile {
        let name = |x: usize| frame.name(x).to_string();
        let mut s = BTreeMap::new();
        for (w, rel) in frame.s.iter().enumerate() {
            if !rel.is_empty() {
                s.insert(name(w), rel.pairs().map(|(x, y)| (name(x), name(y))).collect());
            }
        }
        FrameFile {
            worlds: frame.worlds().to_vec(),
            r: frame.r.pairs().map(|(x, y)| (name(x), name(y))).collect(),
            s,
            ..FrameFile::default()
        }
    }

    pub fn from_frame(frame: &Frame) -> FrameFile {
        FrameFile::skeleton(frame)
    }

    pub fn from_model(model: &Model) -> FrameFile {
        let mut file = FrameFile::skeleton(&model.frame);
        for (var, set) in &model.valuation {
            file.val.insert(
                var.clone(),
                set.ones()
                    .filter(|&x| x < model.frame.len())
                    .map(|x| model.frame.name(x).to_string())
                    .collect(),
            );
        }
        file
    }

    /// Skeleton, labels, edge labels and the induced valuation.
    pub fn from_labeled(lf: &LabeledFrame) -> FrameFile {
        let mut file = FrameFile::from_model(&lf.induced_model_unchecked());
        for x in 0..lf.len() {
            file.nu_world.insert(
                lf.name(x).to_string(),
                lf.label(x).iter().map(|f| f.to_string()).collect(),
            );
        }
        file.nu_edge = lf
            .edge_labels()
            .map(|(x, y, f)| (lf.name(x).to_string(), lf.name(y).to_string(), f.to_string()))
            .collect();
        file
    }
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        FrameFile::from_json(text)?.model()
    }

    pub fn to_json(&self) -> String {
        FrameFile::from_model(self).to_json()
    }
}

impl LabeledFrame {
    pub fn from_json(text: &str) -> Result<LabeledFrame, ModelError> {
        FrameFile::from_json(text)?.labeled_frame()
    }

    pub fn to_json(&self) -> String {
        FrameFile::from_labeled(self).to_json()
    }
}
