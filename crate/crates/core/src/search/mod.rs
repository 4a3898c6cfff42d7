//! Bounded exhaustive semantics: frame enumeration per class, countermodel
//! search, bounded satisfiability and the realized types used as the label
//! oracle during construction.
//!
//! Search runs over rooted frames only. A formula refuted at a world is
//! refuted at the root of the generated submodel, which is no larger and
//! stays in the class, so the verdicts agree with a search over all worlds
//! of all frames.

mod enumerate;
mod eval;

pub use enumerate::{partial_orders, rooted_orders, rooted_small_frames, small_frames, SmallFrame, MAX_WORLDS};
pub use eval::{Compiled, Evaluator};

use crate::conditions::FrameClass;
use crate::formula::{parse, schema, AdequateSet, Formula, LEMMA_BATTERY};
use crate::model::{Frame, Label, Model};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// How many threads a search may use. `workers == 1` runs inline and is
/// the deterministic mode; `0` uses the global pool.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub workers: usize,
}

impl SearchOptions {
    pub fn deterministic() -> Self {
        SearchOptions { workers: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// The formula fails at `world` in `model`.
    Countermodel { model: Model, world: String },
    /// Every rooted frame of the class up to the bound validates the formula.
    NoCounterexampleUpTo(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchVerdict {
    pub outcome: Outcome,
    pub class: FrameClass,
    pub max_worlds: usize,
    /// Frames visited in canonical order up to and including the witness.
    pub frames_examined: usize,
}

impl SearchVerdict {
    pub fn is_countermodel(&self) -> bool {
        matches!(self.outcome, Outcome::Countermodel { .. })
    }

    /// A countermodel settles the question; an exhausted bound never does.
    pub fn conclusive(&self) -> bool {
        self.is_countermodel()
    }

    pub fn countermodel(&self) -> Option<(&Model, &str)> {
        match &self.outcome {
            Outcome::Countermodel { model, world } => Some((model, world)),
            Outcome::NoCounterexampleUpTo(_) => None,
        }
    }
}

impl fmt::Display for SearchVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Countermodel { model, world } => write!(
                f,
                "countermodel on {} worlds at {} ({} frames examined)",
                model.frame.len(),
                world,
                self.frames_examined
            ),
            Outcome::NoCounterexampleUpTo(n) if self.class.has_fmp() => write!(
                f,
                "no counterexample up to {} worlds on {} frames ({} frames examined)",
                n, self.class, self.frames_examined
            ),
            Outcome::NoCounterexampleUpTo(n) => write!(
                f,
                "no counterexample up to {} worlds on {} frames ({} frames examined); inconclusive, \
                 the finite model property of {} is open",
                n, self.class, self.frames_examined, self.class
            ),
        }
    }
}

/// Result of a bounded satisfiability query.
#[derive(Clone, Debug, PartialEq)]
pub struct SatVerdict {
    pub witness: Option<(Model, String)>,
    pub class: FrameClass,
    pub max_worlds: usize,
    pub frames_examined: usize,
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        self.witness.is_some()
    }
}

impl fmt::Display for SatVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some((model, world)) => write!(f, "satisfiable at {} in a {}-world {} model", world, model.frame.len(), self.class),
            None => write!(f, "presumed inconsistent at bound {} on {} frames", self.max_worlds, self.class),
        }
    }
}

type FrameCache = Mutex<HashMap<(usize, FrameClass), Arc<Vec<SmallFrame>>>>;

fn rooted_cached(n: usize, class: FrameClass) -> Arc<Vec<SmallFrame>> {
    static CACHE: OnceLock<FrameCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("frame cache").get(&(n, class)) {
        return v.clone();
    }
    let frames = Arc::new(rooted_small_frames(n, class));
    cache.lock().expect("frame cache").insert((n, class), frames.clone());
    frames
}

/// Every frame of class `class` on worlds `0..n`, in canonical order.
pub fn enumerate_frames(n: usize, class: FrameClass) -> Vec<Frame> {
    small_frames(n, class).iter().map(SmallFrame::to_frame).collect()
}

/// Rooted frames of the class with one to `max_worlds` worlds, smallest first.
pub fn rooted_frames_up_to(max_worlds: usize, class: FrameClass) -> Vec<Arc<Vec<SmallFrame>>> {
    (1..=max_worlds).map(|n| rooted_cached(n, class)).collect()
}

fn model_of(frame: &SmallFrame, vars: &[String], valuation: u64) -> Model {
    let mut m = Model::new(frame.to_frame());
    for (i, var) in vars.iter().enumerate() {
        for w in 0..frame.n {
            if valuation >> (i * frame.n + w) & 1 == 1 {
                m.set_true(var, w);
            }
        }
    }
    m
}

/// First valuation on `frame` whose root lanes match `root_holds == want`.
fn first_hit(compiled: &Compiled, node: usize, frame: &SmallFrame, want: bool) -> Option<u64> {
    let mut ev = Evaluator::new(compiled, frame);
    let valid = ev.valid_lanes();
    for block in 0..ev.blocks() {
        ev.run(block * 64);
        let lanes = ev.lanes(node, 0);
        let hits = if want { lanes } else { !lanes } & valid;
        if hits != 0 {
            return Some(block * 64 + hits.trailing_zeros() as u64);
        }
    }
    None
}

fn run_pool<T: Send>(opts: SearchOptions, job: impl FnOnce() -> T + Send) -> T {
    if opts.workers == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(opts.workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Looks for a rooted model where `f` has truth value `want` at the root.
fn search_root(f: &Formula, class: FrameClass, max_worlds: usize, want: bool, opts: SearchOptions) -> (Option<(Model, String)>, usize) {
    let mut compiled = Compiled::with_vars(f.variables().into_iter().collect());
    let node = compiled.add(f);
    let mut examined = 0;
    for frames in rooted_frames_up_to(max_worlds, class) {
        let hit = if opts.workers == 1 {
            frames.iter().enumerate().find_map(|(i, fr)| first_hit(&compiled, node, fr, want).map(|v| (i, v)))
        } else {
            run_pool(opts, || {
                frames
                    .par_iter()
                    .enumerate()
                    .find_map_first(|(i, fr)| first_hit(&compiled, node, fr, want).map(|v| (i, v)))
            })
        };
        match hit {
            Some((i, valuation)) => {
                let model = model_of(&frames[i], compiled.vars(), valuation);
                assert_eq!(model.forces_at(0, f), want, "bit-sliced evaluation disagrees with forcing");
                let world = model.frame.name(0).to_string();
                return (Some((model, world)), examined + i + 1);
            }
            None => examined += frames.len(),
        }
    }
    (None, examined)
}

pub fn find_countermodel(f: &Formula, class: FrameClass, max_worlds: usize) -> SearchVerdict {
    find_countermodel_with(f, class, max_worlds, SearchOptions::default())
}

pub fn find_countermodel_with(f: &Formula, class: FrameClass, max_worlds: usize, opts: SearchOptions) -> SearchVerdict {
    let (hit, frames_examined) = search_root(f, class, max_worlds, false, opts);
    let outcome = match hit {
        Some((model, world)) => Outcome::Countermodel { model, world },
        None => Outcome::NoCounterexampleUpTo(max_worlds),
    };
    SearchVerdict { outcome, class, max_worlds, frames_examined }
}

pub fn satisfiable(gamma: &[Formula], class: FrameClass, max_worlds: usize) -> SatVerdict {
    satisfiable_with(gamma, class, max_worlds, SearchOptions::default())
}

pub fn satisfiable_with(gamma: &[Formula], class: FrameClass, max_worlds: usize, opts: SearchOptions) -> SatVerdict {
    let conj = Formula::conjunction(gamma.iter().cloned());
    let (witness, frames_examined) = search_root(&conj, class, max_worlds, true, opts);
    SatVerdict { witness, class, max_worlds, frames_examined }
}

/// Sets of ambient formulas true at the root of some rooted model of the
/// class with at most `max_worlds` worlds.
pub fn realized_types(ambient: &AdequateSet, class: FrameClass, max_worlds: usize, opts: SearchOptions) -> Vec<Label> {
    let formulas: Vec<Formula> = ambient.iter().cloned().collect();
    let mut compiled = Compiled::with_vars(ambient.variables().into_iter().collect());
    let nodes: Vec<usize> = formulas.iter().map(|f| compiled.add(f)).collect();
    let words = formulas.len().div_ceil(64).max(1);
    let collect = |fr: &SmallFrame| -> HashSet<Vec<u64>> {
        let mut seen = HashSet::new();
        let mut ev = Evaluator::new(&compiled, fr);
        let valid = ev.valid_lanes();
        for block in 0..ev.blocks() {
            ev.run(block * 64);
            let mut rows = vec![vec![0u64; words]; 64];
            for (k, &node) in nodes.iter().enumerate() {
                let lanes = ev.lanes(node, 0);
                for (lane, row) in rows.iter_mut().enumerate() {
                    if lanes >> lane & 1 == 1 {
                        row[k / 64] |= 1 << (k % 64);
                    }
                }
            }
            for (lane, row) in rows.into_iter().enumerate() {
                if valid >> lane & 1 == 1 {
                    seen.insert(row);
                }
            }
        }
        seen
    };
    let mut all: HashSet<Vec<u64>> = HashSet::new();
    for frames in rooted_frames_up_to(max_worlds, class) {
        let part: Vec<HashSet<Vec<u64>>> = if opts.workers == 1 {
            frames.iter().map(collect).collect()
        } else {
            run_pool(opts, || frames.par_iter().map(collect).collect())
        };
        for s in part {
            all.extend(s);
        }
    }
    let labels: BTreeSet<Label> = all
        .into_iter()
        .map(|row| {
            formulas
                .iter()
                .enumerate()
                .filter(|(k, _)| row[k / 64] >> (k % 64) & 1 == 1)
                .map(|(_, f)| f.clone())
                .collect()
        })
        .collect();
    labels.into_iter().collect()
}

/// Arguments substituted for the placeholders `A`, `B`, `C` in order.
const SUBSTITUTIONS: [[&str; 3]; 6] = [
    ["p", "q", "r"],
    ["q", "p", "p"],
    ["~p", "p /\\ q", "[]r"],
    ["<>p", "q |> r", "~q"],
    ["p |> q", "[]p", "q \\/ r"],
    ["bot", "~(p -> q)", "<>r"],
];

/// Schemas valid on every frame of the class.
pub fn sound_schemas(class: FrameClass) -> Vec<&'static str> {
    let mut names = vec!["L1", "L2", "L3", "J1", "J2", "J3", "J4", "J5"];
    match class {
        FrameClass::IL => {}
        FrameClass::ILM0 => names.push("M0"),
        FrameClass::ILW => names.push("W"),
        FrameClass::ILWstar => names.extend(["M0", "W", "W*", "M0*"]),
    }
    names
}

/// The fixed instantiation battery for one schema.
pub fn schema_battery(name: &str) -> Vec<Formula> {
    let s = schema(name).unwrap_or_else(|| panic!("unknown schema {name}"));
    let arity = s.placeholders().len();
    SUBSTITUTIONS
        .iter()
        .map(|args| {
            let args: Vec<Formula> = args[..arity].iter().map(|a| parse(a).expect("battery formula parses")).collect();
            s.instance(&args)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessEntry {
    pub schema: String,
    pub instance: Formula,
    pub passed: bool,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub class: FrameClass,
    pub max_worlds: usize,
    pub entries: Vec<SoundnessEntry>,
}

impl SoundnessReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SoundnessEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

fn soundness_of(named: Vec<(String, Formula)>, class: FrameClass, max_worlds: usize, opts: SearchOptions) -> SoundnessReport {
    let entries = named
        .into_iter()
        .map(|(schema, instance)| {
            let verdict = find_countermodel_with(&instance, class, max_worlds, opts);
            SoundnessEntry { schema, passed: !verdict.is_countermodel(), verdict: verdict.to_string(), instance }
        })
        .collect();
    SoundnessReport { class, max_worlds, entries }
}

/// Runs the instantiation battery of every schema sound for the class.
pub fn axiom_soundness_suite(class: FrameClass, max_worlds: usize) -> SoundnessReport {
    axiom_soundness_suite_with(class, max_worlds, SearchOptions::default())
}

pub fn axiom_soundness_suite_with(class: FrameClass, max_worlds: usize, opts: SearchOptions) -> SoundnessReport {
    let named = sound_schemas(class)
        .into_iter()
        .flat_map(|name| schema_battery(name).into_iter().map(move |f| (name.to_string(), f)))
        .collect();
    soundness_of(named, class, max_worlds, opts)
}

/// The derived principles about box and interpretability, checked on IL.
pub fn lemma_battery(max_worlds: usize) -> SoundnessReport {
    let named = LEMMA_BATTERY
        .iter()
        .map(|t| ("lemma".to_string(), parse(t).expect("battery formula parses")))
        .collect();
    soundness_of(named, FrameClass::IL, max_worlds, SearchOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_frames(1, FrameClass::IL).len(), 1);
        assert_eq!(enumerate_frames(2, FrameClass::IL).len(), 3);
    }

    #[test]
    fn j5_has_no_countermodel() {
        let v = find_countermodel(&f("<>p |> p"), FrameClass::IL, 3);
        assert_eq!(v.outcome, Outcome::NoCounterexampleUpTo(3));
        assert!(v.to_string().starts_with("no counterexample"));
    }

    #[test]
    fn m0_fails_on_il() {
        let m0 = schema("M0").unwrap().instance(&[f("p"), f("q"), f("r")]);
        let v = find_countermodel(&m0, FrameClass::IL, 4);
        let (model, world) = v.countermodel().expect("M0 is not valid on IL frames");
        assert!(!model.forces(world, &m0).unwrap());
        assert!(model.frame.validate().is_ok());
    }

    #[test]
    fn inconclusive_wording() {
        let v = find_countermodel(&f("p -> p"), FrameClass::ILM0, 2);
        assert!(v.to_string().contains("inconclusive"));
    }

    #[test]
    fn satisfiability_examples() {
        let sat = satisfiable(&[f("~(p |> q)")], FrameClass::IL, 2);
        let (model, world) = sat.witness.clone().unwrap();
        assert!(model.forces(&world, &f("~(p |> q)")).unwrap());
        assert!(!satisfiable(&[f("p"), f("~p")], FrameClass::IL, 3).is_sat());
        let unsat = satisfiable(&[f("[]bot"), f("<>~bot")], FrameClass::IL, 3);
        assert!(unsat.to_string().contains("presumed inconsistent at bound 3"));
    }

    #[test]
    fn battery_sizes() {
        let total: usize = sound_schemas(FrameClass::IL).iter().map(|s| schema_battery(s).len()).sum();
        assert!(total >= 40);
        for s in sound_schemas(FrameClass::ILWstar) {
            for inst in schema_battery(s) {
                assert!(inst.variables().len() <= 3);
            }
        }
    }

    #[test]
    fn deterministic_mode_matches_parallel() {
        let w = schema("W").unwrap().instance(&[f("p"), f("q")]);
        let a = find_countermodel_with(&w, FrameClass::IL, 3, SearchOptions::deterministic());
        let b = find_countermodel_with(&w, FrameClass::IL, 3, SearchOptions { workers: 4 });
        assert_eq!(a, b);
    }

    #[test]
    fn realized_types_are_saturated() {
        let d = crate::formula::adequate_closure(&[f("~(p |> q)")]);
        let types = realized_types(&d, FrameClass::IL, 2, SearchOptions::default());
        assert!(!types.is_empty());
        for t in &types {
            assert!(t.is_saturated(&d));
        }
        assert!(types.iter().any(|t| t.contains(&f("~(p |> q)"))));
    }
}
