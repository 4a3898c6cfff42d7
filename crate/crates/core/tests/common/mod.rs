//! Shared generators, brute-force oracles and fixture lists for the
//! integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use veltman::conditions::{check_adequate, check_quasi_frame, check_quasi_m0, FrameClass};
use veltman::formula::{adequate_closure, AdequateSet};
use veltman::relations::Rel;
use veltman::search::{small_frames, SmallFrame};
use veltman::{Formula, Frame, Label, LabeledFrame, Model};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// fixtures

/// Satisfiable on IL, ILM0 and ILWstar; all construct within budget 50.
pub const CONSTRUCT_FIXTURES: &[&str] = &[
    "p",
    "~(p |> q)",
    "(p |> q) /\\ <>(p /\\ ~q)",
    "~[]p /\\ []q",
    "<>p /\\ <>~p",
    "~(p |> q) /\\ (p |> r)",
    "~(p |> q) /\\ ~(q |> p)",
    "(p |> q) /\\ (q |> r) /\\ <>(p /\\ ~r)",
    "<><>p /\\ (p |> q)",
    "~(p /\\ []q |> q /\\ []q)",
    "(p |> q) /\\ <>(p /\\ ~q) /\\ ~(q |> r)",
    "(p |> <>q) /\\ <>p",
    "~(<>p |> <>q) /\\ (q |> p)",
    "~(p \\/ q |> r) /\\ (p |> r)",
    "(p |> q) /\\ <>(p /\\ <>~q)",
    "<>(p /\\ <>p) /\\ (p |> ~p)",
    "~(q |> r) /\\ (p |> q) /\\ <>p",
    "(p |> q) /\\ <><>(p /\\ ~q)",
];

/// Satisfiable on IL only: the negation of an M0 instance.
pub const IL_ONLY_FIXTURES: &[&str] = &["~((p |> q) -> <>p /\\ []r |> q /\\ []r)"];

/// `(formula, class, max worlds)` for `decide` runs.
pub const DECIDE_FIXTURES: &[(&str, &str, usize)] = &[
    ("p |> q -> <>p /\\ []r |> q /\\ []r", "il", 4),
    ("p |> q -> <>p /\\ []r |> q /\\ []r", "ilm0", 3),
    ("p |> q -> q \\/ <>q |> q", "il", 3),
    ("p |> q -> q \\/ <>q |> q", "ilm0", 4),
    ("p |> q -> p |> q /\\ []~p", "ilm0", 4),
    ("[](p -> q) -> p |> q", "il", 3),
    ("p |> <>p -> []~p", "il", 3),
    ("p |> q -> q |> p", "il", 3),
];

pub fn parse(s: &str) -> Formula {
    veltman::parse(s).unwrap_or_else(|e| panic!("fixture {s:?}: {e}"))
}

// ---------------------------------------------------------------------------
// random formulas and models

pub fn random_formula(rng: &mut impl Rng, vars: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.1) {
            Formula::Bot
        } else {
            Formula::var(*vars.choose(rng).expect("vars"))
        };
    }
    let sub = |rng: &mut _| random_formula(rng, vars, depth - 1);
    match rng.gen_range(0..7) {
        0 => Formula::implies(sub(rng), sub(rng)),
        1 => Formula::neg(sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        3 => Formula::boxed(sub(rng)),
        4 => Formula::diamond(sub(rng)),
        _ => Formula::rhd(sub(rng), sub(rng)),
    }
}

/// `small_frames` memoized per `(n, class)`.
type FrameCache = Mutex<HashMap<(usize, String), Arc<Vec<SmallFrame>>>>;

pub fn frames(n: usize, class: FrameClass) -> Arc<Vec<SmallFrame>> {
    static CACHE: OnceLock<FrameCache> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().expect("cache lock");
    cache
        .entry((n, class.to_string()))
        .or_insert_with(|| Arc::new(small_frames(n, class)))
        .clone()
}

pub fn random_small_frame(rng: &mut impl Rng, n: usize, class: FrameClass) -> SmallFrame {
    frames(n, class).choose(rng).expect("some frame").clone()
}

pub fn random_valuation(rng: &mut impl Rng, frame: Frame, vars: &[&str]) -> Model {
    let mut model = Model::new(frame);
    for v in vars {
        for x in 0..model.frame.len() {
            if rng.gen_bool(0.5) {
                model.set_true(v, x);
            }
        }
    }
    model
}

pub fn random_model(rng: &mut impl Rng, n: usize, class: FrameClass, vars: &[&str]) -> Model {
    let frame = random_small_frame(rng, n, class).to_frame();
    random_valuation(rng, frame, vars)
}

/// The set of formulas of `d` true at `x`.
pub fn truth_type(model: &Model, x: usize, d: &AdequateSet) -> Label {
    d.iter().filter(|f| model.forces_at(x, f)).cloned().collect()
}

// ---------------------------------------------------------------------------
// small bit-row relations, independent of the library's `Rel`

pub type Rows = Vec<u8>;

pub fn rows_of(rel: &Rel, n: usize) -> Rows {
    (0..n)
        .map(|x| rel.succ(x).fold(0u8, |m, y| m | 1 << y))
        .collect()
}

pub fn rel_of(rows: &Rows) -> Rel {
    let n = rows.len();
    Rel::from_pairs(n, pairs(rows))
}

pub fn pairs(rows: &Rows) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (x, &m) in rows.iter().enumerate() {
        for y in 0..8 {
            if m >> y & 1 == 1 {
                out.push((x, y));
            }
        }
    }
    out
}

fn has(rows: &Rows, x: usize, y: usize) -> bool {
    rows[x] >> y & 1 == 1
}

pub fn tr(rows: &Rows) -> Rows {
    let n = rows.len();
    let mut t = rows.clone();
    for k in 0..n {
        for x in 0..n {
            if has(&t, x, k) {
                t[x] |= t[k];
            }
        }
    }
    t
}

pub fn refl_tr(rows: &Rows) -> Rows {
    let mut t = tr(rows);
    for (x, m) in t.iter_mut().enumerate() {
        *m |= 1 << x;
    }
    t
}

pub fn compose(a: &Rows, b: &Rows) -> Rows {
    a.iter()
        .map(|&m| (0..8).filter(|y| m >> y & 1 == 1).fold(0u8, |acc, y| acc | b[y]))
        .collect()
}

/// Pairs of `t` with no `t`-intermediate.
pub fn one_step(t: &Rows) -> Rows {
    let n = t.len();
    let mut out = vec![0u8; n];
    for x in 0..n {
        for y in 0..n {
            if has(t, x, y) && !(0..n).any(|z| has(t, x, z) && has(t, z, y)) {
                out[x] |= 1 << y;
            }
        }
    }
    out
}

pub fn union(a: &Rows, b: &Rows) -> Rows {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

/// `x S_w y`, `x != y`, and no `(S_w ∪ R)*;R;(S_w ∪ R)*` path from `x` to `y`.
pub fn pure_rows(r: &Rows, s: &Rows) -> Rows {
    let star = refl_tr(&union(r, s));
    let through = compose(&compose(&star, r), &star);
    (0..r.len())
        .map(|x| s[x] & !through[x] & !(1 << x))
        .collect()
}

pub fn frame_rows(frame: &Frame) -> (Rows, Vec<Rows>) {
    let n = frame.len();
    let r = rows_of(&frame.r, n);
    let s = frame.s.iter().map(|s| rows_of(s, n)).collect();
    (r, s)
}

// ---------------------------------------------------------------------------
// K lattice oracle

/// Outcome of the lattice oracle on one frame.
pub struct LatticeK {
    pub k: Rows,
    /// The intersection itself satisfies the defining clauses.
    pub meet_admissible: bool,
    pub admissible_count: usize,
}

fn k_rule_holds(t: &Rows, pure_tr: &[Rows]) -> bool {
    let n = t.len();
    let t1 = one_step(t);
    for w in 0..n {
        for x in (0..n).filter(|&x| has(t, w, x)) {
            for y in (0..n).filter(|&y| has(&t1, x, y)) {
                for y2 in (0..n).filter(|&y2| has(&pure_tr[w], y, y2)) {
                    if t1[y2] & !t[x] != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Transitive, contains `R`, closed under the `K` rule.
pub fn k_admissible(t: &Rows, r: &Rows, pure_tr: &[Rows]) -> bool {
    t.iter().zip(r).all(|(a, b)| b & !a == 0) && tr(t) == *t && k_rule_holds(t, pure_tr)
}

/// Intersection of every admissible relation between `R^tr` and
/// `(R ∪ S)*;R`, or `None` when there are more than `cap` free pairs.
pub fn lattice_k(frame: &Frame, cap: usize) -> Option<LatticeK> {
    let n = frame.len();
    assert!(n <= 8);
    let (r, s) = frame_rows(frame);
    let pure_tr: Vec<Rows> = s.iter().map(|sw| tr(&pure_rows(&r, sw))).collect();
    let all_s = s.iter().fold(vec![0u8; n], |acc, sw| union(&acc, sw));
    let upper = compose(&refl_tr(&union(&r, &all_s)), &r);
    let base = tr(&r);
    let free: Vec<(usize, usize)> = pairs(&upper).into_iter().filter(|&(x, y)| !has(&base, x, y)).collect();
    if free.len() > cap {
        return None;
    }
    let mut meet = upper.clone();
    let mut count = 0;
    for mask in 0u32..1 << free.len() {
        let mut t = base.clone();
        for (i, &(x, y)) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                t[x] |= 1 << y;
            }
        }
        if k_admissible(&t, &r, &pure_tr) {
            count += 1;
            for x in 0..n {
                meet[x] &= t[x];
            }
        }
    }
    Some(LatticeK {
        meet_admissible: k_admissible(&meet, &r, &pure_tr),
        k: meet,
        admissible_count: count,
    })
}

/// Hypothesis (2) of the calculation lemma for `t`.
pub fn calc_hypothesis(t: &Rows, frame: &Frame) -> bool {
    let n = frame.len();
    let (_, s) = frame_rows(frame);
    let (r, _) = frame_rows(frame);
    let pure_tr: Vec<Rows> = s.iter().map(|sw| tr(&pure_rows(&r, sw))).collect();
    let t_tr = tr(t);
    let t1 = one_step(&t_tr);
    for w in 0..n {
        for x in (0..n).filter(|&x| has(&t_tr, w, x)) {
            for y in (0..n).filter(|&y| has(&t1, x, y)) {
                for y2 in (0..n).filter(|&y2| has(&pure_tr[w], y, y2)) {
                    if t1[y2] & !t_tr[x] != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// random quasi-frames

/// Bare quasi-frame skeleton: acyclic `R` along index order, `S_w` inside
/// `R(w)`.
pub fn random_skeleton(rng: &mut impl Rng, n: usize, r_density: f64, s_density: f64) -> Frame {
    let mut frame = Frame::numbered(n);
    for x in 0..n {
        for y in x + 1..n {
            if rng.gen_bool(r_density) {
                frame.r.insert(x, y);
            }
        }
    }
    for w in 0..n {
        let succ: Vec<usize> = frame.r.succ(w).collect();
        for &x in &succ {
            for &y in &succ {
                if x != y && rng.gen_bool(s_density) {
                    frame.s[w].insert(x, y);
                }
            }
        }
    }
    frame
}

/// The pattern of [`rule_example`] on five of `n` shuffled worlds, with
/// extra `R`-edges along a topological order and extra `S`-edges.
pub fn planted_skeleton(rng: &mut impl Rng, n: usize) -> Frame {
    assert!((5..=8).contains(&n));
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let mut frame = Frame::numbered(n);
    let [w, x, y, y2, z] = [ids[0], ids[1], ids[2], ids[3], ids[4]];
    for (a, b) in [(w, x), (w, y), (w, y2), (x, y), (y2, z)] {
        frame.r.insert(a, b);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.15) {
                frame.r.insert(ids[i], ids[j]);
            }
        }
    }
    frame.s[w].insert(y, y2);
    for v in 0..n {
        let succ: Vec<usize> = frame.r.succ(v).collect();
        for &a in &succ {
            for &b in &succ {
                if a != b && rng.gen_bool(0.15) {
                    frame.s[v].insert(a, b);
                }
            }
        }
    }
    frame
}

/// Frames for the `K` tests: seeded random skeletons on 2..=6 worlds,
/// planted rule patterns on 5 and 6 worlds and [`rule_example`].
pub fn k_corpus() -> Vec<Frame> {
    let mut out = vec![rule_example()];
    let mut g = rng(0x4b);
    for n in 2..=6 {
        for i in 0..60 {
            let density = [0.3, 0.5, 0.7][i % 3];
            out.push(random_skeleton(&mut g, n, density, 0.35));
        }
    }
    for i in 0..200 {
        out.push(planted_skeleton(&mut g, 5 + i % 2));
    }
    out
}

/// `w R x R y`, `y S_w y'` pure, `y' R z`, plus a sixth world below `w`.
/// The rule puts `x K z`.
pub fn rule_example() -> Frame {
    let mut f = Frame::new(["w", "x", "y", "y2", "z", "v"]).expect("names");
    let [w, x, y, y2, z, v] = [0, 1, 2, 3, 4, 5];
    for (a, b) in [(w, x), (w, y), (w, y2), (x, y), (y2, z), (v, w)] {
        f.r.insert(a, b);
    }
    f.s[w].insert(y, y2);
    f
}

pub fn height_label(h: usize) -> Label {
    (0..h)
        .flat_map(|i| {
            let p = Formula::var(format!("p{i}"));
            [Formula::boxed(p.clone()), p]
        })
        .collect()
}

/// Quasi-frame on at most `max_n` worlds whose labels grow strictly along
/// `R`: `label(x) = {p_i, []p_i | i < h(x)}` with `h` increasing on `R`
/// and non-decreasing on every `S_w`. Some `R`-edges carry `q` or `r`.
/// Candidates are drawn until `accept` holds.
/// With `plant`, five-world candidates start from `0 R 1 R 2`, `0 R 3`,
/// `2 S_0 3`, `3 R 4` and no `R`-path from 1 to 4, where the `K` rule fires.
pub fn random_quasi(
    rng: &mut impl Rng,
    max_n: usize,
    plant: bool,
    accept: impl Fn(&LabeledFrame) -> bool,
) -> LabeledFrame {
    loop {
        let n = if rng.gen_bool(0.5) { max_n } else { rng.gen_range(2..=max_n) };
        let planted = plant && n == 5 && rng.gen_bool(0.5);
        let mut h = vec![0usize; n];
        for i in 1..n {
            h[i] = h[i - 1] + rng.gen_bool(0.7) as usize;
        }
        if planted {
            h = vec![0, 1, 2, 2, 3];
        }
        let mut frame = Frame::numbered(n);
        for x in 0..n {
            for y in x + 1..n {
                if h[x] < h[y] && rng.gen_bool(0.6) {
                    frame.r.insert(x, y);
                }
            }
        }
        if planted {
            for (x, y) in [(0, 1), (0, 2), (0, 3), (1, 2), (3, 4)] {
                frame.r.insert(x, y);
            }
            for (x, y) in [(1, 3), (1, 4), (2, 4)] {
                frame.r.remove(x, y);
            }
            frame.s[0].insert(2, 3);
        }
        for w in 0..n {
            let succ: Vec<usize> = frame.r.succ(w).collect();
            for &x in &succ {
                for &y in &succ {
                    if x != y && h[x] <= h[y] && rng.gen_bool(0.5) {
                        frame.s[w].insert(x, y);
                    }
                }
            }
        }
        let edges: Vec<(usize, usize)> = frame.r.pairs().collect();
        let mut lf = LabeledFrame::new(frame);
        for (x, &hx) in h.iter().enumerate() {
            lf.set_label(x, height_label(hx));
        }
        for (x, y) in edges {
            if rng.gen_bool(0.3) {
                let c = if rng.gen_bool(0.5) { "q" } else { "r" };
                lf.set_edge_label(x, y, Formula::var(c)).expect("edge in R");
            }
        }
        if accept(&lf) {
            return lf;
        }
    }
}

pub fn random_quasi_il(rng: &mut impl Rng, max_n: usize) -> LabeledFrame {
    random_quasi(rng, max_n, false, |lf| check_quasi_frame(lf).is_ok())
}

pub fn random_quasi_m0(rng: &mut impl Rng, max_n: usize) -> LabeledFrame {
    random_quasi(rng, max_n, true, |lf| check_quasi_m0(lf).is_ok())
}

/// Adequate closure of every label and edge formula.
pub fn ambient_of(lf: &LabeledFrame) -> AdequateSet {
    let mut seed: Vec<Formula> = lf.labels().iter().flat_map(|l| l.iter().cloned()).collect();
    seed.extend(lf.edge_formulas());
    adequate_closure(&seed)
}

// ---------------------------------------------------------------------------
// brute-force closure

/// Successor masks of a frame on at most 16 worlds.
pub fn masks(frame: &Frame) -> (Vec<u16>, Vec<Vec<u16>>) {
    let n = frame.len();
    let row = |rel: &Rel, x: usize| rel.succ(x).fold(0u16, |m, y| m | 1 << y);
    let r = (0..n).map(|x| row(&frame.r, x)).collect();
    let s = (0..n).map(|w| (0..n).map(|x| row(&frame.s[w], x)).collect()).collect();
    (r, s)
}

/// Intersection of every `class` frame on the same worlds extending
/// `frame`, or `None` if there is none.
pub fn brute_closure(frame: &Frame, class: FrameClass) -> Option<Frame> {
    let n = frame.len();
    let (r, s) = masks(frame);
    let extends = |f: &SmallFrame| {
        (0..n).all(|x| r[x] & !f.r[x] == 0 && (0..n).all(|w| s[w][x] & !f.s[w][x] == 0))
    };
    let mut acc: Option<SmallFrame> = None;
    for f in frames(n, class).iter().filter(|f| extends(f)) {
        match &mut acc {
            None => acc = Some(f.clone()),
            Some(a) => {
                for x in 0..n {
                    a.r[x] &= f.r[x];
                    for w in 0..n {
                        a.s[w][x] &= f.s[w][x];
                    }
                }
            }
        }
    }
    acc.map(|a| a.to_frame())
}

// ---------------------------------------------------------------------------
// labeled structures for the truth lemma

pub const VARS: &[&str] = &["p", "q"];

/// Labels are truth types of a model on one frame, the skeleton is a
/// possibly different frame on the same worlds.
pub struct Structure {
    pub lf: LabeledFrame,
    pub d: AdequateSet,
}

pub fn random_structure(g: &mut impl Rng) -> Structure {
    let n = g.gen_range(1..=4);
    let phi = random_formula(g, VARS, 3);
    let d = adequate_closure([&phi]);
    let source = random_model(g, n, FrameClass::IL, VARS);
    let skeleton = if g.gen_bool(0.3) {
        source.frame.clone()
    } else {
        random_small_frame(g, n, FrameClass::IL).to_frame()
    };
    let mut lf = LabeledFrame::new(skeleton);
    for x in 0..n {
        lf.set_label(x, truth_type(&source, x, &d));
    }
    Structure { lf, d }
}

/// Puts a random formula of `d` on some `R`-edges; keeps the result only
/// if it is adequate.
pub fn with_edge_labels(g: &mut impl Rng, s: &Structure) -> Option<LabeledFrame> {
    let mut lf = s.lf.clone();
    let pool: Vec<&Formula> = s.d.iter().collect();
    let edges: Vec<(usize, usize)> = lf.frame().r.pairs().collect();
    for (x, y) in edges {
        if g.gen_bool(0.5) {
            let c = pool[g.gen_range(0..pool.len())].clone();
            lf.set_edge_label(x, y, c).expect("edge in R");
        }
    }
    check_adequate(&lf).is_ok().then_some(lf)
}

/// Every world of the generated submodel forces what it forced before.
pub fn submodel_agrees(model: &Model, root: usize, f: &Formula) -> bool {
    let name = model.frame.name(root).to_string();
    let sub = model.generated_submodel(&name).expect("root exists");
    sub.frame
        .worlds()
        .iter()
        .all(|x| sub.forces(x, f).unwrap() == model.forces(x, f).unwrap())
}
