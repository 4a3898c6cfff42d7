//! Relation algebra and the relations derived from a labeled frame.

mod rel;

pub use rel::{compose, multi_step, one_step, refl_trans_closure, trans_closure, world_set, Rel, RelError, WorldSet};

use crate::formula::Formula;
use crate::model::{Frame, LabeledFrame};

/// Pure `S_w`: `x S_w y`, `x != y`, and no path from `x` to `y` through
/// `S_w ∪ R` uses an `R`-step.
pub fn pure_s(frame: &Frame, w: usize) -> Rel {
    let n = frame.len();
    let mixed = frame.s[w].union(&frame.r).expect("same carrier");
    let star = mixed.reflexive_transitive_closure();
    let through_r = star
        .compose(&frame.r)
        .and_then(|t| t.compose(&star))
        .expect("same carrier");
    let mut out = frame.s[w].difference(&through_r).expect("same carrier");
    for x in 0..n {
        out.remove(x, x);
    }
    out
}

/// The least transitive relation containing `R` and closed under
/// `w K x K¹ y (S̆_w)^tr y' K¹ z => x K z`, computed by saturation with
/// `K¹` recomputed from the current approximation.
pub fn compute_k(frame: &Frame) -> Rel {
    let pure_tr: Vec<Rel> = (0..frame.len())
        .map(|w| pure_s(frame, w).transitive_closure())
        .collect();
    compute_k_with(frame, &pure_tr)
}

fn compute_k_with(frame: &Frame, pure_tr: &[Rel]) -> Rel {
    let n = frame.len();
    let mut k = frame.r.transitive_closure();
    loop {
        let k1 = k.one_step();
        let mut next = k.clone();
        for w in 0..n {
            for x in k.succ(w) {
                for y in k1.succ(x) {
                    for y2 in pure_tr[w].succ(y) {
                        next.row_mut(x).union_with(k1.row(y2));
                    }
                }
            }
        }
        let next = next.transitive_closure();
        if next == k {
            return k;
        }
        k = next;
    }
}

/// Relations derived from the skeleton of a labeled frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRelations {
    pub k: Rel,
    pub k_one: Rel,
    pub k_multi: Rel,
    pub r_one: Rel,
    /// `S̆_w` for each `w`.
    pub pure_s: Vec<Rel>,
    /// `(S̆_w)^tr` for each `w`.
    pub pure_s_tr: Vec<Rel>,
    /// `x ⊂₁ y` iff `w K x K¹ y' (S̆_w)^tr y` for some `w`, `y'`.
    pub below_one: Rel,
    /// Reflexive transitive closure of `⊂₁ ∪ K`.
    pub below: Rel,
}

impl DerivedRelations {
    pub fn compute(lf: &LabeledFrame) -> DerivedRelations {
        DerivedRelations::of_frame(lf.frame())
    }

    pub fn of_frame(frame: &Frame) -> DerivedRelations {
        let n = frame.len();
        let pure: Vec<Rel> = (0..n).map(|w| pure_s(frame, w)).collect();
        let pure_tr: Vec<Rel> = pure.iter().map(Rel::transitive_closure).collect();
        let k = compute_k_with(frame, &pure_tr);
        let k_one = k.one_step();
        let k_multi = k.multi_step();
        let mut below_one = Rel::empty(n);
        for w in 0..n {
            for x in k.succ(w) {
                for y2 in k_one.succ(x) {
                    below_one.row_mut(x).union_with(pure_tr[w].row(y2));
                }
            }
        }
        let below = below_one
            .union(&k)
            .expect("same carrier")
            .reflexive_transitive_closure();
        DerivedRelations {
            r_one: frame.r.one_step(),
            k,
            k_one,
            k_multi,
            pure_s: pure,
            pure_s_tr: pure_tr,
            below_one,
            below,
        }
    }
}

pub fn below_rels(lf: &LabeledFrame) -> (Rel, Rel) {
    let d = lf.derived();
    (d.below_one.clone(), d.below.clone())
}

fn seeds(lf: &LabeledFrame, x: usize, target: &Formula) -> WorldSet {
    let mut out = world_set(lf.len());
    for (a, b, f) in lf.edge_labels() {
        if a == x && f == target {
            out.insert(b);
        }
    }
    out
}

/// Worlds `y` with `ν(x, y) = target`, closed under `S_x` and `R`.
pub fn critical_cone(lf: &LabeledFrame, x: usize, target: &Formula) -> WorldSet {
    let step = lf.frame().s[x].union(&lf.frame().r).expect("same carrier");
    step.reach(&seeds(lf, x, target))
}

/// The critical cone closed under every `S_w` and `R`.
pub fn generalized_cone(lf: &LabeledFrame, x: usize, target: &Formula) -> WorldSet {
    let frame = lf.frame();
    let step = frame.s_union().union(&frame.r).expect("same carrier");
    step.reach(&critical_cone(lf, x, target))
}

/// Worlds `x` with `ν(w, x) = target`, closed under `K ∪ S_w`.
pub fn n_cone(lf: &LabeledFrame, w: usize, target: &Formula) -> WorldSet {
    let d = lf.derived();
    let step = d.k.union(&lf.frame().s[w]).expect("same carrier");
    step.reach(&seeds(lf, w, target))
}

/// The edge formula whose critical cone at `x` holds `y`, if any.
pub fn cone_formula(lf: &LabeledFrame, x: usize, y: usize) -> Option<Formula> {
    lf.edge_formulas()
        .into_iter()
        .find(|c| critical_cone(lf, x, c).contains(y))
}

/// The edge formula whose N-cone at `w` holds `y`, if any.
pub fn n_cone_formula(lf: &LabeledFrame, w: usize, y: usize) -> Option<Formula> {
    lf.edge_formulas()
        .into_iter()
        .find(|c| n_cone(lf, w, c).contains(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    /// w R x R y, w R y, w R y', y' R z, y S_w y', plus an isolated world.
    fn sample() -> Frame {
        let mut f = Frame::new(["w", "x", "y", "y2", "z", "u"]).unwrap();
        for (a, b) in [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)] {
            f.r.insert(a, b);
        }
        f.s[0].insert(2, 3);
        f
    }

    #[test]
    fn rule_adds_pair() {
        let f = sample();
        let p = pure_s(&f, 0);
        assert!(p.contains(2, 3));
        let k = compute_k(&f);
        assert!(k.contains(1, 4));
        assert!(!f.r.contains(1, 4));
    }

    #[test]
    fn r_step_makes_s_impure() {
        let mut f = Frame::new(["w", "a", "b"]).unwrap();
        f.r.insert(0, 1);
        f.r.insert(0, 2);
        f.r.insert(1, 2);
        f.s[0].insert(1, 2);
        assert!(!pure_s(&f, 0).contains(1, 2));
    }

    #[test]
    fn cones_follow_edges() {
        let mut lf = LabeledFrame::new(sample());
        let q = parse("q").unwrap();
        lf.set_edge_label(0, 2, q.clone()).unwrap();
        let c = critical_cone(&lf, 0, &q);
        assert_eq!(c.ones().collect::<Vec<_>>(), vec![2, 3, 4]);
        let nc = n_cone(&lf, 0, &q);
        assert!(nc.contains(4));
        assert_eq!(cone_formula(&lf, 0, 3), Some(q));
        assert_eq!(cone_formula(&lf, 0, 1), None);
    }

    #[test]
    fn below_is_reflexive() {
        let lf = LabeledFrame::new(sample());
        let (one, below) = below_rels(&lf);
        assert!(one.contains(1, 3));
        for x in 0..lf.len() {
            assert!(below.contains(x, x));
        }
    }
}
