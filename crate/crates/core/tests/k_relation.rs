#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use veltman::conditions::{check_adequate_m0, check_quasi_m0, FrameClass};
use veltman::relations::{compute_k, pure_s};
use veltman::Frame;

const FREE_CAP: usize = 14;

#[test]
fn compute_k_matches_lattice_oracle_on_corpus() {
    let mut fired = 0;
    for frame in k_corpus() {
        let oracle = lattice_k(&frame, FREE_CAP).expect("corpus frames stay under the cap");
        let n = frame.len();
        assert!(oracle.admissible_count > 0);
        assert!(oracle.meet_admissible, "meet not admissible on {frame:?}");
        let k = compute_k(&frame);
        assert_eq!(rows_of(&k, n), oracle.k, "K differs on {frame:?}");
        if k != frame.r.transitive_closure() {
            fired += 1;
        }
    }
    assert!(fired >= 50, "the rule fired on only {fired} corpus frames");
}

#[test]
fn rule_example_puts_x_below_z() {
    let frame = rule_example();
    let k = compute_k(&frame);
    let (x, z) = (frame.index_of("x").unwrap(), frame.index_of("z").unwrap());
    assert!(k.contains(x, z));
    assert!(!frame.r.transitive_closure().contains(x, z));
    let oracle = lattice_k(&frame, FREE_CAP).expect("small");
    assert_eq!(rows_of(&k, frame.len()), oracle.k);
}

#[test]
fn pure_s_matches_definition() {
    for frame in k_corpus() {
        let (r, s) = frame_rows(&frame);
        for w in 0..frame.len() {
            assert_eq!(rows_of(&pure_s(&frame, w), frame.len()), pure_rows(&r, &s[w]));
        }
    }
}

#[test]
fn pure_s_single_edge() {
    let mut f = Frame::new(["w", "x", "y"]).unwrap();
    f.r.insert(0, 1);
    f.r.insert(0, 2);
    f.s[0].insert(1, 2);
    assert_eq!(pure_s(&f, 0).pairs().collect::<Vec<_>>(), vec![(1, 2)]);
    f.r.insert(1, 2);
    assert!(pure_s(&f, 0).is_empty());
}

#[test]
fn empty_r_gives_empty_k() {
    assert!(compute_k(&Frame::numbered(4)).is_empty());
}

#[test]
fn k_is_r_on_adequate_m0_frames() {
    for n in 1..=4 {
        for sf in frames(n, FrameClass::ILM0).iter() {
            let frame = sf.to_frame();
            assert_eq!(compute_k(&frame), frame.r);
        }
    }
}

#[test]
fn calculation_lemma_on_sampled_relations() {
    let mut g = rng(0xca1c);
    let mut admissible = 0;
    for frame in k_corpus() {
        let n = frame.len();
        let k = rows_of(&compute_k(&frame), n);
        if tr(&k).iter().enumerate().any(|(x, m)| m >> x & 1 == 1) {
            continue;
        }
        let (r, _) = frame_rows(&frame);
        let k_pairs = pairs(&k);
        for trial in 0..12 {
            let mut t = r.clone();
            if trial == 0 {
                t = k.clone();
            } else if trial == 1 {
                t = union(&r, &one_step(&k));
            } else {
                for &(x, y) in &k_pairs {
                    if g.gen_bool(0.5) {
                        t[x] |= 1 << y;
                    }
                }
            }
            if !calc_hypothesis(&t, &frame) {
                continue;
            }
            admissible += 1;
            assert_eq!(tr(&t), k, "K != T^tr on {frame:?}");
            let k1 = one_step(&k);
            assert!(k1.iter().zip(&t).all(|(a, b)| a & !b == 0), "K¹ not inside T on {frame:?}");
        }
    }
    assert!(admissible >= 500, "only {admissible} admissible relations tested");
}

/// Only the pure-`S` clause can fail on a bare ILM0 skeleton, and it does:
/// an `S_w`-cycle crossed by an `R`-edge leaves no pure path.
#[test]
fn only_the_pure_s_clause_fails_on_m0_skeletons() {
    let mut failing = 0;
    for n in 1..=4 {
        for sf in frames(n, FrameClass::ILM0).iter() {
            let lf = veltman::LabeledFrame::new(sf.to_frame());
            let rep = check_adequate_m0(&lf);
            assert!(rep.violations.iter().all(|v| v.clause == "adequate-m0.6"), "{sf:?}: {rep:?}");
            if rep.is_ok() {
                assert!(check_quasi_m0(&lf).is_ok(), "{sf:?}");
            } else {
                failing += 1;
            }
        }
    }
    assert!(failing > 0);
}

#[test]
fn pure_s_clause_counterexample() {
    // 2 R 1 R 0, 2 R 0, and 0, 1 are S_2-equivalent.
    let mut f = Frame::numbered(3);
    for (x, y) in [(2, 1), (2, 0), (1, 0)] {
        f.r.insert(x, y);
    }
    f.s[1].insert(0, 0);
    for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        f.s[2].insert(x, y);
    }
    assert!(veltman::conditions::check_class_condition(&f, FrameClass::ILM0).is_ok());
    assert!(pure_s(&f, 2).is_empty());
    let rep = check_adequate_m0(&veltman::LabeledFrame::new(f));
    assert_eq!(rep.violations.len(), 1);
    assert_eq!(rep.violations[0].witness, vec!["2", "0", "1"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn k_contains_r_and_is_transitive(seed in any::<u64>(), n in 2usize..=7) {
        let frame = random_skeleton(&mut rng(seed), n, 0.5, 0.4);
        let k = compute_k(&frame);
        prop_assert!(frame.r.is_subset(&k));
        prop_assert!(k.is_transitive());
    }

    #[test]
    fn k_is_stable_under_growth_inside_k(seed in any::<u64>(), n in 2usize..=6) {
        let mut g = rng(seed);
        let f0 = random_skeleton(&mut g, n, 0.5, 0.4);
        let k0 = compute_k(&f0);
        let mut f1 = f0.clone();
        for (x, y) in k0.pairs() {
            if g.gen_bool(0.5) {
                f1.r.insert(x, y);
            }
        }
        prop_assert!(f0.r.is_subset(&compute_k(&f1)));
        prop_assert_eq!(compute_k(&f1), k0);
    }

    #[test]
    fn k_is_below_upper_bound(seed in any::<u64>(), n in 2usize..=7) {
        let frame = random_skeleton(&mut rng(seed), n, 0.5, 0.4);
        let (r, s) = frame_rows(&frame);
        let all_s = s.iter().fold(vec![0u8; n], |acc, sw| union(&acc, sw));
        let upper = compose(&refl_tr(&union(&r, &all_s)), &r);
        let k = rows_of(&compute_k(&frame), n);
        prop_assert!(k.iter().zip(&upper).all(|(a, b)| a & !b == 0));
    }
}
