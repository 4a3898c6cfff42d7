use fixedbitset::FixedBitSet;
use std::fmt;
use thiserror::Error;

/// A set of worlds, indexed by position in the frame.
pub type WorldSet = FixedBitSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("relations over carriers of size {left} and {right} cannot be combined")]
    CarrierMismatch { left: usize, right: usize },
}

/// A binary relation on the carrier `0..n`, stored as one bit row per world.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rel {
    rows: Vec<FixedBitSet>,
}

pub fn world_set(n: usize) -> WorldSet {
    FixedBitSet::with_capacity(n)
}

impl Rel {
    pub fn empty(n: usize) -> Rel {
        Rel {
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn identity(n: usize) -> Rel {
        let mut r = Rel::empty(n);
        for x in 0..n {
            r.insert(x, x);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Rel {
        let mut r = Rel::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    /// Size of the carrier.
    pub fn carrier(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    /// Adds a pair; returns whether it was new.
    pub fn insert(&mut self, x: usize, y: usize) -> bool {
        !self.rows[x].put(y)
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.rows[x].set(y, false);
    }

    /// Successors of `x`.
    pub fn row(&self, x: usize) -> &FixedBitSet {
        &self.rows[x]
    }

    pub fn row_mut(&mut self, x: usize) -> &mut FixedBitSet {
        &mut self.rows[x]
    }

    pub fn succ(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[x].ones()
    }

    /// Predecessors of `y`.
    pub fn pred(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.carrier()).filter(move |&x| self.contains(x, y))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    /// Extends the carrier to `n` worlds without adding pairs.
    pub fn grow(&mut self, n: usize) {
        for row in &mut self.rows {
            row.grow(n);
        }
        while self.rows.len() < n {
            self.rows.push(FixedBitSet::with_capacity(n));
        }
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.carrier() == other.carrier()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(b))
    }

    fn check(&self, other: &Rel) -> Result<(), RelError> {
        if self.carrier() == other.carrier() {
            Ok(())
        } else {
            Err(RelError::CarrierMismatch {
                left: self.carrier(),
                right: other.carrier(),
            })
        }
    }

    pub fn union(&self, other: &Rel) -> Result<Rel, RelError> {
        self.check(other)?;
        let mut out = self.clone();
        out.union_with(other);
        Ok(out)
    }

    /// In-place union; panics on carrier mismatch.
    pub fn union_with(&mut self, other: &Rel) {
        assert_eq!(self.carrier(), other.carrier(), "carrier mismatch");
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
    }

    pub fn difference(&self, other: &Rel) -> Result<Rel, RelError> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.difference_with(b);
        }
        Ok(out)
    }

    /// `x (self;other) z` iff `x self y other z` for some `y`.
    pub fn compose(&self, other: &Rel) -> Result<Rel, RelError> {
        self.check(other)?;
        let n = self.carrier();
        let mut out = Rel::empty(n);
        for x in 0..n {
            for y in self.rows[x].ones() {
                out.rows[x].union_with(&other.rows[y]);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Rel {
        Rel::from_pairs(self.carrier(), self.pairs().map(|(x, y)| (y, x)))
    }

    pub fn transitive_closure(&self) -> Rel {
        let mut out = self.clone();
        let n = self.carrier();
        for k in 0..n {
            let row_k = out.rows[k].clone();
            for x in 0..n {
                if out.rows[x].contains(k) {
                    out.rows[x].union_with(&row_k);
                }
            }
        }
        out
    }

    pub fn reflexive_transitive_closure(&self) -> Rel {
        let mut out = self.transitive_closure();
        for x in 0..self.carrier() {
            out.rows[x].insert(x);
        }
        out
    }

    /// Pairs `xTy` with no `t` such that `xTtTy`.
    pub fn one_step(&self) -> Rel {
        let two = self.compose(self).expect("same carrier");
        self.difference(&two).expect("same carrier")
    }

    /// Pairs of the relation that are not one-step.
    pub fn multi_step(&self) -> Rel {
        self.difference(&self.one_step()).expect("same carrier")
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).expect("same carrier").is_subset(self)
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.carrier()).all(|x| !self.contains(x, x))
    }

    /// Irreflexive transitive closure, i.e. converse well-foundedness on a
    /// finite carrier. Returns a world on a cycle when it fails.
    pub fn cycle_witness(&self) -> Option<usize> {
        let tc = self.transitive_closure();
        (0..self.carrier()).find(|&x| tc.contains(x, x))
    }

    /// Worlds reachable from `seeds` in zero or more steps.
    pub fn reach(&self, seeds: &FixedBitSet) -> FixedBitSet {
        let mut seen = seeds.clone();
        seen.grow(self.carrier());
        let mut stack: Vec<usize> = seen.ones().collect();
        while let Some(x) = stack.pop() {
            for y in self.rows[x].ones() {
                if !seen.put(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Restriction to worlds in `keep`, on the same carrier.
    pub fn restrict(&self, keep: &FixedBitSet) -> Rel {
        let mut out = Rel::empty(self.carrier());
        for x in keep.ones() {
            let mut row = self.rows[x].clone();
            row.intersect_with(keep);
            out.rows[x] = row;
        }
        out
    }

    /// Reindexes onto a smaller carrier: `map[old] = Some(new)`.
    pub fn project(&self, map: &[Option<usize>], n: usize) -> Rel {
        let mut out = Rel::empty(n);
        for (x, y) in self.pairs() {
            if let (Some(a), Some(b)) = (map[x], map[y]) {
                out.insert(a, b);
            }
        }
        out
    }
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

pub fn trans_closure(r: &Rel) -> Rel {
    r.transitive_closure()
}

pub fn refl_trans_closure(r: &Rel) -> Rel {
    r.reflexive_transitive_closure()
}

pub fn compose(a: &Rel, b: &Rel) -> Result<Rel, RelError> {
    a.compose(b)
}

pub fn one_step(t: &Rel) -> Rel {
    t.one_step()
}

pub fn multi_step(t: &Rel) -> Rel {
    t.multi_step()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_on(n: usize) -> impl Strategy<Value = Rel> {
        proptest::collection::vec((0..n, 0..n), 0..20).prop_map(move |pairs| Rel::from_pairs(n, pairs))
    }

    fn arb_rel() -> impl Strategy<Value = Rel> {
        (1usize..7).prop_flat_map(rel_on)
    }

    fn arb_triple() -> impl Strategy<Value = (Rel, Rel, Rel)> {
        (1usize..6).prop_flat_map(|n| (rel_on(n), rel_on(n), rel_on(n)))
    }

    #[test]
    fn chain_closure() {
        let r = Rel::from_pairs(3, [(0, 1), (1, 2)]);
        let tc = r.transitive_closure();
        assert_eq!(tc.pairs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(tc.one_step(), r);
        assert_eq!(tc.multi_step().pairs().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Rel::empty(2);
        let b = Rel::empty(3);
        assert_eq!(
            a.compose(&b),
            Err(RelError::CarrierMismatch { left: 2, right: 3 })
        );
    }

    proptest! {
        #[test]
        fn closure_is_idempotent(r in arb_rel()) {
            let tc = r.transitive_closure();
            prop_assert_eq!(tc.transitive_closure(), tc.clone());
            prop_assert!(tc.is_transitive());
            prop_assert!(r.is_subset(&tc));
        }

        #[test]
        fn one_step_generates_acyclic_closure(r in arb_rel()) {
            let n = r.carrier();
            let dag = Rel::from_pairs(n, r.pairs().filter(|(x, y)| x < y));
            let tc = dag.transitive_closure();
            prop_assert_eq!(tc.one_step().transitive_closure(), tc.clone());
            prop_assert_eq!(tc.one_step().union(&tc.multi_step()).unwrap(), tc);
        }

        #[test]
        fn compose_associates((a, b, c) in arb_triple()) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
