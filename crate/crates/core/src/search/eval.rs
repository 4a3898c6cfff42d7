//! Formula evaluation over 64 valuations at once.
//!
//! A valuation of `k` variables on `n` worlds is a number below
//! `2^(k*n)`; bit `i*n + w` says whether variable `i` holds at world `w`.
//! Lane `l` of a block starting at `base` is the valuation `base + l`.

use super::enumerate::{SmallFrame, MAX_WORLDS};
use crate::formula::Formula;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
enum Node {
    Bot,
    Var(usize),
    Imp(usize, usize),
    Box(usize),
    Rhd(usize, usize),
}

/// Formulas flattened into a shared node list, children before parents.
#[derive(Clone, Debug, Default)]
pub struct Compiled {
    nodes: Vec<Node>,
    ids: HashMap<Formula, usize>,
    vars: Vec<String>,
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Compiled {
    /// Compiles with a fixed variable order.
    pub fn with_vars(vars: Vec<String>) -> Compiled {
        Compiled {
            vars,
            ..Compiled::default()
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Node index of `f`, adding nodes as needed.
    pub fn add(&mut self, f: &Formula) -> usize {
        if let Some(&id) = self.ids.get(f) {
            return id;
        }
        let node = match f {
            Formula::Bot => Node::Bot,
            Formula::Var(v) => {
                let i = match self.vars.iter().position(|x| x == v) {
                    Some(i) => i,
                    None => {
                        self.vars.push(v.clone());
                        self.vars.len() - 1
                    }
                };
                Node::Var(i)
            }
            Formula::Implies(a, b) => Node::Imp(self.add(a), self.add(b)),
            Formula::Box(a) => Node::Box(self.add(a)),
            Formula::Rhd(a, b) => Node::Rhd(self.add(a), self.add(b)),
        };
        self.nodes.push(node);
        let id = self.nodes.len() - 1;
        self.ids.insert(f.clone(), id);
        id
    }

    /// Number of valuation bits on an `n`-world frame.
    pub fn valuation_bits(&self, n: usize) -> usize {
        self.vars.len() * n
    }
}

/// Scratch space for evaluating one compiled formula set on one frame.
pub struct Evaluator<'a> {
    compiled: &'a Compiled,
    frame: &'a SmallFrame,
    values: Vec<[u64; MAX_WORLDS]>,
}

impl<'a> Evaluator<'a> {
    pub fn new(compiled: &'a Compiled, frame: &'a SmallFrame) -> Evaluator<'a> {
        Evaluator {
            compiled,
            frame,
            values: vec![[0; MAX_WORLDS]; compiled.nodes.len()],
        }
    }

    /// Lanes of a block that are real valuations.
    pub fn valid_lanes(&self) -> u64 {
        let total = self.compiled.valuation_bits(self.frame.n);
        if total >= 6 {
            !0
        } else {
            (1u64 << (1u32 << total)) - 1
        }
    }

    /// Number of 64-valuation blocks.
    pub fn blocks(&self) -> u64 {
        let total = self.compiled.valuation_bits(self.frame.n);
        if total <= 6 {
            1
        } else {
            1u64 << (total - 6)
        }
    }

    /// Evaluates every node for the block starting at valuation `base`.
    pub fn run(&mut self, base: u64) {
        let n = self.frame.n;
        for id in 0..self.compiled.nodes.len() {
            let mut row = [0u64; MAX_WORLDS];
            match self.compiled.nodes[id] {
                Node::Bot => {}
                Node::Var(i) => {
                    for (w, cell) in row.iter_mut().enumerate().take(n) {
                        let bit = i * n + w;
                        *cell = if bit < 6 {
                            LANE_PATTERNS[bit]
                        } else if base >> bit & 1 == 1 {
                            !0
                        } else {
                            0
                        };
                    }
                }
                Node::Imp(a, b) => {
                    for w in 0..n {
                        row[w] = !self.values[a][w] | self.values[b][w];
                    }
                }
                Node::Box(a) => {
                    for w in 0..n {
                        let mut acc = !0u64;
                        let mut succ = self.frame.r[w];
                        while succ != 0 {
                            let u = succ.trailing_zeros() as usize;
                            succ &= succ - 1;
                            acc &= self.values[a][u];
                        }
                        row[w] = acc;
                    }
                }
                Node::Rhd(a, b) => {
                    for w in 0..n {
                        let mut acc = !0u64;
                        let mut succ = self.frame.r[w];
                        while succ != 0 {
                            let u = succ.trailing_zeros() as usize;
                            succ &= succ - 1;
                            let ante = self.values[a][u];
                            if ante == 0 {
                                continue;
                            }
                            let mut seen = 0u64;
                            let mut reach = self.frame.s[w][u];
                            while reach != 0 {
                                let v = reach.trailing_zeros() as usize;
                                reach &= reach - 1;
                                seen |= self.values[b][v];
                            }
                            acc &= !ante | seen;
                        }
                        row[w] = acc;
                    }
                }
            }
            self.values[id] = row;
        }
    }

    /// Lanes where node `id` holds at world `w`, after [`Evaluator::run`].
    pub fn lanes(&self, id: usize, w: usize) -> u64 {
        self.values[id][w]
    }
}
