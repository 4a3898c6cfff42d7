//! Exhaustive enumeration of small frames as bit masks.

use crate::conditions::FrameClass;
use crate::model::Frame;

/// Largest carrier the mask representation supports.
pub const MAX_WORLDS: usize = 16;

/// A frame on worlds `0..n`: `r[x]` and `s[w][x]` are successor masks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallFrame {
    pub n: usize,
    pub r: Vec<u16>,
    pub s: Vec<Vec<u16>>,
}

fn bits(mask: u16) -> impl Iterator<Item = usize> {
    (0..16).filter(move |i| mask >> i & 1 == 1)
}

impl SmallFrame {
    pub fn to_frame(&self) -> Frame {
        let mut f = Frame::numbered(self.n);
        for x in 0..self.n {
            for y in bits(self.r[x]) {
                f.r.insert(x, y);
            }
            for w in 0..self.n {
                for y in bits(self.s[w][x]) {
                    f.s[w].insert(x, y);
                }
            }
        }
        f
    }
}

/// All strict partial orders on `0..n`, as successor masks. Element `k` is
/// added with a down-closed set below it and an up-closed set above it.
pub fn partial_orders(n: usize) -> Vec<Vec<u16>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for order in &out {
            let below_closed = |d: u16| (0..k).all(|e| d >> e & 1 == 1 || bits(d).all(|x| order[e] >> x & 1 == 0));
            let above_closed = |u: u16| bits(u).all(|x| order[x] & !u == 0);
            for down in 0..(1u16 << k) {
                if !below_closed(down) {
                    continue;
                }
                for up in 0..(1u16 << k) {
                    if up & down != 0 || !above_closed(up) {
                        continue;
                    }
                    if !bits(down).all(|d| order[d] & up == up) {
                        continue;
                    }
                    let mut o = order.clone();
                    for d in bits(down) {
                        o[d] |= 1 << k;
                    }
                    o.push(up);
                    next.push(o);
                }
            }
        }
        out = next;
    }
    out
}

/// Strict partial orders on `0..n` in which `0` is below every other world.
pub fn rooted_orders(n: usize) -> Vec<Vec<u16>> {
    if n == 0 {
        return Vec::new();
    }
    partial_orders(n - 1)
        .into_iter()
        .map(|o| {
            let mut r = vec![0u16; n];
            r[0] = ((1u32 << n) - 2) as u16;
            for (x, succ) in o.iter().enumerate() {
                r[x + 1] = succ << 1;
            }
            r
        })
        .collect()
}

/// Every transitive `S_w` on `R(w)` containing the identity there and `R`
/// restricted to `R(w)`.
fn s_options(r: &[u16], w: usize) -> Vec<Vec<u16>> {
    let n = r.len();
    let up = r[w];
    let mut base = vec![0u16; n];
    for y in bits(up) {
        base[y] = (1 << y) | (r[y] & up);
    }
    let cands: Vec<(usize, usize)> = bits(up)
        .flat_map(|y| bits(up).map(move |z| (y, z)))
        .filter(|&(y, z)| y != z && base[y] >> z & 1 == 0)
        .collect();
    let mut out = Vec::new();
    let mut excluded = vec![0u16; n];
    extend_preorders(&cands, 0, base, &mut excluded, &mut out);
    out
}

fn close(mut s: Vec<u16>) -> Vec<u16> {
    loop {
        let mut changed = false;
        for x in 0..s.len() {
            let mut row = s[x];
            for y in bits(s[x]) {
                row |= s[y];
            }
            if row != s[x] {
                s[x] = row;
                changed = true;
            }
        }
        if !changed {
            return s;
        }
    }
}

fn extend_preorders(cands: &[(usize, usize)], i: usize, s: Vec<u16>, excluded: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if i == cands.len() {
        out.push(s);
        return;
    }
    let (y, z) = cands[i];
    if s[y] >> z & 1 == 1 {
        extend_preorders(cands, i + 1, s, excluded, out);
        return;
    }
    excluded[y] |= 1 << z;
    extend_preorders(cands, i + 1, s.clone(), excluded, out);
    excluded[y] &= !(1 << z);
    let mut with = s;
    with[y] |= 1 << z;
    let with = close(with);
    if with.iter().zip(excluded.iter()).all(|(row, ex)| row & ex == 0) {
        extend_preorders(cands, i + 1, with, excluded, out);
    }
}

fn m0_ok(r: &[u16], w: usize, s: &[u16]) -> bool {
    bits(r[w]).all(|x| {
        bits(r[x]).all(|y| bits(s[y]).all(|y2| r[y2] & !r[x] == 0))
    })
}

fn w_ok(r: &[u16], s: &[u16]) -> bool {
    let n = r.len();
    let mut step = vec![0u16; n];
    for x in 0..n {
        for t in bits(s[x]) {
            step[x] |= r[t];
        }
    }
    let tc = close(step);
    (0..n).all(|x| tc[x] >> x & 1 == 0)
}

fn class_ok(class: FrameClass, r: &[u16], w: usize, s: &[u16]) -> bool {
    let m0 = matches!(class, FrameClass::ILM0 | FrameClass::ILWstar);
    let w_cond = matches!(class, FrameClass::ILW | FrameClass::ILWstar);
    (!m0 || m0_ok(r, w, s)) && (!w_cond || w_ok(r, s))
}

fn frames_over(orders: Vec<Vec<u16>>, class: FrameClass) -> Vec<SmallFrame> {
    let mut out = Vec::new();
    for r in orders {
        let n = r.len();
        let options: Vec<Vec<Vec<u16>>> = (0..n)
            .map(|w| {
                s_options(&r, w)
                    .into_iter()
                    .filter(|s| class_ok(class, &r, w, s))
                    .collect()
            })
            .collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let mut pick = vec![0usize; n];
        'product: loop {
            out.push(SmallFrame {
                n,
                r: r.clone(),
                s: (0..n).map(|w| options[w][pick[w]].clone()).collect(),
            });
            let mut i = n;
            loop {
                if i == 0 {
                    break 'product;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    continue 'product;
                }
                pick[i] = 0;
            }
        }
    }
    out
}

/// Every frame of `class` on `n` indexed worlds, each exactly once.
pub fn small_frames(n: usize, class: FrameClass) -> Vec<SmallFrame> {
    assert!(n <= MAX_WORLDS);
    frames_over(partial_orders(n), class)
}

/// Frames of `class` on `n` worlds generated by world `0`.
pub fn rooted_small_frames(n: usize, class: FrameClass) -> Vec<SmallFrame> {
    assert!((1..=MAX_WORLDS).contains(&n));
    frames_over(rooted_orders(n), class)
}
