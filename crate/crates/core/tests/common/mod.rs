//! Brute-force reference implementations on `u64` bitmasks. Nothing here
//! calls into the library's set operations; frames and relations are only
//! read point by point.

#![allow(dead_code)]

use nle_frames::bitset::BitSet;
use nle_frames::order::Sort;
use nle_frames::polarity::SortedFrame;
use nle_frames::relational::SortedRelation;

pub type Mask = u64;

pub fn bit(i: usize) -> Mask {
    1 << i
}

pub fn has(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn full(n: usize) -> Mask {
    if n == 64 {
        !0
    } else {
        (1 << n) - 1
    }
}

pub fn subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub fn mask(set: &BitSet) -> Mask {
    set.iter().fold(0, |m, i| m | bit(i))
}

pub fn members(m: Mask, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| has(m, i)).collect()
}

pub fn to_bitset(m: Mask, n: usize) -> BitSet {
    BitSet::from_indices(n, members(m, n))
}

/// Every tuple in the product of `0..dims[j]`, first coordinate fastest.
pub fn tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = (0..d)
            .flat_map(|i| {
                out.iter().map(move |t| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    // reorder so that the first coordinate varies fastest
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// A polarity read off a frame: `perp[x][y]`.
#[derive(Clone, Debug)]
pub struct Pol {
    pub nx: usize,
    pub ny: usize,
    pub perp: Vec<Vec<bool>>,
}

impl Pol {
    pub fn of(f: &SortedFrame) -> Self {
        let (nx, ny) = (f.len(Sort::One), f.len(Sort::Dual));
        Self {
            nx,
            ny,
            perp: (0..nx).map(|x| (0..ny).map(|y| f.perp(x, y)).collect()).collect(),
        }
    }

    pub fn from_rows(perp: Vec<Vec<bool>>, ny: usize) -> Self {
        Self {
            nx: perp.len(),
            ny,
            perp,
        }
    }

    pub fn len(&self, s: Sort) -> usize {
        match s {
            Sort::One => self.nx,
            Sort::Dual => self.ny,
        }
    }

    fn p(&self, s: Sort, u: usize, v: usize) -> bool {
        match s {
            Sort::One => self.perp[u][v],
            Sort::Dual => self.perp[v][u],
        }
    }

    /// `{u}⊥`, a mask over the opposite sort.
    pub fn row(&self, s: Sort, u: usize) -> Mask {
        (0..self.len(s.flip()))
            .filter(|&v| self.p(s, u, v))
            .fold(0, |m, v| m | bit(v))
    }

    /// `{v : ∀u ∈ m, u ⊥ v}`.
    pub fn prime(&self, s: Sort, m: Mask) -> Mask {
        (0..self.len(s.flip()))
            .filter(|&v| (0..self.len(s)).all(|u| !has(m, u) || self.p(s, u, v)))
            .fold(0, |acc, v| acc | bit(v))
    }

    pub fn closure(&self, s: Sort, m: Mask) -> Mask {
        self.prime(s.flip(), self.prime(s, m))
    }

    /// All stable sets of a sort, by closing nothing: test every subset.
    pub fn stable(&self, s: Sort) -> Vec<Mask> {
        (0..=full(self.len(s))).filter(|&m| self.closure(s, m) == m).collect()
    }

    pub fn leq(&self, s: Sort, u: usize, w: usize) -> bool {
        subset(self.row(s, u), self.row(s, w))
    }

    /// `Γu`.
    pub fn upper(&self, s: Sort, u: usize) -> Mask {
        (0..self.len(s))
            .filter(|&w| self.leq(s, u, w))
            .fold(0, |m, w| m | bit(w))
    }

    pub fn is_increasing(&self, s: Sort, m: Mask) -> bool {
        (0..self.len(s)).all(|u| !has(m, u) || subset(self.upper(s, u), m))
    }

    pub fn is_closed(&self, s: Sort, m: Mask) -> bool {
        (0..self.len(s)).any(|u| self.upper(s, u) == m)
    }

    /// `m = {v}⊥` for some `v` of the opposite sort.
    pub fn is_open(&self, s: Sort, m: Mask) -> bool {
        (0..self.len(s.flip())).any(|v| self.row(s.flip(), v) == m)
    }

    pub fn is_clopen(&self, s: Sort, m: Mask) -> bool {
        self.is_closed(s, m) && self.is_open(s, m)
    }

    /// `◇U = {y : ∃x ∈ U, x I y}`.
    pub fn diamond(&self, u: Mask) -> Mask {
        (0..self.ny)
            .filter(|&y| (0..self.nx).any(|x| has(u, x) && !self.perp[x][y]))
            .fold(0, |m, y| m | bit(y))
    }

    /// `□V = {x : ∀y (x I y → y ∈ V)}`.
    pub fn boxx(&self, v: Mask) -> Mask {
        (0..self.nx)
            .filter(|&x| (0..self.ny).all(|y| self.perp[x][y] || has(v, y)))
            .fold(0, |m, x| m | bit(x))
    }

    /// `◆V = {x : ∃y ∈ V, x I y}`.
    pub fn black_diamond(&self, v: Mask) -> Mask {
        (0..self.nx)
            .filter(|&x| (0..self.ny).any(|y| has(v, y) && !self.perp[x][y]))
            .fold(0, |m, x| m | bit(x))
    }

    /// `■U = {y : ∀x (x I y → x ∈ U)}`.
    pub fn black_box(&self, u: Mask) -> Mask {
        (0..self.ny)
            .filter(|&y| (0..self.nx).all(|x| self.perp[x][y] || has(u, x)))
            .fold(0, |m, y| m | bit(y))
    }

    pub fn to_frame(&self, name: &str) -> SortedFrame {
        let xs = (0..self.nx).map(|i| format!("x{i}")).collect();
        let ys = (0..self.ny).map(|i| format!("y{i}")).collect();
        SortedFrame::from_fn(name, xs, ys, |x, y| self.perp[x][y])
    }
}

/// A relation as a table of output masks over input tuples.
#[derive(Clone, Debug)]
pub struct Rel {
    pub inputs: Vec<Sort>,
    pub output: Sort,
    pub dims: Vec<usize>,
    pub sections: std::collections::HashMap<Vec<usize>, Mask>,
}

impl Rel {
    pub fn of(pol: &Pol, r: &SortedRelation) -> Self {
        let inputs = r.sort.inputs.clone();
        let dims: Vec<usize> = inputs.iter().map(|&s| pol.len(s)).collect();
        let sections = tuples(&dims)
            .into_iter()
            .map(|t| {
                let m = (0..pol.len(r.sort.output))
                    .filter(|&w| r.holds(w, &t))
                    .fold(0, |m, w| m | bit(w));
                (t, m)
            })
            .collect();
        Self {
            inputs,
            output: r.sort.output,
            dims,
            sections,
        }
    }

    pub fn section(&self, t: &[usize]) -> Mask {
        self.sections[t]
    }

    /// `α(W⃗) = ⋃ {R w⃗ : w⃗ ∈ W⃗}`.
    pub fn image(&self, sets: &[Mask]) -> Mask {
        tuples(&self.dims)
            .into_iter()
            .filter(|t| t.iter().zip(sets).all(|(&u, &m)| has(m, u)))
            .fold(0, |acc, t| acc | self.sections[&t])
    }

    pub fn closed_image(&self, pol: &Pol, sets: &[Mask]) -> Mask {
        pol.closure(self.output, self.image(sets))
    }

    /// `R′`: `v R′ u⃗` iff `v ⊥ w` for every `w ∈ R u⃗`.
    pub fn dual_section(&self, pol: &Pol, t: &[usize]) -> Mask {
        pol.prime(self.output, self.section(t))
    }
}

/// Every tuple of stable sets for the given sorts.
pub fn stable_tuples(pol: &Pol, sorts: &[Sort]) -> Vec<Vec<Mask>> {
    let lats: Vec<Vec<Mask>> = sorts.iter().map(|&s| pol.stable(s)).collect();
    let dims: Vec<usize> = lats.iter().map(Vec::len).collect();
    tuples(&dims)
        .into_iter()
        .map(|t| t.iter().enumerate().map(|(j, &i)| lats[j][i]).collect())
        .collect()
}
