//! Polarities `(X, ⊥, Y)`: the Galois connection, the two residuated pairs
//! generated by the complement `I` of `⊥`, the induced preorders, and the
//! lattices of stable / co-stable sets.

use std::collections::HashMap;

use thiserror::Error;

use crate::bitset::{all_subsets, BitSet};
use crate::order::Sort;

/// Size guards for enumerations over a frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Upper bound on `|X|·|Y|`.
    pub max_pairs: usize,
    /// Upper bound on the size of either carrier.
    pub max_points: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_pairs: 1 << 14,
            max_points: usize::MAX,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("frame `{name}` has {x}×{y} points, over the configured limit ({detail})")]
pub struct ScaleExceeded {
    pub name: String,
    pub x: usize,
    pub y: usize,
    pub detail: String,
}

/// A subset of one carrier, tagged with the carrier's sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SortedSet {
    pub sort: Sort,
    pub members: BitSet,
}

impl SortedSet {
    pub fn new(sort: Sort, members: BitSet) -> Self {
        Self { sort, members }
    }
}

/// A polarity. `⊥` is stored both row-wise and column-wise; the preorders
/// and principal upsets `Γu` are derived once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedFrame {
    pub name: String,
    x_names: Vec<String>,
    y_names: Vec<String>,
    // x ↦ {x}⊥ and y ↦ ⊥{y}
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
    // u ↦ Γu
    x_up: Vec<BitSet>,
    y_up: Vec<BitSet>,
}

impl SortedFrame {
    pub fn new(name: impl Into<String>, x_names: Vec<String>, y_names: Vec<String>, gal: &[(usize, usize)]) -> Self {
        let (nx, ny) = (x_names.len(), y_names.len());
        let mut rows = vec![BitSet::empty(ny); nx];
        for &(x, y) in gal {
            rows[x].insert(y);
        }
        Self::from_rows(name, x_names, y_names, rows)
    }

    pub fn from_fn(
        name: impl Into<String>,
        x_names: Vec<String>,
        y_names: Vec<String>,
        perp: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let ny = y_names.len();
        let rows = (0..x_names.len())
            .map(|x| BitSet::from_indices(ny, (0..ny).filter(|&y| perp(x, y))))
            .collect();
        Self::from_rows(name, x_names, y_names, rows)
    }

    fn from_rows(name: impl Into<String>, x_names: Vec<String>, y_names: Vec<String>, rows: Vec<BitSet>) -> Self {
        let (nx, ny) = (x_names.len(), y_names.len());
        let cols: Vec<BitSet> = (0..ny)
            .map(|y| BitSet::from_indices(nx, (0..nx).filter(|&x| rows[x].contains(y))))
            .collect();
        let x_up = (0..nx)
            .map(|x| BitSet::from_indices(nx, (0..nx).filter(|&z| rows[x].is_subset(&rows[z]))))
            .collect();
        let y_up = (0..ny)
            .map(|y| BitSet::from_indices(ny, (0..ny).filter(|&v| cols[y].is_subset(&cols[v]))))
            .collect();
        Self {
            name: name.into(),
            x_names,
            y_names,
            rows,
            cols,
            x_up,
            y_up,
        }
    }

    pub fn len(&self, sort: Sort) -> usize {
        match sort {
            Sort::One => self.x_names.len(),
            Sort::Dual => self.y_names.len(),
        }
    }

    pub fn names(&self, sort: Sort) -> &[String] {
        match sort {
            Sort::One => &self.x_names,
            Sort::Dual => &self.y_names,
        }
    }

    pub fn point_name(&self, sort: Sort, u: usize) -> &str {
        &self.names(sort)[u]
    }

    pub fn point_index(&self, sort: Sort, name: &str) -> Option<usize> {
        self.names(sort).iter().position(|n| n == name)
    }

    pub fn names_of(&self, sort: Sort, set: &BitSet) -> Vec<String> {
        set.iter().map(|u| self.point_name(sort, u).to_string()).collect()
    }

    pub fn empty(&self, sort: Sort) -> BitSet {
        BitSet::empty(self.len(sort))
    }

    pub fn full(&self, sort: Sort) -> BitSet {
        BitSet::full(self.len(sort))
    }

    pub fn perp(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    /// `xIy`, the complement of `⊥`.
    pub fn related(&self, x: usize, y: usize) -> bool {
        !self.perp(x, y)
    }

    /// Every `(x, y)` with `x ⊥ y`, row-major.
    pub fn gal_pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |y| (x, y)))
            .collect()
    }

    /// `{u}′`: `{x}⊥` for `x ∈ X`, `⊥{y}` for `y ∈ Y`.
    pub fn point_prime(&self, sort: Sort, u: usize) -> &BitSet {
        match sort {
            Sort::One => &self.rows[u],
            Sort::Dual => &self.cols[u],
        }
    }

    /// The Galois map on a set of the given sort: `U⊥` or `⊥V`.
    pub fn prime(&self, sort: Sort, set: &BitSet) -> BitSet {
        let mut out = self.full(sort.flip());
        for u in set.iter() {
            out.intersect_with(self.point_prime(sort, u));
        }
        out
    }

    pub fn galois_map(&self, set: &SortedSet) -> SortedSet {
        SortedSet::new(set.sort.flip(), self.prime(set.sort, &set.members))
    }

    /// `U″`.
    pub fn closure(&self, sort: Sort, set: &BitSet) -> BitSet {
        self.prime(sort.flip(), &self.prime(sort, set))
    }

    pub fn is_galois(&self, sort: Sort, set: &BitSet) -> bool {
        &self.closure(sort, set) == set
    }

    /// `◇U = {y : ∃x ∈ U, xIy}` for `U ⊆ X`.
    pub fn diamond(&self, u: &BitSet) -> BitSet {
        let mut out = self.empty(Sort::Dual);
        for x in u.iter() {
            out.union_with(&self.rows[x].complement());
        }
        out
    }

    /// `□V = {x : ∀y, xIy → y ∈ V}` for `V ⊆ Y`.
    pub fn boxx(&self, v: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.len(Sort::One),
            (0..self.len(Sort::One)).filter(|&x| self.rows[x].complement().is_subset(v)),
        )
    }

    /// `◆V = {x : ∃y ∈ V, xIy}` for `V ⊆ Y`.
    pub fn black_diamond(&self, v: &BitSet) -> BitSet {
        let mut out = self.empty(Sort::One);
        for y in v.iter() {
            out.union_with(&self.cols[y].complement());
        }
        out
    }

    /// `■U = {y : ∀x, xIy → x ∈ U}` for `U ⊆ X`.
    pub fn black_box(&self, u: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.len(Sort::Dual),
            (0..self.len(Sort::Dual)).filter(|&y| self.cols[y].complement().is_subset(u)),
        )
    }

    /// `u ≼ w` within one sort.
    pub fn leq(&self, sort: Sort, u: usize, w: usize) -> bool {
        self.upper(sort, u).contains(w)
    }

    /// `Γu`.
    pub fn upper(&self, sort: Sort, u: usize) -> &BitSet {
        match sort {
            Sort::One => &self.x_up[u],
            Sort::Dual => &self.y_up[u],
        }
    }

    /// `ΓU`.
    pub fn upper_set(&self, sort: Sort, set: &BitSet) -> BitSet {
        let mut out = self.empty(sort);
        for u in set.iter() {
            out.union_with(self.upper(sort, u));
        }
        out
    }

    pub fn is_increasing(&self, sort: Sort, set: &BitSet) -> bool {
        &self.upper_set(sort, set) == set
    }

    /// The preorder matrix of one sort, as rows `u ↦ Γu`.
    pub fn sort_preorder(&self, sort: Sort) -> &[BitSet] {
        match sort {
            Sort::One => &self.x_up,
            Sort::Dual => &self.y_up,
        }
    }

    /// First pair of distinct points `u ≼ w ≼ u` of the sort, if any.
    pub fn separation_witness(&self, sort: Sort) -> Option<(usize, usize)> {
        let n = self.len(sort);
        (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |w| (u, w)))
            .find(|&(u, w)| self.leq(sort, u, w) && self.leq(sort, w, u))
    }

    pub fn check_separated(&self) -> bool {
        self.separation_witness(Sort::One).is_none() && self.separation_witness(Sort::Dual).is_none()
    }

    /// Some `w` with `Γw = set`; the least index if the frame is not separated.
    pub fn closed_generator(&self, sort: Sort, set: &BitSet) -> Option<usize> {
        (0..self.len(sort)).find(|&w| self.upper(sort, w) == set)
    }

    /// Some `v` of the opposite sort with `{v}′ = set`.
    pub fn open_generator(&self, sort: Sort, set: &BitSet) -> Option<usize> {
        let other = sort.flip();
        (0..self.len(other)).find(|&v| self.point_prime(other, v) == set)
    }

    pub fn check_limits(&self, limits: &Limits) -> Result<(), ScaleExceeded> {
        let (x, y) = (self.len(Sort::One), self.len(Sort::Dual));
        let err = |detail: String| ScaleExceeded {
            name: self.name.clone(),
            x,
            y,
            detail,
        };
        if x.saturating_mul(y) > limits.max_pairs {
            return Err(err(format!("at most {} pairs", limits.max_pairs)));
        }
        if x.max(y) > limits.max_points {
            return Err(err(format!("at most {} points per sort", limits.max_points)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Clopen,
    Closed,
    Open,
    Other,
}

impl Kind {
    pub fn is_closed(self) -> bool {
        matches!(self, Kind::Clopen | Kind::Closed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Clopen => "clopen",
            Kind::Closed => "closed",
            Kind::Open => "open",
            Kind::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisSet {
    pub members: BitSet,
    pub kind: Kind,
    /// `u` with `Γu = members`.
    pub generator: Option<usize>,
    /// `v` of the opposite sort with `{v}′ = members`.
    pub cogenerator: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Closure of every subset of the carrier.
    BruteForce,
    /// Ganter's NextClosure in lectic order.
    Lectic,
    /// Brute force on small carriers, lectic otherwise.
    Auto,
}

/// All Galois sets of one sort, in canonical order (cardinality, then
/// members), each classified as closed / open / clopen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisSetLattice {
    pub sort: Sort,
    pub sets: Vec<GaloisSet>,
    index: HashMap<BitSet, usize>,
}

impl GaloisSetLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn members(&self, i: usize) -> &BitSet {
        &self.sets[i].members
    }

    pub fn index_of(&self, set: &BitSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn contains(&self, set: &BitSet) -> bool {
        self.index.contains_key(set)
    }

    pub fn clopens(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.sets[i].kind == Kind::Clopen).collect()
    }

    pub fn closed(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.sets[i].kind.is_closed()).collect()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.members(a).intersection(self.members(b))]
    }

    pub fn join(&self, frame: &SortedFrame, a: usize, b: usize) -> usize {
        self.index[&frame.closure(self.sort, &self.members(a).union(self.members(b)))]
    }
}

fn next_closure(frame: &SortedFrame, sort: Sort, current: &BitSet) -> Option<BitSet> {
    let n = frame.len(sort);
    let mut a = current.clone();
    for i in (0..n).rev() {
        if a.contains(i) {
            a.remove(i);
        } else {
            let mut seed = a.clone();
            seed.insert(i);
            let b = frame.closure(sort, &seed);
            let mut added = b.clone();
            added.difference_with(&a);
            if added.first() == Some(i) {
                return Some(b);
            }
        }
    }
    None
}

fn lectic_sets(frame: &SortedFrame, sort: Sort) -> Vec<BitSet> {
    let mut out = vec![frame.closure(sort, &frame.empty(sort))];
    while let Some(next) = next_closure(frame, sort, out.last().unwrap()) {
        out.push(next);
    }
    out
}

fn brute_force_sets(frame: &SortedFrame, sort: Sort) -> Vec<BitSet> {
    let mut seen = std::collections::HashSet::new();
    all_subsets(frame.len(sort))
        .map(|s| frame.closure(sort, &s))
        .filter(|c| seen.insert(c.clone()))
        .collect()
}

const BRUTE_FORCE_MAX: usize = 16;

pub fn enumerate_galois_sets(
    frame: &SortedFrame,
    sort: Sort,
    method: Enumeration,
    limits: &Limits,
) -> Result<GaloisSetLattice, ScaleExceeded> {
    frame.check_limits(limits)?;
    let brute = match method {
        Enumeration::BruteForce => true,
        Enumeration::Lectic => false,
        Enumeration::Auto => frame.len(sort) <= BRUTE_FORCE_MAX,
    };
    if brute && frame.len(sort) >= 63 {
        return Err(ScaleExceeded {
            name: frame.name.clone(),
            x: frame.len(Sort::One),
            y: frame.len(Sort::Dual),
            detail: "powerset enumeration needs fewer than 63 points".into(),
        });
    }
    let mut raw = if brute {
        brute_force_sets(frame, sort)
    } else {
        lectic_sets(frame, sort)
    };
    raw.sort_by(|a, b| a.canonical_cmp(b));
    let sets: Vec<GaloisSet> = raw
        .into_iter()
        .map(|members| {
            let generator = frame.closed_generator(sort, &members);
            let cogenerator = frame.open_generator(sort, &members);
            let kind = match (generator.is_some(), cogenerator.is_some()) {
                (true, true) => Kind::Clopen,
                (true, false) => Kind::Closed,
                (false, true) => Kind::Open,
                (false, false) => Kind::Other,
            };
            GaloisSet {
                members,
                kind,
                generator,
                cogenerator,
            }
        })
        .collect();
    let index = sets.iter().enumerate().map(|(i, g)| (g.members.clone(), i)).collect();
    Ok(GaloisSetLattice { sort, sets, index })
}

/// Both Galois-set lattices of a frame.
#[derive(Clone, Debug)]
pub struct DualAlgebra<'a> {
    pub frame: &'a SortedFrame,
    pub stable: GaloisSetLattice,
    pub costable: GaloisSetLattice,
}

impl<'a> DualAlgebra<'a> {
    pub fn new(frame: &'a SortedFrame, limits: &Limits) -> Result<Self, ScaleExceeded> {
        Ok(Self {
            frame,
            stable: enumerate_galois_sets(frame, Sort::One, Enumeration::Auto, limits)?,
            costable: enumerate_galois_sets(frame, Sort::Dual, Enumeration::Auto, limits)?,
        })
    }

    pub fn lattice(&self, sort: Sort) -> &GaloisSetLattice {
        match sort {
            Sort::One => &self.stable,
            Sort::Dual => &self.costable,
        }
    }
}
