//! Finite bounded lattices, their filters and ideals, normal operators with
//! distribution types, and homomorphisms of normal lattice expansions.
//!
//! Elements are opaque string ids. Internally every element is a dense
//! index in document order, and all enumerations are emitted in index
//! order so output is reproducible.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::tuples;

/// One of the two sorts of a polarity. On the algebra side `One` marks an
/// argument (or result) read in `L`, `Dual` one read in the opposite lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    One,
    Dual,
}

impl Sort {
    pub fn flip(self) -> Sort {
        match self {
            Sort::One => Sort::Dual,
            Sort::Dual => Sort::One,
        }
    }

    /// Document tag: `"1"` or `"d"`.
    pub fn tag(self) -> &'static str {
        match self {
            Sort::One => "1",
            Sort::Dual => "d",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Sort> {
        match tag {
            "1" => Some(Sort::One),
            "d" | "∂" => Some(Sort::Dual),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::One => "1",
            Sort::Dual => "∂",
        })
    }
}

/// `(i_1, …, i_n; i_{n+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistributionType {
    pub inputs: Vec<Sort>,
    pub output: Sort,
}

impl DistributionType {
    pub fn new(inputs: Vec<Sort>, output: Sort) -> Self {
        Self { inputs, output }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Every tag flipped; the type the same table has over the opposite lattice.
    pub fn flipped(&self) -> Self {
        Self {
            inputs: self.inputs.iter().map(|s| s.flip()).collect(),
            output: self.output.flip(),
        }
    }
}

impl fmt::Display for DistributionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(|s| s.to_string()).collect();
        write!(f, "({};{})", ins.join(","), self.output)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order is not antisymmetric: `{0}` and `{1}` lie on a cycle")]
    NotAPartialOrder(String, String),
    #[error("`{0}` and `{1}` have no {2}")]
    NotALattice(String, String, &'static str),
    #[error("the order has no global bounds")]
    NoBounds,
    #[error("operator `{name}`: {message}")]
    BadOperator { name: String, message: String },
    #[error("homomorphism: {0}")]
    BadMap(String),
}

/// A finite bounded lattice given by its full order matrix and its meet and
/// join tables.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<BitSet>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bot: usize,
    top: usize,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("elements", &self.elements)
            .field("bot", &self.elements[self.bot])
            .field("top", &self.elements[self.top])
            .finish()
    }
}

impl Lattice {
    /// Builds a lattice from element ids and arbitrary order pairs `(a, b)`
    /// meaning `a ≤ b`. The reflexive-transitive closure of the pairs is taken.
    pub fn from_order(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = elements.len();
        if n == 0 {
            return Err(OrderError::NoBounds);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(OrderError::DuplicateElement(e.clone()));
            }
        }
        let mut leq: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(OrderError::UnknownElement(format!("#{}", a.max(b))));
            }
            leq[a].insert(b);
        }
        // Warshall closure over rows.
        for k in 0..n {
            let row_k = leq[k].clone();
            for row in leq.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if leq[a].contains(b) && leq[b].contains(a) {
                    return Err(OrderError::NotAPartialOrder(elements[a].clone(), elements[b].clone()));
                }
            }
        }
        let below: Vec<BitSet> = (0..n)
            .map(|b| BitSet::from_indices(n, (0..n).filter(|&a| leq[a].contains(b))))
            .collect();

        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower = below[a].intersection(&below[b]);
                let m = lower
                    .iter()
                    .find(|&c| lower.is_subset(&below[c]))
                    .ok_or_else(|| OrderError::NotALattice(elements[a].clone(), elements[b].clone(), "meet"))?;
                let upper = leq[a].intersection(&leq[b]);
                let j = upper
                    .iter()
                    .find(|&c| upper.is_subset(&leq[c]))
                    .ok_or_else(|| OrderError::NotALattice(elements[a].clone(), elements[b].clone(), "join"))?;
                meet[a][b] = m;
                meet[b][a] = m;
                join[a][b] = j;
                join[b][a] = j;
            }
        }
        let bot = (0..n).find(|&c| leq[c].is_full()).ok_or(OrderError::NoBounds)?;
        let top = (0..n).find(|&c| below[c].is_full()).ok_or(OrderError::NoBounds)?;
        Ok(Self {
            elements,
            index,
            leq,
            meet,
            join,
            bot,
            top,
        })
    }

    /// Convenience constructor over string ids.
    pub fn from_names(elements: &[&str], pairs: &[(&str, &str)]) -> Result<Self, OrderError> {
        let elements: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let lookup = |s: &str| {
            elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| OrderError::UnknownElement(s.to_string()))
        };
        let pairs = pairs
            .iter()
            .map(|&(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, OrderError>>()?;
        Self::from_order(elements, &pairs)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a].contains(b)
    }

    /// `↑a` as a set of element indices.
    pub fn up(&self, a: usize) -> &BitSet {
        &self.leq[a]
    }

    /// `↓a` as a set of element indices.
    pub fn down(&self, a: usize) -> BitSet {
        BitSet::from_indices(self.len(), (0..self.len()).filter(|&c| self.leq(c, a)))
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, a| self.meet(acc, a))
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bot, |acc, a| self.join(acc, a))
    }

    /// Join in `L` for sort `One`, join in `L^∂` (meet of `L`) for `Dual`.
    pub fn sorted_join(&self, sort: Sort, a: usize, b: usize) -> usize {
        match sort {
            Sort::One => self.join(a, b),
            Sort::Dual => self.meet(a, b),
        }
    }

    /// Least element of `L^i`.
    pub fn sorted_bot(&self, sort: Sort) -> usize {
        match sort {
            Sort::One => self.bot,
            Sort::Dual => self.top,
        }
    }

    /// Order of `L^i`.
    pub fn sorted_leq(&self, sort: Sort, a: usize, b: usize) -> bool {
        match sort {
            Sort::One => self.leq(a, b),
            Sort::Dual => self.leq(b, a),
        }
    }

    /// Order pairs `a < b` where `b` covers `a`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// The opposite lattice: order reversed, meet and join swapped, bounds swapped.
pub fn opposite(lattice: &Lattice) -> Lattice {
    let n = lattice.len();
    let leq: Vec<BitSet> = (0..n).map(|a| lattice.down(a)).collect();
    Lattice {
        elements: lattice.elements.clone(),
        index: lattice.index.clone(),
        leq,
        meet: lattice.join.clone(),
        join: lattice.meet.clone(),
        bot: lattice.top,
        top: lattice.bot,
    }
}

/// An n-ary operation given extensionally, tagged with its distribution type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalOperator {
    pub name: String,
    pub dtype: DistributionType,
    /// Indexed by [`tuples::encode`] over `[|L|; n]`.
    table: Vec<usize>,
    size: usize,
}

impl NormalOperator {
    pub fn new(
        name: impl Into<String>,
        dtype: DistributionType,
        lattice_size: usize,
        table: Vec<usize>,
    ) -> Result<Self, OrderError> {
        let name = name.into();
        if dtype.arity() == 0 {
            return Err(OrderError::BadOperator {
                name,
                message: "arity must be at least 1".into(),
            });
        }
        let expected = lattice_size.pow(dtype.arity() as u32);
        if table.len() != expected {
            return Err(OrderError::BadOperator {
                name,
                message: format!("table has {} entries, expected {expected}", table.len()),
            });
        }
        if let Some(bad) = table.iter().find(|&&v| v >= lattice_size) {
            return Err(OrderError::BadOperator {
                name,
                message: format!("value #{bad} is not an element"),
            });
        }
        Ok(Self {
            name,
            dtype,
            table,
            size: lattice_size,
        })
    }

    /// Tabulates `f` over every argument tuple.
    pub fn from_fn(
        name: impl Into<String>,
        dtype: DistributionType,
        lattice_size: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self, OrderError> {
        let dims = vec![lattice_size; dtype.arity()];
        let table = tuples::all_tuples(&dims).map(|t| f(&t)).collect();
        Self::new(name, dtype, lattice_size, table)
    }

    pub fn arity(&self) -> usize {
        self.dtype.arity()
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.size; self.arity()]
    }

    pub fn apply(&self, args: &[usize]) -> usize {
        self.table[tuples::encode(&self.dims(), args)]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

/// A normal lattice expansion: a lattice plus a (possibly empty) list of
/// normal operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nle {
    pub name: String,
    pub lattice: Lattice,
    pub operators: Vec<NormalOperator>,
}

impl Nle {
    pub fn new(name: impl Into<String>, lattice: Lattice, operators: Vec<NormalOperator>) -> Self {
        Self {
            name: name.into(),
            lattice,
            operators,
        }
    }

    pub fn similarity_type(&self) -> Vec<DistributionType> {
        self.operators.iter().map(|f| f.dtype.clone()).collect()
    }

    pub fn operator(&self, name: &str) -> Option<&NormalOperator> {
        self.operators.iter().find(|f| f.name == name)
    }
}

/// One failed distribution instance of [`validate_normal_operator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityViolation {
    /// Zero-based argument place.
    pub place: usize,
    /// The argument tuple; the entry at `place` is the sorted join of `pair`
    /// (or the sorted bottom when `pair` is `None`).
    pub args: Vec<usize>,
    pub pair: Option<(usize, usize)>,
    /// `f(args)`.
    pub lhs: usize,
    /// The sorted join of the two separate values, or the sorted bottom.
    pub rhs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalityReport {
    pub violations: Vec<NormalityViolation>,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Brute-force check that `f` distributes over finite joins of `L^{i_j}` in
/// every place, delivering joins of `L^{i_{n+1}}`. Finite joins include the
/// empty one, so each place must also send the sorted bottom to the sorted
/// bottom.
pub fn validate_normal_operator(lattice: &Lattice, f: &NormalOperator) -> NormalityReport {
    let n = lattice.len();
    let out_sort = f.dtype.output;
    let mut violations = Vec::new();
    let rest_dims = vec![n; f.arity().saturating_sub(1)];
    for place in 0..f.arity() {
        let in_sort = f.dtype.inputs[place];
        for rest in tuples::all_tuples(&rest_dims) {
            let with = |v: usize| {
                let mut t = rest.clone();
                t.insert(place, v);
                t
            };
            let bottom_args = with(lattice.sorted_bot(in_sort));
            let lhs = f.apply(&bottom_args);
            let rhs = lattice.sorted_bot(out_sort);
            if lhs != rhs {
                violations.push(NormalityViolation {
                    place,
                    args: bottom_args,
                    pair: None,
                    lhs,
                    rhs,
                });
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    let args = with(lattice.sorted_join(in_sort, a, b));
                    let lhs = f.apply(&args);
                    let rhs = lattice.sorted_join(out_sort, f.apply(&with(a)), f.apply(&with(b)));
                    if lhs != rhs {
                        violations.push(NormalityViolation {
                            place,
                            args,
                            pair: Some((a, b)),
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    NormalityReport { violations }
}

/// A filter of a finite lattice, recorded with its principal generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filter {
    pub carrier: BitSet,
    pub generator: usize,
}

/// An ideal of a finite lattice, recorded with its principal generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub carrier: BitSet,
    pub generator: usize,
}

pub fn is_filter(lattice: &Lattice, set: &BitSet) -> bool {
    !set.is_empty()
        && set.iter().all(|a| lattice.up(a).is_subset(set))
        && set.iter().all(|a| set.iter().all(|b| set.contains(lattice.meet(a, b))))
}

pub fn is_ideal(lattice: &Lattice, set: &BitSet) -> bool {
    !set.is_empty()
        && set.iter().all(|a| lattice.down(a).is_subset(set))
        && set.iter().all(|a| set.iter().all(|b| set.contains(lattice.join(a, b))))
}

/// Every filter of a finite lattice, including the improper filter `↑0 = L`,
/// ordered by principal generator.
pub fn filters(lattice: &Lattice) -> Vec<Filter> {
    (0..lattice.len())
        .map(|a| Filter {
            carrier: lattice.up(a).clone(),
            generator: a,
        })
        .collect()
}

/// Every ideal of a finite lattice, including `↓1 = L`, ordered by generator.
pub fn ideals(lattice: &Lattice) -> Vec<Ideal> {
    (0..lattice.len())
        .map(|a| Ideal {
            carrier: lattice.down(a),
            generator: a,
        })
        .collect()
}

/// Least filter containing `set`; `{1}` when `set` is empty.
pub fn filter_generated(lattice: &Lattice, set: &BitSet) -> Filter {
    let generator = lattice.meet_all(set.iter());
    Filter {
        carrier: lattice.up(generator).clone(),
        generator,
    }
}

/// Least ideal containing `set`; `{0}` when `set` is empty.
pub fn ideal_generated(lattice: &Lattice, set: &BitSet) -> Ideal {
    let generator = lattice.join_all(set.iter());
    Ideal {
        carrier: lattice.down(generator),
        generator,
    }
}

/// A map between normal lattice expansions of the same similarity type.
#[derive(Clone, Debug)]
pub struct LatticeHomomorphism {
    pub source: Nle,
    pub target: Nle,
    pub map: Vec<usize>,
}

impl LatticeHomomorphism {
    pub fn new(source: Nle, target: Nle, map: Vec<usize>) -> Result<Self, OrderError> {
        if map.len() != source.lattice.len() {
            return Err(OrderError::BadMap(format!(
                "map has {} entries for {} source elements",
                map.len(),
                source.lattice.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.lattice.len()) {
            return Err(OrderError::BadMap(format!("value #{bad} is not a target element")));
        }
        Ok(Self { source, target, map })
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn identity(nle: &Nle) -> Self {
        Self {
            source: nle.clone(),
            target: nle.clone(),
            map: (0..nle.lattice.len()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LatticeHomomorphism) -> Result<Self, OrderError> {
        if self.target.lattice != other.source.lattice {
            return Err(OrderError::BadMap("composition through different lattices".into()));
        }
        Ok(Self {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomFailure {
    SimilarityMismatch,
    Meet {
        a: usize,
        b: usize,
        lhs: usize,
        rhs: usize,
    },
    Join {
        a: usize,
        b: usize,
        lhs: usize,
        rhs: usize,
    },
    Bottom {
        image: usize,
    },
    Top {
        image: usize,
    },
    Operator {
        operator: String,
        args: Vec<usize>,
        lhs: usize,
        rhs: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomReport {
    pub failures: Vec<HomFailure>,
}

impl HomReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_homomorphism(h: &LatticeHomomorphism) -> HomReport {
    let src = &h.source.lattice;
    let tgt = &h.target.lattice;
    let mut failures = Vec::new();
    if h.source.similarity_type() != h.target.similarity_type() {
        failures.push(HomFailure::SimilarityMismatch);
        return HomReport { failures };
    }
    for a in 0..src.len() {
        for b in a..src.len() {
            let lhs = h.apply(src.meet(a, b));
            let rhs = tgt.meet(h.apply(a), h.apply(b));
            if lhs != rhs {
                failures.push(HomFailure::Meet { a, b, lhs, rhs });
            }
            let lhs = h.apply(src.join(a, b));
            let rhs = tgt.join(h.apply(a), h.apply(b));
            if lhs != rhs {
                failures.push(HomFailure::Join { a, b, lhs, rhs });
            }
        }
    }
    if h.apply(src.bot()) != tgt.bot() {
        failures.push(HomFailure::Bottom {
            image: h.apply(src.bot()),
        });
    }
    if h.apply(src.top()) != tgt.top() {
        failures.push(HomFailure::Top {
            image: h.apply(src.top()),
        });
    }
    for (f, g) in h.source.operators.iter().zip(&h.target.operators) {
        for args in tuples::all_tuples(&f.dims()) {
            let lhs = h.apply(f.apply(&args));
            let mapped: Vec<usize> = args.iter().map(|&a| h.apply(a)).collect();
            let rhs = g.apply(&mapped);
            if lhs != rhs {
                failures.push(HomFailure::Operator {
                    operator: f.name.clone(),
                    args,
                    lhs,
                    rhs,
                });
            }
        }
    }
    HomReport { failures }
}

/// Searches for an isomorphism of normal lattice expansions: a bijection
/// preserving and reflecting the order and commuting with every operator
/// (operators matched by position). Returns the element map `a ↦ φ(a)`.
pub fn find_isomorphism(a: &Nle, b: &Nle) -> Option<Vec<usize>> {
    let la = &a.lattice;
    let lb = &b.lattice;
    if la.len() != lb.len() || a.similarity_type() != b.similarity_type() {
        return None;
    }
    let n = la.len();
    let up_count = |l: &Lattice, x: usize| l.up(x).len();
    let down_count = |l: &Lattice, x: usize| l.down(x).len();
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        i: usize,
        a: &Nle,
        b: &Nle,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        compatible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let n = a.lattice.len();
        if i == n {
            return a.operators.iter().zip(&b.operators).all(|(f, g)| {
                tuples::all_tuples(&f.dims()).all(|args| {
                    let mapped: Vec<usize> = args.iter().map(|&x| assignment[x]).collect();
                    assignment[f.apply(&args)] == g.apply(&mapped)
                })
            });
        }
        for c in 0..n {
            if used[c] || !compatible(i, c) {
                continue;
            }
            let consistent = (0..i).all(|j| {
                a.lattice.leq(i, j) == b.lattice.leq(c, assignment[j])
                    && a.lattice.leq(j, i) == b.lattice.leq(assignment[j], c)
            });
            if !consistent {
                continue;
            }
            assignment[i] = c;
            used[c] = true;
            if extend(i + 1, a, b, assignment, used, compatible) {
                return true;
            }
            used[c] = false;
            assignment[i] = usize::MAX;
        }
        false
    }

    let compatible = |x: usize, y: usize| up_count(la, x) == up_count(lb, y) && down_count(la, x) == down_count(lb, y);
    if extend(0, a, b, &mut assignment, &mut used, &compatible) {
        Some(assignment)
    } else {
        None
    }
}
