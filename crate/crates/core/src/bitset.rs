//! Fixed-domain dense bitsets over point indices.

use std::fmt;

const WORD: usize = u64::BITS as usize;

/// A subset of `0..domain` stored as packed 64-bit words.
///
/// Bits past `domain` in the last word are always zero, so derived
/// equality and hashing agree with set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    domain: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn empty(domain: usize) -> Self {
        Self {
            domain,
            words: vec![0; domain.div_ceil(WORD)],
        }
    }

    pub fn full(domain: usize) -> Self {
        let mut set = Self::empty(domain);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    pub fn from_indices(domain: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(domain);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// The subset of `0..domain` whose members are the set bits of `mask`.
    pub fn from_mask(domain: usize, mask: u64) -> Self {
        assert!(domain <= WORD, "mask constructor needs domain <= 64");
        let mut set = Self::empty(domain);
        if domain > 0 {
            set.words[0] = mask;
            set.trim();
        }
        set
    }

    fn trim(&mut self) {
        let rem = self.domain % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn contains(&self, i: usize) -> bool {
        assert!(i < self.domain, "index {i} outside domain {}", self.domain);
        self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.domain, "index {i} outside domain {}", self.domain);
        let w = &mut self.words[i / WORD];
        let before = *w;
        *w |= 1 << (i % WORD);
        *w != before
    }

    pub fn remove(&mut self, i: usize) -> bool {
        assert!(i < self.domain, "index {i} outside domain {}", self.domain);
        let w = &mut self.words[i / WORD];
        let before = *w;
        *w &= !(1 << (i % WORD));
        *w != before
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.domain
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.domain, other.domain);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.domain, other.domain);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.domain, other.domain);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.domain, other.domain);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.domain, other.domain);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn complement(&self) -> BitSet {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Ordering used for deterministic output: by cardinality, then by
    /// the sorted member list.
    pub fn canonical_cmp(&self, other: &BitSet) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// All subsets of `0..domain`, in binary counting order.
///
/// Panics if `domain` is 64 or more; callers gate on their own scale caps.
pub fn all_subsets(domain: usize) -> impl Iterator<Item = BitSet> {
    assert!(domain < WORD, "powerset enumeration over {domain} points");
    (0..(1u64 << domain)).map(move |m| BitSet::from_mask(domain, m))
}
