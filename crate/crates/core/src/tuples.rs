//! Mixed-radix encoding of fixed-length index tuples.
//!
//! Tuples are little-endian: the first coordinate varies fastest.

pub fn tuple_count(dims: &[usize]) -> usize {
    dims.iter().product()
}

pub fn encode(dims: &[usize], tuple: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), tuple.len());
    let mut index = 0;
    for (&d, &t) in dims.iter().zip(tuple).rev() {
        debug_assert!(t < d);
        index = index * d + t;
    }
    index
}

pub fn decode(dims: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    for &d in dims {
        out.push(index % d);
        index /= d;
    }
    out
}

/// Every tuple over `dims`, in encoding order.
pub fn all_tuples(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..tuple_count(dims)).map(move |i| decode(dims, i))
}

/// Cartesian product of the given member lists, in the same little-endian
/// order as [`all_tuples`].
pub fn product(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(choices.len())];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for &o in options {
            for prefix in &out {
                let mut t = prefix.clone();
                t.push(o);
                next.push(t);
            }
        }
        out = next;
    }
    // Reorder so the first coordinate varies fastest.
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}
