//! Small lattices, expansions and frames used by the tests, the acceptance
//! suite and the bundled example documents.

use crate::bitset::BitSet;
use crate::canonical::canonical_frame;
use crate::order::{DistributionType, Lattice, LatticeHomomorphism, Nle, NormalOperator, Sort};
use crate::relational::{FrameWithRelations, SortedRelation};

fn lattice(elements: &[&str], covers: &[(&str, &str)]) -> Lattice {
    Lattice::from_names(elements, covers).expect("fixture lattice")
}

fn bare(name: &str, l: Lattice) -> Nle {
    Nle::new(name, l, vec![])
}

pub fn c2() -> Nle {
    bare("C2", lattice(&["0", "1"], &[("0", "1")]))
}

pub fn c3() -> Nle {
    bare("C3", lattice(&["0", "e", "1"], &[("0", "e"), ("e", "1")]))
}

pub fn m3() -> Nle {
    bare(
        "M3",
        lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        ),
    )
}

pub fn n5() -> Nle {
    bare(
        "N5",
        lattice(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        ),
    )
}

pub fn b4() -> Nle {
    bare(
        "B4",
        lattice(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]),
    )
}

pub fn one_point() -> Nle {
    bare("One", lattice(&["0"], &[]))
}

/// The three-element Gödel chain with fusion `∘ = ∧` of type `(1,1;1)` and
/// implication of type `(1,∂;∂)`.
pub fn g3() -> Nle {
    let l = lattice(&["0", "e", "1"], &[("0", "e"), ("e", "1")]);
    let prod = NormalOperator::from_fn(
        "prod",
        DistributionType::new(vec![Sort::One, Sort::One], Sort::One),
        3,
        |t| l.meet(t[0], t[1]),
    )
    .unwrap();
    let top = l.top();
    let imp = NormalOperator::from_fn(
        "imp",
        DistributionType::new(vec![Sort::One, Sort::Dual], Sort::Dual),
        3,
        |t| if l.leq(t[0], t[1]) { top } else { t[1] },
    )
    .unwrap();
    Nle::new("G3", l, vec![prod, imp])
}

pub fn c2_identity() -> Nle {
    let l = c2().lattice;
    let id = NormalOperator::from_fn("id", DistributionType::new(vec![Sort::One], Sort::One), 2, |t| t[0]).unwrap();
    Nle::new("C2-id", l, vec![id])
}

/// Boolean negation declared as a join-preserving `(1;1)` operator, which
/// it is not.
pub fn c2_negation() -> Nle {
    let l = c2().lattice;
    let neg = NormalOperator::from_fn("neg", DistributionType::new(vec![Sort::One], Sort::One), 2, |t| {
        1 - t[0]
    })
    .unwrap();
    Nle::new("C2-neg", l, vec![neg])
}

/// The standard lattices plus G3.
pub fn standard() -> Vec<Nle> {
    vec![c2(), c3(), m3(), n5(), g3()]
}

/// Every fixture that carries operators, normal or not.
pub fn all_with_operators() -> Vec<Nle> {
    vec![g3(), c2_identity(), c2_negation()]
}

/// `0 ↦ 0, e ↦ 1, 1 ↦ 1`.
pub fn c3_to_c2() -> LatticeHomomorphism {
    let src = c3();
    let tgt = c2();
    let map = src
        .lattice
        .elements()
        .iter()
        .map(|e| tgt.lattice.index_of(if e == "0" { "0" } else { "1" }).unwrap())
        .collect();
    LatticeHomomorphism::new(src, tgt, map).unwrap()
}

/// The canonical frame of B4 with the identity relation `Ru = Γu`, except
/// that `↑1` is dropped from its own section, so `R(↑1)` is not closed.
pub fn broken_frame() -> FrameWithRelations {
    let b4 = b4();
    let id = NormalOperator::from_fn("id", DistributionType::new(vec![Sort::One], Sort::One), 4, |t| t[0]).unwrap();
    let cf = canonical_frame(&Nle::new("B4-id", b4.lattice.clone(), vec![id]));
    let frame = cf.frame.frame.clone();
    let top = frame.point_index(Sort::One, "↑1").unwrap();
    let r = &cf.frame.relations[0];
    let broken = SortedRelation::from_fn("id", r.sort.clone(), &frame, |t| {
        let mut s: BitSet = r.section(t).clone();
        if t[0] == top {
            s.remove(top);
        }
        s
    });
    let mut frame = frame;
    frame.name = "broken".into();
    FrameWithRelations::new(frame, vec![broken])
}

/// The canonical frame of C2 included into a frame with one extra point
/// `t ∈ X` that is related by `I` to every point of `Y`. MAx1 and MAx3 hold
/// for the identity-on-points map, but `t I q(↓1)` has no preimage witness,
/// so MAx2 fails. No map between canonical frames of the small chains
/// fails MAx2 alone.
pub fn max2_violation() -> crate::morphism::FrameMorphism {
    let src = canonical_frame(&c2()).frame;
    let f = &src.frame;
    let mut xs: Vec<String> = f.names(Sort::One).to_vec();
    xs.push("t".into());
    let ys: Vec<String> = f.names(Sort::Dual).to_vec();
    let tgt = crate::polarity::SortedFrame::from_fn("C2+t", xs, ys, |x, y| x < 2 && f.perp(x, y));
    crate::morphism::FrameMorphism::new(
        src.clone(),
        FrameWithRelations::new(tgt, vec![]),
        vec![0, 1],
        vec![0, 1],
    )
    .expect("well-formed map")
}
