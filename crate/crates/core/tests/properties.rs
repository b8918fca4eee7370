//! Invariants on random small frames and lattices.

mod common;

use common::*;
use nle_frames::bitset::BitSet;
use nle_frames::canonical::canonical_frame;
use nle_frames::morphism::{dual_of_homomorphism, roundtrip_lattice};
use nle_frames::order::{validate_homomorphism, Lattice, LatticeHomomorphism, Nle, Sort};
use nle_frames::polarity::{DualAlgebra, Limits, SortedFrame};
use nle_frames::relational::{
    build_conjugate_relation, check_axioms, closed_image, conjugate, image, raw_residual, residual_forms, CheckOptions,
    FrameWithRelations, Level, SortType, SortedRelation,
};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

const MAXP: usize = 4;

fn sort(b: bool) -> Sort {
    if b {
        Sort::Dual
    } else {
        Sort::One
    }
}

#[derive(Clone, Debug)]
struct RandomFrame {
    nx: usize,
    ny: usize,
    perp: Vec<bool>,
    output: bool,
    inputs: Vec<bool>,
    bits: Vec<bool>,
}

impl RandomFrame {
    fn build(&self) -> FrameWithRelations {
        let xs = (0..self.nx).map(|i| format!("x{i}")).collect();
        let ys = (0..self.ny).map(|i| format!("y{i}")).collect();
        let frame = SortedFrame::from_fn("P", xs, ys, |x, y| self.perp[x * MAXP + y]);
        let st = SortType::new(sort(self.output), self.inputs.iter().map(|&b| sort(b)).collect());
        let out_len = frame.len(st.output);
        let r = SortedRelation::from_fn("R", st, &frame, |t| {
            let idx = t.iter().rev().fold(0, |acc, &u| acc * MAXP + u);
            BitSet::from_indices(out_len, (0..out_len).filter(|&w| self.bits[idx * MAXP + w]))
        });
        FrameWithRelations::new(frame, vec![r])
    }
}

fn random_frame() -> impl Strategy<Value = RandomFrame> {
    (
        1..=MAXP,
        1..=MAXP,
        prop::collection::vec(any::<bool>(), MAXP * MAXP),
        any::<bool>(),
        prop::collection::vec(any::<bool>(), 1..=2),
        prop::collection::vec(prop::bool::weighted(0.3), MAXP * MAXP * MAXP),
    )
        .prop_map(|(nx, ny, perp, output, inputs, bits)| RandomFrame {
            nx,
            ny,
            perp,
            output,
            inputs,
            bits,
        })
}

fn galois_tuples(alg: &DualAlgebra, sorts: &[Sort]) -> Vec<Vec<BitSet>> {
    let dims: Vec<usize> = sorts.iter().map(|&s| alg.lattice(s).len()).collect();
    tuples(&dims)
        .into_iter()
        .map(|t| {
            t.iter()
                .zip(sorts)
                .map(|(&i, &s)| alg.lattice(s).members(i).clone())
                .collect()
        })
        .collect()
}

fn fax4_holds(fr: &FrameWithRelations) -> bool {
    let checks = check_axioms(fr, Level::Base, &CheckOptions::default());
    checks.iter().any(|c| c.id == "FAx4" && c.passed())
}

/// A closure system on four points, as a lattice ordered by inclusion.
fn closure_system(seeds: &[u8]) -> Lattice {
    let mut sets: Vec<u8> = vec![0b1111];
    for &s in seeds {
        let s = s & 0b1111;
        let extra: Vec<u8> = sets.iter().map(|&t| t & s).chain([s]).collect();
        for e in extra {
            if !sets.contains(&e) {
                sets.push(e);
            }
        }
    }
    // closing under pairwise meets again until stable
    loop {
        let mut grew = false;
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                let m = sets[i] & sets[j];
                if !sets.contains(&m) {
                    sets.push(m);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    sets.sort_by_key(|s| (s.count_ones(), *s));
    let names = sets.iter().map(|s| format!("s{s:04b}")).collect();
    let mut pairs = vec![];
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if a & !b == 0 {
                pairs.push((i, j));
            }
        }
    }
    Lattice::from_order(names, &pairs).expect("closure systems are lattices")
}

/// A homomorphism onto the two-element chain through a prime filter, if
/// the lattice has one.
fn prime_filter_hom(l: &Nle, c2: &Nle) -> Option<LatticeHomomorphism> {
    let lat = &l.lattice;
    (0..lat.len()).filter(|&a| a != lat.bot()).find_map(|a| {
        let map: Vec<usize> = (0..lat.len()).map(|b| usize::from(lat.leq(a, b))).collect();
        let h = LatticeHomomorphism::new(l.clone(), c2.clone(), map).ok()?;
        validate_homomorphism(&h).is_valid().then_some(h)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn galois_connection_and_closure(s in random_frame(), u in 0u64..16, v in 0u64..16) {
        let fr = s.build();
        let f = &fr.frame;
        let (u, v) = (u & full(s.nx), v & full(s.ny));
        let (ub, vb) = (to_bitset(u, s.nx), to_bitset(v, s.ny));
        let up = f.prime(Sort::One, &ub);
        let vp = f.prime(Sort::Dual, &vb);
        prop_assert_eq!(ub.is_subset(&vp), vb.is_subset(&up));
        let c = f.closure(Sort::One, &ub);
        prop_assert!(ub.is_subset(&c));
        prop_assert_eq!(f.closure(Sort::One, &c), c.clone());
        prop_assert_eq!(f.prime(Sort::One, &c), up);
        prop_assert!(f.is_galois(Sort::Dual, &f.prime(Sort::One, &ub)));
    }

    #[test]
    fn residual_forms_agree(s in random_frame()) {
        let fr = s.build();
        let r = &fr.relations[0];
        let alg = DualAlgebra::new(&fr.frame, &Limits::default()).unwrap();
        for k in 0..r.arity() {
            for args in galois_tuples(&alg, &r.sort.inputs) {
                for g in &alg.lattice(r.sort.output).sets {
                    let [a, b, c] = residual_forms(&alg, r, k, &args, &g.members).unwrap();
                    prop_assert_eq!(&a, &b);
                    prop_assert_eq!(&b, &c);
                }
            }
        }
    }

    #[test]
    fn raw_residuation(s in random_frame(), ws in prop::collection::vec(0u64..16, 2), u in 0u64..16) {
        let fr = s.build();
        let r = &fr.relations[0];
        let f = &fr.frame;
        let sets: Vec<BitSet> = r.sort.inputs.iter().zip(&ws)
            .map(|(&st, &w)| to_bitset(w & full(f.len(st)), f.len(st)))
            .collect();
        let ob = to_bitset(u & full(f.len(r.sort.output)), f.len(r.sort.output));
        for k in 0..r.arity() {
            let beta = raw_residual(r, k, &sets, &ob);
            prop_assert_eq!(image(r, &sets).is_subset(&ob), sets[k].is_subset(&beta));
        }
    }

    #[test]
    fn coherence_never_breaks_and_fax4_gives_distribution(s in random_frame()) {
        let fr = s.build();
        let checks = check_axioms(&fr, Level::Base, &CheckOptions::default());
        let fax4 = checks.iter().any(|c| c.id == "FAx4" && c.passed());
        for c in &checks {
            let base = c.id.split(':').next().unwrap();
            if base == "residual-forms" || base == "conjugate-residual-coherence" {
                prop_assert!(!c.failed(), "{:?}", c);
            }
            if fax4 && (base == "distribution" || base == "residuation") {
                prop_assert!(!c.failed(), "{:?}", c);
            }
        }
    }

    #[test]
    fn conjugate_relation_is_a_conjugate(s in random_frame()) {
        let fr = s.build();
        let r = &fr.relations[0];
        let fax4 = fax4_holds(&fr);
        let alg = DualAlgebra::new(&fr.frame, &Limits::default()).unwrap();
        for k in 0..r.arity() {
            let built = build_conjugate_relation(&fr.frame, r, k);
            if !fax4 {
                continue;
            }
            let sr = built.unwrap();
            for sets in galois_tuples(&alg, &sr.sort.inputs) {
                let via_s = closed_image(&fr.frame, &sr, &sets).unwrap();
                let direct = conjugate(&alg, r, k, &sets).unwrap();
                prop_assert_eq!(via_s, direct);
            }
        }
    }

    #[test]
    fn conjugate_relation_needs_fax4(s in random_frame()) {
        let fr = s.build();
        let r = &fr.relations[0];
        let all_built = (0..r.arity()).all(|k| build_conjugate_relation(&fr.frame, r, k).is_ok());
        prop_assert_eq!(all_built, fax4_holds(&fr));
    }

    #[test]
    fn lattice_is_its_double_dual(seeds in prop::collection::vec(any::<u8>(), 0..5)) {
        let nle = Nle::new("L", closure_system(&seeds), vec![]);
        let (checks, iso) = roundtrip_lattice(&nle, &Limits::default());
        prop_assert!(iso);
        prop_assert!(checks.iter().all(|c| !c.failed()));
        let pol = Pol::of(canonical_frame(&nle).sorted_frame());
        prop_assert_eq!(pol.stable(Sort::One).len(), nle.lattice.len());
        prop_assert_eq!(pol.stable(Sort::Dual).len(), nle.lattice.len());
    }

    #[test]
    fn dual_is_contravariant(seeds in prop::collection::vec(any::<u8>(), 0..5)) {
        let c2 = nle_frames::fixtures::c2();
        let l = Nle::new("L", closure_system(&seeds), vec![]);
        let bounds: Vec<usize> = vec![l.lattice.bot(), l.lattice.top()];
        let g = LatticeHomomorphism::new(c2.clone(), l.clone(), bounds).unwrap();
        prop_assert!(validate_homomorphism(&g).is_valid());
        let h = prime_filter_hom(&l, &c2).unwrap_or_else(|| LatticeHomomorphism::identity(&l));
        // h ∘ g, then the dual
        let hg = g.then(&h).unwrap();
        let d_hg = dual_of_homomorphism(&hg).unwrap().morphism;
        let d_g = dual_of_homomorphism(&g).unwrap().morphism;
        let d_h = dual_of_homomorphism(&h).unwrap().morphism;
        let composed = d_g.after(&d_h).unwrap();
        prop_assert_eq!(&composed.p, &d_hg.p);
        prop_assert_eq!(&composed.q, &d_hg.q);
        // and the identity goes to the identity
        let id = dual_of_homomorphism(&LatticeHomomorphism::identity(&l)).unwrap().morphism;
        prop_assert_eq!(id.p, (0..l.lattice.len()).collect::<Vec<_>>());
    }
}

#[test]
fn some_random_frames_satisfy_fax4() {
    // keep the conditional properties above from being vacuous
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = random_frame();
    let hits = (0..200)
        .filter(|_| fax4_holds(&strategy.new_tree(&mut runner).unwrap().current().build()))
        .count();
    assert!(hits >= 10, "only {hits} of 200 frames satisfy FAx4");
}
