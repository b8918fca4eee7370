//! The canonical frame of a finite normal lattice expansion: filters,
//! ideals, the canonical relations, and the representation map `ζ`.

use std::collections::HashMap;

use serde_json::json;

use crate::bitset::BitSet;
use crate::order::{filters, ideals, Filter, Ideal, Nle, NormalOperator, Sort};
use crate::polarity::{DualAlgebra, Limits, SortedFrame};
use crate::relational::{closed_image, galois_dual, lift_single_sorted, FrameWithRelations, SortType, SortedRelation};
use crate::report::Check;
use crate::tuples;

#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    pub nle: Nle,
    pub frame: FrameWithRelations,
    /// `X`: filter `i` is `↑a_i`.
    pub filters: Vec<Filter>,
    /// `Y`: ideal `i` is `↓a_i`.
    pub ideals: Vec<Ideal>,
}

fn carrier(cf: &CanonicalFrame, sort: Sort, u: usize) -> &BitSet {
    match sort {
        Sort::One => &cf.filters[u].carrier,
        Sort::Dual => &cf.ideals[u].carrier,
    }
}

/// `f̂(u⃗)`: the filter (output `1`) or ideal (output `∂`) generated by
/// `{f(a⃗) : a⃗ ∈ u⃗}`, returned as a point of the output sort.
fn point_operator(cf_filters: &[Filter], cf_ideals: &[Ideal], nle: &Nle, f: &NormalOperator, args: &[usize]) -> usize {
    let l = &nle.lattice;
    let choices: Vec<Vec<usize>> = args
        .iter()
        .zip(&f.dtype.inputs)
        .map(|(&u, s)| match s {
            Sort::One => cf_filters[u].carrier.iter().collect(),
            Sort::Dual => cf_ideals[u].carrier.iter().collect(),
        })
        .collect();
    let values = tuples::product(&choices).into_iter().map(|t| f.apply(&t));
    // principal filters/ideals are indexed by their generator
    match f.dtype.output {
        Sort::One => l.meet_all(values),
        Sort::Dual => l.join_all(values),
    }
}

/// Builds `𝔉_L`: `X` the filters, `Y` the ideals, `x ⊥ y` iff `x ∩ y ≠ ∅`,
/// and one relation per operator with `Ru⃗ = {w : f̂(u⃗) ⊆ w}`.
pub fn canonical_frame(nle: &Nle) -> CanonicalFrame {
    let l = &nle.lattice;
    let fs = filters(l);
    let is = ideals(l);
    let x_names = fs.iter().map(|f| format!("↑{}", l.name(f.generator))).collect();
    let y_names = is.iter().map(|i| format!("↓{}", l.name(i.generator))).collect();
    let frame = SortedFrame::from_fn(format!("F({})", nle.name), x_names, y_names, |x, y| {
        fs[x].carrier.intersects(&is[y].carrier)
    });
    let mut memo: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let relations = nle
        .operators
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let sort = SortType::of_dtype(&f.dtype);
            let out = f.dtype.output;
            SortedRelation::from_fn(f.name.clone(), sort, &frame, |t| {
                let p = *memo
                    .entry((fi, t.to_vec()))
                    .or_insert_with(|| point_operator(&fs, &is, nle, f, t));
                let target = match out {
                    Sort::One => &fs[p].carrier,
                    Sort::Dual => &is[p].carrier,
                };
                let n = frame.len(out);
                BitSet::from_indices(
                    n,
                    (0..n).filter(|&w| match out {
                        Sort::One => target.is_subset(&fs[w].carrier),
                        Sort::Dual => target.is_subset(&is[w].carrier),
                    }),
                )
            })
        })
        .collect();
    CanonicalFrame {
        nle: nle.clone(),
        frame: FrameWithRelations::new(frame, relations),
        filters: fs,
        ideals: is,
    }
}

impl CanonicalFrame {
    pub fn sorted_frame(&self) -> &SortedFrame {
        &self.frame.frame
    }

    /// `ζ₁(a) = {x : a ∈ x}` or `ζ_∂(a) = {y : a ∈ y}`.
    pub fn zeta(&self, sort: Sort, a: usize) -> BitSet {
        let n = self.sorted_frame().len(sort);
        BitSet::from_indices(n, (0..n).filter(|&u| carrier(self, sort, u).contains(a)))
    }

    /// The point `f̂(u⃗)`.
    pub fn point_op(&self, op: usize, args: &[usize]) -> usize {
        point_operator(&self.filters, &self.ideals, &self.nle, &self.nle.operators[op], args)
    }

    /// The lattice element generating point `u`.
    pub fn generator(&self, sort: Sort, u: usize) -> usize {
        match sort {
            Sort::One => self.filters[u].generator,
            Sort::Dual => self.ideals[u].generator,
        }
    }
}

/// Checks that `ζ₁` represents the expansion in the complex algebra of its
/// canonical frame, together with the point-level descriptions of the
/// canonical relations and their Galois duals.
pub fn verify_representation(cf: &CanonicalFrame, limits: &Limits) -> Vec<Check> {
    let frame = cf.sorted_frame();
    let l = &cf.nle.lattice;
    let n = l.len();
    let mut out = Vec::new();
    let alg = match DualAlgebra::new(frame, limits) {
        Ok(a) => a,
        Err(e) => return vec![Check::skipped("zeta-embedding", e.to_string())],
    };
    let z1: Vec<BitSet> = (0..n).map(|a| cf.zeta(Sort::One, a)).collect();
    let zd: Vec<BitSet> = (0..n).map(|a| cf.zeta(Sort::Dual, a)).collect();
    let ename = |a: usize| l.name(a).to_string();

    // embedding: lattice iso onto the stable sets
    let mut w = None;
    for a in 0..n {
        if !frame.is_galois(Sort::One, &z1[a]) {
            w = Some(json!({"a": ename(a), "reason": "not stable"}));
            break;
        }
        if frame.prime(Sort::One, &z1[a]) != zd[a] {
            w = Some(json!({"a": ename(a), "reason": "prime of ζ₁(a) is not ζ∂(a)"}));
            break;
        }
        for b in 0..n {
            if l.leq(a, b) != z1[a].is_subset(&z1[b]) {
                w = Some(json!({"a": ename(a), "b": ename(b), "reason": "order"}));
            } else if z1[l.meet(a, b)] != z1[a].intersection(&z1[b]) {
                w = Some(json!({"a": ename(a), "b": ename(b), "reason": "meet"}));
            } else if z1[l.join(a, b)] != frame.closure(Sort::One, &z1[a].union(&z1[b])) {
                w = Some(json!({"a": ename(a), "b": ename(b), "reason": "join"}));
            }
            if w.is_some() {
                break;
            }
        }
        if w.is_some() {
            break;
        }
    }
    if w.is_none() && alg.stable.len() != n {
        w = Some(json!({"stable_sets": alg.stable.len(), "elements": n, "reason": "not onto"}));
    }
    out.push(Check::from_witness("zeta-embedding", w));

    let w = (0..n)
        .find(|&a| alg.stable.index_of(&z1[a]).map(|i| alg.stable.sets[i].kind) != Some(crate::polarity::Kind::Clopen))
        .map(|a| json!({"a": ename(a)}));
    out.push(Check::from_witness("zeta-image-clopen", w));

    // ζ₁(a) = {↓a}′ and ζ∂(a) = {↑a}′
    let w = (0..n)
        .find(|&a| {
            let down_a = (0..frame.len(Sort::Dual))
                .find(|&y| cf.ideals[y].generator == a)
                .unwrap();
            let up_a = (0..frame.len(Sort::One))
                .find(|&x| cf.filters[x].generator == a)
                .unwrap();
            *frame.point_prime(Sort::Dual, down_a) != z1[a] || *frame.point_prime(Sort::One, up_a) != zd[a]
        })
        .map(|a| json!({"a": ename(a)}));
    out.push(Check::from_witness("open-generators", w));

    let zeta_of = |s: Sort, a: usize| match s {
        Sort::One => z1[a].clone(),
        Sort::Dual => zd[a].clone(),
    };
    for (fi, (f, r)) in cf.nle.operators.iter().zip(&cf.frame.relations).enumerate() {
        let dims = f.dims();
        // ᾱ_R on sorted ζ images, and the single-sorted lift on ζ₁
        let mut w = None;
        for t in tuples::all_tuples(&dims) {
            let value = f.apply(&t);
            let sorted: Vec<BitSet> = t.iter().zip(&f.dtype.inputs).map(|(&a, &s)| zeta_of(s, a)).collect();
            let got = closed_image(frame, r, &sorted).expect("ζ images are Galois");
            let single: Vec<BitSet> = t.iter().map(|&a| z1[a].clone()).collect();
            let lifted = lift_single_sorted(frame, r, &single).expect("ζ₁ images are stable");
            if got != zeta_of(f.dtype.output, value) || lifted != z1[value] {
                w = Some(json!({
                    "args": t.iter().map(|&a| ename(a)).collect::<Vec<_>>(),
                    "expected": ename(value),
                }));
                break;
            }
        }
        out.push(Check::from_witness(format!("representation:{}", f.name), w));

        // w R u⃗ iff f(a⃗) ∈ w for all a⃗ ∈ u⃗
        let pdims: Vec<usize> = f.dtype.inputs.iter().map(|&s| frame.len(s)).collect();
        let out_sort = f.dtype.output;
        let members = |t: &[usize]| -> Vec<Vec<usize>> {
            t.iter()
                .zip(&f.dtype.inputs)
                .map(|(&u, &s)| carrier(cf, s, u).iter().collect())
                .collect()
        };
        let mut w = None;
        'point: for t in tuples::all_tuples(&pdims) {
            let elems = tuples::product(&members(&t));
            for x in 0..frame.len(out_sort) {
                let brute = elems.iter().all(|a| carrier(cf, out_sort, x).contains(f.apply(a)));
                let pt = cf.point_op(fi, &t);
                if brute != r.holds(x, &t) || (x == pt) != (carrier(cf, out_sort, x) == carrier(cf, out_sort, pt)) {
                    w = Some(json!({
                        "w": frame.point_name(out_sort, x),
                        "args": t.iter().zip(&f.dtype.inputs).map(|(&u, &s)| frame.point_name(s, u)).collect::<Vec<_>>(),
                    }));
                    break 'point;
                }
            }
        }
        out.push(Check::from_witness(format!("point-relation:{}", f.name), w));

        // v R′ u⃗ iff f̂(u⃗) ∩ v ≠ ∅ iff f(b⃗) ∈ v for some b⃗ ∈ u⃗
        let dual = galois_dual(frame, r);
        let mut w = None;
        'dual: for t in tuples::all_tuples(&pdims) {
            let elems = tuples::product(&members(&t));
            let pt = cf.point_op(fi, &t);
            for v in 0..frame.len(out_sort.flip()) {
                let vc = carrier(cf, out_sort.flip(), v);
                let exists = elems.iter().any(|a| vc.contains(f.apply(a)));
                let meets = carrier(cf, out_sort, pt).intersects(vc);
                if exists != dual.holds(v, &t) || meets != exists {
                    w = Some(json!({
                        "v": frame.point_name(out_sort.flip(), v),
                        "args": t.iter().zip(&f.dtype.inputs).map(|(&u, &s)| frame.point_name(s, u)).collect::<Vec<_>>(),
                    }));
                    break 'dual;
                }
            }
        }
        out.push(Check::from_witness(format!("dual-point-relation:{}", f.name), w));
    }
    out
}
