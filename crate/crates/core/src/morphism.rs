//! Weak bounded morphisms between frames, duals of lattice-expansion
//! homomorphisms, and the two round trips (lattice → frame → lattice and
//! frame → lattice → frame).

use serde_json::{json, Value};
use thiserror::Error;

use crate::bitset::{all_subsets, BitSet};
use crate::canonical::{canonical_frame, verify_representation, CanonicalFrame};
use crate::order::{validate_homomorphism, validate_normal_operator, HomFailure, LatticeHomomorphism, Nle, Sort};
use crate::polarity::{DualAlgebra, Limits, ScaleExceeded, SortedFrame};
use crate::relational::{
    check_axioms, clopen_algebra, closed_image, image, CheckOptions, FrameWithRelations, Level, RelError,
};
use crate::report::Check;
use crate::tuples;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphError {
    #[error("bad map: {0}")]
    BadMap(String),
    #[error("frames disagree on relation `{0}`")]
    RelationMismatch(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("precondition failed: {}", .0.join(", "))]
    PreconditionFailed(Vec<String>),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Scale(#[from] ScaleExceeded),
}

/// `π = (p, q) : 𝔉₂ → 𝔉₁` with `p : X₂ → X₁`, `q : Y₂ → Y₁`. The inverse
/// image `π⁻¹` goes the other way, from subsets of `𝔉₁` to subsets of `𝔉₂`.
#[derive(Clone, Debug)]
pub struct FrameMorphism {
    /// `𝔉₂`.
    pub source: FrameWithRelations,
    /// `𝔉₁`.
    pub target: FrameWithRelations,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    // source relation index for each target relation
    pairing: Vec<usize>,
}

impl FrameMorphism {
    pub fn new(
        source: FrameWithRelations,
        target: FrameWithRelations,
        p: Vec<usize>,
        q: Vec<usize>,
    ) -> Result<Self, MorphError> {
        let (s, t) = (&source.frame, &target.frame);
        for (sort, map, letter) in [(Sort::One, &p, "p"), (Sort::Dual, &q, "q")] {
            if map.len() != s.len(sort) {
                return Err(MorphError::BadMap(format!(
                    "{letter} has {} entries for {} points",
                    map.len(),
                    s.len(sort)
                )));
            }
            if let Some(bad) = map.iter().find(|&&v| v >= t.len(sort)) {
                return Err(MorphError::BadMap(format!("{letter} sends a point to #{bad}")));
            }
        }
        if source.relations.len() != target.relations.len() {
            return Err(MorphError::RelationMismatch("relation count".into()));
        }
        let pairing = target
            .relations
            .iter()
            .map(|r| {
                source
                    .relations
                    .iter()
                    .position(|s| s.name == r.name && s.sort == r.sort)
                    .ok_or_else(|| MorphError::RelationMismatch(r.name.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            source,
            target,
            p,
            q,
            pairing,
        })
    }

    pub fn identity(fr: &FrameWithRelations) -> Self {
        let p = (0..fr.frame.len(Sort::One)).collect();
        let q = (0..fr.frame.len(Sort::Dual)).collect();
        Self::new(fr.clone(), fr.clone(), p, q).expect("identity is well formed")
    }

    /// `self ∘ other`, for `other : 𝔉₃ → 𝔉₂` and `self : 𝔉₂ → 𝔉₁`.
    pub fn after(&self, other: &FrameMorphism) -> Result<Self, MorphError> {
        if other.target.frame != self.source.frame {
            return Err(MorphError::BadMap("maps do not compose".into()));
        }
        let p = other.p.iter().map(|&x| self.p[x]).collect();
        let q = other.q.iter().map(|&y| self.q[y]).collect();
        Self::new(other.source.clone(), self.target.clone(), p, q)
    }

    /// `π(w)`.
    pub fn apply(&self, sort: Sort, w: usize) -> usize {
        match sort {
            Sort::One => self.p[w],
            Sort::Dual => self.q[w],
        }
    }

    /// `π⁻¹(W)` for `W` a subset of the target carrier of `sort`.
    pub fn preimage(&self, sort: Sort, set: &BitSet) -> BitSet {
        let n = self.source.frame.len(sort);
        BitSet::from_indices(n, (0..n).filter(|&w| set.contains(self.apply(sort, w))))
    }

    fn f1(&self) -> &SortedFrame {
        &self.target.frame
    }

    fn f2(&self) -> &SortedFrame {
        &self.source.frame
    }
}

fn pname(f: &SortedFrame, s: Sort, u: usize) -> String {
    f.point_name(s, u).to_string()
}

fn set_names(f: &SortedFrame, s: Sort, set: &BitSet) -> Value {
    json!(f.names_of(s, set))
}

fn max1(m: &FrameMorphism) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    for x in 0..f2.len(Sort::One) {
        for y in 0..f2.len(Sort::Dual) {
            if f2.related(x, y) && !f1.related(m.p[x], m.q[y]) {
                return Some(json!({"x'": pname(f2, Sort::One, x), "y'": pname(f2, Sort::Dual, y)}));
            }
        }
    }
    None
}

fn max2(m: &FrameMorphism) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    for x in 0..f1.len(Sort::One) {
        for y in 0..f2.len(Sort::Dual) {
            if f1.related(x, m.q[y])
                && !(0..f2.len(Sort::One)).any(|z| f1.leq(Sort::One, x, m.p[z]) && f2.related(z, y))
            {
                return Some(json!({"x": pname(f1, Sort::One, x), "y'": pname(f2, Sort::Dual, y)}));
            }
        }
    }
    None
}

fn max3(m: &FrameMorphism) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    for x in 0..f2.len(Sort::One) {
        for y in 0..f1.len(Sort::Dual) {
            if f1.related(m.p[x], y)
                && !(0..f2.len(Sort::Dual)).any(|v| f1.leq(Sort::Dual, y, m.q[v]) && f2.related(x, v))
            {
                return Some(json!({"x'": pname(f2, Sort::One, x), "y": pname(f1, Sort::Dual, y)}));
            }
        }
    }
    None
}

/// `π(v) R u⃗ ⟺ ∃w⃗ (u⃗ ≼ π[w⃗] ∧ v S w⃗)`, by direct search over `w⃗`.
fn max4(m: &FrameMorphism, ri: usize) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    let r = &m.target.relations[ri];
    let s = &m.source.relations[m.pairing[ri]];
    let out = r.sort.output;
    let w_tuples: Vec<Vec<usize>> = s.input_tuples().collect();
    for u in r.input_tuples() {
        for v in 0..f2.len(out) {
            let lhs = r.holds(m.apply(out, v), &u);
            let rhs = w_tuples.iter().any(|w| {
                s.holds(v, w)
                    && w.iter()
                        .zip(&u)
                        .zip(&r.sort.inputs)
                        .all(|((&wj, &uj), &sj)| f1.leq(sj, uj, m.apply(sj, wj)))
            });
            if lhs != rhs {
                return Some(json!({
                    "v": pname(f2, out, v),
                    "args": u.iter().zip(&r.sort.inputs).map(|(&a, &s)| pname(f1, s, a)).collect::<Vec<_>>(),
                    "relation_holds": lhs,
                }));
            }
        }
    }
    None
}

/// `π⁻¹ α_R(Γu⃗) = α_S(π⁻¹[Γu⃗])`.
fn max4_set_form(m: &FrameMorphism, ri: usize) -> Option<Value> {
    let f1 = m.f1();
    let r = &m.target.relations[ri];
    let s = &m.source.relations[m.pairing[ri]];
    for u in r.input_tuples() {
        let ups: Vec<BitSet> = u
            .iter()
            .zip(&r.sort.inputs)
            .map(|(&a, &sj)| f1.upper(sj, a).clone())
            .collect();
        let lhs = m.preimage(r.sort.output, &image(r, &ups));
        let pre: Vec<BitSet> = ups
            .iter()
            .zip(&r.sort.inputs)
            .map(|(g, &sj)| m.preimage(sj, g))
            .collect();
        let rhs = image(s, &pre);
        if lhs != rhs {
            return Some(json!({
                "args": u.iter().zip(&r.sort.inputs).map(|(&a, &s)| pname(f1, s, a)).collect::<Vec<_>>(),
                "lhs": set_names(m.f2(), r.sort.output, &lhs),
                "rhs": set_names(m.f2(), r.sort.output, &rhs),
            }));
        }
    }
    None
}

fn max5(m: &FrameMorphism) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    for sort in [Sort::One, Sort::Dual] {
        for u in 0..f1.len(sort) {
            let pre = m.preimage(sort, f1.upper(sort, u));
            if f2.closed_generator(sort, &pre).is_none() {
                return Some(json!({"u": pname(f1, sort, u), "preimage": set_names(f2, sort, &pre)}));
            }
        }
    }
    None
}

fn max6(m: &FrameMorphism) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    for sort in [Sort::One, Sort::Dual] {
        for u in 0..f1.len(sort) {
            let up = f1.upper(sort, u);
            if let Some(v) = f1.open_generator(sort, up) {
                let lhs = m.preimage(sort, up);
                let rhs = f2.prime(sort.flip(), &m.preimage(sort.flip(), f1.upper(sort.flip(), v)));
                if lhs != rhs {
                    return Some(json!({
                        "u": pname(f1, sort, u),
                        "v": pname(f1, sort.flip(), v),
                        "lhs": set_names(f2, sort, &lhs),
                        "rhs": set_names(f2, sort, &rhs),
                    }));
                }
            }
        }
    }
    None
}

/// Increasing (or, with `down`, decreasing) subsets of a carrier.
fn monotone_subsets(f: &SortedFrame, sort: Sort, down: bool) -> Option<Vec<BitSet>> {
    let n = f.len(sort);
    if n > MAX_SUBSET_POINTS {
        return None;
    }
    Some(
        all_subsets(n)
            .filter(|s| {
                let t = if down { s.complement() } else { s.clone() };
                f.is_increasing(sort, &t)
            })
            .collect(),
    )
}

/// Subset enumerations over a carrier stop at this many points.
const MAX_SUBSET_POINTS: usize = 20;

fn chain_check(id: &str, a: bool, b: bool, c: Option<bool>) -> Check {
    let detail = format!(
        "first-order={a}, generators={b}, all-sets={}",
        c.map_or("not enumerated".to_string(), |c| c.to_string())
    );
    let agree = a == b && c.is_none_or(|c| c == a);
    let check = if agree {
        Check::pass(id)
    } else {
        Check::fail(id, json!({"first_order": a, "generators": b, "all_sets": c}))
    };
    check.with_detail(detail)
}

/// The three equivalent forms of the weakened back condition for `◇`.
fn diamond_chain(m: &FrameMorphism, first_order: bool) -> Check {
    let (f1, f2) = (m.f1(), m.f2());
    let holds = |a: &BitSet| {
        m.preimage(Sort::Dual, &f1.diamond(a))
            .is_subset(&f2.diamond(&m.preimage(Sort::One, a)))
    };
    let b = (0..f1.len(Sort::One)).all(|x| holds(f1.upper(Sort::One, x)));
    let c = monotone_subsets(f1, Sort::One, false).map(|sets| sets.iter().all(holds));
    chain_check("diamond-chain", first_order, b, c)
}

/// The three equivalent forms of the weakened back condition for `□`.
fn box_chain(m: &FrameMorphism, first_order: bool) -> Check {
    let (f1, f2) = (m.f1(), m.f2());
    let holds = |b: &BitSet| {
        f2.boxx(&m.preimage(Sort::Dual, b))
            .is_subset(&m.preimage(Sort::One, &f1.boxx(b)))
    };
    let b = (0..f1.len(Sort::Dual)).all(|y| holds(&f1.upper(Sort::Dual, y).complement()));
    let c = monotone_subsets(f1, Sort::Dual, true).map(|sets| sets.iter().all(holds));
    chain_check("box-chain", first_order, b, c)
}

fn induced_hom(m: &FrameMorphism, a1: &DualAlgebra, a2: &DualAlgebra) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    for sort in [Sort::One, Sort::Dual] {
        let (l1, l2) = (a1.lattice(sort), a2.lattice(sort));
        if m.preimage(sort, l1.members(l1.bottom())) != *l2.members(l2.bottom()) {
            return Some(json!({"sort": sort.tag(), "reason": "bottom"}));
        }
        for i in 0..l1.len() {
            let pi = m.preimage(sort, l1.members(i));
            if !l2.contains(&pi) {
                return Some(
                    json!({"sort": sort.tag(), "set": set_names(f1, sort, l1.members(i)), "reason": "preimage not Galois"}),
                );
            }
            for j in 0..l1.len() {
                let pj = m.preimage(sort, l1.members(j));
                let join = m.preimage(sort, l1.members(l1.join(f1, i, j)));
                let meet = m.preimage(sort, l1.members(l1.meet(i, j)));
                if join != f2.closure(sort, &pi.union(&pj)) || meet != pi.intersection(&pj) {
                    return Some(json!({
                        "sort": sort.tag(),
                        "sets": [set_names(f1, sort, l1.members(i)), set_names(f1, sort, l1.members(j))],
                    }));
                }
            }
        }
    }
    None
}

fn induced_operator(m: &FrameMorphism, ri: usize, a1: &DualAlgebra) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    let r = &m.target.relations[ri];
    let s = &m.source.relations[m.pairing[ri]];
    let dims: Vec<usize> = r.sort.inputs.iter().map(|&st| a1.lattice(st).len()).collect();
    for t in tuples::all_tuples(&dims) {
        let sets: Vec<BitSet> = t
            .iter()
            .zip(&r.sort.inputs)
            .map(|(&i, &st)| a1.lattice(st).members(i).clone())
            .collect();
        let lhs = m.preimage(r.sort.output, &closed_image(f1, r, &sets).expect("Galois"));
        let pre: Vec<BitSet> = sets
            .iter()
            .zip(&r.sort.inputs)
            .map(|(g, &st)| m.preimage(st, g))
            .collect();
        let rhs = closed_image(f2, s, &pre).ok()?;
        if lhs != rhs {
            return Some(json!({
                "args": sets.iter().zip(&r.sort.inputs).map(|(g, &st)| set_names(f1, st, g)).collect::<Vec<_>>(),
            }));
        }
    }
    None
}

fn closure_preservation(m: &FrameMorphism) -> Option<Value> {
    let (f1, f2) = (m.f1(), m.f2());
    for sort in [Sort::One, Sort::Dual] {
        let sets = monotone_subsets(f1, sort, false)?;
        for u in sets {
            let lhs = m.preimage(sort, &f1.closure(sort, &u));
            let rhs = f2.closure(sort, &m.preimage(sort, &u));
            if lhs != rhs {
                return Some(json!({"sort": sort.tag(), "set": set_names(f1, sort, &u)}));
            }
        }
    }
    None
}

/// Runs MAx1–MAx6 plus the consequences they are meant to guarantee.
pub fn check_morphism(m: &FrameMorphism, opts: &CheckOptions) -> Vec<Check> {
    let w1 = max1(m);
    let w2 = max2(m);
    let w3 = max3(m);
    let weak = w1.is_none() && w2.is_none() && w3.is_none();
    let (ok2, ok3) = (w2.is_none(), w3.is_none());
    let mut out = vec![
        Check::from_witness("MAx1", w1),
        Check::from_witness("MAx2", w2),
        Check::from_witness("MAx3", w3),
    ];
    for ri in 0..m.target.relations.len() {
        let name = &m.target.relations[ri].name;
        out.push(Check::from_witness(format!("MAx4:{name}"), max4(m, ri)));
        out.push(Check::from_witness(
            format!("MAx4-set-form:{name}"),
            max4_set_form(m, ri),
        ));
    }
    out.push(Check::from_witness("MAx5", max5(m)));
    out.push(Check::from_witness("MAx6", max6(m)));
    out.push(diamond_chain(m, ok2));
    out.push(box_chain(m, ok3));

    let why = "requires MAx1–MAx3";
    if !weak {
        out.push(Check::skipped("induced-hom", why));
        for r in &m.target.relations {
            out.push(Check::skipped(format!("induced-operator:{}", r.name), why));
        }
        out.push(Check::skipped("closure-preservation", why));
        return out;
    }
    let (a1, a2) = match (
        DualAlgebra::new(m.f1(), &opts.limits),
        DualAlgebra::new(m.f2(), &opts.limits),
    ) {
        (Ok(a1), Ok(a2)) => (a1, a2),
        (Err(e), _) | (_, Err(e)) => {
            out.push(Check::skipped("induced-hom", e.to_string()));
            return out;
        }
    };
    let hom = induced_hom(m, &a1, &a2);
    let hom_ok = hom.is_none();
    out.push(Check::from_witness("induced-hom", hom));
    for ri in 0..m.target.relations.len() {
        let id = format!("induced-operator:{}", m.target.relations[ri].name);
        out.push(if hom_ok {
            Check::from_witness(id, induced_operator(m, ri, &a1))
        } else {
            Check::skipped(id, "requires induced-hom")
        });
    }
    out.push(
        Check::from_witness("closure-preservation", closure_preservation(m))
            .with_detail("increasing sets of both sorts"),
    );
    out
}

// ---------------------------------------------------------------------------
// Duals of homomorphisms

/// The dual of `h : L → L*`, running from the canonical frame of `L*` to
/// that of `L`, with `p(x*) = h⁻¹[x*]` and `q(y*) = h⁻¹[y*]`.
#[derive(Clone, Debug)]
pub struct DualMorphism {
    pub morphism: FrameMorphism,
    /// Canonical frame of the domain `L` (the morphism's target).
    pub of_source: CanonicalFrame,
    /// Canonical frame of the codomain `L*` (the morphism's source).
    pub of_target: CanonicalFrame,
}

fn preimage_point(h: &LatticeHomomorphism, carrier: &BitSet, filter: bool) -> Option<usize> {
    let l = &h.source.lattice;
    let pre: Vec<usize> = (0..l.len()).filter(|&a| carrier.contains(h.apply(a))).collect();
    if pre.is_empty() {
        return None;
    }
    // a principal filter (ideal) of a finite lattice is generated by its meet (join)
    let g = if filter {
        l.meet_all(pre.iter().copied())
    } else {
        l.join_all(pre.iter().copied())
    };
    let expect = if filter { l.up(g).clone() } else { l.down(g) };
    (BitSet::from_indices(l.len(), pre) == expect).then_some(g)
}

pub fn dual_of_homomorphism(h: &LatticeHomomorphism) -> Result<DualMorphism, MorphError> {
    let report = validate_homomorphism(h);
    if let Some(f) = report.failures.first() {
        return Err(MorphError::NotAHomomorphism(describe_hom_failure(f)));
    }
    let cf = canonical_frame(&h.source);
    let cf_star = canonical_frame(&h.target);
    let point = |sort: Sort, carrier: &BitSet| -> Result<usize, MorphError> {
        let g = preimage_point(h, carrier, sort == Sort::One)
            .ok_or_else(|| MorphError::BadMap("preimage is not a filter/ideal".into()))?;
        let n = cf.sorted_frame().len(sort);
        Ok((0..n)
            .find(|&u| cf.generator(sort, u) == g)
            .expect("principal point exists"))
    };
    let p = cf_star
        .filters
        .iter()
        .map(|f| point(Sort::One, &f.carrier))
        .collect::<Result<_, _>>()?;
    let q = cf_star
        .ideals
        .iter()
        .map(|i| point(Sort::Dual, &i.carrier))
        .collect::<Result<_, _>>()?;
    let morphism = FrameMorphism::new(cf_star.frame.clone(), cf.frame.clone(), p, q)?;
    Ok(DualMorphism {
        morphism,
        of_source: cf,
        of_target: cf_star,
    })
}

fn describe_hom_failure(f: &HomFailure) -> String {
    format!("{f:?}")
}

/// `π⁻¹(ζ₁(a)) = ζ₁(h(a))` and `π⁻¹(ζ∂(a)) = ζ∂(h(a))` for every `a`.
pub fn check_naturality(h: &LatticeHomomorphism, d: &DualMorphism) -> Check {
    let l = &h.source.lattice;
    let w = (0..l.len()).find_map(|a| {
        [Sort::One, Sort::Dual].into_iter().find_map(|s| {
            let lhs = d.morphism.preimage(s, &d.of_source.zeta(s, a));
            let rhs = d.of_target.zeta(s, h.apply(a));
            (lhs != rhs).then(|| json!({"a": l.name(a), "sort": s.tag()}))
        })
    });
    Check::from_witness("naturality", w).with_detail("derived: follows from the construction of the dual map")
}

// ---------------------------------------------------------------------------
// Round trips

/// Normality of each operator, then `L ≅ 𝔉_L*` through `ζ₁`.
pub fn roundtrip_lattice(nle: &Nle, limits: &Limits) -> (Vec<Check>, bool) {
    let mut out = Vec::new();
    let mut normal = true;
    for f in &nle.operators {
        let rep = validate_normal_operator(&nle.lattice, f);
        normal &= rep.is_normal();
        out.push(normality_check(nle, f.name.as_str(), &rep));
    }
    if !normal {
        return (out, false);
    }
    let cf = canonical_frame(nle);
    out.extend(verify_representation(&cf, limits));
    let star = match clopen_algebra(&cf.frame, limits) {
        Ok(a) => a,
        Err(e) => {
            out.push(Check::fail("iso-bijective", json!({"error": e.to_string()})));
            return (out, false);
        }
    };
    let l = &nle.lattice;
    let zeta: Vec<Option<usize>> = (0..l.len()).map(|a| star.index_of(&cf.zeta(Sort::One, a))).collect();
    let mut hit = vec![false; star.sets.len()];
    let mut bij = None;
    for (a, z) in zeta.iter().enumerate() {
        match z {
            Some(i) if !hit[*i] => hit[*i] = true,
            _ => {
                bij = Some(json!({"a": l.name(a)}));
                break;
            }
        }
    }
    if bij.is_none() && hit.iter().any(|h| !h) {
        bij = Some(json!({"reason": "a clopen is not of the form ζ₁(a)"}));
    }
    let bij_ok = bij.is_none();
    out.push(Check::from_witness("iso-bijective", bij));
    if !bij_ok {
        return (out, false);
    }
    let z: Vec<usize> = zeta.into_iter().map(Option::unwrap).collect();
    let order = (0..l.len())
        .flat_map(|a| (0..l.len()).map(move |b| (a, b)))
        .find(|&(a, b)| l.leq(a, b) != star.nle.lattice.leq(z[a], z[b]))
        .map(|(a, b)| json!({"a": l.name(a), "b": l.name(b)}));
    out.push(Check::from_witness("iso-order", order));
    for f in &nle.operators {
        let g = star.nle.operator(&f.name).expect("same operators");
        let w = tuples::all_tuples(&f.dims())
            .find(|t| {
                let zt: Vec<usize> = t.iter().map(|&a| z[a]).collect();
                z[f.apply(t)] != g.apply(&zt)
            })
            .map(|t| json!({"args": t.iter().map(|&a| l.name(a)).collect::<Vec<_>>()}));
        out.push(Check::from_witness(format!("iso-operator:{}", f.name), w));
    }
    let iso = out.iter().all(|c| !c.failed());
    (out, iso)
}

pub fn normality_check(nle: &Nle, name: &str, rep: &crate::order::NormalityReport) -> Check {
    let l = &nle.lattice;
    let w = rep.violations.first().map(|v| {
        json!({
            "place": v.place,
            "args": v.args.iter().map(|&a| l.name(a)).collect::<Vec<_>>(),
            "pair": v.pair.map(|(a, b)| [l.name(a), l.name(b)]),
            "lhs": l.name(v.lhs),
            "rhs": l.name(v.rhs),
        })
    });
    Check::from_witness(format!("normality:{name}"), w)
}

/// Points per sort beyond which the isomorphism search is not attempted.
pub const ISO_SEARCH_MAX_POINTS: usize = 8;

/// A sorted bijection `(p, q)` between two frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameIso {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

/// Backtracking search for a bijection preserving `⊥` and every relation.
pub fn find_frame_iso(a: &FrameWithRelations, b: &FrameWithRelations) -> Option<FrameIso> {
    let (fa, fb) = (&a.frame, &b.frame);
    let (nx, ny) = (fa.len(Sort::One), fa.len(Sort::Dual));
    if nx != fb.len(Sort::One) || ny != fb.len(Sort::Dual) || a.relations.len() != b.relations.len() {
        return None;
    }
    let pairing: Vec<usize> = a
        .relations
        .iter()
        .map(|r| b.relations.iter().position(|s| s.name == r.name && s.sort == r.sort))
        .collect::<Option<_>>()?;
    // degree invariants prune the search
    let deg_a_x: Vec<usize> = (0..nx).map(|x| fa.point_prime(Sort::One, x).len()).collect();
    let deg_b_x: Vec<usize> = (0..nx).map(|x| fb.point_prime(Sort::One, x).len()).collect();
    let deg_a_y: Vec<usize> = (0..ny).map(|y| fa.point_prime(Sort::Dual, y).len()).collect();
    let deg_b_y: Vec<usize> = (0..ny).map(|y| fb.point_prime(Sort::Dual, y).len()).collect();

    struct Search<'s> {
        fa: &'s SortedFrame,
        fb: &'s SortedFrame,
        p: Vec<Option<usize>>,
        q: Vec<Option<usize>>,
        used_x: Vec<bool>,
        used_y: Vec<bool>,
    }
    fn consistent(s: &Search, x: Option<usize>, y: Option<usize>) -> bool {
        match (x, y) {
            (Some(x), None) => (0..s.q.len()).all(|y| match s.q[y] {
                Some(qy) => s.fa.perp(x, y) == s.fb.perp(s.p[x].unwrap(), qy),
                None => true,
            }),
            (None, Some(y)) => (0..s.p.len()).all(|x| match s.p[x] {
                Some(px) => s.fa.perp(x, y) == s.fb.perp(px, s.q[y].unwrap()),
                None => true,
            }),
            _ => true,
        }
    }
    let mut s = Search {
        fa,
        fb,
        p: vec![None; nx],
        q: vec![None; ny],
        used_x: vec![false; nx],
        used_y: vec![false; ny],
    };
    let relations_ok = |p: &[usize], q: &[usize]| {
        a.relations.iter().zip(&pairing).all(|(r, &j)| {
            let sr = &b.relations[j];
            let map = |sort: Sort, u: usize| if sort == Sort::One { p[u] } else { q[u] };
            r.input_tuples().all(|t| {
                let mapped: Vec<usize> = t.iter().zip(&r.sort.inputs).map(|(&u, &st)| map(st, u)).collect();
                (0..fa.len(r.sort.output)).all(|w| r.holds(w, &t) == sr.holds(map(r.sort.output, w), &mapped))
            })
        })
    };
    fn go(
        s: &mut Search,
        k: usize,
        deg: (&[usize], &[usize], &[usize], &[usize]),
        done: &dyn Fn(&[usize], &[usize]) -> bool,
    ) -> bool {
        let (nx, ny) = (s.p.len(), s.q.len());
        if k == nx + ny {
            let p: Vec<usize> = s.p.iter().map(|v| v.unwrap()).collect();
            let q: Vec<usize> = s.q.iter().map(|v| v.unwrap()).collect();
            return done(&p, &q);
        }
        if k < nx {
            for c in 0..nx {
                if s.used_x[c] || deg.0[k] != deg.1[c] {
                    continue;
                }
                s.p[k] = Some(c);
                s.used_x[c] = true;
                if consistent(s, Some(k), None) && go(s, k + 1, deg, done) {
                    return true;
                }
                s.p[k] = None;
                s.used_x[c] = false;
            }
        } else {
            let y = k - nx;
            for c in 0..ny {
                if s.used_y[c] || deg.2[y] != deg.3[c] {
                    continue;
                }
                s.q[y] = Some(c);
                s.used_y[c] = true;
                if consistent(s, None, Some(y)) && go(s, k + 1, deg, done) {
                    return true;
                }
                s.q[y] = None;
                s.used_y[c] = false;
            }
        }
        false
    }
    if go(&mut s, 0, (&deg_a_x, &deg_b_x, &deg_a_y, &deg_b_y), &relations_ok) {
        Some(FrameIso {
            p: s.p.into_iter().map(Option::unwrap).collect(),
            q: s.q.into_iter().map(Option::unwrap).collect(),
        })
    } else {
        None
    }
}

/// `𝔉 ≅ 𝔉_{L*(𝔉)}`: requires the star axioms, builds the clopen algebra and
/// its canonical frame, and searches for a frame isomorphism.
pub fn roundtrip_frame(
    fr: &FrameWithRelations,
    opts: &CheckOptions,
) -> Result<(Vec<Check>, Option<FrameIso>), MorphError> {
    let axioms = check_axioms(fr, Level::Star, opts);
    let failed: Vec<String> = axioms.iter().filter(|c| c.failed()).map(|c| c.id.clone()).collect();
    if !failed.is_empty() {
        return Err(MorphError::PreconditionFailed(failed));
    }
    let mut out = axioms;
    let star = clopen_algebra(fr, &opts.limits)?;
    let cf = canonical_frame(&star.nle);
    let f = &fr.frame;
    if f.len(Sort::One).max(f.len(Sort::Dual)) > ISO_SEARCH_MAX_POINTS {
        out.push(Check::skipped(
            "frame-iso",
            format!("more than {ISO_SEARCH_MAX_POINTS} points per sort"),
        ));
        return Ok((out, None));
    }
    let iso = find_frame_iso(fr, &cf.frame);
    out.push(match &iso {
        Some(i) => Check::pass("frame-iso").with_detail(
            (0..i.p.len())
                .map(|x| {
                    format!(
                        "{}↦{}",
                        f.point_name(Sort::One, x),
                        cf.sorted_frame().point_name(Sort::One, i.p[x])
                    )
                })
                .chain((0..i.q.len()).map(|y| {
                    format!(
                        "{}↦{}",
                        f.point_name(Sort::Dual, y),
                        cf.sorted_frame().point_name(Sort::Dual, i.q[y])
                    )
                }))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        None => Check::fail(
            "frame-iso",
            json!({"points": [f.len(Sort::One), f.len(Sort::Dual)], "clopens": star.sets.len()}),
        ),
    });
    Ok((out, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dual_of_c3_to_c2_passes_everything() {
        let h = fixtures::c3_to_c2();
        let d = dual_of_homomorphism(&h).unwrap();
        for c in check_morphism(&d.morphism, &CheckOptions::default()) {
            assert!(c.passed(), "{c:?}");
        }
        assert!(check_naturality(&h, &d).passed());
    }

    #[test]
    fn dual_maps_filters_to_preimages() {
        let h = fixtures::c3_to_c2();
        let d = dual_of_homomorphism(&h).unwrap();
        let m = &d.morphism;
        // X* = [↑0, ↑1] of C2 ; h⁻¹[↑1] = {e, 1} = ↑e
        let src = m.source.frame.clone();
        let tgt = m.target.frame.clone();
        let up1 = src.point_index(Sort::One, "↑1").unwrap();
        assert_eq!(tgt.point_name(Sort::One, m.p[up1]), "↑e");
        let down0 = src.point_index(Sort::Dual, "↓0").unwrap();
        assert_eq!(tgt.point_name(Sort::Dual, m.q[down0]), "↓0");
    }

    #[test]
    fn identity_and_goedel_identity() {
        let g3 = fixtures::g3();
        let h = LatticeHomomorphism::identity(&g3);
        let d = dual_of_homomorphism(&h).unwrap();
        for c in check_morphism(&d.morphism, &CheckOptions::default()) {
            assert!(c.passed(), "{c:?}");
        }
        assert_eq!(d.morphism.p, (0..3).collect::<Vec<_>>());
    }

    #[test]
    fn lattice_roundtrips() {
        for nle in fixtures::standard() {
            let (checks, iso) = roundtrip_lattice(&nle, &Limits::default());
            assert!(
                iso,
                "{}: {:?}",
                nle.name,
                checks.iter().filter(|c| c.failed()).collect::<Vec<_>>()
            );
        }
        let (checks, iso) = roundtrip_lattice(&fixtures::c2_negation(), &Limits::default());
        assert!(!iso);
        assert!(checks.iter().any(|c| c.id == "normality:neg" && c.failed()));
    }

    #[test]
    fn frame_roundtrips() {
        for nle in [fixtures::c2(), fixtures::m3(), fixtures::g3()] {
            let cf = canonical_frame(&nle);
            let (_, iso) = roundtrip_frame(&cf.frame, &CheckOptions::default()).unwrap();
            assert!(iso.is_some(), "{}", nle.name);
        }
        assert!(matches!(
            roundtrip_frame(&fixtures::broken_frame(), &CheckOptions::default()),
            Err(MorphError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn iso_search_rejects_different_frames() {
        let a = canonical_frame(&fixtures::m3()).frame;
        let b = canonical_frame(&fixtures::n5()).frame;
        assert!(find_frame_iso(&a, &b).is_none());
        assert!(find_frame_iso(&a, &a).is_some());
    }

    #[test]
    fn composition_of_identities() {
        let cf = canonical_frame(&fixtures::g3()).frame;
        let id = FrameMorphism::identity(&cf);
        let twice = id.after(&id).unwrap();
        assert_eq!(twice.p, id.p);
        assert_eq!(twice.q, id.q);
    }

    #[test]
    fn collapsing_a_separated_pair_fails_max2() {
        // X₂ = {a, b} separated by y1; y2 has no I-neighbour
        let src = SortedFrame::from_fn(
            "two",
            vec!["a".into(), "b".into()],
            vec!["y1".into(), "y2".into()],
            |x, y| !(x == 0 && y == 0),
        );
        assert!(src.check_separated());
        let tgt = canonical_frame(&fixtures::c2()).frame;
        let up1 = tgt.frame.point_index(Sort::One, "↑1").unwrap();
        let down0 = tgt.frame.point_index(Sort::Dual, "↓0").unwrap();
        let m = FrameMorphism::new(
            FrameWithRelations::new(src, vec![]),
            tgt,
            vec![up1, up1],
            vec![down0, down0],
        )
        .unwrap();
        let checks = check_morphism(&m, &CheckOptions::default());
        let max2 = checks.iter().find(|c| c.id == "MAx2").unwrap();
        assert!(max2.failed());
        assert_eq!(max2.witness.as_ref().unwrap()["y'"], "y2");
        assert!(checks.iter().any(|c| c.id == "MAx1" && c.passed()));
    }

    #[test]
    fn max2_control_fails_only_max2() {
        let m = fixtures::max2_violation();
        let failed: Vec<String> = check_morphism(&m, &CheckOptions::default())
            .into_iter()
            .filter(|c| c.failed())
            .map(|c| c.id)
            .collect();
        assert_eq!(failed, ["MAx2"]);
    }

    #[test]
    fn no_small_canonical_map_fails_max2_alone() {
        let ls = [fixtures::one_point(), fixtures::c2(), fixtures::c3()];
        for a in &ls {
            for b in &ls {
                let (fa, fb) = (canonical_frame(a).frame, canonical_frame(b).frame);
                let nx = fa.frame.len(Sort::One);
                let ny = fa.frame.len(Sort::Dual);
                let dims: Vec<usize> = std::iter::repeat_n(fb.frame.len(Sort::One), nx)
                    .chain(std::iter::repeat_n(fb.frame.len(Sort::Dual), ny))
                    .collect();
                for t in tuples::all_tuples(&dims) {
                    let m = FrameMorphism::new(fa.clone(), fb.clone(), t[..nx].to_vec(), t[nx..].to_vec()).unwrap();
                    let checks = check_morphism(&m, &CheckOptions::default());
                    let failed: Vec<&str> = checks.iter().filter(|c| c.failed()).map(|c| c.id.as_str()).collect();
                    assert_ne!(failed, ["MAx2"], "{} -> {}: {t:?}", a.name, b.name);
                }
            }
        }
    }
}
