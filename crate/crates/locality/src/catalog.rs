//! Built-in instances.
//!
//! Payloads are produced by code so that element indices always agree with
//! the deterministic enumeration of the groups they refer to. Every instance
//! is checked by its module validator when loaded.

use crate::bits::{bits64, ElemSet};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus::{self, FusionSystem, Lattice, NONE};
use crate::grp::named::*;
use crate::grp::{FiniteGroup, PGroup};
use crate::io::{
    group_to_doc, locality_to_doc, FromGroupDoc, FusionDoc, GroupDoc, GroupRef, HomDoc, Instance, Kind, KernelDoc,
    LocalityDoc, Object, ProductDoc, Provenance,
};
use crate::kern::is_kernel;
use crate::ploc::{validate, Locality, UNDEF};
use serde_json::Value;
use std::collections::HashSet;

pub struct Entry {
    pub name: &'static str,
    pub kind: Kind,
    pub notes: &'static str,
    pub depth: Option<usize>,
    build: fn() -> Value,
}

macro_rules! entry {
    ($name:expr, $kind:expr, $depth:expr, $build:expr, $notes:expr) => {
        Entry { name: $name, kind: $kind, notes: $notes, depth: $depth, build: $build }
    };
}

pub fn entries() -> Vec<Entry> {
    use Kind::*;
    vec![
        entry!("s4", Group, None, || group_payload(&symmetric(4)), "symmetric group of degree 4"),
        entry!("gl2-3", Group, None, || group_payload(&gl2_3()), "GL(2,3) acting on the nonzero vectors of F_3^2"),
        entry!("s4-d8", Fusion, None, s4_d8, "F_S(S4) over S = D8, p = 2"),
        entry!("a4-v4", Fusion, None, a4_v4, "F_S(A4) over S = V4, p = 2"),
        entry!("s3-c3", Fusion, None, s3_c3, "F_S(S3) over S = C3, p = 3"),
        entry!("d8", Fusion, None, d8_alone, "inner fusion system of D8"),
        entry!("gl2-3-sd16", Fusion, None, gl2_3_sd16, "F_S(GL(2,3)) over S = SD16, p = 2"),
        entry!("sl2-3-q8", Fusion, None, sl2_3_q8, "F_S(SL(2,3)) over S = Q8, p = 2"),
        entry!(
            "d8-nonsat",
            Fusion,
            None,
            d8_nonsat,
            "closure over D8 of an isomorphism between non-conjugate reflection subgroups; not saturated"
        ),
        entry!("s4-locality", Locality, None, s4_locality, "S4 with objects the overgroups of O_2(S4) in D8"),
        entry!("a4-locality", Locality, None, a4_locality, "A4 with every subgroup of V4 an object"),
        entry!("s5-centric", Locality, None, s5_centric, "S5 with objects the F-centric subgroups of D8"),
        entry!(
            "s4-kernel",
            KernelInstance,
            None,
            s4_kernel,
            "S4 over the overgroups of V4 with kernel A4; Gamma0 = {V4} gives a trivial Theta"
        ),
        entry!(
            "c3xs4-theta",
            KernelInstance,
            None,
            c3xs4_theta,
            "C3 x S4 over the overgroups of V4 with kernel C3 x A4; Theta = C3 is non-trivial and the \
             characteristic-p clauses all fail because C3 centralizes O_2"
        ),
        entry!(
            "c2xs3-kernel",
            KernelInstance,
            None,
            c2xs3_kernel,
            "C2 x S3 with every subgroup an object and kernel S3; the central C2 makes every \
             characteristic-p clause false"
        ),
        entry!(
            "s4xs4-negative",
            KernelInstance,
            Some(3),
            s4xs4_negative,
            "(D8 x S4) u (S4 x D8) inside S4 x S4, objects the subgroups of D8 x D8 properly containing \
             V4 x V4; V4 x V4 is centric radical but not an object, so the locality is not cr-complete; \
             its only kernel is L itself; axioms certified to word length 3"
        ),
        entry!(
            "s4-product",
            ProductInstance,
            None,
            s4_product,
            "S4 locality, N = A4, Tstar supplied as O_2(S4), H = <(1 2)>; NH = L"
        ),
        entry!(
            "c3xs4-product",
            ProductInstance,
            None,
            c3xs4_product,
            "C3 x S4 locality, N = A4, Tstar supplied as O_2(S4), H = <(1 2)>; NH = S4 is proper"
        ),
    ]
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Option<Instance> {
    entries().into_iter().find(|e| e.name == name).map(|e| Instance {
        name: e.name.to_string(),
        kind: e.kind,
        provenance: Provenance::Catalog,
        notes: e.notes.to_string(),
        depth: e.depth,
        payload: (e.build)(),
    })
}

pub fn all() -> Vec<Instance> {
    names().into_iter().filter_map(get).collect()
}

/// Groups addressable by name from a group reference.
pub fn group_doc(name: &str) -> Option<GroupDoc> {
    let g = match name {
        "s3" => symmetric(3),
        "s4" => symmetric(4),
        "s5" => symmetric(5),
        "a4" => alternating4(),
        "d8" => dihedral8(),
        "c2xc2" => klein4(),
        "gl2-3" => gl2_3(),
        "sl2-3" => sl2_3(),
        "c3xs4" => c3xs4(),
        "c2xs3" => c2xs3(),
        _ => return None,
    };
    Some(group_to_doc(&g))
}

/// Materialize a catalog instance and run its module validator.
pub fn load(name: &str, caps: &Caps) -> Result<(Instance, Object)> {
    let inst = get(name).ok_or_else(|| Error::Input(format!("unknown catalog instance `{name}`")))?;
    let obj = inst.materialize(caps)?;
    certify(&inst, &obj, caps)?;
    Ok((inst, obj))
}

/// The validator of each kind: axioms for fusion systems, locality axioms at
/// the certified depth, kernel and normality conditions for instances.
pub fn certify(inst: &Instance, obj: &Object, caps: &Caps) -> Result<()> {
    let depth = inst.caps(caps).depth;
    let locality = |l: &Locality| -> Result<()> {
        let r = validate(l, depth);
        if r.consistent {
            Ok(())
        } else {
            Err(Error::Invariant(format!("{} fails the locality axioms: {}", inst.name, r.to_json())))
        }
    };
    match obj {
        Object::Group(_) => Ok(()),
        Object::Fusion(f) => f.verify_axioms().map_err(Error::Invariant),
        Object::Locality(l) => locality(l),
        Object::Kernel(k) => {
            locality(&k.locality)?;
            if is_kernel(&k.locality, &k.n)? {
                Ok(())
            } else {
                Err(Error::Invariant(format!("{}: N is not a kernel", inst.name)))
            }
        }
        Object::Product(pd) => {
            locality(&pd.locality)?;
            if pd.locality.is_partial_normal(&pd.n) {
                Ok(())
            } else {
                Err(Error::Invariant(format!("{}: N is not partial normal", inst.name)))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Groups

fn group_payload(g: &FiniteGroup) -> Value {
    serde_json::to_value(GroupRef::Inline(group_to_doc(g))).expect("serializes")
}

fn perms(name: &str, degree: usize, gens: &[&[&[usize]]]) -> FiniteGroup {
    let gens: Vec<Vec<usize>> = gens.iter().map(|c| perm(degree, c)).collect();
    FiniteGroup::from_perms(name, &gens, degree, crate::bits::MAX_ORDER).expect("catalog group closes")
}

/// Matrices over F_3 as permutations of the eight nonzero row vectors, `v ↦ vM`.
fn matrix_perm(m: [[usize; 2]; 2]) -> Vec<usize> {
    let vecs: Vec<(usize, usize)> = (0..9).map(|i| (i / 3, i % 3)).filter(|&v| v != (0, 0)).collect();
    vecs.iter()
        .map(|&(a, b)| {
            let w = ((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3);
            vecs.iter().position(|&v| v == w).expect("nonzero image")
        })
        .collect()
}

fn gl2_3() -> FiniteGroup {
    let gens = [matrix_perm([[1, 1], [0, 1]]), matrix_perm([[0, 1], [2, 0]]), matrix_perm([[2, 0], [0, 1]])];
    FiniteGroup::from_perms("GL(2,3)", &gens, 8, 64).expect("order 48")
}

fn sl2_3() -> FiniteGroup {
    let gens = [matrix_perm([[1, 1], [0, 1]]), matrix_perm([[0, 1], [2, 0]])];
    FiniteGroup::from_perms("SL(2,3)", &gens, 8, 64).expect("order 24")
}

fn c3xs4() -> FiniteGroup {
    perms("C3xS4", 7, &[&[&[1, 2]], &[&[1, 2, 3, 4]], &[&[5, 6, 7]]])
}

fn c2xs3() -> FiniteGroup {
    perms("C2xS3", 5, &[&[&[1, 2]], &[&[3, 4, 5]], &[&[3, 4]]])
}

/// Subgroup of a permutation group generated by permutations given in cycles.
fn gen_by(g: &FiniteGroup, degree: usize, gens: &[&[&[usize]]]) -> ElemSet {
    let set = ElemSet::from_iter(gens.iter().map(|c| g.find_perm(&perm(degree, c)).expect("element of the group")));
    g.generate(&set)
}

/// `D8 = ⟨(1 2), (1 3)(2 4)⟩`, the Sylow 2-subgroup of S4 containing `(1 2)`.
fn d8_of(g: &FiniteGroup, degree: usize) -> ElemSet {
    gen_by(g, degree, &[&[&[1, 2]], &[&[1, 3], &[2, 4]]])
}

fn v4_of(g: &FiniteGroup, degree: usize) -> ElemSet {
    gen_by(g, degree, &[&[&[1, 2], &[3, 4]], &[&[1, 3], &[2, 4]]])
}

fn a4_of(g: &FiniteGroup, degree: usize) -> ElemSet {
    gen_by(g, degree, &[&[&[1, 2, 3]], &[&[1, 2], &[3, 4]]])
}

/// Subgroups of `s` (as sorted group elements) satisfying `keep`.
fn subgroups_of(g: &FiniteGroup, s: &ElemSet, keep: impl Fn(&ElemSet) -> bool) -> Vec<Vec<usize>> {
    let (sg, back) = g.subgroup_as_group(s, "S").expect("subgroup");
    let pg = PGroup::from_group(&sg).expect("p-group");
    pg.subgroups_in(pg.full())
        .into_iter()
        .map(|m| ElemSet::from_iter(bits64(m).map(|x| back[x])))
        .filter(|q| keep(q))
        .map(|q| q.to_vec())
        .collect()
}

// ---------------------------------------------------------------------------
// Fusion systems

fn from_group(g: &FiniteGroup, s: &ElemSet) -> FromGroupDoc {
    FromGroupDoc { g: GroupRef::Inline(group_to_doc(g)), s: s.to_vec() }
}

fn fusion_payload(g: &FiniteGroup, s: &ElemSet, p: usize) -> Value {
    let doc = FusionDoc::FromGroup { p: Some(p), from_group: from_group(g, s) };
    serde_json::to_value(doc.canonical()).expect("serializes")
}

fn s4_d8() -> Value {
    let g = symmetric(4);
    fusion_payload(&g, &d8_of(&g, 4), 2)
}

fn a4_v4() -> Value {
    let g = alternating4();
    fusion_payload(&g, &g.one_sylow(2), 2)
}

fn s3_c3() -> Value {
    let g = symmetric(3);
    fusion_payload(&g, &g.one_sylow(3), 3)
}

fn gl2_3_sd16() -> Value {
    let g = gl2_3();
    fusion_payload(&g, &g.one_sylow(2), 2)
}

fn sl2_3_q8() -> Value {
    let g = sl2_3();
    fusion_payload(&g, &g.one_sylow(2), 2)
}

fn d8_alone() -> Value {
    let doc = FusionDoc::Generated { p: 2, s: GroupRef::Inline(group_to_doc(&dihedral8())), generators: vec![] };
    serde_json::to_value(doc).expect("serializes")
}

/// `⟨(1 3)⟩ → ⟨(1 2)(3 4)⟩` inside `D8 = ⟨(1 2 3 4), (1 3)⟩`: the two classes of
/// reflections become fused without any automorphism of `D8` to account for it.
fn d8_nonsat() -> Value {
    let g = dihedral8();
    let a = g.find_perm(&perm(4, &[&[1, 3]])).expect("reflection");
    let b = g.find_perm(&perm(4, &[&[1, 2], &[3, 4]])).expect("reflection");
    let doc = FusionDoc::Generated {
        p: 2,
        s: GroupRef::Inline(group_to_doc(&g)),
        generators: vec![HomDoc { domain: vec![0, a], images: vec![0, b] }],
    };
    serde_json::to_value(doc.canonical()).expect("serializes")
}

// ---------------------------------------------------------------------------
// Localities

fn locality_doc(g: &FiniteGroup, s: &ElemSet, p: usize, delta: Vec<Vec<usize>>) -> LocalityDoc {
    LocalityDoc::FromGroup { p: Some(p), from_group: from_group(g, s), delta }.canonical()
}

fn over_v4(g: &FiniteGroup, degree: usize) -> LocalityDoc {
    let s = d8_of(g, degree);
    let v = v4_of(g, degree);
    locality_doc(g, &s, 2, subgroups_of(g, &s, |q| v.is_subset(q)))
}

fn s4_locality() -> Value {
    serde_json::to_value(over_v4(&symmetric(4), 4)).expect("serializes")
}

fn a4_locality() -> Value {
    let g = alternating4();
    let s = g.one_sylow(2);
    serde_json::to_value(locality_doc(&g, &s, 2, subgroups_of(&g, &s, |_| true))).expect("serializes")
}

fn s5_centric() -> Value {
    let g = symmetric(5);
    let s = d8_of(&g, 5);
    let (f, back) = FusionSystem::from_group(&g, &s, 2, &Caps::default()).expect("fusion of S5");
    let delta = fus::centric(&f).iter().map(|&m| ElemSet::from_iter(bits64(m).map(|x| back[x])).to_vec()).collect();
    serde_json::to_value(locality_doc(&g, &s, 2, delta)).expect("serializes")
}

fn kernel_payload(locality: LocalityDoc, n: &ElemSet, gamma0: Option<Vec<Vec<usize>>>) -> Value {
    serde_json::to_value(KernelDoc { locality, n: n.to_vec(), gamma0 }.canonical()).expect("serializes")
}

fn s4_kernel() -> Value {
    let g = symmetric(4);
    kernel_payload(over_v4(&g, 4), &a4_of(&g, 4), Some(vec![v4_of(&g, 4).to_vec()]))
}

fn c3xs4_theta() -> Value {
    let g = c3xs4();
    let n = g.product_set(&a4_of(&g, 7), &gen_by(&g, 7, &[&[&[5, 6, 7]]]));
    kernel_payload(over_v4(&g, 7), &n, Some(vec![v4_of(&g, 7).to_vec()]))
}

fn c2xs3_kernel() -> Value {
    let g = c2xs3();
    let s = g.one_sylow(2);
    let n = gen_by(&g, 5, &[&[&[3, 4, 5]], &[&[3, 4]]]);
    let t = s.intersection(&n);
    let loc = locality_doc(&g, &s, 2, subgroups_of(&g, &s, |_| true));
    kernel_payload(loc, &n, Some(vec![t.to_vec()]))
}

fn product_payload(g: &FiniteGroup, degree: usize) -> Value {
    let doc = ProductDoc {
        locality: over_v4(g, degree),
        n: a4_of(g, degree).to_vec(),
        h: gen_by(g, degree, &[&[&[1, 2]]]).to_vec(),
        tstar: v4_of(g, degree).to_vec(),
        gamma_n: None,
    };
    serde_json::to_value(doc.canonical()).expect("serializes")
}

fn s4_product() -> Value {
    product_payload(&symmetric(4), 4)
}

fn c3xs4_product() -> Value {
    product_payload(&c3xs4(), 7)
}

/// The locality `(X × Y)|_Δ` for Sylow subgroups `sx`, `sy`, built pairwise so
/// that `X × Y` itself is never tabulated. `S = sx × sy` is indexed `i·|sy| + j`
/// over the ascending members of each factor and occupies the first elements;
/// `objects` picks `Δ` from the subgroup lattice of `S`.
pub fn product_locality(
    name: &str,
    p: usize,
    (x, sx): (&FiniteGroup, &ElemSet),
    (y, sy): (&FiniteGroup, &ElemSet),
    objects: impl Fn(&Lattice, &PGroup) -> Vec<u64>,
) -> Result<Locality> {
    let dx = sx.to_vec();
    let dy = sy.to_vec();
    let (kx, ky) = (dx.len(), dy.len());
    if kx * ky > 64 || dx.first() != Some(&0) || dy.first() != Some(&0) {
        return Err(Error::Input("Sylow factors must contain the identity and have product order at most 64".into()));
    }
    let pos = |d: &[usize], n: usize| {
        let mut v = vec![NONE; n];
        for (i, &a) in d.iter().enumerate() {
            v[a] = i as u8;
        }
        v
    };
    let (px, py) = (pos(&dx, x.order()), pos(&dy, y.order()));
    let k = kx * ky;
    let table: Vec<Vec<usize>> = (0..k)
        .map(|u| {
            (0..k)
                .map(|v| {
                    let a = px[x.mul(dx[u / ky], dx[v / ky])] as usize;
                    let b = py[y.mul(dy[u % ky], dy[v % ky])] as usize;
                    a * ky + b
                })
                .collect()
        })
        .collect();
    let pg = PGroup::from_group(&FiniteGroup::from_table("S", &table, 64)?)?;
    let lat = Lattice::new(&pg, pg.full());
    let delta = objects(&lat, &pg);
    let dset: HashSet<u64> = delta.iter().copied().collect();

    // Local conjugation in each factor: cx[a·kx + i] is the index of dx[i]^a in sx, or NONE.
    let conj = |g: &FiniteGroup, d: &[usize], pl: &[u8]| -> Vec<u8> {
        (0..g.order()).flat_map(|a| d.iter().map(move |&s| pl[g.conj(s, a)]).collect::<Vec<_>>()).collect()
    };
    let (cx, cy) = (conj(x, &dx, &px), conj(y, &dy, &py));
    let conj_s = |u: usize, (a, b): (usize, usize)| -> Option<usize> {
        let i = cx[a * kx + u / ky];
        let j = cy[b * ky + u % ky];
        (i != NONE && j != NONE).then(|| i as usize * ky + j as usize)
    };
    let s_f = |f: (usize, usize)| (0..k).filter(|&u| conj_s(u, f).is_some()).fold(0u64, |m, u| m | 1 << u);

    let mut elems: Vec<(usize, usize)> = (0..k).map(|u| (dx[u / ky], dy[u % ky])).collect();
    for a in 0..x.order() {
        for b in 0..y.order() {
            if !(sx.contains(a) && sy.contains(b)) && dset.contains(&s_f((a, b))) {
                elems.push((a, b));
            }
        }
    }
    let n = elems.len();
    if n > crate::bits::MAX_ORDER {
        return Err(Error::OrderCap { cap: crate::bits::MAX_ORDER });
    }
    let mut index = vec![usize::MAX; x.order() * y.order()];
    for (i, &(a, b)) in elems.iter().enumerate() {
        index[a * y.order() + b] = i;
    }
    let at = |a: usize, b: usize| index[a * y.order() + b];
    let images: Vec<Vec<(usize, usize)>> =
        elems.iter().map(|&f| (0..k).filter_map(|u| conj_s(u, f).map(|v| (u, v))).collect()).collect();
    let mut prod = vec![UNDEF; n * n];
    for (fi, &f) in elems.iter().enumerate() {
        for (gi, &g) in elems.iter().enumerate() {
            let m = images[fi].iter().filter(|&&(_, v)| conj_s(v, g).is_some()).fold(0u64, |m, &(u, _)| m | 1 << u);
            if dset.contains(&m) {
                let c = at(x.mul(f.0, g.0), y.mul(f.1, g.1));
                if c == usize::MAX {
                    return Err(Error::Invariant("object set is not closed under overgroups".into()));
                }
                prod[fi * n + gi] = c as u32;
            }
        }
    }
    let inv = elems.iter().map(|&(a, b)| at(x.inv(a), y.inv(b))).collect();
    let s: Vec<usize> = (0..k).collect();
    let delta: Vec<Vec<usize>> = delta.iter().map(|&m| bits64(m).collect()).collect();
    Locality::from_table(name, p, inv, 0, prod, &s, &delta)
}

/// The S4 × S4 locality over the proper overgroups of `V4 × V4` in `D8 × D8`.
pub fn s4xs4_locality() -> Locality {
    let g = symmetric(4);
    let s = d8_of(&g, 4);
    let v = v4_of(&g, 4);
    let vi: Vec<usize> = s.iter().enumerate().filter(|&(_, x)| v.contains(x)).map(|(i, _)| i).collect();
    let ky = s.len();
    let pm = vi.iter().flat_map(|&i| vi.iter().map(move |&j| i * ky + j)).fold(0u64, |m, u| m | 1 << u);
    product_locality("S4xS4", 2, (&g, &s), (&g, &s), |lat, _| {
        lat.subs.iter().copied().filter(|&q| q & pm == pm && q != pm).collect()
    })
    .expect("pairwise construction succeeds")
}

fn s4xs4_negative() -> Value {
    let l = s4xs4_locality();
    kernel_payload(locality_to_doc(&l), &l.all(), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let names = names();
        let set: HashSet<_> = names.iter().collect();
        assert_eq!(set.len(), names.len());
    }

    #[test]
    fn linear_groups_have_expected_orders() {
        assert_eq!(gl2_3().order(), 48);
        assert_eq!(sl2_3().order(), 24);
        assert_eq!(c3xs4().order(), 72);
        assert_eq!(c2xs3().order(), 12);
    }

    #[test]
    fn s4xs4_has_expected_shape() {
        let l = s4xs4_locality();
        assert_eq!(l.size(), 320);
        assert_eq!(l.s_elems().len(), 64);
        assert_eq!(l.delta().len(), 4);
    }
}
