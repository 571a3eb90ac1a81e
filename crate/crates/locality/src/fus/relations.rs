use super::classes::{c_s, classify, is_saturated, Mode};
use super::system::{compose, image_mask, inverse, restrict, FusionSystem, Hom};
use crate::bits::bits64;
use crate::error::Result;
use crate::report::Report;
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// Overgroup-closed and closed under F-conjugacy.
pub fn is_f_closed(f: &FusionSystem, delta: &[u64]) -> bool {
    let set: BTreeSet<u64> = delta.iter().copied().collect();
    delta.iter().all(|&m| {
        f.lattice().id(m).is_some_and(|i| {
            f.class_of(i).iter().all(|q| set.contains(q))
                && f.subgroups().iter().all(|&o| o & m != m || set.contains(&o))
        })
    })
}

/// The closure of the F-morphisms between members of `delta` equals F.
pub fn is_delta_generated(f: &FusionSystem, delta: &[u64], morphism_cap: usize) -> Result<bool> {
    let set: BTreeSet<u64> = delta.iter().copied().collect();
    let mut gens = Vec::new();
    for &m in &set {
        let Some(i) = f.lattice().id(m) else { continue };
        for h in &f.store()[i] {
            let img = image_mask(h);
            if set.iter().any(|&q| img & !q == 0) {
                gens.push(Hom { domain: m, images: h.clone() });
            }
        }
    }
    let store = FusionSystem::closure_store(f.group(), f.lattice(), &gens, false, morphism_cap)?;
    Ok(&store == f.store())
}

/// Every class meeting `delta` respects saturation.
pub fn is_delta_saturated(f: &FusionSystem, delta: &[u64]) -> bool {
    classify(f)
        .iter()
        .filter(|c| c.members.iter().any(|m| delta.contains(m)))
        .all(|c| c.respects_saturation(Mode::Direct))
}

/// No element of `t` is F-conjugate to an element outside `t`.
pub fn is_strongly_closed(f: &FusionSystem, t: u64) -> bool {
    f.subgroups()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m & !t == 0)
        .all(|(i, _)| f.store()[i].iter().all(|h| image_mask(h) & !t == 0))
}

/// Aut_F(T)-invariance and the Frattini condition for a subsystem `e` over `t`.
fn invariance(f: &FusionSystem, e: &FusionSystem) -> (bool, bool, Value) {
    let t = e.support();
    let lat = f.lattice();
    let ti = lat.id(t).expect("T in lattice");
    let auts_t = f.auts(ti);
    let mut frattini = true;
    let mut stable = true;
    let mut witness = Value::Null;
    for (ei, &pm) in e.subgroups().iter().enumerate() {
        let pi = lat.id(pm).expect("sub");
        let ehoms = &e.store()[ei];
        let mut generated = BTreeSet::new();
        for phi0 in ehoms {
            for a in &auts_t {
                generated.insert(compose(lat, phi0, ti, a));
            }
        }
        let target: BTreeSet<Vec<u8>> = f.store()[pi].iter().filter(|h| image_mask(h) & !t == 0).cloned().collect();
        if frattini && generated != target {
            frattini = false;
            witness = json!({"frattini_fails_on": pm});
        }
        if stable {
            'outer: for a in &auts_t {
                // α⁻¹|_{Pα} · φ · α ∈ Hom_E(Pα, T)
                let pa = restrict(lat, ti, a, pi);
                let qm = image_mask(&pa);
                let q = lat.id(qm).expect("image");
                let a_inv = inverse(lat, pi, &pa, q);
                let Some(eq) = e.lattice().id(qm) else {
                    stable = false;
                    witness = json!({"invariance_fails_on": pm});
                    break;
                };
                for phi in ehoms {
                    let m = compose(lat, &compose(lat, &a_inv, pi, phi), ti, a);
                    if !e.store()[eq].contains(&m) {
                        stable = false;
                        witness = json!({"invariance_fails_on": pm, "aut": a});
                        break 'outer;
                    }
                }
            }
        }
    }
    (frattini, stable, witness)
}

/// Flags of a subsystem `e` over `T ≤ S` relative to `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relations {
    pub subsystem: bool,
    pub strongly_closed: bool,
    pub invariant: bool,
    pub weakly_normal: bool,
    pub normal: bool,
}

/// Each `α ∈ Aut_E(T)` extends to `ᾱ ∈ Aut_F(T·C_S(T))` with `[C_S(T), ᾱ] ≤ Z(T)`.
pub fn extension_condition(f: &FusionSystem, e: &FusionSystem) -> bool {
    let g = f.group();
    let lat = f.lattice();
    let t = e.support();
    let ti = lat.id(t).expect("T");
    let cst = c_s(f, t);
    let tc = g.product(t, cst);
    let tci = lat.id(tc).expect("TC_S(T) is a subgroup");
    let zt = g.center_of(t);
    let cands: Vec<Vec<u8>> = f
        .auts(tci)
        .into_iter()
        .filter(|abar| bits64(cst).all(|c| {
            let cb = abar[lat.pos(tci, c)] as usize;
            zt >> g.mul(g.inv(c), cb) & 1 == 1
        }))
        .map(|abar| restrict(lat, tci, &abar, ti))
        .collect();
    e.auts(e.lattice().id(t).expect("T")).iter().all(|a| cands.contains(a))
}

pub fn relations(f: &FusionSystem, e: &FusionSystem) -> Relations {
    let subsystem = *e.group() == *f.group() && e.is_subsystem_of(f);
    let strongly_closed = subsystem && is_strongly_closed(f, e.support());
    let invariant = strongly_closed && {
        let (fr, st, _) = invariance(f, e);
        fr && st
    };
    let weakly_normal = invariant && is_saturated(e);
    let normal = weakly_normal && extension_condition(f, e);
    Relations { subsystem, strongly_closed, invariant, weakly_normal, normal }
}

/// Report form of [`relations`]; invariance clauses are `na` when `T` is not strongly closed.
pub fn subsystem_relations(f: &FusionSystem, e: &FusionSystem) -> Result<Report> {
    let mut r = Report::new("subsystem-relations");
    let sub = *e.group() == *f.group() && e.is_subsystem_of(f);
    r.check("E is a subsystem of F", sub, json!({"T": e.support()}));
    let sc = sub && is_strongly_closed(f, e.support());
    r.check("T strongly closed", sc, json!({"T": e.support()}));
    if !sc {
        for n in ["invariant", "weakly normal", "normal"] {
            r.na(n, "T is not strongly closed in F");
        }
        r.consistent = false;
        return Ok(r);
    }
    let (fr, st, w) = invariance(f, e);
    let inv = r.check("invariant", fr && st, w);
    let sat = is_saturated(e);
    let wn = r.check("weakly normal", inv && sat, json!({"E_saturated": sat}));
    let ext = extension_condition(f, e);
    let nm = r.check("normal", wn && ext, json!({"extension_condition": ext}));
    r.consistent = nm;
    Ok(r)
}
