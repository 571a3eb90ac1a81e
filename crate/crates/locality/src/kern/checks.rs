use super::kernel::{is_kernel, kernel_triple};
use crate::bits::{bits64, ElemSet};
use crate::caps::Caps;
use crate::error::Result;
use crate::fus::{self, FusionSystem, Hom};
use crate::grp::is_isomorphic;
use crate::ploc::{check_projection, Locality};
use crate::report::{Report, Timer};
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// `F_S(L) = ⟨F_S(N·S), N_F(T)⟩` as an equality of morphism stores.
pub fn frattini_generation(l: &Locality, n: &ElemSet, caps: &Caps) -> Result<(bool, Value)> {
    let f = l.fusion(caps)?;
    let t = l.mask_of(n);
    let mut ns = ElemSet::empty();
    for x in n.iter() {
        for &s in l.s_elems() {
            if let Some(y) = l.mul(x, s) {
                ns.insert(y);
            }
        }
    }
    if !l.is_partial_subgroup(&ns) {
        return Ok((false, json!("N·S is not a partial subgroup")));
    }
    let es = l.fusion_of(&ns, caps)?;
    let nft = fus::normalizer_subsystem(&f, t)?;
    let mut gens: BTreeSet<Hom> = es.gens().iter().cloned().collect();
    let lat = nft.lattice();
    for (i, set) in nft.store().iter().enumerate() {
        let dom = lat.subs[i];
        for phi in set {
            if phi.iter().zip(bits64(dom)).any(|(&y, x)| y as usize != x) {
                gens.insert(Hom { domain: dom, images: phi.clone() });
            }
        }
    }
    let generated =
        FusionSystem::closure(l.p(), l.group().clone(), l.group().full(), gens.into_iter().collect(), caps)?;
    let same = generated.same_as(&f);
    Ok((
        same,
        json!({
            "F_S(L)": f.morphism_count(),
            "F_S(NS)": es.morphism_count(),
            "N_F(T)": nft.morphism_count(),
            "generated": generated.morphism_count(),
        }),
    ))
}

pub fn frattini_report(l: &Locality, n: &ElemSet, caps: &Caps) -> Result<Report> {
    let timer = Timer::start();
    let mut r = Report::new("frattini-generation");
    let kernel = is_kernel(l, n).unwrap_or(false);
    if !r.check("pre: N is a kernel of L", kernel, json!(null)) {
        return Ok(timer.finish(r));
    }
    let (ok, w) = frattini_generation(l, n, caps)?;
    r.check("F_S(L) = ⟨F_S(N·S), N_F(T)⟩", ok, w);
    r.consistent = ok;
    Ok(timer.finish(r))
}

/// The maximal cosets of a kernel form a group isomorphic to `N_L(T)/N_N(T)`.
pub fn quotient_iso_report(l: &Locality, n: &ElemSet, caps: &Caps) -> Result<Report> {
    let timer = Timer::start();
    let mut r = Report::new("quotient-iso");
    let kernel = is_kernel(l, n).unwrap_or(false);
    if !r.check("pre: N is a kernel of L", kernel, json!(null)) {
        return Ok(timer.finish(r));
    }
    let triple = kernel_triple(l, n, caps)?;
    let q = l.quotient(n)?;
    let covered: usize = q.cosets.blocks.iter().map(Vec::len).sum();
    r.check("maximal cosets partition L", covered == l.size(), json!({"blocks": q.cosets.blocks.len()}));
    let proj = check_projection(l, &q.locality, &q.projection);
    r.check("L → L/N is a projection", proj.consistent, json!(null));
    let kernel_of = ElemSet::from_iter((0..l.size()).filter(|&f| q.projection[f] == q.locality.unit()));
    r.check("the projection has kernel N", kernel_of == *n, json!(kernel_of.to_vec()));
    let ql = &q.locality;
    let grp = ql.subset_group(&ql.all(), "L/N");
    r.check("L/N is a group", grp.is_ok(), json!(grp.as_ref().err().map(|e| e.to_string())));
    let nlt = l.normalizer_of_mask(triple.t);
    let (g, order) = l.subset_group(&nlt, "N_L(T)")?;
    let nnt = ElemSet::from_iter(order.iter().enumerate().filter(|(_, &x)| n.contains(x)).map(|(i, _)| i));
    let h = g.quotient(&nnt, "N_L(T)/N_N(T)")?;
    match grp {
        Ok((qg, _)) => {
            r.check("L/N ≅ N_L(T)/N_N(T)", is_isomorphic(&qg, &h), json!({"L/N": qg.order(), "N_L(T)/N_N(T)": h.order()}));
        }
        Err(_) => r.na("L/N ≅ N_L(T)/N_N(T)", "L/N is not a group"),
    }
    r.consistent = r.all_pass();
    Ok(timer.finish(r))
}
