use super::kernel::{is_kernel, kernel_triple};
use crate::bits::{bits64, ElemSet};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus::{self, FusionSystem};
use crate::ploc::{check_projection, is_cr_complete, is_linking, validate, Locality};
use crate::report::{Report, Timer, Verdict};
use serde_json::json;
use std::collections::BTreeSet;

/// Morphisms as `(domain, images)` pairs over some fixed indexing of `S`.
type Canon = BTreeSet<(u64, Vec<u8>)>;

fn canon(f: &FusionSystem, relabel: &[u8]) -> Canon {
    let lat = f.lattice();
    let mut out = Canon::new();
    for (i, set) in f.store().iter().enumerate() {
        let dom: Vec<usize> = bits64(lat.subs[i]).collect();
        for phi in set {
            let mut pairs: Vec<(u8, u8)> = dom.iter().zip(phi).map(|(&x, &y)| (relabel[x], relabel[y as usize])).collect();
            pairs.sort_unstable();
            let mask = pairs.iter().fold(0u64, |m, &(x, _)| m | 1 << x);
            out.insert((mask, pairs.into_iter().map(|(_, y)| y).collect()));
        }
    }
    out
}

fn identity_labels(k: usize) -> Vec<u8> {
    (0..k as u8).collect()
}

/// `Θ = ⋃_{P ∈ Γ0} O_{p'}(N_{N0}(P))`.
pub fn theta_subgroup(l0: &Locality, n0: &ElemSet, gamma0: &[u64]) -> Result<ElemSet> {
    let mut theta = ElemSet::singleton(l0.unit());
    for &p in gamma0 {
        let nnp = l0.normalizer_of_mask(p).intersection(n0);
        let (g, order) = l0.subset_group(&nnp, "N_N(P)")?;
        for x in g.p_prime_core(l0.p()).iter() {
            theta.insert(order[x]);
        }
    }
    Ok(theta)
}

/// Restrict to the overgroups of `Γ0`, divide out `Θ`, and check that the
/// image of `N` is a linking kernel with the fusion systems unchanged.
pub fn linking_kernel_quotient(l: &Locality, n: &ElemSet, gamma0: &[u64], caps: &Caps) -> Result<(Locality, Report)> {
    let timer = Timer::start();
    let mut r = Report::new("theta-quotient");
    let triple = kernel_triple(l, n, caps)?;
    let t = triple.t;
    let lat = l.lattice();
    let f = l.fusion(caps)?;
    let e = l.fusion_of(n, caps)?;
    let g0: BTreeSet<u64> = gamma0.iter().copied().collect();

    let hyp = |r: &mut Report, name: &str, ok: bool, w: serde_json::Value| -> Result<()> {
        r.check(name, ok, w.clone());
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{name}: {w}")))
        }
    };
    hyp(&mut r, "pre: (N, Γ, T) is cr-complete", is_cr_complete(&triple.locality, caps)?, json!(null))?;
    let ecr = fus::cr(&e)?;
    let missing: Vec<u64> = ecr.iter().copied().filter(|m| !g0.contains(m)).collect();
    hyp(&mut r, "pre: E^cr ⊆ Γ0", missing.is_empty(), json!({"missing": missing}))?;
    let ec: BTreeSet<u64> = fus::centric(&e).into_iter().collect();
    let outside: Vec<u64> =
        gamma0.iter().copied().filter(|m| !triple.gamma.contains(m) || !ec.contains(m)).collect();
    hyp(&mut r, "pre: Γ0 ⊆ Γ ∩ E^c", outside.is_empty(), json!({"outside": outside}))?;
    let not_over = gamma0
        .iter()
        .flat_map(|&p| lat.subs.iter().map(move |&o| (p, o)))
        .find(|&(p, o)| o & p == p && o & !t == 0 && !g0.contains(&o));
    let not_econj = gamma0.iter().find_map(|&p| {
        e.homs_from(p).ok()?.iter().find(|phi| !g0.contains(&fus::image_mask(phi))).map(|phi| (p, phi.clone()))
    });
    hyp(
        &mut r,
        "pre: Γ0 is E-closed",
        not_over.is_none() && not_econj.is_none(),
        json!({"overgroup": not_over.map(|(p, o)| [p, o]), "conjugate": not_econj}),
    )?;
    let ti = f.id(t)?;
    let not_inv = gamma0.iter().find_map(|&p| {
        f.auts(ti)
            .into_iter()
            .map(|a| bits64(p).fold(0u64, |m, x| m | 1 << a[lat.pos(ti, x)]))
            .find(|img| !g0.contains(img))
            .map(|img| [p, img])
    });
    hyp(&mut r, "pre: Γ0 is Aut_F(T)-invariant", not_inv.is_none(), json!(not_inv))?;

    let delta0: Vec<u64> = lat.subs.iter().copied().filter(|&p| g0.contains(&(p & t))).collect();
    let (l0, idx) = l.restrict(&delta0)?;
    let n0 = ElemSet::from_iter(n.iter().filter(|&x| idx[x] != usize::MAX).map(|x| idx[x]));
    r.check("N0 = N ∩ L0 is a kernel of L0", is_kernel(&l0, &n0).unwrap_or(false), json!(null));
    let theta = theta_subgroup(&l0, &n0, gamma0)?;
    r.check("Θ is partial normal in L0", l0.is_partial_normal(&theta), json!(l0.normality_witness(&theta)));
    let meets_s = l0.mask_of(&theta);
    r.check("Θ ∩ S = 1", meets_s == 1, json!(meets_s));
    if meets_s != 1 || !l0.is_partial_normal(&theta) {
        r.consistent = false;
        return Ok((l0, timer.finish(r)));
    }
    let q = l0.quotient(&theta)?;
    let ql = &q.locality;
    r.value("Θ is non-trivial", theta.len() > 1);
    let v = validate(ql, caps.depth);
    r.check("L0/Θ is a locality", v.consistent, json!(v.clauses.iter().find(|c| c.verdict == Verdict::Fail).map(|c| c.name.clone())));
    r.check("L0 → L0/Θ is a projection", check_projection(&l0, ql, &q.projection).consistent, json!(null));

    // Re-identify S with its image: local index in S ↦ local index in S̄.
    let relabel: Vec<u8> = l0
        .s_elems()
        .iter()
        .map(|&s| ql.s_index(q.projection[s]).expect("S maps into S̄") as u8)
        .collect();
    let mut back = vec![0u8; relabel.len()];
    for (i, &j) in relabel.iter().enumerate() {
        back[j as usize] = i as u8;
    }
    let fq = ql.fusion(caps)?;
    let same_f = canon(&fq, &back) == canon(&f, &identity_labels(relabel.len()));
    r.check("F_S(L0/Θ) = F_S(L)", same_f, json!({"morphisms": [fq.morphism_count(), f.morphism_count()]}));

    let nbar = ElemSet::from_iter(n0.iter().map(|x| q.projection[x]));
    let eq = ql.fusion_of(&nbar, caps)?;
    let same_e = canon(&eq, &back) == canon(&e, &identity_labels(relabel.len()));
    r.check("F_T(N0/Θ) = F_T(N)", same_e, json!({"morphisms": [eq.morphism_count(), e.morphism_count()]}));
    match kernel_triple(ql, &nbar, caps) {
        Ok(kt) => {
            let linking = is_linking(&kt.locality, caps)?;
            r.check("N0/Θ is a kernel of L0/Θ", true, json!(null));
            r.check("N0/Θ is a linking locality", linking, json!(null));
        }
        Err(err) => {
            r.check("N0/Θ is a kernel of L0/Θ", false, json!(err.to_string()));
            r.na("N0/Θ is a linking locality", "not a kernel");
        }
    }
    r.consistent = r.clauses.iter().filter(|c| c.name != "Θ is non-trivial").all(|c| c.verdict == Verdict::Pass);
    Ok((ql.clone(), timer.finish(r)))
}
