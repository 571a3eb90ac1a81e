use super::checks::frattini_generation;
use super::kernel::{construct_over, transfer};
use crate::bits::ElemSet;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus;
use crate::grp::{is_characteristic_p, ord, p_part};
use crate::ploc::{is_cr_complete, is_linking, Locality};
use crate::report::{Report, Timer, Verdict};
use serde_json::json;
use std::collections::BTreeSet;

/// The data of a product `NH` with `H ≤ N_L(T*)` and the locality `(NH, Δ0, S0)`.
#[derive(Clone, Debug)]
pub struct ProductInstance {
    pub ambient: Locality,
    pub n: ElemSet,
    pub h: ElemSet,
    pub tstar: u64,
    /// `T = N ∩ S`.
    pub t: u64,
    /// Objects of the kernel, masks over the ambient `S` inside `T`.
    pub gamma_n: Vec<u64>,
    pub nh: ElemSet,
    /// `H̃ = N_N(T*)·H`.
    pub h_tilde: ElemSet,
    pub s0: u64,
    /// `Δ0 = {P ≤ S0 : P ∩ T ∈ Γ_N}`, masks over the ambient `S`.
    pub delta0: Vec<u64>,
    /// `(NH, Δ0, S0)` as a locality, and the ambient-to-local element map.
    pub locality: Locality,
    pub index: Vec<usize>,
    /// Clauses established while building the instance.
    pub clauses: Report,
}

fn product_set(l: &Locality, a: &ElemSet, b: &ElemSet) -> ElemSet {
    let mut out = ElemSet::empty();
    for x in a.iter() {
        for y in b.iter() {
            if let Some(z) = l.mul(x, y) {
                out.insert(z);
            }
        }
    }
    out
}

/// `P ∈ Δ ⇔ P ∩ T* ∈ Δ` for every `P ≤ S`; returns a violating `P`.
fn object_law_violation(l: &Locality, tstar: u64) -> Option<u64> {
    l.lattice().subs.iter().copied().find(|&p| l.is_object(p) != l.is_object(p & tstar))
}

/// Build `NH` and `(NH, Δ0, S0)`. `gamma_n` defaults to `{P ∩ N : P ∈ Δ}`.
pub fn product_nh(
    l: &Locality,
    n: &ElemSet,
    h: &ElemSet,
    tstar: u64,
    gamma_n: Option<&[u64]>,
    caps: &Caps,
) -> Result<ProductInstance> {
    let timer = Timer::start();
    let mut r = Report::new("product-nh");
    let lat = l.lattice();
    let p = l.p();
    if !l.is_partial_normal(n) {
        return Err(Error::Precondition(format!("N is not partial normal: {:?}", l.normality_witness(n))));
    }
    r.check("pre: N is partial normal", true, json!(null));
    if !l.is_object(tstar) {
        return Err(Error::Precondition(format!("T* = {tstar:#x} is not an object")));
    }
    if let Some(bad) = object_law_violation(l, tstar) {
        return Err(Error::Precondition(format!("object law P ∈ Δ ⇔ P ∩ T* ∈ Δ fails at P = {bad:#x}")));
    }
    r.check("pre: T* ∈ Δ and P ∈ Δ ⇔ P ∩ T* ∈ Δ", true, json!(null));
    let nts = l.normalizer_of_mask(tstar);
    let (gstar, order) = l.subset_group(&nts, "N_L(T*)")?;
    let mut local = vec![usize::MAX; l.size()];
    for (i, &x) in order.iter().enumerate() {
        local[x] = i;
    }
    let h_local = ElemSet::from_iter(h.iter().map(|x| local[x]).filter(|&x| x != usize::MAX));
    if h_local.len() != h.len() || !gstar.is_subgroup(&h_local) {
        return Err(Error::Precondition("H is not a subgroup of N_L(T*)".into()));
    }
    r.check("pre: H ≤ N_L(T*)", true, json!(null));

    let t = l.mask_of(n);
    let gamma: Vec<u64> = match gamma_n {
        Some(g) => {
            let set: BTreeSet<u64> = g.iter().copied().collect();
            set.into_iter().collect()
        }
        None => {
            let set: BTreeSet<u64> = l.delta().iter().map(|&q| q & t).collect();
            set.into_iter().collect()
        }
    };

    // (a) NH = HN is a partial subgroup.
    let nh = product_set(l, n, h);
    let hn = product_set(l, h, n);
    r.check("(a) NH = HN", nh == hn, json!({"NH": nh.len(), "HN": hn.len()}));
    if !l.is_partial_subgroup(&nh) {
        return Err(Error::Invariant("NH is not closed under products".into()));
    }
    r.check("(a) NH is a partial subgroup", true, json!(null));

    // (b) H̃ = N_N(T*)·H inside the group N_L(T*).
    let nnt_local = ElemSet::from_iter(nts.intersection(n).iter().map(|x| local[x]));
    let ht_local = gstar.product_set(&nnt_local, &h_local);
    let h_tilde = ElemSet::from_iter(ht_local.iter().map(|x| order[x]));
    r.check("(b) H̃ is a subgroup of N_L(T*)", gstar.is_subgroup(&ht_local), json!(null));
    let n_nh = nts.intersection(&nh);
    r.check("(b) H̃ = N_NH(T*)", n_nh == h_tilde, json!({"H~": h_tilde.len(), "N_NH(T*)": n_nh.len()}));
    r.na("(b) H̃ = N_NH(T₀)", "out of scope: T₀ is not housed");

    // S0: T(S∩H) when S∩H is Sylow in H, otherwise a Sylow subgroup of H̃ in S over T.
    let g = l.group();
    let sh = l.mask_of(h);
    let h_order = h.len();
    let ht_p = p_part(h_tilde.len(), p);
    let s0 = if ord(sh) == p_part(h_order, p) {
        let s0 = g.product(t, sh);
        r.check("S0 = T(S∩H)", lat.id(s0).is_some(), json!(s0));
        s0
    } else {
        r.na("S0 = T(S∩H)", "S ∩ H is not Sylow in H");
        lat.subs
            .iter()
            .copied()
            .find(|&q| q & t == t && ord(q) == ht_p && l.mask_elems(q).is_subset(&h_tilde))
            .ok_or_else(|| Error::Precondition("no Sylow subgroup of H̃ inside S contains T".into()))?
    };
    let s_nh = l.mask_of(&nh);
    r.check("S0 = S ∩ NH", s0 == s_nh, json!({"S0": s0, "S∩NH": s_nh}));
    let sylow = l.mask_elems(s0).is_subset(&h_tilde) && ord(s0) == ht_p;
    r.check("S0 ∈ Syl_p(H̃)", sylow, json!({"S0": ord(s0), "H~_p": ht_p}));

    // (a), (c): (NH, Δ0, S0) is a cr-complete locality with kernel (N, Γ_N, T).
    let c = construct_over(l, &nh, s0, n, &gamma, caps)?;
    for cl in &c.report.clauses {
        r.push(&format!("(a) {}", cl.name), cl.verdict, cl.witness.clone());
    }
    let k = c.locality;
    let delta0: Vec<u64> = lat.subs.iter().copied().filter(|&q| q & !s0 == 0 && gamma.contains(&(q & t))).collect();
    let located = c.report.consistent;
    let (crc, f0_sat, normal, linking) = if located {
        let crc = is_cr_complete(&k, caps)?;
        let f0 = k.fusion(caps)?;
        let nk = ElemSet::from_iter(n.iter().map(|x| c.index[x]));
        let e = k.fusion_of(&nk, caps)?;
        let sat = fus::is_saturated(&f0);
        let normal = fus::relations(&f0, &e).normal;
        (crc, sat, normal, Some(is_linking(&k, caps)?))
    } else {
        (false, false, false, None)
    };
    if located {
        r.check("(c) (NH, Δ0, S0) is cr-complete", crc, json!(null));
        r.check("(e) F_S0(NH) is saturated", f0_sat, json!(null));
        r.check("(e) F_T(N) is normal in F_S0(NH)", normal, json!(null));
    } else {
        for name in ["(c) (NH, Δ0, S0) is cr-complete", "(e) F_S0(NH) is saturated", "(e) F_T(N) is normal in F_S0(NH)"] {
            r.na(name, "(NH, Δ0, S0) is not a locality with kernel");
        }
    }
    r.na("(e) T₀ clause", "out of scope: T₀ is not housed");
    let (hg, _) = gstar.subgroup_as_group(&ht_local, "H~")?;
    let ht_char = r.value("(d) H̃ has characteristic p", is_characteristic_p(&hg, p));
    match linking {
        Some(lk) => {
            r.value("(d) (NH, Δ0, S0) is a linking locality", lk);
            r.check("(d) H̃ has characteristic p iff (NH, Δ0, S0) is linking", ht_char == lk, json!([ht_char, lk]));
        }
        None => r.na("(d) H̃ has characteristic p iff (NH, Δ0, S0) is linking", "not a locality"),
    }
    r.na("(d) regular clause", "out of scope: regularity is not certified");

    Ok(ProductInstance {
        ambient: l.clone(),
        n: *n,
        h: *h,
        tstar,
        t,
        gamma_n: gamma,
        nh,
        h_tilde,
        s0,
        delta0,
        locality: k,
        index: c.index,
        clauses: timer.finish(r),
    })
}

/// Everything asserted for a product instance, plus Frattini generation in
/// `F0 = F_S0(NH)`.
pub fn product_report(pi: &ProductInstance, caps: &Caps) -> Result<Report> {
    let timer = Timer::start();
    let mut r = pi.clauses.clone();
    r.timing_ms = 0;
    let k = &pi.locality;
    let nk = ElemSet::from_iter(pi.n.iter().map(|x| pi.index[x]));
    let delta_k: BTreeSet<u64> = pi.delta0.iter().map(|&m| transfer(&pi.ambient, k, &pi.index, m)).collect();
    r.check(
        "Δ0 = {P ≤ S0 : P ∩ T ∈ Γ_N}",
        delta_k.iter().copied().eq(k.delta().iter().copied()),
        json!({"expected": delta_k.len(), "found": k.delta().len()}),
    );
    if r.verdict_of("(a) the result is a locality") == Some(Verdict::Pass) {
        let (ok, w) = frattini_generation(k, &nk, caps)?;
        r.check("F0 = ⟨F_S0(N·S0), N_F0(T)⟩", ok, w);
    } else {
        r.na("F0 = ⟨F_S0(N·S0), N_F0(T)⟩", "(NH, Δ0, S0) is not a locality");
    }
    let value_clauses = ["(d) H̃ has characteristic p", "(d) (NH, Δ0, S0) is a linking locality"];
    r.consistent = r.clauses.iter().all(|c| c.verdict != Verdict::Fail || value_clauses.contains(&c.name.as_str()));
    Ok(timer.finish(r))
}
