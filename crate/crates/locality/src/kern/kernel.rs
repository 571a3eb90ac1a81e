use crate::bits::{bits64, ElemSet};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus;
use crate::ploc::{validate, Locality};
use crate::report::{Report, Verdict};
use serde_json::json;
use std::collections::BTreeSet;

/// A kernel `N` of a locality together with its own locality `(N, Γ, T)`.
#[derive(Clone, Debug)]
pub struct KernelTriple {
    pub n: ElemSet,
    /// `T = N ∩ S` as a mask over the ambient `S`.
    pub t: u64,
    /// `Γ = {P ∩ N : P ∈ Δ}`, masks over the ambient `S`.
    pub gamma: Vec<u64>,
    /// `(N, Γ, T)` as a locality of its own.
    pub locality: Locality,
    /// Ambient element index to index in `locality` (`usize::MAX` outside `N`).
    pub index: Vec<usize>,
}

impl KernelTriple {
    /// A mask over the ambient `S`, inside `T`, as a mask over the kernel's `T`.
    pub fn to_local(&self, ambient: &Locality, m: u64) -> u64 {
        transfer(ambient, &self.locality, &self.index, m)
    }

    /// Inverse of [`KernelTriple::to_local`].
    pub fn to_ambient(&self, ambient: &Locality, m: u64) -> u64 {
        bits64(m).fold(0u64, |a, x| {
            let f = self.locality.s_elems()[x];
            let back = self.index.iter().position(|&i| i == f).expect("kernel element");
            a | 1 << ambient.s_index(back).expect("T lies in S")
        })
    }
}

/// Transport a mask over `src`'s `S` to `dst`'s `S` along an element map.
pub(crate) fn transfer(src: &Locality, dst: &Locality, index: &[usize], m: u64) -> u64 {
    bits64(m).fold(0u64, |a, x| {
        let y = dst.s_index(index[src.s_elems()[x]]).expect("subgroup maps into the target Sylow");
        a | 1 << y
    })
}

/// `P ∩ N ∈ Δ` for every object `P`.
pub fn is_kernel(l: &Locality, n: &ElemSet) -> Result<bool> {
    if !l.is_partial_normal(n) {
        return Err(Error::NotNormal(format!("{:?} is not partial normal in {}", n.to_vec(), l.name())));
    }
    let t = l.mask_of(n);
    Ok(l.delta().iter().all(|&p| l.is_object(p & t)))
}

/// The objects of `L` inside `t` form `Γ`; the kernel condition makes this `{P ∩ T}`.
fn gamma_of(l: &Locality, t: u64) -> Vec<u64> {
    let set: BTreeSet<u64> = l.delta().iter().map(|&p| p & t).collect();
    set.into_iter().collect()
}

fn failing_clause(r: &Report) -> Option<String> {
    r.clauses.iter().find(|c| c.verdict == Verdict::Fail).map(|c| format!("{} ({})", c.name, c.witness))
}

/// Build and check `(N, Γ, T)`.
pub fn kernel_triple(l: &Locality, n: &ElemSet, caps: &Caps) -> Result<KernelTriple> {
    if !is_kernel(l, n)? {
        let t = l.mask_of(n);
        let bad = l.delta().iter().find(|&&p| !l.is_object(p & t)).copied();
        return Err(Error::Precondition(format!("not a kernel: P ∩ N ∉ Δ for P = {bad:#x?}")));
    }
    let t = l.mask_of(n);
    let gamma = gamma_of(l, t);
    let inside: Vec<u64> = l.delta().iter().copied().filter(|&p| p & !t == 0).collect();
    if inside != gamma {
        return Err(Error::Invariant(format!("Γ = {gamma:x?} differs from the objects inside T {inside:x?}")));
    }
    let (loc, index) = l.over_subgroup(&format!("{}:N", l.name()), n, t, &gamma)?;
    let v = validate(&loc, caps.depth);
    if let Some(c) = failing_clause(&v) {
        return Err(Error::Invariant(format!("(N, Γ, T) is not a locality: {c}")));
    }
    let triple = KernelTriple { n: *n, t, gamma, locality: loc, index };
    for &p in &triple.gamma {
        for f in 0..l.size() {
            if p & !l.s_f(f) == 0 && !triple.gamma.contains(&l.chase_mask(p, f)) {
                return Err(Error::Invariant(format!("Γ is not closed under conjugation: {p:#x} by element {f}")));
            }
        }
    }
    let op_l = l.op_core()?;
    let op_n = triple.to_ambient(l, triple.locality.op_core()?);
    if op_n != op_l & t {
        return Err(Error::Invariant(format!("O_p(N) = {op_n:#x} but O_p(L) ∩ N = {:#x}", op_l & t)));
    }
    let f = l.fusion(caps)?;
    let e = l.fusion_of(n, caps)?;
    if !fus::relations(&f, &e).invariant {
        return Err(Error::Invariant("F_T(N) is not F_S(L)-invariant".into()));
    }
    Ok(triple)
}

/// Outcome of building a locality from a partial group and kernel data:
/// the locality, the element map from the source and one clause per hypothesis.
pub(crate) struct Construction {
    pub locality: Locality,
    pub index: Vec<usize>,
    pub report: Report,
}

/// The elements `keep ⊇ N` of `base` with the products of `base`, over `s0`
/// with objects `{P ≤ s0 : P ∩ T ∈ Γ}`.
pub(crate) fn construct_over(
    base: &Locality,
    keep: &ElemSet,
    s0: u64,
    n: &ElemSet,
    gamma: &[u64],
    caps: &Caps,
) -> Result<Construction> {
    let mut r = Report::new("locality-with-kernel");
    let lat = base.lattice();
    let t = base.mask_of(n);
    let gset: BTreeSet<u64> = gamma.iter().copied().collect();
    let not_sub = gamma.iter().find(|&&p| p & !t != 0 || lat.id(p).is_none()).copied();
    r.check("Γ consists of subgroups of T", not_sub.is_none(), json!(not_sub));
    let not_over = gamma
        .iter()
        .flat_map(|&p| lat.subs.iter().map(move |&o| (p, o)))
        .find(|&(p, o)| o & p == p && o & !t == 0 && !gset.contains(&o));
    r.check("Γ is closed under overgroups in T", not_over.is_none(), json!(not_over.map(|(p, o)| [p, o])));
    if gamma.is_empty() || not_sub.is_some() {
        return Err(Error::Precondition(failing_clause(&r).unwrap_or_else(|| "Γ is empty".into())));
    }
    let delta: Vec<u64> = lat.subs.iter().copied().filter(|&p| p & !s0 == 0 && gset.contains(&(p & t))).collect();
    let (loc, index) = base.over_subgroup(&format!("{}:Δ(Γ)", base.name()), keep, s0, &delta)?;
    let v = validate(&loc, caps.depth);
    r.check("the result is a locality", v.consistent, json!(failing_clause(&v)));
    let nk = ElemSet::from_iter(n.iter().map(|x| index[x]));
    let normal = loc.is_partial_normal(&nk);
    r.check("N is partial normal", normal, json!(loc.normality_witness(&nk)));
    let tk = transfer(base, &loc, &index, t);
    let gk: BTreeSet<u64> = gamma.iter().map(|&p| transfer(base, &loc, &index, p)).collect();
    let not_conj = gk.iter().find_map(|&p| {
        (0..loc.size())
            .find(|&f| p & !loc.s_f(f) == 0 && {
                let img = loc.chase_mask(p, f);
                img & !tk == 0 && !gk.contains(&img)
            })
            .map(|f| json!({"object": p, "element": f}))
    });
    r.check("Γ is closed under L-conjugation in T", not_conj.is_none(), json!(not_conj));
    if normal {
        let kern_objects: BTreeSet<u64> = loc.delta().iter().map(|&p| p & tk).collect();
        r.check(
            "N is a kernel with objects Γ",
            loc.delta().iter().all(|&p| loc.is_object(p & tk)) && kern_objects == gk,
            json!({"objects": kern_objects}),
        );
    } else {
        r.na("N is a kernel with objects Γ", "N is not partial normal");
    }
    r.consistent = r.all_pass();
    Ok(Construction { locality: loc, index, report: r })
}

/// `(L, Δ, S)` with `Δ = {P ≤ S : P ∩ T ∈ Γ}` on the partial group of `base`,
/// whose own object set only fixes the domain of the table.
pub fn construct_with_kernel(base: &Locality, n: &ElemSet, gamma: &[u64], caps: &Caps) -> Result<Locality> {
    let c = construct_over(base, &base.all(), base.group().full(), n, gamma, caps)?;
    match failing_clause(&c.report) {
        Some(clause) => Err(Error::Precondition(clause)),
        None => Ok(c.locality),
    }
}
