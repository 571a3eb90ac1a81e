use super::classes::{c_s, fully_normalized_in_class, inn, is_saturated, n_s, op_aut, out_condition};
use super::system::{image_mask, restrict, FusionSystem};
use crate::error::{Error, Result};
use crate::report::Report;
use serde_json::json;
use std::collections::BTreeSet;

/// A set of subgroups as sorted masks.
pub type SubgroupSet = Vec<u64>;

/// Subgroups whose whole F-class satisfies `pred`.
fn class_wise(f: &FusionSystem, mut pred: impl FnMut(&[u64]) -> Result<bool>) -> Result<SubgroupSet> {
    let mut out = Vec::new();
    for c in f.classes() {
        if pred(&c)? {
            out.extend(c);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `F^c`: `C_S(Q) ≤ Q` for every `Q` in the class.
pub fn centric(f: &FusionSystem) -> SubgroupSet {
    class_wise(f, |c| Ok(c.iter().all(|&q| c_s(f, q) & !q == 0))).expect("infallible")
}

/// `N_F(P)` over `N_S(P)`: restrictions of F-maps on `AP` that preserve `P`.
pub fn normalizer_subsystem(f: &FusionSystem, pm: u64) -> Result<FusionSystem> {
    let p = f.id(pm)?;
    let lat = f.lattice();
    let g = f.group();
    let nsp = n_s(f, pm);
    let sub = lat.restrict(g.order(), nsp);
    let mut homs = Vec::with_capacity(sub.len());
    for &am in &sub.subs {
        let a = lat.id(am).expect("sub");
        let apm = g.product(am, pm);
        let ap = lat.id(apm).expect("AP is a subgroup");
        let set: BTreeSet<Vec<u8>> = f.store()[ap]
            .iter()
            .filter(|psi| image_mask(psi) & !nsp == 0 && image_mask(&restrict(lat, ap, psi, p)) == pm)
            .map(|psi| restrict(lat, ap, psi, a))
            .collect();
        homs.push(set);
    }
    Ok(f.with_support(nsp, homs))
}

/// `R ⊴ F`: every morphism on `A` extends to `AR` with `R` mapped onto `R`.
pub fn is_normal_subgroup(f: &FusionSystem, rm: u64) -> Result<bool> {
    let r = f.id(rm)?;
    let g = f.group();
    let lat = f.lattice();
    if !g.is_normal_in(f.support(), rm) {
        return Ok(false);
    }
    for (a, &am) in lat.subs.iter().enumerate() {
        let arm = g.product(am, rm);
        let ar = lat.id(arm).expect("AR is a subgroup");
        let ext: BTreeSet<Vec<u8>> = f.store()[ar]
            .iter()
            .filter(|chi| image_mask(&restrict(lat, ar, chi, r)) == rm)
            .map(|chi| restrict(lat, ar, chi, a))
            .collect();
        if f.store()[a].iter().any(|phi| !ext.contains(phi)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `O_p(F)`: the join of all normal subgroups, which is again normal.
pub fn op_fusion(f: &FusionSystem) -> Result<u64> {
    let g = f.group();
    let mut join = 1u64;
    for &m in f.subgroups() {
        if m & !join != 0 && is_normal_subgroup(f, m)? {
            join = g.join(join, m);
        }
    }
    if !is_normal_subgroup(f, join)? {
        return Err(Error::Invariant(format!("join {join:#x} of normal subgroups is not normal")));
    }
    Ok(join)
}

/// `F^r`: some fully normalized `Q` in the class has `O_p(N_F(Q)) = Q`.
pub fn radical(f: &FusionSystem) -> Result<SubgroupSet> {
    class_wise(f, |c| {
        for q in fully_normalized_in_class(f, c[0])? {
            if op_fusion(&normalizer_subsystem(f, q)?)? == q {
                return Ok(true);
            }
        }
        Ok(false)
    })
}

pub fn cr(f: &FusionSystem) -> Result<SubgroupSet> {
    let c: BTreeSet<u64> = centric(f).into_iter().collect();
    Ok(radical(f)?.into_iter().filter(|m| c.contains(m)).collect())
}

/// Critical: centric, and `Out_S(Q) ∩ O_p(Out_F(Q)) = 1` for every `Q` in the class.
pub fn critical(f: &FusionSystem) -> Result<SubgroupSet> {
    class_wise(f, |c| {
        if !c.iter().all(|&q| c_s(f, q) & !q == 0) {
            return Ok(false);
        }
        for &q in c {
            if !out_condition(f, f.id(q)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

/// Centric `R` with `O_p(Aut_F(R)) = Inn(R)`.
pub fn classical(f: &FusionSystem) -> Result<SubgroupSet> {
    class_wise(f, |c| {
        if !c.iter().all(|&q| c_s(f, q) & !q == 0) {
            return Ok(false);
        }
        let i = f.id(c[0])?;
        Ok(op_aut(f, i)? == inn(f, i))
    })
}

/// Saturated with centric `O_p(F)`.
pub fn is_constrained(f: &FusionSystem) -> Result<bool> {
    if !is_saturated(f) {
        return Ok(false);
    }
    let o = op_fusion(f)?;
    Ok(c_s(f, o) & !o == 0)
}

/// `F^s`: every fully normalized conjugate has a constrained normalizer system.
pub fn subcentric(f: &FusionSystem) -> Result<SubgroupSet> {
    if !is_saturated(f) {
        return Err(Error::Precondition("subcentric subgroups need a saturated fusion system".into()));
    }
    class_wise(f, |c| {
        for q in fully_normalized_in_class(f, c[0])? {
            if !is_constrained(&normalizer_subsystem(f, q)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

/// For saturated F: `F^cr`, the critical subgroups and the centric subgroups
/// with `O_p(Aut_F(R)) = Inn(R)` coincide.
pub fn cr_agrees_with_classical(f: &FusionSystem) -> Result<Report> {
    if !is_saturated(f) {
        return Err(Error::Precondition("fusion system is not saturated".into()));
    }
    let mut r = Report::new("cr-classical-critical");
    let a = cr(f)?;
    let b = classical(f)?;
    let c = critical(f)?;
    let diff = |x: &[u64], y: &[u64]| -> Vec<u64> { x.iter().filter(|m| !y.contains(m)).copied().collect() };
    r.check("cr = classical", a == b, json!({"cr_only": diff(&a, &b), "classical_only": diff(&b, &a)}));
    r.check("classical = critical", b == c, json!({"classical_only": diff(&b, &c), "critical_only": diff(&c, &b)}));
    r.consistent = a == b && b == c;
    Ok(r)
}

/// Inclusions classical ⊆ critical ⊆ cr, valid for any fusion system.
pub fn critical_chain(f: &FusionSystem) -> Result<(bool, bool)> {
    let a = classical(f)?;
    let b = critical(f)?;
    let c = cr(f)?;
    Ok((a.iter().all(|m| b.contains(m)), b.iter().all(|m| c.contains(m))))
}

