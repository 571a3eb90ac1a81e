use super::locality::Locality;
use crate::caps::Caps;
use crate::error::Result;
use crate::fus::{self, FusionSystem};
use crate::grp::is_characteristic_p;
use crate::report::{Report, Timer};
use serde_json::json;

/// `F^cr ⊆ Δ` for `F = F_S(L)`; returns the missing subgroups.
pub fn cr_missing(l: &Locality, f: &FusionSystem) -> Result<Vec<u64>> {
    Ok(fus::cr(f)?.into_iter().filter(|&m| !l.is_object(m)).collect())
}

pub fn is_cr_complete(l: &Locality, caps: &Caps) -> Result<bool> {
    Ok(cr_missing(l, &l.fusion(caps)?)?.is_empty())
}

/// Objects `P` whose normalizer `N_L(P)` is not of characteristic p.
pub fn non_char_p_objects(l: &Locality) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for &m in l.delta() {
        let (h, _) = l.subset_group(&l.normalizer_of_mask(m), "N_L(P)")?;
        if !is_characteristic_p(&h, l.p()) {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn is_objective_char_p(l: &Locality) -> Result<bool> {
    Ok(non_char_p_objects(l)?.is_empty())
}

pub fn is_linking(l: &Locality, caps: &Caps) -> Result<bool> {
    Ok(is_cr_complete(l, caps)? && is_objective_char_p(l)?)
}

/// cr-completeness, objective characteristic p and the facts about `F_S(L)`
/// every locality satisfies: Δ-generation, Δ-saturation, and saturation when
/// cr-complete.
pub fn locality_flags(l: &Locality, caps: &Caps) -> Result<Report> {
    let timer = Timer::start();
    let f = l.fusion(caps)?;
    let mut r = Report::new("locality-flags");
    let missing = cr_missing(l, &f)?;
    let crc = r.value("cr-complete", missing.is_empty());
    if !crc {
        r.clauses.last_mut().expect("just pushed").witness = json!({"missing": missing});
    }
    let bad = non_char_p_objects(l)?;
    let ocp = r.value("objective characteristic p", bad.is_empty());
    if !ocp {
        r.clauses.last_mut().expect("just pushed").witness = json!({"objects": bad});
    }
    r.value("linking", crc && ocp);
    let gen = r.check("F_S(L) is Δ-generated", fus::is_delta_generated(&f, l.delta(), caps.morphisms)?, json!(null));
    let dsat = r.check("F_S(L) is Δ-saturated", fus::is_delta_saturated(&f, l.delta()), json!(null));
    let sat = if crc {
        r.check("F_S(L) is saturated", fus::is_saturated(&f), json!(null))
    } else {
        r.na("F_S(L) is saturated", "not cr-complete");
        true
    };
    r.consistent = gen && dsat && sat;
    Ok(timer.finish(r))
}
