use super::classes::is_saturated;
use super::relations::{is_delta_generated, is_delta_saturated, is_f_closed, relations};
use super::sets::cr;
use super::system::FusionSystem;
use crate::caps::Caps;
use crate::error::Result;
use crate::report::{Report, Timer};
use serde_json::json;

/// Evaluate the hypotheses of the saturation criterion for `f`, the invariant
/// subsystem `e` and the object set `delta`; when they all hold, check that
/// `f` is saturated by the definition.
pub fn saturation_by_criterion(f: &FusionSystem, e: &FusionSystem, delta: &[u64], caps: &Caps) -> Result<Report> {
    let timer = Timer::start();
    let mut r = Report::new("saturation-criterion");
    let mut delta = delta.to_vec();
    delta.sort_unstable();
    delta.dedup();
    let closed = r.check("pre: Δ is F-closed", is_f_closed(f, &delta), json!({"Delta": delta}));
    let rel = relations(f, e);
    let inv = r.check("pre: E is F-invariant", rel.invariant, json!({"relations": format!("{rel:?}")}));
    let esat = r.check("pre: E is saturated", is_saturated(e), json!(null));
    let ecr = cr(e)?;
    let missing: Vec<u64> = ecr.iter().filter(|m| !delta.contains(m)).copied().collect();
    let ecr_in = r.check("pre: E^cr ⊆ Δ", missing.is_empty(), json!({"missing": missing}));
    let generated = r.check("pre: F is Δ-generated", is_delta_generated(f, &delta, caps.morphisms)?, json!(null));
    let dsat = r.check("pre: F is Δ-saturated", is_delta_saturated(f, &delta), json!(null));
    if closed && inv && esat && ecr_in && generated && dsat {
        let sat = r.check("F is saturated", is_saturated(f), json!(null));
        r.consistent = sat;
    } else {
        r.na("F is saturated", "hypotheses not met");
    }
    Ok(timer.finish(r))
}
