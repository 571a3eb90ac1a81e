//! Dispatch of named checks to the engine, shared by the CLI and the suite.

use crate::bits::ElemSet;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus::{self, FusionSystem, Mode};
use crate::io::{Kind, Object};
use crate::kern::{self, precondition_report};
use crate::ploc::{validate, Locality};
use crate::report::{Report, Timer};
use serde_json::json;

pub const CHECKS: [&str; 10] = [
    "validate-locality",
    "saturation",
    "classify-cr",
    "theorem-a",
    "theorem-b",
    "theorem-c",
    "theta-quotient",
    "product-nh",
    "frattini",
    "quotient-iso",
];

/// Kinds each check accepts.
pub fn accepts(check: &str) -> &'static [Kind] {
    use Kind::*;
    match check {
        "validate-locality" => &[Locality, KernelInstance, ProductInstance],
        "saturation" | "classify-cr" => &[Fusion, Locality, KernelInstance, ProductInstance],
        "theorem-a" => &[KernelInstance, ProductInstance],
        "theorem-b" | "theorem-c" | "theta-quotient" | "frattini" | "quotient-iso" => &[KernelInstance],
        "product-nh" => &[ProductInstance],
        _ => &[],
    }
}

/// Every class respects saturation, with the direct and axiomatic tests agreeing.
pub fn saturation_report(f: &FusionSystem) -> Report {
    let timer = Timer::start();
    let mut r = Report::new("saturation");
    let records = fus::classify(f);
    for c in &records {
        let direct = c.respects_saturation(Mode::Direct);
        let axioms = c.respects_saturation(Mode::Axioms);
        let name = format!("class of {:#x} respects saturation", c.representative);
        r.check(&name, direct, json!({"members": c.members, "axioms": axioms}));
        if direct != axioms {
            r.check(&format!("class of {:#x}: direct and axiomatic tests agree", c.representative), false, json!([direct, axioms]));
        }
    }
    r.consistent = r.all_pass();
    timer.finish(r)
}

/// The subgroup sets of a system; for saturated systems `cr = classical = critical`,
/// otherwise the inclusions `classical ⊆ critical ⊆ cr`.
pub fn classify_cr_report(f: &FusionSystem) -> Result<Report> {
    let timer = Timer::start();
    let mut r = Report::new("classify-cr");
    let (c, rad, crs, crit, cla) = (fus::centric(f), fus::radical(f)?, fus::cr(f)?, fus::critical(f)?, fus::classical(f)?);
    r.push(
        "subgroup sets",
        crate::report::Verdict::Pass,
        json!({"centric": c, "radical": rad, "cr": crs, "critical": crit, "classical": cla}),
    );
    if r.value("F is saturated", fus::is_saturated(f)) {
        let sub = fus::cr_agrees_with_classical(f)?;
        r.clauses.extend(sub.clauses);
    } else {
        let (a, b) = fus::critical_chain(f)?;
        r.check("classical ⊆ critical", a, json!({"classical": cla, "critical": crit}));
        r.check("critical ⊆ cr", b, json!({"critical": crit, "cr": crs}));
    }
    r.consistent = r.clauses.iter().filter(|c| c.name != "F is saturated").all(|c| c.verdict == crate::report::Verdict::Pass);
    Ok(timer.finish(r))
}

fn locality_of(obj: &Object) -> Option<&Locality> {
    match obj {
        Object::Locality(l) => Some(l),
        Object::Kernel(k) => Some(&k.locality),
        Object::Product(p) => Some(&p.locality),
        _ => None,
    }
}

/// `F = F_S(L)`, `E = F_T(N)` and `Δ` of a kernel or product instance.
pub fn criterion_inputs(obj: &Object, caps: &Caps) -> Result<(FusionSystem, FusionSystem, Vec<u64>)> {
    match obj {
        Object::Kernel(k) => {
            Ok((k.locality.fusion(caps)?, k.locality.fusion_of(&k.n, caps)?, k.locality.delta().to_vec()))
        }
        Object::Product(p) => {
            let pi = kern::product_nh(&p.locality, &p.n, &p.h, p.tstar, p.gamma_n.as_deref(), caps)?;
            let nk = ElemSet::from_iter(pi.n.iter().map(|x| pi.index[x]));
            let k = &pi.locality;
            Ok((k.fusion(caps)?, k.fusion_of(&nk, caps)?, k.delta().to_vec()))
        }
        _ => Err(Error::Input("theorem-a needs a kernel or product instance".into())),
    }
}

fn run_inner(check: &str, obj: &Object, caps: &Caps) -> Result<Report> {
    let kernel = || match obj {
        Object::Kernel(k) => Ok(k),
        _ => Err(Error::Input(format!("{check} needs a kernel instance"))),
    };
    let fusion = || -> Result<FusionSystem> {
        match obj {
            Object::Fusion(f) => Ok(f.clone()),
            _ => locality_of(obj).ok_or_else(|| Error::Input(format!("{check} needs a fusion system")))?.fusion(caps),
        }
    };
    match check {
        "validate-locality" => {
            let l = locality_of(obj).ok_or_else(|| Error::Input("validate-locality needs a locality".into()))?;
            Ok(validate(l, caps.depth))
        }
        "saturation" => Ok(saturation_report(&fusion()?)),
        "classify-cr" => classify_cr_report(&fusion()?),
        "theorem-a" => {
            let (f, e, delta) = criterion_inputs(obj, caps)?;
            fus::saturation_by_criterion(&f, &e, &delta, caps)
        }
        "theorem-b" => {
            let k = kernel()?;
            kern::theorem_b_report(&k.locality, &k.n, caps)
        }
        "theorem-c" => {
            let k = kernel()?;
            kern::theorem_c_report(&k.locality, &k.n, caps)
        }
        "theta-quotient" => {
            let k = kernel()?;
            let gamma0 = match &k.gamma0 {
                Some(g) => g.clone(),
                None => fus::cr(&k.locality.fusion_of(&k.n, caps)?)?,
            };
            Ok(kern::linking_kernel_quotient(&k.locality, &k.n, &gamma0, caps)?.1)
        }
        "product-nh" => match obj {
            Object::Product(p) => {
                let pi = kern::product_nh(&p.locality, &p.n, &p.h, p.tstar, p.gamma_n.as_deref(), caps)?;
                kern::product_report(&pi, caps)
            }
            _ => Err(Error::Input("product-nh needs a product instance".into())),
        },
        "frattini" => {
            let k = kernel()?;
            kern::frattini_report(&k.locality, &k.n, caps)
        }
        "quotient-iso" => {
            let k = kernel()?;
            kern::quotient_iso_report(&k.locality, &k.n, caps)
        }
        other => Err(Error::Input(format!("unknown check `{other}`; expected one of {}", CHECKS.join(", ")))),
    }
}

/// Run a named check. Unmet hypotheses become a not-applicable report; other
/// errors (input, caps) are returned.
pub fn run_check(check: &str, obj: &Object, caps: &Caps) -> Result<Report> {
    match run_inner(check, obj, caps) {
        Ok(r) => Ok(r),
        Err(e) => precondition_report(check, &e).ok_or(e),
    }
}
