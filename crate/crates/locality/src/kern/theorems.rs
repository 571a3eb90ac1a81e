use super::kernel::{is_kernel, kernel_triple};
use crate::bits::ElemSet;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus;
use crate::grp::is_characteristic_p;
use crate::ploc::{cr_missing, is_objective_char_p, Locality};
use crate::report::{Report, Timer, Verdict};
use serde_json::json;

const PRE_KERNEL: &str = "pre: N is a kernel of L";

/// The kernel precondition as a clause; `false` when the report should stop.
fn kernel_pre(r: &mut Report, l: &Locality, n: &ElemSet) -> bool {
    match is_kernel(l, n) {
        Ok(k) => r.check(PRE_KERNEL, k, json!("some P ∩ N is not an object")),
        Err(e) => r.check(PRE_KERNEL, false, json!(e.to_string())),
    }
}

fn char_p_subset(l: &Locality, x: &ElemSet, name: &str) -> Result<bool> {
    let (g, _) = l.subset_group(x, name)?;
    Ok(is_characteristic_p(&g, l.p()))
}

fn disagree(r: &mut Report, values: &[bool]) -> bool {
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    if !agree {
        r.push("agreement", Verdict::Fail, json!({"values": values}));
    }
    agree
}

/// `L` is cr-complete iff its kernel locality is; when both are, `F_T(N) ⊴ F_S(L)`.
pub fn theorem_b_report(l: &Locality, n: &ElemSet, caps: &Caps) -> Result<Report> {
    let timer = Timer::start();
    let mut r = Report::new("theorem-b");
    if !kernel_pre(&mut r, l, n) {
        return Ok(timer.finish(r));
    }
    let triple = kernel_triple(l, n, caps)?;
    let f = l.fusion(caps)?;
    let kl = &triple.locality;
    let missing_l = cr_missing(l, &f)?;
    let missing_n = cr_missing(kl, &kl.fusion(caps)?)?;
    let crl = r.value("(L, Δ, S) is cr-complete", missing_l.is_empty());
    let crn = r.value("(N, Γ, T) is cr-complete", missing_n.is_empty());
    if !crl {
        r.clauses[1].witness = json!({"missing": missing_l});
    }
    if !crn {
        r.clauses[2].witness = json!({"missing": missing_n});
    }
    let agree = disagree(&mut r, &[crl, crn]);
    let normal = if crl && crn {
        let e = l.fusion_of(n, caps)?;
        let rel = fus::subsystem_relations(&f, &e)?;
        for c in &rel.clauses {
            r.push(&format!("F_T(N) in F_S(L): {}", c.name), c.verdict, c.witness.clone());
        }
        rel.consistent
    } else {
        r.na("F_T(N) in F_S(L): normal", "not cr-complete");
        true
    };
    r.consistent = agree && normal;
    Ok(timer.finish(r))
}

/// The four characteristic-p conditions on a kernel, and the linking
/// conditions obtained from them together with cr-completeness.
pub fn theorem_c_report(l: &Locality, n: &ElemSet, caps: &Caps) -> Result<Report> {
    let timer = Timer::start();
    let mut r = Report::new("theorem-c");
    if !kernel_pre(&mut r, l, n) {
        return Ok(timer.finish(r));
    }
    let triple = kernel_triple(l, n, caps)?;
    let kl = &triple.locality;
    let t = triple.t;
    let kernel_ocp = is_objective_char_p(kl)?;
    let nlt = char_p_subset(l, &l.normalizer_of_mask(t), "N_L(T)")?;
    let clt = char_p_subset(l, &l.centralizer(&l.mask_elems(t)), "C_L(T)")?;
    let mut gamma_ok = true;
    let mut bad = Vec::new();
    for &p in &triple.gamma {
        if !char_p_subset(l, &l.normalizer_of_mask(p), "N_L(P)")? {
            gamma_ok = false;
            bad.push(p);
        }
    }
    let c1 = r.value("(i) L has objective characteristic p", is_objective_char_p(l)?);
    let c2 = r.value("(ii) N has objective characteristic p and N_L(T) has characteristic p", kernel_ocp && nlt);
    let c3 = r.value("(iii) N has objective characteristic p and C_L(T) has characteristic p", kernel_ocp && clt);
    let c4 = r.value("(iv) N_L(P) has characteristic p for every P in Γ", gamma_ok);
    if !gamma_ok {
        r.clauses.last_mut().expect("just pushed").witness = json!({"objects": bad});
    }
    let agree = disagree(&mut r, &[c1, c2, c3, c4]);

    let f = l.fusion(caps)?;
    let crl = cr_missing(l, &f)?.is_empty();
    let crn = cr_missing(kl, &kl.fusion(caps)?)?.is_empty();
    let k1 = r.value("linking: L is a linking locality", crl && c1);
    let k2 = r.value("linking: N is a linking locality and N_L(T) has characteristic p", crn && kernel_ocp && nlt);
    let k3 = r.value("linking: N is a linking locality and C_L(T) has characteristic p", crn && kernel_ocp && clt);
    let agree_linking = disagree(&mut r, &[k1, k2, k3]);
    r.consistent = agree && agree_linking;
    Ok(timer.finish(r))
}

/// Shared by the CLI: a precondition error becomes a not-applicable report.
pub fn precondition_report(theorem: &str, e: &Error) -> Option<Report> {
    match e {
        Error::Precondition(m) | Error::NotNormal(m) => {
            let mut r = Report::new(theorem);
            r.check(&format!("{}{}", crate::report::PRE, "hypotheses"), false, json!(m));
            Some(r)
        }
        _ => None,
    }
}
