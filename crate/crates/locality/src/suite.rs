//! The acceptance criteria, run against the catalog.
//!
//! Each criterion has a pinned runtime budget and compares exactly: the
//! tolerance on every count of mismatches is zero. A criterion passes when
//! its checks hold and it finishes within budget.

use crate::caps::Caps;
use crate::catalog;
use crate::error::{Error, Result};
use crate::fus::{self, Mode};
use crate::grp::ord;
use crate::io::{
    locality_from_doc, locality_to_doc, resolve_group, Instance, KernelData, Kind, LocalityDoc, Object, ProductData,
    ProductDoc,
};
use crate::kern;
use crate::ploc::{validate, Locality};
use crate::report::{Report, Verdict};
use crate::run::{classify_cr_report, criterion_inputs};
use serde::Serialize;
use serde_json::{json, Value};
use std::time::Instant;

/// Allowed number of mismatches in any exact comparison.
pub const TOLERANCE: usize = 0;

pub const KERNELS: [&str; 4] = ["s4-kernel", "c3xs4-theta", "c2xs3-kernel", "s4xs4-negative"];
pub const PRODUCTS: [&str; 2] = ["s4-product", "c3xs4-product"];

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub budget_ms: u64,
    check: fn(&Caps) -> Result<(bool, Value)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub status: Status,
    pub elapsed_ms: u64,
    pub budget_ms: u64,
    pub detail: Value,
}

impl CriterionResult {
    /// One summary line.
    pub fn line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        format!(
            "criterion {:>2} {:<28} {:<5} {:>7} ms (budget {} ms)",
            self.id, self.name, status, self.elapsed_ms, self.budget_ms
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "saturation-tests-agree", budget_ms: 30_000, check: c1_saturation_tests },
        Criterion { id: 2, name: "cr-classical-critical", budget_ms: 10_000, check: c2_cr_sets },
        Criterion { id: 3, name: "theorem-a", budget_ms: 60_000, check: c3_theorem_a },
        Criterion { id: 4, name: "locality-axioms", budget_ms: 30_000, check: c4_locality_axioms },
        Criterion { id: 5, name: "quotient-identity", budget_ms: 30_000, check: c5_quotients },
        Criterion { id: 6, name: "theorem-b", budget_ms: 60_000, check: c6_theorem_b },
        Criterion { id: 7, name: "theorem-c", budget_ms: 60_000, check: c7_theorem_c },
        Criterion { id: 8, name: "theta-quotient", budget_ms: 60_000, check: c8_theta },
        Criterion { id: 9, name: "product-nh", budget_ms: 120_000, check: c9_product },
        Criterion { id: 10, name: "frattini-generation", budget_ms: 60_000, check: c10_frattini },
    ]
}

/// Criteria whose id or name matches `filter`; `None` selects all.
pub fn select(filter: Option<&str>) -> Vec<Criterion> {
    criteria()
        .into_iter()
        .filter(|c| filter.is_none_or(|f| f == c.id.to_string() || c.name.contains(f)))
        .collect()
}

pub fn run(c: &Criterion, caps: &Caps) -> CriterionResult {
    let start = Instant::now();
    let out = (c.check)(caps);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let (status, detail) = match out {
        Ok((ok, detail)) => (if ok && elapsed_ms <= c.budget_ms { Status::Pass } else { Status::Fail }, detail),
        Err(e) => (Status::Error, json!(e.to_string())),
    };
    CriterionResult { id: c.id, name: c.name.to_string(), status, elapsed_ms, budget_ms: c.budget_ms, detail }
}

/// Exit code of a suite run: 3 if any criterion errored, else 1 on any failure.
pub fn exit_code(results: &[CriterionResult]) -> i32 {
    if results.iter().any(|r| r.status == Status::Error) {
        3
    } else if results.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}

fn load(name: &str, caps: &Caps) -> Result<(Instance, Object, Caps)> {
    let inst = catalog::get(name).ok_or_else(|| Error::Input(format!("missing catalog instance {name}")))?;
    let obj = inst.materialize(caps)?;
    let caps = inst.caps(caps);
    Ok((inst, obj, caps))
}

fn kernel(name: &str, caps: &Caps) -> Result<(KernelData, Caps)> {
    match load(name, caps)? {
        (_, Object::Kernel(k), c) => Ok((k, c)),
        _ => Err(Error::Input(format!("{name} is not a kernel instance"))),
    }
}

fn product(name: &str, caps: &Caps) -> Result<(ProductData, Caps)> {
    match load(name, caps)? {
        (_, Object::Product(p), c) => Ok((p, c)),
        _ => Err(Error::Input(format!("{name} is not a product instance"))),
    }
}

fn catalog_fusion(caps: &Caps) -> Result<Vec<(String, fus::FusionSystem)>> {
    let mut out = Vec::new();
    for inst in catalog::all().into_iter().filter(|i| i.kind == Kind::Fusion) {
        if let Object::Fusion(f) = inst.materialize(caps)? {
            out.push((inst.name.clone(), f));
        }
    }
    Ok(out)
}

fn failing(r: &Report) -> Vec<String> {
    r.clauses.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.name.clone()).collect()
}

fn c1_saturation_tests(caps: &Caps) -> Result<(bool, Value)> {
    let systems = catalog_fusion(caps)?;
    let mut classes = 0;
    let mut mismatches = Vec::new();
    let mut small = 0;
    for (name, f) in &systems {
        small += usize::from(ord(f.support()) <= 16);
        for c in fus::classify(f) {
            classes += 1;
            if c.respects_saturation(Mode::Direct) != c.respects_saturation(Mode::Axioms) {
                mismatches.push(json!([name, c.representative]));
            }
        }
    }
    let ok = systems.len() >= 6 && small == systems.len() && mismatches.len() <= TOLERANCE;
    Ok((ok, json!({"systems": systems.len(), "with |S| <= 16": small, "classes": classes, "mismatches": mismatches})))
}

fn c2_cr_sets(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut detail = Vec::new();
    let mut nonsat = 0;
    for (name, f) in catalog_fusion(caps)? {
        let r = classify_cr_report(&f)?;
        let saturated = r.verdict_of("F is saturated") == Some(Verdict::Pass);
        if !saturated {
            nonsat += 1;
        }
        ok &= r.consistent;
        detail.push(json!({"system": name, "saturated": saturated, "failing": failing(&r)}));
    }
    Ok((ok && nonsat >= 1, json!(detail)))
}

fn c3_theorem_a(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["s4-kernel", "c3xs4-theta", "c2xs3-kernel", "s4-product", "c3xs4-product"] {
        let (_, obj, caps) = load(name, caps)?;
        let (f, e, delta) = criterion_inputs(&obj, &caps)?;
        let r = fus::saturation_by_criterion(&f, &e, &delta, &caps)?;
        let hyps = r.preconditions_met();
        let verified = r.verdict_of("F is saturated") == Some(Verdict::Pass);
        let independent = fus::is_saturated(&f);
        ok &= hyps && verified && independent;
        detail.push(json!({"instance": name, "hypotheses": hyps, "criterion": verified, "is_saturated": independent}));
    }
    Ok((ok, json!(detail)))
}

/// The three mutation classes applied to a table form; each returns the
/// mutated locality, the clause expected to fail and its expected witness.
pub fn mutations(l: &Locality) -> Result<Vec<(&'static str, Locality, &'static str, Value)>> {
    let LocalityDoc::Table { p, elements, inv, unit, pairs, s, delta } = locality_to_doc(l) else {
        unreachable!("table form")
    };
    let in_s = |x: usize| s.contains(&x);
    let rebuild = |pairs: Vec<[usize; 3]>, s: Vec<usize>, delta: Vec<Vec<usize>>| {
        let doc = LocalityDoc::Table { p, elements, inv: inv.clone(), unit, pairs, s, delta };
        locality_from_doc("mutant", &doc, &Caps::default())
    };
    let mut out = Vec::new();

    // A product f·g with f, g outside S and g·f outside S is used by no conjugation into S.
    let victim = pairs
        .iter()
        .position(|&[a, b, _]| !in_s(a) && !in_s(b) && l.mul(b, a).is_some_and(|ba| !in_s(ba)))
        .ok_or_else(|| Error::Input("no removable pair".into()))?;
    let [a, b, _] = pairs[victim];
    let mut fewer = pairs.clone();
    fewer.remove(victim);
    out.push(("deleted pair", rebuild(fewer, s.clone(), delta.clone())?, "binary products are defined exactly on D_Δ", json!([a, b])));

    // Dropping S from Δ breaks overgroup closure at the smallest object.
    let full = l.group().full();
    let smallest = *l.delta().iter().min_by_key(|m| (m.count_ones(), **m)).expect("non-empty");
    if smallest != full {
        let kept: Vec<Vec<usize>> = l.delta().iter().filter(|&&m| m != full).map(|&m| l.mask_elems(m).to_vec()).collect();
        let mutant = rebuild(pairs.clone(), s.clone(), kept)?;
        let lat = mutant.lattice();
        let first_missing = lat.subs.iter().copied().find(|&o| o & smallest == smallest && !mutant.is_object(o));
        out.push(("broken Δ-closure", mutant, "Δ is overgroup-closed", json!([smallest, first_missing])));
    }

    // Declaring the smallest object to be S keeps every product but loses maximality.
    let small: Vec<usize> = l.mask_elems(smallest).to_vec();
    let k = l.s_elems().len();
    let mutant = rebuild(pairs.clone(), small.clone(), vec![small.clone()])?;
    let ns = (0..l.size()).filter(|&f| mutant.s_f(f) == mutant.group().full()).count();
    out.push(("non-maximal S", mutant, "S is a maximal p-subgroup", json!({"N_L(S)": ns, "S": small.len()})));
    debug_assert!(small.len() < k);
    Ok(out)
}

fn c4_locality_axioms(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for inst in catalog::all() {
        let icaps = inst.caps(caps);
        let l = match inst.materialize(caps)? {
            Object::Locality(l) => l,
            Object::Kernel(k) => k.locality,
            Object::Product(p) => p.locality,
            _ => continue,
        };
        let r = validate(&l, icaps.depth);
        ok &= r.consistent;
        detail.push(json!({"instance": inst.name, "depth": icaps.depth, "valid": r.consistent, "failing": failing(&r)}));
    }
    let (_, obj, _) = load("s4-locality", caps)?;
    let Object::Locality(base) = obj else { unreachable!("s4-locality is a locality") };
    let muts = mutations(&base)?;
    for (class, m, clause, witness) in &muts {
        let r = validate(m, caps.depth);
        let c = r.clause(clause);
        let caught = !r.consistent && c.is_some_and(|c| c.verdict == Verdict::Fail && c.witness == *witness);
        ok &= caught;
        detail.push(json!({"mutation": class, "rejected": !r.consistent, "clause": clause, "witness": c.map(|c| c.witness.clone()), "expected": witness}));
    }
    Ok((ok && muts.len() == 3, json!(detail)))
}

fn c5_quotients(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in KERNELS {
        let (k, caps) = kernel(name, caps)?;
        let r = kern::quotient_iso_report(&k.locality, &k.n, &caps)?;
        let q = k.locality.quotient(&k.n)?.locality.size();
        ok &= r.consistent && r.all_pass() && q <= 8;
        detail.push(json!({"instance": name, "|L/N|": q, "failing": failing(&r)}));
    }
    Ok((ok, json!(detail)))
}

fn c6_theorem_b(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut negatives = 0;
    let mut detail = Vec::new();
    for name in KERNELS {
        let (k, caps) = kernel(name, caps)?;
        let r = kern::theorem_b_report(&k.locality, &k.n, &caps)?;
        let l_side = r.verdict_of("(L, Δ, S) is cr-complete");
        let n_side = r.verdict_of("(N, Γ, T) is cr-complete");
        let positive = l_side == Some(Verdict::Pass);
        if l_side == Some(Verdict::Fail) {
            negatives += 1;
        }
        let normal = !positive || r.verdict_of("F_T(N) in F_S(L): normal") == Some(Verdict::Pass);
        ok &= r.consistent && r.preconditions_met() && l_side == n_side && normal;
        detail.push(json!({"instance": name, "L": l_side, "N": n_side, "failing": failing(&r)}));
    }
    Ok((ok && negatives >= 1, json!(detail)))
}

const C_CLAUSES: [&str; 4] = [
    "(i) L has objective characteristic p",
    "(ii) N has objective characteristic p and N_L(T) has characteristic p",
    "(iii) N has objective characteristic p and C_L(T) has characteristic p",
    "(iv) N_L(P) has characteristic p for every P in Γ",
];

fn c7_theorem_c(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut all_false = 0;
    let mut detail = Vec::new();
    for name in KERNELS {
        let (k, caps) = kernel(name, caps)?;
        let r = kern::theorem_c_report(&k.locality, &k.n, &caps)?;
        let vs: Vec<Option<Verdict>> = C_CLAUSES.iter().map(|c| r.verdict_of(c)).collect();
        if vs.iter().all(|v| *v == Some(Verdict::Fail)) {
            all_false += 1;
        }
        ok &= r.consistent && r.preconditions_met() && vs.windows(2).all(|w| w[0] == w[1]);
        detail.push(json!({"instance": name, "clauses": vs, "failing": failing(&r)}));
    }
    Ok((ok && all_false >= 1, json!(detail)))
}

fn c8_theta(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, nontrivial) in [("s4-kernel", false), ("c3xs4-theta", true)] {
        let (k, caps) = kernel(name, caps)?;
        let gamma0 = k.gamma0.clone().ok_or_else(|| Error::Input(format!("{name} has no Gamma0")))?;
        let (_, r) = kern::linking_kernel_quotient(&k.locality, &k.n, &gamma0, &caps)?;
        let pass = |c: &str| r.verdict_of(c) == Some(Verdict::Pass);
        let theta = pass("Θ is non-trivial");
        ok &= r.consistent
            && pass("Θ ∩ S = 1")
            && pass("F_S(L0/Θ) = F_S(L)")
            && pass("N0/Θ is a linking locality")
            && theta == nontrivial;
        detail.push(json!({"instance": name, "theta non-trivial": theta, "failing": failing(&r)}));
    }
    Ok((ok, json!(detail)))
}

/// Order of the group a catalog product instance is derived from.
fn ambient_order(name: &str) -> Result<usize> {
    let inst = catalog::get(name).ok_or_else(|| Error::Input(format!("missing catalog instance {name}")))?;
    let doc: ProductDoc = serde_json::from_value(inst.payload).map_err(|e| Error::Input(e.to_string()))?;
    match doc.locality {
        LocalityDoc::FromGroup { from_group, .. } => Ok(resolve_group(&from_group.g, &Caps::default())?.order()),
        LocalityDoc::Table { elements, .. } => Ok(elements),
    }
}

fn c9_product(caps: &Caps) -> Result<(bool, Value)> {
    let required = [
        "(a) NH = HN",
        "(a) NH is a partial subgroup",
        "S0 = T(S∩H)",
        "S0 = S ∩ NH",
        "S0 ∈ Syl_p(H̃)",
        "(a) the result is a locality",
        "(a) N is a kernel with objects Γ",
        "(c) (NH, Δ0, S0) is cr-complete",
        "(e) F_S0(NH) is saturated",
        "(e) F_T(N) is normal in F_S0(NH)",
        "(d) H̃ has characteristic p iff (NH, Δ0, S0) is linking",
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for name in PRODUCTS {
        let (p, caps) = product(name, caps)?;
        let order = ambient_order(name)?;
        let pi = kern::product_nh(&p.locality, &p.n, &p.h, p.tstar, p.gamma_n.as_deref(), &caps)?;
        let r = kern::product_report(&pi, &caps)?;
        let missing: Vec<&str> = required.iter().copied().filter(|c| r.verdict_of(c) != Some(Verdict::Pass)).collect();
        ok &= r.consistent && missing.is_empty() && order <= 400;
        detail.push(json!({"instance": name, "|G|": order, "|NH|": pi.nh.len(), "not passing": missing}));
    }
    Ok((ok, json!(detail)))
}

fn c10_frattini(caps: &Caps) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in KERNELS {
        let (k, caps) = kernel(name, caps)?;
        let (same, w) = kern::frattini_generation(&k.locality, &k.n, &caps)?;
        ok &= same;
        detail.push(json!({"instance": name, "equal": same, "morphisms": w}));
    }
    Ok((ok, json!(detail)))
}
