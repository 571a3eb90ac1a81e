//! JSON interchange.
//!
//! Each file format has a document type that mirrors the JSON one to one and
//! a materializer that turns it into an engine object. Canonical text sorts
//! object keys, element arrays and lists of element arrays, so two documents
//! describing the same data serialize identically.

use crate::bits::{bits64, ElemSet};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus::{FusionSystem, Hom};
use crate::grp::{is_power_of, FiniteGroup, PGroup};
use crate::ploc::{Locality, UNDEF};
use crate::report::Report;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDoc {
    Table { name: String, order: usize, mult: Vec<Vec<usize>> },
    Perms { name: String, perm_gens: Vec<Vec<usize>>, degree: usize },
}

/// A group given inline or by the name of a catalog group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Inline(GroupDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub domain: Vec<usize>,
    pub images: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FromGroupDoc {
    #[serde(rename = "G")]
    pub g: GroupRef,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FusionDoc {
    Generated {
        p: usize,
        #[serde(rename = "S")]
        s: GroupRef,
        generators: Vec<HomDoc>,
    },
    FromGroup {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<usize>,
        from_group: FromGroupDoc,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocalityDoc {
    Table {
        p: usize,
        elements: usize,
        inv: Vec<usize>,
        unit: usize,
        pairs: Vec<[usize; 3]>,
        #[serde(rename = "S")]
        s: Vec<usize>,
        #[serde(rename = "Delta")]
        delta: Vec<Vec<usize>>,
    },
    FromGroup {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<usize>,
        from_group: FromGroupDoc,
        #[serde(rename = "Delta")]
        delta: Vec<Vec<usize>>,
    },
}

/// A locality with a kernel. Element references use the group indices of a
/// group-derived locality and the element indices of a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDoc {
    pub locality: LocalityDoc,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    #[serde(rename = "Gamma0", default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub locality: LocalityDoc,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    #[serde(rename = "H")]
    pub h: Vec<usize>,
    #[serde(rename = "Tstar")]
    pub tstar: Vec<usize>,
    #[serde(rename = "Gamma_N", default, skip_serializing_if = "Option::is_none")]
    pub gamma_n: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Group,
    Fusion,
    Locality,
    KernelInstance,
    ProductInstance,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Group, Kind::Fusion, Kind::Locality, Kind::KernelInstance, Kind::ProductInstance];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Fusion => "fusion",
            Kind::Locality => "locality",
            Kind::KernelInstance => "kernel-instance",
            Kind::ProductInstance => "product-instance",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Catalog,
    File,
}

/// An instance file: a payload of the given kind plus bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub name: String,
    pub kind: Kind,
    pub provenance: Provenance,
    #[serde(default)]
    pub notes: String,
    /// Word length at which the locality axioms are certified; validation
    /// depth is capped at this value when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub payload: Value,
}

/// A materialized kernel instance; masks are over the local indexing of `S`.
#[derive(Clone, Debug)]
pub struct KernelData {
    pub locality: Locality,
    pub n: ElemSet,
    pub gamma0: Option<Vec<u64>>,
}

#[derive(Clone, Debug)]
pub struct ProductData {
    pub locality: Locality,
    pub n: ElemSet,
    pub h: ElemSet,
    pub tstar: u64,
    pub gamma_n: Option<Vec<u64>>,
}

#[derive(Clone, Debug)]
pub enum Object {
    Group(FiniteGroup),
    Fusion(FusionSystem),
    Locality(Locality),
    Kernel(KernelData),
    Product(ProductData),
}

fn input<E: std::fmt::Display>(e: E) -> Error {
    Error::Input(e.to_string())
}

/// Text with sorted keys and no insignificant whitespace.
pub fn canonical_text<T: Serialize>(doc: &T) -> String {
    let v = serde_json::to_value(doc).expect("documents serialize");
    serde_json::to_string(&v).expect("values serialize")
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn sorted_sets(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = sets.iter().map(|s| sorted(s)).collect();
    out.sort();
    out.dedup();
    out
}

impl FusionDoc {
    pub fn canonical(&self) -> FusionDoc {
        match self {
            FusionDoc::Generated { p, s, generators } => {
                let mut gens: Vec<HomDoc> = generators
                    .iter()
                    .map(|h| {
                        let mut pairs: Vec<(usize, usize)> = h.domain.iter().copied().zip(h.images.iter().copied()).collect();
                        pairs.sort_unstable();
                        HomDoc { domain: pairs.iter().map(|x| x.0).collect(), images: pairs.iter().map(|x| x.1).collect() }
                    })
                    .collect();
                gens.sort_by(|a, b| (&a.domain, &a.images).cmp(&(&b.domain, &b.images)));
                gens.dedup();
                FusionDoc::Generated { p: *p, s: s.clone(), generators: gens }
            }
            FusionDoc::FromGroup { p, from_group } => FusionDoc::FromGroup {
                p: *p,
                from_group: FromGroupDoc { g: from_group.g.clone(), s: sorted(&from_group.s) },
            },
        }
    }
}

impl LocalityDoc {
    pub fn canonical(&self) -> LocalityDoc {
        match self {
            LocalityDoc::Table { p, elements, inv, unit, pairs, s, delta } => {
                let mut pairs = pairs.clone();
                pairs.sort_unstable();
                pairs.dedup();
                LocalityDoc::Table {
                    p: *p,
                    elements: *elements,
                    inv: inv.clone(),
                    unit: *unit,
                    pairs,
                    s: sorted(s),
                    delta: sorted_sets(delta),
                }
            }
            LocalityDoc::FromGroup { p, from_group, delta } => LocalityDoc::FromGroup {
                p: *p,
                from_group: FromGroupDoc { g: from_group.g.clone(), s: sorted(&from_group.s) },
                delta: sorted_sets(delta),
            },
        }
    }
}

impl KernelDoc {
    pub fn canonical(&self) -> KernelDoc {
        KernelDoc { locality: self.locality.canonical(), n: sorted(&self.n), gamma0: self.gamma0.as_deref().map(sorted_sets) }
    }
}

impl ProductDoc {
    pub fn canonical(&self) -> ProductDoc {
        ProductDoc {
            locality: self.locality.canonical(),
            n: sorted(&self.n),
            h: sorted(&self.h),
            tstar: sorted(&self.tstar),
            gamma_n: self.gamma_n.as_deref().map(sorted_sets),
        }
    }
}

/// Canonical text of a payload of the given kind.
pub fn canonical_payload(kind: Kind, payload: &Value) -> Result<String> {
    Ok(match kind {
        Kind::Group => canonical_text(&serde_json::from_value::<GroupRef>(payload.clone()).map_err(input)?),
        Kind::Fusion => canonical_text(&serde_json::from_value::<FusionDoc>(payload.clone()).map_err(input)?.canonical()),
        Kind::Locality => canonical_text(&serde_json::from_value::<LocalityDoc>(payload.clone()).map_err(input)?.canonical()),
        Kind::KernelInstance => {
            canonical_text(&serde_json::from_value::<KernelDoc>(payload.clone()).map_err(input)?.canonical())
        }
        Kind::ProductInstance => {
            canonical_text(&serde_json::from_value::<ProductDoc>(payload.clone()).map_err(input)?.canonical())
        }
    })
}

// ---------------------------------------------------------------------------
// Groups

pub fn group_from_doc(doc: &GroupDoc, caps: &Caps) -> Result<FiniteGroup> {
    match doc {
        GroupDoc::Table { name, order, mult } => {
            if *order == 0 || *order > caps.group_order {
                return Err(Error::OrderCap { cap: caps.group_order });
            }
            if mult.len() != *order || mult.iter().any(|r| r.len() != *order) {
                return Err(Error::BadTable(format!("table is not {order} x {order}")));
            }
            FiniteGroup::from_table(name, mult, caps.group_order)
        }
        GroupDoc::Perms { name, perm_gens, degree } => {
            if *degree == 0 || *degree > 4096 {
                return Err(Error::Input(format!("degree {degree} outside 1..=4096")));
            }
            FiniteGroup::from_perms(name, perm_gens, *degree, caps.group_order)
        }
    }
}

pub fn group_to_doc(g: &FiniteGroup) -> GroupDoc {
    match (g.perm_gens(), g.perms()) {
        (Some(gens), Some(perms)) => {
            GroupDoc::Perms { name: g.name().to_string(), perm_gens: gens.to_vec(), degree: perms[0].len() }
        }
        _ => GroupDoc::Table { name: g.name().to_string(), order: g.order(), mult: g.table() },
    }
}

pub fn resolve_group(r: &GroupRef, caps: &Caps) -> Result<FiniteGroup> {
    match r {
        GroupRef::Inline(doc) => group_from_doc(doc, caps),
        GroupRef::Named(name) => {
            let doc = crate::catalog::group_doc(name).ok_or_else(|| Error::Input(format!("unknown catalog group `{name}`")))?;
            group_from_doc(&doc, caps)
        }
    }
}

fn elem_set(v: &[usize], n: usize, what: &str) -> Result<ElemSet> {
    if let Some(&x) = v.iter().find(|&&x| x >= n) {
        return Err(Error::Input(format!("{what}: element {x} out of range 0..{n}")));
    }
    let set = ElemSet::from_iter(v.iter().copied());
    if set.len() != v.len() {
        return Err(Error::Input(format!("{what}: repeated elements")));
    }
    Ok(set)
}

/// The prime of a non-trivial prime power.
fn prime_of(n: usize) -> Result<usize> {
    let p = (2..=n).find(|d| n % d == 0).ok_or_else(|| Error::Input("S is trivial; give p explicitly".into()))?;
    if !is_power_of(n, p) {
        return Err(Error::Input(format!("|S| = {n} is not a prime power")));
    }
    Ok(p)
}

fn check_prime(p: usize) -> Result<usize> {
    if !crate::grp::is_prime(p) {
        return Err(Error::Input(format!("p = {p} is not prime")));
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Fusion systems

pub fn fusion_from_doc(doc: &FusionDoc, caps: &Caps) -> Result<FusionSystem> {
    match doc {
        FusionDoc::Generated { p, s, generators } => {
            let p = check_prime(*p)?;
            let sg = resolve_group(s, caps)?;
            if sg.order() > 64 || !is_power_of(sg.order(), p) {
                return Err(Error::Input(format!("S has order {}, not a power of {p} up to 64", sg.order())));
            }
            let pg = Arc::new(PGroup::from_group(&sg)?);
            let mut gens = Vec::with_capacity(generators.len());
            for h in generators {
                if h.domain.len() != h.images.len() {
                    return Err(Error::BadMorphism("domain and images differ in length".into()));
                }
                let dom = elem_set(&h.domain, sg.order(), "domain")?;
                elem_set(&h.images, sg.order(), "images")?;
                let mut pairs: Vec<(usize, usize)> = h.domain.iter().copied().zip(h.images.iter().copied()).collect();
                pairs.sort_unstable();
                let domain = dom.iter().fold(0u64, |m, x| m | 1 << x);
                gens.push(Hom { domain, images: pairs.iter().map(|x| x.1 as u8).collect() });
            }
            FusionSystem::closure(p, pg.clone(), pg.full(), gens, caps)
        }
        FusionDoc::FromGroup { p, from_group } => {
            let g = resolve_group(&from_group.g, caps)?;
            let s = elem_set(&from_group.s, g.order(), "S")?;
            let p = match p {
                Some(p) => check_prime(*p)?,
                None => prime_of(s.len())?,
            };
            Ok(FusionSystem::from_group(&g, &s, p, caps)?.0)
        }
    }
}

/// A generated document for any fusion system: its non-identity morphisms
/// over the full support, with `S` written as a table.
pub fn fusion_to_doc(f: &FusionSystem) -> Result<FusionDoc> {
    if f.support() != f.group().full() {
        return Err(Error::Input("only systems over the whole ambient group are written".into()));
    }
    let lat = f.lattice();
    let mut gens = Vec::new();
    for (i, set) in f.store().iter().enumerate() {
        let dom: Vec<usize> = bits64(lat.subs[i]).collect();
        for phi in set {
            if dom.iter().zip(phi).any(|(&x, &y)| x != y as usize) {
                gens.push(HomDoc { domain: dom.clone(), images: phi.iter().map(|&y| y as usize).collect() });
            }
        }
    }
    let s = GroupRef::Inline(group_to_doc(&f.group().to_group("S")));
    Ok(FusionDoc::Generated { p: f.p(), s, generators: gens }.canonical())
}

// ---------------------------------------------------------------------------
// Localities

pub fn locality_from_doc(name: &str, doc: &LocalityDoc, caps: &Caps) -> Result<Locality> {
    match doc {
        LocalityDoc::Table { p, elements, inv, unit, pairs, s, delta } => {
            let p = check_prime(*p)?;
            let n = *elements;
            if n == 0 || n > caps.group_order {
                return Err(Error::OrderCap { cap: caps.group_order });
            }
            if inv.len() != n {
                return Err(Error::Input(format!("inv has {} entries for {n} elements", inv.len())));
            }
            let mut prod = vec![UNDEF; n * n];
            for &[a, b, c] in pairs {
                if a >= n || b >= n || c >= n {
                    return Err(Error::Input(format!("pair [{a},{b},{c}] out of range")));
                }
                let slot = &mut prod[a * n + b];
                if *slot != UNDEF && *slot as usize != c {
                    return Err(Error::Input(format!("pair ({a},{b}) has two products")));
                }
                *slot = c as u32;
            }
            Locality::from_table(name, p, inv.clone(), *unit, prod, s, delta)
        }
        LocalityDoc::FromGroup { p, from_group, delta } => {
            let g = resolve_group(&from_group.g, caps)?;
            let s = elem_set(&from_group.s, g.order(), "S")?;
            let p = match p {
                Some(p) => check_prime(*p)?,
                None => prime_of(s.len())?,
            };
            let s_sorted: Vec<usize> = s.iter().collect();
            if s_sorted.len() > 64 {
                return Err(Error::Input("S has more than 64 elements".into()));
            }
            let mut masks = Vec::with_capacity(delta.len());
            for d in delta {
                let mut m = 0u64;
                for x in d {
                    let i = s_sorted.binary_search(x).map_err(|_| Error::Input(format!("object member {x} is not in S")))?;
                    m |= 1 << i;
                }
                masks.push(m);
            }
            let mut l = Locality::from_group(&g, &s, p, &masks)?;
            l.set_name(name);
            Ok(l)
        }
    }
}

/// The table form of any locality.
pub fn locality_to_doc(l: &Locality) -> LocalityDoc {
    let n = l.size();
    let prod = l.raw_product();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let c = prod[a * n + b];
            if c != UNDEF {
                pairs.push([a, b, c as usize]);
            }
        }
    }
    LocalityDoc::Table {
        p: l.p(),
        elements: n,
        inv: (0..n).map(|f| l.inv(f)).collect(),
        unit: l.unit(),
        pairs,
        s: sorted(l.s_elems()),
        delta: l.delta().iter().map(|&m| l.mask_elems(m).to_vec()).collect(),
    }
    .canonical()
}

/// Resolves element references of a document against a locality.
struct Refs {
    index: BTreeMap<usize, usize>,
}

impl Refs {
    fn of(l: &Locality) -> Refs {
        let index = match l.labels() {
            Some(labels) => labels.iter().enumerate().map(|(i, &g)| (g, i)).collect(),
            None => (0..l.size()).map(|i| (i, i)).collect(),
        };
        Refs { index }
    }

    fn set(&self, v: &[usize], what: &str) -> Result<ElemSet> {
        let mut out = ElemSet::empty();
        for x in v {
            let i = self.index.get(x).ok_or_else(|| Error::Input(format!("{what}: {x} is not an element of L")))?;
            out.insert(*i);
        }
        Ok(out)
    }

    fn mask(&self, l: &Locality, v: &[usize], what: &str) -> Result<u64> {
        let set = self.set(v, what)?;
        if !set.is_subset(&l.s_set()) {
            return Err(Error::Input(format!("{what}: not a subset of S")));
        }
        let m = l.mask_of(&set);
        if l.lattice().id(m).is_none() {
            return Err(Error::Input(format!("{what}: not a subgroup of S")));
        }
        Ok(m)
    }

    fn masks(&self, l: &Locality, v: &[Vec<usize>], what: &str) -> Result<Vec<u64>> {
        v.iter().map(|x| self.mask(l, x, what)).collect()
    }
}

pub fn kernel_from_doc(name: &str, doc: &KernelDoc, caps: &Caps) -> Result<KernelData> {
    let locality = locality_from_doc(name, &doc.locality, caps)?;
    let refs = Refs::of(&locality);
    let n = refs.set(&doc.n, "N")?;
    let gamma0 = doc.gamma0.as_ref().map(|g| refs.masks(&locality, g, "Gamma0")).transpose()?;
    Ok(KernelData { locality, n, gamma0 })
}

pub fn product_from_doc(name: &str, doc: &ProductDoc, caps: &Caps) -> Result<ProductData> {
    let locality = locality_from_doc(name, &doc.locality, caps)?;
    let refs = Refs::of(&locality);
    let n = refs.set(&doc.n, "N")?;
    let h = refs.set(&doc.h, "H")?;
    let tstar = refs.mask(&locality, &doc.tstar, "Tstar")?;
    let gamma_n = doc.gamma_n.as_ref().map(|g| refs.masks(&locality, g, "Gamma_N")).transpose()?;
    Ok(ProductData { locality, n, h, tstar, gamma_n })
}

/// Materialize a payload of the given kind.
pub fn materialize(name: &str, kind: Kind, payload: &Value, caps: &Caps) -> Result<Object> {
    let doc = |v: &Value| v.clone();
    Ok(match kind {
        Kind::Group => {
            let r: GroupRef = serde_json::from_value(doc(payload)).map_err(input)?;
            Object::Group(resolve_group(&r, caps)?)
        }
        Kind::Fusion => Object::Fusion(fusion_from_doc(&serde_json::from_value(doc(payload)).map_err(input)?, caps)?),
        Kind::Locality => {
            Object::Locality(locality_from_doc(name, &serde_json::from_value(doc(payload)).map_err(input)?, caps)?)
        }
        Kind::KernelInstance => {
            Object::Kernel(kernel_from_doc(name, &serde_json::from_value(doc(payload)).map_err(input)?, caps)?)
        }
        Kind::ProductInstance => {
            Object::Product(product_from_doc(name, &serde_json::from_value(doc(payload)).map_err(input)?, caps)?)
        }
    })
}

// ---------------------------------------------------------------------------
// Text entry points, one per file format.

pub fn parse_group(text: &str, caps: &Caps) -> Result<FiniteGroup> {
    let doc: GroupRef = serde_json::from_str(text).map_err(input)?;
    resolve_group(&doc, caps)
}

pub fn parse_fusion(text: &str, caps: &Caps) -> Result<FusionSystem> {
    let doc: FusionDoc = serde_json::from_str(text).map_err(input)?;
    fusion_from_doc(&doc, caps)
}

pub fn parse_locality(text: &str, caps: &Caps) -> Result<Locality> {
    let doc: LocalityDoc = serde_json::from_str(text).map_err(input)?;
    locality_from_doc("L", &doc, caps)
}

pub fn parse_report(text: &str) -> Result<Report> {
    Report::from_json(text).map_err(input)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut inst: Instance = serde_json::from_str(text).map_err(input)?;
    inst.provenance = Provenance::File;
    canonical_payload(inst.kind, &inst.payload)?;
    Ok(inst)
}

impl Instance {
    /// The instance with its payload in canonical form, as pretty JSON.
    pub fn to_json(&self) -> Result<String> {
        let payload: Value = serde_json::from_str(&canonical_payload(self.kind, &self.payload)?).map_err(input)?;
        let inst = Instance { payload, ..self.clone() };
        Ok(serde_json::to_string_pretty(&inst).expect("instances serialize"))
    }

    pub fn materialize(&self, caps: &Caps) -> Result<Object> {
        materialize(&self.name, self.kind, &self.payload, caps)
    }

    /// Caps with the validation depth limited to the certified depth.
    pub fn caps(&self, caps: &Caps) -> Caps {
        Caps { depth: self.depth.map_or(caps.depth, |d| d.min(caps.depth)), ..*caps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_locality_rejects_conflicting_pairs() {
        let doc = r#"{"p":2,"elements":2,"inv":[0,1],"unit":0,"pairs":[[0,0,0],[0,0,1]],"S":[0,1],"Delta":[[0,1]]}"#;
        assert!(parse_locality(doc, &Caps::default()).is_err());
    }

    #[test]
    fn canonical_text_sorts_sets() {
        let a: LocalityDoc =
            serde_json::from_str(r#"{"from_group":{"G":"s4","S":[3,1,0]},"Delta":[[1,0],[0]]}"#).unwrap();
        let b: LocalityDoc =
            serde_json::from_str(r#"{"Delta":[[0],[0,1]],"from_group":{"S":[0,1,3],"G":"s4"}}"#).unwrap();
        assert_eq!(canonical_text(&a.canonical()), canonical_text(&b.canonical()));
    }

    #[test]
    fn kinds_round_trip_through_names() {
        for k in Kind::ALL {
            assert_eq!(Kind::parse(k.as_str()), Some(k));
            assert_eq!(serde_json::to_value(k).unwrap(), Value::String(k.as_str().into()));
        }
    }
}
