use super::locality::{Locality, UNDEF};
use crate::bits::{bits64, ElemSet};
use crate::error::{Error, Result};
use crate::report::{Report, Timer};
use serde::Serialize;
use serde_json::json;
use std::collections::HashSet;

/// The maximal cosets `Nf` of a partial normal subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetPartition {
    pub blocks: Vec<Vec<usize>>,
    /// Block index of every element.
    pub block_of: Vec<usize>,
}

/// `L/N` with the induced partial product and the natural projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub cosets: CosetPartition,
    /// The quotient as a locality over the image of `S`.
    pub locality: Locality,
    pub projection: Vec<usize>,
}

impl Locality {
    /// `L|_{Δ0}`: elements with `S_f ∈ Δ0`, products on `D_{Δ0}`.
    pub fn restrict(&self, delta0: &[u64]) -> Result<(Locality, Vec<usize>)> {
        if delta0.is_empty() {
            return Err(Error::Precondition("Δ0 is empty".into()));
        }
        let set: HashSet<u64> = delta0.iter().copied().collect();
        for &m in delta0 {
            if !self.is_object(m) {
                return Err(Error::Precondition(format!("{m:#x} is not an object of L")));
            }
            if self.lattice().subs.iter().any(|&o| o & m == m && !set.contains(&o)) {
                return Err(Error::Precondition(format!("Δ0 is not overgroup-closed at {m:#x}")));
            }
            if (0..self.size()).any(|f| m & !self.s_f(f) == 0 && !set.contains(&self.chase_mask(m, f))) {
                return Err(Error::Precondition(format!("Δ0 is not closed under F-conjugacy at {m:#x}")));
            }
        }
        let keep = ElemSet::from_iter((0..self.size()).filter(|&f| set.contains(&self.s_f(f))));
        self.sub_locality(&format!("{}|Δ0", self.name()), &keep, delta0)
    }

    /// `g = nf` with `n ∈ N`, `f ∈ N_L(T)`, `(n, f) ∈ D` and `S_g = S_(n,f)`.
    pub fn frattini_split(&self, n: &ElemSet, g: usize) -> Result<(usize, usize)> {
        if !self.is_partial_normal(n) {
            return Err(Error::NotNormal("not a partial normal subgroup".into()));
        }
        let t = self.mask_of(n);
        let nt = self.normalizer_of_mask(t);
        let sg = self.s_f(g);
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for x in n.iter() {
            for f in nt.iter() {
                if self.mul(x, f) == Some(g) && self.in_domain(&[x, f]) && self.s_word(&[x, f]) == sg {
                    cands.push((x, f));
                }
            }
        }
        // Prefer the trivial splittings when they exist.
        cands.sort_by_key(|&(x, f)| (x != self.unit(), f != self.unit(), x, f));
        cands.first().copied().ok_or_else(|| Error::Invariant(format!("no Frattini splitting of element {g}")))
    }

    /// Maximal cosets of a partial normal subgroup `n`.
    pub fn cosets(&self, n: &ElemSet) -> Result<CosetPartition> {
        if !self.is_partial_normal(n) {
            return Err(Error::NotNormal("not a partial normal subgroup".into()));
        }
        let coset = |f: usize| ElemSet::from_iter(n.iter().filter_map(|x| self.mul(x, f)));
        let all: Vec<ElemSet> = (0..self.size()).map(coset).collect();
        let mut maximal: Vec<ElemSet> = Vec::new();
        for c in &all {
            if !all.iter().any(|d| c.is_subset(d) && c != d) && !maximal.contains(c) {
                maximal.push(*c);
            }
        }
        maximal.sort_by_key(|c| c.iter().next());
        let mut block_of = vec![usize::MAX; self.size()];
        for (i, c) in maximal.iter().enumerate() {
            for f in c.iter() {
                if block_of[f] != usize::MAX {
                    return Err(Error::Invariant(format!("maximal cosets overlap in element {f}")));
                }
                block_of[f] = i;
            }
        }
        if let Some(f) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::Invariant(format!("element {f} lies in no maximal coset")));
        }
        Ok(CosetPartition { blocks: maximal.iter().map(ElemSet::to_vec).collect(), block_of })
    }

    /// `L/N` as a locality over the image of `S`, objects the images of `Δ`.
    pub fn quotient(&self, n: &ElemSet) -> Result<Quotient> {
        let cosets = self.cosets(n)?;
        let k = cosets.blocks.len();
        let proj = cosets.block_of.clone();
        let mut prod = vec![UNDEF; k * k];
        for a in 0..self.size() {
            for b in 0..self.size() {
                if let Some(ab) = self.mul(a, b) {
                    let slot = &mut prod[proj[a] * k + proj[b]];
                    let v = proj[ab] as u32;
                    if *slot != UNDEF && *slot != v {
                        return Err(Error::Invariant(format!("quotient product not well defined at ({a}, {b})")));
                    }
                    *slot = v;
                }
            }
        }
        let mut inv = vec![usize::MAX; k];
        for f in 0..self.size() {
            let (b, c) = (proj[f], proj[self.inv(f)]);
            if inv[b] != usize::MAX && inv[b] != c {
                return Err(Error::Invariant(format!("quotient inversion not well defined at {f}")));
            }
            inv[b] = c;
        }
        let s_img: Vec<usize> = {
            let mut v: Vec<usize> = self.s_elems().iter().map(|&s| proj[s]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let delta: Vec<Vec<usize>> = self
            .delta()
            .iter()
            .map(|&m| {
                let mut v: Vec<usize> = bits64(m).map(|x| proj[self.s_elems()[x]]).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let locality = Locality::from_table(
            &format!("{}/N", self.name()),
            self.p(),
            inv,
            proj[self.unit()],
            prod,
            &s_img,
            &delta,
        )?;
        Ok(Quotient { cosets, locality, projection: proj })
    }
}

/// Check that `map: src → dst` is a projection of localities.
pub fn check_projection(src: &Locality, dst: &Locality, map: &[usize]) -> Report {
    let timer = Timer::start();
    let mut r = Report::new("projection");
    let n = src.size();
    if map.len() != n || map.iter().any(|&x| x >= dst.size()) {
        r.check("map is total", false, json!({"len": map.len()}));
        r.consistent = false;
        return timer.finish(r);
    }
    let bad_hom = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| match src.mul(a, b) {
        Some(ab) => dst.mul(map[a], map[b]) != Some(map[ab]),
        None => false,
    });
    let bad_inv = (0..n).find(|&f| map[src.inv(f)] != dst.inv(map[f]));
    r.check(
        "homomorphism of partial groups",
        bad_hom.is_none() && bad_inv.is_none(),
        json!({"pair": bad_hom.map(|(a, b)| [a, b]), "inverse": bad_inv}),
    );
    let onto = (0..dst.size()).all(|y| map.contains(&y));
    r.check("surjective on elements", onto, json!(null));
    let mut lifted = HashSet::new();
    for a in 0..n {
        for b in 0..n {
            if src.mul(a, b).is_some() {
                lifted.insert((map[a], map[b]));
            }
        }
    }
    let unlifted = (0..dst.size())
        .flat_map(|a| (0..dst.size()).map(move |b| (a, b)))
        .find(|&(a, b)| dst.mul(a, b).is_some() && !lifted.contains(&(a, b)));
    r.check("domain maps onto domain", unlifted.is_none(), json!(unlifted.map(|(a, b)| [a, b])));
    let img_mask = |m: u64| -> Option<u64> {
        bits64(m).try_fold(0u64, |acc, x| dst.s_index(map[src.s_elems()[x]]).map(|y| acc | 1 << y))
    };
    let mut images: Vec<u64> = src.delta().iter().filter_map(|&m| img_mask(m)).collect();
    images.sort_unstable();
    images.dedup();
    r.check("objects map onto objects", images == dst.delta(), json!({"images": images, "target": dst.delta()}));
    let kernel = ElemSet::from_iter((0..n).filter(|&f| map[f] == dst.unit()));
    r.check("kernel is partial normal", src.is_partial_normal(&kernel), json!(kernel.to_vec()));
    r.consistent = r.all_pass();
    timer.finish(r)
}
