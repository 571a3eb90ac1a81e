use super::lattice::{Lattice, NONE};
use crate::bits::{bits64, ElemSet};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::grp::{is_power_of, FiniteGroup, PGroup};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

/// An injective homomorphism from a subgroup of the ambient p-group into it.
/// `images[i]` is the image of the `i`-th smallest member of `domain`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hom {
    pub domain: u64,
    pub images: Vec<u8>,
}

impl Hom {
    pub fn image(&self) -> u64 {
        image_mask(&self.images)
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        bits64(self.domain).position(|d| d == x).map(|i| self.images[i] as usize)
    }
}

pub fn image_mask(images: &[u8]) -> u64 {
    images.iter().fold(0u64, |m, &y| m | 1 << y)
}

/// Morphism sets keyed by domain: `homs[i]` is `Hom_F(P_i, support)`.
pub type Store = Vec<BTreeSet<Vec<u8>>>;

/// A fusion system over `support`, stored exhaustively.
#[derive(Clone, Debug)]
pub struct FusionSystem {
    p: usize,
    group: Arc<PGroup>,
    lat: Arc<Lattice>,
    homs: Store,
    gens: Vec<Hom>,
}

/// `φψ` where `φ: P → S` has image inside subgroup `q` and `ψ` is defined on `q`.
pub fn compose(lat: &Lattice, phi: &[u8], q: usize, psi: &[u8]) -> Vec<u8> {
    phi.iter().map(|&y| psi[lat.pos(q, y as usize)]).collect()
}

/// Restriction of `φ` (defined on subgroup `p`) to subgroup `a ≤ p`.
pub fn restrict(lat: &Lattice, p: usize, phi: &[u8], a: usize) -> Vec<u8> {
    lat.elems(a).iter().map(|&x| phi[lat.pos(p, x as usize)]).collect()
}

/// Inverse of the isomorphism `φ: P → Q` as a map on `q`.
pub fn inverse(lat: &Lattice, p: usize, phi: &[u8], q: usize) -> Vec<u8> {
    let mut inv = vec![NONE; phi.len()];
    for (k, &y) in phi.iter().enumerate() {
        inv[lat.pos(q, y as usize)] = lat.elems(p)[k];
    }
    inv
}

/// `c_s` restricted to subgroup `p`.
pub fn conj_map(g: &PGroup, lat: &Lattice, p: usize, s: usize) -> Vec<u8> {
    lat.elems(p).iter().map(|&x| g.conj(x as usize, s) as u8).collect()
}

pub fn identity(lat: &Lattice, p: usize) -> Vec<u8> {
    lat.elems(p).to_vec()
}

/// Greedy generating set of a subgroup.
pub fn generators(g: &PGroup, k: u64) -> Vec<usize> {
    let mut h = 1u64;
    let mut gens = Vec::new();
    for x in bits64(k) {
        if h >> x & 1 == 0 {
            h = g.generate(h | 1 << x);
            gens.push(x);
        }
    }
    gens
}

/// A partial map on the ambient group used as a closure step.
struct Move {
    domain: u64,
    map: Vec<u8>,
}

impl Move {
    fn from_hom(n: usize, h: &Hom) -> Move {
        let mut map = vec![NONE; n];
        for (x, &y) in bits64(h.domain).zip(&h.images) {
            map[x] = y;
        }
        Move { domain: h.domain, map }
    }

    fn inverse_of(n: usize, h: &Hom) -> Move {
        let mut map = vec![NONE; n];
        for (x, &y) in bits64(h.domain).zip(&h.images) {
            map[y as usize] = x as u8;
        }
        Move { domain: h.image(), map }
    }
}

/// Smallest set of isomorphisms between subgroups of `lat.support` that
/// contains the identities, the moves, and is closed under composition,
/// restriction and inversion. Returned as `Hom(P, support)` per subgroup.
fn groupoid_closure(g: &PGroup, lat: &Lattice, moves: &[Move], cap: usize) -> Result<Store> {
    let mut homs: Vec<Option<BTreeSet<Vec<u8>>>> = vec![None; lat.len()];
    let mut total = 0usize;
    for i in 0..lat.len() {
        if homs[i].is_some() {
            continue;
        }
        let start = identity(lat, i);
        let mut seen: HashSet<Vec<u8>> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            let img = image_mask(&cur);
            for m in moves {
                if img & !m.domain != 0 {
                    continue;
                }
                let next: Vec<u8> = cur.iter().map(|&y| m.map[y as usize]).collect();
                if !seen.contains(&next) {
                    if total + seen.len() >= cap {
                        return Err(Error::MorphismCap { cap });
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        // Every image Q of P receives Hom(Q) = φ⁻¹·Hom(P) for one iso φ: P → Q.
        let mut by_image: BTreeMap<u64, &Vec<u8>> = BTreeMap::new();
        for h in &seen {
            let e = by_image.entry(image_mask(h)).or_insert(h);
            if h < *e {
                *e = h;
            }
        }
        for (&q_mask, &phi) in &by_image {
            let q = lat.id(q_mask).expect("image of a subgroup is a subgroup");
            if homs[q].is_some() {
                continue;
            }
            let set: BTreeSet<Vec<u8>> = if q == i {
                seen.iter().cloned().collect()
            } else {
                let phi_inv = inverse(lat, i, phi, q);
                seen.iter().map(|psi| compose(lat, &phi_inv, i, psi)).collect()
            };
            total += set.len();
            if total > cap {
                return Err(Error::MorphismCap { cap });
            }
            homs[q] = Some(set);
        }
    }
    let _ = g;
    Ok(homs.into_iter().map(|h| h.expect("every subgroup visited")).collect())
}

impl FusionSystem {
    fn check_gens(g: &PGroup, support: u64, gens: &[Hom]) -> Result<()> {
        for (k, h) in gens.iter().enumerate() {
            if !g.is_subgroup(h.domain) || h.domain & !support != 0 {
                return Err(Error::BadMorphism(format!("generator {k}: domain is not a subgroup of the support")));
            }
            if h.images.len() != h.domain.count_ones() as usize {
                return Err(Error::BadMorphism(format!("generator {k}: wrong number of images")));
            }
            if h.images.iter().any(|&y| (y as usize) >= g.order() || support >> y & 1 == 0) {
                return Err(Error::BadMorphism(format!("generator {k}: image outside the support")));
            }
            if h.image().count_ones() as usize != h.images.len() {
                return Err(Error::BadMorphism(format!("generator {k}: not injective")));
            }
            let d: Vec<usize> = bits64(h.domain).collect();
            let at = |x: usize| h.images[d.iter().position(|&e| e == x).expect("closed domain")] as usize;
            for &x in &d {
                for &y in &d {
                    if at(g.mul(x, y)) != g.mul(at(x), at(y)) {
                        return Err(Error::BadMorphism(format!("generator {k}: not a homomorphism")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest fusion system over `support` containing `gens`: inner
    /// fusion plus closure under composition, restriction and inversion.
    pub fn closure(p: usize, group: Arc<PGroup>, support: u64, gens: Vec<Hom>, caps: &Caps) -> Result<FusionSystem> {
        if !group.is_subgroup(support) || !is_power_of(support.count_ones() as usize, p) {
            return Err(Error::Input("support is not a p-subgroup".into()));
        }
        Self::check_gens(&group, support, &gens)?;
        let lat = Arc::new(Lattice::new(&group, support));
        let homs = Self::closure_store(&group, &lat, &gens, true, caps.morphisms)?;
        Ok(FusionSystem { p, group, lat, homs, gens })
    }

    /// Closure store on a given lattice; `inner` adds the conjugations by the support.
    pub(crate) fn closure_store(g: &PGroup, lat: &Lattice, gens: &[Hom], inner: bool, cap: usize) -> Result<Store> {
        let n = g.order();
        let mut moves = Vec::new();
        if inner {
            for s in generators(g, lat.support) {
                let map = (0..n).map(|x| if lat.support >> x & 1 == 1 { g.conj(x, s) as u8 } else { NONE }).collect();
                moves.push(Move { domain: lat.support, map });
            }
        }
        for h in gens {
            moves.push(Move::from_hom(n, h));
            moves.push(Move::inverse_of(n, h));
        }
        groupoid_closure(g, lat, &moves, cap)
    }

    /// `F_S(G)` for a Sylow p-subgroup `s` of `g`. The ambient group of the
    /// result is `s` reindexed; the returned vector maps local indices to `g`.
    pub fn from_group(g: &FiniteGroup, s: &ElemSet, p: usize, caps: &Caps) -> Result<(FusionSystem, Vec<usize>)> {
        if !g.is_sylow(s, p) {
            return Err(Error::NotSylow(format!("{s:?} in {}", g.name())));
        }
        let (sg, back) = g.subgroup_as_group(s, "S")?;
        let group = Arc::new(PGroup::from_group(&sg)?);
        let mut local = vec![NONE; g.order()];
        for (i, &x) in back.iter().enumerate() {
            local[x] = i as u8;
        }
        let lat = Arc::new(Lattice::new(&group, group.full()));
        let mut homs = Vec::with_capacity(lat.len());
        let mut total = 0;
        for i in 0..lat.len() {
            let mut set = BTreeSet::new();
            let members: Vec<usize> = lat.elems(i).iter().map(|&x| back[x as usize]).collect();
            for t in 0..g.order() {
                let img: Vec<u8> = members.iter().map(|&x| local[g.conj(x, t)]).collect();
                if img.iter().all(|&y| y != NONE) {
                    set.insert(img);
                }
            }
            total += set.len();
            if total > caps.morphisms {
                return Err(Error::MorphismCap { cap: caps.morphisms });
            }
            homs.push(set);
        }
        Ok((FusionSystem { p, group, lat, homs, gens: Vec::new() }, back))
    }

    /// The system generated by conjugation inside `support` only.
    pub fn inner(p: usize, group: Arc<PGroup>, support: u64, caps: &Caps) -> Result<FusionSystem> {
        Self::closure(p, group, support, Vec::new(), caps)
    }

    /// A system over `t ≤ support` from a store aligned with the subgroups of `t`.
    pub(crate) fn with_support(&self, t: u64, homs: Store) -> FusionSystem {
        let lat = Arc::new(self.lat.restrict(self.group.order(), t));
        debug_assert_eq!(lat.len(), homs.len());
        FusionSystem { p: self.p, group: self.group.clone(), lat, homs, gens: Vec::new() }
    }

    /// Morphisms of `self` between subgroups of `t`.
    pub fn full_subcategory(&self, t: u64) -> Result<FusionSystem> {
        self.id(t)?;
        let lat = self.lat.restrict(self.group.order(), t);
        let homs = lat
            .subs
            .iter()
            .map(|&m| self.homs[self.lat.id(m).expect("sub")].iter().filter(|h| image_mask(h) & !t == 0).cloned().collect())
            .collect();
        Ok(self.with_support(t, homs))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lat
    }

    pub fn support(&self) -> u64 {
        self.lat.support
    }

    pub fn gens(&self) -> &[Hom] {
        &self.gens
    }

    pub fn subgroups(&self) -> &[u64] {
        &self.lat.subs
    }

    pub fn store(&self) -> &Store {
        &self.homs
    }

    pub fn id(&self, m: u64) -> Result<usize> {
        self.lat.id(m).ok_or_else(|| Error::NotSubgroup(format!("{m:#x} is not a subgroup of the support")))
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.iter().map(BTreeSet::len).sum()
    }

    /// `Hom_F(P, support)` as image vectors.
    pub fn homs_from(&self, p: u64) -> Result<&BTreeSet<Vec<u8>>> {
        Ok(&self.homs[self.id(p)?])
    }

    /// `Hom_F(P, Q)`.
    pub fn hom_set(&self, p: u64, q: u64) -> Result<Vec<Hom>> {
        let i = self.id(p)?;
        self.id(q)?;
        Ok(self.homs[i]
            .iter()
            .filter(|h| image_mask(h) & !q == 0)
            .map(|h| Hom { domain: p, images: h.clone() })
            .collect())
    }

    pub fn contains(&self, h: &Hom) -> bool {
        self.lat.id(h.domain).is_some_and(|i| self.homs[i].contains(&h.images))
    }

    /// `Aut_F(P)`.
    pub fn auts(&self, i: usize) -> Vec<Vec<u8>> {
        let m = self.lat.subs[i];
        self.homs[i].iter().filter(|h| image_mask(h) == m).cloned().collect()
    }

    /// The F-conjugacy class of subgroup `i`, sorted by mask.
    pub fn class_of(&self, i: usize) -> Vec<u64> {
        let set: BTreeSet<u64> = self.homs[i].iter().map(|h| image_mask(h)).collect();
        set.into_iter().collect()
    }

    /// Partition of all subgroups into F-conjugacy classes (each sorted;
    /// classes ordered by their least member's lattice position).
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut done = vec![false; self.lat.len()];
        let mut out = Vec::new();
        for i in 0..self.lat.len() {
            if done[i] {
                continue;
            }
            let c = self.class_of(i);
            for &m in &c {
                done[self.lat.id(m).expect("member")] = true;
            }
            out.push(c);
        }
        out
    }

    /// Same support and identical morphism stores.
    pub fn same_as(&self, other: &FusionSystem) -> bool {
        *self.group == *other.group && self.lat.subs == other.lat.subs && self.homs == other.homs
    }

    /// Every morphism of `self` is a morphism of `other` (same ambient group).
    pub fn is_subsystem_of(&self, other: &FusionSystem) -> bool {
        *self.group == *other.group
            && self.lat.subs.iter().enumerate().all(|(i, &m)| match other.lat.id(m) {
                Some(j) => self.homs[i].is_subset(&other.homs[j]),
                None => false,
            })
    }

    /// Check the fusion-system axioms directly on the store; `Err` names the
    /// first violated axiom.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let g = &*self.group;
        let lat = &*self.lat;
        for i in 0..lat.len() {
            let pm = lat.subs[i];
            for s in bits64(lat.support) {
                if !self.homs[i].contains(&conj_map(g, lat, i, s)) {
                    return Err(format!("inner map c_{s} missing on {pm:#x}"));
                }
            }
            for h in &self.homs[i] {
                let q = lat.id(image_mask(h)).ok_or("image is not a subgroup")?;
                if image_mask(h).count_ones() != pm.count_ones() {
                    return Err(format!("non-injective map on {pm:#x}"));
                }
                for (a, &x) in lat.elems(i).iter().enumerate() {
                    for (b, &y) in lat.elems(i).iter().enumerate() {
                        let xy = lat.pos(i, g.mul(x as usize, y as usize));
                        if h[xy] as usize != g.mul(h[a] as usize, h[b] as usize) {
                            return Err(format!("non-homomorphism on {pm:#x}"));
                        }
                    }
                }
                if !self.homs[q].contains(&inverse(lat, i, h, q)) {
                    return Err(format!("inverse missing for a map on {pm:#x}"));
                }
                for a in 0..lat.len() {
                    if lat.subs[a] & !pm == 0 && !self.homs[a].contains(&restrict(lat, i, h, a)) {
                        return Err(format!("restriction to {:#x} missing", lat.subs[a]));
                    }
                }
                for k in &self.homs[q] {
                    if !self.homs[i].contains(&compose(lat, h, q, k)) {
                        return Err(format!("composite missing on {pm:#x}"));
                    }
                }
            }
        }
        Ok(())
    }
}
