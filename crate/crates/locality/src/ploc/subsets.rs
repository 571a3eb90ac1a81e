use super::locality::Locality;
use crate::bits::{bits64, ElemSet};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fus::{FusionSystem, Hom};
use std::collections::BTreeSet;

impl Locality {
    /// `N_L(X)`: elements `f` with `x^f` defined and in `X` for all `x ∈ X`,
    /// and `X^f = X`.
    pub fn normalizer(&self, x: &ElemSet) -> ElemSet {
        ElemSet::from_iter((0..self.size()).filter(|&f| {
            let mut img = ElemSet::empty();
            for y in x.iter() {
                match self.try_conj(y, f) {
                    Some(z) if x.contains(z) => img.insert(z),
                    _ => return false,
                }
            }
            img == *x
        }))
    }

    /// `C_L(X)`: elements `f` with `x^f = x` for all `x ∈ X`.
    pub fn centralizer(&self, x: &ElemSet) -> ElemSet {
        ElemSet::from_iter((0..self.size()).filter(|&f| x.iter().all(|y| self.try_conj(y, f) == Some(y))))
    }

    /// `N_L(P)` for a mask over `S`.
    pub fn normalizer_of_mask(&self, m: u64) -> ElemSet {
        self.normalizer(&self.mask_elems(m))
    }

    /// Inverse-closed, and closed under products of pairs in `D`.
    pub fn is_partial_subgroup(&self, x: &ElemSet) -> bool {
        if x.is_empty() || x.iter().any(|f| !x.contains(self.inv(f))) {
            return false;
        }
        let m: Vec<usize> = x.iter().collect();
        m.iter().all(|&a| m.iter().all(|&b| self.mul(a, b).is_none_or(|c| x.contains(c))))
    }

    /// A partial subgroup with `n^f ∈ N` whenever `n^f` is defined.
    pub fn is_partial_normal(&self, x: &ElemSet) -> bool {
        self.is_partial_subgroup(x)
            && x.iter().all(|y| (0..self.size()).all(|f| self.try_conj(y, f).is_none_or(|z| x.contains(z))))
    }

    /// A witness `(n, f)` with `n^f ∉ N`, if any.
    pub fn normality_witness(&self, x: &ElemSet) -> Option<(usize, usize)> {
        x.iter().find_map(|y| (0..self.size()).find(|&f| self.try_conj(y, f).is_some_and(|z| !x.contains(z))).map(|f| (y, f)))
    }

    /// `O_p(L)` as the largest subgroup `P ≤ S` with `N_L(P) = L`, cross-checked
    /// against the intersection of all `S_w`.
    pub fn op_core(&self) -> Result<u64> {
        let all = self.all();
        let by_normalizer = self
            .lattice()
            .subs
            .iter()
            .rev()
            .copied()
            .find(|&m| self.normalizer_of_mask(m) == all)
            .expect("the trivial subgroup is normal");
        // Elements of S surviving every word.
        let mut r = self.group().full();
        loop {
            let next = bits64(r)
                .filter(|&x| (0..self.size()).all(|f| self.conj_s(x, f).is_some_and(|y| r >> y & 1 == 1)))
                .fold(0u64, |m, x| m | 1 << x);
            if next == r {
                break;
            }
            r = next;
        }
        if r != by_normalizer {
            return Err(Error::Invariant(format!("O_p(L): normalizer scan gives {by_normalizer:#x}, word intersection {r:#x}")));
        }
        Ok(r)
    }

    /// `F_S(L)`, generated by the maps `c_f: S_f → S`.
    pub fn fusion(&self, caps: &Caps) -> Result<FusionSystem> {
        let gens = self.conjugation_maps(&self.all(), self.group().full());
        FusionSystem::closure(self.p(), self.group().clone(), self.group().full(), gens, caps)
    }

    /// `F_{S∩H}(H)`, generated by `c_h: S_h ∩ H → S ∩ H` for `h ∈ H`.
    pub fn fusion_of(&self, h: &ElemSet, caps: &Caps) -> Result<FusionSystem> {
        if !self.is_partial_subgroup(h) {
            return Err(Error::NotSubgroup("not a partial subgroup".into()));
        }
        let t = self.mask_of(h);
        let gens = self.conjugation_maps(h, t);
        FusionSystem::closure(self.p(), self.group().clone(), t, gens, caps)
    }

    fn conjugation_maps(&self, h: &ElemSet, t: u64) -> Vec<Hom> {
        let mut seen = BTreeSet::new();
        for f in h.iter() {
            let dom = self.s_f(f) & t;
            let images: Vec<u8> = bits64(dom).map(|x| self.conj_s(x, f).expect("in S_f") as u8).collect();
            if images.iter().any(|&y| t >> y & 1 == 0) {
                continue;
            }
            seen.insert(Hom { domain: dom, images });
        }
        seen.into_iter().filter(|h| h.images.iter().zip(bits64(h.domain)).any(|(&y, x)| y as usize != x)).collect()
    }
}
