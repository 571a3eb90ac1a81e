use super::system::{compose, conj_map, image_mask, inverse, restrict, FusionSystem};
use crate::bits::bits64;
use crate::error::Result;
use crate::grp::{ord, p_part, FiniteGroup};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub fully_normalized: bool,
    pub fully_centralized: bool,
    pub fully_automized: bool,
    pub receptive: bool,
}

/// One F-conjugacy class with per-member flags, aligned with `members`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub representative: u64,
    pub members: Vec<u64>,
    pub flags: Vec<Flags>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Some member is fully automized and receptive.
    Direct,
    /// Fully normalized implies fully centralized and fully automized;
    /// fully centralized implies receptive.
    Axioms,
}

impl ClassRecord {
    pub fn respects_saturation(&self, mode: Mode) -> bool {
        match mode {
            Mode::Direct => self.flags.iter().any(|f| f.fully_automized && f.receptive),
            Mode::Axioms => self.flags.iter().all(|f| {
                (!f.fully_normalized || (f.fully_centralized && f.fully_automized))
                    && (!f.fully_centralized || f.receptive)
            }),
        }
    }

    pub fn flags_of(&self, m: u64) -> Option<Flags> {
        self.members.iter().position(|&x| x == m).map(|i| self.flags[i])
    }
}

/// Automorphisms of subgroup `i` as permutations of its member positions.
pub(crate) fn aut_perm(f: &FusionSystem, i: usize, a: &[u8]) -> Vec<usize> {
    a.iter().map(|&y| f.lattice().pos(i, y as usize)).collect()
}

/// A set of automorphisms of subgroup `i` closed into a table group whose
/// elements carry their position permutations.
pub(crate) fn aut_group(f: &FusionSystem, i: usize, auts: &[Vec<u8>]) -> Result<FiniteGroup> {
    let gens: Vec<Vec<usize>> = auts.iter().map(|a| aut_perm(f, i, a)).collect();
    FiniteGroup::from_perms("Aut", &gens, f.lattice().elems(i).len(), usize::MAX)
}

/// `O_p(Aut_F(P))` as a set of image vectors.
pub fn op_aut(f: &FusionSystem, i: usize) -> Result<BTreeSet<Vec<u8>>> {
    let a = aut_group(f, i, &f.auts(i))?;
    let perms = a.perms().expect("built from permutations");
    let elems = f.lattice().elems(i);
    Ok(a.p_core(f.p()).iter().map(|x| perms[x].iter().map(|&k| elems[k]).collect()).collect())
}

/// `Aut_S(P)`: conjugation maps by `N_S(P)`.
pub fn aut_s(f: &FusionSystem, i: usize) -> BTreeSet<Vec<u8>> {
    let g = f.group();
    let m = f.lattice().subs[i];
    bits64(g.normalizer_in(f.support(), m)).map(|s| conj_map(g, f.lattice(), i, s)).collect()
}

/// `Inn(P)`.
pub fn inn(f: &FusionSystem, i: usize) -> BTreeSet<Vec<u8>> {
    let m = f.lattice().subs[i];
    bits64(m).map(|s| conj_map(f.group(), f.lattice(), i, s)).collect()
}

pub fn n_s(f: &FusionSystem, m: u64) -> u64 {
    f.group().normalizer_in(f.support(), m)
}

pub fn c_s(f: &FusionSystem, m: u64) -> u64 {
    f.group().centralizer_in(f.support(), m)
}

/// `|Aut_S(P)| = |Aut_F(P)|_p`.
pub fn is_fully_automized(f: &FusionSystem, i: usize) -> bool {
    let m = f.lattice().subs[i];
    let aut_s = ord(n_s(f, m)) / ord(c_s(f, m));
    aut_s == p_part(f.auts(i).len(), f.p())
}

/// `N_φ` for an isomorphism `φ: Q → P` given on `q`.
pub fn n_phi(f: &FusionSystem, q: usize, phi: &[u8], p: usize, autsp: &HashSet<Vec<u8>>) -> u64 {
    let g = f.group();
    let lat = f.lattice();
    let qm = lat.subs[q];
    let phi_inv = inverse(lat, q, phi, p);
    let mut out = 0u64;
    for s in bits64(n_s(f, qm)) {
        // y ↦ ((yφ⁻¹)^s)φ on P
        let cs = conj_map(g, lat, q, s);
        let m = compose(lat, &compose(lat, &phi_inv, q, &cs), q, phi);
        if autsp.contains(&m) {
            out |= 1 << s;
        }
    }
    out
}

/// Every isomorphism onto subgroup `p` extends to its `N_φ`.
pub fn is_receptive(f: &FusionSystem, p: usize) -> bool {
    let lat = f.lattice();
    let pm = lat.subs[p];
    let autsp: HashSet<Vec<u8>> = aut_s(f, p).into_iter().collect();
    for qm in f.class_of(p) {
        let q = lat.id(qm).expect("class member");
        for phi in f.store()[q].iter().filter(|h| image_mask(h) == pm) {
            let nm = n_phi(f, q, phi, p, &autsp);
            if nm == qm {
                continue;
            }
            let n = lat.id(nm).expect("N_φ is a subgroup");
            if !f.store()[n].iter().any(|psi| restrict(lat, n, psi, q) == *phi) {
                return false;
            }
        }
    }
    true
}

fn class_record(f: &FusionSystem, members: Vec<u64>) -> ClassRecord {
    let nmax = members.iter().map(|&m| ord(n_s(f, m))).max().unwrap_or(0);
    let cmax = members.iter().map(|&m| ord(c_s(f, m))).max().unwrap_or(0);
    let representative = *members.iter().find(|&&m| ord(n_s(f, m)) == nmax).expect("non-empty class");
    let flags = members
        .iter()
        .map(|&m| {
            let i = f.lattice().id(m).expect("member");
            Flags {
                fully_normalized: ord(n_s(f, m)) == nmax,
                fully_centralized: ord(c_s(f, m)) == cmax,
                fully_automized: is_fully_automized(f, i),
                receptive: is_receptive(f, i),
            }
        })
        .collect();
    ClassRecord { representative, members, flags }
}

/// All F-conjugacy classes with flags, in lattice order of their least member.
pub fn classify(f: &FusionSystem) -> Vec<ClassRecord> {
    f.classes().into_par_iter().map(|c| class_record(f, c)).collect()
}

/// The record of the class containing `m`.
pub fn class_of_record(f: &FusionSystem, m: u64) -> Result<ClassRecord> {
    let i = f.id(m)?;
    Ok(class_record(f, f.class_of(i)))
}

pub fn respects_saturation(f: &FusionSystem, m: u64, mode: Mode) -> Result<bool> {
    Ok(class_of_record(f, m)?.respects_saturation(mode))
}

pub fn is_saturated(f: &FusionSystem) -> bool {
    f.classes().into_par_iter().all(|c| class_record(f, c).respects_saturation(Mode::Direct))
}

/// Fully normalized members of the class of `m`.
pub fn fully_normalized_in_class(f: &FusionSystem, m: u64) -> Result<Vec<u64>> {
    let c = f.class_of(f.id(m)?);
    let nmax = c.iter().map(|&q| ord(n_s(f, q))).max().unwrap_or(0);
    Ok(c.into_iter().filter(|&q| ord(n_s(f, q)) == nmax).collect())
}

/// `Aut_S(P) ∩ O_p(Aut_F(P)) = Inn(P)`.
pub(crate) fn out_condition(f: &FusionSystem, i: usize) -> Result<bool> {
    let op = op_aut(f, i)?;
    let meet: BTreeSet<Vec<u8>> = aut_s(f, i).intersection(&op).cloned().collect();
    Ok(meet == inn(f, i))
}
