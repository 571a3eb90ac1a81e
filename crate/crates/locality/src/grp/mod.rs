//! Finite groups given by multiplication tables, and their subgroup lattices.
//!
//! Elements are indices `0..order`; index 0 is always the identity.
//! Permutations compose left to right: `x * y` applies `x` first, and
//! conjugation is `x^g = g⁻¹ x g`.

mod charp;
mod iso;
mod lattice;
mod pgroup;

pub use charp::{char_p_equiv_group, is_characteristic_p};
pub use iso::{find_isomorphism, is_isomorphic};
pub use lattice::Subgroup;
pub use pgroup::{ord, PGroup};

use crate::bits::{ElemSet, MAX_ORDER};
use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    n: usize,
    mult: Vec<u16>,
    inv: Vec<u16>,
    /// Generators the table was closed from, if built from permutations.
    perm_gens: Option<Vec<Vec<usize>>>,
    /// Permutation of every element, when known.
    perms: Option<Vec<Vec<usize>>>,
}

/// A homomorphism from a subgroup of one group into another group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub domain: ElemSet,
    /// Image of each domain member, in increasing member order.
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.domain.iter().position(|d| d == x).map(|i| self.images[i])
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = ElemSet::empty();
        for &y in &self.images {
            if seen.contains(y) {
                return false;
            }
            seen.insert(y);
        }
        true
    }

    /// Checks `(xy)φ = (xφ)(yφ)` on all pairs of the domain.
    pub fn is_homomorphism(&self, src: &FiniteGroup, dst: &FiniteGroup) -> bool {
        let dom: Vec<usize> = self.domain.iter().collect();
        if dom.len() != self.images.len() || !src.is_subgroup(&self.domain) {
            return false;
        }
        let pos: HashMap<usize, usize> = dom.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        for (i, &x) in dom.iter().enumerate() {
            for (j, &y) in dom.iter().enumerate() {
                let xy = pos[&src.mul(x, y)];
                if self.images[xy] != dst.mul(self.images[i], self.images[j]) {
                    return false;
                }
            }
        }
        true
    }
}

impl FiniteGroup {
    /// Build from a full multiplication table with identity at index 0.
    pub fn from_table(name: &str, table: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::BadTable("empty table".into()));
        }
        if n > cap.min(MAX_ORDER) {
            return Err(Error::OrderCap { cap: cap.min(MAX_ORDER) });
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadTable(format!("row {i} has length {}, expected {n}", row.len())));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::BadTable(format!("entry {v} in row {i} out of range")));
                }
                mult.push(v as u16);
            }
        }
        for x in 0..n {
            if mult[x] as usize != x || mult[x * n] as usize != x {
                return Err(Error::BadTable("index 0 is not a two-sided identity".into()));
            }
        }
        let mut inv = vec![0u16; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| mult[x * n + y] == 0 && mult[y * n + x] == 0)
                .ok_or(Error::NonInvertible(x))?;
            inv[x] = y as u16;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a * n + b] as usize;
                for c in 0..n {
                    let bc = mult[b * n + c] as usize;
                    if mult[ab * n + c] != mult[a * n + bc] {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.to_string(), n, mult, inv, perm_gens: None, perms: None })
    }

    /// Close a set of permutations of `0..degree` under composition.
    pub fn from_perms(name: &str, gens: &[Vec<usize>], degree: usize, cap: usize) -> Result<FiniteGroup> {
        let cap = cap.min(MAX_ORDER);
        for (i, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::BadTable(format!("generator {i} has length {}, expected {degree}", g.len())));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(Error::BadTable(format!("generator {i} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let next: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&next) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCap { cap });
                    }
                    index.insert(next.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(next);
                }
            }
        }
        let n = elems.len();
        let mut mult = vec![0u16; n * n];
        let mut inv = vec![0u16; n];
        for a in 0..n {
            for b in 0..n {
                let ab: Vec<usize> = elems[a].iter().map(|&x| elems[b][x]).collect();
                mult[a * n + b] = index[&ab] as u16;
            }
            let mut ia = vec![0; degree];
            for (x, &y) in elems[a].iter().enumerate() {
                ia[y] = x;
            }
            inv[a] = index[&ia] as u16;
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            n,
            mult,
            inv,
            perm_gens: Some(gens.to_vec()),
            perms: Some(elems),
        })
    }

    /// The group formed by a subgroup, reindexed `0..|H|` in increasing order
    /// of the original indices. Returns the group and the local-to-parent map.
    pub fn subgroup_as_group(&self, h: &ElemSet, name: &str) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(h) {
            return Err(Error::NotSubgroup(format!("{:?}", h)));
        }
        let members: Vec<usize> = h.iter().collect();
        let mut local = vec![u16::MAX; self.n];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i as u16;
        }
        let k = members.len();
        let mut mult = vec![0u16; k * k];
        let mut inv = vec![0u16; k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                mult[i * k + j] = local[self.mul(a, b)];
            }
            inv[i] = local[self.inv(a)];
        }
        let perms = self.perms.as_ref().map(|ps| members.iter().map(|&m| ps[m].clone()).collect());
        Ok((
            FiniteGroup { name: name.to_string(), n: k, mult, inv, perm_gens: None, perms },
            members,
        ))
    }

    /// Build directly from trusted parts (used for subgroups of partial groups).
    pub(crate) fn from_parts(name: &str, n: usize, mult: Vec<u16>, inv: Vec<u16>) -> FiniteGroup {
        FiniteGroup { name: name.to_string(), n, mult, inv, perm_gens: None, perms: None }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn perm_gens(&self) -> Option<&[Vec<usize>]> {
        self.perm_gens.as_deref()
    }

    pub fn perms(&self) -> Option<&[Vec<usize>]> {
        self.perms.as_deref()
    }

    /// Index of the element acting as the given permutation, if any.
    pub fn find_perm(&self, perm: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|p| p == perm)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x^g = g⁻¹ x g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn trivial(&self) -> ElemSet {
        ElemSet::singleton(0)
    }

    pub fn elem_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by a set of elements.
    pub fn generate(&self, gens: &ElemSet) -> ElemSet {
        let gl: Vec<usize> = gens.iter().filter(|&g| g != 0).collect();
        let mut set = ElemSet::singleton(0);
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in &gl {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    stack.push(y);
                }
            }
        }
        set
    }

    /// Subgroup generated by `h` and `x`, given that `h` is a subgroup.
    pub fn join_elem(&self, h: &ElemSet, x: usize) -> ElemSet {
        if h.contains(x) {
            return *h;
        }
        self.generate(&h.union(&ElemSet::singleton(x)))
    }

    pub fn is_subgroup(&self, h: &ElemSet) -> bool {
        if !h.contains(0) {
            return false;
        }
        if h.iter().any(|x| x >= self.n) {
            return false;
        }
        let m: Vec<usize> = h.iter().collect();
        m.iter().all(|&a| m.iter().all(|&b| h.contains(self.mul(a, b))))
    }

    pub fn conj_set(&self, h: &ElemSet, g: usize) -> ElemSet {
        ElemSet::from_iter(h.iter().map(|x| self.conj(x, g)))
    }

    /// Elementwise product set `AB`.
    pub fn product_set(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut r = ElemSet::empty();
        for x in a.iter() {
            for y in b.iter() {
                r.insert(self.mul(x, y));
            }
        }
        r
    }

    /// `N_K(H)` for a subset `k` of the group.
    pub fn normalizer_in(&self, k: &ElemSet, h: &ElemSet) -> ElemSet {
        ElemSet::from_iter(k.iter().filter(|&g| self.conj_set(h, g) == *h))
    }

    pub fn normalizer(&self, h: &ElemSet) -> ElemSet {
        self.normalizer_in(&self.all(), h)
    }

    /// `C_K(H)` for a subset `k` of the group.
    pub fn centralizer_in(&self, k: &ElemSet, h: &ElemSet) -> ElemSet {
        let hm: Vec<usize> = h.iter().collect();
        ElemSet::from_iter(k.iter().filter(|&g| hm.iter().all(|&x| self.mul(x, g) == self.mul(g, x))))
    }

    pub fn centralizer(&self, h: &ElemSet) -> ElemSet {
        self.centralizer_in(&self.all(), h)
    }

    pub fn center(&self) -> ElemSet {
        self.centralizer(&self.all())
    }

    pub fn is_normal_in(&self, k: &ElemSet, h: &ElemSet) -> bool {
        h.is_subset(k) && k.iter().all(|g| self.conj_set(h, g) == *h)
    }

    /// Smallest normal subgroup of the subgroup `k` containing `x`.
    pub fn normal_closure_in(&self, k: &ElemSet, x: &ElemSet) -> ElemSet {
        let mut gens = ElemSet::empty();
        for g in k.iter() {
            gens = gens.union(&self.conj_set(x, g));
        }
        self.generate(&gens)
    }

    pub fn normal_closure(&self, x: &ElemSet) -> ElemSet {
        self.normal_closure_in(&self.all(), x)
    }

    /// Conjugates `H^g` for `g` in `k`, sorted and deduplicated.
    pub fn conjugates_in(&self, k: &ElemSet, h: &ElemSet) -> Vec<ElemSet> {
        let mut v: Vec<ElemSet> = k.iter().map(|g| self.conj_set(h, g)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Commutator `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// `G/N` for a normal subgroup, cosets ordered by least member.
    pub fn quotient(&self, n: &ElemSet, name: &str) -> Result<FiniteGroup> {
        if !self.is_subgroup(n) || !self.is_normal_in(&self.all(), n) {
            return Err(Error::NotNormal(format!("{n:?} in {}", self.name)));
        }
        let mut block = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for x in 0..self.n {
            if block[x] == usize::MAX {
                for m in n.iter() {
                    block[self.mul(m, x)] = reps.len();
                }
                reps.push(x);
            }
        }
        let table: Vec<Vec<usize>> =
            reps.iter().map(|&a| reps.iter().map(|&b| block[self.mul(a, b)]).collect()).collect();
        FiniteGroup::from_table(name, &table, MAX_ORDER)
    }

    pub fn is_p_group(&self, h: &ElemSet, p: usize) -> bool {
        is_power_of(h.len(), p)
    }
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn is_power_of(mut n: usize, p: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: usize, p: usize) -> usize {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

/// Convenience constructors used by the catalog and the tests.
pub mod named {
    use super::FiniteGroup;
    use crate::bits::MAX_ORDER;

    /// Permutation of `0..degree` from 1-based cycles.
    pub fn perm(degree: usize, cycles: &[&[usize]]) -> Vec<usize> {
        let mut p: Vec<usize> = (0..degree).collect();
        for c in cycles {
            for i in 0..c.len() {
                p[c[i] - 1] = c[(i + 1) % c.len()] - 1;
            }
        }
        p
    }

    fn build(name: &str, degree: usize, gens: &[&[&[usize]]]) -> FiniteGroup {
        let gens: Vec<Vec<usize>> = gens.iter().map(|c| perm(degree, c)).collect();
        FiniteGroup::from_perms(name, &gens, degree, MAX_ORDER).expect("catalog group closes")
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        let cyc: Vec<usize> = (1..=n).collect();
        build(&format!("S{n}"), n, &[&[&[1, 2]], &[&cyc]])
    }

    pub fn alternating4() -> FiniteGroup {
        build("A4", 4, &[&[&[1, 2, 3]], &[&[1, 2], &[3, 4]]])
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let cyc: Vec<usize> = (1..=n).collect();
        build(&format!("C{n}"), n, &[&[&cyc]])
    }

    pub fn dihedral8() -> FiniteGroup {
        build("D8", 4, &[&[&[1, 2, 3, 4]], &[&[1, 3]]])
    }

    pub fn klein4() -> FiniteGroup {
        build("C2xC2", 4, &[&[&[1, 2], &[3, 4]], &[&[1, 3], &[2, 4]]])
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn trivial_table_is_order_one() {
        let g = FiniteGroup::from_table("1", &[vec![0]], MAX_ORDER).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn s4_from_generators_has_order_24() {
        assert_eq!(symmetric(4).order(), 24);
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // A loop of order 5 that is not a group.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("L5", &t, MAX_ORDER), Err(Error::NonAssociative(..))));
    }

    #[test]
    fn missing_inverse_is_rejected() {
        let t = vec![vec![0, 1], vec![1, 1]];
        assert_eq!(FiniteGroup::from_table("m", &t, MAX_ORDER), Err(Error::NonInvertible(1)));
    }

    #[test]
    fn closure_respects_order_cap() {
        let g = symmetric(5);
        let gens = g.perm_gens().unwrap().to_vec();
        assert_eq!(FiniteGroup::from_perms("S5", &gens, 5, 100), Err(Error::OrderCap { cap: 100 }));
    }

    #[test]
    fn table_round_trip() {
        let g = symmetric(3);
        let h = FiniteGroup::from_table("S3", &g.table(), MAX_ORDER).unwrap();
        assert_eq!(h.table(), g.table());
    }

    #[test]
    fn normalizer_of_four_cycle_in_s4() {
        let g = symmetric(4);
        let c = g.find_perm(&perm(4, &[&[1, 2, 3, 4]])).unwrap();
        let h = g.generate(&ElemSet::singleton(c));
        assert_eq!(g.normalizer(&h).len(), 8);
        assert_eq!(g.normalizer(&g.all()), g.all());
        let v = klein4();
        assert_eq!(v.centralizer(&v.all()), v.all());
    }

    #[test]
    fn hom_checks() {
        let g = cyclic(4);
        let dom = g.all();
        let images: Vec<usize> = dom.iter().map(|x| g.mul(x, x)).collect();
        let h = GroupHom { domain: dom, images };
        assert!(h.is_homomorphism(&g, &g));
        assert!(!h.is_injective());
    }
}
