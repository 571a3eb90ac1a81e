use super::{is_power_of, p_part, FiniteGroup};
use crate::bits::ElemSet;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::HashSet;

/// A subgroup of a table group, ordered by `(order, mask)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub members: ElemSet,
    pub order: usize,
}

impl Subgroup {
    pub fn new(members: ElemSet) -> Self {
        Subgroup { order: members.len(), members }
    }
}

impl Ord for Subgroup {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.order, self.members).cmp(&(o.order, o.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl FiniteGroup {
    pub fn subgroup(&self, members: ElemSet) -> Result<Subgroup> {
        if self.is_subgroup(&members) {
            Ok(Subgroup::new(members))
        } else {
            Err(Error::NotSubgroup(format!("{members:?}")))
        }
    }

    /// All subgroups, sorted by `(order, mask)`.
    ///
    /// Every subgroup is a join of cyclic subgroups, so the lattice is
    /// reached from `{1}` by repeatedly adjoining one cyclic generator.
    pub fn enumerate_subgroups(&self, cap: usize) -> Result<Vec<Subgroup>> {
        if self.order() > cap {
            return Err(Error::OrderCap { cap });
        }
        self.enumerate_subgroups_in(&self.all(), |_| true)
    }

    /// Subgroups of the subgroup `k` satisfying a predicate that is inherited
    /// by subgroups (e.g. "is a p-group" fails upward, so it prunes the search).
    pub fn enumerate_subgroups_in(&self, k: &ElemSet, keep: impl Fn(&ElemSet) -> bool) -> Result<Vec<Subgroup>> {
        let mut cyclic_gens = Vec::new();
        let mut cyclic_seen = HashSet::new();
        for x in k.iter() {
            let c = self.generate(&ElemSet::singleton(x));
            if cyclic_seen.insert(c) {
                cyclic_gens.push(x);
            }
        }
        let triv = self.trivial();
        let mut seen: HashSet<ElemSet> = HashSet::from([triv]);
        let mut stack = vec![triv];
        while let Some(h) = stack.pop() {
            for &x in &cyclic_gens {
                if h.contains(x) {
                    continue;
                }
                let j = self.join_elem(&h, x);
                if keep(&j) && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        let mut out: Vec<Subgroup> = seen.into_iter().map(Subgroup::new).collect();
        out.sort();
        Ok(out)
    }

    /// One Sylow p-subgroup, grown through normalizers.
    pub fn one_sylow(&self, p: usize) -> ElemSet {
        let target = p_part(self.order(), p);
        let mut s = self.trivial();
        while s.len() < target {
            let n = self.normalizer(&s);
            let x = n
                .iter()
                .find(|&x| {
                    if s.contains(x) {
                        return false;
                    }
                    let mut y = 0;
                    for _ in 0..p {
                        y = self.mul(y, x);
                    }
                    s.contains(y)
                })
                .expect("Sylow's theorem supplies an element of order p in N(P)/P");
            s = self.join_elem(&s, x);
        }
        s
    }

    /// All Sylow p-subgroups, sorted by mask.
    pub fn sylow(&self, p: usize) -> Vec<Subgroup> {
        let s = self.one_sylow(p);
        self.conjugates_in(&self.all(), &s).into_iter().map(Subgroup::new).collect()
    }

    pub fn is_sylow(&self, s: &ElemSet, p: usize) -> bool {
        self.is_subgroup(s) && s.len() == p_part(self.order(), p)
    }

    /// `O_p(G)`, the intersection of all Sylow p-subgroups.
    pub fn p_core(&self, p: usize) -> ElemSet {
        let mut r = self.all();
        for s in self.sylow(p) {
            r = r.intersection(&s.members);
        }
        r
    }

    /// `O_{p'}(G)`: the join of all normal subgroups of order prime to p.
    pub fn p_prime_core(&self, p: usize) -> ElemSet {
        let mut r = self.trivial();
        for x in 0..self.order() {
            if r.contains(x) || self.elem_order(x) % p == 0 {
                continue;
            }
            let c = self.normal_closure(&ElemSet::singleton(x));
            if c.len() % p != 0 {
                r = self.generate(&r.union(&c));
            }
        }
        r
    }

    /// Subnormality by normal-closure descent: `H` is subnormal iff the chain
    /// `K₀ = G`, `Kᵢ₊₁ = ⟨H^{Kᵢ}⟩` stabilises at `H`.
    pub fn is_subnormal(&self, h: &ElemSet) -> bool {
        let mut k = self.all();
        loop {
            let next = self.normal_closure_in(&k, h);
            if next == k {
                return k == *h;
            }
            k = next;
        }
    }

    pub fn is_p_subgroup(&self, h: &ElemSet, p: usize) -> bool {
        is_power_of(h.len(), p) && self.is_subgroup(h)
    }
}
