use crate::bits::bits64;
use crate::grp::PGroup;
use std::collections::HashMap;

/// The subgroups of a fixed subgroup `support` of a [`PGroup`], with
/// per-subgroup member lists and position lookups.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub support: u64,
    pub subs: Vec<u64>,
    index: HashMap<u64, usize>,
    elems: Vec<Vec<u8>>,
    pos: Vec<Vec<u8>>,
}

pub const NONE: u8 = u8::MAX;

impl Lattice {
    pub fn new(g: &PGroup, support: u64) -> Lattice {
        Self::from_subs(g.order(), support, g.subgroups_in(support))
    }

    fn from_subs(n: usize, support: u64, subs: Vec<u64>) -> Lattice {
        let index = subs.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let elems: Vec<Vec<u8>> = subs.iter().map(|&m| bits64(m).map(|x| x as u8).collect()).collect();
        let pos = elems
            .iter()
            .map(|e| {
                let mut p = vec![NONE; n];
                for (i, &x) in e.iter().enumerate() {
                    p[x as usize] = i as u8;
                }
                p
            })
            .collect();
        Lattice { support, subs, index, elems, pos }
    }

    /// Sub-lattice of subgroups contained in `k` (itself a member).
    pub fn restrict(&self, n: usize, k: u64) -> Lattice {
        let subs = self.subs.iter().copied().filter(|&m| m & !k == 0).collect();
        Self::from_subs(n, k, subs)
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn id(&self, m: u64) -> Option<usize> {
        self.index.get(&m).copied()
    }

    pub fn elems(&self, i: usize) -> &[u8] {
        &self.elems[i]
    }

    /// Position of element `x` in the member list of subgroup `i`.
    #[inline]
    pub fn pos(&self, i: usize, x: usize) -> usize {
        self.pos[i][x] as usize
    }

    #[inline]
    pub fn contains(&self, i: usize, x: usize) -> bool {
        self.pos[i][x] != NONE
    }
}
