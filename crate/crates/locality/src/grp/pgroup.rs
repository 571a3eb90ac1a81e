use super::FiniteGroup;
use crate::bits::bits64;
use crate::error::{Error, Result};
use std::collections::HashSet;

/// A group of order at most 64 with subsets packed into `u64` masks.
///
/// Used for the Sylow subgroup over which fusion systems and localities
/// live, where subgroup masks are hashed and compared constantly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGroup {
    n: usize,
    mult: Vec<u8>,
    inv: Vec<u8>,
}

impl PGroup {
    pub fn from_group(g: &FiniteGroup) -> Result<PGroup> {
        let n = g.order();
        if n > 64 {
            return Err(Error::Input(format!("group of order {n} exceeds the 64-element limit for Sylow subgroups")));
        }
        let mut mult = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = g.mul(a, b) as u8;
            }
        }
        let inv = (0..n).map(|a| g.inv(a) as u8).collect();
        Ok(PGroup { n, mult, inv })
    }

    pub fn to_group(&self, name: &str) -> FiniteGroup {
        FiniteGroup::from_parts(
            name,
            self.n,
            self.mult.iter().map(|&x| x as u16).collect(),
            self.inv.iter().map(|&x| x as u16).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x^s = s⁻¹ x s`.
    #[inline]
    pub fn conj(&self, x: usize, s: usize) -> usize {
        self.mul(self.mul(self.inv(s), x), s)
    }

    pub fn conj_mask(&self, m: u64, s: usize) -> u64 {
        bits64(m).fold(0, |acc, x| acc | 1u64 << self.conj(x, s))
    }

    pub fn generate(&self, m: u64) -> u64 {
        let gens: Vec<usize> = bits64(m).filter(|&g| g != 0).collect();
        let mut set = 1u64;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set >> y & 1 == 0 {
                    set |= 1 << y;
                    stack.push(y);
                }
            }
        }
        set
    }

    pub fn is_subgroup(&self, m: u64) -> bool {
        m & 1 == 1 && m & !self.full() == 0 && bits64(m).all(|a| bits64(m).all(|b| m >> self.mul(a, b) & 1 == 1))
    }

    pub fn normalizer_in(&self, k: u64, h: u64) -> u64 {
        bits64(k).filter(|&s| self.conj_mask(h, s) == h).fold(0, |acc, s| acc | 1 << s)
    }

    pub fn normalizer(&self, h: u64) -> u64 {
        self.normalizer_in(self.full(), h)
    }

    pub fn centralizer_in(&self, k: u64, h: u64) -> u64 {
        bits64(k)
            .filter(|&s| bits64(h).all(|x| self.mul(x, s) == self.mul(s, x)))
            .fold(0, |acc, s| acc | 1 << s)
    }

    pub fn centralizer(&self, h: u64) -> u64 {
        self.centralizer_in(self.full(), h)
    }

    pub fn center_of(&self, h: u64) -> u64 {
        self.centralizer_in(h, h)
    }

    pub fn product(&self, a: u64, b: u64) -> u64 {
        let mut r = 0u64;
        for x in bits64(a) {
            for y in bits64(b) {
                r |= 1 << self.mul(x, y);
            }
        }
        r
    }

    /// Subgroup generated by two subgroups.
    pub fn join(&self, a: u64, b: u64) -> u64 {
        self.generate(a | b)
    }

    pub fn is_normal_in(&self, k: u64, h: u64) -> bool {
        h & !k == 0 && bits64(k).all(|s| self.conj_mask(h, s) == h)
    }

    /// All subgroups of `k`, sorted by `(order, mask)`.
    pub fn subgroups_in(&self, k: u64) -> Vec<u64> {
        let mut cyc = Vec::new();
        let mut seen_c = HashSet::new();
        for x in bits64(k) {
            if seen_c.insert(self.generate(1 << x)) {
                cyc.push(x);
            }
        }
        let mut seen: HashSet<u64> = HashSet::from([1u64]);
        let mut stack = vec![1u64];
        while let Some(h) = stack.pop() {
            for &x in &cyc {
                if h >> x & 1 == 1 {
                    continue;
                }
                let j = self.generate(h | 1 << x);
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        let mut out: Vec<u64> = seen.into_iter().collect();
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }
}

/// Order of a mask-encoded subset.
#[inline]
pub fn ord(m: u64) -> usize {
    m.count_ones() as usize
}
