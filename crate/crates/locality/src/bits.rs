//! Fixed-width element sets for groups of order at most [`MAX_ORDER`].

use std::cmp::Ordering;
use std::fmt;

/// Hard upper bound on the number of elements an [`ElemSet`] can hold.
pub const MAX_ORDER: usize = 512;
const WORDS: usize = MAX_ORDER / 64;

/// A subset of `0..MAX_ORDER`, ordered as the integer it encodes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElemSet([u64; WORDS]);

impl ElemSet {
    pub const fn empty() -> Self {
        ElemSet([0; WORDS])
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty();
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::empty();
        s.insert(i);
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        (self.0[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, o: &Self) -> Self {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a |= b;
        }
        r
    }

    pub fn intersection(&self, o: &Self) -> Self {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a &= b;
        }
        r
    }

    pub fn difference(&self, o: &Self) -> Self {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a &= !b;
        }
        r
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { set: self, word: 0, cur: self.0[0] }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Low 64 bits; callers guarantee nothing lives above index 63.
    pub fn low_word(&self) -> u64 {
        debug_assert!(self.0[1..].iter().all(|&w| w == 0));
        self.0[0]
    }

    pub fn from_low_word(w: u64) -> Self {
        let mut s = Self::empty();
        s.0[0] = w;
        s
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..WORDS).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = Self::empty();
        for i in it {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    set: &'a ElemSet,
    word: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.word * 64 + b);
            }
            self.word += 1;
            if self.word >= WORDS {
                return None;
            }
            self.cur = self.set.0[self.word];
        }
    }
}

/// Iterate the set bits of a 64-bit mask in increasing order.
pub fn bits64(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iterate_and_order() {
        let a = ElemSet::from_iter([0, 3, 70, 511]);
        assert_eq!(a.to_vec(), vec![0, 3, 70, 511]);
        assert_eq!(a.len(), 4);
        let b = ElemSet::from_iter([0, 3, 70]);
        assert!(b.is_subset(&a));
        assert!(b < a);
        assert_eq!(a.difference(&b).to_vec(), vec![511]);
    }

    #[test]
    fn bits64_lists_positions() {
        assert_eq!(bits64(0b1011).collect::<Vec<_>>(), vec![0, 1, 3]);
    }
}
