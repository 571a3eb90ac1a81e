use crate::bits::{bits64, ElemSet, MAX_ORDER};
use crate::error::{Error, Result};
use crate::fus::{Lattice, NONE};
use crate::grp::{is_power_of, FiniteGroup, PGroup};
use std::sync::Arc;

pub const UNDEF: u32 = u32::MAX;
const BAD: u16 = u16::MAX;

/// A finite partial group whose domain is determined by an object set:
/// the binary products are stored densely, longer words are evaluated by
/// left folds and belong to the domain iff `S_w ∈ Δ`.
#[derive(Clone, Debug)]
pub struct Locality {
    name: String,
    p: usize,
    n: usize,
    unit: usize,
    inv: Vec<u32>,
    prod: Vec<u32>,
    /// Elements of `S` in their local order (unit first).
    s_elems: Vec<usize>,
    s_local: Vec<u8>,
    group: Arc<PGroup>,
    lat: Arc<Lattice>,
    delta: Vec<u64>,
    in_delta: Vec<bool>,
    /// `conj[f·|S| + s]`: local index of `s^f`, or `NONE` when undefined or outside `S`.
    conj: Vec<u8>,
    /// `step[y·n + f]`: lattice id of `(Y ∩ S_f)^f` for lattice id `y`.
    step: Vec<u16>,
    /// Indices in an ambient group, when the locality came from one.
    labels: Option<Vec<usize>>,
}

/// Raw data of a partial group with an object set, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawLocality {
    pub name: String,
    pub p: usize,
    pub n: usize,
    pub unit: usize,
    pub inv: Vec<usize>,
    pub pairs: Vec<(usize, usize, usize)>,
    pub s: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
}

impl Locality {
    /// Assemble from a product table. Only structural sanity is enforced here;
    /// the locality axioms are checked by [`super::validate`].
    pub fn from_table(
        name: &str,
        p: usize,
        inv: Vec<usize>,
        unit: usize,
        prod: Vec<u32>,
        s: &[usize],
        delta: &[Vec<usize>],
    ) -> Result<Locality> {
        let n = inv.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::Input(format!("element count {n} outside 1..={MAX_ORDER}")));
        }
        if prod.len() != n * n || unit >= n || inv.iter().any(|&x| x >= n) {
            return Err(Error::Input("table dimensions or indices out of range".into()));
        }
        if prod.iter().any(|&x| x != UNDEF && x as usize >= n) {
            return Err(Error::Input("product entry out of range".into()));
        }
        if !is_power_of(s.len(), p) || s.len() > 64 {
            return Err(Error::Input(format!("S has {} elements, not a power of {p} up to 64", s.len())));
        }
        let mut s_elems: Vec<usize> = s.to_vec();
        s_elems.sort_unstable();
        s_elems.dedup();
        if s_elems.len() != s.len() || s_elems.iter().any(|&x| x >= n) {
            return Err(Error::Input("S has repeated or out-of-range elements".into()));
        }
        let Some(u) = s_elems.iter().position(|&x| x == unit) else {
            return Err(Error::Input("S does not contain the unit".into()));
        };
        s_elems.remove(u);
        s_elems.insert(0, unit);
        let mut s_local = vec![NONE; n];
        for (i, &x) in s_elems.iter().enumerate() {
            s_local[x] = i as u8;
        }
        let k = s_elems.len();
        let mut table = vec![vec![0usize; k]; k];
        for (i, &a) in s_elems.iter().enumerate() {
            for (j, &b) in s_elems.iter().enumerate() {
                let ab = prod[a * n + b];
                if ab == UNDEF || s_local[ab as usize] == NONE {
                    return Err(Error::Input("S is not closed under the product".into()));
                }
                table[i][j] = s_local[ab as usize] as usize;
            }
        }
        let sg = FiniteGroup::from_table("S", &table, 64)?;
        let group = Arc::new(PGroup::from_group(&sg)?);
        let mut dmasks = Vec::with_capacity(delta.len());
        for d in delta {
            let mut m = 0u64;
            for &x in d {
                if x >= n || s_local[x] == NONE {
                    return Err(Error::Input(format!("object member {x} is not in S")));
                }
                m |= 1 << s_local[x];
            }
            dmasks.push(m);
        }
        let inv32 = inv.iter().map(|&x| x as u32).collect();
        Self::assemble(name, p, n, unit, inv32, prod, s_elems, s_local, group, dmasks, None)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: &str,
        p: usize,
        n: usize,
        unit: usize,
        inv: Vec<u32>,
        prod: Vec<u32>,
        s_elems: Vec<usize>,
        s_local: Vec<u8>,
        group: Arc<PGroup>,
        mut delta: Vec<u64>,
        labels: Option<Vec<usize>>,
    ) -> Result<Locality> {
        delta.sort_unstable();
        delta.dedup();
        let lat = Arc::new(Lattice::new(&group, group.full()));
        if let Some(&m) = delta.iter().find(|&&m| lat.id(m).is_none()) {
            return Err(Error::Input(format!("object {m:#x} is not a subgroup of S")));
        }
        let mut in_delta = vec![false; lat.len()];
        for &m in &delta {
            in_delta[lat.id(m).expect("checked")] = true;
        }
        let k = s_elems.len();
        let mut conj = vec![NONE; n * k];
        for f in 0..n {
            let fi = inv[f] as usize;
            for (i, &s) in s_elems.iter().enumerate() {
                let a = prod[fi * n + s];
                if a == UNDEF {
                    continue;
                }
                let b = prod[a as usize * n + f];
                if b != UNDEF {
                    conj[f * k + i] = s_local[b as usize];
                }
            }
        }
        let mut loc = Locality {
            name: name.to_string(),
            p,
            n,
            unit,
            inv,
            prod,
            s_elems,
            s_local,
            group,
            lat,
            delta,
            in_delta,
            conj,
            step: Vec::new(),
            labels,
        };
        loc.step = loc.step_table();
        Ok(loc)
    }

    fn step_table(&self) -> Vec<u16> {
        let mut step = vec![BAD; self.lat.len() * self.n];
        for y in 0..self.lat.len() {
            let ym = self.lat.subs[y];
            for f in 0..self.n {
                let img = self.chase_mask(ym & self.s_f(f), f);
                step[y * self.n + f] = self.lat.id(img).map_or(BAD, |i| i as u16);
            }
        }
        step
    }

    /// The locality `G|_Δ` of a group with Sylow subgroup `s`: elements `g`
    /// with `S_g ∈ Δ`, products defined iff `S_(f,g) ∈ Δ`. Objects are masks
    /// over the local indexing of `s` (ascending group indices).
    pub fn from_group(g: &FiniteGroup, s: &ElemSet, p: usize, delta: &[u64]) -> Result<Locality> {
        if !g.is_sylow(s, p) {
            return Err(Error::NotSylow(format!("{s:?} in {}", g.name())));
        }
        let (sg, back) = g.subgroup_as_group(s, "S")?;
        let group = PGroup::from_group(&sg)?;
        let k = back.len();
        let mut local = vec![NONE; g.order()];
        for (i, &x) in back.iter().enumerate() {
            local[x] = i as u8;
        }
        let lat = Lattice::new(&group, group.full());
        let dset: std::collections::HashSet<u64> = delta.iter().copied().collect();
        if delta.is_empty() || delta.iter().any(|&m| lat.id(m).is_none()) {
            return Err(Error::Input("object set must be a non-empty set of subgroups of S".into()));
        }
        // S_g for every g, and Δ-closure under overgroups and G-conjugation into S.
        let conj_of = |x: usize, t: usize| local[g.conj(back[x], t)];
        let s_g: Vec<u64> = (0..g.order())
            .map(|t| (0..k).filter(|&x| conj_of(x, t) != NONE).fold(0u64, |m, x| m | 1 << x))
            .collect();
        for &m in delta {
            if lat.subs.iter().any(|&o| o & m == m && !dset.contains(&o)) {
                return Err(Error::Precondition(format!("Δ is not overgroup-closed at {m:#x}")));
            }
            for t in 0..g.order() {
                if m & !s_g[t] == 0 {
                    let img = bits64(m).fold(0u64, |a, x| a | 1 << conj_of(x, t));
                    if !dset.contains(&img) {
                        return Err(Error::Precondition(format!("Δ is not closed under conjugation at {m:#x}")));
                    }
                }
            }
        }
        let elems: Vec<usize> = (0..g.order()).filter(|&t| dset.contains(&s_g[t])).collect();
        let n = elems.len();
        let mut index = vec![u32::MAX; g.order()];
        for (i, &t) in elems.iter().enumerate() {
            index[t] = i as u32;
        }
        let mut prod = vec![UNDEF; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let sab = bits64(s_g[a])
                    .filter(|&x| s_g[b] >> conj_of(x, a) & 1 == 1)
                    .fold(0u64, |m, x| m | 1 << x);
                if dset.contains(&sab) {
                    prod[i * n + j] = index[g.mul(a, b)];
                }
            }
        }
        let inv = elems.iter().map(|&t| index[g.inv(t)]).collect();
        let s_elems: Vec<usize> = back.iter().map(|&x| index[x] as usize).collect();
        let mut s_local = vec![NONE; n];
        for (i, &x) in s_elems.iter().enumerate() {
            s_local[x] = i as u8;
        }
        let name = format!("{}|Δ", g.name());
        Self::assemble(&name, p, n, 0, inv, prod, s_elems, s_local, Arc::new(group), delta.to_vec(), Some(elems))
    }

    /// Same partial group with a different element subset and object set;
    /// products are those of `self` restricted to `D_{Δ0}`. Returns the new
    /// locality and the old-to-new index map.
    pub(crate) fn sub_locality(&self, name: &str, keep: &ElemSet, delta0: &[u64]) -> Result<(Locality, Vec<usize>)> {
        let elems: Vec<usize> = keep.iter().collect();
        let m = elems.len();
        let mut index = vec![usize::MAX; self.n];
        for (i, &f) in elems.iter().enumerate() {
            index[f] = i;
        }
        if !keep.contains(self.unit) || self.s_elems.iter().any(|&s| index[s] == usize::MAX) {
            return Err(Error::Input("sub-locality must contain S".into()));
        }
        let dset: std::collections::HashSet<u64> = delta0.iter().copied().collect();
        let mut prod = vec![UNDEF; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let ab = self.prod[a * self.n + b];
                if ab != UNDEF && index[ab as usize] != usize::MAX && dset.contains(&self.s_word(&[a, b])) {
                    prod[i * m + j] = index[ab as usize] as u32;
                }
            }
        }
        let mut inv = Vec::with_capacity(m);
        for &f in &elems {
            let fi = index[self.inv[f] as usize];
            if fi == usize::MAX {
                return Err(Error::Input("element set is not closed under inversion".into()));
            }
            inv.push(fi as u32);
        }
        let s_elems: Vec<usize> = self.s_elems.iter().map(|&s| index[s]).collect();
        let mut s_local = vec![NONE; m];
        for (i, &x) in s_elems.iter().enumerate() {
            s_local[x] = i as u8;
        }
        let labels = self.labels.as_ref().map(|l| elems.iter().map(|&f| l[f]).collect());
        let loc = Self::assemble(
            name,
            self.p,
            m,
            index[self.unit],
            inv,
            prod,
            s_elems,
            s_local,
            self.group.clone(),
            delta0.to_vec(),
            labels,
        )?;
        Ok((loc, index))
    }

    /// The partial group on `keep ⊇ T` with the products of `self` on pairs in
    /// the domain, over `T` with objects `gamma` (masks over `S`, inside `t`).
    pub(crate) fn over_subgroup(&self, name: &str, keep: &ElemSet, t: u64, gamma: &[u64]) -> Result<(Locality, Vec<usize>)> {
        let t_elems: Vec<usize> = bits64(t).map(|x| self.s_elems[x]).collect();
        if t_elems.iter().any(|&x| !keep.contains(x)) {
            return Err(Error::Input("element set does not contain T".into()));
        }
        let elems: Vec<usize> = keep.iter().collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &f) in elems.iter().enumerate() {
            index[f] = i;
        }
        let m = elems.len();
        let mut prod = vec![UNDEF; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let ab = self.prod[a * self.n + b];
                if ab != UNDEF && index[ab as usize] != usize::MAX && self.in_domain(&[a, b]) {
                    prod[i * m + j] = index[ab as usize] as u32;
                }
            }
        }
        let mut inv = Vec::with_capacity(m);
        for &f in &elems {
            let fi = index[self.inv[f] as usize];
            if fi == usize::MAX {
                return Err(Error::Input("element set is not closed under inversion".into()));
            }
            inv.push(fi as u32);
        }
        let t_new: Vec<usize> = t_elems.iter().map(|&x| index[x]).collect();
        let delta: Vec<Vec<usize>> =
            gamma.iter().map(|&g| bits64(g).map(|x| index[self.s_elems[x]]).collect()).collect();
        let mut loc = Locality::from_table(name, self.p, inv.iter().map(|&x| x as usize).collect(), index[self.unit], prod, &t_new, &delta)?;
        loc.labels = self.labels.as_ref().map(|l| elems.iter().map(|&f| l[f]).collect());
        Ok((loc, index))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    #[inline]
    pub fn inv(&self, f: usize) -> usize {
        self.inv[f] as usize
    }

    /// The binary product, if `(f, g)` is in the stored domain.
    #[inline]
    pub fn mul(&self, f: usize, g: usize) -> Option<usize> {
        let v = self.prod[f * self.n + g];
        (v != UNDEF).then_some(v as usize)
    }

    pub fn raw_product(&self) -> &[u32] {
        &self.prod
    }

    pub fn group(&self) -> &Arc<PGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lat
    }

    pub fn delta(&self) -> &[u64] {
        &self.delta
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn s_elems(&self) -> &[usize] {
        &self.s_elems
    }

    /// `S` as a set of elements.
    pub fn s_set(&self) -> ElemSet {
        ElemSet::from_iter(self.s_elems.iter().copied())
    }

    /// Local index of an element of `S`.
    pub fn s_index(&self, f: usize) -> Option<usize> {
        let v = self.s_local[f];
        (v != NONE).then_some(v as usize)
    }

    /// Elements of a mask over `S`.
    pub fn mask_elems(&self, m: u64) -> ElemSet {
        ElemSet::from_iter(bits64(m).map(|x| self.s_elems[x]))
    }

    /// Mask of the elements of `x` lying in `S`.
    pub fn mask_of(&self, x: &ElemSet) -> u64 {
        x.iter().filter_map(|f| self.s_index(f)).fold(0u64, |m, i| m | 1 << i)
    }

    pub fn is_object(&self, m: u64) -> bool {
        self.lat.id(m).is_some_and(|i| self.in_delta[i])
    }

    /// `s^f` for `s ∈ S` (local index), when it lies in `S`.
    #[inline]
    pub fn conj_s(&self, s: usize, f: usize) -> Option<usize> {
        let v = self.conj[f * self.s_elems.len() + s];
        (v != NONE).then_some(v as usize)
    }

    /// `S_f`.
    pub fn s_f(&self, f: usize) -> u64 {
        let k = self.s_elems.len();
        (0..k).filter(|&s| self.conj[f * k + s] != NONE).fold(0u64, |m, s| m | 1 << s)
    }

    /// Image of `m ⊆ S_f` under conjugation by `f`.
    pub fn chase_mask(&self, m: u64, f: usize) -> u64 {
        bits64(m).fold(0u64, |a, s| a | 1 << self.conj_s(s, f).expect("inside S_f"))
    }

    /// `S_w` by chasing every element of `S` through the word.
    pub fn s_word(&self, w: &[usize]) -> u64 {
        let mut out = 0u64;
        'elems: for s in 0..self.s_elems.len() {
            let mut x = s;
            for &f in w {
                match self.conj_s(x, f) {
                    Some(y) => x = y,
                    None => continue 'elems,
                }
            }
            out |= 1 << s;
        }
        out
    }

    /// `w ∈ D`, i.e. `S_w ∈ Δ`.
    pub fn in_domain(&self, w: &[usize]) -> bool {
        self.is_object(self.s_word(w))
    }

    /// Lattice id of the image `S_w^{Π(w)}`, tracked through the step table;
    /// `None` once the image stops being a subgroup.
    #[inline]
    pub(crate) fn step(&self, y: u16, f: usize) -> u16 {
        if y == BAD {
            BAD
        } else {
            self.step[y as usize * self.n + f]
        }
    }

    #[inline]
    pub(crate) fn full_id(&self) -> u16 {
        (self.lat.len() - 1) as u16
    }

    #[inline]
    pub(crate) fn id_in_delta(&self, y: u16) -> bool {
        y != BAD && self.in_delta[y as usize]
    }

    /// Image of `S_w` after conjugation through `w`, as a lattice id.
    pub(crate) fn image_id(&self, w: &[usize]) -> u16 {
        w.iter().fold(self.full_id(), |y, &f| self.step(y, f))
    }

    /// Left fold of binary products.
    pub fn fold(&self, w: &[usize]) -> Option<usize> {
        w.iter().try_fold(self.unit, |acc, &f| self.mul(acc, f))
    }

    /// `Π(w)` for `w ∈ D`.
    pub fn eval(&self, w: &[usize]) -> Result<usize> {
        if !self.in_domain(w) {
            return Err(Error::Input(format!("word {w:?} is not in the domain")));
        }
        self.fold(w).ok_or_else(|| Error::Invariant(format!("fold of {w:?} is undefined although S_w ∈ Δ")))
    }

    /// `x^f = Π(f⁻¹, x, f)` when `(f⁻¹, x, f) ∈ D`.
    pub fn conjugate(&self, x: usize, f: usize) -> Result<usize> {
        let w = [self.inv(f), x, f];
        if !self.in_domain(&w) {
            return Err(Error::Input(format!("conjugate of {x} by {f} is undefined")));
        }
        self.eval(&w)
    }

    /// `x^f` if defined, via the image-tracking table.
    #[inline]
    pub(crate) fn try_conj(&self, x: usize, f: usize) -> Option<usize> {
        let fi = self.inv(f);
        let y = self.step(self.step(self.step(self.full_id(), fi), x), f);
        if !self.id_in_delta(y) {
            return None;
        }
        self.mul(fi, x).and_then(|a| self.mul(a, f))
    }

    /// The subset `x` as a group, if all its pairs are defined and it is closed.
    /// Returns the group and its local-to-locality map.
    pub fn subset_group(&self, x: &ElemSet, name: &str) -> Result<(FiniteGroup, Vec<usize>)> {
        let members: Vec<usize> = x.iter().collect();
        let mut local = vec![u16::MAX; self.n];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i as u16;
        }
        let u = local[self.unit];
        if u == u16::MAX {
            return Err(Error::NotSubgroup("subset misses the unit".into()));
        }
        // Reorder so that the unit is local 0.
        let mut order = members.clone();
        order.retain(|&m| m != self.unit);
        order.insert(0, self.unit);
        for (i, &m) in order.iter().enumerate() {
            local[m] = i as u16;
        }
        let k = order.len();
        let mut mult = vec![0u16; k * k];
        let mut inv = vec![0u16; k];
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                let ab = self.mul(a, b).filter(|&ab| local[ab] != u16::MAX && self.in_domain(&[a, b]));
                match ab {
                    Some(ab) => mult[i * k + j] = local[ab],
                    None => return Err(Error::NotSubgroup(format!("product ({a}, {b}) leaves the subset"))),
                }
            }
            let ai = local[self.inv(a)];
            if ai == u16::MAX {
                return Err(Error::NotSubgroup("subset not closed under inversion".into()));
            }
            inv[i] = ai;
        }
        Ok((FiniteGroup::from_parts(name, k, mult, inv), order))
    }

    /// Same elements, inversion, products, `S` and objects.
    pub fn same_structure(&self, o: &Locality) -> bool {
        self.n == o.n
            && self.unit == o.unit
            && self.inv == o.inv
            && self.prod == o.prod
            && self.s_elems == o.s_elems
            && self.delta == o.delta
    }
}
