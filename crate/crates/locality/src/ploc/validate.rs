use super::locality::Locality;
use crate::bits::bits64;
use crate::fus::NONE;
use crate::grp::{ord, p_part};
use crate::report::{Report, Timer};
use rayon::prelude::*;
use serde_json::{json, Value};

const MAX_DEPTH: usize = 16;

/// A word-level failure: clause name and witness word.
type Failure = (&'static str, Vec<usize>);

struct Walker<'a> {
    l: &'a Locality,
    depth: usize,
    k: usize,
}

impl Walker<'_> {
    /// Checks on a word `w ∈ D` of length at least two whose proper prefixes passed.
    /// Membership of derived words is decided on the image `S_w^{Π(w)}`, which
    /// lies in Δ iff `S_w` does once Δ is closed under conjugation.
    fn check(&self, w: &[usize], chase: &[u8], pi: usize) -> Option<Failure> {
        let l = self.l;
        let n = w.len();
        // Axiom (i): the suffix is in D as well.
        if !l.id_in_delta(l.image_id(&w[1..])) {
            return Some(("subwords of words in D lie in D", w.to_vec()));
        }
        // Axiom (iii): contracting an adjacent pair stays in D with the same product.
        let mut buf = [0usize; MAX_DEPTH];
        for i in 0..n - 1 {
            let Some(c) = l.mul(w[i], w[i + 1]) else {
                return Some(("subwords of words in D lie in D", w[i..i + 2].to_vec()));
            };
            buf[..i].copy_from_slice(&w[..i]);
            buf[i] = c;
            buf[i + 1..n - 1].copy_from_slice(&w[i + 2..]);
            let v = &buf[..n - 1];
            if !l.id_in_delta(l.image_id(v)) || l.fold(v) != Some(pi) {
                return Some(("products are independent of bracketing", w.to_vec()));
            }
        }
        // Axiom (iv): w⁻¹∘w ∈ D with product the unit.
        let mut ww = [0usize; 2 * MAX_DEPTH];
        for (i, &f) in w.iter().rev().enumerate() {
            ww[i] = l.inv(f);
        }
        ww[n..2 * n].copy_from_slice(w);
        let ww = &ww[..2 * n];
        if !l.id_in_delta(l.image_id(ww)) || l.fold(ww) != Some(l.unit()) {
            return Some(("inverse words multiply to the unit", w.to_vec()));
        }
        // S_w ≤ S_Π(w), and conjugation through w is conjugation by Π(w).
        for (x, &y) in chase.iter().enumerate().take(self.k) {
            if y != NONE && l.conj_s(x, pi) != Some(y as usize) {
                return Some(("S_w ≤ S_Π(w) with matching conjugation", w.to_vec()));
            }
        }
        None
    }

    fn walk(&self, w: &mut Vec<usize>, chase: &[u8; 64], pi: usize) -> Option<Failure> {
        if w.len() >= 2 {
            if let Some(f) = self.check(w, chase, pi) {
                return Some(f);
            }
        }
        if w.len() == self.depth {
            return None;
        }
        let l = self.l;
        for g in 0..l.size() {
            let mut next = [NONE; 64];
            let mut mask = 0u64;
            for x in 0..self.k {
                let y = chase[x];
                if y != NONE {
                    if let Some(z) = l.conj_s(y as usize, g) {
                        next[x] = z as u8;
                        mask |= 1 << x;
                    }
                }
            }
            if !l.is_object(mask) {
                continue;
            }
            w.push(g);
            let r = match l.mul(pi, g) {
                Some(p2) => self.walk(w, &next, p2),
                None => Some(("products of words in D are defined", w.clone())),
            };
            w.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

fn first_failure(l: &Locality, depth: usize) -> Option<Failure> {
    let k = l.s_elems().len();
    let walker = Walker { l, depth: depth.min(MAX_DEPTH), k };
    (0..l.size())
        .into_par_iter()
        .map(|g| {
            let mut next = [NONE; 64];
            let mut mask = 0u64;
            for x in 0..k {
                if let Some(z) = l.conj_s(x, g) {
                    next[x] = z as u8;
                    mask |= 1 << x;
                }
            }
            if !l.is_object(mask) {
                return Some(("S_f ∈ Δ for every element", vec![g]));
            }
            walker.walk(&mut vec![g], &next, g)
        })
        .find_first(Option::is_some)
        .flatten()
}

/// Check the partial-group and locality axioms; every clause reports a witness on failure.
pub fn validate(l: &Locality, depth: usize) -> Report {
    let timer = Timer::start();
    let mut r = Report::new("locality-axioms");
    let n = l.size();
    let u = l.unit();
    let g = l.group();
    let lat = l.lattice();

    let bad_inv = (0..n).find(|&f| l.inv(l.inv(f)) != f);
    r.check("inversion is an involution", bad_inv.is_none(), json!(bad_inv));

    let bad_unit = (0..n).find(|&f| l.mul(u, f) != Some(f) || l.mul(f, u) != Some(f));
    r.check("unit is a two-sided identity", bad_unit.is_none(), json!(bad_unit));

    let bad_pair = (0..n).find(|&f| l.mul(f, l.inv(f)) != Some(u));
    r.check("f·f⁻¹ is the unit", bad_pair.is_none(), json!(bad_pair));

    let delta = l.delta();
    r.check("Δ is non-empty", !delta.is_empty(), Value::Null);

    let not_over = delta
        .iter()
        .flat_map(|&m| lat.subs.iter().filter(move |&&o| o & m == m).map(move |&o| (m, o)))
        .find(|&(_, o)| !l.is_object(o));
    r.check("Δ is overgroup-closed", not_over.is_none(), json!(not_over.map(|(m, o)| [m, o])));

    let not_conj = delta.iter().find_map(|&m| {
        (0..n).find_map(|f| (m & !l.s_f(f) == 0 && !l.is_object(l.chase_mask(m, f))).then_some((m, f)))
    });
    r.check("Δ is closed under conjugation", not_conj.is_none(), json!(not_conj.map(|(m, f)| json!({"object": m, "element": f}))));

    let bad_sf = (0..n).find(|&f| {
        let sf = l.s_f(f);
        lat.id(sf).is_none() || l.chase_mask(sf, f) != l.s_f(l.inv(f))
    });
    r.check("S_f is a subgroup with S_f^f = S_f⁻¹", bad_sf.is_none(), json!(bad_sf));

    let bad_conj = (0..n).find_map(|f| {
        bits64(l.s_f(f)).find(|&x| !l.in_domain(&[l.inv(f), l.s_elems()[x], f])).map(|x| [f, x])
    });
    r.check("conjugation into S is defined on S_f", bad_conj.is_none(), json!(bad_conj));

    let bad_dom = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| l.mul(a, b).is_some() != l.in_domain(&[a, b]));
    r.check("binary products are defined exactly on D_Δ", bad_dom.is_none(), json!(bad_dom.map(|(a, b)| [a, b])));

    let bad_chase = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find_map(|(a, b)| {
        let ab = l.mul(a, b)?;
        bits64(l.s_word(&[a, b]))
            .find(|&x| l.conj_s(x, ab) != l.conj_s(x, a).and_then(|y| l.conj_s(y, b)))
            .map(|x| json!({"pair": [a, b], "s": x}))
    });
    r.check("x^(ab) = (x^a)^b on S_(a,b)", bad_chase.is_none(), json!(bad_chase));

    let words = format!("word axioms up to length {depth}");
    if bad_dom.is_none() && bad_unit.is_none() {
        let failure = first_failure(l, depth);
        r.check(&words, failure.is_none(), json!(failure.map(|(c, w)| json!({"clause": c, "word": w}))));
    } else {
        r.na(&words, "binary products or unit already broken");
    }

    let ns: Vec<usize> = (0..n).filter(|&f| l.s_f(f) == g.full()).collect();
    let ns_set = crate::bits::ElemSet::from_iter(ns.iter().copied());
    match l.subset_group(&ns_set, "N_L(S)") {
        Ok((h, _)) => {
            let sylow = p_part(h.order(), l.p()) == ord(g.full());
            r.check("S is a maximal p-subgroup", sylow, json!({"N_L(S)": ns.len(), "S": ord(g.full())}))
        }
        Err(e) => r.check("S is a maximal p-subgroup", false, json!(e.to_string())),
    };
    r.consistent = r.clauses.iter().all(|c| c.verdict != crate::report::Verdict::Fail);
    timer.finish(r)
}
