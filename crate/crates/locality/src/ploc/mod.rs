//! Partial groups and localities.
//!
//! A locality stores its binary products densely; the domain `D` is the set
//! of words `w` with `S_w ∈ Δ`, and `Π(w)` is the left fold of binary
//! products. Conjugation is `x^f = Π(f⁻¹, x, f)`.

mod flags;
mod locality;
mod quotient;
mod subsets;
mod validate;

pub use flags::{cr_missing, is_cr_complete, is_linking, is_objective_char_p, locality_flags, non_char_p_objects};
pub use locality::{Locality, RawLocality, UNDEF};
pub use quotient::{check_projection, CosetPartition, Quotient};
pub use validate::validate;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::grp::named::*;
    use crate::grp::PGroup;

    fn overgroups(g: &PGroup, m: u64) -> Vec<u64> {
        g.subgroups_in(g.full()).into_iter().filter(|&o| o & m == m).collect()
    }

    #[test]
    fn s4_locality_validates() {
        let g = symmetric(4);
        let s = g.one_sylow(2);
        let v = g.p_core(2);
        let (sg, back) = g.subgroup_as_group(&s, "S").unwrap();
        let pg = PGroup::from_group(&sg).unwrap();
        let vm = back.iter().enumerate().filter(|(_, &x)| v.contains(x)).fold(0u64, |m, (i, _)| m | 1 << i);
        let l = Locality::from_group(&g, &s, 2, &overgroups(&pg, vm)).unwrap();
        assert_eq!(l.size(), 24);
        let r = validate(&l, 4);
        assert!(r.consistent, "{}", r.to_json());
        assert_eq!(l.op_core().unwrap(), vm);
        assert!(locality_flags(&l, &Caps::default()).unwrap().consistent);
    }
}
