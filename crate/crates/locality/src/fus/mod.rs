//! Fusion systems over finite p-groups.
//!
//! Every morphism set is stored in full: for each subgroup `P` of the
//! support, `Hom_F(P, S)` as image vectors aligned with the ascending
//! members of `P`. Maps are written on the right, so `φψ` applies `φ` first.

mod classes;
mod criterion;
mod lattice;
mod relations;
mod sets;
mod system;

pub use classes::{
    aut_s, c_s, class_of_record, classify, fully_normalized_in_class, inn, is_fully_automized, is_receptive,
    is_saturated, n_phi, n_s, op_aut, respects_saturation, ClassRecord, Flags, Mode,
};
pub use criterion::saturation_by_criterion;
pub use lattice::{Lattice, NONE};
pub use relations::{
    extension_condition, is_delta_generated, is_delta_saturated, is_f_closed, is_strongly_closed, relations,
    subsystem_relations, Relations,
};
pub use sets::{
    centric, classical, cr, cr_agrees_with_classical, critical, critical_chain, is_constrained, is_normal_subgroup,
    normalizer_subsystem, op_fusion, radical, subcentric, SubgroupSet,
};
pub use system::{compose, conj_map, generators, identity, image_mask, inverse, restrict, FusionSystem, Hom, Store};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::grp::named::*;
    use crate::grp::{ord, PGroup};
    use std::sync::Arc;

    fn d8_in_s4() -> FusionSystem {
        let g = symmetric(4);
        FusionSystem::from_group(&g, &g.one_sylow(2), 2, &Caps::default()).unwrap().0
    }

    #[test]
    fn s4_fusion_basics() {
        let f = d8_in_s4();
        f.verify_axioms().unwrap();
        assert!(is_saturated(&f));
        let o = op_fusion(&f).unwrap();
        assert_eq!(ord(o), 4);
        let i = f.id(o).unwrap();
        assert_eq!(f.auts(i).len(), 6);
        assert!(is_constrained(&f).unwrap());
        for c in classify(&f) {
            assert_eq!(c.respects_saturation(Mode::Direct), c.respects_saturation(Mode::Axioms));
        }
    }

    #[test]
    fn asymmetric_closure_is_not_saturated() {
        let g = Arc::new(PGroup::from_group(&klein4()).unwrap());
        let s = g.full();
        let h = Hom { domain: 0b11, images: vec![0, 2] };
        let f = FusionSystem::closure(2, g, s, vec![h], &Caps::default()).unwrap();
        f.verify_axioms().unwrap();
        assert!(!is_saturated(&f));
        assert!(classify(&f).iter().any(|c| !c.respects_saturation(Mode::Axioms)));
    }

    #[test]
    fn closure_matches_a4() {
        let a4 = alternating4();
        let (fa, _) = FusionSystem::from_group(&a4, &a4.one_sylow(2), 2, &Caps::default()).unwrap();
        let aut = Hom { domain: fa.support(), images: fa.auts(fa.id(fa.support()).unwrap()).into_iter().find(|a| a[1] != 1).unwrap() };
        let fc = FusionSystem::closure(2, fa.group().clone(), fa.support(), vec![aut], &Caps::default()).unwrap();
        assert!(fc.same_as(&fa));
    }
}
