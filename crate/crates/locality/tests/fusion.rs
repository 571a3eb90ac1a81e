use locality::bits::{bits64, ElemSet};
use locality::caps::Caps;
use locality::catalog;
use locality::fus::{self, FusionSystem, Hom, Mode};
use locality::grp::named::*;
use locality::grp::FiniteGroup;
use locality::io::Object;
use locality::ploc::Locality;
use locality::report::Verdict;
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

fn group_fusion(g: &FiniteGroup, p: usize) -> (FusionSystem, Vec<usize>) {
    FusionSystem::from_group(g, &g.one_sylow(p), p, &caps()).unwrap()
}

fn lift(back: &[usize], m: u64) -> ElemSet {
    ElemSet::from_iter((0..back.len()).filter(|i| m >> i & 1 == 1).map(|i| back[i]))
}

fn catalog_fusion(name: &str) -> FusionSystem {
    match catalog::load(name, &caps()).unwrap().1 {
        Object::Fusion(f) => f,
        _ => panic!("{name} is not a fusion instance"),
    }
}

/// `F^cr` of `F_S(G)` read off the group: `P` is centric when every
/// `G`-conjugate inside `S` contains its centralizer in `S`, and radical when
/// `N_G(P)/P·C_G(P)` has no non-trivial normal p-subgroup.
fn cr_oracle(g: &FiniteGroup, f: &FusionSystem, back: &[usize]) -> Vec<u64> {
    let p = f.p();
    let s = lift(back, f.support());
    let mut out: Vec<u64> = f
        .subgroups()
        .iter()
        .copied()
        .filter(|&m| {
            let pg = lift(back, m);
            let centric = (0..g.order()).map(|t| g.conj_set(&pg, t)).filter(|q| q.is_subset(&s)).all(|q| {
                g.centralizer_in(&s, &q).is_subset(&q)
            });
            let n = g.normalizer(&pg);
            let pc = g.product_set(&pg, &g.centralizer(&pg));
            let (ng, nback) = g.subgroup_as_group(&n, "N").unwrap();
            let local = ElemSet::from_iter(nback.iter().enumerate().filter(|(_, x)| pc.contains(**x)).map(|(i, _)| i));
            let out = ng.quotient(&local, "Out").unwrap();
            centric && out.p_core(p).len() == 1
        })
        .collect();
    out.sort_unstable();
    out
}

const GROUP_SYSTEMS: [(&str, usize); 7] =
    [("s4", 2), ("s4", 3), ("a4", 2), ("s3", 3), ("gl2-3", 2), ("sl2-3", 2), ("c2xs3", 2)];

fn named_group(name: &str) -> FiniteGroup {
    locality::io::group_from_doc(&catalog::group_doc(name).unwrap(), &caps()).unwrap()
}

#[test]
fn automizer_orders_match_normalizer_quotients() {
    for (name, p) in GROUP_SYSTEMS {
        let g = named_group(name);
        let (f, back) = group_fusion(&g, p);
        for (i, &m) in f.subgroups().iter().enumerate() {
            let pg = lift(&back, m);
            assert_eq!(f.auts(i).len(), g.normalizer(&pg).len() / g.centralizer(&pg).len(), "{name} {m:#x}");
        }
    }
}

#[test]
fn s4_at_two_has_six_automorphisms_of_the_normal_four_group() {
    let g = symmetric(4);
    let (f, back) = group_fusion(&g, 2);
    let v = f.subgroups().iter().position(|&m| lift(&back, m) == g.p_core(2)).unwrap();
    assert_eq!(f.auts(v).len(), 6);
    assert_eq!(f.verify_axioms(), Ok(()));
}

#[test]
fn s3_at_three_has_the_inversion() {
    let (f, _) = group_fusion(&symmetric(3), 3);
    let top = f.id(f.support()).unwrap();
    assert_eq!(f.auts(top).len(), 2);
}

#[test]
fn closures_reproduce_group_systems() {
    // Inversion on C3 generates F(S3); an order-3 automorphism of V4 generates F(A4).
    for (g, p) in [(symmetric(3), 3), (alternating4(), 2)] {
        let (f, back) = group_fusion(&g, p);
        let s = lift(&back, f.support());
        let outside = (0..g.order()).find(|&t| !s.contains(t) && g.conj_set(&s, t) == s).unwrap();
        let images: Vec<u8> = back
            .iter()
            .map(|&x| back.iter().position(|&y| y == g.conj(x, outside)).unwrap() as u8)
            .collect();
        let gen = Hom { domain: f.support(), images };
        let c = FusionSystem::closure(p, f.group().clone(), f.support(), vec![gen], &caps()).unwrap();
        assert!(c.same_as(&f), "{}", g.name());
    }
}

#[test]
fn inner_systems_of_p_groups() {
    let (f, _) = group_fusion(&dihedral8(), 2);
    let inner = FusionSystem::inner(2, f.group().clone(), f.support(), &caps()).unwrap();
    assert!(inner.same_as(&f));
    assert!(fus::is_saturated(&f));
    assert_eq!(fus::cr(&f).unwrap(), vec![f.support()]);
    assert_eq!(fus::op_fusion(&f).unwrap(), f.support());
}

#[test]
fn cr_sets_match_the_group_oracle() {
    for (name, p) in GROUP_SYSTEMS {
        let g = named_group(name);
        let (f, back) = group_fusion(&g, p);
        assert_eq!(fus::cr(&f).unwrap(), cr_oracle(&g, &f, &back), "{name} p={p}");
    }
}

// The non-normal four-group V has Out_F(V) = D8/V of order 2, so it is not
// radical: the cr classes are S and the normal four-group.
#[test]
fn s4_cr_set_has_two_classes() {
    let f = catalog_fusion("s4-d8");
    let cr = fus::cr(&f).unwrap();
    let classes: Vec<Vec<u64>> = f.classes().into_iter().filter(|c| cr.contains(&c[0])).collect();
    assert_eq!(classes.len(), 2);
    assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), cr.len());
}

#[test]
fn largest_normal_subgroup_of_s4_system() {
    let g = symmetric(4);
    let (f, back) = group_fusion(&g, 2);
    assert_eq!(lift(&back, fus::op_fusion(&f).unwrap()), g.p_core(2));
    assert!(fus::is_constrained(&f).unwrap());
}

#[test]
fn direct_and_axiomatic_saturation_agree_on_catalog() {
    for name in catalog::names() {
        let Some(inst) = catalog::get(name) else { continue };
        if inst.kind != locality::io::Kind::Fusion {
            continue;
        }
        let f = catalog_fusion(name);
        for c in fus::classify(&f) {
            assert_eq!(c.respects_saturation(Mode::Direct), c.respects_saturation(Mode::Axioms), "{name} {:#x}", c.representative);
        }
        assert_eq!(fus::is_saturated(&f), name != "d8-nonsat", "{name}");
    }
}

#[test]
fn unsaturated_system_keeps_the_inclusion_chain() {
    let f = catalog_fusion("d8-nonsat");
    assert_eq!(f.verify_axioms(), Ok(()));
    assert!(!fus::is_saturated(&f));
    assert_eq!(fus::critical_chain(&f).unwrap(), (true, true));
    assert!(fus::cr_agrees_with_classical(&f).is_err());
    assert!(fus::subcentric(&f).is_err());
}

#[test]
fn saturated_catalog_systems_have_cr_equal_classical_and_critical() {
    for name in ["s4-d8", "a4-v4", "s3-c3", "d8", "gl2-3-sd16", "sl2-3-q8"] {
        let f = catalog_fusion(name);
        let r = fus::cr_agrees_with_classical(&f).unwrap();
        assert!(r.consistent && r.all_pass(), "{name}: {}", r.to_json());
    }
}

#[test]
fn group_systems_are_generated_by_centric_subgroups() {
    for (name, p) in GROUP_SYSTEMS {
        let (f, _) = group_fusion(&named_group(name), p);
        let c = fus::centric(&f);
        assert!(fus::is_f_closed(&f, &c), "{name}");
        assert!(fus::is_delta_generated(&f, &c, caps().morphisms).unwrap(), "{name}");
        assert!(fus::is_delta_saturated(&f, &c), "{name}");
        let cr = fus::cr(&f).unwrap();
        assert!(fus::is_delta_generated(&f, &cr, caps().morphisms).unwrap(), "{name}");
    }
}

#[test]
fn the_top_alone_does_not_generate_s4_fusion() {
    let (f, _) = group_fusion(&symmetric(4), 2);
    assert!(!fus::is_delta_generated(&f, &[f.support()], caps().morphisms).unwrap());
}

#[test]
fn subcentric_contains_centric() {
    for (name, p) in GROUP_SYSTEMS {
        let (f, _) = group_fusion(&named_group(name), p);
        let sc = fus::subcentric(&f).unwrap();
        assert!(fus::centric(&f).iter().all(|m| sc.contains(m)), "{name}");
    }
}

fn full_locality(g: &FiniteGroup, p: usize) -> Locality {
    let s = g.one_sylow(p);
    let k = s.len();
    let (sg, _) = g.subgroup_as_group(&s, "S").unwrap();
    let pg = locality::grp::PGroup::from_group(&sg).unwrap();
    let all: Vec<u64> = pg.subgroups_in(pg.full());
    assert!(k <= 64);
    Locality::from_group(g, &s, p, &all).unwrap()
}

#[test]
fn normal_subgroups_give_normal_subsystems() {
    let g = symmetric(4);
    let l = full_locality(&g, 2);
    let f = l.fusion(&caps()).unwrap();
    let (direct, _) = group_fusion(&g, 2);
    assert!(f.same_as(&direct));
    let idx = |set: &ElemSet| ElemSet::from_iter(set.iter());
    let a4 = alternating4();
    let a4_in_s4 = ElemSet::from_iter((0..g.order()).filter(|&x| {
        let p = &g.perms().unwrap()[x];
        a4.find_perm(p).is_some()
    }));
    assert_eq!(a4_in_s4.len(), 12);
    let e = l.fusion_of(&idx(&a4_in_s4), &caps()).unwrap();
    let rel = fus::relations(&f, &e);
    assert!(rel.subsystem && rel.strongly_closed && rel.invariant && rel.weakly_normal && rel.normal);
    assert!(fus::extension_condition(&f, &e));
    let r = fus::subsystem_relations(&f, &e).unwrap();
    assert!(r.all_pass());

    // A subgroup generated by one transposition is not strongly closed.
    let t = g.generate(&ElemSet::singleton(g.find_perm(&perm(4, &[&[1, 2]])).unwrap()));
    let e = l.fusion_of(&t, &caps()).unwrap();
    let rel = fus::relations(&f, &e);
    assert!(rel.subsystem && !rel.strongly_closed && !rel.normal);
    let r = fus::subsystem_relations(&f, &e).unwrap();
    assert_eq!(r.verdict_of("normal"), Some(Verdict::Na));
}

#[test]
fn normalizer_subsystems_of_fully_normalized_subgroups_are_saturated() {
    for (name, p) in GROUP_SYSTEMS {
        let (f, _) = group_fusion(&named_group(name), p);
        for c in f.classes() {
            for q in fus::fully_normalized_in_class(&f, c[0]).unwrap() {
                let n = fus::normalizer_subsystem(&f, q).unwrap();
                assert!(fus::is_saturated(&n), "{name} {q:#x}");
            }
        }
    }
}

#[test]
fn morphism_cap_is_enforced() {
    let g = named_group("gl2-3");
    let tight = Caps { morphisms: 10, ..caps() };
    assert!(FusionSystem::from_group(&g, &g.one_sylow(2), 2, &tight).is_err());
}

#[test]
fn one_asymmetric_generator_breaks_saturation() {
    let g = klein4();
    let pg = std::sync::Arc::new(locality::grp::PGroup::from_group(&g).unwrap());
    let gen = Hom { domain: 0b11, images: vec![0, 2] };
    let f = FusionSystem::closure(2, pg, 0b1111, vec![gen], &caps()).unwrap();
    assert_eq!(f.verify_axioms(), Ok(()));
    assert!(!fus::is_saturated(&f));
    let bad: Vec<_> = fus::classify(&f).into_iter().filter(|c| !c.respects_saturation(Mode::Direct)).collect();
    assert!(!bad.is_empty());
    assert!(bad.iter().all(|c| !c.respects_saturation(Mode::Axioms)));
}

#[test]
fn inner_systems_have_only_the_top_in_cr() {
    let sl = named_group("sl2-3");
    let (q8, _) = sl.subgroup_as_group(&sl.p_core(2), "Q8").unwrap();
    for g in [dihedral8(), q8] {
        let (f, _) = group_fusion(&g, 2);
        let oracle: Vec<u64> = f
            .subgroups()
            .iter()
            .copied()
            .filter(|&m| {
                m == f.support()
                    || (fus::c_s(&f, m) & !m == 0
                        && fus::op_fusion(&fus::normalizer_subsystem(&f, m).unwrap()).unwrap() == m)
            })
            .collect();
        assert_eq!(fus::cr(&f).unwrap(), oracle);
        assert_eq!(oracle, vec![f.support()]);
        assert!(fus::is_constrained(&f).unwrap());
    }
}

#[test]
fn subcentric_contains_cr_for_s4() {
    let f = catalog_fusion("s4-d8");
    let sc = fus::subcentric(&f).unwrap();
    assert!(fus::cr(&f).unwrap().iter().all(|m| sc.contains(m)));
    assert!(fus::is_f_closed(&f, &sc));
}

#[test]
fn all_subgroups_always_generate() {
    for name in ["s4-d8", "d8-nonsat", "gl2-3-sd16"] {
        let f = catalog_fusion(name);
        assert!(fus::is_delta_generated(&f, f.subgroups(), caps().morphisms).unwrap(), "{name}");
    }
}

#[test]
fn surgery_moves_every_conjugate_to_a_fully_normalized_one() {
    for (name, p) in GROUP_SYSTEMS {
        let (f, _) = group_fusion(&named_group(name), p);
        for c in f.classes() {
            for pm in fus::fully_normalized_in_class(&f, c[0]).unwrap() {
                for &q in &c {
                    let homs = f.hom_set(fus::n_s(&f, q), fus::n_s(&f, pm)).unwrap();
                    let moved = homs.iter().any(|h| bits64(q).fold(0u64, |m, x| m | 1 << h.apply(x).unwrap()) == pm);
                    assert!(moved, "{name} {q:#x} -> {pm:#x}");
                }
            }
        }
    }
}

#[test]
fn centric_classes_are_detected_at_fully_centralized_members() {
    for name in ["s4-d8", "gl2-3-sd16", "sl2-3-q8", "d8-nonsat"] {
        let f = catalog_fusion(name);
        for c in fus::classify(&f) {
            let centric = c.members.iter().all(|&q| fus::c_s(&f, q) & !q == 0);
            for (i, &q) in c.members.iter().enumerate() {
                if c.flags[i].fully_centralized {
                    assert_eq!(fus::c_s(&f, q) & !q == 0, centric, "{name} {q:#x}");
                }
            }
        }
    }
}

#[test]
fn criterion_reports_missing_critical_classes_as_unmet_hypotheses() {
    let f = catalog_fusion("s4-d8");
    let r = fus::saturation_by_criterion(&f, &f, &[f.support()], &caps()).unwrap();
    assert_eq!(r.verdict_of("pre: Δ is F-closed"), Some(Verdict::Pass));
    assert_eq!(r.verdict_of("pre: E^cr ⊆ Δ"), Some(Verdict::Fail));
    assert_eq!(r.verdict_of("F is saturated"), Some(Verdict::Na));
    assert!(!r.preconditions_met());
    let all = fus::saturation_by_criterion(&f, &f, f.subgroups(), &caps()).unwrap();
    assert!(all.preconditions_met() && all.verdict_of("F is saturated") == Some(Verdict::Pass));
}

/// Pairs `(F_S(G), F_T(N))` for every normal subgroup `N` of a catalog group.
fn normal_pairs() -> Vec<(String, FusionSystem, FusionSystem)> {
    let mut out = Vec::new();
    for name in ["s4", "a4", "sl2-3", "gl2-3", "c2xs3", "c3xs4"] {
        let g = named_group(name);
        let l = full_locality(&g, 2);
        let f = l.fusion(&caps()).unwrap();
        for n in g.enumerate_subgroups(512).unwrap() {
            if g.is_normal_in(&g.all(), &n.members) {
                let e = l.fusion_of(&n.members, &caps()).unwrap();
                out.push((format!("{name}/{}", n.order), f.clone(), e));
            }
        }
    }
    out
}

#[test]
fn subsystem_invariants_on_normal_pairs() {
    for (name, f, e) in normal_pairs() {
        let rel = fus::relations(&f, &e);
        assert!(rel.invariant && rel.weakly_normal && rel.normal, "{name}");
        let t = e.support();
        // Subgroup sets of E are closed under F-conjugacy.
        for set in [fus::centric(&e), fus::radical(&e).unwrap(), fus::cr(&e).unwrap(), fus::critical(&e).unwrap()] {
            for &m in &set {
                assert!(f.class_of(f.id(m).unwrap()).iter().all(|q| set.contains(q)), "{name} {m:#x}");
            }
        }
        // cr subgroups of F meet T in cr subgroups of E.
        let ecr = fus::cr(&e).unwrap();
        for r in fus::cr(&f).unwrap() {
            assert!(ecr.contains(&(r & t)), "{name} {r:#x}");
        }
        // Fully normalized E-critical subgroups lift to cr subgroups of F.
        let fcr = fus::cr(&f).unwrap();
        for pm in fus::critical(&e).unwrap() {
            let fully = fus::fully_normalized_in_class(&f, pm).unwrap();
            if fully.contains(&pm) {
                assert!(fcr.iter().any(|r| r & t == pm), "{name} {pm:#x}");
            }
        }
    }
}

fn random_group() -> impl Strategy<Value = FiniteGroup> {
    (3usize..=5)
        .prop_flat_map(|d| prop::collection::vec(Just((0..d).collect::<Vec<usize>>()).prop_shuffle(), 1..=2))
        .prop_map(|gens| {
            let d = gens[0].len();
            FiniteGroup::from_perms("G", &gens, d, 512).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_systems_are_saturated(g in random_group(), p in prop::sample::select(vec![2usize, 3])) {
        let (f, back) = group_fusion(&g, p);
        prop_assert_eq!(f.verify_axioms(), Ok(()));
        for c in fus::classify(&f) {
            prop_assert!(c.respects_saturation(Mode::Direct));
            prop_assert!(c.respects_saturation(Mode::Axioms));
        }
        prop_assert_eq!(fus::cr(&f).unwrap(), cr_oracle(&g, &f, &back));
    }

    #[test]
    fn centric_is_overgroup_closed(g in random_group()) {
        let (f, _) = group_fusion(&g, 2);
        let c = fus::centric(&f);
        for &m in &c {
            for &o in f.subgroups() {
                if o & m == m {
                    prop_assert!(c.contains(&o));
                }
            }
        }
        let (a, b) = fus::critical_chain(&f).unwrap();
        prop_assert!(a && b);
    }
}
