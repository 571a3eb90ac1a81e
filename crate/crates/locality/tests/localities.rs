use locality::bits::ElemSet;
use locality::caps::Caps;
use locality::catalog;
use locality::fus::{self, FusionSystem};
use locality::grp::named::*;
use locality::grp::{FiniteGroup, PGroup};
use locality::io::{KernelData, Object};
use locality::ploc::{check_projection, locality_flags, validate, Locality};
use locality::report::Verdict;
use locality::suite;
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

fn all_subgroups(g: &FiniteGroup, s: &ElemSet) -> Vec<u64> {
    let (sg, _) = g.subgroup_as_group(s, "S").unwrap();
    let pg = PGroup::from_group(&sg).unwrap();
    pg.subgroups_in(pg.full())
}

fn overgroups(all: &[u64], bases: &[u64]) -> Vec<u64> {
    all.iter().copied().filter(|&m| bases.iter().any(|&b| m & b == b)).collect()
}

/// `S_w` in the ambient group: members of `S` that stay in `S` while
/// conjugated by the letters of `w` in turn.
fn sw_oracle(g: &FiniteGroup, l: &Locality, w: &[usize]) -> u64 {
    let labels = l.labels().unwrap();
    let s: Vec<usize> = l.s_elems().iter().map(|&x| labels[x]).collect();
    let mut mask = 0;
    'outer: for (i, &x0) in s.iter().enumerate() {
        let mut x = x0;
        for &f in w {
            x = g.conj(x, labels[f]);
            if !s.contains(&x) {
                continue 'outer;
            }
        }
        mask |= 1 << i;
    }
    mask
}

fn s4_over_v4() -> (FiniteGroup, Locality) {
    let g = symmetric(4);
    let s = g.one_sylow(2);
    let all = all_subgroups(&g, &s);
    let l0 = Locality::from_group(&g, &s, 2, &all).unwrap();
    let v = l0.mask_of(&l0.all().intersection(&g.p_core(2)));
    let l = Locality::from_group(&g, &s, 2, &overgroups(&all, &[v])).unwrap();
    (g, l)
}

fn catalog_kernel(name: &str) -> KernelData {
    match catalog::load(name, &caps()).unwrap().1 {
        Object::Kernel(k) => k,
        _ => panic!("{name} is not a kernel"),
    }
}

fn catalog_locality(name: &str) -> Locality {
    match catalog::load(name, &caps()).unwrap().1 {
        Object::Locality(l) => l,
        _ => panic!("{name} is not a locality"),
    }
}

fn words(n: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![vec![]], |acc, _| {
        acc.into_iter().flat_map(|w| (0..n).map(move |x| [w.clone(), vec![x]].concat())).collect()
    })
}

#[test]
fn membership_matches_the_group_scan() {
    let (g, l) = s4_over_v4();
    let oracle = (0..g.order()).filter(|&x| {
        let s = l.s_elems().iter().map(|&i| l.labels().unwrap()[i]).collect::<Vec<_>>();
        let sg: u64 = s.iter().enumerate().filter(|(_, &y)| s.contains(&g.conj(y, x))).fold(0, |m, (i, _)| m | 1 << i);
        l.is_object(sg)
    });
    assert_eq!(oracle.count(), 24);
    assert_eq!(l.size(), 24);
    assert_eq!(validate(&l, 4).outcome().exit_code(), 0);
}

#[test]
fn s5_over_cr_overgroups_is_a_proper_subset() {
    let g = symmetric(5);
    let s = g.one_sylow(2);
    let (f, _) = FusionSystem::from_group(&g, &s, 2, &caps()).unwrap();
    let all = all_subgroups(&g, &s);
    let delta = overgroups(&all, &fus::cr(&f).unwrap());
    let l = Locality::from_group(&g, &s, 2, &delta).unwrap();
    let full = Locality::from_group(&g, &s, 2, &all).unwrap();
    let oracle = (0..g.order()).filter(|&x| l.is_object(sw_oracle(&g, &full, &[full.labels().unwrap().iter().position(|&y| y == x).unwrap()]))).count();
    assert_eq!(l.size(), oracle);
    assert!(l.size() < 120);
    assert!(validate(&l, 3).consistent);
    assert!(l.fusion(&caps()).unwrap().same_as(&f));
}

#[test]
fn catalog_localities_validate() {
    for name in ["s4-locality", "a4-locality", "s5-centric"] {
        let r = validate(&catalog_locality(name), 3);
        assert!(r.consistent && r.all_pass(), "{name}: {}", r.to_json());
    }
}

#[test]
fn mutations_are_rejected_with_witnesses() {
    let base = catalog_locality("s4-locality");
    let muts = suite::mutations(&base).unwrap();
    assert_eq!(muts.len(), 3);
    for (class, m, clause, witness) in muts {
        let r = validate(&m, 4);
        let c = r.clause(clause).unwrap();
        assert_eq!(c.verdict, Verdict::Fail, "{class}");
        assert_eq!(c.witness, witness, "{class}");
    }
}

#[test]
fn domain_and_products_match_the_group() {
    let (g, l) = s4_over_v4();
    let labels = l.labels().unwrap().to_vec();
    for len in 0..=3 {
        for w in words(l.size(), len) {
            let sw = sw_oracle(&g, &l, &w);
            assert_eq!(l.s_word(&w), sw, "{w:?}");
            assert_eq!(l.in_domain(&w), l.is_object(sw), "{w:?}");
            if l.is_object(sw) {
                let prod = w.iter().fold(0, |acc, &f| g.mul(acc, labels[f]));
                assert_eq!(labels[l.eval(&w).unwrap()], prod, "{w:?}");
            } else {
                assert!(l.eval(&w).is_err());
            }
        }
    }
}

#[test]
fn trivial_words() {
    let (_, l) = s4_over_v4();
    assert_eq!(l.eval(&[]).unwrap(), l.unit());
    for f in 0..l.size() {
        let w = [f, l.inv(f)];
        assert_eq!(l.eval(&w).unwrap(), l.unit());
        assert_eq!(l.s_word(&w), l.s_f(f));
    }
}

#[test]
fn conjugation_inside_s_is_group_conjugation() {
    let (g, l) = s4_over_v4();
    let labels = l.labels().unwrap();
    for &x in l.s_elems() {
        for &f in l.s_elems() {
            assert_eq!(labels[l.conjugate(x, f).unwrap()], g.conj(labels[x], labels[f]));
        }
    }
}

#[test]
fn normalizers_of_objects_are_subgroups() {
    let (g, l) = s4_over_v4();
    for &m in l.delta() {
        let n = l.normalizer_of_mask(m);
        for a in n.iter() {
            for b in n.iter() {
                assert!(n.contains(l.mul(a, b).unwrap()), "{m:#x}");
            }
        }
    }
    let v = l.all().intersection(&g.p_core(2));
    let labels = l.labels().unwrap();
    let c: ElemSet = ElemSet::from_iter(l.centralizer(&v).iter().map(|x| labels[x]));
    assert_eq!(c, g.centralizer(&g.p_core(2)));
    assert_eq!(c, g.p_core(2));
}

#[test]
fn partial_subgroups_and_normality() {
    let (g, l) = s4_over_v4();
    let unit = ElemSet::singleton(l.unit());
    assert!(l.is_partial_subgroup(&unit) && l.is_partial_normal(&unit));
    let s = l.s_set();
    assert!(l.is_partial_subgroup(&s));
    assert_eq!(l.is_partial_normal(&s), l.normalizer(&s) == l.all());
    assert!(!l.is_partial_normal(&s));
    let a4 = alternating4();
    let labels = l.labels().unwrap();
    let n = ElemSet::from_iter((0..l.size()).filter(|&x| a4.find_perm(&g.perms().unwrap()[labels[x]]).is_some()));
    assert!(l.is_partial_normal(&n));
    assert!(l.normality_witness(&n).is_none());
    assert!(l.normality_witness(&s).is_some());
}

#[test]
fn op_core_agrees_with_word_intersection() {
    for (g, p) in [(symmetric(4), 2), (alternating4(), 2), (symmetric(3), 3)] {
        let s = g.one_sylow(p);
        let l = Locality::from_group(&g, &s, p, &all_subgroups(&g, &s)).unwrap();
        let mut inter = l.group().full();
        for len in 1..=2 {
            for w in words(l.size(), len).into_iter().filter(|w| l.in_domain(w)) {
                inter &= sw_oracle(&g, &l, &w);
            }
        }
        let core = l.op_core().unwrap();
        assert_eq!(core, inter, "{}", g.name());
        assert_eq!(l.mask_elems(core).iter().map(|x| l.labels().unwrap()[x]).collect::<ElemSet>(), g.p_core(p));
    }
    let d8 = dihedral8();
    let s = d8.all();
    let l = Locality::from_group(&d8, &s, 2, &all_subgroups(&d8, &s)).unwrap();
    assert_eq!(l.op_core().unwrap(), l.group().full());
}

#[test]
fn locality_fusion_matches_group_fusion() {
    let (g, l) = s4_over_v4();
    let (f, _) = FusionSystem::from_group(&g, &g.one_sylow(2), 2, &caps()).unwrap();
    assert!(l.fusion(&caps()).unwrap().same_as(&f));
    let a4 = alternating4();
    let labels = l.labels().unwrap();
    let n = ElemSet::from_iter((0..l.size()).filter(|&x| a4.find_perm(&g.perms().unwrap()[labels[x]]).is_some()));
    let e = l.fusion_of(&n, &caps()).unwrap();
    let (fa4, _) = FusionSystem::from_group(&a4, &a4.one_sylow(2), 2, &caps()).unwrap();
    assert_eq!(e.morphism_count(), fa4.morphism_count());
    assert_eq!(e.auts(e.lattice().id(e.support()).unwrap()).len(), 3);
}

#[test]
fn restrictions() {
    let g = symmetric(4);
    let s = g.one_sylow(2);
    let all = all_subgroups(&g, &s);
    let l = Locality::from_group(&g, &s, 2, &all).unwrap();
    let pairs = |l: &Locality| (0..l.size()).flat_map(|a| (0..l.size()).map(move |b| (a, b))).filter(|&(a, b)| l.mul(a, b).is_some()).count();
    let (same, _) = l.restrict(&all).unwrap();
    assert!(same.same_structure(&l));
    let v = l.mask_of(&l.all().intersection(&g.p_core(2)));
    let (r, map) = l.restrict(&overgroups(&all, &[v])).unwrap();
    assert_eq!(r.size(), 24);
    // V4 = O_2(S4) lies in every S_w, so the domain does not shrink.
    assert_eq!(pairs(&r), pairs(&l));
    assert!(validate(&r, 3).consistent);
    assert_eq!(map.len(), r.size());
    let (top, _) = l.restrict(&[l.group().full()]).unwrap();
    assert_eq!(top.size(), l.normalizer(&l.s_set()).len());
    assert_eq!(top.size(), 8);
    assert!(l.restrict(&[v]).is_err());
}

#[test]
fn frattini_splits_exist_for_every_element() {
    for name in ["s4-kernel", "c2xs3-kernel"] {
        let k = catalog_kernel(name);
        let l = &k.locality;
        let t = l.mask_of(&k.n.intersection(&l.s_set()));
        let nt = l.normalizer_of_mask(t);
        for g in 0..l.size() {
            let (n, f) = l.frattini_split(&k.n, g).unwrap();
            assert!(k.n.contains(n) && nt.contains(f), "{name} {g}");
            assert_eq!(l.mul(n, f), Some(g));
            assert_eq!(l.s_word(&[n, f]), l.s_f(g));
        }
        assert_eq!(l.frattini_split(&k.n, l.unit()).unwrap(), (l.unit(), l.unit()));
    }
}

#[test]
fn quotients_and_projections() {
    let k = catalog_kernel("s4-kernel");
    let l = &k.locality;
    let q = l.quotient(&k.n).unwrap();
    let mut seen = vec![false; l.size()];
    for b in &q.cosets.blocks {
        for &x in b {
            assert!(!seen[x]);
            seen[x] = true;
        }
    }
    assert!(seen.iter().all(|&x| x));
    assert_eq!(q.locality.size(), 2);
    let kernel: Vec<usize> = (0..l.size()).filter(|&x| q.projection[x] == q.locality.unit()).collect();
    assert_eq!(ElemSet::from_iter(kernel), k.n);
    let r = check_projection(l, &q.locality, &q.projection);
    assert!(r.all_pass(), "{}", r.to_json());

    let unit = ElemSet::singleton(l.unit());
    assert_eq!(l.quotient(&unit).unwrap().locality.size(), l.size());
    assert_eq!(l.cosets(&l.all()).unwrap().blocks.len(), 1);

    let id: Vec<usize> = (0..l.size()).collect();
    assert!(check_projection(l, l, &id).all_pass());
    let x = (0..l.size()).find(|&x| !l.s_set().contains(x) && !k.n.contains(x)).unwrap();
    let mut collapse = id.clone();
    collapse[x] = l.unit();
    let r = check_projection(l, l, &collapse);
    assert_eq!(r.verdict_of("homomorphism of partial groups"), Some(Verdict::Fail));
}

#[test]
fn flags_of_small_localities() {
    let l = catalog_locality("s4-locality");
    let r = locality_flags(&l, &caps()).unwrap();
    for c in ["cr-complete", "objective characteristic p", "linking", "F_S(L) is saturated"] {
        assert_eq!(r.verdict_of(c), Some(Verdict::Pass), "{c}");
    }
    let d8 = dihedral8();
    let lone = Locality::from_group(&d8, &d8.all(), 2, &all_subgroups(&d8, &d8.all())).unwrap();
    assert!(locality_flags(&lone, &caps()).unwrap().all_pass());
    // Restricting to {S} leaves N_G(S), where S is normal in the fusion
    // system, so the only cr subgroup is S and the result is cr-complete.
    for (g, p) in [(symmetric(3), 3), (symmetric(4), 2)] {
        let s = g.one_sylow(p);
        let top = Locality::from_group(&g, &s, p, &[(1u64 << s.len()) - 1]).unwrap();
        let r = locality_flags(&top, &caps()).unwrap();
        assert_eq!(r.verdict_of("cr-complete"), Some(Verdict::Pass), "{}", g.name());
    }
}

#[test]
fn the_negative_kernel_locality_is_not_cr_complete() {
    let k = catalog_kernel("s4xs4-negative");
    let r = locality_flags(&k.locality, &caps()).unwrap();
    assert_eq!(r.verdict_of("cr-complete"), Some(Verdict::Fail));
    assert_eq!(r.verdict_of("linking"), Some(Verdict::Fail));
    assert_eq!(r.verdict_of("F_S(L) is saturated"), Some(Verdict::Na));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_products_respect_s_w(w in prop::collection::vec(0usize..24, 1..=4)) {
        let (g, l) = s4_over_v4();
        let w: Vec<usize> = w.into_iter().map(|x| x % l.size()).collect();
        let sw = l.s_word(&w);
        prop_assert_eq!(sw, sw_oracle(&g, &l, &w));
        prop_assert_eq!(l.in_domain(&w), l.is_object(sw));
        if let Ok(prod) = l.eval(&w) {
            prop_assert_eq!(sw & !l.s_f(prod), 0);
            // Conjugating letter by letter agrees with conjugating by the product.
            for &x in l.mask_elems(sw).iter().collect::<Vec<_>>().iter() {
                let stepwise = w.iter().try_fold(x, |y, &f| l.conjugate(y, f)).unwrap();
                prop_assert_eq!(stepwise, l.conjugate(x, prod).unwrap());
            }
        }
    }
}
