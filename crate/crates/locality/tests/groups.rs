use locality::bits::ElemSet;
use locality::caps::Caps;
use locality::catalog;
use locality::grp::named::*;
use locality::grp::{char_p_equiv_group, is_characteristic_p, p_part, FiniteGroup};
use locality::io::group_from_doc;
use locality::report::Verdict;
use proptest::prelude::*;
use std::collections::{BTreeSet, HashSet};

fn catalog_group(name: &str) -> FiniteGroup {
    group_from_doc(&catalog::group_doc(name).unwrap(), &Caps::default()).unwrap()
}

// Oracles: plain set arithmetic on the multiplication table.

fn closure(g: &FiniteGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn subgroups_by_pairs(g: &FiniteGroup) -> HashSet<BTreeSet<usize>> {
    let n = g.order();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| closure(g, &[a, b])).collect()
}

fn subgroups_by_subsets(g: &FiniteGroup) -> usize {
    let n = g.order();
    (0u32..1 << (n - 1))
        .filter(|bits| {
            let set: Vec<usize> = std::iter::once(0).chain((1..n).filter(|i| bits >> (i - 1) & 1 == 1)).collect();
            set.iter().all(|&a| set.iter().all(|&b| set.contains(&g.mul(a, b))))
        })
        .count()
}

fn normalizer_scan(g: &FiniteGroup, h: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..g.order())
        .filter(|&t| h.iter().map(|&x| g.mul(g.mul(g.inv(t), x), t)).collect::<BTreeSet<_>>() == *h)
        .collect()
}

fn to_set(s: &ElemSet) -> BTreeSet<usize> {
    s.iter().collect()
}

fn perm_closure_order(gens: &[Vec<usize>]) -> usize {
    let id: Vec<usize> = (0..gens[0].len()).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.len()
}

#[test]
fn trivial_group_has_one_subgroup() {
    let g = FiniteGroup::from_table("1", &[vec![0]], 512).unwrap();
    assert_eq!(g.order(), 1);
    assert_eq!(g.enumerate_subgroups(512).unwrap().len(), 1);
}

#[test]
fn s4_from_two_generators_matches_orbit_closure() {
    let gens = vec![perm(4, &[&[1, 2]]), perm(4, &[&[1, 2, 3, 4]])];
    let g = FiniteGroup::from_perms("S4", &gens, 4, 512).unwrap();
    assert_eq!(g.order(), perm_closure_order(&gens));
    assert_eq!(g.order(), 24);
}

#[test]
fn non_associative_table_is_rejected() {
    // A Latin square on three symbols that is not a group.
    let t = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
    assert!(FiniteGroup::from_table("bad", &t, 512).is_err());
}

#[test]
fn subgroup_counts_match_closure_oracles() {
    assert_eq!(klein4().enumerate_subgroups(512).unwrap().len(), 5);
    for g in [klein4(), dihedral8(), alternating4(), cyclic(6)] {
        assert_eq!(g.enumerate_subgroups(512).unwrap().len(), subgroups_by_subsets(&g), "{}", g.name());
    }
    let s4 = symmetric(4);
    let lib: HashSet<BTreeSet<usize>> = s4.enumerate_subgroups(512).unwrap().iter().map(|h| to_set(&h.members)).collect();
    assert_eq!(lib.len(), 30);
    assert_eq!(lib, subgroups_by_pairs(&s4));
}

#[test]
fn subgroup_list_is_ordered_by_order_then_mask() {
    let subs = symmetric(4).enumerate_subgroups(512).unwrap();
    assert!(subs.windows(2).all(|w| (w[0].order, w[0].members) < (w[1].order, w[1].members)));
}

#[test]
fn sylow_subgroups_of_s4() {
    let g = symmetric(4);
    let subs = g.enumerate_subgroups(512).unwrap();
    for (p, order, count) in [(2, 8, 3), (3, 3, 4)] {
        let oracle: BTreeSet<BTreeSet<usize>> =
            subs.iter().filter(|h| h.order == order).map(|h| to_set(&h.members)).collect();
        let lib: BTreeSet<BTreeSet<usize>> = g.sylow(p).iter().map(|h| to_set(&h.members)).collect();
        assert_eq!(lib, oracle);
        assert_eq!(lib.len(), count);
    }
    let c3 = cyclic(3);
    assert_eq!(c3.sylow(2).len(), 1);
    assert_eq!(c3.sylow(2)[0].order, 1);
}

#[test]
fn normalizer_of_four_cycle() {
    let g = symmetric(4);
    let c = g.generate(&ElemSet::singleton(g.find_perm(&perm(4, &[&[1, 2, 3, 4]])).unwrap()));
    let n = g.normalizer(&c);
    assert_eq!(to_set(&n), normalizer_scan(&g, &to_set(&c)));
    assert_eq!(n.len(), 8);
    assert_eq!(g.normalizer(&g.all()), g.all());
    let a = klein4();
    let h = a.generate(&ElemSet::singleton(1));
    assert_eq!(a.centralizer(&h), a.all());
}

#[test]
fn cores_match_intersection_oracles() {
    for (g, p, op, opp) in [(symmetric(4), 2, 4, 1), (symmetric(3), 3, 3, 1), (dihedral8(), 2, 8, 1), (symmetric(3), 2, 1, 3)] {
        let sylows = g.sylow(p);
        let inter = sylows.iter().fold(g.all(), |acc, s| acc.intersection(&s.members));
        assert_eq!(g.p_core(p), inter, "{} p={p}", g.name());
        assert_eq!(g.p_core(p).len(), op);
        // Largest normal p'-subgroup by scanning normal subgroups.
        let oracle = g
            .enumerate_subgroups(512)
            .unwrap()
            .into_iter()
            .filter(|h| h.order % p != 0 && g.is_normal_in(&g.all(), &h.members))
            .max_by_key(|h| h.order)
            .unwrap();
        assert_eq!(g.p_prime_core(p), oracle.members);
        assert_eq!(oracle.order, opp);
    }
}

#[test]
fn characteristic_p_examples() {
    assert!(is_characteristic_p(&dihedral8(), 2));
    assert!(is_characteristic_p(&symmetric(4), 2));
    assert!(!is_characteristic_p(&symmetric(3), 2));
}

#[test]
fn subnormality_examples() {
    let g = symmetric(4);
    let t = g.generate(&ElemSet::singleton(g.find_perm(&perm(4, &[&[1, 2]])).unwrap()));
    assert!(!g.is_subnormal(&t));
    assert!(g.is_subnormal(&g.p_core(2)));
    assert!(g.is_subnormal(&g.all()));
}

#[test]
fn char_p_equivalence_examples() {
    let s4 = symmetric(4);
    let r = char_p_equiv_group(&s4, &s4.p_core(2), 2).unwrap();
    assert!(r.consistent && r.clauses.iter().all(|c| c.verdict == Verdict::Pass));
    let g = catalog_group("c2xs3");
    let n = g.generate(&ElemSet::from_iter([
        g.find_perm(&perm(5, &[&[3, 4, 5]])).unwrap(),
        g.find_perm(&perm(5, &[&[3, 4]])).unwrap(),
    ]));
    let r = char_p_equiv_group(&g, &n, 2).unwrap();
    assert!(r.consistent && r.clauses.iter().all(|c| c.verdict == Verdict::Fail));
    let d8 = dihedral8();
    let r = char_p_equiv_group(&d8, &d8.all(), 2).unwrap();
    assert!(r.clauses.iter().all(|c| c.verdict == Verdict::Pass));
}

#[test]
fn sylow_product_of_normal_and_arbitrary_subgroup() {
    for name in ["s4", "c2xs3", "sl2-3"] {
        let g = catalog_group(name);
        let s = g.one_sylow(2);
        let subs = g.enumerate_subgroups(512).unwrap();
        for n in subs.iter().filter(|n| g.is_normal_in(&g.all(), &n.members)) {
            for h in &subs {
                let sh = s.intersection(&h.members);
                if sh.len() != p_part(h.order, 2) {
                    continue;
                }
                let nh = g.generate(&n.members.union(&h.members));
                let prod = g.product_set(&s.intersection(&n.members), &sh);
                assert!(g.is_subgroup(&prod) && prod.len() == p_part(nh.len(), 2), "{name}");
            }
        }
    }
}

#[test]
fn linear_groups_have_expected_sylows() {
    let gl = catalog_group("gl2-3");
    assert_eq!(gl.order(), 48);
    assert_eq!(gl.one_sylow(2).len(), 16);
    let sl = catalog_group("sl2-3");
    assert_eq!(sl.p_core(2).len(), 8);
}

fn small_perm_group() -> impl Strategy<Value = FiniteGroup> {
    (2usize..=5)
        .prop_flat_map(|d| prop::collection::vec(Just((0..d).collect::<Vec<usize>>()).prop_shuffle(), 1..=2))
        .prop_map(|gens| {
            let d = gens[0].len();
            FiniteGroup::from_perms("G", &gens, d, 512).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tables_are_groups(g in small_perm_group(), a in 0usize..120, b in 0usize..120, c in 0usize..120) {
        let n = g.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        prop_assert_eq!(g.mul(0, a), a);
    }

    #[test]
    fn centralizers_are_antitone(g in small_perm_group(), x in 0usize..120, y in 0usize..120) {
        let n = g.order();
        let h = g.generate(&ElemSet::singleton(x % n));
        let k = g.generate(&h.union(&ElemSet::singleton(y % n)));
        prop_assert!(g.centralizer(&k).is_subset(&g.centralizer(&h)));
        prop_assert!(g.centralizer(&h).is_subset(&g.normalizer(&h)));
        prop_assert_eq!(to_set(&g.normalizer(&h)), normalizer_scan(&g, &to_set(&h)));
    }

    #[test]
    fn p_core_is_the_intersection_of_sylows(g in small_perm_group(), p in prop::sample::select(vec![2usize, 3, 5])) {
        let inter = g.sylow(p).iter().fold(g.all(), |acc, s| acc.intersection(&s.members));
        prop_assert_eq!(g.p_core(p), inter);
    }

    #[test]
    fn char_p_clauses_never_mix(g in small_perm_group(), p in prop::sample::select(vec![2usize, 3])) {
        for n in g.enumerate_subgroups(512).unwrap().iter().filter(|n| g.is_normal_in(&g.all(), &n.members)) {
            let r = char_p_equiv_group(&g, &n.members, p).unwrap();
            prop_assert!(r.consistent, "{}", r.to_json());
        }
    }
}
