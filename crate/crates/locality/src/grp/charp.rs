use super::FiniteGroup;
use crate::bits::ElemSet;
use crate::error::{Error, Result};
use crate::report::{Report, Timer};
use serde_json::json;

/// `C_G(O_p(G)) ≤ O_p(G)`.
pub fn is_characteristic_p(g: &FiniteGroup, p: usize) -> bool {
    let op = g.p_core(p);
    g.centralizer(&op).is_subset(&op)
}

fn subgroup_char_p(g: &FiniteGroup, h: &ElemSet, p: usize) -> bool {
    let (sub, _) = g.subgroup_as_group(h, "sub").expect("caller passes a subgroup");
    is_characteristic_p(&sub, p)
}

/// Evaluate the three equivalent characteristic-p conditions for a normal
/// subgroup `n` of `g`, each on its own, and record whether they agree.
pub fn char_p_equiv_group(g: &FiniteGroup, n: &ElemSet, p: usize) -> Result<Report> {
    if !g.is_subgroup(n) || !g.is_normal_in(&g.all(), n) {
        return Err(Error::NotNormal(format!("{n:?}")));
    }
    let timer = Timer::start();
    let mut r = Report::new("char-p-normal-subgroup");
    let (nsub, back) = g.subgroup_as_group(n, "N")?;
    let t_local = nsub.one_sylow(p);
    let t = ElemSet::from_iter(t_local.iter().map(|i| back[i]));

    let n_char = is_characteristic_p(&nsub, p);
    let c1 = is_characteristic_p(g, p);
    let c2 = n_char && subgroup_char_p(g, &g.normalizer(&t), p);
    let c3 = n_char && subgroup_char_p(g, &g.centralizer(n), p);
    r.value("(i) G has characteristic p", c1);
    r.value("(ii) N and N_G(T) have characteristic p", c2);
    r.value("(iii) N and C_G(N) have characteristic p", c3);
    r.consistent = c1 == c2 && c2 == c3;
    if !r.consistent {
        r.push("agreement", crate::report::Verdict::Fail, json!({ "values": [c1, c2, c3] }));
    }
    Ok(timer.finish(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::named::*;
    use crate::report::Verdict;

    #[test]
    fn small_cases() {
        assert!(is_characteristic_p(&dihedral8(), 2));
        assert!(is_characteristic_p(&symmetric(4), 2));
        assert!(!is_characteristic_p(&symmetric(3), 2));
    }

    #[test]
    fn s4_over_its_2_core() {
        let g = symmetric(4);
        let r = char_p_equiv_group(&g, &g.p_core(2), 2).unwrap();
        assert!(r.consistent);
        assert!(r.clauses.iter().all(|c| c.verdict == Verdict::Pass));
    }

    #[test]
    fn non_normal_is_rejected() {
        let g = symmetric(3);
        let t = g.find_perm(&perm(3, &[&[1, 2]])).unwrap();
        let h = g.generate(&ElemSet::singleton(t));
        assert!(char_p_equiv_group(&g, &h, 2).is_err());
    }
}
