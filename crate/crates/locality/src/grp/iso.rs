use super::FiniteGroup;
use crate::bits::ElemSet;

/// A small generating set, chosen greedily.
fn generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut h = g.trivial();
    // Prefer elements of large order: fewer generators, less branching.
    let mut order: Vec<usize> = (1..g.order()).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(g.elem_order(x)));
    for x in order {
        if !h.contains(x) {
            h = g.join_elem(&h, x);
            gens.push(x);
        }
        if h.len() == g.order() {
            break;
        }
    }
    gens
}

/// Extend an assignment on generators along the Cayley graph; `None` if the
/// assignment is not a homomorphism.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[0] = 0;
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let iy = h.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = iy;
                stack.push(y);
            } else if map[y] != iy {
                return None;
            }
        }
    }
    Some(map)
}

/// An isomorphism `g → h` as an image table, found by exhaustive matching of
/// generator images.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let gens = generators(g);
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..h.order()).filter(|&t| h.elem_order(t) == g.elem_order(s)).collect())
        .collect();
    let mut imgs = vec![0usize; gens.len()];
    fn rec(
        i: usize,
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[usize],
        cands: &[Vec<usize>],
        imgs: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if i == gens.len() {
            let map = extend(g, h, gens, imgs)?;
            let image = ElemSet::from_iter(map.iter().copied());
            return (image.len() == h.order()).then_some(map);
        }
        for &t in &cands[i] {
            imgs[i] = t;
            if let Some(m) = rec(i + 1, g, h, gens, cands, imgs) {
                return Some(m);
            }
        }
        None
    }
    rec(0, g, h, &gens, &cands, &mut imgs)
}

pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    find_isomorphism(g, h).is_some()
}
