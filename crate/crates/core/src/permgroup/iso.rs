//! Isomorphism testing: invariant pruning, then backtracking over images of
//! a small generating set with a Cayley-graph consistency check.

use std::collections::BTreeMap;

use super::{PermutationGroup, ScaleLimit};
use crate::error::Result;
use crate::perm::Permutation;

/// Generator images defining an isomorphism `G -> H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub generators: Vec<Permutation>,
    pub images: Vec<Permutation>,
}

impl Isomorphism {
    /// Re-checks that the generator map extends to a bijective homomorphism.
    pub fn verify(&self, g: &PermutationGroup, h: &PermutationGroup) -> bool {
        if g.order() != h.order() || self.generators.len() != self.images.len() {
            return false;
        }
        let gens: Option<Vec<usize>> = self.generators.iter().map(|x| g.index_of(x)).collect();
        let imgs: Option<Vec<usize>> = self.images.iter().map(|y| h.index_of(y)).collect();
        let (Some(gens), Some(imgs)) = (gens, imgs) else {
            return false;
        };
        match extend_map(g, h, &gens, &imgs) {
            Some(covered) => covered == g.elements().len(),
            None => false,
        }
    }
}

/// Cheap isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInvariants {
    pub order: u64,
    /// element order -> count
    pub order_histogram: BTreeMap<u64, u64>,
    pub center_order: u64,
    pub abelianization_order: u64,
    /// sorted (element order, class size) pairs
    pub class_profile: Vec<(u64, u64)>,
}

pub fn group_invariants(g: &PermutationGroup, limit: ScaleLimit) -> Result<GroupInvariants> {
    limit.check("isomorphism test", g.order())?;
    let mut order_histogram = BTreeMap::new();
    for i in 0..g.elements().len() {
        *order_histogram.entry(g.element_order(i)).or_insert(0) += 1;
    }
    let mut class_profile: Vec<(u64, u64)> = g
        .conjugacy_classes()
        .classes()
        .iter()
        .map(|c| (c.element_order, c.size))
        .collect();
    class_profile.sort_unstable();
    Ok(GroupInvariants {
        order: g.order(),
        order_histogram,
        center_order: g.center().count_ones(..) as u64,
        abelianization_order: g.order() / g.derived_subgroup().count_ones(..) as u64,
        class_profile,
    })
}

/// Returns an isomorphism `G -> H` if one exists.
pub fn is_isomorphic(
    g: &PermutationGroup,
    h: &PermutationGroup,
    limit: ScaleLimit,
) -> Result<Option<Isomorphism>> {
    if g.order() != h.order() {
        return Ok(None);
    }
    if group_invariants(g, limit)? != group_invariants(h, limit)? {
        return Ok(None);
    }
    let gens = small_generating_set(g);
    let signature = |grp: &PermutationGroup, x: usize| {
        let cc = grp.conjugacy_classes();
        (grp.element_order(x), cc.classes()[cc.class_index(x)].size)
    };
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            let sig = signature(g, x);
            (0..h.elements().len()).filter(|&y| signature(h, y) == sig).collect()
        })
        .collect();

    let mut images = Vec::with_capacity(gens.len());
    if search(g, h, &gens, &candidates, &mut images) {
        Ok(Some(Isomorphism {
            generators: gens.iter().map(|&x| g.element(x).clone()).collect(),
            images: images.iter().map(|&y| h.element(y).clone()).collect(),
        }))
    } else {
        Ok(None)
    }
}

fn search(
    g: &PermutationGroup,
    h: &PermutationGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        return true;
    }
    for &y in &candidates[depth] {
        images.push(y);
        if extend_map(g, h, &gens[..=depth], images).is_some() && search(g, h, gens, candidates, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// Extends `gens[i] -> imgs[i]` along the Cayley graph of `<gens>`.
/// Returns the size of `<gens>` when the map is a well-defined injective
/// homomorphism on it, `None` otherwise.
fn extend_map(g: &PermutationGroup, h: &PermutationGroup, gens: &[usize], imgs: &[usize]) -> Option<usize> {
    let n = g.elements().len();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; h.elements().len()];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = map[x] as usize;
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let fy = h.mul(fx, t);
            if map[y] == u32::MAX {
                if used[fy] {
                    return None;
                }
                used[fy] = true;
                map[y] = fy as u32;
                queue.push(y);
            } else if map[y] as usize != fy {
                return None;
            }
        }
    }
    Some(queue.len())
}

/// Greedy generating set preferring elements of large order.
fn small_generating_set(g: &PermutationGroup) -> Vec<usize> {
    let n = g.elements().len();
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    let mut gens = Vec::new();
    let mut current = g.closure(&[]);
    for x in order {
        if current.count_ones(..) == n {
            break;
        }
        if !current.contains(x) {
            gens.push(x);
            current = g.closure(&gens);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::build_group;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn cyclic_vs_klein() {
        let c4 = build_group(4, vec![p(4, "(1,2,3,4)")]).unwrap();
        let v4 = build_group(4, vec![p(4, "(1,2)"), p(4, "(3,4)")]).unwrap();
        assert!(is_isomorphic(&c4, &v4, ScaleLimit::default()).unwrap().is_none());
        let iso = is_isomorphic(&c4, &c4, ScaleLimit::default()).unwrap().unwrap();
        assert!(iso.verify(&c4, &c4));
    }

    #[test]
    fn two_realizations_of_d8() {
        let d8a = build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,3)")]).unwrap();
        // regular action on 8 points
        let d8b = build_group(8, vec![p(8, "(1,2,3,4)(5,6,7,8)"), p(8, "(1,5)(2,8)(3,7)(4,6)")]).unwrap();
        assert_eq!(d8b.order(), 8);
        let iso = is_isomorphic(&d8a, &d8b, ScaleLimit::default()).unwrap().unwrap();
        assert!(iso.verify(&d8a, &d8b));
        let back = is_isomorphic(&d8b, &d8a, ScaleLimit::default()).unwrap().unwrap();
        assert!(back.verify(&d8b, &d8a));
        let q8 = build_group(8, vec![p(8, "(1,2,3,4)(5,6,7,8)"), p(8, "(1,5,3,7)(2,8,4,6)")]).unwrap();
        assert_eq!(q8.order(), 8);
        assert!(is_isomorphic(&d8a, &q8, ScaleLimit::default()).unwrap().is_none());
    }

    #[test]
    fn tampered_witness_fails() {
        let c4 = build_group(4, vec![p(4, "(1,2,3,4)")]).unwrap();
        let bad = Isomorphism {
            generators: vec![p(4, "(1,2,3,4)")],
            images: vec![p(4, "(1,3)(2,4)")],
        };
        assert!(!bad.verify(&c4, &c4));
    }
}
