use super::{PermutationGroup, SubgroupHandle};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `N_G(K)/K`, realized by the action of `N_G(K)` on the left cosets of `K`.
///
/// For trivial `K` the normalizer itself is returned.
pub fn section_group(g: &PermutationGroup, k: &SubgroupHandle) -> Result<PermutationGroup> {
    if !k.ambient().same_group(g) {
        return Err(Error::Mismatch("subgroup does not belong to this group".into()));
    }
    let n = k.normalizer();
    if k.order() == 1 {
        return Ok(n.group().clone());
    }
    let target = n.order() / k.order();

    // Label each coset xK by its smallest member index.
    let size = g.elements().len();
    let mut label = vec![usize::MAX; size];
    let mut cosets: Vec<usize> = Vec::new();
    for x in n.members().ones() {
        if label[x] != usize::MAX {
            continue;
        }
        let id = cosets.len();
        cosets.push(x);
        for h in k.members().ones() {
            label[g.mul(x, h)] = id;
        }
    }

    let action = |y: usize| -> Permutation {
        let images = cosets.iter().map(|&x| label[g.mul(y, x)] as u32).collect();
        Permutation::from_images(images).expect("coset action is a bijection")
    };

    let gens: Vec<Permutation> = n
        .generators()
        .iter()
        .map(|s| action(g.index_of(s).unwrap()))
        .collect();
    let image = PermutationGroup::new(cosets.len(), gens)?;
    // K is normal in N_G(K), so the kernel of the coset action is exactly K.
    debug_assert_eq!(image.order(), target);
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{build_group, is_isomorphic, ScaleLimit};

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn sections() {
        let s4 = build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,2)")]).unwrap();
        let v4 = SubgroupHandle::new(&s4, vec![p(4, "(1,2)(3,4)"), p(4, "(1,3)(2,4)")]).unwrap();
        let s = section_group(&s4, &v4).unwrap();
        assert_eq!(s.order(), 6);
        let s3 = build_group(3, vec![p(3, "(1,2,3)"), p(3, "(1,2)")]).unwrap();
        assert!(is_isomorphic(&s, &s3, ScaleLimit::default()).unwrap().is_some());

        let a4 = build_group(4, vec![p(4, "(1,2,3)"), p(4, "(1,2)(3,4)")]).unwrap();
        let c3 = SubgroupHandle::new(&a4, vec![p(4, "(1,2,3)")]).unwrap();
        assert_eq!(section_group(&a4, &c3).unwrap().order(), 1);

        let t = SubgroupHandle::trivial(&a4);
        let whole = section_group(&a4, &t).unwrap();
        assert!(whole.same_group(&a4));
    }

    #[test]
    fn section_by_center() {
        let d8 = build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,3)")]).unwrap();
        let z = SubgroupHandle::new(&d8, vec![p(4, "(1,3)(2,4)")]).unwrap();
        let q = section_group(&d8, &z).unwrap();
        assert_eq!(q.order(), 4);
        let v4 = build_group(4, vec![p(4, "(1,2)"), p(4, "(3,4)")]).unwrap();
        assert!(is_isomorphic(&q, &v4, ScaleLimit::default()).unwrap().is_some());
    }
}
