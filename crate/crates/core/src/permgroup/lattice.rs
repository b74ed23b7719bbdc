//! Subgroups up to conjugacy by cyclic extension.
//!
//! Every subgroup is reached from the trivial group by repeatedly adjoining
//! an element of prime-power order, so extending one representative per
//! class by every such element enumerates all classes: if `K = x H x^-1`
//! then `<K, g> = x <H, x^-1 g x> x^-1`.

use std::collections::HashMap;

use num_integer::Integer;

use super::{prime_power_base, ElementSet, PermutationGroup, ScaleLimit, SubgroupHandle};
use crate::error::Result;

struct Class {
    members: ElementSet,
    key: Vec<usize>,
    gens: Vec<usize>,
}

/// One representative per conjugacy class of subgroups, ordered by
/// (order, sorted member indices). Each representative is the conjugate
/// whose sorted member indices are lexicographically smallest.
pub fn subgroups_up_to_conjugacy(g: &PermutationGroup, limit: ScaleLimit) -> Result<Vec<SubgroupHandle>> {
    subgroups_up_to_conjugacy_where(g, limit, |_| true)
}

/// As [`subgroups_up_to_conjugacy`], restricted to subgroups whose order
/// satisfies `keep`. The predicate must hold for every divisor of an order
/// it accepts (e.g. "coprime to p" or "a power of p"); otherwise classes
/// reachable only through rejected subgroups are missed.
pub fn subgroups_up_to_conjugacy_where(
    g: &PermutationGroup,
    limit: ScaleLimit,
    keep: impl Fn(u64) -> bool,
) -> Result<Vec<SubgroupHandle>> {
    limit.check("subgroup enumeration", g.order())?;
    let n = g.elements().len();
    let candidates: Vec<usize> = (1..n)
        .filter(|&x| prime_power_base(g.element_order(x)).is_some())
        .collect();

    let mut seen: HashMap<ElementSet, usize> = HashMap::new();
    let mut classes: Vec<Class> = Vec::new();
    register(g, &mut seen, &mut classes, g.closure(&[]), Vec::new());

    let mut next = 0;
    while next < classes.len() {
        let members = classes[next].members.clone();
        let gens = classes[next].gens.clone();
        next += 1;
        let mut tried = ElementSet::with_capacity(n);
        for &x in &candidates {
            if members.contains(x) || tried.contains(x) {
                continue;
            }
            let ord = g.element_order(x);
            for j in 1..ord {
                if j.gcd(&ord) == 1 {
                    tried.insert(g.pow_index(x, j));
                }
            }
            let mut ext = gens.clone();
            ext.push(x);
            let k = g.closure(&ext);
            if !keep(k.count_ones(..) as u64) || seen.contains_key(&k) {
                continue;
            }
            register(g, &mut seen, &mut classes, k, ext);
        }
    }

    classes.sort_by(|a, b| (a.key.len(), &a.key).cmp(&(b.key.len(), &b.key)));
    Ok(classes
        .into_iter()
        .map(|c| SubgroupHandle::from_members(g, c.members))
        .collect())
}

fn register(
    g: &PermutationGroup,
    seen: &mut HashMap<ElementSet, usize>,
    classes: &mut Vec<Class>,
    members: ElementSet,
    gens: Vec<usize>,
) {
    let id = classes.len();
    let n = g.elements().len();
    let mut best: Option<(Vec<usize>, ElementSet, usize)> = None;
    for x in 0..n {
        let mut conj = ElementSet::with_capacity(n);
        for h in members.ones() {
            conj.insert(g.conj(x, h));
        }
        if seen.contains_key(&conj) {
            continue;
        }
        let key: Vec<usize> = conj.ones().collect();
        if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
            best = Some((key, conj.clone(), x));
        }
        seen.insert(conj, id);
    }
    let (key, rep, x) = best.expect("subgroup is new");
    let gens = gens.into_iter().map(|s| g.conj(x, s)).collect();
    classes.push(Class {
        members: rep,
        key,
        gens,
    });
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::perm::Permutation;
    use crate::permgroup::build_group;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    /// All subgroups by naive joins over permutations, with no conjugacy
    /// reduction and no multiplication table.
    fn all_subgroups_naive(g: &PermutationGroup) -> HashSet<Vec<Permutation>> {
        fn close(mut set: Vec<Permutation>, x: &Permutation) -> Vec<Permutation> {
            let mut gens: Vec<Permutation> = set.clone();
            gens.push(x.clone());
            let mut frontier = set.clone();
            frontier.push(x.clone());
            let mut all: HashSet<Permutation> = set.drain(..).collect();
            all.insert(x.clone());
            while let Some(a) = frontier.pop() {
                for b in &gens {
                    let c = a.compose(b);
                    if all.insert(c.clone()) {
                        frontier.push(c);
                    }
                }
            }
            let mut v: Vec<Permutation> = all.into_iter().collect();
            v.sort();
            v
        }
        let elements: Vec<Permutation> = g.chain().elements();
        let trivial = vec![g.identity()];
        let mut found: HashSet<Vec<Permutation>> = HashSet::new();
        found.insert(trivial.clone());
        let mut stack = vec![trivial];
        while let Some(h) = stack.pop() {
            for x in &elements {
                if h.binary_search(x).is_ok() {
                    continue;
                }
                let k = close(h.clone(), x);
                if found.insert(k.clone()) {
                    stack.push(k);
                }
            }
        }
        found
    }

    fn expanded_count(g: &PermutationGroup) -> (usize, u64) {
        let classes = subgroups_up_to_conjugacy(g, ScaleLimit::default()).unwrap();
        let total = classes.iter().map(|h| h.conjugacy_class_size()).sum();
        (classes.len(), total)
    }

    #[test]
    fn small_lattices_match_naive_enumeration() {
        let cases = [
            (build_group(3, vec![p(3, "(1,2,3)")]).unwrap(), 2),
            (build_group(4, vec![p(4, "(1,2,3)"), p(4, "(1,2)(3,4)")]).unwrap(), 5),
            (build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,3)")]).unwrap(), 8),
            (build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,2)")]).unwrap(), 11),
        ];
        for (g, class_count) in cases {
            let (classes, total) = expanded_count(&g);
            assert_eq!(classes, class_count, "{g:?}");
            assert_eq!(total as usize, all_subgroups_naive(&g).len(), "{g:?}");
        }
    }

    #[test]
    fn ordering_and_representatives() {
        let s4 = build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,2)")]).unwrap();
        let classes = subgroups_up_to_conjugacy(&s4, ScaleLimit::default()).unwrap();
        assert_eq!(classes[0].order(), 1);
        assert_eq!(classes.last().unwrap().order(), 24);
        assert!(classes.windows(2).all(|w| w[0].order() <= w[1].order()));
    }

    #[test]
    fn filtered_enumeration() {
        let s4 = build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,2)")]).unwrap();
        let twos = subgroups_up_to_conjugacy_where(&s4, ScaleLimit::default(), |o| o.is_power_of_two()).unwrap();
        // 1, two classes of C2, C4, two classes of V4, D8
        assert_eq!(twos.len(), 7);
    }

    #[test]
    fn scale_limit() {
        let s4 = build_group(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,2)")]).unwrap();
        assert!(subgroups_up_to_conjugacy(&s4, ScaleLimit(10)).is_err());
    }
}
