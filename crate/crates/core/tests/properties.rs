//! Property tests over random permutation groups of degree at most 5 and
//! random abstract inputs.

use std::collections::BTreeSet;

use isocert_core::certifier::{certify, verify_certificate, CertifyOptions, Verdict};
use isocert_core::chartab::{character_table, fixed_subspace_dim, inner_product, restrict, ClassFunction};
use isocert_core::cyclotomic::Cyclotomic;
use isocert_core::effective::{
    fusion_certificate, is_p_effective, search_p_effective, EffectiveContext, EffectiveSearchSpec, SearchOutcome,
};
use isocert_core::family::{assemble_family, compatible_family, subgroup_character, verify_compatibility};
use isocert_core::permgroup::{is_isomorphic, ScaleLimit};
use isocert_core::pstructure::{
    elementary_abelians, is_qd_free, qd_group, qd_order, rank_profile, sylow_subgroup, PrimeDecomposition,
};
use isocert_core::spheremodel::{
    dimension_function, euler_fixed_check, join_exponent, join_sigma, verify_rank_one_isotropy, AbelianGroup,
};
use isocert_core::{Permutation, PermutationGroup, SubgroupHandle};
use num_rational::Rational64;
use proptest::prelude::*;

fn permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn group() -> impl Strategy<Value = PermutationGroup> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(permutation(n), 1..=3)))
        .prop_map(|(n, gens)| PermutationGroup::new(n, gens).unwrap())
}

/// A group with two element indices for building subgroups.
fn group_with_elements() -> impl Strategy<Value = (PermutationGroup, usize, usize)> {
    group().prop_flat_map(|g| {
        let n = g.order() as usize;
        (Just(g), 0..n, 0..n)
    })
}

fn brute_closure(g: &PermutationGroup) -> usize {
    let mut seen = BTreeSet::new();
    seen.insert(g.identity());
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for s in g.generators() {
            let y = s.compose(&x);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    (1u32..=12).prop_flat_map(|e| {
        prop::collection::vec((0u64..e as u64, -4i64..=4, 1i64..=3), 0..4).prop_map(move |terms| {
            Cyclotomic::from_powers(e, terms.into_iter().map(|(k, n, d)| (k, Rational64::new(n, d))))
        })
    })
}

fn effective_characters(g: &PermutationGroup) -> Vec<(EffectiveContext, ClassFunction)> {
    PrimeDecomposition::of(g.order())
        .prime_list()
        .into_iter()
        .filter_map(|p| {
            let ctx = EffectiveContext::new(EffectiveSearchSpec::new(g, p, None).ok()?, ScaleLimit::default()).ok()?;
            match search_p_effective(&ctx).ok()? {
                SearchOutcome::Found(f) => Some((ctx, f.character)),
                SearchOutcome::BoundReached { .. } => None,
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn chain_order_matches_closure(g in group()) {
        prop_assert_eq!(g.order() as usize, brute_closure(&g));
        prop_assert_eq!(g.elements().len() as u64, g.order());
    }

    #[test]
    fn conjugacy_classes_partition(g in group()) {
        let classes = g.conjugacy_classes();
        let sizes = classes.sizes();
        prop_assert_eq!(sizes.iter().sum::<u64>(), g.order());
        prop_assert!(sizes.iter().all(|s| g.order() % s == 0));
        for i in 0..g.elements().len() {
            for s in g.generator_indices() {
                prop_assert_eq!(classes.class_index(g.conj(s, i)), classes.class_index(i));
            }
        }
    }

    #[test]
    fn centralizer_inside_normalizer((g, a, b) in group_with_elements()) {
        let h = SubgroupHandle::new(&g, vec![g.element(a).clone(), g.element(b).clone()]).unwrap();
        let c = h.centralizer();
        let n = h.normalizer();
        prop_assert!(h.is_subgroup_of(&n));
        prop_assert!(c.is_subgroup_of(&n));
        let z = SubgroupHandle::from_members(&g, g.center());
        prop_assert!(z.is_subgroup_of(&c));
    }

    #[test]
    fn sylow_orders(g in group()) {
        let d = PrimeDecomposition::of(g.order());
        for p in d.prime_list() {
            let s = sylow_subgroup(&g, p).unwrap();
            prop_assert_eq!(s.order() * (g.order() / d.p_part(p)), g.order());
            prop_assert_eq!(s.order(), d.p_part(p));
        }
    }

    #[test]
    fn rank_monotone_under_subgroups((g, a, b) in group_with_elements()) {
        let h = SubgroupHandle::new(&g, vec![g.element(a).clone(), g.element(b).clone()]).unwrap();
        let rg = rank_profile(&g).unwrap();
        let rh = rank_profile(h.group()).unwrap();
        for r in &rh.per_prime {
            prop_assert!(r.rank <= rg.rank_at(r.p));
        }
    }

    #[test]
    fn qd_order_pruning_is_sound(g in group()) {
        let report = is_qd_free(&g, ScaleLimit::default()).unwrap();
        // Degree at most 5 means |G| <= 120 < |Qd(3)| = 216.
        prop_assert!(qd_order(3) > g.order());
        prop_assert!(report.free);
        prop_assert!(report.per_prime.iter().all(|(_, s)| s.label() == "pruned-by-order"));
    }

    #[test]
    fn character_table_invariants(g in group()) {
        let t = character_table(&g, ScaleLimit::default()).unwrap();
        prop_assert!(t.degree_sum_holds());
        prop_assert!(t.rows_orthonormal());
        prop_assert!(t.columns_orthogonal());
        prop_assert!(t.values_integral());
        prop_assert!(t.irreducibles().iter().all(|chi| chi.degree().is_some_and(|d| d > 0)));
        let e = t.exponent() as u64;
        for a in (1..e).filter(|&a| num_integer::gcd(a, e) == 1) {
            for chi in t.irreducibles() {
                let image = chi.galois(a);
                prop_assert!(t.irreducibles().contains(&image));
            }
        }
    }

    #[test]
    fn restriction_and_fixed_dimensions((g, a, b) in group_with_elements()) {
        let t = character_table(&g, ScaleLimit::default()).unwrap();
        let h = SubgroupHandle::new(&g, vec![g.element(a).clone()]).unwrap();
        let k = SubgroupHandle::new(&g, vec![g.element(a).clone(), g.element(b).clone()]).unwrap();
        for chi in t.irreducibles() {
            let res = restrict(chi, &h).unwrap();
            let one = ClassFunction::trivial(h.group());
            let via_product = inner_product(&res, &one).unwrap();
            let mut sum = Cyclotomic::zero(1);
            for x in h.group().elements() {
                sum = &sum + chi.value(x).unwrap();
            }
            let average = sum.scale(Rational64::new(1, h.order() as i64));
            prop_assert_eq!(average.to_rational(), Some(via_product));
            prop_assert!(fixed_subspace_dim(chi, &h).unwrap() >= fixed_subspace_dim(chi, &k).unwrap());
        }
    }

    #[test]
    fn effective_search_properties(g in group()) {
        for (ctx, chi) in effective_characters(&g) {
            prop_assert!(is_p_effective(&chi, &ctx).unwrap().is_effective());
            prop_assert!(fusion_certificate(&chi, &g));
            for k in 1..=3 {
                prop_assert!(is_p_effective(&chi.scale(k), &ctx).unwrap().is_effective());
            }
            let doubled = chi.add(&chi).unwrap();
            prop_assert!(is_p_effective(&doubled, &ctx).unwrap().is_effective());

            let again = search_p_effective(&ctx).unwrap();
            prop_assert_eq!(again.found().map(|f| &f.character), Some(&chi));

            // Against a conjugate Sylow subgroup.
            let x = g.elements().last().unwrap();
            let moved = ctx.sylow().conjugate_by(x);
            let spec = EffectiveSearchSpec::new(&g, ctx.spec.p, Some(ctx.spec.bound)).unwrap();
            let ctx2 = EffectiveContext::with_sylow(spec, moved, ScaleLimit::default()).unwrap();
            let other = search_p_effective(&ctx2).unwrap();
            prop_assert_eq!(other.found().map(|f| f.dimension), chi.degree().map(|d| d as u64));
        }
    }

    #[test]
    fn family_properties(g in group()) {
        let found = effective_characters(&g);
        prop_assume!(found.len() == PrimeDecomposition::of(g.order()).prime_list().len() && !found.is_empty());
        let inputs: Vec<_> = found.iter().map(|(c, chi)| (c.sylow().clone(), chi.clone())).collect();
        let base = assemble_family(&g, &inputs).unwrap();
        let doubled = base.scaled(2);
        for (a, b) in base.entries().iter().zip(doubled.entries()) {
            prop_assert_eq!(&a.character.scale(2), &b.character);
        }
        let cf = compatible_family(&base, ScaleLimit::default()).unwrap();
        prop_assert!(verify_compatibility(&cf).unwrap().is_none());
        for t in cf.assignments() {
            let table = character_table(t.subgroup.group(), ScaleLimit::default()).unwrap();
            let mults = table.decompose(&t.character).unwrap();
            prop_assert!(mults.iter().all(|m| m.is_integer() && *m.numer() >= 0));
        }
        // Restriction coherence inside each Sylow subgroup.
        for e in base.entries() {
            for x in e.sylow.group().elements() {
                let h = SubgroupHandle::new(&g, vec![x.clone()]).unwrap();
                let vh = subgroup_character(&base, &h).unwrap();
                for y in h.group().elements() {
                    prop_assert_eq!(vh.character.value(y).unwrap(), e.character.value(y).unwrap());
                }
            }
        }
        for k in 1..=2 {
            let df = dimension_function(&cf, k).unwrap();
            prop_assert!(df.is_monotone());
            prop_assert!(euler_fixed_check(&cf, k).unwrap().holds);
        }
        // Rank one isotropy iff every rank two elementary abelian subgroup fixes nothing.
        let mut direct = true;
        for p in PrimeDecomposition::of(g.order()).prime_list() {
            for e in elementary_abelians(&g, p, ScaleLimit::default()).unwrap() {
                if e.rank >= 2 {
                    let v = cf.character_of(&e.subgroup).unwrap();
                    direct &= fixed_subspace_dim(&v.character, &SubgroupHandle::whole(e.subgroup.group())).unwrap() == 0;
                }
            }
        }
        prop_assert_eq!(verify_rank_one_isotropy(&cf).unwrap().is_none(), direct);
    }

    #[test]
    fn certify_is_deterministic_and_verifies(g in group()) {
        let a = certify(&g, None, &CertifyOptions::default()).unwrap();
        let b = certify(&g, None, &CertifyOptions::default()).unwrap();
        prop_assert_eq!(a.to_canonical_string(), b.to_canonical_string());
        prop_assert!(verify_certificate(&a, &g).unwrap());
        if a.verdict == Verdict::Certified {
            prop_assert_eq!(a.rank.rank, 2);
            prop_assert_eq!(a.qd_free, Some(true));
        }
        prop_assert!(a.verdict != Verdict::NotQdFree);
    }

    #[test]
    fn cyclotomic_field_laws(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        let e = a.conductor() as u64 * b.conductor() as u64;
        for k in (1..e.max(2)).filter(|&k| num_integer::gcd(k, e) == 1).take(3) {
            prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
            prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
        }
        let lifted = a.lift(a.conductor() * 2);
        prop_assert_eq!(&lifted, &a);
        let parsed = Cyclotomic::parse_with_conductor(&a.to_string(), a.conductor()).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn permutation_round_trip(p in permutation(7), q in permutation(7), r in permutation(7)) {
        prop_assert_eq!(Permutation::parse_cycles(7, &p.to_string()).unwrap(), p.clone());
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
        prop_assert!(p.pow(p.order()).is_identity());
    }

    #[test]
    fn join_commutes_and_associates(
        n in 1u64..=12,
        (x, y, z) in (0i64..12, 0i64..12, 0i64..12),
        (m1, m2, m3) in (1u64..=10, 1u64..=10, 1u64..=10),
    ) {
        let grp = AbelianGroup::cyclic(n).unwrap();
        let (a, b, c) = (grp.element(&[x]).unwrap(), grp.element(&[y]).unwrap(), grp.element(&[z]).unwrap());
        prop_assert_eq!(join_sigma(&a, m1, &b, m2).unwrap(), join_sigma(&b, m2, &a, m1).unwrap());
        let (e1, e2, e3) = (2 * m1, 2 * m2, 2 * m3);
        let (ab, mab) = join_sigma(&a, e1, &b, e2).unwrap();
        let (bc, mbc) = join_sigma(&b, e2, &c, e3).unwrap();
        prop_assert_eq!(join_sigma(&ab, mab, &c, e3).unwrap(), join_sigma(&a, e1, &bc, mbc).unwrap());
    }
}

#[test]
fn join_exponent_is_exact_order() {
    for o in 1..=16u64 {
        for m in [2u64, 4, 8] {
            let l = join_exponent(o, m).unwrap().l;
            let z = AbelianGroup::cyclic(o).unwrap();
            let s = z.element(&[1]).unwrap();
            assert!(s.scale(l as i64).is_zero());
            assert!((1..l).all(|j| !s.scale(j as i64).is_zero()));
        }
    }
}

#[test]
fn qd_group_properties() {
    let qd = qd_group(3, ScaleLimit::default()).unwrap();
    assert_eq!(qd.order(), 27 * 8);
    assert_eq!(rank_profile(&qd).unwrap().rank_at(3), 2);
    let report = is_qd_free(&qd, ScaleLimit::default()).unwrap();
    assert!(!report.free);
    let w = report.witness().unwrap();
    assert!(is_isomorphic(&w.section, &qd, ScaleLimit::default()).unwrap().is_some());
}
