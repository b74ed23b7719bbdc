//! Sylow subgroups, elementary abelian subgroups and rank, the groups
//! `Qd(p) = (Z/p)^2 ⋊ SL_2(p)`, and the `p'`-involvement test.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permgroup::{
    affine_special_linear, factorize, is_isomorphic, is_prime, section_group,
    subgroups_up_to_conjugacy_where, Isomorphism, PermutationGroup, ScaleLimit, SubgroupHandle,
};

/// `|G| = prod p^e`, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeDecomposition {
    pub primes: Vec<(u64, u32)>,
}

impl PrimeDecomposition {
    pub fn of(n: u64) -> Self {
        PrimeDecomposition {
            primes: factorize(n),
        }
    }

    pub fn prime_list(&self) -> Vec<u64> {
        self.primes.iter().map(|&(p, _)| p).collect()
    }

    /// Largest power of `p` dividing the decomposed number.
    pub fn p_part(&self, p: u64) -> u64 {
        self.primes
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(1, |&(_, e)| p.pow(e))
    }
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// A Sylow `p`-subgroup, grown from the trivial group by adjoining the first
/// `p`-element (canonical order) of the normalizer lying outside the current
/// `p`-subgroup. Trivial when `p` does not divide `|G|`.
pub fn sylow_subgroup(g: &PermutationGroup, p: u64) -> Result<SubgroupHandle> {
    require_prime(p)?;
    let target = PrimeDecomposition::of(g.order()).p_part(p);
    let n = g.elements().len();
    let mut gens: Vec<usize> = Vec::new();
    let mut members = g.closure(&gens);
    while (members.count_ones(..) as u64) < target {
        let x = (1..n)
            .find(|&x| {
                !members.contains(x)
                    && is_power_of(g.element_order(x), p)
                    && gens.iter().all(|&s| members.contains(g.conj(x, s)))
            })
            .expect("a non-Sylow p-subgroup has a p-element in its normalizer outside it");
        gens.push(x);
        members = g.closure(&gens);
    }
    Ok(SubgroupHandle::from_members(g, members))
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Rank of `H` if it is an elementary abelian `p`-group.
pub fn elementary_abelian_rank(h: &PermutationGroup, p: u64) -> Option<u32> {
    let order = h.order();
    if !is_power_of(order, p) || !h.is_abelian() {
        return None;
    }
    if h.generators().iter().any(|x| !x.pow(p).is_identity()) {
        return None;
    }
    Some(factorize(order).first().map_or(0, |&(_, e)| e))
}

#[derive(Clone, Debug)]
pub struct ElementaryAbelian {
    pub subgroup: SubgroupHandle,
    pub rank: u32,
}

/// Elementary abelian `p`-subgroups of `G` up to `G`-conjugacy, ordered by rank.
pub fn elementary_abelians(g: &PermutationGroup, p: u64, limit: ScaleLimit) -> Result<Vec<ElementaryAbelian>> {
    require_prime(p)?;
    let classes = subgroups_up_to_conjugacy_where(g, limit, |o| is_power_of(o, p))?;
    Ok(classes
        .into_iter()
        .filter_map(|h| {
            elementary_abelian_rank(h.group(), p).map(|rank| ElementaryAbelian { subgroup: h, rank })
        })
        .collect())
}

/// Largest `k` with `(Z/p)^k <= G`, with a witness. The search runs inside a
/// Sylow subgroup, which contains a conjugate of every `p`-subgroup.
pub fn p_rank(g: &PermutationGroup, p: u64) -> Result<(u32, SubgroupHandle)> {
    let sylow = sylow_subgroup(g, p)?;
    let s = sylow.group();
    let order_p: Vec<usize> = (1..s.elements().len())
        .filter(|&x| s.element_order(x) == p)
        .collect();
    let mut best: (u32, Vec<usize>) = (0, Vec::new());
    let mut current = Vec::new();
    rank_dfs(s, &order_p, 0, &mut current, &mut best);
    let witness = SubgroupHandle::new(g, best.1.iter().map(|&x| s.element(x).clone()).collect())?;
    Ok((best.0, witness))
}

fn rank_dfs(s: &PermutationGroup, order_p: &[usize], start: usize, current: &mut Vec<usize>, best: &mut (u32, Vec<usize>)) {
    if current.len() as u32 > best.0 {
        *best = (current.len() as u32, current.clone());
    }
    let span = s.closure(current);
    for (k, &x) in order_p.iter().enumerate().skip(start) {
        if span.contains(x) || current.iter().any(|&y| s.mul(x, y) != s.mul(y, x)) {
            continue;
        }
        current.push(x);
        rank_dfs(s, order_p, k + 1, current, best);
        current.pop();
    }
}

#[derive(Clone, Debug)]
pub struct PrimeRank {
    pub p: u64,
    pub rank: u32,
    pub witness: SubgroupHandle,
}

#[derive(Clone, Debug)]
pub struct RankProfile {
    pub per_prime: Vec<PrimeRank>,
    pub rank: u32,
}

impl RankProfile {
    pub fn rank_at(&self, p: u64) -> u32 {
        self.per_prime.iter().find(|r| r.p == p).map_or(0, |r| r.rank)
    }
}

pub fn rank_profile(g: &PermutationGroup) -> Result<RankProfile> {
    let mut per_prime = Vec::new();
    for p in PrimeDecomposition::of(g.order()).prime_list() {
        let (rank, witness) = p_rank(g, p)?;
        per_prime.push(PrimeRank { p, rank, witness });
    }
    let rank = per_prime.iter().map(|r| r.rank).max().unwrap_or(0);
    Ok(RankProfile { per_prime, rank })
}

/// `p^3 (p^2 - 1)`.
pub fn qd_order(p: u64) -> u64 {
    p * p * p * (p * p - 1)
}

/// `Qd(p)` acting affinely on the `p^2` points of `F_p^2`.
pub fn qd_group(p: u64, limit: ScaleLimit) -> Result<PermutationGroup> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidArgument("Qd(p) is only defined here for odd p".into()));
    }
    limit.check("Qd(p)", qd_order(p))?;
    Ok(affine_special_linear(p))
}

/// Evidence that `Qd(p)` embeds in `N_G(K)/K` for a `p'`-subgroup `K`.
#[derive(Clone, Debug)]
pub struct QdWitness {
    pub p: u64,
    pub k: SubgroupHandle,
    /// `N_G(K)/K` as built by [`section_group`].
    pub section: PermutationGroup,
    /// Generators of the copy of `Qd(p)` inside `section`.
    pub image_generators: Vec<Permutation>,
    /// Isomorphism from [`qd_group`] onto that copy.
    pub isomorphism: Isomorphism,
}

impl QdWitness {
    /// Re-derives the section and re-checks the isomorphism.
    pub fn verify(&self, g: &PermutationGroup, limit: ScaleLimit) -> bool {
        if !self.k.ambient().same_group(g) || self.k.order().is_multiple_of(self.p) {
            return false;
        }
        let Ok(section) = section_group(g, &self.k) else {
            return false;
        };
        if section.degree() != self.section.degree() || !section.same_group(&self.section) {
            return false;
        }
        if self.image_generators.iter().any(|x| x.degree() != section.degree() || !section.contains(x)) {
            return false;
        }
        let Ok(image) = PermutationGroup::new(section.degree(), self.image_generators.clone()) else {
            return false;
        };
        let Ok(qd) = qd_group(self.p, limit) else {
            return false;
        };
        self.isomorphism.verify(&qd, &image)
    }
}

/// Searches `p'`-subgroups `K` (ascending order, canonical within an order)
/// for a section `N_G(K)/K` containing `Qd(p)`.
pub fn p_prime_involves_qd(g: &PermutationGroup, p: u64, limit: ScaleLimit) -> Result<Option<QdWitness>> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidArgument("p'-involvement of Qd(p) needs an odd prime".into()));
    }
    let target = qd_order(p);
    if target > g.order() || !g.order().is_multiple_of(target) {
        return Ok(None);
    }
    let qd = qd_group(p, limit)?;
    let classes = subgroups_up_to_conjugacy_where(g, limit, |o| o % p != 0)?;
    for k in classes {
        let n_order = k.normalizer().order();
        if (n_order / k.order()) % target != 0 {
            continue;
        }
        let section = section_group(g, &k)?;
        let candidates: Vec<PermutationGroup> = if section.order() == target {
            vec![section.clone()]
        } else {
            subgroups_up_to_conjugacy_where(&section, limit, |o| target.is_multiple_of(o))?
                .into_iter()
                .filter(|h| h.order() == target)
                .map(|h| h.group().clone())
                .collect()
        };
        for cand in candidates {
            if let Some(iso) = is_isomorphic(&qd, &cand, limit)? {
                return Ok(Some(QdWitness {
                    p,
                    k,
                    image_generators: cand.generators().to_vec(),
                    section,
                    isomorphism: iso,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub enum QdPrimeStatus {
    /// `|Qd(p)| > |G|`.
    PrunedByOrder,
    /// `|Qd(p)|` does not divide `|G|`.
    PrunedByDivisibility,
    NotInvolved,
    Involved(Box<QdWitness>),
}

impl QdPrimeStatus {
    pub fn label(&self) -> &'static str {
        match self {
            QdPrimeStatus::PrunedByOrder => "pruned-by-order",
            QdPrimeStatus::PrunedByDivisibility => "pruned-by-divisibility",
            QdPrimeStatus::NotInvolved => "not-involved",
            QdPrimeStatus::Involved(_) => "involved",
        }
    }
}

#[derive(Clone, Debug)]
pub struct QdFreeReport {
    pub free: bool,
    pub per_prime: Vec<(u64, QdPrimeStatus)>,
}

impl QdFreeReport {
    pub fn witness(&self) -> Option<&QdWitness> {
        self.per_prime.iter().find_map(|(_, s)| match s {
            QdPrimeStatus::Involved(w) => Some(w.as_ref()),
            _ => None,
        })
    }
}

/// `Qd(p)`-freeness over all odd primes dividing `|G|`.
pub fn is_qd_free(g: &PermutationGroup, limit: ScaleLimit) -> Result<QdFreeReport> {
    let order = g.order();
    let mut per_prime = Vec::new();
    for p in PrimeDecomposition::of(order).prime_list().into_iter().filter(|&p| p != 2) {
        let target = qd_order(p);
        let status = if target > order {
            QdPrimeStatus::PrunedByOrder
        } else if !order.is_multiple_of(target) {
            QdPrimeStatus::PrunedByDivisibility
        } else {
            match p_prime_involves_qd(g, p, limit)? {
                Some(w) => QdPrimeStatus::Involved(Box::new(w)),
                None => QdPrimeStatus::NotInvolved,
            }
        };
        per_prime.push((p, status));
    }
    let free = per_prime
        .iter()
        .all(|(_, s)| !matches!(s, QdPrimeStatus::Involved(_)));
    Ok(QdFreeReport { free, per_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{build_group, catalog_group, subgroups_up_to_conjugacy};

    #[test]
    fn sylow_orders() {
        let a4 = catalog_group("A4").unwrap();
        let s2 = sylow_subgroup(&a4, 2).unwrap();
        assert_eq!(s2.order(), 4);
        assert_eq!(elementary_abelian_rank(s2.group(), 2), Some(2));
        assert_eq!(sylow_subgroup(&a4, 5).unwrap().order(), 1);
        assert_eq!(sylow_subgroup(&catalog_group("Qd3").unwrap(), 3).unwrap().order(), 27);
        assert!(matches!(sylow_subgroup(&a4, 4), Err(Error::NotPrime(4))));
        for id in ["S4", "SL2_3", "A5", "D2n:6", "Q8"] {
            let g = catalog_group(id).unwrap();
            let d = PrimeDecomposition::of(g.order());
            for p in d.prime_list() {
                let s = sylow_subgroup(&g, p).unwrap();
                assert_eq!(s.order() * (g.order() / d.p_part(p)), g.order(), "{id} {p}");
            }
        }
    }

    #[test]
    fn elementary_abelian_classes() {
        let c5 = catalog_group("Cn:5").unwrap();
        let e = elementary_abelians(&c5, 5, ScaleLimit::default()).unwrap();
        assert_eq!(e.iter().map(|x| x.rank).collect::<Vec<_>>(), vec![0, 1]);

        let a4 = catalog_group("A4").unwrap();
        let e = elementary_abelians(&a4, 2, ScaleLimit::default()).unwrap();
        assert_eq!(e.iter().map(|x| x.rank).collect::<Vec<_>>(), vec![0, 1, 2]);

        let d8 = catalog_group("D2n:4").unwrap();
        let e = elementary_abelians(&d8, 2, ScaleLimit::default()).unwrap();
        let rank2: Vec<_> = e.iter().filter(|x| x.rank == 2).collect();
        assert_eq!(rank2.len(), 2);
        let z = d8.center();
        for x in rank2 {
            assert!(z.is_subset(x.subgroup.members()));
        }
    }

    #[test]
    fn ranks() {
        let v = build_group(
            4,
            vec![
                Permutation::parse_cycles(4, "(1,2)").unwrap(),
                Permutation::parse_cycles(4, "(3,4)").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(rank_profile(&v).unwrap().rank, 2);
        let a4 = rank_profile(&catalog_group("A4").unwrap()).unwrap();
        assert_eq!((a4.rank, a4.rank_at(2), a4.rank_at(3)), (2, 2, 1));
        let qd = rank_profile(&catalog_group("Qd3").unwrap()).unwrap();
        assert_eq!((qd.rank, qd.rank_at(3), qd.rank_at(2)), (2, 2, 1));
        let w = &qd.per_prime[1].witness;
        assert_eq!(elementary_abelian_rank(w.group(), 3), Some(2));
        assert_eq!(rank_profile(&catalog_group("trivial").unwrap()).unwrap().rank, 0);
        assert_eq!(rank_profile(&catalog_group("Cn:6").unwrap()).unwrap().rank, 1);
    }

    #[test]
    fn rank_is_monotone_on_subgroups() {
        for id in ["S4", "D2n:4", "A4"] {
            let g = catalog_group(id).unwrap();
            let prof = rank_profile(&g).unwrap();
            for h in subgroups_up_to_conjugacy(&g, ScaleLimit::default()).unwrap() {
                let hp = rank_profile(h.group()).unwrap();
                for r in &hp.per_prime {
                    assert!(r.rank <= prof.rank_at(r.p));
                }
            }
        }
    }

    #[test]
    fn qd_construction() {
        let q = qd_group(3, ScaleLimit::default()).unwrap();
        assert_eq!((q.order(), q.degree()), (216, 9));
        let translations = SubgroupHandle::new(&q, q.generators()[..2].to_vec()).unwrap();
        assert_eq!(translations.order(), 9);
        assert!(translations.is_normal());
        assert!(qd_group(5, ScaleLimit::default()).is_err());
        let q5 = qd_group(5, ScaleLimit(3000)).unwrap();
        assert_eq!((q5.order(), q5.degree()), (3000, 25));
        assert!(qd_group(2, ScaleLimit::default()).is_err());
        assert!(qd_group(9, ScaleLimit(u64::MAX)).is_err());
    }

    #[test]
    fn qd_freeness() {
        let qd3 = catalog_group("Qd3").unwrap();
        let w = p_prime_involves_qd(&qd3, 3, ScaleLimit::default()).unwrap().unwrap();
        assert_eq!(w.k.order(), 1);
        assert!(w.verify(&qd3, ScaleLimit::default()));
        let report = is_qd_free(&qd3, ScaleLimit::default()).unwrap();
        assert!(!report.free);

        for id in ["A4", "S4", "SL2_3", "A5"] {
            let g = catalog_group(id).unwrap();
            let r = is_qd_free(&g, ScaleLimit::default()).unwrap();
            assert!(r.free, "{id}");
            assert!(r
                .per_prime
                .iter()
                .all(|(_, s)| matches!(s, QdPrimeStatus::PrunedByOrder)));
            assert!(p_prime_involves_qd(&g, 3, ScaleLimit::default()).unwrap().is_none());
        }
    }
}
