//! Fusion of Sylow classes and the search for fusion-stable `p`-effective
//! characters of a Sylow subgroup.
//!
//! A character `χ` of `G_p` is `p`-effective when it is constant on fusion
//! blocks and `<χ|_E, 1_E> = 0` for every elementary abelian `E <= G_p` of
//! rank `rank_p(G)`.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::chartab::{character_table, fixed_subspace_dim, restrict, Character, CharacterTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permgroup::{PermutationGroup, ScaleLimit, SubgroupHandle};
use crate::pstructure::{elementary_abelians, p_rank, sylow_subgroup, PrimeDecomposition};

/// Classes of `G_p` grouped by conjugacy in `G`.
#[derive(Clone, Debug)]
pub struct FusionPartition {
    sylow: SubgroupHandle,
    /// Sylow class indices per block; blocks ordered by their first class.
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    /// For each Sylow class, `g` in `G` conjugating its block's first
    /// representative onto this class's representative.
    witnesses: Vec<Permutation>,
}

impl FusionPartition {
    pub fn sylow(&self) -> &SubgroupHandle {
        &self.sylow
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, class: usize) -> usize {
        self.block_of[class]
    }

    pub fn witnesses(&self) -> &[Permutation] {
        &self.witnesses
    }

    /// Re-checks every witness and that distinct blocks are not `G`-conjugate.
    pub fn verify(&self) -> bool {
        let g = self.sylow.ambient();
        let classes = self.sylow.group().conjugacy_classes().classes();
        let gcc = g.conjugacy_classes();
        let gclass = |x: &Permutation| g.index_of(x).map(|i| gcc.class_index(i));
        for (k, c) in classes.iter().enumerate() {
            let first = &classes[self.blocks[self.block_of[k]][0]].representative;
            if !g.contains(&self.witnesses[k]) || self.witnesses[k].conjugate(first) != c.representative {
                return false;
            }
        }
        let firsts: Vec<_> = self
            .blocks
            .iter()
            .map(|b| gclass(&classes[b[0]].representative))
            .collect();
        firsts.iter().all(Option::is_some)
            && (0..firsts.len()).all(|i| (i + 1..firsts.len()).all(|j| firsts[i] != firsts[j]))
    }
}

pub fn fusion_partition(g: &PermutationGroup, p: u64) -> Result<FusionPartition> {
    fusion_partition_of(&sylow_subgroup(g, p)?)
}

/// Fusion partition for a given `p`-subgroup handle of `G`.
pub fn fusion_partition_of(sylow: &SubgroupHandle) -> Result<FusionPartition> {
    let g = sylow.ambient();
    let classes = sylow.group().conjugacy_classes().classes();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = Vec::with_capacity(classes.len());
    let mut witnesses = Vec::with_capacity(classes.len());
    for (k, c) in classes.iter().enumerate() {
        let mut placed = false;
        for (b, block) in blocks.iter_mut().enumerate() {
            let first = &classes[block[0]].representative;
            if let Some(w) = g.is_conjugate(first, &c.representative)? {
                block.push(k);
                block_of.push(b);
                witnesses.push(w);
                placed = true;
                break;
            }
        }
        if !placed {
            block_of.push(blocks.len());
            blocks.push(vec![k]);
            witnesses.push(g.identity());
        }
    }
    Ok(FusionPartition {
        sylow: sylow.clone(),
        blocks,
        block_of,
        witnesses,
    })
}

/// Constant on every fusion block.
pub fn is_fusion_stable(chi: &Character, fp: &FusionPartition) -> bool {
    chi.group().same_group(fp.sylow.group())
        && fp
            .blocks
            .iter()
            .all(|b| b.iter().all(|&k| chi.value_at_class(k) == chi.value_at_class(b[0])))
}

/// Brute-force check of `χ(gxg^-1) = χ(x)` over all `g` in `G` and `x` in
/// `G_p` with `gxg^-1` in `G_p`.
pub fn fusion_certificate(chi: &Character, g: &PermutationGroup) -> bool {
    let gp = chi.group();
    for x in gp.elements() {
        let vx = chi.value(x).expect("element of its own group");
        for h in g.elements() {
            let y = h.conjugate(x);
            if let Some(j) = gp.index_of(&y) {
                if chi.value_at_index(j) != vx {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct EffectiveSearchSpec {
    pub group: PermutationGroup,
    pub p: u64,
    pub bound: u64,
    pub target_rank: u32,
}

impl EffectiveSearchSpec {
    /// `bound` defaults to `|G_p|`.
    pub fn new(g: &PermutationGroup, p: u64, bound: Option<u64>) -> Result<Self> {
        let (target_rank, _) = p_rank(g, p)?;
        if !g.order().is_multiple_of(p) {
            return Err(Error::InvalidArgument(format!("{p} does not divide |G| = {}", g.order())));
        }
        let bound = bound.unwrap_or_else(|| PrimeDecomposition::of(g.order()).p_part(p));
        if bound == 0 {
            return Err(Error::InvalidArgument("dimension bound must be at least 1".into()));
        }
        Ok(EffectiveSearchSpec {
            group: g.clone(),
            p,
            bound,
            target_rank,
        })
    }
}

/// Everything the search needs about one prime, computed once.
#[derive(Clone, Debug)]
pub struct EffectiveContext {
    pub spec: EffectiveSearchSpec,
    pub fusion: FusionPartition,
    pub table: CharacterTable,
    /// Elementary abelian subgroups of `G_p` of rank `rank_p(G)`, up to
    /// `G_p`-conjugacy, as subgroups of the Sylow group itself.
    pub max_rank: Vec<SubgroupHandle>,
}

impl EffectiveContext {
    pub fn new(spec: EffectiveSearchSpec, limit: ScaleLimit) -> Result<Self> {
        let sylow = sylow_subgroup(&spec.group, spec.p)?;
        EffectiveContext::with_sylow(spec, sylow, limit)
    }

    /// Uses the given Sylow subgroup instead of the canonical one.
    pub fn with_sylow(spec: EffectiveSearchSpec, sylow: SubgroupHandle, limit: ScaleLimit) -> Result<Self> {
        let p_part = PrimeDecomposition::of(spec.group.order()).p_part(spec.p);
        if !sylow.ambient().same_group(&spec.group) || sylow.order() != p_part {
            return Err(Error::InvalidArgument("not a Sylow subgroup of the group".into()));
        }
        let fusion = fusion_partition_of(&sylow)?;
        let table = character_table(sylow.group(), limit)?;
        let max_rank = elementary_abelians(sylow.group(), spec.p, limit)?
            .into_iter()
            .filter(|e| e.rank == spec.target_rank)
            .map(|e| e.subgroup)
            .collect();
        Ok(EffectiveContext {
            spec,
            fusion,
            table,
            max_rank,
        })
    }

    pub fn sylow(&self) -> &SubgroupHandle {
        self.fusion.sylow()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveCharacter {
    pub character: Character,
    pub multiplicities: Vec<u64>,
    pub dimension: u64,
}

/// Why a character fails to be `p`-effective.
#[derive(Clone, Debug, Default)]
pub struct EffectivenessReport {
    pub fusion_stable: bool,
    /// Maximal-rank `E` with a nonzero fixed subspace, with its dimension.
    pub violations: Vec<(SubgroupHandle, u64)>,
}

impl EffectivenessReport {
    pub fn is_effective(&self) -> bool {
        self.fusion_stable && self.violations.is_empty()
    }
}

pub fn is_p_effective(chi: &Character, ctx: &EffectiveContext) -> Result<EffectivenessReport> {
    let mut report = EffectivenessReport {
        fusion_stable: is_fusion_stable(chi, &ctx.fusion),
        violations: Vec::new(),
    };
    for e in &ctx.max_rank {
        let d = fixed_subspace_dim(chi, e)?;
        if d > 0 {
            report.violations.push((e.clone(), d));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found(EffectiveCharacter),
    /// No solution of dimension at most `bound`; says nothing beyond it.
    BoundReached { bound: u64 },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&EffectiveCharacter> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::BoundReached { .. } => None,
        }
    }
}

/// Rows of the homogeneous system `A m = 0` over the multiplicity vector.
pub fn constraint_rows(ctx: &EffectiveContext) -> Result<Vec<Vec<Rational64>>> {
    let irr = ctx.table.irreducibles();
    let mut rows = Vec::new();
    let mut push_coords = |cols: Vec<Cyclotomic>| {
        let e = cols.iter().fold(1u32, |acc, v| num_integer::Integer::lcm(&acc, &v.conductor()));
        let cols: Vec<Cyclotomic> = cols.iter().map(|v| v.lift(e)).collect();
        for c in 0..cols[0].coeffs().len() {
            let row: Vec<Rational64> = cols.iter().map(|v| v.coeffs()[c]).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    };
    for block in ctx.fusion.blocks() {
        for &k in &block[1..] {
            push_coords(irr.iter().map(|chi| chi.value_at_class(k) - chi.value_at_class(block[0])).collect());
        }
    }
    for e in &ctx.max_rank {
        let mut cols = Vec::with_capacity(irr.len());
        for chi in irr {
            let res = restrict(chi, e)?;
            let sizes = e.group().conjugacy_classes().sizes();
            let sum = res
                .values()
                .iter()
                .zip(&sizes)
                .fold(Cyclotomic::zero(1), |acc, (v, &s)| &acc + &v.scale(Rational64::from_integer(s as i64)));
            cols.push(sum);
        }
        push_coords(cols);
    }
    Ok(rows)
}

/// Reduced row echelon form over `Q`; returns pivot columns.
fn rref(rows: &mut Vec<Vec<Rational64>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational64::one() / rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x -= y * f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Minimal-dimension solution, ties broken by lexicographically smallest
/// multiplicities.
///
/// The solution space of `A m = 0` is parametrized by its free coordinates;
/// for each total dimension `D = 1, 2, ...` every free assignment of free
/// dimension at most `D` is expanded and the valid ones of dimension exactly
/// `D` compared.
pub fn search_p_effective(ctx: &EffectiveContext) -> Result<SearchOutcome> {
    let n = ctx.table.len();
    let degrees = ctx.table.degrees();
    let mut rows = constraint_rows(ctx)?;
    let pivots = rref(&mut rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();

    for target in 1..=ctx.spec.bound {
        let mut best: Option<Vec<u64>> = None;
        let mut assign = vec![0u64; free.len()];
        enumerate_free(&free, &degrees, target, 0, &mut assign, &mut |assign| {
            let mut m = vec![0u64; n];
            for (&f, &v) in free.iter().zip(assign) {
                m[f] = v;
            }
            for (row, &p) in rows.iter().zip(&pivots) {
                let val = -free
                    .iter()
                    .zip(assign)
                    .fold(Rational64::zero(), |acc, (&f, &v)| acc + row[f] * Rational64::from_integer(v as i64));
                if !val.is_integer() || val < Rational64::zero() {
                    return;
                }
                m[p] = val.to_integer() as u64;
            }
            let dim: u64 = m.iter().zip(&degrees).map(|(a, d)| a * d).sum();
            if dim == target && best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        });
        if let Some(m) = best {
            let character = ctx.table.combination(&m)?;
            return Ok(SearchOutcome::Found(EffectiveCharacter {
                character,
                multiplicities: m,
                dimension: target,
            }));
        }
    }
    Ok(SearchOutcome::BoundReached { bound: ctx.spec.bound })
}

/// Calls `visit` on every assignment of the free coordinates whose own
/// dimension is at most `budget`.
fn enumerate_free(free: &[usize], degrees: &[u64], budget: u64, depth: usize, assign: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
    if depth == free.len() {
        visit(assign);
        return;
    }
    let d = degrees[free[depth]];
    let mut v = 0;
    while v * d <= budget {
        assign[depth] = v;
        enumerate_free(free, degrees, budget - v * d, depth + 1, assign, visit);
        v += 1;
    }
    assign[depth] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::ClassFunction;
    use crate::permgroup::catalog_group;

    fn ctx(id: &str, p: u64, bound: Option<u64>) -> EffectiveContext {
        let g = catalog_group(id).unwrap();
        let spec = EffectiveSearchSpec::new(&g, p, bound).unwrap();
        EffectiveContext::new(spec, ScaleLimit::default()).unwrap()
    }

    #[test]
    fn fusion_in_a4_and_s4() {
        let a4 = catalog_group("A4").unwrap();
        let fp = fusion_partition(&a4, 2).unwrap();
        assert_eq!(fp.blocks(), &[vec![0], vec![1, 2, 3]]);
        assert!(fp.verify());

        let s4 = catalog_group("S4").unwrap();
        let fp = fusion_partition(&s4, 2).unwrap();
        assert!(fp.verify());
        let classes = fp.sylow().group().conjugacy_classes().classes();
        for block in fp.blocks() {
            let types: Vec<_> = block.iter().map(|&k| classes[k].representative.cycle_type()).collect();
            assert!(types.windows(2).all(|w| w[0] == w[1]));
        }
        // D8 has 5 classes; in S4 they fall into cycle types 1, 2^2, 2, 4.
        assert_eq!(fp.blocks().len(), 4);

        let c5 = catalog_group("Cn:5").unwrap();
        assert_eq!(fusion_partition(&c5, 5).unwrap().blocks().len(), 5);
    }

    #[test]
    fn fusion_stability() {
        let c = ctx("A4", 2, None);
        let one = ClassFunction::trivial(c.sylow().group());
        assert!(is_fusion_stable(&one, &c.fusion));
        let chi = c.table.combination(&[0, 1, 1, 1]).unwrap();
        assert!(is_fusion_stable(&chi, &c.fusion));
        assert!(fusion_certificate(&chi, &c.spec.group));
        assert!(!is_fusion_stable(&c.table.irreducibles()[1], &c.fusion));
        assert!(!fusion_certificate(&c.table.irreducibles()[1], &c.spec.group));

        let s = ctx("S4", 2, None);
        let two = s.table.irreducibles().iter().find(|x| x.degree() == Some(2)).unwrap();
        assert!(!is_fusion_stable(two, &s.fusion));
        assert!(!fusion_certificate(two, &s.spec.group));
    }

    #[test]
    fn effectiveness_checks() {
        let c = ctx("A4", 2, None);
        let chi = c.table.combination(&[0, 1, 1, 1]).unwrap();
        assert!(is_p_effective(&chi, &c).unwrap().is_effective());
        let reg = ClassFunction::regular(c.sylow().group());
        let rep = is_p_effective(&reg, &c).unwrap();
        assert!(!rep.is_effective());
        assert_eq!(rep.violations.len(), 1);

        let c6 = ctx("Cn:6", 3, None);
        assert_eq!(c6.spec.target_rank, 1);
        let lin = &c6.table.irreducibles()[1];
        assert!(is_p_effective(lin, &c6).unwrap().is_effective());
    }

    #[test]
    fn search_a4() {
        let c = ctx("A4", 2, Some(8));
        let found = search_p_effective(&c).unwrap();
        let f = found.found().unwrap();
        assert_eq!((f.dimension, f.multiplicities.clone()), (3, vec![0, 1, 1, 1]));
        assert!(is_p_effective(&f.character, &c).unwrap().is_effective());

        let c3 = ctx("A4", 3, Some(4));
        let f = search_p_effective(&c3).unwrap();
        let f = f.found().unwrap();
        assert_eq!((f.dimension, f.multiplicities.clone()), (1, vec![0, 0, 1]));
        assert!(fusion_certificate(&f.character, &c3.spec.group));
    }

    #[test]
    fn search_qd3_reaches_bound() {
        let c = ctx("Qd3", 3, Some(18));
        assert_eq!(c.spec.target_rank, 2);
        assert_eq!(search_p_effective(&c).unwrap(), SearchOutcome::BoundReached { bound: 18 });
    }

    #[test]
    fn spec_validation() {
        let a4 = catalog_group("A4").unwrap();
        assert!(EffectiveSearchSpec::new(&a4, 5, None).is_err());
        assert!(EffectiveSearchSpec::new(&a4, 2, Some(0)).is_err());
        assert_eq!(EffectiveSearchSpec::new(&a4, 2, None).unwrap().bound, 4);
    }
}
