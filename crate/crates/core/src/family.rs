//! Families of Sylow characters of a common dimension and their transport to
//! every prime-power subgroup.

use num_integer::Integer;

use crate::chartab::{ClassFunction, Character};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permgroup::{prime_power_base, subgroups_up_to_conjugacy_where, PermutationGroup, ScaleLimit, SubgroupHandle};
use crate::pstructure::PrimeDecomposition;

#[derive(Clone, Debug)]
pub struct SylowEntry {
    pub p: u64,
    pub sylow: SubgroupHandle,
    /// The input character times `scale`.
    pub character: Character,
    pub scale: u64,
}

/// One character per prime dividing `|G|`, all of degree `dimension`.
#[derive(Clone, Debug)]
pub struct SylowFamily {
    group: PermutationGroup,
    entries: Vec<SylowEntry>,
    dimension: u64,
}

impl SylowFamily {
    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    /// Ascending in `p`.
    pub fn entries(&self) -> &[SylowEntry] {
        &self.entries
    }

    pub fn entry(&self, p: u64) -> Option<&SylowEntry> {
        self.entries.iter().find(|e| e.p == p)
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    /// Every character multiplied by `k`.
    pub fn scaled(&self, k: u64) -> SylowFamily {
        SylowFamily {
            group: self.group.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| SylowEntry {
                    p: e.p,
                    sylow: e.sylow.clone(),
                    character: e.character.scale(k as i64),
                    scale: e.scale * k,
                })
                .collect(),
            dimension: self.dimension * k,
        }
    }
}

/// Scales each Sylow character to the lcm of the input degrees.
///
/// Each input is a Sylow subgroup of `g` with a character of it. Fusion
/// stability is the caller's responsibility and is re-checked by
/// [`verify_compatibility`].
pub fn assemble_family(g: &PermutationGroup, per_prime: &[(SubgroupHandle, Character)]) -> Result<SylowFamily> {
    let decomposition = PrimeDecomposition::of(g.order());
    let mut entries: Vec<(u64, SubgroupHandle, Character, u64)> = Vec::new();
    for (sylow, chi) in per_prime {
        if !sylow.ambient().same_group(g) {
            return Err(Error::Mismatch("Sylow subgroup of a different group".into()));
        }
        let p = prime_power_base(sylow.order())
            .ok_or_else(|| Error::InvalidArgument(format!("subgroup of order {} is not a p-group", sylow.order())))?;
        if sylow.order() != decomposition.p_part(p) {
            return Err(Error::InvalidArgument(format!("order {} is not the {p}-part of |G|", sylow.order())));
        }
        if !chi.group().same_group(sylow.group()) {
            return Err(Error::Mismatch(format!("character at {p} is not on the Sylow subgroup")));
        }
        let degree = chi
            .degree()
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::NotCharacter(format!("character at {p} has no positive degree")))?;
        if entries.iter().any(|e| e.0 == p) {
            return Err(Error::InvalidArgument(format!("prime {p} given twice")));
        }
        entries.push((p, sylow.clone(), chi.clone(), degree as u64));
    }
    let missing: Vec<u64> = decomposition
        .prime_list()
        .into_iter()
        .filter(|p| !entries.iter().any(|e| e.0 == *p))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingPrimes(missing));
    }
    entries.sort_by_key(|e| e.0);
    let dimension = entries.iter().fold(1u64, |acc, e| acc.lcm(&e.3));
    let entries = entries
        .into_iter()
        .map(|(p, sylow, chi, degree)| {
            let scale = dimension / degree;
            SylowEntry {
                p,
                sylow,
                character: chi.scale(scale as i64),
                scale,
            }
        })
        .collect();
    Ok(SylowFamily {
        group: g.clone(),
        entries,
        dimension,
    })
}

/// `V_H` together with the element used to move `H` into the Sylow subgroup.
#[derive(Clone, Debug)]
pub struct Transported {
    pub subgroup: SubgroupHandle,
    /// `None` for the trivial subgroup.
    pub p: Option<u64>,
    /// `g` with `g H g^-1 <= G_p`.
    pub conjugator: Permutation,
    /// Class function on `subgroup.group()`.
    pub character: ClassFunction,
}

/// `V_H(x) = χ_p(g x g^-1)` for the first `g` (canonical order) moving `H`
/// into `G_p`.
pub fn subgroup_character(fam: &SylowFamily, h: &SubgroupHandle) -> Result<Transported> {
    if !h.ambient().same_group(&fam.group) {
        return Err(Error::Mismatch("subgroup of a different group".into()));
    }
    let Some(p) = prime_power_base(h.order()) else {
        if h.order() == 1 {
            return Ok(Transported {
                subgroup: h.clone(),
                p: None,
                conjugator: fam.group.identity(),
                character: ClassFunction::constant(h.group(), fam.dimension as i64),
            });
        }
        return Err(Error::InvalidArgument(format!("subgroup order {} is not a prime power", h.order())));
    };
    let entry = fam.entry(p).ok_or(Error::MissingPrimes(vec![p]))?;
    let g = fam
        .group
        .elements()
        .iter()
        .find(|g| moves_into(g, h, &entry.sylow))
        .expect("every p-subgroup is conjugate into a Sylow subgroup")
        .clone();
    let character = transport(&entry.character, h, &g)?;
    Ok(Transported {
        subgroup: h.clone(),
        p: Some(p),
        conjugator: g,
        character,
    })
}

fn moves_into(g: &Permutation, h: &SubgroupHandle, target: &SubgroupHandle) -> bool {
    h.generators().iter().all(|x| target.contains(&g.conjugate(x)))
}

/// The class function `x -> χ(g x g^-1)` on `h`.
fn transport(chi: &Character, h: &SubgroupHandle, g: &Permutation) -> Result<ClassFunction> {
    let values = h
        .group()
        .conjugacy_classes()
        .classes()
        .iter()
        .map(|c| chi.value(&g.conjugate(&c.representative)).cloned())
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(h.group(), values)
}

/// `V_H` on one representative of each conjugacy class of prime-power
/// subgroups (the trivial subgroup included).
#[derive(Clone, Debug)]
pub struct CompatibleFamily {
    base: SylowFamily,
    assignments: Vec<Transported>,
}

impl CompatibleFamily {
    pub fn base(&self) -> &SylowFamily {
        &self.base
    }

    pub fn assignments(&self) -> &[Transported] {
        &self.assignments
    }

    pub fn dimension(&self) -> u64 {
        self.base.dimension
    }

    /// `V_H` for any prime-power subgroup, resolved by transport.
    pub fn character_of(&self, h: &SubgroupHandle) -> Result<Transported> {
        subgroup_character(&self.base, h)
    }
}

pub fn compatible_family(base: &SylowFamily, limit: ScaleLimit) -> Result<CompatibleFamily> {
    let classes = subgroups_up_to_conjugacy_where(&base.group, limit, |o| o == 1 || prime_power_base(o).is_some())?;
    let assignments = classes
        .iter()
        .map(|h| subgroup_character(base, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(CompatibleFamily {
        base: base.clone(),
        assignments,
    })
}

/// A conjugation under which the family is not invariant.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub subgroup: SubgroupHandle,
    pub conjugator: Permutation,
    pub element: Permutation,
    pub expected: Cyclotomic,
    pub found: Cyclotomic,
}

/// Checks, for every stored `H`:
/// - each `g` with `g H g^-1 <= G_p` transports `χ_p` to the stored `V_H`;
/// - each `g` in `N_G(H)` fixes `V_H`, i.e. `(c^g)^* V_H = V_H`.
pub fn verify_compatibility(cf: &CompatibleFamily) -> Result<Option<Counterexample>> {
    let fam = &cf.base;
    for t in &cf.assignments {
        let h = &t.subgroup;
        let reps: Vec<Permutation> = h
            .group()
            .conjugacy_classes()
            .classes()
            .iter()
            .map(|c| c.representative.clone())
            .collect();
        if let Some(p) = t.p {
            let entry = fam.entry(p).ok_or(Error::MissingPrimes(vec![p]))?;
            for g in fam.group.elements() {
                if !moves_into(g, h, &entry.sylow) {
                    continue;
                }
                for (k, x) in reps.iter().enumerate() {
                    let found = entry.character.value(&g.conjugate(x))?;
                    if found != t.character.value_at_class(k) {
                        return Ok(Some(Counterexample {
                            subgroup: h.clone(),
                            conjugator: g.clone(),
                            element: x.clone(),
                            expected: t.character.value_at_class(k).clone(),
                            found: found.clone(),
                        }));
                    }
                }
            }
        }
        for gi in h.normalizer().members().ones() {
            let g = fam.group.element(gi);
            for (k, x) in reps.iter().enumerate() {
                let found = t.character.value(&g.conjugate(x))?;
                if found != t.character.value_at_class(k) {
                    return Ok(Some(Counterexample {
                        subgroup: h.clone(),
                        conjugator: g.clone(),
                        element: x.clone(),
                        expected: t.character.value_at_class(k).clone(),
                        found: found.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{character_table, restrict};
    use crate::effective::{search_p_effective, EffectiveContext, EffectiveSearchSpec};
    use crate::permgroup::catalog_group;
    use crate::pstructure::sylow_subgroup;

    fn effective_family(id: &str) -> SylowFamily {
        let g = catalog_group(id).unwrap();
        let per_prime: Vec<_> = PrimeDecomposition::of(g.order())
            .prime_list()
            .into_iter()
            .map(|p| {
                let spec = EffectiveSearchSpec::new(&g, p, None).unwrap();
                let ctx = EffectiveContext::new(spec, ScaleLimit::default()).unwrap();
                let found = search_p_effective(&ctx).unwrap().found().unwrap().clone();
                (ctx.sylow().clone(), found.character)
            })
            .collect();
        assemble_family(&g, &per_prime).unwrap()
    }

    fn ints(f: &ClassFunction) -> Vec<i64> {
        f.values().iter().map(|v| v.to_integer().unwrap()).collect()
    }

    #[test]
    fn a4_family() {
        let fam = effective_family("A4");
        assert_eq!(fam.dimension(), 3);
        assert_eq!(fam.entry(2).unwrap().scale, 1);
        assert_eq!(fam.entry(3).unwrap().scale, 3);
        let a4 = fam.group().clone();
        let p = |s: &str| Permutation::parse_cycles(4, s).unwrap();
        let c2 = SubgroupHandle::new(&a4, vec![p("(1,2)(3,4)")]).unwrap();
        assert_eq!(ints(&subgroup_character(&fam, &c2).unwrap().character), vec![3, -1]);
        let t = subgroup_character(&fam, &SubgroupHandle::trivial(&a4)).unwrap();
        assert_eq!(ints(&t.character), vec![3]);

        let g3 = &fam.entry(3).unwrap().sylow;
        let other = SubgroupHandle::new(&a4, vec![p("(1,2,4)")]).unwrap();
        assert!(!other.same_subgroup(g3));
        let v = subgroup_character(&fam, &other).unwrap();
        let mut a: Vec<String> = v.character.values().iter().map(ToString::to_string).collect();
        let mut b: Vec<String> = fam.entry(3).unwrap().character.values().iter().map(ToString::to_string).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);

        let cf = compatible_family(&fam, ScaleLimit::default()).unwrap();
        assert_eq!(cf.assignments().len(), 4);
        assert!(verify_compatibility(&cf).unwrap().is_none());
    }

    #[test]
    fn missing_primes_are_listed() {
        let a4 = catalog_group("A4").unwrap();
        let s2 = sylow_subgroup(&a4, 2).unwrap();
        let one = ClassFunction::trivial(s2.group());
        assert!(matches!(assemble_family(&a4, &[(s2, one)]), Err(Error::MissingPrimes(v)) if v == vec![3]));
    }

    #[test]
    fn trivial_family_is_compatible() {
        for id in ["S4", "D2n:3", "Q8"] {
            let g = catalog_group(id).unwrap();
            let per_prime: Vec<_> = PrimeDecomposition::of(g.order())
                .prime_list()
                .into_iter()
                .map(|p| {
                    let s = sylow_subgroup(&g, p).unwrap();
                    let c = ClassFunction::constant(s.group(), 2);
                    (s, c)
                })
                .collect();
            let fam = assemble_family(&g, &per_prime).unwrap();
            assert_eq!(fam.dimension(), 2);
            let cf = compatible_family(&fam, ScaleLimit::default()).unwrap();
            assert!(verify_compatibility(&cf).unwrap().is_none());
        }
    }

    #[test]
    fn corrupted_family_yields_counterexample() {
        let a4 = catalog_group("A4").unwrap();
        let s2 = sylow_subgroup(&a4, 2).unwrap();
        let s3 = sylow_subgroup(&a4, 3).unwrap();
        let t2 = character_table(s2.group(), ScaleLimit::default()).unwrap();
        let t3 = character_table(s3.group(), ScaleLimit::default()).unwrap();
        let bad = t2.irreducibles()[1].clone();
        let fam = assemble_family(&a4, &[(s2, bad), (s3, t3.irreducibles()[1].clone())]).unwrap();
        let cf = compatible_family(&fam, ScaleLimit::default()).unwrap();
        let ce = verify_compatibility(&cf).unwrap().expect("not fusion-stable");
        assert_ne!(ce.expected, ce.found);
    }

    #[test]
    fn restriction_coherence_and_scaling() {
        let fam = effective_family("A4");
        let cf = compatible_family(&fam, ScaleLimit::default()).unwrap();
        let v4 = cf.assignments().iter().find(|t| t.subgroup.order() == 4).unwrap();
        for t in cf.assignments().iter().filter(|t| t.p == Some(2)) {
            if t.subgroup.is_subgroup_of(&v4.subgroup) {
                let sub = SubgroupHandle::new(v4.subgroup.group(), t.subgroup.generators().to_vec()).unwrap();
                assert_eq!(restrict(&v4.character, &sub).unwrap().values(), t.character.values());
            }
        }
        let doubled = compatible_family(&fam.scaled(2), ScaleLimit::default()).unwrap();
        for (a, b) in cf.assignments().iter().zip(doubled.assignments()) {
            assert_eq!(a.character.scale(2), b.character);
        }
    }
}
