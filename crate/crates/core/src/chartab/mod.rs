//! Exact character tables, class functions, restriction and inner products.

mod dixon;

use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::Zero;

use crate::cyclotomic::{coefficient_cmp, Cyclotomic};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permgroup::{PermutationGroup, ScaleLimit, SubgroupHandle};

/// A function on the conjugacy classes of `group`, in the group's class order.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    group: PermutationGroup,
    values: Vec<Cyclotomic>,
}

/// Characters are class functions; genuineness is checked where it matters.
pub type Character = ClassFunction;

impl ClassFunction {
    pub fn new(group: &PermutationGroup, values: Vec<Cyclotomic>) -> Result<Self> {
        let r = group.conjugacy_classes().len();
        if values.len() != r {
            return Err(Error::Shape(format!("{} values for {r} classes", values.len())));
        }
        Ok(ClassFunction {
            group: group.clone(),
            values,
        })
    }

    pub fn constant(group: &PermutationGroup, c: i64) -> Self {
        let e = group.exponent() as u32;
        let r = group.conjugacy_classes().len();
        ClassFunction {
            group: group.clone(),
            values: vec![Cyclotomic::from_integer(e, c); r],
        }
    }

    pub fn trivial(group: &PermutationGroup) -> Self {
        ClassFunction::constant(group, 1)
    }

    pub fn regular(group: &PermutationGroup) -> Self {
        let mut f = ClassFunction::constant(group, 0);
        f.values[0] = Cyclotomic::from_integer(group.exponent() as u32, group.order() as i64);
        f
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value_at_class(&self, k: usize) -> &Cyclotomic {
        &self.values[k]
    }

    pub fn value_at_index(&self, i: usize) -> &Cyclotomic {
        &self.values[self.group.conjugacy_classes().class_index(i)]
    }

    pub fn value(&self, x: &Permutation) -> Result<&Cyclotomic> {
        let i = self
            .group
            .index_of(x)
            .ok_or_else(|| Error::NotMember(x.to_string()))?;
        Ok(self.value_at_index(i))
    }

    /// Value at the identity when it is a rational integer.
    pub fn degree(&self) -> Option<i64> {
        self.values[0].to_integer()
    }

    fn check_same(&self, other: &ClassFunction) -> Result<()> {
        if !self.group.same_group(&other.group) {
            return Err(Error::Mismatch("class functions on different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        Ok(ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> ClassFunction {
        self.map(|v| v.scale(Rational64::from_integer(k)))
    }

    pub fn conjugate(&self) -> ClassFunction {
        self.map(Cyclotomic::conjugate)
    }

    pub fn galois(&self, a: u64) -> ClassFunction {
        self.map(|v| v.galois(a))
    }

    fn map(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> ClassFunction {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Rewrites every value over conductor `e` (a multiple of each current one).
    pub fn lift(&self, e: u32) -> ClassFunction {
        self.map(|v| v.lift(e))
    }

    pub fn is_rational_valued(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_rational)
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.values == other.values
    }
}

/// `(1/|G|) Σ_g χ(g) conj(ψ(g))` for class functions on the same group.
pub fn inner_product(chi: &ClassFunction, psi: &ClassFunction) -> Result<Rational64> {
    chi.check_same(psi)?;
    let g = &chi.group;
    let sizes = g.conjugacy_classes().sizes();
    let mut sum = Cyclotomic::zero(1);
    for ((a, b), &size) in chi.values.iter().zip(&psi.values).zip(&sizes) {
        let term = (a * &b.conjugate()).scale(Rational64::from_integer(size as i64));
        sum = &sum + &term;
    }
    let r = sum
        .to_rational()
        .ok_or_else(|| Error::NotRational(sum.to_string()))?;
    Ok(r / Rational64::from_integer(g.order() as i64))
}

/// Inner product of the restrictions to `h`.
pub fn inner_product_over(chi: &ClassFunction, psi: &ClassFunction, h: &SubgroupHandle) -> Result<Rational64> {
    inner_product(&restrict(chi, h)?, &restrict(psi, h)?)
}

/// The class function on `h` (with `h`'s own classes) agreeing with `chi`.
pub fn restrict(chi: &ClassFunction, h: &SubgroupHandle) -> Result<ClassFunction> {
    if !h.ambient().same_group(&chi.group) {
        return Err(Error::Mismatch("subgroup of a different group".into()));
    }
    let values = h
        .group()
        .conjugacy_classes()
        .classes()
        .iter()
        .map(|c| chi.value(&c.representative).cloned())
        .collect::<Result<Vec<_>>>()?;
    ClassFunction::new(h.group(), values)
}

/// `dim V^H = <χ|_H, 1_H>`; rejects inputs for which this is not a
/// nonnegative integer.
pub fn fixed_subspace_dim(chi: &ClassFunction, h: &SubgroupHandle) -> Result<u64> {
    let res = restrict(chi, h)?;
    let m = inner_product(&res, &ClassFunction::trivial(h.group()))?;
    if !m.is_integer() || m < Rational64::zero() {
        return Err(Error::NotCharacter(format!("fixed-point multiplicity {m}")));
    }
    Ok(m.to_integer() as u64)
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: PermutationGroup,
    exponent: u32,
    modulus: u64,
    irreducibles: Vec<Character>,
}

/// Maximum number of moduli tried before giving up.
const MODULUS_ATTEMPTS: usize = 8;

pub fn character_table(g: &PermutationGroup, limit: ScaleLimit) -> Result<CharacterTable> {
    limit.check("character table", g.order())?;
    let data = dixon::ClassData::new(g);
    let mut l = data.next_modulus(0);
    for _ in 0..MODULUS_ATTEMPTS {
        if let Some(mut rows) = dixon::attempt(&data, l) {
            rows.sort_by(|a, b| row_order(a, b));
            let irreducibles = rows
                .into_iter()
                .map(|values| ClassFunction {
                    group: g.clone(),
                    values,
                })
                .collect();
            let table = CharacterTable {
                group: g.clone(),
                exponent: data.exponent(),
                modulus: l,
                irreducibles,
            };
            if table.degree_sum_holds() && table.rows_orthonormal() {
                return Ok(table);
            }
        }
        l = data.next_modulus(l);
    }
    Err(Error::CharacterTable(format!(
        "no modulus out of {MODULUS_ATTEMPTS} split the class matrices"
    )))
}

/// Degree, then the trivial character, then values in decreasing
/// coefficient order.
fn row_order(a: &[Cyclotomic], b: &[Cyclotomic]) -> Ordering {
    let deg = |r: &[Cyclotomic]| r[0].to_integer().unwrap_or(0);
    let trivial = |r: &[Cyclotomic]| r.iter().all(|v| v.to_integer() == Some(1));
    deg(a)
        .cmp(&deg(b))
        .then(trivial(b).cmp(&trivial(a)))
        .then_with(|| {
            b.iter()
                .zip(a)
                .map(|(x, y)| coefficient_cmp(x, y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

impl CharacterTable {
    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    /// Conductor of all table values: the group exponent.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// The prime used for the modular computation.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn irreducibles(&self) -> &[Character] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irreducibles
            .iter()
            .map(|c| c.degree().expect("irreducible degrees are integers") as u64)
            .collect()
    }

    /// Inner products with each irreducible.
    pub fn decompose(&self, chi: &ClassFunction) -> Result<Vec<Rational64>> {
        self.irreducibles.iter().map(|x| inner_product(chi, x)).collect()
    }

    /// `Σ m_i χ_i`.
    pub fn combination(&self, mults: &[u64]) -> Result<Character> {
        if mults.len() != self.len() {
            return Err(Error::Shape(format!("{} multiplicities for {} irreducibles", mults.len(), self.len())));
        }
        let mut acc = ClassFunction::constant(&self.group, 0);
        for (chi, &m) in self.irreducibles.iter().zip(mults) {
            if m > 0 {
                acc = acc.add(&chi.scale(m as i64))?;
            }
        }
        Ok(acc)
    }

    pub fn degree_sum_holds(&self) -> bool {
        self.irreducibles.len() == self.group.conjugacy_classes().len()
            && self.degrees().iter().map(|d| d * d).sum::<u64>() == self.group.order()
    }

    /// `<χ_i, χ_j> = δ_ij`, exactly.
    pub fn rows_orthonormal(&self) -> bool {
        let n = self.irreducibles.len();
        (0..n).all(|i| {
            (i..n).all(|j| {
                let expected = Rational64::from_integer((i == j) as i64);
                inner_product(&self.irreducibles[i], &self.irreducibles[j]).ok() == Some(expected)
            })
        })
    }

    /// `Σ_χ χ(g_k) conj(χ(g_l)) = δ_kl |C_G(g_k)|`, exactly.
    pub fn columns_orthogonal(&self) -> bool {
        let sizes = self.group.conjugacy_classes().sizes();
        let r = sizes.len();
        let order = self.group.order();
        (0..r).all(|k| {
            (k..r).all(|l| {
                let sum = self.irreducibles.iter().fold(Cyclotomic::zero(self.exponent), |acc, chi| {
                    &acc + &(chi.value_at_class(k) * &chi.value_at_class(l).conjugate())
                });
                let expected = if k == l { (order / sizes[k]) as i64 } else { 0 };
                sum.to_integer() == Some(expected)
            })
        })
    }

    pub fn values_integral(&self) -> bool {
        self.irreducibles
            .iter()
            .all(|c| c.values().iter().all(Cyclotomic::is_algebraic_integer))
    }
}
