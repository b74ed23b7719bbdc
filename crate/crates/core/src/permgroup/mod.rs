//! Finite permutation groups: stabilizer chains, element tables,
//! conjugacy, subgroup enumeration, sections and isomorphism testing.

mod catalog;
mod chain;
mod classes;
mod iso;
mod lattice;
mod section;
mod subgroup;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub(crate) use catalog::affine_special_linear;
pub use catalog::{catalog_group, parse_group_text, GroupInput, CATALOG_IDS};
pub use chain::StabilizerChain;
pub use classes::{ConjugacyClass, ConjugacyClasses};
pub use iso::{group_invariants, is_isomorphic, GroupInvariants, Isomorphism};
pub use lattice::{subgroups_up_to_conjugacy, subgroups_up_to_conjugacy_where};
pub use section::section_group;
pub use subgroup::{centralizer, normalizer, SubgroupHandle};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Set of element indices of a group (indices into [`PermutationGroup::elements`]).
pub type ElementSet = fixedbitset::FixedBitSet;

/// Upper bound on group orders for enumeration-heavy operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaleLimit(pub u64);

impl Default for ScaleLimit {
    fn default() -> Self {
        ScaleLimit(1000)
    }
}

impl ScaleLimit {
    pub fn check(&self, what: &str, order: u64) -> Result<()> {
        if order > self.0 {
            return Err(Error::ScaleLimit {
                what: what.to_string(),
                order,
                limit: self.0,
            });
        }
        Ok(())
    }
}

struct ElementTable {
    /// Sorted lexicographically on image sequences; index 0 is the identity.
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
}

struct Inner {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabilizerChain,
    table: OnceLock<ElementTable>,
    mul: OnceLock<Vec<u32>>,
    classes: OnceLock<ConjugacyClasses>,
}

/// A finite group of permutations of `{1..degree}`.
///
/// Cheap to clone; caches (element table, multiplication table, conjugacy
/// classes) are shared between clones and filled on first use.
#[derive(Clone)]
pub struct PermutationGroup {
    inner: Arc<Inner>,
}

/// Builds the group generated by `generators` on `degree` points.
pub fn build_group(degree: usize, generators: Vec<Permutation>) -> Result<PermutationGroup> {
    PermutationGroup::new(degree, generators)
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Shape("degree must be positive".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Shape(format!(
                    "generator {g} has degree {}, expected {degree}",
                    g.degree()
                )));
            }
        }
        let chain = StabilizerChain::new(degree, &generators);
        Ok(PermutationGroup {
            inner: Arc::new(Inner {
                degree,
                generators,
                chain,
                table: OnceLock::new(),
                mul: OnceLock::new(),
                classes: OnceLock::new(),
            }),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup::new(degree, Vec::new()).expect("positive degree")
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.inner.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.inner.chain
    }

    pub fn order(&self) -> u64 {
        self.inner.chain.order()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.inner.chain.contains(g)
    }

    /// True when both values denote the same set of permutations.
    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        self.degree() == other.degree()
            && self.order() == other.order()
            && self.generators().iter().all(|g| other.contains(g))
    }

    fn table(&self) -> &ElementTable {
        self.inner.table.get_or_init(|| {
            let mut elements = self.inner.chain.elements();
            elements.sort();
            let index: HashMap<Permutation, u32> = elements
                .iter()
                .enumerate()
                .map(|(i, g)| (g.clone(), i as u32))
                .collect();
            let inverse = elements.iter().map(|g| index[&g.inverse()]).collect();
            let orders = elements.iter().map(|g| g.order() as u32).collect();
            ElementTable {
                elements,
                index,
                inverse,
                orders,
            }
        })
    }

    /// All elements in canonical (lexicographic) order.
    pub fn elements(&self) -> &[Permutation] {
        &self.table().elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.table().elements[i]
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.table().index.get(g).map(|&i| i as usize)
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.table().inverse[i] as usize
    }

    pub fn element_order(&self, i: usize) -> u64 {
        self.table().orders[i] as u64
    }

    fn mul_table(&self) -> &[u32] {
        self.inner.mul.get_or_init(|| {
            let t = self.table();
            let n = t.elements.len();
            let mut mul = vec![0u32; n * n];
            for (a, ga) in t.elements.iter().enumerate() {
                for (b, gb) in t.elements.iter().enumerate() {
                    mul[a * n + b] = t.index[&ga.compose(gb)];
                }
            }
            mul
        })
    }

    /// Index of `elements[a] * elements[b]`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let n = self.table().elements.len();
        self.mul_table()[a * n + b] as usize
    }

    /// Index of `elements[g] * elements[x] * elements[g]^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverse_index(g))
    }

    /// Index of `elements[x]^k`.
    pub fn pow_index(&self, x: usize, k: u64) -> usize {
        let k = k % self.element_order(x);
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators()
            .iter()
            .map(|g| self.index_of(g).expect("generator is a member"))
            .collect()
    }

    /// Closure of the given element indices under multiplication.
    pub fn closure(&self, gens: &[usize]) -> ElementSet {
        let n = self.elements().len();
        let mut set = ElementSet::with_capacity(n);
        set.insert(0);
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Greedy generating set of a subgroup given by its element set: scan
    /// elements in canonical order, keep those outside the current closure.
    pub fn generators_of(&self, set: &ElementSet) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.closure(&[]);
        let target = set.count_ones(..);
        for x in set.ones() {
            if current.count_ones(..) == target {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.inner.classes.get_or_init(|| ConjugacyClasses::compute(self))
    }

    /// Conjugacy classes as (representative, size) pairs.
    pub fn class_list(&self) -> Vec<(Permutation, u64)> {
        self.conjugacy_classes()
            .classes()
            .iter()
            .map(|c| (c.representative.clone(), c.size))
            .collect()
    }

    /// Exponent: lcm of element orders.
    pub fn exponent(&self) -> u64 {
        use num_integer::Integer;
        self.conjugacy_classes()
            .classes()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&c.element_order))
    }

    /// A witness `g` with `g x g^-1 = y`, if `x` and `y` are conjugate.
    pub fn is_conjugate(&self, x: &Permutation, y: &Permutation) -> Result<Option<Permutation>> {
        let xi = self.index_of(x).ok_or_else(|| Error::NotMember(x.to_string()))?;
        let yi = self.index_of(y).ok_or_else(|| Error::NotMember(y.to_string()))?;
        let classes = self.conjugacy_classes();
        if classes.class_index(xi) != classes.class_index(yi) {
            return Ok(None);
        }
        // Orbit search tracking one conjugator per reached element.
        let gens = self.generator_indices();
        let n = self.elements().len();
        let mut conj: Vec<Option<usize>> = vec![None; n];
        conj[xi] = Some(0);
        let mut queue = vec![xi];
        let mut head = 0;
        while head < queue.len() {
            let z = queue[head];
            head += 1;
            if z == yi {
                break;
            }
            let c = conj[z].unwrap();
            for &s in &gens {
                let w = self.conj(s, z);
                if conj[w].is_none() {
                    conj[w] = Some(self.mul(s, c));
                    queue.push(w);
                }
            }
        }
        let witness = self.element(conj[yi].expect("same class")).clone();
        debug_assert_eq!(&witness.conjugate(x), y);
        Ok(Some(witness))
    }

    /// Element indices of the subgroup generated by `gens`.
    pub fn subgroup_members(&self, gens: &[Permutation]) -> Result<ElementSet> {
        let idx = gens
            .iter()
            .map(|g| self.index_of(g).ok_or_else(|| Error::NotMember(g.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.closure(&idx))
    }

    /// Center of the group.
    pub fn center(&self) -> ElementSet {
        let gens = self.generator_indices();
        let n = self.elements().len();
        let mut set = ElementSet::with_capacity(n);
        for x in 0..n {
            if gens.iter().all(|&g| self.mul(g, x) == self.mul(x, g)) {
                set.insert(x);
            }
        }
        set
    }

    /// Derived subgroup: normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> ElementSet {
        let gens = self.generator_indices();
        let mut comms = Vec::new();
        for &a in &gens {
            for &b in &gens {
                let c = self.mul(
                    self.mul(a, b),
                    self.mul(self.inverse_index(a), self.inverse_index(b)),
                );
                if c != 0 && !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(comms)
    }

    /// Smallest normal subgroup containing the given elements.
    pub fn normal_closure(&self, mut gens: Vec<usize>) -> ElementSet {
        let ggens = self.generator_indices();
        let mut set = self.closure(&gens);
        loop {
            let mut grew = false;
            for x in set.ones().collect::<Vec<_>>() {
                for &g in &ggens {
                    let y = self.conj(g, x);
                    if !set.contains(y) {
                        gens.push(y);
                        set = self.closure(&gens);
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    /// Generators printed in cycle notation.
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators().iter().map(ToString::to_string).collect()
    }
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(degree {}, order {}, gens [", self.degree(), self.order())?;
        for (i, g) in self.generators().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("])")
    }
}

/// Primes dividing `n`, ascending, with multiplicities.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// True when `n` is a power of a single prime (1 counts as `p^0`).
pub fn prime_power_base(n: u64) -> Option<u64> {
    match factorize(n).as_slice() {
        [] => None,
        [(p, _)] => Some(*p),
        _ => None,
    }
}
