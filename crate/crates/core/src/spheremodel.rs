//! Fixed-point data of the linear sphere model `S(V^{⊕k})` and the abstract
//! join calculus for finiteness obstructions.

use std::fmt;

use crate::chartab::{fixed_subspace_dim, Character, ClassFunction};
use crate::error::{Error, Result};
use crate::family::CompatibleFamily;
use crate::perm::Permutation;
use crate::permgroup::{factorize, prime_power_base, SubgroupHandle};
use crate::pstructure::rank_profile;

/// A fixed-point set: empty, or a sphere of the given dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedSphere {
    Empty,
    Sphere(u64),
}

impl FixedSphere {
    /// The fixed set of `S(W)` for a complex `W` with `dim_C W^H = d`.
    pub fn from_complex_dim(d: u64) -> Self {
        if d == 0 {
            FixedSphere::Empty
        } else {
            FixedSphere::Sphere(2 * d - 1)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        match self {
            FixedSphere::Empty => 0,
            FixedSphere::Sphere(m) => 1 + if m % 2 == 0 { 1 } else { -1 },
        }
    }

    /// `Empty` below every sphere.
    pub fn le(&self, other: &FixedSphere) -> bool {
        match (self, other) {
            (FixedSphere::Empty, _) => true,
            (FixedSphere::Sphere(_), FixedSphere::Empty) => false,
            (FixedSphere::Sphere(a), FixedSphere::Sphere(b)) => a <= b,
        }
    }
}

impl fmt::Display for FixedSphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedSphere::Empty => f.write_str("empty"),
            FixedSphere::Sphere(m) => write!(f, "S^{m}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DimensionEntry {
    pub subgroup: SubgroupHandle,
    pub rank: u32,
    /// `dim_C V_H^H`.
    pub fixed_dim: u64,
    pub sphere: FixedSphere,
}

/// One entry per stored class of prime-power subgroups, in the family's order.
#[derive(Clone, Debug)]
pub struct DimensionFunction {
    pub k: u64,
    pub entries: Vec<DimensionEntry>,
}

pub fn dimension_function(cf: &CompatibleFamily, k: u64) -> Result<DimensionFunction> {
    if k == 0 {
        return Err(Error::InvalidArgument("join multiplier k must be at least 1".into()));
    }
    let mut entries = Vec::with_capacity(cf.assignments().len());
    for t in cf.assignments() {
        let whole = SubgroupHandle::whole(t.subgroup.group());
        let d = fixed_subspace_dim(&t.character, &whole)?;
        entries.push(DimensionEntry {
            subgroup: t.subgroup.clone(),
            rank: rank_profile(t.subgroup.group())?.rank,
            fixed_dim: d,
            sphere: FixedSphere::from_complex_dim(k * d),
        });
    }
    Ok(DimensionFunction { k, entries })
}

impl DimensionFunction {
    /// Subgroups with a nonempty fixed sphere.
    pub fn isotropy(&self) -> Vec<&DimensionEntry> {
        self.entries
            .iter()
            .filter(|e| e.sphere != FixedSphere::Empty)
            .collect()
    }

    /// `H <= K` up to conjugacy implies `dim(H) >= dim(K)`.
    pub fn is_monotone(&self) -> bool {
        let g = match self.entries.first() {
            Some(e) => e.subgroup.ambient().clone(),
            None => return true,
        };
        for a in &self.entries {
            for b in &self.entries {
                if a.subgroup.order() < b.subgroup.order()
                    && b.subgroup.order() % a.subgroup.order() == 0
                    && g.elements().iter().any(|x| a.subgroup.conjugate_by(x).is_subgroup_of(&b.subgroup))
                    && !b.sphere.le(&a.sphere)
                {
                    return false;
                }
            }
        }
        true
    }
}

/// `Ok(None)` when every rank-two prime-power subgroup has empty fixed set,
/// otherwise the first offender.
pub fn verify_rank_one_isotropy(cf: &CompatibleFamily) -> Result<Option<SubgroupHandle>> {
    let df = dimension_function(cf, 1)?;
    Ok(df
        .entries
        .into_iter()
        .find(|e| e.rank >= 2 && e.fixed_dim > 0)
        .map(|e| e.subgroup))
}

/// Fixed-point data of a non-identity element.
#[derive(Clone, Debug)]
pub struct ElementFixedData {
    pub element: Permutation,
    pub order: u64,
    /// For prime-power order: the fixed set of `<g>`.
    pub sphere: Option<FixedSphere>,
    /// For composite order: each prime-power part with its fixed dimension.
    pub parts: Vec<(u64, Permutation, u64)>,
}

#[derive(Clone, Debug)]
pub struct EulerReport {
    /// Euler characteristic 0 on every prime-power-order element's fixed set.
    pub holds: bool,
    pub elements: Vec<ElementFixedData>,
}

impl EulerReport {
    pub fn composite(&self) -> impl Iterator<Item = &ElementFixedData> {
        self.elements.iter().filter(|e| e.sphere.is_none())
    }
}

/// Walks one representative per conjugacy class of `G \ {1}`.
pub fn euler_fixed_check(cf: &CompatibleFamily, k: u64) -> Result<EulerReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("join multiplier k must be at least 1".into()));
    }
    let g = cf.base().group();
    let fixed_dim_of = |x: &Permutation| -> Result<u64> {
        let h = SubgroupHandle::new(g, vec![x.clone()])?;
        let t = cf.character_of(&h)?;
        fixed_subspace_dim(&t.character, &SubgroupHandle::whole(h.group()))
    };
    let mut holds = true;
    let mut elements = Vec::new();
    for c in g.conjugacy_classes().classes().iter().skip(1) {
        let x = &c.representative;
        let order = c.element_order;
        if prime_power_base(order).is_some() {
            let sphere = FixedSphere::from_complex_dim(k * fixed_dim_of(x)?);
            holds &= sphere.euler_characteristic() == 0;
            elements.push(ElementFixedData {
                element: x.clone(),
                order,
                sphere: Some(sphere),
                parts: Vec::new(),
            });
        } else {
            let mut parts = Vec::new();
            for (p, e) in factorize(order) {
                let q = p.pow(e);
                // x^(order/q * u) with u ≡ (order/q)^-1 mod q is the p-part of x.
                let m = order / q;
                let u = (1..q).find(|u| (m * u) % q == 1).unwrap_or(1);
                let part = x.pow(m * u);
                parts.push((p, part.clone(), fixed_dim_of(&part)?));
            }
            elements.push(ElementFixedData {
                element: x.clone(),
                order,
                sphere: None,
                parts,
            });
        }
    }
    Ok(EulerReport { holds, elements })
}

/// `Σ (-1)^i [H_i(S(V^{⊕k}); Q)]` as a virtual character.
#[derive(Clone, Debug)]
pub struct RationalEulerClass {
    pub sphere_dim: u64,
    pub class: ClassFunction,
}

impl RationalEulerClass {
    pub fn vanishes(&self) -> bool {
        self.class.values().iter().all(|v| v.is_zero())
    }
}

/// Homology of `S(V^{⊕k})` sits in degrees `0` and `2k deg χ - 1`, both with
/// trivial action since unitary maps preserve orientation.
pub fn rational_euler_class(chi: &Character, k: u64) -> Result<RationalEulerClass> {
    let deg = chi
        .degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::InvalidArgument("rational Euler class needs a character of positive degree".into()))?;
    if k == 0 {
        return Err(Error::InvalidArgument("join multiplier k must be at least 1".into()));
    }
    let top = 2 * k * deg as u64 - 1;
    let h0 = ClassFunction::trivial(chi.group());
    let h_top = ClassFunction::trivial(chi.group());
    let sign = if top.is_multiple_of(2) { 1 } else { -1 };
    Ok(RationalEulerClass {
        sphere_dim: top,
        class: h0.add(&h_top.scale(sign))?,
    })
}

/// A finite abelian group `⊕ Z/n_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    invariant_factors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianElement {
    group: AbelianGroup,
    coords: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        if invariant_factors.contains(&0) {
            return Err(Error::InvalidArgument("invariant factors must be positive".into()));
        }
        Ok(AbelianGroup { invariant_factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        AbelianGroup::new(vec![n])
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn element(&self, coords: &[i64]) -> Result<AbelianElement> {
        if coords.len() != self.invariant_factors.len() {
            return Err(Error::Shape(format!(
                "{} coordinates for {} invariant factors",
                coords.len(),
                self.invariant_factors.len()
            )));
        }
        Ok(AbelianElement {
            group: self.clone(),
            coords: coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement {
            group: self.clone(),
            coords: vec![0; self.invariant_factors.len()],
        }
    }
}

impl AbelianElement {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> AbelianElement {
        let coords: Vec<i64> = self
            .coords
            .iter()
            .zip(&self.group.invariant_factors)
            .map(|(&c, &n)| ((c as i128 * k as i128).rem_euclid(n as i128)) as i64)
            .collect();
        self.group.element(&coords).expect("same shape")
    }

    pub fn add(&self, other: &AbelianElement) -> Result<AbelianElement> {
        if self.group != other.group {
            return Err(Error::Mismatch("elements of different abelian groups".into()));
        }
        let coords: Vec<i64> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a + b) as i64)
            .collect();
        self.group.element(&coords)
    }
}

fn sign(m: u64) -> i64 {
    if m.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `σ(X_1 * X_2) = (-1)^{m_2} σ(X_1) + (-1)^{m_1} σ(X_2)`; the join of an
/// `(m_1 - 1)`- and an `(m_2 - 1)`-resolution is an `(m_1 + m_2 - 1)`-resolution.
pub fn join_sigma(s1: &AbelianElement, m1: u64, s2: &AbelianElement, m2: u64) -> Result<(AbelianElement, u64)> {
    let value = s1.scale(sign(m2)).add(&s2.scale(sign(m1)))?;
    Ok((value, m1 + m2))
}

/// Obstruction of an `(m-1)`-sphere resolution with `σ` of additive order `order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObstructionSymbol {
    pub order: u64,
    pub dim_m: u64,
}

/// `l`-fold self-joins: `(joins, σ as a multiple of the generator, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinExponent {
    pub l: u64,
    pub trace: Vec<(u64, u64, u64)>,
}

/// Smallest `l` with `σ(*_l X) = 0`, found by iterating [`join_sigma`] in `Z/order`.
pub fn join_exponent(order: u64, m: u64) -> Result<JoinExponent> {
    if order == 0 {
        return Err(Error::InvalidArgument("order of σ must be positive".into()));
    }
    if m == 0 || m % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "dimension parameter m = {m}: only even m arise from complex representation spheres"
        )));
    }
    let z = AbelianGroup::cyclic(order)?;
    let s = z.element(&[1])?;
    let mut acc = s.clone();
    let mut dim = m;
    let mut trace = vec![(1, acc.coords()[0], dim)];
    let mut l = 1;
    while !acc.is_zero() {
        let (next, d) = join_sigma(&acc, dim, &s, m)?;
        acc = next;
        dim = d;
        l += 1;
        trace.push((l, acc.coords()[0], dim));
    }
    Ok(JoinExponent { l, trace })
}

impl ObstructionSymbol {
    pub fn new(order: u64, dim_m: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("order of σ must be positive".into()));
        }
        if dim_m == 0 || dim_m % 2 == 1 {
            return Err(Error::Unsupported(format!("dimension parameter m = {dim_m} is not a positive even integer")));
        }
        Ok(ObstructionSymbol { order, dim_m })
    }

    pub fn join_exponent(&self) -> Result<JoinExponent> {
        join_exponent(self.order, self.dim_m)
    }
}
