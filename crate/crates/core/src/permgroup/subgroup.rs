use std::fmt;
use std::sync::Arc;

use super::{ElementSet, PermutationGroup};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A subgroup of an ambient permutation group.
///
/// Carries the subgroup as a standalone [`PermutationGroup`] (same degree)
/// together with its member set inside the ambient element table.
#[derive(Clone)]
pub struct SubgroupHandle {
    ambient: PermutationGroup,
    group: PermutationGroup,
    members: Arc<ElementSet>,
}

impl SubgroupHandle {
    /// Subgroup generated by `generators`; every generator must lie in `ambient`.
    pub fn new(ambient: &PermutationGroup, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != ambient.degree() || !ambient.contains(g) {
                return Err(Error::NotMember(g.to_string()));
            }
        }
        let members = ambient.subgroup_members(&generators)?;
        let group = PermutationGroup::new(ambient.degree(), generators)?;
        Ok(SubgroupHandle {
            ambient: ambient.clone(),
            group,
            members: Arc::new(members),
        })
    }

    /// Subgroup with the given member set, which must be closed; generators
    /// are chosen greedily in canonical element order.
    pub fn from_members(ambient: &PermutationGroup, members: ElementSet) -> Self {
        let gens = ambient
            .generators_of(&members)
            .into_iter()
            .map(|i| ambient.element(i).clone())
            .collect();
        let group = PermutationGroup::new(ambient.degree(), gens).expect("ambient degree");
        debug_assert_eq!(group.order() as usize, members.count_ones(..));
        SubgroupHandle {
            ambient: ambient.clone(),
            group,
            members: Arc::new(members),
        }
    }

    pub fn trivial(ambient: &PermutationGroup) -> Self {
        SubgroupHandle::new(ambient, Vec::new()).expect("identity is a member")
    }

    pub fn whole(ambient: &PermutationGroup) -> Self {
        SubgroupHandle::new(ambient, ambient.generators().to_vec()).expect("generators are members")
    }

    pub fn ambient(&self) -> &PermutationGroup {
        &self.ambient
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Permutation] {
        self.group.generators()
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    /// Member set as ambient element indices.
    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.ambient
            .index_of(g)
            .is_some_and(|i| self.members.contains(i))
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn same_ambient(&self, other: &SubgroupHandle) -> bool {
        self.ambient.same_group(&other.ambient)
    }

    /// Equal as subsets of the ambient group.
    pub fn same_subgroup(&self, other: &SubgroupHandle) -> bool {
        self.same_ambient(other) && self.members == other.members
    }

    pub fn is_subgroup_of(&self, other: &SubgroupHandle) -> bool {
        self.members.is_subset(&other.members)
    }

    /// `g H g^-1`.
    pub fn conjugate_by(&self, g: &Permutation) -> SubgroupHandle {
        let gens = self.generators().iter().map(|h| g.conjugate(h)).collect();
        SubgroupHandle::new(&self.ambient, gens).expect("conjugate stays in the ambient group")
    }

    /// Ambient element indices of `g H g^-1` for the ambient element index `g`.
    pub fn conjugate_members(&self, g: usize) -> ElementSet {
        let mut out = ElementSet::with_capacity(self.members.len());
        for h in self.members.ones() {
            out.insert(self.ambient.conj(g, h));
        }
        out
    }

    pub fn normalizer(&self) -> SubgroupHandle {
        normalizer(&self.ambient, self)
    }

    pub fn centralizer(&self) -> SubgroupHandle {
        centralizer(&self.ambient, self)
    }

    pub fn is_normal(&self) -> bool {
        self.normalizer().order() == self.ambient.order()
    }

    /// Number of ambient conjugates, `|G : N_G(H)|`.
    pub fn conjugacy_class_size(&self) -> u64 {
        self.ambient.order() / self.normalizer().order()
    }

    /// Sorted ambient element indices; the canonical comparison key.
    pub fn member_indices(&self) -> Vec<usize> {
        self.members.ones().collect()
    }
}

impl fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, gens [", self.order())?;
        for (i, g) in self.generators().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("])")
    }
}

/// `N_G(H)`, computed element-wise.
pub fn normalizer(g: &PermutationGroup, h: &SubgroupHandle) -> SubgroupHandle {
    let gens: Vec<usize> = h
        .generators()
        .iter()
        .map(|x| g.index_of(x).expect("member"))
        .collect();
    let n = g.elements().len();
    let mut set = ElementSet::with_capacity(n);
    for x in 0..n {
        if gens.iter().all(|&s| h.contains_index(g.conj(x, s))) {
            set.insert(x);
        }
    }
    SubgroupHandle::from_members(g, set)
}

/// `C_G(H)`, computed element-wise.
pub fn centralizer(g: &PermutationGroup, h: &SubgroupHandle) -> SubgroupHandle {
    let gens: Vec<usize> = h
        .generators()
        .iter()
        .map(|x| g.index_of(x).expect("member"))
        .collect();
    let n = g.elements().len();
    let mut set = ElementSet::with_capacity(n);
    for x in 0..n {
        if gens.iter().all(|&s| g.mul(x, s) == g.mul(s, x)) {
            set.insert(x);
        }
    }
    SubgroupHandle::from_members(g, set)
}
