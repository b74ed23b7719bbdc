use super::PermutationGroup;
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// Lexicographically smallest element of the class.
    pub representative: Permutation,
    pub rep_index: usize,
    pub size: u64,
    pub element_order: u64,
}

/// Conjugacy classes ordered by representative; class 0 is the identity.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

impl ConjugacyClasses {
    pub(super) fn compute(g: &PermutationGroup) -> Self {
        let n = g.elements().len();
        let gens = g.generators();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            class_of[start] = id;
            let mut orbit = vec![start];
            let mut head = 0;
            while head < orbit.len() {
                let x = g.element(orbit[head]).clone();
                head += 1;
                for s in gens {
                    let y = g.index_of(&s.conjugate(&x)).expect("closed under conjugation");
                    if class_of[y] == u32::MAX {
                        class_of[y] = id;
                        orbit.push(y);
                    }
                }
            }
            // `start` is the smallest unassigned index, hence the class minimum.
            classes.push(ConjugacyClass {
                representative: g.element(start).clone(),
                rep_index: start,
                size: orbit.len() as u64,
                element_order: g.element_order(start),
            });
        }
        ConjugacyClasses { classes, class_of }
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class of the element with the given index.
    pub fn class_index(&self, element: usize) -> usize {
        self.class_of[element] as usize
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.size).collect()
    }
}
