//! Deterministic Schreier-Sims stabilizer chain.

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

/// Base, strong generators and transversals for a permutation group.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Builds the chain. The first base point is the smallest point moved by
    /// any generator; deeper base points are the smallest point moved by the
    /// residue that opened the level.
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators.iter().filter(|g| !g.is_identity()) {
            if !chain.strong.contains(g) {
                chain.strong.push(g.clone());
            }
        }
        if let Some(first) = chain.strong.iter().filter_map(|g| g.smallest_moved_point()).min() {
            chain.push_level(first);
        }
        // Every strong generator must move some base point.
        while let Some(g) = chain
            .strong
            .iter()
            .find(|g| chain.levels.iter().all(|l| g.apply(l.base_point) == l.base_point))
            .cloned()
        {
            chain.push_level(g.smallest_moved_point().unwrap());
        }
        chain.complete();
        chain
    }

    fn push_level(&mut self, point: usize) {
        self.levels.push(Level {
            base_point: point,
            transversal: Vec::new(),
            orbit: Vec::new(),
        });
    }

    /// Strong generators fixing the base points of levels `0..i`.
    fn level_generators(&self, i: usize) -> Vec<Permutation> {
        self.strong
            .iter()
            .filter(|g| self.levels[..i].iter().all(|l| g.apply(l.base_point) == l.base_point))
            .cloned()
            .collect()
    }

    fn rebuild_orbit(&mut self, i: usize, gens: &[Permutation]) {
        let bp = self.levels[i].base_point;
        let mut transversal = vec![None; self.degree];
        transversal[bp] = Some(Permutation::identity(self.degree));
        let mut orbit = vec![bp];
        let mut idx = 0;
        while idx < orbit.len() {
            let b = orbit[idx];
            for s in gens {
                let sb = s.apply(b);
                if transversal[sb].is_none() {
                    transversal[sb] = Some(s.compose(transversal[b].as_ref().unwrap()));
                    orbit.push(sb);
                }
            }
            idx += 1;
        }
        self.levels[i].transversal = transversal;
        self.levels[i].orbit = orbit;
    }

    /// Deepest-first verification of Schreier generators; any nontrivial
    /// residue becomes a new strong generator and verification restarts.
    fn complete(&mut self) {
        'restart: loop {
            for i in (0..self.levels.len()).rev() {
                let gens = self.level_generators(i);
                self.rebuild_orbit(i, &gens);
                let orbit = self.levels[i].orbit.clone();
                for &b in &orbit {
                    let ub = self.levels[i].transversal[b].clone().unwrap();
                    for s in &gens {
                        let sub = s.compose(&ub);
                        let usb = self.levels[i].transversal[s.apply(b)].as_ref().unwrap();
                        let schreier = usb.inverse().compose(&sub);
                        if schreier.is_identity() {
                            continue;
                        }
                        let (residue, level) = self.sift(&schreier, i + 1);
                        if !residue.is_identity() {
                            if level == self.levels.len() {
                                let bp = residue.smallest_moved_point().unwrap();
                                self.push_level(bp);
                            }
                            self.strong.push(residue);
                            continue 'restart;
                        }
                    }
                }
            }
            break;
        }
    }

    /// Strips `g` through the levels starting at `from`; returns the residue
    /// and the level at which stripping stopped.
    fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for i in from..self.levels.len() {
            let level = &self.levels[i];
            let b = h.apply(level.base_point);
            match level.transversal.get(b).and_then(Option::as_ref) {
                Some(u) => h = u.inverse().compose(&h),
                None => return (h, i),
            }
        }
        let depth = self.levels.len();
        (h, depth)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u64 {
        self.levels.iter().map(|l| l.orbit.len() as u64).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        self.sift(g, 0).0.is_identity()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Every element, as products of transversal representatives.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut acc = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * level.orbit.len());
            for &b in &level.orbit {
                let u = level.transversal[b].as_ref().unwrap();
                for h in &acc {
                    next.push(u.compose(h));
                }
            }
            acc = next;
        }
        acc
    }
}
