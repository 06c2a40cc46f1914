//! Stabilizer chain built by deterministic Schreier–Sims.

use super::Permutation;

#[derive(Debug, Clone)]
pub(crate) struct Level {
    pub base: usize,
    /// Orbit of `base` under the level's strong generators, in discovery order.
    pub orbit: Vec<usize>,
    /// `reps[k]` maps `base` to `orbit[k]`; `reps[0]` is the identity.
    pub reps: Vec<Permutation>,
    pub reps_inv: Vec<Permutation>,
    /// Position of each point in `orbit`.
    pub index: Vec<Option<u16>>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Level {
        let id = Permutation::identity(degree);
        let mut index = vec![None; degree];
        index[base] = Some(0);
        Level {
            base,
            orbit: vec![base],
            reps: vec![id],
            reps_inv: vec![id],
            index,
        }
    }

    fn rebuild(&mut self, degree: usize, gens: &[&Permutation]) {
        *self = Level::new(degree, self.base);
        let mut head = 0;
        while head < self.orbit.len() {
            let from = self.orbit[head];
            let u = self.reps[head];
            for s in gens {
                let to = s.image(from);
                if self.index[to].is_none() {
                    self.index[to] = Some(self.orbit.len() as u16);
                    self.orbit.push(to);
                    let rep = u.then(s);
                    self.reps_inv.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            head += 1;
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub levels: Vec<Level>,
    /// Strong generators with the number of leading base points each one fixes.
    pub strong: Vec<(Permutation, usize)>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
            strong: Vec::new(),
        };
        for g in gens {
            if g.is_identity() || chain.strong.iter().any(|(s, _)| s == g) {
                continue;
            }
            let fixed = chain.fixed_prefix(g);
            if fixed == chain.levels.len() {
                let b = g.first_moved_point().expect("nonidentity");
                chain.levels.push(Level::new(degree, b));
            }
            chain.strong.push((*g, 0));
        }
        chain.recompute_fix_levels();
        chain.complete();
        chain
    }

    /// Number of leading base points fixed by `g`.
    fn fixed_prefix(&self, g: &Permutation) -> usize {
        self.levels
            .iter()
            .take_while(|l| g.image(l.base) == l.base)
            .count()
    }

    fn recompute_fix_levels(&mut self) {
        let fixes: Vec<usize> = self
            .strong
            .iter()
            .map(|(g, _)| self.fixed_prefix(g))
            .collect();
        for ((_, f), v) in self.strong.iter_mut().zip(fixes) {
            *f = v;
        }
    }

    fn rebuild_level(&mut self, i: usize) {
        let gens: Vec<&Permutation> = self
            .strong
            .iter()
            .filter(|(_, f)| *f >= i)
            .map(|(g, _)| g)
            .collect();
        let degree = self.degree;
        self.levels[i].rebuild(degree, &gens);
    }

    /// Sifts `g` from level `from`; returns the residue and the level at which
    /// sifting stopped (`levels.len()` when it passed every level).
    pub fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.image(level.base);
            match level.index[beta] {
                Some(k) => g = g.then(&level.reps_inv[k as usize]),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        for i in 0..self.levels.len() {
            self.rebuild_level(i);
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let lvl = i as usize;
            self.rebuild_level(lvl);
            let gens: Vec<Permutation> = self
                .strong
                .iter()
                .filter(|(_, f)| *f >= lvl)
                .map(|(g, _)| *g)
                .collect();
            let level = self.levels[lvl].clone();
            for (k, _) in level.orbit.iter().enumerate() {
                let u = level.reps[k];
                for s in &gens {
                    let img = s.image(level.orbit[k]);
                    let back = level.index[img].expect("orbit is closed") as usize;
                    let schreier = u.then(s).then(&level.reps_inv[back]);
                    let (h, j) = self.strip(schreier, lvl + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        if j == self.levels.len() {
                            let b = h.first_moved_point().expect("nonidentity residue");
                            self.levels.push(Level::new(self.degree, b));
                            self.recompute_fix_levels();
                        }
                        self.strong.push((h, j));
                        for l in lvl + 1..=j {
                            self.rebuild_level(l);
                        }
                        i = j as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, j) = self.strip(*g, 0);
        j == self.levels.len() && h.is_identity()
    }
}
