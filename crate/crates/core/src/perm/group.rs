use std::sync::Arc;

use super::chain::StabChain;
use super::{PermError, Permutation, MAX_DEGREE};

/// Default element budget for [`intersect`]; covers every subgroup of `A11`.
pub const DEFAULT_CAP: u128 = 20_000_000;

/// A permutation group given by generators, with its stabilizer chain.
///
/// The chain is computed once at construction; clones share it.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: Arc<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<PermGroup, PermError> {
        if degree == 0 {
            return Err(PermError::EmptyDegree);
        }
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        let chain = StabChain::new(degree, &generators);
        Ok(PermGroup {
            degree,
            generators,
            chain: Arc::new(chain),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, Vec::new()).expect("valid degree")
    }

    /// The symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        if degree > 1 {
            gens.push(Permutation::transposition(degree, 0, 1));
            gens.push(Permutation::long_cycle(degree));
        }
        PermGroup::new(degree, gens).expect("valid degree")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    /// Base points of the stabilizer chain, in order.
    pub fn base(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.base).collect()
    }

    /// Orbit sizes along the chain; their product is the group order.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.chain.strong.iter().map(|(g, _)| *g).collect()
    }

    /// Membership by sifting through the chain. Degree mismatches are never members.
    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.chain.contains(g)
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.levels.is_empty()
    }

    /// Orbit partition of the natural action, each orbit sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        self.orbits()
            .into_iter()
            .find(|o| o.contains(&point))
            .unwrap_or_default()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// Every element exactly once, without storing them.
    ///
    /// Elements are produced as products `t_k ⋯ t_1 t_0` of coset
    /// representatives with the top-level factor varying slowest, so each
    /// point stabilizer in the chain is exhausted before the next coset starts.
    pub fn elements(&self) -> Elements<'_> {
        Elements::new(&self.chain)
    }

    /// Whether the group is primitive on its (single) orbit.
    ///
    /// Returns [`Primitivity::Imprimitive`] with a minimal nontrivial block
    /// system otherwise.
    pub fn primitivity(&self) -> Result<Primitivity, PermError> {
        if !self.is_transitive() {
            return Err(PermError::Intransitive);
        }
        let all: Vec<usize> = (0..self.degree).collect();
        self.primitivity_on(&all)
    }

    pub fn is_primitive(&self) -> Result<bool, PermError> {
        Ok(matches!(self.primitivity()?, Primitivity::Primitive))
    }

    /// Primitivity of the action on one orbit `points`.
    pub fn primitivity_on(&self, points: &[usize]) -> Result<Primitivity, PermError> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let Some(&b0) = pts.first() else {
            return Err(PermError::Intransitive);
        };
        if self.orbit_of(b0) != pts {
            return Err(PermError::Intransitive);
        }
        let mut best: Option<Vec<Vec<usize>>> = None;
        for &x in &pts[1..] {
            let blocks = minimal_blocks(self.degree, &self.generators, &pts, b0, x);
            if blocks.len() > 1 && best.as_ref().is_none_or(|b| blocks[0].len() < b[0].len()) {
                best = Some(blocks);
            }
        }
        Ok(match best {
            None => Primitivity::Primitive,
            Some(blocks) => Primitivity::Imprimitive(blocks),
        })
    }

    /// The group generated by the images of the generators on the points of
    /// `points` (which must be a union of orbits), relabelled to `0..len`.
    pub fn restricted_to(&self, points: &[usize]) -> Result<PermGroup, PermError> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        let mut pos = vec![usize::MAX; self.degree];
        for (k, &p) in pts.iter().enumerate() {
            pos[p] = k;
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut images = Vec::with_capacity(pts.len());
            for &p in &pts {
                let q = pos[g.image(p)];
                if q == usize::MAX {
                    return Err(PermError::NotInvariant);
                }
                images.push(q);
            }
            gens.push(Permutation::from_images(&images)?);
        }
        PermGroup::new(pts.len(), gens)
    }
}

/// Outcome of a primitivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    /// A minimal nontrivial block system, blocks sorted.
    Imprimitive(Vec<Vec<usize>>),
}

/// Orbits of the group generated by `gens`, without building a chain.
pub fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(degree);
    for g in gens {
        for p in 0..degree {
            uf.union(p, g.image(p));
        }
    }
    uf.classes(0..degree)
}

/// Finest block system of the transitive action on `points` in which `a`
/// and `b` share a block.
fn minimal_blocks(
    degree: usize,
    gens: &[Permutation],
    points: &[usize],
    a: usize,
    b: usize,
) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(degree);
    let mut queue = vec![(a, b)];
    uf.union(a, b);
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.image(x), g.image(y));
            if uf.union(gx, gy) {
                queue.push((gx, gy));
            }
        }
    }
    uf.classes(points.iter().copied())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn classes(&mut self, points: impl Iterator<Item = usize>) -> Vec<Vec<usize>> {
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for p in points {
            let r = self.find(p);
            by_root.entry(r).or_default().push(p);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        out
    }
}

/// Streaming iterator over the elements of a [`PermGroup`].
pub struct Elements<'a> {
    chain: &'a StabChain,
    idx: Vec<usize>,
    partial: Vec<Permutation>,
    started: bool,
    done: bool,
}

impl<'a> Elements<'a> {
    fn new(chain: &'a StabChain) -> Self {
        let k = chain.levels.len();
        let id = Permutation::identity(chain.degree);
        Elements {
            chain,
            idx: vec![0; k],
            partial: vec![id; k],
            started: false,
            done: false,
        }
    }

    fn current(&self) -> Permutation {
        self.partial
            .last()
            .copied()
            .unwrap_or_else(|| Permutation::identity(self.chain.degree))
    }
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        let levels = &self.chain.levels;
        let k = levels.len();
        // odometer: the deepest level turns fastest
        let mut l = k;
        loop {
            if l == 0 {
                self.done = true;
                return None;
            }
            l -= 1;
            if self.idx[l] + 1 < levels[l].reps.len() {
                self.idx[l] += 1;
                break;
            }
            self.idx[l] = 0;
        }
        #[allow(clippy::needless_range_loop)]
        for m in l..k {
            let t = &levels[m].reps[self.idx[m]];
            self.partial[m] = if m == 0 {
                *t
            } else {
                t.then(&self.partial[m - 1])
            };
        }
        Some(self.current())
    }
}

/// `G ∩ H`, by streaming the smaller group through membership in the other.
///
/// A generating set for the result is collected incrementally: an element
/// joins it only when it does not already lie in the subgroup generated so far.
pub fn intersect(g: &PermGroup, h: &PermGroup, cap: u128) -> Result<PermGroup, PermError> {
    if g.degree() != h.degree() {
        return Err(PermError::DegreeMismatch {
            left: g.degree(),
            right: h.degree(),
        });
    }
    let (small, big) = if g.order() <= h.order() {
        (g, h)
    } else {
        (h, g)
    };
    if small.order() > cap {
        return Err(PermError::BudgetExceeded {
            order: small.order(),
            cap,
        });
    }
    if big.order() == small.order() && small.is_subgroup_of(big) {
        return Ok(small.clone());
    }
    let mut result = PermGroup::trivial(g.degree());
    let mut gens = Vec::new();
    for x in small.elements() {
        if !x.is_identity() && big.contains(&x) && !result.contains(&x) {
            gens.push(x);
            result = PermGroup::new(g.degree(), gens.clone())?;
        }
    }
    Ok(result)
}

/// First element (in [`PermGroup::elements`] order of the smaller of `g`, `h`)
/// lying in both groups but outside `inner`, or `None` when
/// `g ∩ h ⊆ inner`.
pub fn first_common_outside(
    g: &PermGroup,
    h: &PermGroup,
    inner: &PermGroup,
    cap: u128,
) -> Result<Option<Permutation>, PermError> {
    if g.degree() != h.degree() || g.degree() != inner.degree() {
        return Err(PermError::DegreeMismatch {
            left: g.degree(),
            right: h.degree(),
        });
    }
    let (small, big) = if g.order() <= h.order() {
        (g, h)
    } else {
        (h, g)
    };
    if inner.order() == small.order() && small.is_subgroup_of(inner) {
        return Ok(None);
    }
    if small.order() > cap {
        return Err(PermError::BudgetExceeded {
            order: small.order(),
            cap,
        });
    }
    Ok(small
        .elements()
        .find(|x| !inner.contains(x) && big.contains(x)))
}

/// Whether `t1[i] ↦ t2[i]` extends to an isomorphism `⟨t1⟩ → ⟨t2⟩`.
///
/// The paired permutations act on the disjoint union of both point sets; the
/// map is an isomorphism exactly when that diagonal group is no larger than
/// either factor.
pub fn diagonal_isomorphic(t1: &[Permutation], t2: &[Permutation]) -> Result<bool, PermError> {
    if t1.len() != t2.len() {
        return Err(PermError::LengthMismatch {
            left: t1.len(),
            right: t2.len(),
        });
    }
    let n1 = t1.first().map_or(1, Permutation::degree);
    let n2 = t2.first().map_or(1, Permutation::degree);
    let g1 = PermGroup::new(n1, t1.to_vec())?;
    let g2 = PermGroup::new(n2, t2.to_vec())?;
    if g1.order() != g2.order() {
        return Ok(false);
    }
    let paired: Vec<Permutation> = t1
        .iter()
        .zip(t2)
        .map(|(a, b)| a.direct_sum(b))
        .collect::<Result<_, _>>()?;
    let diag = PermGroup::new(n1 + n2, paired)?;
    Ok(diag.order() == g1.order())
}
