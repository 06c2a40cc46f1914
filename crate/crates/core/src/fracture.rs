//! Fracture graphs, splits and 2-fracture graphs.
//!
//! When every maximal parabolic `Gi` is intransitive, each label has at least
//! one *crossing* `i`-edge, one joining two distinct `Gi`-orbits. A fracture
//! graph picks one crossing edge per label; an `i`-split is a crossing edge
//! that every fracture graph must contain, that is, the only one for `i`.

use serde::Serialize;

use crate::prgraph::{Edge, PRGraph};
use crate::sggi::Sggi;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractureReport {
    /// Crossing edges per label, sorted.
    pub crossing: Vec<Vec<Edge>>,
    pub parabolic_transitive: Vec<bool>,
    pub splits: Vec<(usize, Edge)>,
    pub has_fracture: bool,
    pub has_two_fracture: bool,
    #[serde(skip)]
    pub sample_fracture: Option<PRGraph>,
    #[serde(skip)]
    pub sample_two_fracture: Option<PRGraph>,
}

/// `i`-edges of `g` whose endpoints lie in different `Gi`-orbits.
pub fn crossing_edges(s: &Sggi, g: &PRGraph, i: usize) -> Vec<Edge> {
    let gi = s.maximal_parabolic(i);
    let mut orbit_of = vec![0; s.degree()];
    for (k, orbit) in gi.orbits().iter().enumerate() {
        for &x in orbit {
            orbit_of[x] = k;
        }
    }
    g.edges_with_label(i)
        .filter(|e| orbit_of[e.u] != orbit_of[e.v])
        .copied()
        .collect()
}

pub fn analyze(s: &Sggi) -> FractureReport {
    let g = s.graph();
    let r = s.rank();
    let mut crossing: Vec<Vec<Edge>> = (0..r).map(|i| crossing_edges(s, &g, i)).collect();
    for c in &mut crossing {
        c.sort();
    }
    let parabolic_transitive = (0..r)
        .map(|i| s.maximal_parabolic(i).is_transitive())
        .collect();
    let has_fracture = r > 0 && crossing.iter().all(|c| !c.is_empty());
    let has_two_fracture = r > 0 && crossing.iter().all(|c| c.len() >= 2);
    let splits = crossing
        .iter()
        .filter(|_| has_fracture)
        .enumerate()
        .filter(|(_, c)| c.len() == 1)
        .map(|(i, c)| (i, c[0]))
        .collect();
    let sample = |per_label: usize| {
        let edges = crossing
            .iter()
            .flat_map(|c| c.iter().take(per_label).copied())
            .collect();
        PRGraph::new(s.degree(), r, edges).expect("subgraph of a valid graph")
    };
    FractureReport {
        sample_fracture: has_fracture.then(|| sample(1)),
        sample_two_fracture: has_two_fracture.then(|| sample(2)),
        crossing,
        parabolic_transitive,
        splits,
        has_fracture,
        has_two_fracture,
    }
}

/// Every path avoiding label `i` from an endpoint of the `i`-split to an
/// `l`-edge must use every label strictly between `l` and `i`.
pub fn check_split_path_property(g: &PRGraph, split: (usize, Edge)) -> bool {
    let (i, e) = split;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n()];
    for f in g.edges() {
        if f.label != i {
            adj[f.u].push((f.v, f.label));
            adj[f.v].push((f.u, f.label));
        }
    }
    let between = |l: usize| -> u32 {
        let (lo, hi) = (l.min(i), l.max(i));
        (lo + 1..hi).fold(0, |m, k| m | 1 << k)
    };
    let mut on_path = vec![false; g.n()];
    [e.u, e.v]
        .iter()
        .all(|&start| walk(start, 0, &adj, &between, &mut on_path))
}

fn walk(
    x: usize,
    seen: u32,
    adj: &[Vec<(usize, usize)>],
    between: &dyn Fn(usize) -> u32,
    on_path: &mut [bool],
) -> bool {
    on_path[x] = true;
    let ok = adj[x].iter().all(|&(y, l)| {
        let need = between(l);
        seen & need == need && (on_path[y] || walk(y, seen | 1 << l, adj, between, on_path))
    });
    on_path[x] = false;
    ok
}

/// If `ρi` is a 2-transposition and some `i`-edge is doubled by a `j`-edge,
/// then `i` must be the label of a split. Vacuously true without a fracture
/// graph.
pub fn check_double_edge_split(s: &Sggi, g: &PRGraph) -> bool {
    let report = analyze(s);
    if !report.has_fracture {
        return true;
    }
    (0..s.rank()).all(|i| {
        let two_transposition = s.generators()[i].cycle_type() == [2, 2];
        let doubled = g.edges_with_label(i).any(|e| {
            g.edges()
                .iter()
                .any(|f| f.label != i && (f.u, f.v) == (e.u, e.v))
        });
        !(two_transposition && doubled) || report.splits.iter().any(|&(l, _)| l == i)
    })
}
