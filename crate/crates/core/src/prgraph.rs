//! Permutation representation graphs.
//!
//! A tuple of involutions `(ρ0, …, ρ(r-1))` on `n` points is drawn as a
//! multigraph on `n` vertices with an `i`-edge `{a, b}` whenever `aρi = b`,
//! `a ≠ b`. For each label the `i`-edges form a partial matching, and the
//! tuple can be read back off the graph.
//!
//! The text format, one directive per line with 1-based vertices:
//!
//! ```text
//! # comment
//! points 4
//! rank 3
//! edge 1 2 0
//! edge 2 3 1
//! edge 3 4 2
//! ```

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::perm::{orbits_of, Permutation, MAX_DEGREE};

/// A labelled edge with `u < v` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize, label: usize) -> Edge {
        Edge {
            u: a.min(b),
            v: a.max(b),
            label,
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}:{}", self.u + 1, self.v + 1, self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {} is on two {label}-edges", vertex + 1)]
    MatchingViolation { vertex: usize, label: usize },
    #[error("edge label {label} out of range for rank {rank}")]
    LabelOutOfRange { label: usize, rank: usize },
    #[error("vertex {} out of range for {n} points", vertex + 1)]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {}", vertex + 1)]
    Loop { vertex: usize },
    #[error("generator {index} is not an involution (or the identity)")]
    NotInvolution { index: usize },
    #[error("generator {index} has degree {found}, expected {expected}")]
    Degree {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("{0} points exceeds the supported maximum")]
    TooManyPoints(usize),
}

/// Edge-labelled multigraph on `n` vertices with labels `0..rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PRGraph {
    n: usize,
    rank: usize,
    edges: Vec<Edge>,
}

impl PRGraph {
    /// Validates the matching invariant and sorts edges canonically.
    pub fn new(n: usize, rank: usize, mut edges: Vec<Edge>) -> Result<PRGraph, GraphError> {
        if n > MAX_DEGREE {
            return Err(GraphError::TooManyPoints(n));
        }
        let mut seen = BTreeSet::new();
        for e in &mut edges {
            *e = Edge::new(e.u, e.v, e.label);
            if e.u == e.v {
                return Err(GraphError::Loop { vertex: e.u });
            }
            if e.v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: e.v, n });
            }
            if e.label >= rank {
                return Err(GraphError::LabelOutOfRange {
                    label: e.label,
                    rank,
                });
            }
            for x in [e.u, e.v] {
                if !seen.insert((x, e.label)) {
                    return Err(GraphError::MatchingViolation {
                        vertex: x,
                        label: e.label,
                    });
                }
            }
        }
        edges.sort();
        Ok(PRGraph { n, rank, edges })
    }

    pub fn edgeless(n: usize, rank: usize) -> PRGraph {
        PRGraph {
            n,
            rank,
            edges: Vec::new(),
        }
    }

    /// The graph of a tuple of involutions (identity entries contribute no edges).
    pub fn from_generators(gens: &[Permutation], n: usize) -> Result<PRGraph, GraphError> {
        let mut edges = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if g.degree() != n {
                return Err(GraphError::Degree {
                    index: i,
                    found: g.degree(),
                    expected: n,
                });
            }
            if !(*g * *g).is_identity() {
                return Err(GraphError::NotInvolution { index: i });
            }
            for a in 0..n {
                let b = g.image(a);
                if a < b {
                    edges.push(Edge {
                        u: a,
                        v: b,
                        label: i,
                    });
                }
            }
        }
        PRGraph::new(n, gens.len(), edges)
    }

    /// `ρi` is the product of the transpositions on the `i`-edges.
    pub fn to_generators(&self) -> Vec<Permutation> {
        (0..self.rank)
            .map(|i| {
                let mut images: Vec<usize> = (0..self.n).collect();
                for e in self.edges.iter().filter(|e| e.label == i) {
                    images.swap(e.u, e.v);
                }
                Permutation::from_images(&images).expect("matching gives a bijection")
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_with_label(&self, label: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.label == label)
    }

    /// The `label`-neighbour of `x`, if any.
    pub fn neighbour(&self, x: usize, label: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|e| e.label == label && (e.u == x || e.v == x))
            .map(|e| e.other(x))
    }

    /// Relabels `i ↦ rank-1-i`.
    pub fn dual(&self) -> PRGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.u, e.v, self.rank - 1 - e.label))
            .collect();
        PRGraph::new(self.n, self.rank, edges).expect("relabelling keeps matchings")
    }

    /// Keeps only edges whose label is in `keep`; rank and labels are unchanged.
    pub fn restrict(&self, keep: &[usize]) -> PRGraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| keep.contains(&e.label))
            .copied()
            .collect();
        PRGraph {
            n: self.n,
            rank: self.rank,
            edges,
        }
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let gens = self.to_generators();
        orbits_of(self.n, &gens)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Multiple edges and alternating squares, each reported once.
    pub fn find_motifs(&self) -> Vec<Motif> {
        let mut out = Vec::new();
        let mut parallel: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for e in &self.edges {
            parallel.entry((e.u, e.v)).or_default().push(e.label);
        }
        for ((u, v), labels) in parallel {
            let kind = match labels.len() {
                1 => continue,
                2 => MotifKind::DoubleEdge,
                _ => MotifKind::TripleEdge,
            };
            out.push(Motif {
                kind,
                labels,
                vertices: vec![u, v],
            });
        }
        let mut squares = BTreeSet::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                for a in 0..self.n {
                    let walk = || -> Option<[usize; 4]> {
                        let b = self.neighbour(a, i)?;
                        let c = self.neighbour(b, j)?;
                        let d = self.neighbour(c, i)?;
                        (self.neighbour(d, j)? == a).then_some([a, b, c, d])
                    };
                    let Some(cycle) = walk() else { continue };
                    let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
                    if distinct.len() != 4 || cycle[0] != *distinct.first().unwrap() {
                        continue;
                    }
                    // start at the least vertex, go along its i-edge
                    squares.insert((i, j, cycle));
                }
            }
        }
        for (i, j, cycle) in squares {
            out.push(Motif {
                kind: MotifKind::Square,
                labels: vec![i, j],
                vertices: cycle.to_vec(),
            });
        }
        out
    }

    /// A relabelling-invariant encoding: two graphs have equal canonical forms
    /// iff a label-preserving vertex bijection maps one onto the other.
    pub fn canonical_form(&self) -> CanonicalForm {
        let mut parts: Vec<(usize, Vec<EdgeCode>)> = self
            .components()
            .into_iter()
            .map(|comp| {
                let best = comp
                    .iter()
                    .map(|&s| self.numbered_from(s, comp.len()))
                    .min()
                    .expect("nonempty component");
                (comp.len(), best)
            })
            .collect();
        parts.sort();
        let mut edges = Vec::new();
        let mut offset = 0u8;
        for (size, part) in parts {
            edges.extend(
                part.into_iter()
                    .map(|(u, v, l)| (u + offset, v + offset, l)),
            );
            offset += size as u8;
        }
        CanonicalForm {
            n: self.n,
            rank: self.rank,
            edges,
        }
    }

    /// Edges of the component of `start`, renumbered in breadth-first order
    /// (neighbours visited by increasing label).
    fn numbered_from(&self, start: usize, size: usize) -> Vec<EdgeCode> {
        let mut num = vec![usize::MAX; self.n];
        num[start] = 0;
        let mut next = 1;
        let mut queue = VecDeque::from([start]);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push((e.label, e.v));
            adj[e.v].push((e.label, e.u));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        while let Some(x) = queue.pop_front() {
            for &(_, y) in &adj[x] {
                if num[y] == usize::MAX {
                    num[y] = next;
                    next += 1;
                    queue.push_back(y);
                }
            }
        }
        debug_assert_eq!(next, size);
        let mut out: Vec<EdgeCode> = self
            .edges
            .iter()
            .filter(|e| num[e.u] != usize::MAX)
            .map(|e| {
                let (a, b) = (num[e.u], num[e.v]);
                (a.min(b) as u8, a.max(b) as u8, e.label as u8)
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_isomorphic(&self, other: &PRGraph) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// An edge joining a fixed point of `ρi` to a moved point has label
    /// `i - 1` or `i + 1`. Holds whenever the generators satisfy the
    /// commuting property.
    pub fn fixed_point_edges_adjacent(&self) -> bool {
        (0..self.rank).all(|i| {
            let moved: BTreeSet<usize> =
                self.edges_with_label(i).flat_map(|e| [e.u, e.v]).collect();
            self.edges
                .iter()
                .filter(|e| moved.contains(&e.u) != moved.contains(&e.v))
                .all(|e| e.label + 1 == i || e.label == i + 1)
        })
    }

    /// For non-adjacent labels `i`, `j`, every component of the `{i,j}`
    /// subgraph with more than two vertices is an alternating square.
    pub fn components_are_squares(&self) -> bool {
        (0..self.rank).all(|i| {
            (i + 2..self.rank).all(|j| {
                let sub = self.restrict(&[i, j]);
                sub.components().iter().filter(|c| c.len() > 2).all(|c| {
                    c.len() == 4
                        && c.iter().all(|&x| {
                            sub.neighbour(x, i).is_some_and(|y| y != x)
                                && sub.neighbour(x, j).is_some()
                        })
                        && c.iter()
                            .all(|&x| sub.neighbour(x, i) != sub.neighbour(x, j))
                })
            })
        })
    }

    /// Serializes in the text format with canonical edge order.
    pub fn to_text(&self) -> String {
        let mut s = format!("points {}\nrank {}\n", self.n, self.rank);
        for e in &self.edges {
            s.push_str(&format!("edge {} {} {}\n", e.u + 1, e.v + 1, e.label));
        }
        s
    }

    pub fn parse(text: &str) -> Result<PRGraph, GraphError> {
        let mut n = None;
        let mut rank = None;
        let mut edges = Vec::new();
        let mut edge_lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let err = |m: &str| GraphError::Parse {
                line: line_no,
                message: m.to_string(),
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| err(&format!("bad number {t:?}")))
            };
            match toks[0] {
                "points" if toks.len() == 2 => {
                    if n.replace(num(toks[1])?).is_some() {
                        return Err(err("duplicate points directive"));
                    }
                }
                "rank" if toks.len() == 2 => {
                    if rank.replace(num(toks[1])?).is_some() {
                        return Err(err("duplicate rank directive"));
                    }
                }
                "edge" if toks.len() == 4 => {
                    let (u, v, l) = (num(toks[1])?, num(toks[2])?, num(toks[3])?);
                    if u == 0 || v == 0 {
                        return Err(err("vertices are numbered from 1"));
                    }
                    edges.push(Edge::new(u - 1, v - 1, l));
                    edge_lines.push(line_no);
                }
                "points" | "rank" | "edge" => return Err(err("wrong number of arguments")),
                other => return Err(err(&format!("unknown directive {other:?}"))),
            }
        }
        let n = n.ok_or(GraphError::Parse {
            line: 0,
            message: "missing points directive".into(),
        })?;
        let rank = rank.ok_or(GraphError::Parse {
            line: 0,
            message: "missing rank directive".into(),
        })?;
        // report structural problems against the offending line
        for (k, e) in edges.iter().enumerate() {
            let single = PRGraph::new(n, rank, vec![*e]);
            if let Err(inner) = single {
                return Err(GraphError::Parse {
                    line: edge_lines[k],
                    message: inner.to_string(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for (k, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if !seen.insert((x, e.label)) {
                    let inner = GraphError::MatchingViolation {
                        vertex: x,
                        label: e.label,
                    };
                    return Err(GraphError::Parse {
                        line: edge_lines[k],
                        message: inner.to_string(),
                    });
                }
            }
        }
        PRGraph::new(n, rank, edges)
    }
}

impl FromStr for PRGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PRGraph::parse(s)
    }
}

impl fmt::Display for PRGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// An edge `(u, v, label)` after renumbering.
pub type EdgeCode = (u8, u8, u8);

/// Output of [`PRGraph::canonical_form`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub rank: usize,
    pub edges: Vec<EdgeCode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotifKind {
    DoubleEdge,
    TripleEdge,
    Square,
}

/// A multiple edge or an alternating square.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Motif {
    pub kind: MotifKind,
    pub labels: Vec<usize>,
    /// The two endpoints of a multiple edge, or the square's vertices in
    /// cycle order starting from the least.
    pub vertices: Vec<usize>,
}
