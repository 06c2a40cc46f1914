//! Exhaustive search for generating tuples of involutions.
//!
//! Tuples are built position by position; `ρi` for `i ≥ 2` is drawn only from
//! involutions commuting with `ρ0, …, ρ(i-2)`, so the commuting property holds
//! by construction. Every complete tuple is then checked for generation (by
//! order) and, on request, for the intersection property. Classes are formed
//! afterwards by pairwise isomorphism tests against representatives.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::perm::{diagonal_isomorphic, PermError, PermGroup, Permutation, DEFAULT_CAP};
use crate::prgraph::PRGraph;
use crate::sggi::{Sggi, SggiError};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("{what} is {value}, over the bound of {cap}")]
    BudgetExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("the target group is not generated by its involutions")]
    NotGeneratedByInvolutions,
    #[error("could not start worker threads: {0}")]
    Threads(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Sggi(#[from] SggiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Quotient {
    /// Every tuple is its own class.
    #[default]
    None,
    /// Tuples related by a group isomorphism `ρi ↦ σi`.
    Iso,
    /// As `Iso`, also identifying a tuple with its reverse.
    IsoAndDuality,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub max_group_order: u128,
    pub max_candidates: u64,
    /// Enumeration budget for intersection checks.
    pub ip_cap: u128,
    pub jobs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_group_order: 10_000,
            max_candidates: 100_000_000,
            ip_cap: DEFAULT_CAP,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub group: PermGroup,
    pub rank: usize,
    pub require_ip: bool,
    pub quotient: Quotient,
    pub limits: SearchLimits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Complete tuples examined.
    pub candidates: u64,
    /// Every accepted tuple, in lexicographic order.
    pub tuples: Vec<Vec<Permutation>>,
    /// The lexicographically least member of each class.
    pub classes: Vec<Vec<Permutation>>,
}

/// The order-2 elements of `g`, sorted.
pub fn involutions(g: &PermGroup, max_group_order: u128) -> Result<Vec<Permutation>, SearchError> {
    if g.order() > max_group_order {
        return Err(SearchError::BudgetExceeded {
            what: "group order",
            value: g.order(),
            cap: max_group_order,
        });
    }
    let mut out: Vec<Permutation> = g.elements().filter(Permutation::is_involution).collect();
    out.sort();
    Ok(out)
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, SearchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| SearchError::Threads(e.to_string()))
}

struct Budget<'a> {
    seen: &'a AtomicU64,
    cap: u64,
}

impl Budget<'_> {
    fn tick(&self) -> Result<(), SearchError> {
        let n = self.seen.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.cap {
            return Err(SearchError::BudgetExceeded {
                what: "candidate count",
                value: n as u128,
                cap: self.cap as u128,
            });
        }
        Ok(())
    }
}

/// Calls `visit` on every tuple extending `prefix` to length `rank` that
/// satisfies the commuting property.
fn for_each_string_tuple(
    invs: &[Permutation],
    rank: usize,
    prefix: &mut Vec<Permutation>,
    budget: &Budget<'_>,
    visit: &mut dyn FnMut(&[Permutation]) -> Result<(), SearchError>,
) -> Result<(), SearchError> {
    let i = prefix.len();
    if i == rank {
        budget.tick()?;
        return visit(prefix);
    }
    for t in invs {
        if prefix[..i.saturating_sub(1)]
            .iter()
            .all(|p| p.commutes_with(t))
        {
            prefix.push(*t);
            let r = for_each_string_tuple(invs, rank, prefix, budget, visit);
            prefix.pop();
            r?;
        }
    }
    Ok(())
}

fn accepts(spec: &SearchSpec, tuple: &[Permutation]) -> Result<bool, SearchError> {
    let distinct = tuple.iter().collect::<BTreeSet<_>>().len() == tuple.len();
    if !distinct {
        return Ok(false);
    }
    let n = spec.group.degree();
    if PermGroup::new(n, tuple.to_vec())?.order() != spec.group.order() {
        return Ok(false);
    }
    if !spec.require_ip {
        return Ok(true);
    }
    let s = Sggi::new(tuple.to_vec(), n)?;
    Ok(s.check_ip_recursive(spec.limits.ip_cap)?.holds())
}

pub fn enumerate(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let invs = involutions(&spec.group, spec.limits.max_group_order)?;
    let n = spec.group.degree();
    if PermGroup::new(n, invs.clone())?.order() != spec.group.order() {
        return Err(SearchError::NotGeneratedByInvolutions);
    }
    if spec.rank == 0 {
        return Ok(SearchOutcome {
            candidates: 0,
            tuples: Vec::new(),
            classes: Vec::new(),
        });
    }
    let seen = AtomicU64::new(0);
    let budget = Budget {
        seen: &seen,
        cap: spec.limits.max_candidates,
    };
    let per_first: Vec<Vec<Vec<Permutation>>> = thread_pool(spec.limits.jobs)?.install(|| {
        invs.par_iter()
            .map(|first| {
                let mut found = Vec::new();
                let mut prefix = vec![*first];
                for_each_string_tuple(&invs, spec.rank, &mut prefix, &budget, &mut |t| {
                    if accepts(spec, t)? {
                        found.push(t.to_vec());
                    }
                    Ok(())
                })?;
                Ok(found)
            })
            .collect::<Result<_, SearchError>>()
    })?;
    let tuples: Vec<Vec<Permutation>> = per_first.into_iter().flatten().collect();
    let classes = classify(&tuples, spec.quotient)?;
    Ok(SearchOutcome {
        candidates: seen.into_inner(),
        tuples,
        classes,
    })
}

/// Cheap isomorphism invariant: orders of all products `ρiρj` and of the
/// full product.
fn signature(t: &[Permutation]) -> Vec<u64> {
    let mut sig = Vec::new();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            sig.push((t[i] * t[j]).order());
        }
    }
    sig.push(t.iter().skip(1).fold(t[0], |acc, x| acc * *x).order());
    sig
}

/// Groups `tuples` (assumed sorted) into classes; returns the first member of
/// each.
pub fn classify(
    tuples: &[Vec<Permutation>],
    quotient: Quotient,
) -> Result<Vec<Vec<Permutation>>, SearchError> {
    if quotient == Quotient::None {
        return Ok(tuples.to_vec());
    }
    let mut reps: Vec<(Vec<Permutation>, Vec<u64>)> = Vec::new();
    for t in tuples {
        let sig = signature(t);
        let reversed: Vec<Permutation> = t.iter().rev().copied().collect();
        let rsig = signature(&reversed);
        let mut known = false;
        for (rep, rep_sig) in &reps {
            known = (*rep_sig == sig && diagonal_isomorphic(rep, t)?)
                || (quotient == Quotient::IsoAndDuality
                    && *rep_sig == rsig
                    && diagonal_isomorphic(rep, &reversed)?);
            if known {
                break;
            }
        }
        if !known {
            reps.push((t.clone(), sig));
        }
    }
    Ok(reps.into_iter().map(|(t, _)| t).collect())
}

/// Number of distinct permutation representation graphs among `tuples`, up
/// to label-preserving isomorphism and reversal of labels.
pub fn graph_classes_up_to_duality(tuples: &[Vec<Permutation>]) -> usize {
    tuples
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| {
            let g = PRGraph::from_generators(t, t[0].degree()).expect("tuples of involutions");
            g.canonical_form().min(g.dual().canonical_form())
        })
        .collect::<BTreeSet<_>>()
        .len()
}

/// Counts triples `(t0, t1, t2)` of involutions of `g` with `t0 t2 = t2 t0`
/// generating `g`.
pub fn commuting_triple_count(g: &PermGroup, limits: &SearchLimits) -> Result<u64, SearchError> {
    let invs = involutions(g, limits.max_group_order)?;
    let seen = AtomicU64::new(0);
    let budget = Budget {
        seen: &seen,
        cap: limits.max_candidates,
    };
    let counts: Vec<u64> = thread_pool(limits.jobs)?.install(|| {
        invs.par_iter()
            .map(|first| {
                let mut count = 0;
                let mut prefix = vec![*first];
                for_each_string_tuple(&invs, 3, &mut prefix, &budget, &mut |t| {
                    if PermGroup::new(g.degree(), t.to_vec())?.order() == g.order() {
                        count += 1;
                    }
                    Ok(())
                })?;
                Ok(count)
            })
            .collect::<Result<_, SearchError>>()
    })?;
    Ok(counts.into_iter().sum())
}

/// [`commuting_triple_count`] for the Mathieu group M11 in its action on 11
/// points.
pub fn m11_rank3_check(m11: &PermGroup, limits: &SearchLimits) -> Result<u64, SearchError> {
    commuting_triple_count(m11, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn group(gens: &[&str], n: usize) -> PermGroup {
        PermGroup::new(
            n,
            gens.iter().map(|g| parse_cycles(g, n).unwrap()).collect(),
        )
        .unwrap()
    }

    fn spec(g: PermGroup, rank: usize, quotient: Quotient) -> SearchSpec {
        SearchSpec {
            group: g,
            rank,
            require_ip: true,
            quotient,
            limits: SearchLimits::default(),
        }
    }

    #[test]
    fn involution_counts() {
        assert_eq!(involutions(&group(&["(1,2)"], 2), 100).unwrap().len(), 1);
        assert_eq!(
            involutions(&group(&["(1,2)", "(1,2,3)"], 3), 100)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(involutions(&PermGroup::symmetric(4), 100).unwrap().len(), 9);
        assert!(matches!(
            involutions(&PermGroup::symmetric(8), 10_000),
            Err(SearchError::BudgetExceeded {
                what: "group order",
                ..
            })
        ));
    }

    #[test]
    fn odd_cyclic_group_has_no_involutions() {
        let s = spec(group(&["(1,2,3)"], 3), 2, Quotient::None);
        assert!(matches!(
            enumerate(&s),
            Err(SearchError::NotGeneratedByInvolutions)
        ));
    }

    #[test]
    fn s4_polytopes() {
        // tetrahedron and hemicube up to duality; no rank 2 polygon has group S4
        let s4 = PermGroup::symmetric(4);
        let out = enumerate(&spec(s4.clone(), 3, Quotient::IsoAndDuality)).unwrap();
        let mut types: Vec<Vec<u64>> = out
            .classes
            .iter()
            .map(|t| Sggi::new(t.clone(), 4).unwrap().schlafli_type().0)
            .collect();
        types.sort();
        assert_eq!(types, vec![vec![3, 3], vec![3, 4]]);
        let out = enumerate(&spec(s4.clone(), 2, Quotient::Iso)).unwrap();
        assert!(out.classes.is_empty());
        assert!(commuting_triple_count(&s4, &SearchLimits::default()).unwrap() > 0);
    }

    #[test]
    fn candidate_budget() {
        let mut s = spec(PermGroup::symmetric(4), 3, Quotient::None);
        s.limits.max_candidates = 10;
        assert!(matches!(
            enumerate(&s),
            Err(SearchError::BudgetExceeded {
                what: "candidate count",
                ..
            })
        ));
    }

    #[test]
    fn graph_counting() {
        let t = vec![
            parse_cycles("(1,2)", 4).unwrap(),
            parse_cycles("(2,3)", 4).unwrap(),
            parse_cycles("(3,4)", 4).unwrap(),
        ];
        let rev: Vec<Permutation> = t.iter().rev().copied().collect();
        assert_eq!(graph_classes_up_to_duality(&[]), 0);
        assert_eq!(graph_classes_up_to_duality(&[t.clone(), rev]), 1);
        assert_eq!(graph_classes_up_to_duality(&[t]), 1);
    }

    #[test]
    fn parallel_matches_serial() {
        let mut s = spec(PermGroup::symmetric(4), 3, Quotient::None);
        let serial = enumerate(&s).unwrap();
        s.limits.jobs = 4;
        assert_eq!(enumerate(&s).unwrap(), serial);
    }
}
