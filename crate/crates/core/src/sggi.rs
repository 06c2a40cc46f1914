//! String groups generated by involutions and the intersection property.
//!
//! An sggi is a tuple `(ρ0, …, ρ(r-1))` of involutions whose non-adjacent
//! members commute. It is a string C-group when, for all label sets `J` and
//! `K`, `⟨ρj : j ∈ J⟩ ∩ ⟨ρk : k ∈ K⟩ = ⟨ρj : j ∈ J ∩ K⟩`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::perm::{first_common_outside, PermError, PermGroup, Permutation};
use crate::prgraph::{GraphError, PRGraph};

/// Largest rank handled (label sets are bitmasks).
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SggiError {
    #[error("generator {index} is not an involution")]
    NotInvolution { index: usize },
    #[error("generators {i} and {j} are not adjacent but do not commute")]
    CommutingViolation { i: usize, j: usize },
    #[error("degenerate generating tuple: {reason}")]
    Degenerate { reason: String },
    #[error("generator {index} has degree {found}, expected {expected}")]
    Degree {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("rank {0} is not supported")]
    Rank(usize),
    #[error("label {label} out of range for rank {rank}")]
    Label { label: usize, rank: usize },
    #[error("intersection for J={j:?}, K={k:?} needs {order} elements, over the budget of {cap}")]
    BudgetExceeded {
        j: Vec<usize>,
        k: Vec<usize>,
        order: u128,
        cap: u128,
    },
    #[error("tau must be an involution")]
    TauNotInvolution,
    #[error("tau does not commute with generator {index}")]
    TauNotCommuting { index: usize },
    #[error("tau lies in the group")]
    TauInGroup,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A set of generator labels, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Labels(pub u32);

impl Labels {
    pub fn all(rank: usize) -> Labels {
        Labels(((1u64 << rank) - 1) as u32)
    }

    pub fn from_slice(labels: &[usize]) -> Labels {
        Labels(labels.iter().fold(0, |m, &l| m | (1 << l)))
    }

    /// Contiguous labels `lo..hi`.
    pub fn range(lo: usize, hi: usize) -> Labels {
        Labels((lo..hi).fold(0, |m, l| m | (1 << l)))
    }

    pub fn contains(self, label: usize) -> bool {
        self.0 >> label & 1 == 1
    }

    pub fn without(self, label: usize) -> Labels {
        Labels(self.0 & !(1 << label))
    }

    pub fn intersection(self, other: Labels) -> Labels {
        Labels(self.0 & other.0)
    }

    pub fn is_subset(self, other: Labels) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn to_vec(self) -> Vec<usize> {
        (0..32).filter(|&l| self.contains(l)).collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Accept identity or repeated generators.
    pub allow_degenerate: bool,
}

/// Orders of consecutive products `ρ(i-1)ρi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchlafliType(pub Vec<u64>);

impl fmt::Display for SchlafliType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IpStatus {
    Holds,
    Fails,
}

/// How an intersection-property verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IpMethod {
    #[serde(rename = "full")]
    Full,
    /// Recursion through `Γ0` and `Γ(r-1)` plus `G0 ∩ G(r-1) = G(0,r-1)`.
    #[serde(rename = "recursive_2E16")]
    Recursive,
    /// A recorded witness checked by three membership tests.
    #[serde(rename = "witness_only")]
    WitnessOnly,
}

/// An element of `⟨J⟩ ∩ ⟨K⟩` outside `⟨J ∩ K⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpWitness {
    pub element: Permutation,
    pub j: Vec<usize>,
    pub k: Vec<usize>,
}

impl IpWitness {
    /// Checks the witness by three membership tests.
    pub fn verify(&self, s: &Sggi) -> bool {
        let (j, k) = (Labels::from_slice(&self.j), Labels::from_slice(&self.k));
        let all = Labels::all(s.rank());
        if !j.is_subset(all) || !k.is_subset(all) || self.element.degree() != s.degree() {
            return false;
        }
        s.parabolic_of(j).contains(&self.element)
            && s.parabolic_of(k).contains(&self.element)
            && !s.parabolic_of(j.intersection(k)).contains(&self.element)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpVerdict {
    pub status: IpStatus,
    pub witness: Option<IpWitness>,
    pub method: IpMethod,
}

impl IpVerdict {
    pub fn holds(&self) -> bool {
        self.status == IpStatus::Holds
    }
}

/// A validated sggi with its group and lazily built parabolic subgroups.
#[derive(Debug, Clone)]
pub struct Sggi {
    degree: usize,
    rho: Vec<Permutation>,
    group: PermGroup,
    degenerate: bool,
    options: ValidateOptions,
    parabolics: Vec<OnceLock<PermGroup>>,
}

impl Sggi {
    /// Strict validation: degenerate tuples are rejected.
    pub fn new(rho: Vec<Permutation>, degree: usize) -> Result<Sggi, SggiError> {
        Sggi::with_options(rho, degree, ValidateOptions::default())
    }

    pub fn with_options(
        rho: Vec<Permutation>,
        degree: usize,
        options: ValidateOptions,
    ) -> Result<Sggi, SggiError> {
        if rho.len() > MAX_RANK {
            return Err(SggiError::Rank(rho.len()));
        }
        let mut degenerate = None;
        for (i, g) in rho.iter().enumerate() {
            if g.degree() != degree {
                return Err(SggiError::Degree {
                    index: i,
                    found: g.degree(),
                    expected: degree,
                });
            }
            if g.is_identity() {
                degenerate.get_or_insert(format!("generator {i} is the identity"));
            } else if !g.is_involution() {
                return Err(SggiError::NotInvolution { index: i });
            }
        }
        for i in 0..rho.len() {
            for j in i + 2..rho.len() {
                if !rho[i].commutes_with(&rho[j]) {
                    return Err(SggiError::CommutingViolation { i, j });
                }
            }
            for j in i + 1..rho.len() {
                if rho[i] == rho[j] && !rho[i].is_identity() {
                    degenerate.get_or_insert(format!("generators {i} and {j} coincide"));
                }
            }
        }
        if let (Some(reason), false) = (&degenerate, options.allow_degenerate) {
            return Err(SggiError::Degenerate {
                reason: reason.clone(),
            });
        }
        let group = PermGroup::new(degree, rho.clone())?;
        let parabolics = (0..1usize << rho.len()).map(|_| OnceLock::new()).collect();
        Ok(Sggi {
            degree,
            rho,
            group,
            degenerate: degenerate.is_some(),
            options,
            parabolics,
        })
    }

    /// The sggi read off a permutation representation graph.
    pub fn from_graph(graph: &PRGraph) -> Result<Sggi, SggiError> {
        Sggi::new(graph.to_generators(), graph.n())
    }

    pub fn graph(&self) -> PRGraph {
        PRGraph::from_generators(&self.rho, self.degree).expect("generators are involutions")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rho.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.rho
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_transitive(&self) -> bool {
        self.group.is_transitive()
    }

    /// All generators are even permutations.
    pub fn is_even(&self) -> bool {
        self.rho.iter().all(Permutation::is_even)
    }

    /// `⟨ρj : j ∈ labels⟩`.
    pub fn parabolic(&self, labels: &[usize]) -> Result<PermGroup, SggiError> {
        if let Some(&l) = labels.iter().find(|&&l| l >= self.rank()) {
            return Err(SggiError::Label {
                label: l,
                rank: self.rank(),
            });
        }
        Ok(self.parabolic_of(Labels::from_slice(labels)).clone())
    }

    pub fn parabolic_of(&self, labels: Labels) -> &PermGroup {
        self.parabolics[labels.0 as usize].get_or_init(|| {
            let gens = labels.to_vec().into_iter().map(|l| self.rho[l]).collect();
            PermGroup::new(self.degree, gens).expect("validated generators")
        })
    }

    /// The maximal parabolic `Gi`, generated by every generator except `ρi`.
    pub fn maximal_parabolic(&self, i: usize) -> &PermGroup {
        self.parabolic_of(Labels::all(self.rank()).without(i))
    }

    pub fn schlafli_type(&self) -> SchlafliType {
        SchlafliType(
            (1..self.rank())
                .map(|i| (self.rho[i - 1] * self.rho[i]).order())
                .collect(),
        )
    }

    /// Every `ρi` lies outside the subgroup generated by the others.
    pub fn is_independent(&self) -> bool {
        (0..self.rank()).all(|i| !self.maximal_parabolic(i).contains(&self.rho[i]))
    }

    /// Reversed generator sequence, same group.
    pub fn dual(&self) -> Sggi {
        let mut rho = self.rho.clone();
        rho.reverse();
        Sggi::with_options(rho, self.degree, self.options).expect("dual of a valid sggi")
    }

    /// The same tuple on `degree + extra` points.
    pub fn adjoin_points(&self, extra: usize) -> Result<Sggi, SggiError> {
        let n = self.degree + extra;
        let rho = self
            .rho
            .iter()
            .map(|g| g.extend_to(n))
            .collect::<Result<_, _>>()?;
        Sggi::with_options(rho, n, self.options)
    }

    /// Replaces `ρk` by `ρk·τ` for an involution `τ ∉ G` centralizing `G`.
    pub fn sesqui_extension(&self, k: usize, tau: &Permutation) -> Result<Sggi, SggiError> {
        if k >= self.rank() {
            return Err(SggiError::Label {
                label: k,
                rank: self.rank(),
            });
        }
        if tau.degree() != self.degree {
            return Err(SggiError::Degree {
                index: k,
                found: tau.degree(),
                expected: self.degree,
            });
        }
        if !tau.is_involution() {
            return Err(SggiError::TauNotInvolution);
        }
        if let Some(index) = self.rho.iter().position(|g| !g.commutes_with(tau)) {
            return Err(SggiError::TauNotCommuting { index });
        }
        if self.group.contains(tau) {
            return Err(SggiError::TauInGroup);
        }
        let mut rho = self.rho.clone();
        rho[k] = rho[k] * *tau;
        Sggi::with_options(rho, self.degree, self.options)
    }

    /// Sesqui-extension by the transposition of two adjoined points
    /// `degree` and `degree + 1`.
    pub fn sesqui_extension_fresh(&self, k: usize) -> Result<Sggi, SggiError> {
        let bigger = self.adjoin_points(2)?;
        let n = bigger.degree;
        let tau = Permutation::transposition(n, n - 2, n - 1);
        bigger.sesqui_extension(k, &tau)
    }

    fn pair_failure(
        &self,
        j: Labels,
        k: Labels,
        cap: u128,
    ) -> Result<Option<IpWitness>, SggiError> {
        let inner = self.parabolic_of(j.intersection(k));
        let found = first_common_outside(self.parabolic_of(j), self.parabolic_of(k), inner, cap)
            .map_err(|e| match e {
                PermError::BudgetExceeded { order, cap } => SggiError::BudgetExceeded {
                    j: j.to_vec(),
                    k: k.to_vec(),
                    order,
                    cap,
                },
                other => SggiError::Perm(other),
            })?;
        Ok(found.map(|element| IpWitness {
            element,
            j: j.to_vec(),
            k: k.to_vec(),
        }))
    }

    /// Checks the intersection condition for every pair of label sets.
    ///
    /// Pairs are scanned in lexicographic order of their bitmasks and the
    /// first failing pair supplies the witness.
    pub fn check_ip_full(&self, cap: u128) -> Result<IpVerdict, SggiError> {
        let m = 1u32 << self.rank();
        for j in 0..m {
            for k in j + 1..m {
                let (jl, kl) = (Labels(j), Labels(k));
                if jl.is_subset(kl) || kl.is_subset(jl) {
                    continue;
                }
                if let Some(w) = self.pair_failure(jl, kl, cap)? {
                    return Ok(IpVerdict {
                        status: IpStatus::Fails,
                        witness: Some(w),
                        method: IpMethod::Full,
                    });
                }
            }
        }
        Ok(IpVerdict {
            status: IpStatus::Holds,
            witness: None,
            method: IpMethod::Full,
        })
    }

    /// Decides the intersection property recursively: the sub-sggi's without
    /// the first and without the last generator must be string C-groups and
    /// `G0 ∩ G(r-1)` must equal `G(0,r-1)`.
    pub fn check_ip_recursive(&self, cap: u128) -> Result<IpVerdict, SggiError> {
        let mut memo = HashMap::new();
        let witness = self.interval_failure(0, self.rank(), cap, &mut memo)?;
        Ok(IpVerdict {
            status: if witness.is_some() {
                IpStatus::Fails
            } else {
                IpStatus::Holds
            },
            witness,
            method: IpMethod::Recursive,
        })
    }

    /// Failure witness for the sub-sggi on labels `lo..hi`, if any.
    fn interval_failure(
        &self,
        lo: usize,
        hi: usize,
        cap: u128,
        memo: &mut HashMap<(usize, usize), Option<IpWitness>>,
    ) -> Result<Option<IpWitness>, SggiError> {
        if hi - lo <= 1 {
            return Ok(None);
        }
        if let Some(w) = memo.get(&(lo, hi)) {
            return Ok(w.clone());
        }
        let mut result = None;
        if hi - lo > 2 {
            result = self.interval_failure(lo + 1, hi, cap, memo)?;
            if result.is_none() {
                result = self.interval_failure(lo, hi - 1, cap, memo)?;
            }
        }
        if result.is_none() {
            result =
                self.pair_failure(Labels::range(lo + 1, hi), Labels::range(lo, hi - 1), cap)?;
        }
        memo.insert((lo, hi), result.clone());
        Ok(result)
    }

    /// Tries a recorded witness; returns a `WitnessOnly` failure verdict when
    /// it checks out.
    pub fn check_ip_with_witness(&self, witness: &IpWitness) -> Option<IpVerdict> {
        witness.verify(self).then(|| IpVerdict {
            status: IpStatus::Fails,
            witness: Some(witness.clone()),
            method: IpMethod::WitnessOnly,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{parse_cycles, DEFAULT_CAP};

    fn p(s: &str, n: usize) -> Permutation {
        parse_cycles(s, n).unwrap()
    }

    fn simplex() -> Sggi {
        Sggi::new(vec![p("(1,2)", 4), p("(2,3)", 4), p("(3,4)", 4)], 4).unwrap()
    }

    #[test]
    fn simplex_is_s4() {
        let s = simplex();
        assert_eq!(s.group().order(), 24);
        assert_eq!(s.schlafli_type(), SchlafliType(vec![3, 3]));
        assert_eq!(s.schlafli_type().to_string(), "{3,3}");
        assert!(s.is_independent());
        assert!(s.is_transitive());
    }

    #[test]
    fn repeated_generator_is_degenerate() {
        let rho = vec![p("(1,2)", 2), p("(1,2)", 2)];
        assert!(matches!(
            Sggi::new(rho.clone(), 2),
            Err(SggiError::Degenerate { .. })
        ));
        let s = Sggi::with_options(
            rho,
            2,
            ValidateOptions {
                allow_degenerate: true,
            },
        )
        .unwrap();
        assert!(s.is_degenerate());
        assert!(!s.is_independent());
    }

    #[test]
    fn validation_errors() {
        let err = Sggi::new(vec![p("(1,2,3)", 3)], 3).unwrap_err();
        assert_eq!(err, SggiError::NotInvolution { index: 0 });
        let err = Sggi::new(vec![p("(1,2)", 3), p("(1,3)", 3), p("(2,3)", 3)], 3).unwrap_err();
        assert_eq!(err, SggiError::CommutingViolation { i: 0, j: 2 });
    }

    #[test]
    fn parabolic_extremes() {
        let s = simplex();
        assert_eq!(s.parabolic(&[]).unwrap().order(), 1);
        assert_eq!(s.parabolic(&[0, 1, 2]).unwrap().order(), 24);
        assert_eq!(s.parabolic(&[0, 2]).unwrap().order(), 4);
        assert!(s.parabolic(&[3]).is_err());
    }

    #[test]
    fn rank_two_ip() {
        let s = Sggi::new(vec![p("(1,2)", 3), p("(2,3)", 3)], 3).unwrap();
        assert!(s.check_ip_full(DEFAULT_CAP).unwrap().holds());
        assert!(s.check_ip_recursive(DEFAULT_CAP).unwrap().holds());
        let d = Sggi::with_options(
            vec![p("(1,2)", 2), p("(1,2)", 2)],
            2,
            ValidateOptions {
                allow_degenerate: true,
            },
        )
        .unwrap();
        let v = d.check_ip_full(DEFAULT_CAP).unwrap();
        assert_eq!(v.status, IpStatus::Fails);
        assert!(v.witness.unwrap().verify(&d));
        assert_eq!(
            d.check_ip_recursive(DEFAULT_CAP).unwrap().status,
            IpStatus::Fails
        );
    }

    #[test]
    fn simplex_ip_holds() {
        let s = simplex();
        assert!(s.check_ip_full(DEFAULT_CAP).unwrap().holds());
        assert_eq!(
            s.check_ip_recursive(DEFAULT_CAP).unwrap().method,
            IpMethod::Recursive
        );
    }

    #[test]
    fn dual_reverses_type() {
        let s = Sggi::new(vec![p("(1,2)", 5), p("(2,3)(4,5)", 5), p("(3,4)", 5)], 5).unwrap();
        let d = s.dual();
        let mut t = s.schlafli_type().0;
        t.reverse();
        assert_eq!(d.schlafli_type().0, t);
        assert_eq!(d.dual().generators(), s.generators());
        assert_eq!(d.group().order(), s.group().order());
    }

    #[test]
    fn sesqui_errors() {
        let s = simplex();
        assert_eq!(
            s.sesqui_extension(0, &p("(1,2)", 4)).unwrap_err(),
            SggiError::TauNotCommuting { index: 1 }
        );
        let big = s.adjoin_points(2).unwrap();
        assert_eq!(
            big.sesqui_extension(0, &p("(1,2,3)", 6)).unwrap_err(),
            SggiError::TauNotInvolution
        );
        // an involution of G commuting with all of G does not exist in S4, use a central one of C2 x C2
        let k = Sggi::new(vec![p("(1,2)", 4), p("(3,4)", 4)], 4).unwrap();
        assert_eq!(
            k.sesqui_extension(0, &p("(1,2)", 4)).unwrap_err(),
            SggiError::TauInGroup
        );
    }

    #[test]
    fn sesqui_on_first_generator_keeps_c_group() {
        let s = simplex();
        let e = s.sesqui_extension_fresh(0).unwrap();
        assert_eq!(e.degree(), 6);
        assert!(e.check_ip_full(DEFAULT_CAP).unwrap().holds());
        assert!(matches!(e.group().order(), 24 | 48));
    }

    #[test]
    fn labels() {
        assert_eq!(Labels::all(3).to_vec(), vec![0, 1, 2]);
        assert_eq!(Labels::range(1, 3).to_vec(), vec![1, 2]);
        assert!(Labels::from_slice(&[1]).is_subset(Labels::all(2)));
        assert_eq!(
            Labels::all(4)
                .without(0)
                .intersection(Labels::all(3))
                .to_vec(),
            vec![1, 2]
        );
    }
}
