//! Permutations and permutation groups of small degree.
//!
//! Points are 0-based in the API and 1-based in every textual form.

mod chain;
mod group;
mod notation;
mod permutation;

pub use group::{
    diagonal_isomorphic, first_common_outside, intersect, orbits_of, Elements, PermGroup,
    Primitivity, DEFAULT_CAP,
};
pub use notation::{format_cycles, parse_cycles, parse_cycles_auto};
pub use permutation::{Parity, Permutation, MAX_DEGREE};

/// Left-to-right product `p` then `q`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    p.compose(q)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("degree {0} exceeds the supported maximum of 32")]
    DegreeTooLarge(usize),
    #[error("a permutation group needs at least one point")]
    EmptyDegree,
    #[error("image list is not a bijection")]
    NotABijection,
    #[error("point {} out of range for degree {degree}", point + 1)]
    PointOutOfRange { point: usize, degree: usize },
    #[error("cannot parse {text:?}: {message}")]
    Parse { text: String, message: String },
    #[error("group is not transitive on the given points")]
    Intransitive,
    #[error("point set is not invariant under the group")]
    NotInvariant,
    #[error("enumeration of {order} elements exceeds the budget of {cap}")]
    BudgetExceeded { order: u128, cap: u128 },
    #[error("tuple length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}
