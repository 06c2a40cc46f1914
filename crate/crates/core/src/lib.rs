//! String C-groups from permutation representation graphs.
//!
//! A tuple of involutions `(ρ0, …, ρ(r-1))` in which nonconsecutive entries
//! commute is a *string group generated by involutions*; it is a *string
//! C-group* when its parabolic subgroups also intersect as their label sets
//! do. This crate validates such tuples, decides the intersection property
//! with a checkable witness, analyses their graphs, verifies a corpus of
//! graphs for `A11` and `PSL(2,11)`, and searches small groups exhaustively.
//!
//! ```
//! use scg::corpus::Corpus;
//!
//! let cell = Corpus::embedded().get("ELEVEN_CELL").unwrap().sggi().unwrap();
//! assert_eq!(cell.group().order(), 660);
//! assert_eq!(cell.schlafli_type().to_string(), "{3,5,3}");
//! assert!(cell.check_ip_recursive(1 << 20).unwrap().holds());
//! ```
//!
//! Modules, bottom up: [`perm`], [`prgraph`], [`sggi`], [`fracture`],
//! [`corpus`], [`search`], [`verify`], [`cli`].

pub mod cli;
pub mod corpus;
pub mod fracture;
pub mod perm;
pub mod prgraph;
pub mod search;
pub mod sggi;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/string-groups.md")]
    mod string_groups {}
    #[doc = include_str!("../../../book/src/fractures.md")]
    mod fractures {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
