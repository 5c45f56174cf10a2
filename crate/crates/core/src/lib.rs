//! Exact, finite versions of liminf covering constructions over staged
//! families of sets, semimeasures and clopen subsets of Cantor space, plus a
//! toy complexity model, a forcing simulator and limit frequencies.
//!
//! The guide under `book/` walks through each module.

#![allow(clippy::result_large_err)]

pub mod bits;
pub mod clopen;
pub mod complexity;
pub mod cover;
pub mod eventlog;
pub mod family;
pub mod freq;
pub mod lowbasis;
pub mod rational;

// Book chapters, compiled as doctests so the guide cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cantor-space.md")]
    mod cantor_space {}
    #[doc = include_str!("../../../book/src/staged-families.md")]
    mod staged_families {}
    #[doc = include_str!("../../../book/src/covers.md")]
    mod covers {}
    #[doc = include_str!("../../../book/src/complexity.md")]
    mod complexity {}
    #[doc = include_str!("../../../book/src/forcing.md")]
    mod forcing {}
    #[doc = include_str!("../../../book/src/frequencies.md")]
    mod frequencies {}
}
