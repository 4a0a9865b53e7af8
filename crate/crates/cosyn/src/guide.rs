//! The narrative guide, one module per book chapter.
//!
//! Chapters live in `book/src/` and are included here verbatim so that
//! `cargo test --doc` compiles and runs every code snippet the book shows.
//! Build the rendered book with `mdbook build book`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/matrices.md")]
pub mod matrices {}

#[doc = include_str!("../../../book/src/pauli.md")]
pub mod pauli_algebra {}

#[doc = include_str!("../../../book/src/coset.md")]
pub mod coset_decomposition {}

#[doc = include_str!("../../../book/src/synthesis.md")]
pub mod synthesis {}

#[doc = include_str!("../../../book/src/sequences.md")]
pub mod sequences {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
