//! mdbook cannot run snippets that depend on workspace crates, so every chapter is pulled in
//! as a doc comment and `cargo test -p gravem-book` runs the snippets as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/null_frames.md")]
pub mod null_frames {}
#[doc = include_str!("../../../book/src/initial_data.md")]
pub mod initial_data {}
#[doc = include_str!("../../../book/src/evolution.md")]
pub mod evolution {}
#[doc = include_str!("../../../book/src/diagnostics.md")]
pub mod diagnostics {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
