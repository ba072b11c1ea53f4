//! Doc-test harness for the guide in `book/`.
//!
//! mdBook cannot run code samples against the workspace crates, so each
//! chapter is included here as module documentation and `cargo test --doc`
//! compiles and executes every Rust block the book ships. One module per
//! chapter keeps test failures attributable to their source file.

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/getting-started.md")]
pub mod getting_started {}

#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}

#[doc = include_str!("../../../book/src/behaviors.md")]
pub mod behaviors {}

#[doc = include_str!("../../../book/src/embeddability.md")]
pub mod embeddability {}

#[doc = include_str!("../../../book/src/regimes.md")]
pub mod regimes {}

#[doc = include_str!("../../../book/src/sampling.md")]
pub mod sampling {}

#[doc = include_str!("../../../book/src/file-formats.md")]
pub mod file_formats {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
