//! The guide under `book/`, compiled so its snippets run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}

#[doc = include_str!("../../../book/src/balancing.md")]
pub mod balancing {}

#[doc = include_str!("../../../book/src/prefixes.md")]
pub mod prefixes {}

#[doc = include_str!("../../../book/src/streaming.md")]
pub mod streaming {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
