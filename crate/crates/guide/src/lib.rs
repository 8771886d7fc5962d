//! The chapters of the guide in `book/`, compiled as doc comments so that
//! `cargo test` runs every snippet against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../../book/src/mad.md")]
pub mod mad {}
#[doc = include_str!("../../../book/src/peeling.md")]
pub mod peeling {}
#[doc = include_str!("../../../book/src/recolouring.md")]
pub mod recolouring {}
#[doc = include_str!("../../../book/src/budget.md")]
pub mod budget {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
