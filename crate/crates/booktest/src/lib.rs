//! Guide chapters compiled as doc-tests.
//!
//! mdbook cannot resolve crate dependencies when testing snippets, so each
//! chapter is attached to a module here and `cargo test --doc` runs them.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/expected-posterior.md")]
pub mod expected_posterior {}
#[doc = include_str!("../../../book/src/computation.md")]
pub mod computation {}
#[doc = include_str!("../../../book/src/shape.md")]
pub mod shape {}
#[doc = include_str!("../../../book/src/asymptotics.md")]
pub mod asymptotics {}
#[doc = include_str!("../../../book/src/orders.md")]
pub mod orders {}
#[doc = include_str!("../../../book/src/special-functions.md")]
pub mod special_functions {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
