//! Expected posterior dynamics for one-dimensional exponential families.
//!
//! The central object is the sequence `ψ_{θ0,θ1}(n) = E_{θ1}[q_n^{θ0}]`: the
//! posterior probability (or density) of `θ0` after `n` observations, averaged
//! over data drawn from `θ1`. The crate computes it exactly, in closed form,
//! by quadrature, or by brute force, and analyses the resulting sequences.

pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod families;
pub mod logspace;
pub mod orders;
pub mod priors;
pub mod psi;
pub mod quadrature;
pub mod specialfn;

pub use error::{Error, Result};
pub use exact::{Rational, Value};
pub use families::FamilySpec;
pub use priors::{DiscretePrior, NamedPrior, PosteriorVector, Prior};
