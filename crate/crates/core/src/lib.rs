//! Exact finite-scale Giry monads.
//!
//! Measures on finite measurable spaces, their integration operators, the
//! monad structure on both sides, codensity naturality checks against affine
//! maps, and a limit functional on ℕ that is finitely but not countably
//! additive. All arithmetic is exact over arbitrary-precision rationals.

pub mod cli;
pub mod codensity;
pub mod counterexample;
pub mod duality;
pub mod error;
pub mod giry;
pub mod harness;
pub mod measure;
pub mod random;
pub mod rational;
pub mod sigma;
pub mod verdict;

pub use error::{Error, Result};
pub use rational::Rat;
