//! Exact computation in the restricted wreath product of two quasi-cyclic
//! groups, with a word DSL for iterated identities.
//!
//! The crate has three layers:
//!
//! - exact arithmetic: [`exactnum`] (the prime, Z[1/p], Z_{p^inf}) and
//!   [`groupring`] (finitely supported functions Z_{p^inf} -> Z_{p^inf});
//! - the group: [`wreath`] elements with the product, powers, commutators
//!   and exact order computation, cross-checked by the explicit finite
//!   groups in [`finite_oracle`];
//! - the word engine: [`words`] parses and evaluates commutator words,
//!   iterates them by substitution into the first variable, and searches
//!   for the minimal vanishing iterate; [`theorem`] instantiates the
//!   unbounded-iterated-identity scenario on top of it, and [`verify`]
//!   packages every check into a reportable suite.
//!
//! Sweep grids and sampled batches run data-parallel through [`sweep`] when
//! the `parallel` feature (default) is enabled; without it the same code
//! runs sequentially with identical output order.

pub mod error;
pub mod exactnum;
pub mod finite_oracle;
pub mod groupring;
pub mod rng;
pub mod sweep;
pub mod theorem;
pub mod verify;
pub mod words;
pub mod wreath;

pub use error::{Error, Result};
pub use exactnum::{PAdicFraction, Prime, PruferElement};
pub use groupring::BaseFunction;
pub use words::{GroupElement, Word};
pub use wreath::WreathElement;
