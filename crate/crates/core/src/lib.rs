//! Braid-group toolkit for the Colored Burau Key Agreement Protocol (CBKAP)
//! and the length-based attack on its trusted-third-party (TTP) generator.
//!
//! The crate is organised bottom-up:
//!
//! * [`braid`]: braid words, permutations, left Garside normal forms.
//! * [`length`]: the approximate geodesic length oracle, an exact BFS oracle
//!   for small braid groups, and the separation test for braid tuples.
//! * [`burau`]: the colored Burau platform group, symbolically over Laurent
//!   polynomials and evaluated over `F_p` through the `⋆` action.
//! * [`protocol`]: TTP instance generation, key material and key agreement.
//! * [`attack`]: Δ-power recovery and the greedy, backtracking and
//!   "variant II" conjugator searches.
//! * [`experiment`]: trial driver, reports and the on-disk formats.

pub mod attack;
pub mod braid;
pub mod burau;
mod clock;
mod error;
pub mod experiment;
pub mod length;
pub mod protocol;

pub use error::{Error, Result};
