//! Braid words, the projection to `S_n`, and left Garside normal forms.

mod garside;
mod perm;
mod word;

pub use garside::{GarsideFactor, GarsideNormalForm};
pub use perm::{Permutation, MAX_STRANDS};
pub use word::BraidWord;

