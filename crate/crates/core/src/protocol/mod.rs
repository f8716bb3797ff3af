//! The colored Burau key agreement: TTP instance generation, key material
//! and shared-key derivation.

mod keys;
mod poly;
mod ttp;

pub use keys::{private_matrix, run_agreement, AgreementOutcome, KeyMaterial, KeyParams, Platform, Side};
pub use poly::{companion_matrix, eval_at_matrix, is_irreducible, random_irreducible, random_m0};
pub use ttp::{
    choose_split, publish_word, ttp_generate, ttp_generate_with_conjugator, SplitMode, TtpInstance, TtpParams,
    TtpSecret,
};
pub(crate) use ttp::tuple_mask;
