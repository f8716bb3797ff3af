use std::collections::BTreeSet;

use super::LengthOracle;
use crate::braid::BraidWord;

/// Sum of approximate lengths.
pub fn tuple_length(oracle: &LengthOracle, tuple: &[BraidWord]) -> usize {
    tuple.iter().map(|w| oracle.approx_length(w).value).sum()
}

/// Generator indices used by the approximate-length witnesses of the tuple.
pub fn generator_support(oracle: &LengthOracle, tuple: &[BraidWord]) -> BTreeSet<usize> {
    let mask = tuple
        .iter()
        .map(|w| support_mask(oracle.approx_length(w).witness.letters()))
        .fold(0, |acc, m| acc | m);
    mask_indices(mask)
}

/// True iff the witness supports of the two tuples are at index distance at
/// least two, so that they generate commuting subgroups.
pub fn is_separated(oracle: &LengthOracle, a: &[BraidWord], b: &[BraidWord]) -> bool {
    let ma = a.iter().fold(0, |acc, w| acc | support_mask(oracle.approx_length(w).witness.letters()));
    let mb = b.iter().fold(0, |acc, w| acc | support_mask(oracle.approx_length(w).witness.letters()));
    masks_separated(ma, mb)
}

/// Bit `i` set iff `σ_i^{±1}` occurs.
pub(crate) fn support_mask(letters: &[i8]) -> u64 {
    letters.iter().fold(0u64, |acc, &e| acc | 1 << e.unsigned_abs())
}

pub(crate) fn masks_separated(a: u64, b: u64) -> bool {
    a & (b | b << 1 | b >> 1) == 0
}

pub(crate) fn mask_indices(mask: u64) -> BTreeSet<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}
