use std::fmt;

use rand::Rng;

use super::garside::GarsideNormalForm;
use super::perm::{Permutation, MAX_STRANDS};
use crate::{Error, Result};

/// A word over the Artin generators of `B_n`.
///
/// Letter `e > 0` stands for `σ_e`, letter `e < 0` for `σ_{|e|}^{-1}`;
/// indices are one-based and satisfy `1 <= |e| <= n - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i8>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i8>) -> Result<Self> {
        check_strands(strands)?;
        if let Some(&bad) = letters
            .iter()
            .find(|&&e| e == 0 || e.unsigned_abs() as usize >= strands)
        {
            return Err(Error::LetterOutOfRange { letter: bad as i64, strands });
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parses letters given as wider integers, e.g. from JSON.
    pub fn from_ints(strands: usize, letters: &[i64]) -> Result<Self> {
        check_strands(strands)?;
        let mut out = Vec::with_capacity(letters.len());
        for &e in letters {
            if e == 0 || e.unsigned_abs() as usize >= strands {
                return Err(Error::LetterOutOfRange { letter: e, strands });
            }
            out.push(e as i8);
        }
        Ok(BraidWord { strands, letters: out })
    }

    /// Trusted constructor for letters produced by the crate itself.
    pub(crate) fn from_raw(strands: usize, letters: Vec<i8>) -> Self {
        debug_assert!(letters
            .iter()
            .all(|&e| e != 0 && (e.unsigned_abs() as usize) < strands));
        BraidWord { strands, letters }
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn generator(strands: usize, letter: i8) -> Result<Self> {
        BraidWord::new(strands, vec![letter])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<i8> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Cancels adjacent `e, -e` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        BraidWord::from_raw(self.strands, free_reduce_letters(&self.letters))
    }

    /// Reversed, sign-flipped word.
    pub fn invert(&self) -> BraidWord {
        BraidWord::from_raw(self.strands, invert_letters(&self.letters))
    }

    /// Concatenation followed by free reduction.
    pub fn mult(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands, "strand counts differ");
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        BraidWord::from_raw(self.strands, free_reduce_letters(&letters))
    }

    /// `x · self · x^{-1}`.
    pub fn conjugate(&self, x: &BraidWord) -> BraidWord {
        x.mult(self).mult(&x.invert())
    }

    /// Image under the projection `B_n → S_n`.
    pub fn permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.strands);
        for &e in &self.letters {
            p.then_transposition(e.unsigned_abs() as usize);
        }
        p
    }

    pub fn normal_form(&self) -> GarsideNormalForm {
        GarsideNormalForm::of_letters(self.strands, &self.letters)
    }

    /// True iff both words represent the same braid.
    pub fn equivalent(&self, other: &BraidWord) -> bool {
        self.strands == other.strands && self.normal_form() == other.normal_form()
    }

    /// `Δ = (σ_1…σ_{n−1})(σ_1…σ_{n−2})…(σ_1)`.
    pub fn half_twist_word(strands: usize) -> BraidWord {
        BraidWord::from_raw(strands, half_twist_letters(strands))
    }

    /// A freely reduced word of exactly `length` letters over the given
    /// generator indices and their inverses, uniform among such words.
    pub fn random_word<R: Rng + ?Sized>(
        strands: usize,
        length: usize,
        alphabet: &[usize],
        rng: &mut R,
    ) -> Result<BraidWord> {
        check_strands(strands)?;
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if let Some(&bad) = alphabet.iter().find(|&&i| i == 0 || i >= strands) {
            return Err(Error::GeneratorIndex { index: bad, strands });
        }
        let signed: Vec<i8> = alphabet
            .iter()
            .flat_map(|&i| [i as i8, -(i as i8)])
            .collect();
        let mut letters: Vec<i8> = Vec::with_capacity(length);
        while letters.len() < length {
            let e = match letters.last() {
                None => signed[rng.gen_range(0..signed.len())],
                Some(&prev) => {
                    // uniform over the 2k-1 letters that are not the inverse of prev
                    let pick = rng.gen_range(0..signed.len() - 1);
                    let forbidden = signed.iter().position(|&s| s == -prev).unwrap();
                    signed[if pick >= forbidden { pick + 1 } else { pick }]
                }
            };
            letters.push(e);
        }
        Ok(BraidWord::from_raw(strands, letters))
    }

    /// Sorted set of generator indices occurring in the word.
    pub fn support(&self) -> Vec<usize> {
        let mut mask = 0u64;
        for &e in &self.letters {
            mask |= 1 << e.unsigned_abs();
        }
        (1..self.strands).filter(|i| mask & (1 << i) != 0).collect()
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}{:?}", self.strands, self.letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.letters)
    }
}

fn check_strands(strands: usize) -> Result<()> {
    if (2..=MAX_STRANDS).contains(&strands) {
        Ok(())
    } else {
        Err(Error::StrandCount(strands))
    }
}

pub(crate) fn free_reduce_letters(letters: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::with_capacity(letters.len());
    for &e in letters {
        if out.last() == Some(&-e) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

pub(crate) fn invert_letters(letters: &[i8]) -> Vec<i8> {
    letters.iter().rev().map(|&e| -e).collect()
}

pub(crate) fn half_twist_letters(strands: usize) -> Vec<i8> {
    let mut out = Vec::with_capacity(strands * (strands - 1) / 2);
    for top in (1..strands).rev() {
        out.extend((1..=top).map(|i| i as i8));
    }
    out
}
