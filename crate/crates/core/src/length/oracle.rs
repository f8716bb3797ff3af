use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::handle::{handle_reduce, HandleCaps};
use super::local::{relation_pass, slide_cancel};
use crate::braid::BraidWord;

/// Approximate geodesic length together with a representative realising it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthEstimate {
    pub value: usize,
    pub witness: BraidWord,
}

/// Heuristic geodesic-length approximation.
///
/// Iterates to a fixpoint: cancellation modulo far commutation, Dehornoy
/// handle reduction (kept only when it shortens), and greedy braid-relation
/// rewrites inside a sliding window. Each restart reruns the pipeline on an
/// image of the word under a length-preserving symmetry (the flip
/// `σ_i ↦ σ_{n-i}` and/or word reversal) with a shuffled pass order, and the
/// shortest result wins. Results are a pure function of the word and the
/// configuration, so memoising them is safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthOracle {
    pub window: usize,
    pub restarts: usize,
    pub seed: u64,
    pub handle_caps: HandleCaps,
}

impl Default for LengthOracle {
    fn default() -> Self {
        LengthOracle { window: 4, restarts: 2, seed: 0x5eed, handle_caps: HandleCaps::default() }
    }
}

impl LengthOracle {
    pub fn approx_length(&self, w: &BraidWord) -> LengthEstimate {
        let letters = self.reduce(w.strands(), w.letters());
        LengthEstimate { value: letters.len(), witness: BraidWord::from_raw(w.strands(), letters) }
    }

    /// Core of [`approx_length`](Self::approx_length) on raw letters.
    pub(crate) fn reduce(&self, strands: usize, letters: &[i8]) -> Vec<i8> {
        let start = slide_cancel(letters);
        if start.len() <= 1 {
            return start;
        }
        let mut best = self.pipeline(&start, None);
        for r in 0..self.restarts {
            if best.len() <= 1 {
                break;
            }
            let symmetry = Symmetry::from_index(r + 1);
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ word_hash(&start) ^ (r as u64 + 1));
            let image = symmetry.apply(strands, &start);
            let reduced = self.pipeline(&image, Some(&mut rng));
            if reduced.len() < best.len() {
                best = symmetry.apply(strands, &reduced);
            }
        }
        best
    }

    fn pipeline(&self, start: &[i8], mut rng: Option<&mut ChaCha8Rng>) -> Vec<i8> {
        let mut w = start.to_vec();
        loop {
            let before = w.len();
            if let Some(h) = handle_reduce(&w, self.handle_caps) {
                let h = slide_cancel(&h);
                if h.len() < w.len() {
                    w = h;
                }
            }
            loop {
                let mut order: Vec<usize> = (0..w.len()).collect();
                if let Some(rng) = rng.as_deref_mut() {
                    order.shuffle(rng);
                }
                if !relation_pass(&mut w, self.window, &order) {
                    break;
                }
            }
            if w.len() >= before {
                return w;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Symmetry {
    Identity,
    Flip,
    Reverse,
    FlipReverse,
}

impl Symmetry {
    fn from_index(r: usize) -> Self {
        match r % 4 {
            0 => Symmetry::Identity,
            1 => Symmetry::Flip,
            2 => Symmetry::Reverse,
            _ => Symmetry::FlipReverse,
        }
    }

    /// Each symmetry is an involution on words, and the image of a word
    /// representing `g` is equivalent to the image of any other word for `g`.
    fn apply(self, strands: usize, w: &[i8]) -> Vec<i8> {
        let n = strands as i8;
        let flip = |e: i8| e.signum() * (n - e.abs());
        match self {
            Symmetry::Identity => w.to_vec(),
            Symmetry::Flip => w.iter().map(|&e| flip(e)).collect(),
            Symmetry::Reverse => w.iter().rev().copied().collect(),
            Symmetry::FlipReverse => w.iter().rev().map(|&e| flip(e)).collect(),
        }
    }
}

fn word_hash(w: &[i8]) -> u64 {
    let mut h = rustc_hash::FxHasher::default();
    w.hash(&mut h);
    h.finish()
}
