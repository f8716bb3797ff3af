//! Left Garside normal form `Δ^inf · ξ_1 ⋯ ξ_ℓ` over permutation braids.
//!
//! A permutation braid (simple element) is stored as its permutation
//! together with the inverse, so that multiplying by a generator on either
//! side costs two swaps. Normal forms are built incrementally: negative
//! letters become `Δ^{-1}` times a complement, the `Δ^{-1}`s are pushed to
//! the front with the flip automorphism `τ`, and each new simple factor is
//! absorbed by a right-to-left left-weighting sweep.

use std::fmt;

use super::perm::{Permutation, MAX_STRANDS};
use super::word::{half_twist_letters, invert_letters, BraidWord};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
struct Simple {
    n: u8,
    fwd: [u8; MAX_STRANDS],
    inv: [u8; MAX_STRANDS],
}

impl Simple {
    fn identity(n: usize) -> Self {
        let mut fwd = [0u8; MAX_STRANDS];
        for (x, slot) in fwd.iter_mut().enumerate().take(n) {
            *slot = x as u8;
        }
        Simple { n: n as u8, fwd, inv: fwd }
    }

    fn from_perm(p: &Permutation) -> Self {
        let n = p.degree();
        let mut s = Simple::identity(n);
        for (x, &y) in p.zero_based().iter().enumerate() {
            s.fwd[x] = y;
            s.inv[y as usize] = x as u8;
        }
        s
    }

    fn to_perm(self) -> Permutation {
        Permutation::from_zero_based(self.n as usize, &self.fwd)
    }

    fn sigma(i: usize, n: usize) -> Self {
        let mut s = Simple::identity(n);
        s.mul_sigma_right(i);
        s
    }

    /// `Δ σ_i^{-1}`: the simple element `A` with `A σ_i = Δ`.
    fn complement_of_sigma(i: usize, n: usize) -> Self {
        let mut s = Simple::identity(n);
        for x in 0..n {
            let mut y = n - 1 - x;
            if y == i - 1 {
                y = i;
            } else if y == i {
                y = i - 1;
            }
            s.fwd[x] = y as u8;
            s.inv[y] = x as u8;
        }
        s
    }

    fn is_identity(&self) -> bool {
        (0..self.n as usize).all(|x| self.fwd[x] as usize == x)
    }

    fn is_delta(&self) -> bool {
        let n = self.n as usize;
        (0..n).all(|x| self.fwd[x] as usize == n - 1 - x)
    }

    /// Bit `i-1` is set iff the braid can start with `σ_i`.
    fn starting_set(&self) -> u32 {
        let mut mask = 0;
        for i in 1..self.n as usize {
            if self.fwd[i - 1] > self.fwd[i] {
                mask |= 1 << (i - 1);
            }
        }
        mask
    }

    /// Bit `i-1` is set iff the braid can end with `σ_i`.
    fn finishing_set(&self) -> u32 {
        let mut mask = 0;
        for i in 1..self.n as usize {
            if self.inv[i - 1] > self.inv[i] {
                mask |= 1 << (i - 1);
            }
        }
        mask
    }

    /// `self ← self · σ_i`; requires `i ∉ F(self)`.
    fn mul_sigma_right(&mut self, i: usize) {
        self.inv.swap(i - 1, i);
        self.fwd[self.inv[i - 1] as usize] = (i - 1) as u8;
        self.fwd[self.inv[i] as usize] = i as u8;
    }

    /// `self ← σ_i^{-1} · self`; requires `i ∈ S(self)`.
    fn div_sigma_left(&mut self, i: usize) {
        self.fwd.swap(i - 1, i);
        self.inv[self.fwd[i - 1] as usize] = (i - 1) as u8;
        self.inv[self.fwd[i] as usize] = i as u8;
    }

    /// Conjugation by `Δ`, i.e. `σ_i ↦ σ_{n-i}`.
    fn tau(&self) -> Self {
        let n = self.n as usize;
        let mut out = Simple::identity(n);
        for x in 0..n {
            let y = n - 1 - self.fwd[n - 1 - x] as usize;
            out.fwd[x] = y as u8;
            out.inv[y] = x as u8;
        }
        out
    }

    /// The simple element `∂A` with `A·∂A = Δ`.
    fn right_complement(&self) -> Self {
        let n = self.n as usize;
        let mut out = Simple::identity(n);
        for y in 0..n {
            let z = n - 1 - self.inv[y] as usize;
            out.fwd[y] = z as u8;
            out.inv[z] = y as u8;
        }
        out
    }

    fn word(&self) -> Vec<i8> {
        let mut rest = *self;
        let mut out = Vec::new();
        loop {
            let s = rest.starting_set();
            if s == 0 {
                break;
            }
            let i = s.trailing_zeros() as usize + 1;
            out.push(i as i8);
            rest.div_sigma_left(i);
        }
        out
    }
}

/// Makes `(a, b)` left-weighted; returns whether anything moved.
fn left_weight(a: &mut Simple, b: &mut Simple) -> bool {
    let mut changed = false;
    loop {
        let d = b.starting_set() & !a.finishing_set();
        if d == 0 {
            return changed;
        }
        let i = d.trailing_zeros() as usize + 1;
        a.mul_sigma_right(i);
        b.div_sigma_left(i);
        changed = true;
    }
}

struct Builder {
    delta_power: i64,
    factors: Vec<Simple>,
}

impl Builder {
    fn push(&mut self, b: Simple) {
        if b.is_identity() {
            return;
        }
        self.factors.push(b);
        let mut k = self.factors.len() - 1;
        while k > 0 {
            let (head, tail) = self.factors.split_at_mut(k);
            if !left_weight(&mut head[k - 1], &mut tail[0]) {
                break;
            }
            k -= 1;
        }
        if self.factors.last().is_some_and(Simple::is_identity) {
            self.factors.pop();
        }
        let leading = self.factors.iter().take_while(|f| f.is_delta()).count();
        if leading > 0 {
            self.delta_power += leading as i64;
            self.factors.drain(..leading);
        }
    }
}

/// A permutation braid used as a normal-form factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GarsideFactor(Permutation);

impl GarsideFactor {
    /// Wraps a permutation; rejects the identity and the half twist.
    pub fn new(p: Permutation) -> Result<Self> {
        let s = Simple::from_perm(&p);
        if s.is_identity() || s.is_delta() {
            return Err(Error::InvalidPermutation(p.images()));
        }
        Ok(GarsideFactor(p))
    }

    pub fn permutation(&self) -> &Permutation {
        &self.0
    }

    /// Generators `σ_i` the factor can start with.
    pub fn starting_set(&self) -> Vec<usize> {
        mask_to_indices(Simple::from_perm(&self.0).starting_set())
    }

    /// Generators `σ_i` the factor can end with.
    pub fn finishing_set(&self) -> Vec<usize> {
        mask_to_indices(Simple::from_perm(&self.0).finishing_set())
    }

    /// A positive word for the permutation braid.
    pub fn word(&self) -> BraidWord {
        BraidWord::from_raw(self.0.degree(), Simple::from_perm(&self.0).word())
    }
}

impl fmt::Debug for GarsideFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Left normal form `Δ^inf · ξ_1 ⋯ ξ_ℓ`. Two words represent the same braid
/// iff their normal forms are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GarsideNormalForm {
    strands: usize,
    inf: i64,
    factors: Vec<GarsideFactor>,
}

impl GarsideNormalForm {
    pub fn identity(strands: usize) -> Self {
        GarsideNormalForm { strands, inf: 0, factors: Vec::new() }
    }

    /// Assembles a normal form from parts, checking the factor invariants.
    pub fn from_parts(strands: usize, inf: i64, factors: Vec<GarsideFactor>) -> Result<Self> {
        if factors.iter().any(|f| f.0.degree() != strands) {
            return Err(Error::InvalidParams("factor degree differs from strand count".into()));
        }
        let nf = GarsideNormalForm { strands, inf, factors };
        if !nf.is_left_weighted() {
            return Err(Error::InvalidParams("factors are not left-weighted".into()));
        }
        Ok(nf)
    }

    pub(crate) fn of_letters(strands: usize, letters: &[i8]) -> Self {
        let mut remaining_neg = letters.iter().filter(|&&e| e < 0).count();
        let neg_total = remaining_neg as i64;
        let mut builder = Builder { delta_power: 0, factors: Vec::new() };
        for &e in letters {
            let i = e.unsigned_abs() as usize;
            let mut simple = if e > 0 {
                Simple::sigma(i, strands)
            } else {
                remaining_neg -= 1;
                Simple::complement_of_sigma(i, strands)
            };
            // every Δ^{-1} to the right of this letter passes over it
            if remaining_neg % 2 == 1 {
                simple = simple.tau();
            }
            builder.push(simple);
        }
        GarsideNormalForm {
            strands,
            inf: builder.delta_power - neg_total,
            factors: builder.factors.into_iter().map(|s| GarsideFactor(s.to_perm())).collect(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// The power of `Δ`.
    pub fn inf(&self) -> i64 {
        self.inf
    }

    pub fn sup(&self) -> i64 {
        self.inf + self.factors.len() as i64
    }

    pub fn factors(&self) -> &[GarsideFactor] {
        &self.factors
    }

    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Checks the pairwise left-weighting condition and the factor bounds.
    pub fn is_left_weighted(&self) -> bool {
        let simples: Vec<Simple> = self.factors.iter().map(|f| Simple::from_perm(&f.0)).collect();
        if simples.iter().any(|s| s.is_identity() || s.is_delta()) {
            return false;
        }
        simples
            .windows(2)
            .all(|p| p[1].starting_set() & !p[0].finishing_set() == 0)
    }

    /// `Δ^k · self`.
    pub fn shift_delta(&self, k: i64) -> Self {
        GarsideNormalForm { inf: self.inf + k, ..self.clone() }
    }

    /// Moves `inf` to `-1` or `0` according to its parity.
    pub fn reduce_mod_delta_squared(&self) -> Self {
        let inf = if self.inf.rem_euclid(2) == 0 { 0 } else { -1 };
        self.shift_delta(inf - self.inf)
    }

    /// A braid word whose normal form is `self`.
    pub fn word_of(&self) -> BraidWord {
        let n = self.strands;
        let delta = half_twist_letters(n);
        let delta_inv = invert_letters(&delta);
        let mut letters = Vec::new();
        let block = if self.inf >= 0 { &delta } else { &delta_inv };
        for _ in 0..self.inf.unsigned_abs() {
            letters.extend_from_slice(block);
        }
        for f in &self.factors {
            letters.extend(Simple::from_perm(&f.0).word());
        }
        BraidWord::from_raw(n, letters)
    }

    /// A word of the form `N^{-1}·P` with `N`, `P` positive. Each leading
    /// `Δ^{-1}` is absorbed by the next factor, `Δ^{-1}·A = (∂A)^{-1}`, so
    /// for negative `inf` this is usually far shorter than
    /// [`word_of`](Self::word_of). A braid lying in a standard parabolic
    /// subgroup `⟨σ_i : i ∈ I⟩` gets a word over exactly those generators.
    pub fn mixed_word(&self) -> BraidWord {
        if self.inf >= 0 {
            return self.word_of();
        }
        let n = self.strands;
        let r = self.inf.unsigned_abs() as usize;
        let m = r.min(self.factors.len());
        let mut letters = Vec::new();
        for (i, f) in self.factors[..m].iter().enumerate() {
            let mut b = Simple::from_perm(&f.0).right_complement();
            if (r - 1 - i) % 2 == 1 {
                b = b.tau();
            }
            letters.extend(invert_letters(&b.word()));
        }
        let delta_inv = invert_letters(&half_twist_letters(n));
        for _ in m..r {
            letters.extend_from_slice(&delta_inv);
        }
        for f in &self.factors[m..] {
            letters.extend(Simple::from_perm(&f.0).word());
        }
        BraidWord::from_raw(n, letters)
    }
}

impl fmt::Display for GarsideNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{}", self.inf)?;
        for x in &self.factors {
            write!(f, " · {}", x.0)?;
        }
        Ok(())
    }
}
