use std::fmt;

use crate::{Error, Result};

/// Largest strand count supported by the fixed-size permutation storage.
pub const MAX_STRANDS: usize = 32;

/// A permutation of `{1..n}`.
///
/// `image(x)` is the final position of the strand that starts at position
/// `x`. Composition follows word order: `a.then(&b)` applies `a` first, so
/// the projection of a braid word `u·v` is `perm(u).then(&perm(v))`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    // zero-based images; entries at and beyond `n` are zero
    img: [u8; MAX_STRANDS],
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_STRANDS, "strand count {n} exceeds {MAX_STRANDS}");
        let mut img = [0u8; MAX_STRANDS];
        for (x, slot) in img.iter_mut().enumerate().take(n) {
            *slot = x as u8;
        }
        Permutation { n: n as u8, img }
    }

    /// Builds a permutation from one-based images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_STRANDS {
            return Err(Error::StrandCount(n));
        }
        let mut seen = [false; MAX_STRANDS];
        let mut img = [0u8; MAX_STRANDS];
        for (x, &y) in images.iter().enumerate() {
            if y == 0 || y > n || seen[y - 1] {
                return Err(Error::InvalidPermutation(images.to_vec()));
            }
            seen[y - 1] = true;
            img[x] = (y - 1) as u8;
        }
        Ok(Permutation { n: n as u8, img })
    }

    /// The transposition `s_i = (i, i+1)`, one-based.
    pub fn transposition(i: usize, n: usize) -> Self {
        assert!(i >= 1 && i < n, "transposition index {i} out of range for {n}");
        let mut p = Permutation::identity(n);
        p.img.swap(i - 1, i);
        p
    }

    /// The order-reversing permutation, the projection of the half twist.
    pub fn reversal(n: usize) -> Self {
        let mut p = Permutation::identity(n);
        for x in 0..n {
            p.img[x] = (n - 1 - x) as u8;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    /// One-based image of a one-based point.
    pub fn image(&self, x: usize) -> usize {
        self.img[x - 1] as usize + 1
    }

    /// One-based images.
    pub fn images(&self) -> Vec<usize> {
        self.zero_based().iter().map(|&y| y as usize + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[u8] {
        &self.img[..self.n as usize]
    }

    pub(crate) fn from_zero_based(n: usize, src: &[u8]) -> Self {
        let mut img = [0u8; MAX_STRANDS];
        img[..n].copy_from_slice(&src[..n]);
        Permutation { n: n as u8, img }
    }

    pub fn is_identity(&self) -> bool {
        self.zero_based().iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut out = Permutation::identity(self.degree());
        for (x, &y) in self.zero_based().iter().enumerate() {
            out.img[y as usize] = x as u8;
        }
        out
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for x in 0..self.degree() {
            out.img[x] = other.img[self.img[x] as usize];
        }
        out
    }

    /// Post-compose with the transposition `s_i` (one-based) in place.
    pub(crate) fn then_transposition(&mut self, i: usize) {
        let (a, b) = ((i - 1) as u8, i as u8);
        for y in self.img[..self.n as usize].iter_mut() {
            if *y == a {
                *y = b;
            } else if *y == b {
                *y = a;
            }
        }
    }

    /// Number of inverted pairs, i.e. the Coxeter length.
    pub fn inversions(&self) -> usize {
        let img = self.zero_based();
        let mut count = 0;
        for i in 0..img.len() {
            for j in i + 1..img.len() {
                if img[i] > img[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1, 3]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_images(&[2, 4, 1]).is_err());
        assert_eq!(Permutation::from_images(&[2, 1, 3]).unwrap().images(), vec![2, 1, 3]);
    }

    #[test]
    fn composition_order() {
        let s1 = Permutation::transposition(1, 3);
        let s2 = Permutation::transposition(2, 3);
        // strand 1 moves to 2 under s1, then to 3 under s2
        assert_eq!(s1.then(&s2).images(), vec![3, 1, 2]);
        let mut q = s1;
        q.then_transposition(2);
        assert_eq!(q, s1.then(&s2));
    }

    #[test]
    fn inverse_and_inversions() {
        let p = Permutation::from_images(&[3, 1, 4, 2]).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.inversions(), 3);
        assert_eq!(Permutation::reversal(14).inversions(), 91);
    }
}
