use super::eval::{EvalPoint, FpMatrix};
use super::field::PrimeField;
use super::laurent::LaurentPoly;
use crate::braid::{BraidWord, Permutation};
use crate::{Error, Result};

/// Default cap on the total number of monomials held by a symbolic matrix.
pub const DEFAULT_TERM_CAP: usize = 100_000;

/// `n × n` matrix over `F_p[t_1^{±1}, …, t_n^{±1}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CBMatrix {
    n: usize,
    field: PrimeField,
    entries: Vec<LaurentPoly>,
}

impl CBMatrix {
    pub fn identity(n: usize, field: PrimeField) -> Self {
        let mut entries = vec![LaurentPoly::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = LaurentPoly::constant(1, n, &field);
        }
        CBMatrix { n, field, entries }
    }

    /// The matrix `x_i`: the identity with row `i` replaced by
    /// `(…, t_i, -t_i, 1, …)` in columns `i-1, i, i+1` (row 1 has no `t_1`
    /// in column 0).
    pub fn generator(i: usize, n: usize, field: PrimeField) -> Result<Self> {
        check_index(i, n)?;
        let mut m = CBMatrix::identity(n, field);
        let r = i - 1;
        let p = field.modulus();
        if r > 0 {
            m.entries[r * n + r - 1] = LaurentPoly::variable(1, i, 1, n, &field);
        }
        m.entries[r * n + r] = LaurentPoly::variable(p - 1, i, 1, n, &field);
        m.entries[r * n + r + 1] = LaurentPoly::constant(1, n, &field);
        Ok(m)
    }

    /// The matrix `x_i^{-1}`: row `i` becomes `(…, 1, -t_i^{-1}, t_i^{-1}, …)`
    /// (row 1 is `(-t_1^{-1}, t_1^{-1}, …)`).
    pub fn generator_inverse(i: usize, n: usize, field: PrimeField) -> Result<Self> {
        check_index(i, n)?;
        let mut m = CBMatrix::identity(n, field);
        let r = i - 1;
        let p = field.modulus();
        if r > 0 {
            m.entries[r * n + r - 1] = LaurentPoly::constant(1, n, &field);
        }
        m.entries[r * n + r] = LaurentPoly::variable(p - 1, i, -1, n, &field);
        m.entries[r * n + r + 1] = LaurentPoly::variable(1, i, -1, n, &field);
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn entry(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.n + c]
    }

    pub fn mul(&self, other: &CBMatrix) -> CBMatrix {
        assert_eq!(self.n, other.n);
        let (n, f) = (self.n, &self.field);
        let mut entries = vec![LaurentPoly::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * n + j] = entries[i * n + j].add(&a.mul(b, f), f);
                }
            }
        }
        CBMatrix { n, field: self.field, entries }
    }

    /// `^s m`: permutes the variables of every entry.
    pub fn perm_act(&self, s: &Permutation) -> CBMatrix {
        CBMatrix { n: self.n, field: self.field, entries: self.entries.iter().map(|e| e.permute(s)).collect() }
    }

    /// Entrywise substitution `t_k ↦ τ_k`.
    pub fn evaluate(&self, ep: &EvalPoint) -> FpMatrix {
        let f = self.field;
        let mut out = FpMatrix::zero(self.n, f);
        for r in 0..self.n {
            for c in 0..self.n {
                out.set(r, c, self.entries[r * self.n + c].evaluate(ep.taus(), &f));
            }
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.entries.iter().map(LaurentPoly::term_count).sum()
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::GeneratorIndex { index: i, strands: n });
    }
    Ok(())
}

/// An element `(m, s)` of the colored Burau group, with multiplication
/// `(m_1, s_1)(m_2, s_2) = (m_1 · ^{s_1} m_2, s_1 s_2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CBElement {
    pub m: CBMatrix,
    pub s: Permutation,
}

impl CBElement {
    pub fn identity(n: usize, field: PrimeField) -> Self {
        CBElement { m: CBMatrix::identity(n, field), s: Permutation::identity(n) }
    }

    /// Image of `σ_i`: `(x_i, s_i)`.
    pub fn generator(i: usize, n: usize, field: PrimeField) -> Result<Self> {
        Ok(CBElement { m: CBMatrix::generator(i, n, field)?, s: Permutation::transposition(i, n) })
    }

    /// Image of `σ_i^{-1}`: `(^{s_i} x_i^{-1}, s_i)`, the inverse of
    /// `(x_i, s_i)`.
    pub fn generator_inverse(i: usize, n: usize, field: PrimeField) -> Result<Self> {
        let s = Permutation::transposition(i, n);
        Ok(CBElement { m: CBMatrix::generator_inverse(i, n, field)?.perm_act(&s), s })
    }

    pub fn mul(&self, other: &CBElement) -> CBElement {
        CBElement { m: self.m.mul(&other.m.perm_act(&self.s)), s: self.s.then(&other.s) }
    }

    pub fn is_identity(&self) -> bool {
        self.s.is_identity() && self.m == CBMatrix::identity(self.m.n, self.m.field)
    }
}

/// The colored Burau representation `φ(w)` over `F_p`. Fails with
/// [`Error::TermCap`] if the intermediate matrices grow past `term_cap`
/// monomials in total.
pub fn phi(w: &BraidWord, field: PrimeField, term_cap: usize) -> Result<CBElement> {
    let n = w.strands();
    let mut acc = CBElement::identity(n, field);
    for &e in w.letters() {
        let i = e.unsigned_abs() as usize;
        let g = if e > 0 {
            CBElement::generator(i, n, field)?
        } else {
            CBElement::generator_inverse(i, n, field)?
        };
        acc = acc.mul(&g);
        if acc.m.term_count() > term_cap {
            return Err(Error::TermCap { cap: term_cap });
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burau::eval::EvaluatedPair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    fn phi_of(n: usize, letters: &[i8]) -> CBElement {
        phi(&BraidWord::new(n, letters.to_vec()).unwrap(), f13(), DEFAULT_TERM_CAP).unwrap()
    }

    #[test]
    fn generator_inverse_is_inverse() {
        let f = f13();
        for n in 2..6 {
            for i in 1..n {
                let g = CBElement::generator(i, n, f).unwrap();
                let h = CBElement::generator_inverse(i, n, f).unwrap();
                assert!(g.mul(&h).is_identity(), "n={n} i={i}");
                assert!(h.mul(&g).is_identity(), "n={n} i={i}");
            }
        }
        assert!(CBMatrix::generator(0, 4, f).is_err());
        assert!(CBMatrix::generator(4, 4, f).is_err());
    }

    #[test]
    fn braid_relations_hold_symbolically() {
        assert_eq!(phi_of(3, &[1, 2, 1]), phi_of(3, &[2, 1, 2]));
        assert_eq!(phi_of(4, &[2, 3, 2]), phi_of(4, &[3, 2, 3]));
        assert_eq!(phi_of(4, &[1, 3]), phi_of(4, &[3, 1]));
        assert_ne!(phi_of(3, &[1, 2]), phi_of(3, &[2, 1]));
    }

    #[test]
    fn single_generator_entries() {
        let e = phi_of(3, &[1]);
        let f = f13();
        assert_eq!(*e.m.entry(0, 0), LaurentPoly::variable(12, 1, 1, 3, &f));
        assert_eq!(*e.m.entry(0, 1), LaurentPoly::constant(1, 3, &f));
        assert_eq!(e.s.images(), vec![2, 1, 3]);
    }

    #[test]
    fn term_cap_is_enforced() {
        let w = BraidWord::new(4, vec![1, 2, 3, 1, 2, 3, 1, 2, 3]).unwrap();
        assert!(matches!(phi(&w, f13(), 5), Err(Error::TermCap { cap: 5 })));
    }

    #[test]
    fn star_apply_matches_evaluated_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = f13();
        for n in [3usize, 4, 6] {
            for len in [1usize, 5, 12] {
                let alphabet: Vec<usize> = (1..n).collect();
                let w = BraidWord::random_word(n, len, &alphabet, &mut rng).unwrap();
                let ep = EvalPoint::random(n, f, &mut rng);
                let sym = phi(&w, f, DEFAULT_TERM_CAP).unwrap();
                let fast = EvaluatedPair::identity(n, f).star_apply(&w, &ep);
                assert_eq!(fast.m, sym.m.evaluate(&ep), "n={n} w={w:?}");
                assert_eq!(fast.s, sym.s);
            }
        }
    }
}
