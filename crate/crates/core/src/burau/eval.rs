use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use crate::braid::{BraidWord, Permutation};
use crate::{Error, Result};

/// Values `τ_1..τ_n ∈ F_p \ {0}` substituted for `t_1..t_n`. Nonzero values
/// make every evaluated generator and generator inverse invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPoint {
    field: PrimeField,
    taus: Vec<u32>,
}

impl EvalPoint {
    pub fn new(field: PrimeField, taus: Vec<u32>) -> Result<Self> {
        if let Some(k) = taus.iter().position(|&t| t % field.modulus() == 0) {
            return Err(Error::ZeroTau(k + 1));
        }
        let taus = taus.into_iter().map(|t| t % field.modulus()).collect();
        Ok(EvalPoint { field, taus })
    }

    /// Uniform over `(F_p \ {0})^n`.
    pub fn random<R: Rng + ?Sized>(n: usize, field: PrimeField, rng: &mut R) -> Self {
        let taus = (0..n).map(|_| rng.gen_range(1..field.modulus())).collect();
        EvalPoint { field, taus }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn taus(&self) -> &[u32] {
        &self.taus
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }
}

/// Dense `n × n` matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    n: usize,
    field: PrimeField,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zero(n: usize, field: PrimeField) -> Self {
        FpMatrix { n, field, data: vec![0; n * n] }
    }

    pub fn identity(n: usize, field: PrimeField) -> Self {
        let mut m = FpMatrix::zero(n, field);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("matrix is not square".into()));
        }
        let p = field.modulus();
        if rows.iter().flatten().any(|&x| x >= p) {
            return Err(Error::Malformed(format!("matrix entry not reduced mod {p}")));
        }
        Ok(FpMatrix { n, field, data: rows.concat() })
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.n + c] = v % self.field.modulus();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.n, other.n);
        let (n, p) = (self.n, self.field.modulus() as u64);
        let mut out = FpMatrix::zero(n, self.field);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.data[k * n + j] as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        let f = self.field;
        FpMatrix {
            n: self.n,
            field: f,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let f = self.field;
        FpMatrix { n: self.n, field: f, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn pow(&self, mut exp: u64) -> FpMatrix {
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.n, self.field);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> u32 {
        let (n, f) = (self.n, self.field);
        let mut a = self.data.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for r in col + 1..n {
                let factor = f.mul(a[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let v = f.mul(factor, a[col * n + j]);
                    a[r * n + j] = f.sub(a[r * n + j], v);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    /// `self ← self · X` where `X` is the identity except for row `r`,
    /// which has `left` at column `r-1` (if any), `diag` at `r` and `right`
    /// at `r+1`.
    fn mul_row_generator(&mut self, r: usize, left: u32, diag: u32, right: u32) {
        let (n, f) = (self.n, self.field);
        for a in 0..n {
            let row = &mut self.data[a * n..(a + 1) * n];
            let m = row[r];
            if m == 0 {
                continue;
            }
            if r > 0 {
                row[r - 1] = f.add(row[r - 1], f.mul(m, left));
            }
            row[r + 1] = f.add(row[r + 1], f.mul(m, right));
            row[r] = f.mul(m, diag);
        }
    }
}

/// An element of `GL(n, F_p) × S_n`, the set acted on by `⋆`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatedPair {
    pub m: FpMatrix,
    pub s: Permutation,
}

impl EvaluatedPair {
    pub fn identity(n: usize, field: PrimeField) -> Self {
        EvaluatedPair { m: FpMatrix::identity(n, field), s: Permutation::identity(n) }
    }

    /// `(m_1, s_1) · (m_2, s_2) = (m_1 m_2, s_2)` for a pair with trivial
    /// permutation part on the left, as used for `(n_a, id) · B_public`.
    pub fn left_scale(&self, m: &FpMatrix) -> EvaluatedPair {
        EvaluatedPair { m: m.mul(&self.m), s: self.s }
    }

    /// `self ⋆ φ(w)`, one generator at a time. For a letter with
    /// colored-Burau image `(m_g, s_g)` this performs
    /// `(M, s) ← (M · π(^s m_g), s · s_g)` without forming symbolic matrices.
    pub fn star_apply(&self, w: &BraidWord, ep: &EvalPoint) -> EvaluatedPair {
        let mut out = self.clone();
        out.star_apply_in_place(w.letters(), ep);
        out
    }

    pub(crate) fn star_apply_in_place(&mut self, letters: &[i8], ep: &EvalPoint) {
        let f = ep.field;
        let n = self.m.n;
        // strand_at[k]: the strand currently at position k, i.e. s^{-1}(k)
        let mut strand_at = self.s.inverse().zero_based().to_vec();
        for &e in letters {
            let i = e.unsigned_abs() as usize;
            let r = i - 1;
            if e > 0 {
                // x_i with t_i ↦ τ of the strand at position i
                let t = ep.taus[strand_at[r] as usize];
                let mt = f.neg(t);
                if i == 1 {
                    self.m.mul_row_generator(0, 0, mt, 1);
                } else {
                    self.m.mul_row_generator(r, t, mt, 1);
                }
            } else {
                // ^{s_i} x_i^{-1}, whose entries use t_{i+1}^{-1}
                let u = f.inv(ep.taus[strand_at[r + 1] as usize]);
                let mu = f.neg(u);
                if i == 1 {
                    self.m.mul_row_generator(0, 0, mu, u);
                } else {
                    self.m.mul_row_generator(r, 1, mu, u);
                }
            }
            debug_assert!(r + 1 < n);
            strand_at.swap(r, r + 1);
        }
        // inverse of strand_at is the new image array
        let mut img = vec![0u8; n];
        for (pos, &strand) in strand_at.iter().enumerate() {
            img[strand as usize] = pos as u8;
        }
        self.s = Permutation::from_zero_based(n, &img);
    }
}

/// True iff `(π(m_a), s_a) ⋆ φ(b) = (π(m_b), s_b) ⋆ φ(a)`.
pub fn star_commute_check(a: &BraidWord, b: &BraidWord, ep: &EvalPoint) -> bool {
    let id = EvaluatedPair::identity(a.strands(), ep.field());
    let ab = id.star_apply(a, ep).star_apply(b, ep);
    let ba = id.star_apply(b, ep).star_apply(a, ep);
    ab == ba
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    matrix: Vec<Vec<u32>>,
    perm: Permutation,
}

impl EvaluatedPair {
    /// `{matrix, perm}` JSON value.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PairRepr { matrix: self.m.rows(), perm: self.s }).expect("pair serializes")
    }

    pub fn from_json(v: &serde_json::Value, field: PrimeField) -> Result<Self> {
        let repr: PairRepr = serde_json::from_value(v.clone())?;
        let m = FpMatrix::from_rows(field, &repr.matrix)?;
        if m.size() != repr.perm.degree() {
            return Err(Error::Malformed("matrix and permutation sizes differ".into()));
        }
        Ok(EvaluatedPair { m, s: repr.perm })
    }
}
