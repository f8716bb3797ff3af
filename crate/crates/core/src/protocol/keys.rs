use rand::Rng;

use super::poly::random_m0;
use super::ttp::TtpInstance;
use crate::burau::{EvalPoint, EvaluatedPair, FpMatrix, PrimeField};
use crate::{Error, Result};

/// Public platform data shared by both parties: `m_0` and the evaluation
/// point `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Platform {
    pub m0: FpMatrix,
    pub ep: EvalPoint,
}

impl Platform {
    pub fn random<R: Rng + ?Sized>(n: usize, field: PrimeField, rng: &mut R) -> Self {
        let m0 = random_m0(n, field, rng);
        let ep = EvalPoint::random(n, field, rng);
        Platform { m0, ep }
    }

    /// Uses the instance's recorded `τ` when present, otherwise samples one.
    pub fn for_instance<R: Rng + ?Sized>(inst: &TtpInstance, rng: &mut R) -> Result<Self> {
        let field = inst.field()?;
        let m0 = random_m0(inst.n, field, rng);
        let ep = match inst.secret.as_ref().and_then(|s| s.taus.clone()) {
            Some(taus) => EvalPoint::new(field, taus)?,
            None => EvalPoint::random(inst.n, field, rng),
        };
        Ok(Platform { m0, ep })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Alice, whose private word runs over the `w` (BL) side.
    A,
    /// Bob, whose private word runs over the `v` (BR) side.
    B,
}

/// Key-generation knobs not fixed by the TTP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyParams {
    /// Number of powers of `m_0` in the private matrix.
    pub terms: usize,
    /// Number of published words in the private word.
    pub word_len: usize,
}

impl Default for KeyParams {
    fn default() -> Self {
        KeyParams { terms: 3, word_len: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    pub side: Side,
    /// `n_a` or `n_b`, a nonzero element of `F_p[m_0]`.
    pub matrix: FpMatrix,
    /// Signed one-based indices into the published list of this side;
    /// `-k` selects the inverse of word `k`.
    pub word: Vec<i64>,
}

/// `Σ_{k=1..r} l_k m_0^{α_k}` with `l_k ∈ F_p` and `α_k ∈ [1, n·p]`,
/// resampled until nonzero. Since the characteristic polynomial of `m_0` is
/// irreducible, `F_p[m_0]` is a field and the result is invertible.
pub fn private_matrix<R: Rng + ?Sized>(m0: &FpMatrix, r: usize, rng: &mut R) -> FpMatrix {
    let field = m0.field();
    let p = field.modulus();
    let max_alpha = (m0.size() as u64) * p as u64;
    loop {
        let mut acc = FpMatrix::zero(m0.size(), field);
        for _ in 0..r {
            let l = rng.gen_range(0..p);
            let alpha = rng.gen_range(1..=max_alpha);
            acc = acc.add(&m0.pow(alpha).scale(l));
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

impl KeyMaterial {
    pub fn generate<R: Rng + ?Sized>(
        side: Side,
        platform: &Platform,
        gamma: usize,
        params: KeyParams,
        rng: &mut R,
    ) -> KeyMaterial {
        let matrix = private_matrix(&platform.m0, params.terms, rng);
        let word = (0..params.word_len)
            .map(|_| {
                let k = rng.gen_range(1..=gamma as i64);
                if rng.gen_bool(0.5) {
                    k
                } else {
                    -k
                }
            })
            .collect();
        KeyMaterial { side, matrix, word }
    }

    /// `acc ⋆ u_{i_1}^{ε_1} ⋆ … ⋆ u_{i_m}^{ε_m}` over this side's published
    /// words, applied letter by letter.
    fn apply_word(&self, mut acc: EvaluatedPair, inst: &TtpInstance, ep: &EvalPoint) -> Result<EvaluatedPair> {
        let list = match self.side {
            Side::A => &inst.w_pub,
            Side::B => &inst.v_pub,
        };
        for &entry in &self.word {
            let k = entry.unsigned_abs() as usize;
            if entry == 0 || k > list.len() {
                return Err(Error::PrivateIndex { entry, len: list.len() });
            }
            let u = &list[k - 1];
            if entry > 0 {
                acc.star_apply_in_place(u.letters(), ep);
            } else {
                acc.star_apply_in_place(u.invert().letters(), ep);
            }
        }
        Ok(acc)
    }

    /// `(n_a, id) ⋆ w_{i_1}^{ε_1} ⋆ …`
    pub fn public_key(&self, inst: &TtpInstance, platform: &Platform) -> Result<EvaluatedPair> {
        let start = EvaluatedPair { m: self.matrix.clone(), s: crate::braid::Permutation::identity(inst.n) };
        self.apply_word(start, inst, &platform.ep)
    }

    /// `[(n_a, id) · B_public] ⋆ w_{i_1}^{ε_1} ⋆ …`
    pub fn shared_key(&self, other_public: &EvaluatedPair, inst: &TtpInstance, platform: &Platform) -> Result<EvaluatedPair> {
        if other_public.m.size() != inst.n || other_public.s.degree() != inst.n {
            return Err(Error::Malformed("public key has the wrong dimension".into()));
        }
        self.apply_word(other_public.left_scale(&self.matrix), inst, &platform.ep)
    }
}

/// Result of one full key agreement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementOutcome {
    pub alice_public: EvaluatedPair,
    pub bob_public: EvaluatedPair,
    pub alice_key: EvaluatedPair,
    pub bob_key: EvaluatedPair,
}

impl AgreementOutcome {
    pub fn keys_match(&self) -> bool {
        self.alice_key == self.bob_key
    }
}

/// Runs both parties against the instance with fresh key material.
pub fn run_agreement<R: Rng + ?Sized>(
    inst: &TtpInstance,
    platform: &Platform,
    params: KeyParams,
    rng: &mut R,
) -> Result<AgreementOutcome> {
    let alice = KeyMaterial::generate(Side::A, platform, inst.gamma(), params, rng);
    let bob = KeyMaterial::generate(Side::B, platform, inst.gamma(), params, rng);
    let alice_public = alice.public_key(inst, platform)?;
    let bob_public = bob.public_key(inst, platform)?;
    let alice_key = alice.shared_key(&bob_public, inst, platform)?;
    let bob_key = bob.shared_key(&alice_public, inst, platform)?;
    Ok(AgreementOutcome { alice_public, bob_public, alice_key, bob_key })
}
