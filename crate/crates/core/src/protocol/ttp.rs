use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, MAX_STRANDS};
use crate::burau::PrimeField;
use crate::length::{masks_separated, support_mask};
use crate::{Error, Result};

/// How the TTP picks the generator sets `BL` and `BR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    /// `BL = {σ_1..σ_l}`, `BR = {σ_{l+2}..σ_{n-1}}` with `l = ⌊(n-2)/2⌋`.
    #[default]
    Fixed,
    /// Random disjoint nonempty sets at index distance at least two.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TtpParams {
    pub n: usize,
    pub p: u64,
    pub gamma: usize,
    pub word_len: usize,
    pub z_len: usize,
    pub split: SplitMode,
}

impl TtpParams {
    /// `n = 14`, `|z| = 17`.
    pub fn set1() -> Self {
        TtpParams { n: 14, p: 13, gamma: 27, word_len: 10, z_len: 17, split: SplitMode::Fixed }
    }

    /// `n = 12`, `|z| = 18`.
    pub fn set2() -> Self {
        TtpParams { n: 12, p: 13, gamma: 27, word_len: 10, z_len: 18, split: SplitMode::Fixed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 7 || self.n > MAX_STRANDS {
            return Err(Error::InvalidParams(format!("n = {} must lie in 7..={MAX_STRANDS}", self.n)));
        }
        PrimeField::new(self.p)?;
        if self.gamma == 0 || self.word_len == 0 || self.z_len == 0 {
            return Err(Error::InvalidParams("gamma, word_len and z_len must be at least 1".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.p)
    }
}

/// The hidden part of a TTP instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtpSecret {
    pub z: BraidWord,
    pub w: Vec<BraidWord>,
    pub v: Vec<BraidWord>,
    /// Evaluation point of the platform, if recorded.
    pub taus: Option<Vec<u32>>,
}

/// Published TTP data, optionally with the witness that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtpInstance {
    pub n: usize,
    pub p: u64,
    pub bl: Vec<usize>,
    pub br: Vec<usize>,
    pub w_pub: Vec<BraidWord>,
    pub v_pub: Vec<BraidWord>,
    pub secret: Option<TtpSecret>,
}

/// The published form of `z·u·z^{-1}` together with the power `k` such that
/// the published word equals `Δ^{2k}·z·u·z^{-1}`.
pub fn publish_word(z: &BraidWord, u: &BraidWord) -> (BraidWord, i64) {
    let nf = u.conjugate(z).normal_form();
    let reduced = nf.reduce_mod_delta_squared();
    let power = (reduced.inf() - nf.inf()) / 2;
    (reduced.word_of(), power)
}

/// Generator sets for the given mode.
pub fn choose_split<R: Rng + ?Sized>(n: usize, mode: SplitMode, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    match mode {
        SplitMode::Fixed => {
            let l = (n - 2) / 2;
            ((1..=l).collect(), (l + 2..n).collect())
        }
        SplitMode::Random => loop {
            let (mut bl, mut br) = (Vec::new(), Vec::new());
            for i in 1..n {
                match rng.gen_range(0..3) {
                    0 => bl.push(i),
                    1 => br.push(i),
                    _ => {}
                }
            }
            let ml = bl.iter().fold(0u64, |m, &i| m | 1 << i);
            let mr = br.iter().fold(0u64, |m, &i| m | 1 << i);
            if !bl.is_empty() && !br.is_empty() && masks_separated(ml, mr) {
                return (bl, br);
            }
        },
    }
}

/// Runs the TTP algorithm with a uniformly random freely reduced conjugator.
pub fn ttp_generate<R: Rng + ?Sized>(params: &TtpParams, rng: &mut R) -> Result<TtpInstance> {
    params.validate()?;
    let all: Vec<usize> = (1..params.n).collect();
    let z = BraidWord::random_word(params.n, params.z_len, &all, rng)?;
    ttp_generate_with_conjugator(params, z, rng)
}

/// Runs the TTP algorithm with a caller-chosen conjugator.
pub fn ttp_generate_with_conjugator<R: Rng + ?Sized>(
    params: &TtpParams,
    z: BraidWord,
    rng: &mut R,
) -> Result<TtpInstance> {
    params.validate()?;
    if z.strands() != params.n {
        return Err(Error::InvalidParams("conjugator has the wrong strand count".into()));
    }
    let (bl, br) = choose_split(params.n, params.split, rng);
    let mut w = Vec::with_capacity(params.gamma);
    let mut v = Vec::with_capacity(params.gamma);
    for _ in 0..params.gamma {
        w.push(BraidWord::random_word(params.n, params.word_len, &bl, rng)?);
    }
    for _ in 0..params.gamma {
        v.push(BraidWord::random_word(params.n, params.word_len, &br, rng)?);
    }
    Ok(TtpInstance::from_secrets(params.p, bl, br, z, w, v))
}

impl TtpInstance {
    /// Publishes the given secrets. The `BL`/`BR` gap is not checked here so
    /// that deliberately broken instances can be studied.
    pub fn from_secrets(
        p: u64,
        bl: Vec<usize>,
        br: Vec<usize>,
        z: BraidWord,
        w: Vec<BraidWord>,
        v: Vec<BraidWord>,
    ) -> TtpInstance {
        let w_pub = w.iter().map(|u| publish_word(&z, u).0).collect();
        let v_pub = v.iter().map(|u| publish_word(&z, u).0).collect();
        TtpInstance {
            n: z.strands(),
            p,
            bl,
            br,
            w_pub,
            v_pub,
            secret: Some(TtpSecret { z, w, v, taus: None }),
        }
    }

    pub fn gamma(&self) -> usize {
        self.w_pub.len()
    }

    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.p)
    }

    /// Hidden `Δ²` exponents of the published words (`w` side, then `v`
    /// side), i.e. `k` with `w'_i = Δ^{2k}·z·w_i·z^{-1}`.
    pub fn hidden_delta_powers(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let s = self.secret.as_ref()?;
        let powers = |ws: &[BraidWord]| ws.iter().map(|u| publish_word(&s.z, u).1).collect();
        Some((powers(&s.w), powers(&s.v)))
    }

    /// True iff `BL` and `BR` are nonempty and at index distance at least two.
    pub fn split_is_valid(&self) -> bool {
        let ml = self.bl.iter().fold(0u64, |m, &i| m | 1 << i);
        let mr = self.br.iter().fold(0u64, |m, &i| m | 1 << i);
        !self.bl.is_empty() && !self.br.is_empty() && masks_separated(ml, mr)
    }

    /// Drops the witness, keeping only what the TTP publishes.
    pub fn public_only(&self) -> TtpInstance {
        TtpInstance { secret: None, ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&InstanceRepr::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<TtpInstance> {
        serde_json::from_str::<InstanceRepr>(s)?.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct SecretRepr {
    z: Vec<i64>,
    w: Vec<Vec<i64>>,
    v: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    taus: Option<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    n: usize,
    p: u64,
    gamma: usize,
    #[serde(rename = "BL")]
    bl: Vec<usize>,
    #[serde(rename = "BR")]
    br: Vec<usize>,
    w_pub: Vec<Vec<i64>>,
    v_pub: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    secret: Option<SecretRepr>,
}

fn ints(w: &BraidWord) -> Vec<i64> {
    w.letters().iter().map(|&e| e as i64).collect()
}

fn words(n: usize, ws: &[Vec<i64>]) -> Result<Vec<BraidWord>> {
    ws.iter().map(|w| BraidWord::from_ints(n, w)).collect()
}

impl From<&TtpInstance> for InstanceRepr {
    fn from(t: &TtpInstance) -> Self {
        InstanceRepr {
            n: t.n,
            p: t.p,
            gamma: t.gamma(),
            bl: t.bl.clone(),
            br: t.br.clone(),
            w_pub: t.w_pub.iter().map(ints).collect(),
            v_pub: t.v_pub.iter().map(ints).collect(),
            secret: t.secret.as_ref().map(|s| SecretRepr {
                z: ints(&s.z),
                w: s.w.iter().map(ints).collect(),
                v: s.v.iter().map(ints).collect(),
                taus: s.taus.clone(),
            }),
        }
    }
}

impl TryFrom<InstanceRepr> for TtpInstance {
    type Error = Error;

    fn try_from(r: InstanceRepr) -> Result<Self> {
        let n = r.n;
        PrimeField::new(r.p)?;
        if r.w_pub.len() != r.gamma || r.v_pub.len() != r.gamma {
            return Err(Error::Malformed(format!("expected {} published words per side", r.gamma)));
        }
        if r.bl.iter().chain(&r.br).any(|&i| i == 0 || i >= n) {
            return Err(Error::Malformed("generator set index out of range".into()));
        }
        let secret = match r.secret {
            None => None,
            Some(s) => {
                if s.w.len() != r.gamma || s.v.len() != r.gamma {
                    return Err(Error::Malformed("secret word counts differ from gamma".into()));
                }
                if let Some(t) = &s.taus {
                    if t.len() != n {
                        return Err(Error::Malformed(format!("expected {n} taus")));
                    }
                }
                Some(TtpSecret {
                    z: BraidWord::from_ints(n, &s.z)?,
                    w: words(n, &s.w)?,
                    v: words(n, &s.v)?,
                    taus: s.taus,
                })
            }
        };
        Ok(TtpInstance {
            n,
            p: r.p,
            bl: r.bl,
            br: r.br,
            w_pub: words(n, &r.w_pub)?,
            v_pub: words(n, &r.v_pub)?,
            secret,
        })
    }
}

/// Support mask of a whole tuple of words.
pub(crate) fn tuple_mask(ws: &[BraidWord]) -> u64 {
    ws.iter().fold(0, |m, w| m | support_mask(w.letters()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> TtpParams {
        TtpParams { n: 8, p: 13, gamma: 4, word_len: 6, z_len: 5, split: SplitMode::Fixed }
    }

    #[test]
    fn presets() {
        let s1 = TtpParams::set1();
        assert_eq!((s1.n, s1.p, s1.gamma, s1.z_len), (14, 13, 27, 17));
        let s2 = TtpParams::set2();
        assert_eq!((s2.n, s2.z_len), (12, 18));
        assert!(s1.validate().is_ok() && s2.validate().is_ok());
        assert!(TtpParams { n: 6, ..s2 }.validate().is_err());
        assert!(TtpParams { p: 12, ..s2 }.validate().is_err());
        assert!(TtpParams { gamma: 0, ..s2 }.validate().is_err());
    }

    #[test]
    fn fixed_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (bl, br) = choose_split(14, SplitMode::Fixed, &mut rng);
        assert_eq!(bl, (1..=6).collect::<Vec<_>>());
        assert_eq!(br, (8..=13).collect::<Vec<_>>());
        let (bl, br) = choose_split(12, SplitMode::Fixed, &mut rng);
        assert_eq!((bl.len(), br.len()), (5, 5));
    }

    #[test]
    fn random_split_has_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let (bl, br) = choose_split(12, SplitMode::Random, &mut rng);
            assert!(!bl.is_empty() && !br.is_empty());
            for &l in &bl {
                for &r in &br {
                    assert!(l.abs_diff(r) >= 2);
                }
            }
        }
    }

    #[test]
    fn published_words_are_reduced_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = ttp_generate(&small(), &mut rng).unwrap();
        let s = inst.secret.as_ref().unwrap();
        let (pw, _) = inst.hidden_delta_powers().unwrap();
        for ((pubw, w), k) in inst.w_pub.iter().zip(&s.w).zip(&pw) {
            let nf = pubw.normal_form();
            assert!(nf.inf() == 0 || nf.inf() == -1);
            assert_eq!(nf, w.conjugate(&s.z).normal_form().reduce_mod_delta_squared());
            assert_eq!(nf, w.conjugate(&s.z).normal_form().shift_delta(2 * k));
        }
        assert!(masks_separated(tuple_mask(&s.w), tuple_mask(&s.v)));
    }

    #[test]
    fn identity_conjugator_publishes_reduced_secrets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = ttp_generate_with_conjugator(&small(), BraidWord::identity(8), &mut rng).unwrap();
        let s = inst.secret.as_ref().unwrap();
        for (pubw, w) in inst.w_pub.iter().zip(&s.w) {
            assert_eq!(pubw.normal_form(), w.normal_form().reduce_mod_delta_squared());
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = ttp_generate(&small(), &mut rng).unwrap();
        let back = TtpInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);
        let public = inst.public_only();
        let text = public.to_json().unwrap();
        assert!(!text.contains("secret"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["n", "p", "gamma", "BL", "BR", "w_pub", "v_pub"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(TtpInstance::from_json(&text).unwrap(), public);
    }

    #[test]
    fn json_rejects_bad_input() {
        let bad = r#"{"n":8,"p":13,"gamma":1,"BL":[1],"BR":[3],"w_pub":[[9]],"v_pub":[[3]]}"#;
        assert!(TtpInstance::from_json(bad).is_err());
        let short = r#"{"n":8,"p":13,"gamma":2,"BL":[1],"BR":[3],"w_pub":[[1]],"v_pub":[[3]]}"#;
        assert!(matches!(TtpInstance::from_json(short), Err(Error::Malformed(_))));
    }
}
