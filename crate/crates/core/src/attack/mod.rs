//! The length-based attack on TTP instances: Δ-power recovery followed by a
//! search for a conjugator that separates the two published tuples.

mod delta;
mod search;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use delta::recover_delta_power;
pub use search::{
    recover_conjugator_backtracking, recover_conjugator_greedy, recover_conjugator_ii, SearchCaps, SearchFailure,
    SearchResult, TraceStep,
};

use crate::braid::BraidWord;
use crate::clock::Stopwatch;
use crate::length::{masks_separated, LengthOracle};
use crate::protocol::{tuple_mask, TtpInstance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Greedy,
    Backtracking,
    Variant2,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Greedy, Strategy::Backtracking, Strategy::Variant2];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::Backtracking => "backtracking",
            Strategy::Variant2 => "variant2",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Strategy::Greedy),
            "backtracking" => Ok(Strategy::Backtracking),
            "variant2" | "ii" => Ok(Strategy::Variant2),
            other => Err(Error::InvalidParams(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AttackConfig {
    pub oracle: LengthOracle,
    pub caps: SearchCaps,
}

/// Where a failed attack stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureStage {
    /// The search gave up.
    Search(SearchFailure),
    /// The search claimed success but re-verification rejected it.
    Verification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    pub strategy: Strategy,
    pub z_prime: Option<BraidWord>,
    /// Recovered `Δ²` exponents, `w` side then `v` side.
    pub delta_powers: Vec<i64>,
    /// Independent re-verification of the claimed separation.
    pub separated: bool,
    /// The search reported success (whether or not it verified).
    pub claimed: bool,
    /// `z'` equals the witness `z` or `z^{-1}`; false without a witness.
    pub exact_z_match: bool,
    /// Recovered powers that differ from the hidden ones, if known.
    pub delta_errors: Option<usize>,
    pub iterations: usize,
    pub backtrack_pops: usize,
    pub wall_time: Duration,
    pub failure: Option<FailureStage>,
    pub initial_total: usize,
    pub trace: Vec<TraceStep>,
}

impl AttackOutcome {
    pub fn success(&self) -> bool {
        self.separated
    }

    /// Claimed a separating conjugator that did not survive re-verification.
    pub fn unsound(&self) -> bool {
        self.claimed && !self.separated
    }

    pub fn to_row(&self, instance_id: &str) -> AttackRow {
        AttackRow {
            instance_id: instance_id.to_string(),
            strategy: self.strategy,
            success: self.success(),
            separated: self.separated,
            exact_z: self.exact_z_match,
            z_prime_len: self.z_prime.as_ref().map(BraidWord::len),
            delta_errors: self.delta_errors,
            iterations: self.iterations,
            backtracks: self.backtrack_pops,
            wall_ms: self.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// One CSV row per attack run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackRow {
    pub instance_id: String,
    pub strategy: Strategy,
    pub success: bool,
    pub separated: bool,
    pub exact_z: bool,
    pub z_prime_len: Option<usize>,
    pub delta_errors: Option<usize>,
    pub iterations: usize,
    pub backtracks: usize,
    pub wall_ms: f64,
}

/// Checks a claimed separating conjugator from scratch: the claimed tuples
/// must have separated supports, and each must equal
/// `z'·Δ^{-2k_i}·u_i·z'^{-1}` for the published `u_i` as a braid.
pub fn verify_separation(
    published: (&[BraidWord], &[BraidWord]),
    delta_powers: &[i64],
    z_prime: &BraidWord,
    claimed: (&[BraidWord], &[BraidWord]),
) -> bool {
    let (pa, pb) = published;
    let (ca, cb) = claimed;
    if pa.len() != ca.len() || pb.len() != cb.len() || delta_powers.len() != pa.len() + pb.len() {
        return false;
    }
    if !masks_separated(tuple_mask(ca), tuple_mask(cb)) {
        return false;
    }
    let pairs = pa.iter().chain(pb).zip(ca.iter().chain(cb));
    pairs.zip(delta_powers).all(|((u, c), &k)| {
        let lhs = u.conjugate(z_prime).normal_form().shift_delta(-2 * k);
        lhs == c.normal_form()
    })
}

/// Runs the whole attack on the published part of an instance. Uses the
/// witness, when present, only for the `exact_z_match` and `delta_errors`
/// diagnostics.
pub fn full_attack(inst: &TtpInstance, strategy: Strategy, cfg: &AttackConfig) -> AttackOutcome {
    let clock = Stopwatch::start();
    let recovered: Vec<(BraidWord, i64)> = inst
        .w_pub
        .iter()
        .chain(&inst.v_pub)
        .map(|u| recover_delta_power(&cfg.oracle, u))
        .collect();
    let delta_powers: Vec<i64> = recovered.iter().map(|(_, k)| *k).collect();
    let (a, b): (Vec<BraidWord>, Vec<BraidWord>) = {
        let words: Vec<BraidWord> = recovered.into_iter().map(|(u, _)| u).collect();
        let split = inst.w_pub.len();
        (words[..split].to_vec(), words[split..].to_vec())
    };

    let res = match strategy {
        Strategy::Greedy => recover_conjugator_greedy(&cfg.oracle, &a, &b, cfg.caps),
        Strategy::Backtracking => recover_conjugator_backtracking(&cfg.oracle, &a, &b, cfg.caps),
        Strategy::Variant2 => recover_conjugator_ii(&cfg.oracle, &a, &b, cfg.caps),
    };

    let claimed = res.z_prime.is_some();
    let separated = match (&res.z_prime, &res.conjugated) {
        (Some(z), Some((ca, cb))) => verify_separation((&inst.w_pub, &inst.v_pub), &delta_powers, z, (ca, cb)),
        _ => false,
    };
    let wall_time = clock.elapsed();

    let (exact_z_match, delta_errors) = match &inst.secret {
        Some(s) => {
            let exact = res.z_prime.as_ref().is_some_and(|zp| {
                let nf = zp.normal_form();
                nf == s.z.normal_form() || nf == s.z.invert().normal_form()
            });
            let (hw, hv) = inst.hidden_delta_powers().expect("secret present");
            let errors = hw.iter().chain(&hv).zip(&delta_powers).filter(|(h, k)| h != k).count();
            (exact, Some(errors))
        }
        None => (false, None),
    };

    let failure = match (res.failure, claimed && !separated) {
        (Some(f), _) => Some(FailureStage::Search(f)),
        (None, true) => Some(FailureStage::Verification),
        (None, false) => None,
    };

    AttackOutcome {
        strategy,
        z_prime: res.z_prime,
        delta_powers,
        separated,
        claimed,
        exact_z_match,
        delta_errors,
        iterations: res.iterations,
        backtrack_pops: res.backtrack_pops,
        wall_time,
        failure,
        initial_total: res.initial_total,
        trace: res.trace,
    }
}
