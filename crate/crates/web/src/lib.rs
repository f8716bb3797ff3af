//! Browser bindings for the demo page in `www/`. Every export returns a JSON
//! string; the plain `*_json` functions carry the logic so that they can be
//! tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cbkap::attack::{full_attack, AttackConfig, Strategy};
use cbkap::braid::BraidWord;
use cbkap::experiment::trial_rng;
use cbkap::length::{GeodesicBall, LengthOracle};
use cbkap::protocol::{ttp_generate, KeyMaterial, KeyParams, Platform, Side, SplitMode, TtpParams};

/// Largest group in which the exact BFS length is offered.
const BFS_STRANDS: usize = 4;
const BFS_RADIUS: usize = 6;

fn parse_word(n: usize, text: &str) -> Result<BraidWord, String> {
    let letters = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| format!("not an integer: {t}")))
        .collect::<Result<Vec<_>, _>>()?;
    BraidWord::from_ints(n, &letters).map_err(|e| e.to_string())
}

fn letters(w: &BraidWord) -> Value {
    json!(w.letters())
}

pub fn inspect_word_json(n: usize, text: &str) -> Result<String, String> {
    let w = parse_word(n, text)?;
    let nf = w.normal_form();
    let est = LengthOracle::default().approx_length(&w);
    let exact = (n <= BFS_STRANDS).then(|| GeodesicBall::new(n, BFS_RADIUS).distance(&w)).flatten();
    Ok(json!({
        "letters": letters(&w),
        "free_reduced": letters(&w.free_reduce()),
        "normal_form": nf.to_string(),
        "inf": nf.inf(),
        "sup": nf.sup(),
        "canonical_length": nf.canonical_length(),
        "mixed_word": letters(&nf.mixed_word()),
        "approx_length": est.value,
        "witness": letters(&est.witness),
        "exact_length": exact,
        "permutation": w.permutation().images(),
    })
    .to_string())
}

fn params(n: usize, gamma: usize, word_len: usize, z_len: usize) -> Result<TtpParams, String> {
    let p = TtpParams { n, p: 13, gamma, word_len, z_len, split: SplitMode::Fixed };
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

pub fn attack_json(
    n: usize,
    gamma: usize,
    word_len: usize,
    z_len: usize,
    seed: u32,
    strategy: &str,
    max_expansions: usize,
) -> Result<String, String> {
    let p = params(n, gamma, word_len, z_len)?;
    let strategy: Strategy = strategy.parse().map_err(|e: cbkap::Error| e.to_string())?;
    let inst = ttp_generate(&p, &mut trial_rng(seed as u64, 0)).map_err(|e| e.to_string())?;
    let mut cfg = AttackConfig::default();
    cfg.caps.max_expansions = max_expansions.max(1);
    let out = full_attack(&inst, strategy, &cfg);
    let secret = inst.secret.as_ref().expect("generated instances keep the witness");
    Ok(json!({
        "BL": inst.bl,
        "BR": inst.br,
        "w_pub": inst.w_pub.iter().map(letters).collect::<Vec<_>>(),
        "v_pub": inst.v_pub.iter().map(letters).collect::<Vec<_>>(),
        "z": letters(&secret.z),
        "strategy": strategy.name(),
        "success": out.success(),
        "exact_z": out.exact_z_match,
        "z_prime": out.z_prime.as_ref().map(letters),
        "delta_powers": out.delta_powers,
        "delta_errors": out.delta_errors,
        "initial_total": out.initial_total,
        "trace": out.trace.iter().map(|s| json!({"letter": s.letter, "total": s.total})).collect::<Vec<_>>(),
        "iterations": out.iterations,
        "backtracks": out.backtrack_pops,
        "failure": out.failure.map(|f| format!("{f:?}")),
    })
    .to_string())
}

pub fn key_agreement_json(n: usize, gamma: usize, z_len: usize, seed: u32, tamper: bool) -> Result<String, String> {
    let p = params(n, gamma, 10, z_len)?;
    let mut rng = trial_rng(seed as u64, 0);
    let inst = ttp_generate(&p, &mut rng).map_err(|e| e.to_string())?;
    let platform = Platform::for_instance(&inst, &mut rng).map_err(|e| e.to_string())?;
    let keys = KeyParams::default();
    let alice = KeyMaterial::generate(Side::A, &platform, gamma, keys, &mut rng);
    let bob = KeyMaterial::generate(Side::B, &platform, gamma, keys, &mut rng);
    let run = || -> cbkap::Result<Value> {
        let mut alice_pub = alice.public_key(&inst, &platform)?;
        let bob_pub = bob.public_key(&inst, &platform)?;
        if tamper {
            let v = alice_pub.m.get(0, 0);
            alice_pub.m.set(0, 0, v + 1);
        }
        let ka = alice.shared_key(&bob_pub, &inst, &platform)?;
        let kb = bob.shared_key(&alice_pub, &inst, &platform)?;
        Ok(json!({
            "taus": platform.ep.taus(),
            "alice_word": alice.word,
            "bob_word": bob.word,
            "alice_public": alice_pub.to_json(),
            "bob_public": bob_pub.to_json(),
            "alice_key": ka.to_json(),
            "bob_key": kb.to_json(),
            "keys_match": ka == kb,
        }))
    };
    run().map(|v| v.to_string()).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn inspect_word(n: usize, word: &str) -> Result<String, JsError> {
    inspect_word_json(n, word).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn attack(
    n: usize,
    gamma: usize,
    word_len: usize,
    z_len: usize,
    seed: u32,
    strategy: &str,
    max_expansions: usize,
) -> Result<String, JsError> {
    attack_json(n, gamma, word_len, z_len, seed, strategy, max_expansions).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn key_agreement(n: usize, gamma: usize, z_len: usize, seed: u32, tamper: bool) -> Result<String, JsError> {
    key_agreement_json(n, gamma, z_len, seed, tamper).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn inspect_reports_normal_form_and_lengths() {
        let v = parse(inspect_word_json(3, "1 2 1 -2").unwrap());
        assert_eq!(v["free_reduced"], json!([1, 2, 1, -2]));
        assert_eq!(v["approx_length"], 2);
        assert_eq!(v["exact_length"], 2);
        // σ_1σ_2σ_1σ_2^{-1} = σ_2σ_1
        assert_eq!(v["permutation"], json!([2, 3, 1]));
        assert!(inspect_word_json(3, "1 x").is_err());
        assert!(inspect_word_json(3, "3").is_err());
    }

    #[test]
    fn attack_demo_runs() {
        let v = parse(attack_json(8, 5, 6, 6, 3, "greedy", 500).unwrap());
        assert_eq!(v["strategy"], "greedy");
        assert_eq!(v["w_pub"].as_array().unwrap().len(), 5);
        assert_eq!(v["delta_errors"], 0);
        assert!(attack_json(8, 5, 6, 6, 3, "nope", 500).is_err());
        assert!(attack_json(3, 5, 6, 6, 3, "greedy", 500).is_err());
    }

    #[test]
    fn key_agreement_demo_matches_unless_tampered() {
        let v = parse(key_agreement_json(8, 5, 6, 1, false).unwrap());
        assert_eq!(v["keys_match"], true);
        let v = parse(key_agreement_json(8, 5, 6, 1, true).unwrap());
        assert_eq!(v["keys_match"], false);
    }
}
