//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs with `cargo test -p cbkap --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cbkap::attack::{full_attack, recover_delta_power, AttackConfig, AttackOutcome, Strategy};
use cbkap::braid::BraidWord;
use cbkap::burau::{phi, PrimeField, DEFAULT_TERM_CAP};
use cbkap::experiment::{trial_instance, trial_rng, wilson_interval};
use cbkap::length::{is_separated, tuple_length, GeodesicBall, LengthOracle};
use cbkap::protocol::{run_agreement, KeyParams, Platform, TtpInstance, TtpParams};

const SEED: u64 = 1;
const ATTACK_INSTANCES: u64 = 20;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, pass: bool, title: &str, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("[{}] {id}. {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn ci(successes: usize, trials: usize) -> String {
    let [lo, hi] = wilson_interval(successes, trials);
    format!("{successes}/{trials} (95% CI {lo:.2}-{hi:.2})")
}

fn relators(n: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for i in 1..n as i8 {
        for j in i + 1..n as i8 {
            if j == i + 1 {
                out.push(vec![i, j, i, -j, -i, -j]);
            } else {
                out.push(vec![i, j, -i, -j]);
            }
        }
    }
    out
}

fn random_letters(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Vec<i8> {
    (0..len)
        .map(|_| {
            let i = rng.gen_range(1..n) as i8;
            if rng.gen() {
                i
            } else {
                -i
            }
        })
        .collect()
}

fn representation(r: &mut Report) {
    let start = Instant::now();
    let field = PrimeField::new(13).unwrap();
    let (mut total, mut ok) = (0, 0);
    for n in 3..=5 {
        for rel in relators(n) {
            total += 1;
            let w = BraidWord::new(n, rel).unwrap();
            if phi(&w, field, DEFAULT_TERM_CAP).is_ok_and(|e| e.is_identity()) {
                ok += 1;
            }
        }
    }
    let t = start.elapsed();
    r.line(
        1,
        ok == total && t < Duration::from_secs(60),
        "relators map to the identity under phi (n = 3, 4, 5)",
        format!("{ok}/{total} relators, {:.2} s", t.as_secs_f64()),
    );
}

fn protocol(r: &mut Report) {
    let start = Instant::now();
    let params = TtpParams::set2();
    let mut ok = 0;
    let runs = 100;
    for i in 0..runs {
        let mut rng = trial_rng(SEED, i);
        let inst = cbkap::protocol::ttp_generate(&params, &mut rng).unwrap();
        let platform = Platform::for_instance(&inst, &mut rng).unwrap();
        if run_agreement(&inst, &platform, KeyParams::default(), &mut rng).unwrap().keys_match() {
            ok += 1;
        }
    }
    let t = start.elapsed();
    r.line(
        2,
        ok == runs && t < Duration::from_secs(600),
        "shared keys agree at parameter set 2",
        format!("{ok}/{runs} runs, {:.1} s", t.as_secs_f64()),
    );
}

fn canonicity(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let per_n = 1000;
    let mut failures = 0;
    for n in 3..=8 {
        let rels = relators(n);
        for _ in 0..per_n {
            let len = rng.gen_range(0..25);
            let base = random_letters(&mut rng, n, len);
            let mut rel = rels[rng.gen_range(0..rels.len())].clone();
            if rng.gen() {
                rel = rel.iter().rev().map(|e| -e).collect();
            }
            // conjugate the relator by a short word, which keeps it trivial
            let clen = rng.gen_range(0..4);
            let c = random_letters(&mut rng, n, clen);
            let mut inserted: Vec<i8> = c.clone();
            inserted.extend(&rel);
            inserted.extend(c.iter().rev().map(|e| -e));
            let at = rng.gen_range(0..=base.len());
            let mut other = base[..at].to_vec();
            other.extend(&inserted);
            other.extend(&base[at..]);
            let a = BraidWord::new(n, base).unwrap();
            let b = BraidWord::new(n, other).unwrap();
            if a.normal_form() != b.normal_form() {
                failures += 1;
            }
        }
    }
    r.line(
        3,
        failures == 0,
        "normal forms agree across relator insertion (n = 3..8)",
        format!("{} pairs per n, {failures} failures", per_n),
    );
}

fn oracle_quality(r: &mut Report) {
    let oracle = LengthOracle::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut cases, mut exact, mut below) = (0, 0, 0);
    for n in [3, 4] {
        let ball = GeodesicBall::new(n, 6);
        let mut kept = 0;
        while kept < 300 {
            let len = rng.gen_range(1..=14);
            let w = BraidWord::new(n, random_letters(&mut rng, n, len)).unwrap();
            let Some(d) = ball.distance(&w) else { continue };
            kept += 1;
            let a = oracle.approx_length(&w).value;
            exact += usize::from(a == d);
            below += usize::from(a < d);
        }
        cases += kept;
    }
    let rate = exact as f64 / cases as f64;
    r.line(
        4,
        cases >= 500 && rate >= 0.95 && below == 0,
        "length oracle on B_3/B_4 words of geodesic length <= 6",
        format!("exact {exact}/{cases} ({:.1}%), {below} below the BFS value", 100.0 * rate),
    );
}

fn delta_recovery(r: &mut Report) {
    let oracle = LengthOracle::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, params) in [("set 1", TtpParams::set1()), ("set 2", TtpParams::set2())] {
        let mut perfect = 0;
        for i in 0..ATTACK_INSTANCES {
            let inst = trial_instance(&params, SEED, i).unwrap();
            let (hw, hv) = inst.hidden_delta_powers().unwrap();
            let hidden: Vec<i64> = hw.into_iter().chain(hv).collect();
            let all_ok = inst
                .w_pub
                .iter()
                .chain(&inst.v_pub)
                .zip(&hidden)
                .all(|(u, &k)| recover_delta_power(&oracle, u).1 == k);
            perfect += usize::from(all_ok);
        }
        pass &= perfect as u64 == ATTACK_INSTANCES;
        parts.push(format!("{name} {perfect}/{ATTACK_INSTANCES}"));
    }
    r.line(5, pass, "hidden Δ² powers recovered for all 54 words", parts.join(", "));
}

/// Re-checks a reported success from the published data alone: conjugate
/// each `Δ^{-2k}`-shifted published word by `z'` and test separation on the
/// mixed normal-form words, which stay inside any parabolic subgroup.
fn reverify(inst: &TtpInstance, out: &AttackOutcome, oracle: &LengthOracle) -> bool {
    let Some(z) = &out.z_prime else { return false };
    let fresh: Vec<BraidWord> = inst
        .w_pub
        .iter()
        .chain(&inst.v_pub)
        .zip(&out.delta_powers)
        .map(|(u, &k)| {
            let shifted = u.normal_form().shift_delta(-2 * k).word_of();
            shifted.conjugate(z).normal_form().mixed_word()
        })
        .collect();
    let (a, b) = fresh.split_at(inst.gamma());
    is_separated(oracle, a, b)
}

#[derive(Default)]
struct Tally {
    trials: usize,
    successes: usize,
    exact_z: usize,
    wall: Duration,
}

struct Audit {
    successes: usize,
    unsound: usize,
}

fn run_attacks(params: &TtpParams, strategies: &[Strategy], audit: &mut Audit) -> Vec<Tally> {
    let cfg = AttackConfig::default();
    let mut tallies: Vec<Tally> = strategies.iter().map(|_| Tally::default()).collect();
    for i in 0..ATTACK_INSTANCES {
        let inst = trial_instance(params, SEED, i).unwrap();
        let public = inst.public_only();
        for (s, t) in strategies.iter().zip(&mut tallies) {
            let out = full_attack(&inst, *s, &cfg);
            t.trials += 1;
            t.wall += out.wall_time;
            t.exact_z += usize::from(out.exact_z_match);
            if out.success() {
                t.successes += 1;
                audit.successes += 1;
                if out.unsound() || !reverify(&public, &out, &cfg.oracle) {
                    audit.unsound += 1;
                }
            }
        }
    }
    tallies
}

fn attack_success(r: &mut Report, audit: &mut Audit) {
    let strategies = [Strategy::Backtracking, Strategy::Greedy, Strategy::Variant2];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, params) in [("set 1", TtpParams::set1()), ("set 2", TtpParams::set2())] {
        let t = run_attacks(&params, &strategies, audit);
        let (bt, gr, v2) = (&t[0], &t[1], &t[2]);
        let mean_s = bt.wall.as_secs_f64() / bt.trials as f64;
        let ok = bt.successes * 10 >= bt.trials * 9
            && mean_s <= 60.0
            && gr.successes * 10 >= gr.trials * 7
            && v2.exact_z * 5 >= v2.trials;
        pass &= ok;
        parts.push(format!(
            "{name}: backtracking {} mean {mean_s:.2} s; greedy {}; variant II exact z {}",
            ci(bt.successes, bt.trials),
            ci(gr.successes, gr.trials),
            ci(v2.exact_z, v2.trials)
        ));
    }
    r.line(6, pass, "attack success at parameter sets 1 and 2", parts.join(" | "));
}

fn stress(r: &mut Report, audit: &mut Audit) {
    let params = TtpParams { z_len: 50, ..TtpParams::set2() };
    let t = run_attacks(&params, &[Strategy::Backtracking], audit);
    let bt = &t[0];
    r.line(
        7,
        bt.successes * 10 >= bt.trials * 8,
        "backtracking with |z| = 50 (parameter set 2)",
        format!("{}, mean {:.2} s", ci(bt.successes, bt.trials), bt.wall.as_secs_f64() / bt.trials as f64),
    );
}

fn length_growth(r: &mut Report) {
    let oracle = LengthOracle::default();
    let params = TtpParams::set1();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = params.n;
    let l = (n - 2) / 2;
    let bl: Vec<usize> = (1..=l).collect();
    let br: Vec<usize> = (l + 2..n).collect();
    let all: Vec<usize> = (1..n).collect();
    let trials = 1000;
    let mut grew = 0;
    for _ in 0..trials {
        let mut tuple = Vec::with_capacity(2 * params.gamma);
        for set in [&bl, &br] {
            for _ in 0..params.gamma {
                tuple.push(BraidWord::random_word(n, params.word_len, set, &mut rng).unwrap());
            }
        }
        let xl = rng.gen_range(1..=10);
        let x = BraidWord::random_word(n, xl, &all, &mut rng).unwrap();
        let conj: Vec<BraidWord> = tuple.iter().map(|w| w.conjugate(&x)).collect();
        grew += usize::from(tuple_length(&oracle, &conj) > tuple_length(&oracle, &tuple));
    }
    r.line(
        8,
        grew * 100 >= trials * 95,
        "conjugation by a random x (|x| <= 10) lengthens the tuple at n = 14",
        format!("{grew}/{trials} ({:.1}%)", 100.0 * grew as f64 / trials as f64),
    );
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut report = Report { failures: 0 };
    let mut audit = Audit { successes: 0, unsound: 0 };
    representation(&mut report);
    protocol(&mut report);
    canonicity(&mut report);
    oracle_quality(&mut report);
    delta_recovery(&mut report);
    attack_success(&mut report, &mut audit);
    stress(&mut report, &mut audit);
    length_growth(&mut report);
    report.line(
        9,
        audit.unsound == 0,
        "every reported success survives independent re-verification",
        format!("{} successes checked, {} unsound", audit.successes, audit.unsound),
    );
    println!("acceptance: {} failing criteria, {:.0} s", report.failures, start.elapsed().as_secs_f64());
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
