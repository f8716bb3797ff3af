use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::json;

use cbkap::attack::{full_attack, AttackConfig, AttackRow, Strategy};
use cbkap::experiment::{
    aggregate, instance_id, run_trial, trial_instance, trial_rng, write_report, ExperimentConfig, TrialRecord,
};
use cbkap::length::LengthOracle;
use cbkap::protocol::{ttp_generate, KeyMaterial, KeyParams, Platform, Side, TtpInstance, TtpParams};

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<TtpInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    TtpInstance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn ttp_gen(params: &TtpParams, seed: u64, keep_witness: bool, out: Option<&Path>) -> Result<()> {
    let mut rng = trial_rng(seed, 0);
    let mut inst = ttp_generate(params, &mut rng)?;
    if keep_witness {
        let platform = Platform::for_instance(&inst, &mut rng)?;
        if let Some(s) = inst.secret.as_mut() {
            s.taus = Some(platform.ep.taus().to_vec());
        }
    } else {
        inst = inst.public_only();
    }
    emit(&(inst.to_json()? + "\n"), out)
}

pub fn protocol_run(
    path: &Path,
    seed: u64,
    trials: usize,
    private_len: usize,
    tamper: bool,
    out: Option<&Path>,
) -> Result<()> {
    let inst = load_instance(path)?;
    if !inst.split_is_valid() {
        eprintln!("warning: BL and BR are not at index distance two; keys will generally differ");
    }
    let params = KeyParams { word_len: private_len, ..KeyParams::default() };
    let mut matches = 0;
    let mut millis = Vec::with_capacity(trials);
    for i in 0..trials as u64 {
        let mut rng = trial_rng(seed, i);
        let platform = Platform::for_instance(&inst, &mut rng)?;
        let start = Instant::now();
        let alice = KeyMaterial::generate(Side::A, &platform, inst.gamma(), params, &mut rng);
        let bob = KeyMaterial::generate(Side::B, &platform, inst.gamma(), params, &mut rng);
        let mut alice_pub = alice.public_key(&inst, &platform)?;
        let bob_pub = bob.public_key(&inst, &platform)?;
        if tamper {
            let v = alice_pub.m.get(0, 0);
            alice_pub.m.set(0, 0, v + 1);
        }
        let ka = alice.shared_key(&bob_pub, &inst, &platform)?;
        let kb = bob.shared_key(&alice_pub, &inst, &platform)?;
        millis.push(start.elapsed().as_secs_f64() * 1e3);
        if ka == kb {
            matches += 1;
        }
    }
    let record = json!({
        "instance": path.display().to_string(),
        "trials": trials,
        "matches": matches,
        "keys_match": matches == trials,
        "tampered": tamper,
        "mean_ms": millis.iter().sum::<f64>() / trials.max(1) as f64,
    });
    emit(&(serde_json::to_string_pretty(&record)? + "\n"), out)
}

fn write_rows(rows: &[AttackRow], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let fresh = !path.exists() || fs::metadata(path)?.len() == 0;
            let file = OpenOptions::new().create(true).append(true).open(path)?;
            let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        None => {
            let mut w = csv::Writer::from_writer(io::stdout());
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn attack(path: &Path, strategies: &[Strategy], cfg: &AttackConfig, out: Option<&Path>, trace: bool) -> Result<()> {
    let inst = load_instance(path)?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut rows = Vec::new();
    for &s in strategies {
        let outcome = full_attack(&inst, s, cfg);
        if trace {
            eprintln!("{s}: start total {}", outcome.initial_total);
            for step in &outcome.trace {
                eprintln!("{s}:   {:>4} -> {}", step.letter, step.total);
            }
            if let Some(z) = &outcome.z_prime {
                eprintln!("{s}: z' = {z}");
            }
            if let Some(f) = outcome.failure {
                eprintln!("{s}: failed: {f:?}");
            }
        }
        if outcome.unsound() {
            eprintln!("{s}: claimed separation did not survive verification");
        }
        rows.push(outcome.to_row(&id));
    }
    write_rows(&rows, out)
}

pub fn experiment(config: &ExperimentConfig, jobs: usize, keep_witness: bool, out: &Path) -> Result<()> {
    config.validate()?;
    fs::create_dir_all(out)?;
    if keep_witness {
        let dir = out.join("instances");
        fs::create_dir_all(&dir)?;
        for i in 0..config.trials as u64 {
            let inst = trial_instance(&config.params, config.seed, i)?;
            fs::write(dir.join(format!("{}.json", instance_id(config.seed, i))), inst.to_json()? + "\n")?;
        }
    }

    // Rows are appended to trials.csv as trials finish so that an interrupted
    // run keeps its partial results; the file is rewritten in trial order at
    // the end.
    let csv_path = out.join("trials.csv");
    if csv_path.exists() {
        fs::remove_file(&csv_path)?;
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let (tx, rx) = mpsc::channel::<TrialRecord>();
    let collector_path = csv_path.clone();
    let total = config.trials;
    let collector = std::thread::spawn(move || -> Result<Vec<TrialRecord>> {
        let mut records = Vec::with_capacity(total);
        for rec in rx {
            write_rows(&rec.rows(), Some(&collector_path))?;
            eprintln!(
                "[{}/{}] {} {}",
                records.len() + 1,
                total,
                rec.instance_id,
                rec.outcomes
                    .iter()
                    .map(|o| format!("{}={}", o.strategy, if o.success() { "ok" } else { "fail" }))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            records.push(rec);
        }
        Ok(records)
    });
    let results: Vec<Result<()>> = pool.install(|| {
        (0..config.trials as u64)
            .into_par_iter()
            .map_with(tx, |tx, i| {
                let rec = run_trial(config, i)?;
                tx.send(rec).ok();
                Ok(())
            })
            .collect()
    });
    let mut records = collector.join().expect("collector thread")?;
    for r in results {
        r?;
    }
    records.sort_by_key(|r| r.index);
    let report = aggregate(config, &records);
    write_report(out, &report, &records)?;

    println!("{:<13} {:>9} {:>17} {:>9} {:>9} {:>10} {:>8}", "strategy", "success", "95% CI", "exact_z", "unsound", "mean_ms", "Δ errs");
    for s in &report.strategies {
        println!(
            "{:<13} {:>4}/{:<4} [{:.3}, {:.3}] {:>9} {:>9} {:>10.1} {:>8}",
            s.strategy.name(),
            s.successes,
            s.trials,
            s.success_ci95[0],
            s.success_ci95[1],
            s.exact_z,
            s.unsound,
            s.mean_wall_ms,
            s.delta_errors
        );
    }
    println!("wrote {} and {}", out.join("report.json").display(), csv_path.display());
    if report.strategies.iter().any(|s| s.unsound > 0) {
        bail!("unsound successes detected");
    }
    Ok(())
}

fn time_ms<T>(reps: usize, mut f: impl FnMut(usize) -> T) -> f64 {
    let start = Instant::now();
    for i in 0..reps {
        std::hint::black_box(f(i));
    }
    start.elapsed().as_secs_f64() * 1e3 / reps as f64
}

pub fn bench(params: &TtpParams, seed: u64, reps: usize, out: Option<&Path>) -> Result<()> {
    let reps = reps.max(1);
    let instances: Vec<TtpInstance> =
        (0..reps as u64).map(|i| trial_instance(params, seed, i)).collect::<cbkap::Result<_>>()?;
    let oracle = LengthOracle::default();
    let mut rng = trial_rng(seed, u64::MAX);
    let platform = Platform::for_instance(&instances[0], &mut rng)?;
    let key = KeyMaterial::generate(Side::A, &platform, instances[0].gamma(), KeyParams::default(), &mut rng);

    let mut timings = vec![
        ("ttp_generate", time_ms(reps, |i| trial_instance(params, seed, i as u64))),
        (
            "normal_form (published word)",
            time_ms(reps, |i| instances[i].w_pub[0].normal_form()),
        ),
        (
            "approx_length (published word)",
            time_ms(reps, |i| oracle.approx_length(&instances[i].w_pub[0])),
        ),
        ("public_key", time_ms(reps, |_| key.public_key(&instances[0], &platform))),
    ];
    let cfg = AttackConfig::default();
    for s in Strategy::ALL {
        let label: &'static str = match s {
            Strategy::Greedy => "attack greedy",
            Strategy::Backtracking => "attack backtracking",
            Strategy::Variant2 => "attack variant2",
        };
        timings.push((label, time_ms(reps, |i| full_attack(&instances[i], s, &cfg))));
    }

    let mut stdout = io::stdout().lock();
    writeln!(stdout, "n={} p={} gamma={} |z|={} reps={}", params.n, params.p, params.gamma, params.z_len, reps)?;
    for (name, ms) in &timings {
        writeln!(stdout, "{name:<32} {ms:>10.3} ms")?;
    }
    if let Some(path) = out {
        let obj: serde_json::Map<String, serde_json::Value> =
            timings.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        fs::write(path, serde_json::to_string_pretty(&obj)? + "\n")?;
    }
    Ok(())
}
