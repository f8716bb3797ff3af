//! Trial driver and on-disk reports.
//!
//! Every trial owns a ChaCha stream derived from `(seed, trial index)`, so
//! trials can run in any order or in parallel and still reproduce exactly.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::attack::{full_attack, AttackConfig, AttackOutcome, AttackRow, Strategy};
use crate::protocol::{ttp_generate, TtpInstance, TtpParams};
use crate::{Error, Result};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: TtpParams,
    pub trials: usize,
    pub strategies: Vec<Strategy>,
    pub seed: u64,
    pub attack: AttackConfig,
}

impl ExperimentConfig {
    pub fn new(params: TtpParams, trials: usize, strategies: Vec<Strategy>, seed: u64) -> Self {
        ExperimentConfig { params, trials, strategies, seed, attack: AttackConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidParams("at least one strategy is required".into()));
        }
        Ok(())
    }
}

/// The random stream for trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn instance_id(seed: u64, index: u64) -> String {
    format!("{seed:016x}-{index:05}")
}

/// Instance `index` of an experiment.
pub fn trial_instance(params: &TtpParams, seed: u64, index: u64) -> Result<TtpInstance> {
    ttp_generate(params, &mut trial_rng(seed, index))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: u64,
    pub instance_id: String,
    pub outcomes: Vec<AttackOutcome>,
}

impl TrialRecord {
    pub fn rows(&self) -> Vec<AttackRow> {
        self.outcomes.iter().map(|o| o.to_row(&self.instance_id)).collect()
    }
}

/// Generates instance `index` and attacks it with every configured strategy.
pub fn run_trial(config: &ExperimentConfig, index: u64) -> Result<TrialRecord> {
    let inst = trial_instance(&config.params, config.seed, index)?;
    let outcomes = config.strategies.iter().map(|&s| full_attack(&inst, s, &config.attack)).collect();
    Ok(TrialRecord { index, instance_id: instance_id(config.seed, index), outcomes })
}

/// Runs every trial in order on the current thread.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(ExperimentReport, Vec<TrialRecord>)> {
    config.validate()?;
    let records = (0..config.trials as u64).map(|i| run_trial(config, i)).collect::<Result<Vec<_>>>()?;
    Ok((aggregate(config, &records), records))
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> [f64; 2] {
    if trials == 0 {
        return [0.0, 1.0];
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    [(centre - half).max(0.0), (centre + half).min(1.0)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: Strategy,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub success_ci95: [f64; 2],
    pub exact_z: usize,
    pub exact_z_rate: f64,
    pub exact_z_ci95: [f64; 2],
    pub unsound: usize,
    pub delta_errors: usize,
    pub mean_wall_ms: f64,
    pub median_wall_ms: f64,
    pub mean_iterations: f64,
    pub total_backtracks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub params: TtpParams,
    pub trials: usize,
    pub seed: u64,
    pub strategies: Vec<StrategySummary>,
}

impl ExperimentReport {
    pub fn summary(&self, s: Strategy) -> Option<&StrategySummary> {
        self.strategies.iter().find(|x| x.strategy == s)
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

pub fn aggregate(config: &ExperimentConfig, records: &[TrialRecord]) -> ExperimentReport {
    let strategies = config
        .strategies
        .iter()
        .map(|&s| {
            let outs: Vec<&AttackOutcome> =
                records.iter().flat_map(|r| r.outcomes.iter().filter(move |o| o.strategy == s)).collect();
            let n = outs.len();
            let successes = outs.iter().filter(|o| o.success()).count();
            let exact_z = outs.iter().filter(|o| o.exact_z_match).count();
            let walls: Vec<f64> = outs.iter().map(|o| o.wall_time.as_secs_f64() * 1e3).collect();
            let rate = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
            StrategySummary {
                strategy: s,
                trials: n,
                successes,
                success_rate: rate(successes),
                success_ci95: wilson_interval(successes, n),
                exact_z,
                exact_z_rate: rate(exact_z),
                exact_z_ci95: wilson_interval(exact_z, n),
                unsound: outs.iter().filter(|o| o.unsound()).count(),
                delta_errors: outs.iter().filter_map(|o| o.delta_errors).sum(),
                mean_wall_ms: if n == 0 { 0.0 } else { walls.iter().sum::<f64>() / n as f64 },
                median_wall_ms: median(walls),
                mean_iterations: if n == 0 { 0.0 } else { outs.iter().map(|o| o.iterations).sum::<usize>() as f64 / n as f64 },
                total_backtracks: outs.iter().map(|o| o.backtrack_pops).sum(),
            }
        })
        .collect();
    ExperimentReport { schema: REPORT_SCHEMA, params: config.params, trials: records.len(), seed: config.seed, strategies }
}

/// Writes `report.json` and `trials.csv` into `dir`, creating it if needed.
pub fn write_report(dir: &Path, report: &ExperimentReport, records: &[TrialRecord]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;
    let mut out = csv::Writer::from_path(dir.join("trials.csv"))?;
    for r in records {
        for row in r.rows() {
            out.serialize(row)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads back a `trials.csv`.
pub fn read_rows(path: &Path) -> Result<Vec<AttackRow>> {
    let mut rd = csv::Reader::from_path(path)?;
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}
