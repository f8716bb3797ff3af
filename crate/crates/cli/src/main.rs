//! `cbkap`: generate TTP instances, run the key agreement, attack instances
//! and drive batch experiments.

mod commands;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cbkap::attack::Strategy;
use cbkap::protocol::{SplitMode, TtpParams};

#[derive(Parser, Debug)]
#[command(name = "cbkap", version, about = "Colored Burau key agreement and the length-based TTP attack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a TTP instance and write it as JSON.
    TtpGen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the secret block (z, w, v, taus).
        #[arg(long)]
        keep_witness: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run Alice and Bob against an instance and compare shared keys.
    ProtocolRun {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of independent key agreements.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Number of published words in each private word.
        #[arg(long, default_value_t = 10)]
        private_len: usize,
        /// Corrupt one entry of Alice's public key before Bob uses it.
        #[arg(long)]
        tamper: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Attack an instance file and emit one CSV row per strategy.
    Attack {
        instance: PathBuf,
        #[command(flatten)]
        attack: AttackArgs,
        /// Append rows to this CSV file (header written if new); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the descent trace to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Generate and attack many instances, writing report.json and trials.csv.
    Experiment {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        attack: AttackArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also write every generated instance, with its witness, under <out>/instances.
        #[arg(long)]
        keep_witness: bool,
        /// Output directory.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Time the main primitives on random data.
    Bench {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Repetitions per measurement.
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Write the timings as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Parameter set to start from.
    #[arg(long, default_value = "2", value_parser = ["1", "2"])]
    set: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long)]
    z_len: Option<usize>,
    #[arg(long)]
    word_len: Option<usize>,
    /// How BL and BR are chosen.
    #[arg(long, value_enum, default_value_t = SplitArg::Fixed)]
    split: SplitArg,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SplitArg {
    Fixed,
    Random,
}

impl ParamArgs {
    fn resolve(&self) -> Result<TtpParams> {
        let mut p = if self.set == "1" { TtpParams::set1() } else { TtpParams::set2() };
        if let Some(n) = self.n {
            p.n = n;
        }
        if let Some(x) = self.p {
            p.p = x;
        }
        if let Some(g) = self.gamma {
            p.gamma = g;
        }
        if let Some(z) = self.z_len {
            p.z_len = z;
        }
        if let Some(w) = self.word_len {
            p.word_len = w;
        }
        p.split = match self.split {
            SplitArg::Fixed => SplitMode::Fixed,
            SplitArg::Random => SplitMode::Random,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Debug, Clone)]
struct AttackArgs {
    /// greedy, backtracking or variant2; repeat or comma-separate for several.
    #[arg(long, value_delimiter = ',', default_values_t = vec![String::from("backtracking")])]
    strategy: Vec<String>,
    /// Backtracking expansion cap.
    #[arg(long, default_value_t = 10_000)]
    max_expansions: usize,
    /// Per-search wall-clock cap in seconds.
    #[arg(long, default_value_t = 300)]
    max_seconds: u64,
}

impl AttackArgs {
    fn strategies(&self) -> Result<Vec<Strategy>> {
        let mut out = Vec::new();
        for s in &self.strategy {
            let s: Strategy = s.parse()?;
            if !out.contains(&s) {
                out.push(s);
            }
        }
        if out.is_empty() {
            bail!("at least one strategy is required");
        }
        Ok(out)
    }

    fn config(&self) -> cbkap::attack::AttackConfig {
        let mut cfg = cbkap::attack::AttackConfig::default();
        cfg.caps.max_expansions = self.max_expansions;
        cfg.caps.max_time = std::time::Duration::from_secs(self.max_seconds);
        cfg
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::TtpGen { params, seed, keep_witness, out } => {
            commands::ttp_gen(&params.resolve()?, seed, keep_witness, out.as_deref())
        }
        Command::ProtocolRun { instance, seed, trials, private_len, tamper, out } => {
            commands::protocol_run(&instance, seed, trials, private_len, tamper, out.as_deref())
        }
        Command::Attack { instance, attack, out, trace } => {
            commands::attack(&instance, &attack.strategies()?, &attack.config(), out.as_deref(), trace)
        }
        Command::Experiment { params, attack, trials, seed, jobs, keep_witness, out } => {
            let mut config =
                cbkap::experiment::ExperimentConfig::new(params.resolve()?, trials, attack.strategies()?, seed);
            config.attack = attack.config();
            commands::experiment(&config, jobs, keep_witness, &out)
        }
        Command::Bench { params, seed, trials, out } => commands::bench(&params.resolve()?, seed, trials, out.as_deref()),
    }
}
