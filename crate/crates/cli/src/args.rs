use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mgcorr::sweep::Experiment;
use mgcorr::Pairing;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "MGCORR_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "mgcorr", version, about = "Two-asset minority game with coupled expected returns")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one run and write its trajectory.
    Simulate(SimulateArgs),
    /// Mean return correlation over a parameter grid.
    Sweep(Box<SweepArgs>),
    /// Regress returns on expected returns.
    Regress(RegressArgs),
    /// Check the sign-case table against a brute-force sampler.
    VerifyAppendix(VerifyArgs),
    /// AR(1) coefficient of simulated or recorded returns.
    Ar1(Ar1Args),
}

/// Model parameters: a config file, then typed flags, then `--set`
/// assignments, each overriding the last.
#[derive(Debug, Args, Clone, Default)]
pub struct ModelArgs {
    /// Config file of `key = value` lines [default: $MGCORR_CONFIG].
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n_agents: Option<String>,
    #[arg(long)]
    pub memory: Option<String>,
    #[arg(long)]
    pub n_strategies: Option<String>,
    #[arg(long)]
    pub horizon: Option<String>,
    #[arg(long)]
    pub initial_price: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a1: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub b1: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta1: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta2: Option<String>,
    #[arg(long)]
    pub allow_hold: Option<String>,
    #[arg(long)]
    pub shared_strategies: Option<String>,
    #[arg(long)]
    pub event_probability: Option<String>,
    #[arg(long)]
    pub event_strength: Option<String>,
    /// Runs per configuration.
    #[arg(long)]
    pub runs: Option<String>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<String>,
    /// Extra `key=value` assignment; repeatable, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl ModelArgs {
    /// Typed flags as config assignments, in config-key order.
    pub fn flag_assignments(&self) -> Vec<(&'static str, String)> {
        let fields: [(&'static str, &Option<String>); 19] = [
            ("n_agents", &self.n_agents),
            ("memory", &self.memory),
            ("n_strategies", &self.n_strategies),
            ("horizon", &self.horizon),
            ("initial_price", &self.initial_price),
            ("a1", &self.a1),
            ("a2", &self.a2),
            ("b1", &self.b1),
            ("b2", &self.b2),
            ("c1", &self.c1),
            ("delta1", &self.delta1),
            ("c2", &self.c2),
            ("delta2", &self.delta2),
            ("allow_hold", &self.allow_hold),
            ("shared_strategies", &self.shared_strategies),
            ("event_probability", &self.event_probability),
            ("event_strength", &self.event_strength),
            ("n_runs", &self.runs),
            ("master_seed", &self.seed),
        ];
        fields
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v.clone())))
            .collect()
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Which run of the configuration to play.
    #[arg(long, default_value_t = 0)]
    pub run_index: usize,
    /// Trajectory CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Scatter CSV of (expected return, return) pairs for this run.
    #[arg(long)]
    pub scatter_out: Option<PathBuf>,
    #[arg(long, default_value_t = Pairing::Formed)]
    pub pairing: Pairing,
}

/// An axis given by optional start, stop and step overrides.
#[derive(Debug, Args, Clone, Default)]
pub struct AxisArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub b1_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b1_stop: Option<f64>,
    #[arg(long)]
    pub b1_step: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2_stop: Option<f64>,
    #[arg(long)]
    pub b2_step: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1_stop: Option<f64>,
    #[arg(long)]
    pub c1_step: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2_stop: Option<f64>,
    #[arg(long)]
    pub c2_step: Option<f64>,
    #[arg(long)]
    pub delta1_start: Option<f64>,
    #[arg(long)]
    pub delta1_stop: Option<f64>,
    #[arg(long)]
    pub delta1_step: Option<f64>,
    #[arg(long)]
    pub delta2_start: Option<f64>,
    #[arg(long)]
    pub delta2_stop: Option<f64>,
    #[arg(long)]
    pub delta2_step: Option<f64>,
}

impl AxisArgs {
    /// `(start, stop, step)` overrides for the named axis.
    pub fn overrides(&self, name: &str) -> (Option<f64>, Option<f64>, Option<f64>) {
        match name {
            "b1" => (self.b1_start, self.b1_stop, self.b1_step),
            "b2" => (self.b2_start, self.b2_stop, self.b2_step),
            "c1" => (self.c1_start, self.c1_stop, self.c1_step),
            "c2" => (self.c2_start, self.c2_stop, self.c2_step),
            "delta1" => (self.delta1_start, self.delta1_stop, self.delta1_step),
            "delta2" => (self.delta2_start, self.delta2_stop, self.delta2_step),
            _ => (None, None, None),
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub experiment: Experiment,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub axes: AxisArgs,
    /// Event strengths for the events experiment, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0, 2.0, 3.0, 4.0])]
    pub k_values: Vec<f64>,
    /// Grid CSV [default: stdout]. The events experiment writes one file
    /// per strength, named `<stem>.k<k>.<ext>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pooled scatter CSV over every run of every cell.
    #[arg(long)]
    pub scatter_out: Option<PathBuf>,
    #[arg(long, default_value_t = Pairing::Formed)]
    pub pairing: Pairing,
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    /// Trajectory CSV; repeatable, pooled.
    #[arg(long)]
    pub trajectory: Vec<PathBuf>,
    /// Scatter CSV; repeatable, pooled.
    #[arg(long)]
    pub scatter: Vec<PathBuf>,
    /// Pairing applied to trajectory input.
    #[arg(long, default_value_t = Pairing::Formed)]
    pub pairing: Pairing,
    /// Report CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Draws per coupling pair.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 2019)]
    pub seed: u64,
    /// Per-cell result CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Ar1Args {
    /// Trajectory CSV; repeatable. Without any, runs the configured model.
    #[arg(long)]
    pub trajectory: Vec<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
