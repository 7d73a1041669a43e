use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Overrides;

#[derive(Debug, Parser)]
#[command(name = "apcascade", version, about = "Affective-polarization cascade model toolkit")]
pub struct Cli {
    /// Worker threads for parallel sweeps and ensembles (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the agent engine and write the trajectory.
    Simulate(SimulateArgs),
    /// Integrate the mean-field dynamics and write the trajectory.
    Integrate(IntegrateArgs),
    /// Print the regime and predicted symmetric limits as JSON.
    Classify(ClassifyArgs),
    /// Decide whether a group-dependent start reaches consensus.
    ConsensusCheck(ConsensusArgs),
    /// Phase-diagram sweep or homophily scan.
    Sweep(SweepArgs),
    /// Sup-distance between two trajectory CSV files.
    Compare(CompareArgs),
    /// Run a named scenario.
    Scenario(ScenarioArgs),
    /// Generate a network and write edge and party files.
    GenGraph(GenGraphArgs),
    /// Summarise a network read from edge and party files.
    InspectGraph(InspectGraphArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TopologyArg {
    FullyConnected,
    StochasticBlock,
}

impl TopologyArg {
    fn key(self) -> &'static str {
        match self {
            TopologyArg::FullyConnected => "fully_connected",
            TopologyArg::StochasticBlock => "stochastic_block",
        }
    }
}

#[derive(Debug, Clone, Args, Default)]
pub struct ParamArgs {
    /// In-group love, in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Out-group hate, in [0, 1].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Inertia threshold, in [0, 1].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Fraction of red nodes, in (0, 1).
    #[arg(long = "r", visible_alias = "red-fraction")]
    pub red_fraction: Option<f64>,
    /// Homophily, in (0, 1). Implies the stochastic block topology unless
    /// `--topology` says otherwise.
    #[arg(long = "rho", visible_alias = "homophily")]
    pub homophily: Option<f64>,
    #[arg(long, value_enum)]
    pub topology: Option<TopologyArg>,
}

fn join(prefix: &[&'static str], key: &'static str) -> Vec<&'static str> {
    let mut v = prefix.to_vec();
    v.push(key);
    v
}

impl ParamArgs {
    pub fn apply(&self, o: &mut Overrides, prefix: &[&'static str]) {
        o.set_opt(&join(prefix, "alpha"), self.alpha);
        o.set_opt(&join(prefix, "beta"), self.beta);
        o.set_opt(&join(prefix, "delta"), self.delta);
        o.set_opt(&join(prefix, "red_fraction"), self.red_fraction);
        o.set_opt(&join(prefix, "homophily"), self.homophily);
        let topology = self
            .topology
            .or(self.homophily.map(|_| TopologyArg::StochasticBlock));
        o.set_opt(&join(prefix, "topology"), topology.map(TopologyArg::key));
    }
}

pub fn apply_theta0(o: &mut Overrides, prefix: &[&'static str], theta0: &Option<Vec<f64>>) {
    if let Some(v) = theta0 {
        let (b, r) = if v.len() == 1 { (v[0], v[0]) } else { (v[0], v[1]) };
        o.set(&join(prefix, "theta_b"), b);
        o.set(&join(prefix, "theta_r"), r);
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Initial fractions holding choice 1: blue then red (one value sets both).
    #[arg(long, num_args = 1..=2, value_names = ["B", "R"])]
    pub theta0: Option<Vec<f64>>,
    /// Number of nodes for a generated network.
    #[arg(long = "n")]
    pub n_nodes: Option<usize>,
    /// Edge file of a network to load instead of generating one.
    #[arg(long, requires = "parties")]
    pub edges: Option<PathBuf>,
    /// Party file matching `--edges`.
    #[arg(long, requires = "edges")]
    pub parties: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Steps between recorded samples (default N / 100).
    #[arg(long)]
    pub stride: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent replicas; two or more also write a mean/std envelope.
    #[arg(long)]
    pub replicas: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitArg {
    Quota,
    Bernoulli,
}

impl InitArg {
    pub fn key(self) -> &'static str {
        match self {
            InitArg::Quota => "quota",
            InitArg::Bernoulli => "bernoulli",
        }
    }
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, num_args = 1..=2, value_names = ["B", "R"])]
    pub theta0: Option<Vec<f64>>,
    /// Euler step.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Keep every k-th grid point in the CSV.
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Also probe the stability of the terminal point.
    #[arg(long)]
    pub probe: bool,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Symmetric initial fraction for the predicted limit (two equal values accepted).
    #[arg(long, num_args = 1..=2)]
    pub theta0: Option<Vec<f64>>,
    /// Relative tolerance for reporting a boundary.
    #[arg(long, default_value_t = apcascade::model::DEFAULT_REGIME_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ConsensusArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, num_args = 2, value_names = ["B", "R"], required = true)]
    pub theta0: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Axis as `param:min:max:steps`; up to two. Parameters: alpha, beta,
    /// delta, red_fraction, homophily, theta0_b, theta0_r, love_hate_ratio, red_odds.
    #[arg(long = "axis", value_name = "SPEC")]
    pub axes: Vec<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, num_args = 1..=2, value_names = ["B", "R"])]
    pub theta0: Option<Vec<f64>>,
    /// Homophily values for a scan (comma separated). Replaces the grid.
    #[arg(long, value_delimiter = ',')]
    pub rho_values: Option<Vec<f64>>,
    /// Nodes per cell in simulate mode.
    #[arg(long = "n")]
    pub n_nodes: Option<usize>,
    /// Time horizon for simulate and integrate modes.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Classify,
    IntegrateEndpoint,
    SimulateEndpoint,
}

impl ModeArg {
    pub fn key(self) -> &'static str {
        match self {
            ModeArg::Classify => "classify",
            ModeArg::IntegrateEndpoint => "integrate_endpoint",
            ModeArg::SimulateEndpoint => "simulate_endpoint",
        }
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario name; see `--list`.
    pub name: Option<String>,
    /// Print the available scenario names.
    #[arg(long)]
    pub list: bool,
    #[arg(long = "n")]
    pub n_nodes: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip the agent-engine runs.
    #[arg(long)]
    pub mean_field_only: bool,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GraphKind {
    Complete,
    Sbm,
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    #[arg(long, value_enum)]
    pub kind: Option<GraphKind>,
    #[arg(long)]
    pub n_blue: Option<usize>,
    #[arg(long)]
    pub n_red: Option<usize>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectGraphArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub parties: PathBuf,
}
