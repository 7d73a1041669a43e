//! Discrete-time stochastic engine.
//!
//! At every step one node is drawn uniformly (with replacement) and applies
//! the threshold rule to the current choices of its neighbours. Time is
//! interpolated as `t = k / N`.
//!
//! Neighbour statistics are kept incrementally: complete graphs read them
//! off the group tallies, other graphs keep per-node counts of choice-1
//! neighbours in each group, updated whenever a neighbour flips. A query is
//! then `O(1)` and a flip costs `O(degree)`.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Network, Party};
use crate::model::{ModelParams, PopulationState};
use crate::seed;
use crate::trajectory::{Source, Trajectory, TrajectoryMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    Zero,
    One,
}

impl Choice {
    pub fn is_one(self) -> bool {
        self == Choice::One
    }

    pub fn flipped(self) -> Choice {
        match self {
            Choice::Zero => Choice::One,
            Choice::One => Choice::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    /// Exactly `round(theta * n_group)` nodes of each group hold choice 1.
    #[default]
    Quota,
    /// Each node holds choice 1 independently with its group's probability.
    Bernoulli,
}

/// Degree-normalised neighbour counts of a node, split by group and choice.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NeighborStats {
    pub d_in0: f64,
    pub d_in1: f64,
    pub d_out0: f64,
    pub d_out1: f64,
}

impl NeighborStats {
    fn from_counts(deg_in: u32, ones_in: u32, deg_out: u32, ones_out: u32) -> Self {
        let deg = deg_in + deg_out;
        if deg == 0 {
            return NeighborStats::default();
        }
        let d = deg as f64;
        NeighborStats {
            d_in0: (deg_in - ones_in) as f64 / d,
            d_in1: ones_in as f64 / d,
            d_out0: (deg_out - ones_out) as f64 / d,
            d_out1: ones_out as f64 / d,
        }
    }

    /// Net social signal `alpha (d_in1 - d_in0) - beta (d_out1 - d_out0)`.
    pub fn signal(&self, alpha: f64, beta: f64) -> f64 {
        alpha * (self.d_in1 - self.d_in0) - beta * (self.d_out1 - self.d_out0)
    }
}

/// The threshold rule. Uses the raw couplings: topology acts through which
/// neighbours exist, not through rescaled parameters.
pub fn apply_update_rule(stats: &NeighborStats, params: &ModelParams, current: Choice) -> Choice {
    let s = stats.signal(params.alpha(), params.beta());
    if s < -params.delta() {
        Choice::Zero
    } else if s > params.delta() {
        Choice::One
    } else {
        current
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct LocalCounts {
    deg_in: u32,
    deg_out: u32,
    ones_in: u32,
    ones_out: u32,
}

/// One running chain. Confined to a single worker; the network is shared.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    net: &'a Network,
    params: ModelParams,
    choices: Vec<Choice>,
    /// Choice-1 tallies indexed by `Party::index`.
    ones: [usize; 2],
    local: Option<Vec<LocalCounts>>,
    clock: u64,
    seed: u64,
    rng: ChaCha8Rng,
}

/// Full recounts after every step are affordable below this size; larger
/// chains are rechecked once per unit of time.
const FULL_CHECK_LIMIT: usize = 1024;

impl<'a> Simulation<'a> {
    /// Initialises choices from `theta0` and seeds the chain. Initialisation
    /// draws come from the same stream as the dynamics.
    pub fn new(
        net: &'a Network,
        params: ModelParams,
        theta0: PopulationState,
        mode: InitMode,
        seed: u64,
    ) -> Self {
        let mut rng = seed::rng(seed);
        let mut choices = vec![Choice::Zero; net.len()];
        for party in [Party::Blue, Party::Red] {
            let members: Vec<usize> = (0..net.len()).filter(|&v| net.party(v) == party).collect();
            let theta = match party {
                Party::Blue => theta0.theta_b,
                Party::Red => theta0.theta_r,
            };
            match mode {
                InitMode::Quota => {
                    let k = ((theta * members.len() as f64) + 0.5).floor() as usize;
                    let k = k.min(members.len());
                    for i in index::sample(&mut rng, members.len(), k).into_iter() {
                        choices[members[i]] = Choice::One;
                    }
                }
                InitMode::Bernoulli => {
                    for &v in &members {
                        if rng.gen_bool(theta) {
                            choices[v] = Choice::One;
                        }
                    }
                }
            }
        }
        Self::from_choices_with_rng(net, params, choices, seed, rng)
    }

    /// Starts from explicit per-node choices.
    pub fn from_choices(net: &'a Network, params: ModelParams, choices: Vec<Choice>, seed: u64) -> Self {
        Self::from_choices_with_rng(net, params, choices, seed, seed::rng(seed))
    }

    fn from_choices_with_rng(
        net: &'a Network,
        params: ModelParams,
        choices: Vec<Choice>,
        seed: u64,
        rng: ChaCha8Rng,
    ) -> Self {
        assert_eq!(choices.len(), net.len(), "one choice per node");
        let mut ones = [0usize; 2];
        for (v, c) in choices.iter().enumerate() {
            if c.is_one() {
                ones[net.party(v).index()] += 1;
            }
        }
        let local = (!net.is_complete()).then(|| {
            (0..net.len())
                .map(|v| {
                    let mut lc = LocalCounts::default();
                    for u in net.neighbors(v) {
                        let same = net.party(u) == net.party(v);
                        let one = choices[u].is_one() as u32;
                        if same {
                            lc.deg_in += 1;
                            lc.ones_in += one;
                        } else {
                            lc.deg_out += 1;
                            lc.ones_out += one;
                        }
                    }
                    lc
                })
                .collect()
        });
        Simulation {
            net,
            params,
            choices,
            ones,
            local,
            clock: 0,
            seed,
            rng,
        }
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn choices(&self) -> &[Choice] {
        &self.choices
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn time(&self) -> f64 {
        self.clock as f64 / self.net.len() as f64
    }

    pub fn ones(&self, party: Party) -> usize {
        self.ones[party.index()]
    }

    pub fn state(&self) -> PopulationState {
        let frac = |p: Party| {
            let n = self.net.group_size(p);
            if n == 0 {
                0.0
            } else {
                self.ones(p) as f64 / n as f64
            }
        };
        PopulationState::new(frac(Party::Blue), frac(Party::Red))
    }

    pub fn neighbor_stats(&self, v: usize) -> NeighborStats {
        match &self.local {
            Some(local) => {
                let lc = local[v];
                NeighborStats::from_counts(lc.deg_in, lc.ones_in, lc.deg_out, lc.ones_out)
            }
            None => {
                let own = self.net.party(v);
                let deg_in = self.net.group_size(own) - 1;
                let ones_in = self.ones[own.index()] - self.choices[v].is_one() as usize;
                let deg_out = self.net.group_size(own.other());
                let ones_out = self.ones[own.other().index()];
                NeighborStats::from_counts(deg_in as u32, ones_in as u32, deg_out as u32, ones_out as u32)
            }
        }
    }

    /// Choice node `v` would adopt if it were drawn now.
    pub fn proposed_choice(&self, v: usize) -> Choice {
        apply_update_rule(&self.neighbor_stats(v), &self.params, self.choices[v])
    }

    fn set_choice(&mut self, v: usize, c: Choice) {
        let own = self.net.party(v);
        if c.is_one() {
            self.ones[own.index()] += 1;
        } else {
            self.ones[own.index()] -= 1;
        }
        self.choices[v] = c;
        if let Some(local) = self.local.as_mut() {
            for u in self.net.neighbors(v) {
                let lc = &mut local[u];
                let slot = if self.net.party(u) == own {
                    &mut lc.ones_in
                } else {
                    &mut lc.ones_out
                };
                if c.is_one() {
                    *slot += 1;
                } else {
                    *slot -= 1;
                }
            }
        }
    }

    /// One asynchronous update. Returns whether the drawn node changed choice.
    pub fn step(&mut self) -> bool {
        let v = self.rng.gen_range(0..self.net.len());
        let next = self.proposed_choice(v);
        let changed = next != self.choices[v];
        if changed {
            self.set_choice(v, next);
        }
        self.clock += 1;
        if cfg!(debug_assertions)
            && (self.net.len() <= FULL_CHECK_LIMIT || self.clock.is_multiple_of(self.net.len() as u64))
        {
            assert!(self.tallies_consistent(), "cached tallies drifted at step {}", self.clock);
        }
        changed
    }

    /// Recounts tallies and local counts from scratch and compares with the cache.
    pub fn tallies_consistent(&self) -> bool {
        let mut ones = [0usize; 2];
        for (v, c) in self.choices.iter().enumerate() {
            if c.is_one() {
                ones[self.net.party(v).index()] += 1;
            }
        }
        if ones != self.ones {
            return false;
        }
        match &self.local {
            None => true,
            Some(local) => (0..self.net.len()).all(|v| {
                let (mut i, mut o) = (0, 0);
                for u in self.net.neighbors(v) {
                    if self.choices[u].is_one() {
                        if self.net.party(u) == self.net.party(v) {
                            i += 1;
                        } else {
                            o += 1;
                        }
                    }
                }
                local[v].ones_in == i && local[v].ones_out == o
            }),
        }
    }

    fn meta(&self, record_stride: u64) -> TrajectoryMeta {
        TrajectoryMeta {
            source: Source::Agent,
            params: Some(self.params),
            seed: Some(self.seed),
            n_nodes: Some(self.net.len()),
            record_stride: Some(record_stride),
            step_h: None,
        }
    }

    /// Runs `ceil(horizon_t * N)` steps, recording the state every
    /// `record_stride` steps plus the initial and final states.
    pub fn run(&mut self, horizon_t: f64, record_stride: u64) -> Trajectory {
        let n = self.net.len() as u64;
        let stride = record_stride.max(1);
        let steps = steps_for_horizon(horizon_t, self.net.len());
        let mut traj = Trajectory::new(self.meta(stride));
        traj.push(self.time(), self.state());
        let end = self.clock + steps;
        while self.clock < end {
            self.step();
            if self.clock.is_multiple_of(stride) || self.clock == end {
                traj.push(self.clock as f64 / n as f64, self.state());
            }
        }
        traj
    }

    /// Runs `ceil(horizon_t * N)` steps without recording and returns the final state.
    pub fn advance(&mut self, horizon_t: f64) -> PopulationState {
        for _ in 0..steps_for_horizon(horizon_t, self.net.len()) {
            self.step();
        }
        self.state()
    }

    /// Monte Carlo estimate of the one-step mean change of the state from the
    /// current (frozen) configuration. Each replicate draws a node and
    /// evaluates its update without applying it.
    pub fn expected_step(&mut self, reps: usize) -> ExpectedStep {
        let nb = self.net.n_blue().max(1) as f64;
        let nr = self.net.n_red().max(1) as f64;
        let mut sum = [0.0f64; 2];
        let mut sum_sq = [0.0f64; 2];
        for _ in 0..reps {
            let v = self.rng.gen_range(0..self.net.len());
            let cur = self.choices[v];
            let next = self.proposed_choice(v);
            if next != cur {
                let sign = if next.is_one() { 1.0 } else { -1.0 };
                let (i, size) = match self.net.party(v) {
                    Party::Blue => (0, nb),
                    Party::Red => (1, nr),
                };
                let delta = sign / size;
                sum[i] += delta;
                sum_sq[i] += delta * delta;
            }
        }
        let n = reps as f64;
        let mut mean = [0.0; 2];
        let mut std_err = [0.0; 2];
        for i in 0..2 {
            mean[i] = sum[i] / n;
            let var = (sum_sq[i] / n - mean[i] * mean[i]).max(0.0) * n / (n - 1.0).max(1.0);
            std_err[i] = (var / n).sqrt();
        }
        ExpectedStep { mean, std_err, reps }
    }

    /// Exact expected one-step change, by enumerating every node's proposal.
    pub fn exact_expected_step(&self) -> [f64; 2] {
        let mut net_flips = [0i64; 2];
        for v in 0..self.net.len() {
            let cur = self.choices[v];
            let next = self.proposed_choice(v);
            if next != cur {
                net_flips[self.net.party(v).index()] += if next.is_one() { 1 } else { -1 };
            }
        }
        let n = self.net.len() as f64;
        let per = |i: usize, size: usize| {
            if size == 0 {
                0.0
            } else {
                net_flips[i] as f64 / (size as f64 * n)
            }
        };
        [per(0, self.net.n_blue()), per(1, self.net.n_red())]
    }
}

/// Number of steps covering `horizon_t` units of interpolated time on `n` nodes.
pub fn steps_for_horizon(horizon_t: f64, n: usize) -> u64 {
    let x = horizon_t * n as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedStep {
    pub mean: [f64; 2],
    pub std_err: [f64; 2],
    pub reps: usize,
}

/// Settings shared by all replicas of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub params: ModelParams,
    pub theta0: PopulationState,
    #[serde(default)]
    pub init_mode: InitMode,
    pub horizon_t: f64,
    pub record_stride: u64,
}

/// Pointwise mean and standard deviation over replicas on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub t: Vec<f64>,
    pub mean: Vec<[f64; 2]>,
    pub std: Vec<[f64; 2]>,
    pub seeds: Vec<u64>,
    pub endpoints: Vec<PopulationState>,
}

impl Envelope {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("t,mean_b,mean_r,std_b,std_r\n");
        for i in 0..self.t.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.t[i], self.mean[i][0], self.mean[i][1], self.std[i][0], self.std[i][1]
            ));
        }
        out
    }
}

/// Seeds used by [`run_ensemble`]: replica `i` gets `derive(derive(base, ROLE_ENSEMBLE), i)`.
pub fn ensemble_seeds(seed_base: u64, n_reps: usize) -> Vec<u64> {
    let root = seed::derive(seed_base, seed::ROLE_ENSEMBLE);
    (0..n_reps as u64).map(|i| seed::derive(root, i)).collect()
}

pub fn run_ensemble(net: &Network, config: &EnsembleConfig, n_reps: usize, seed_base: u64) -> Envelope {
    assert!(n_reps >= 2, "an ensemble needs at least two replicas");
    run_ensemble_with_seeds(net, config, &ensemble_seeds(seed_base, n_reps))
}

/// Runs one replica per seed in parallel. Results are reduced in seed order,
/// so the envelope does not depend on the worker count.
pub fn run_ensemble_with_seeds(net: &Network, config: &EnsembleConfig, seeds: &[u64]) -> Envelope {
    let runs: Vec<Trajectory> = seeds
        .par_iter()
        .map(|&s| {
            let mut sim = Simulation::new(net, config.params, config.theta0, config.init_mode, s);
            sim.run(config.horizon_t, config.record_stride)
        })
        .collect();
    let len = runs.iter().map(Trajectory::len).min().unwrap_or(0);
    let k = runs.len() as f64;
    let mut env = Envelope {
        t: Vec::with_capacity(len),
        mean: Vec::with_capacity(len),
        std: Vec::with_capacity(len),
        seeds: seeds.to_vec(),
        endpoints: runs.iter().filter_map(Trajectory::terminal).collect(),
    };
    for i in 0..len {
        let mut mean = [0.0; 2];
        for r in &runs {
            let s = r.samples[i].state.as_array();
            mean[0] += s[0];
            mean[1] += s[1];
        }
        mean = [mean[0] / k, mean[1] / k];
        let mut var = [0.0; 2];
        for r in &runs {
            let s = r.samples[i].state.as_array();
            var[0] += (s[0] - mean[0]).powi(2);
            var[1] += (s[1] - mean[1]).powi(2);
        }
        let denom = (k - 1.0).max(1.0);
        env.t.push(runs[0].samples[i].t);
        env.mean.push(mean);
        env.std.push([(var[0] / denom).sqrt(), (var[1] / denom).sqrt()]);
    }
    env
}
