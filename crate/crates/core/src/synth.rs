//! Accelerated-growth network generator with memory and a nonlinear,
//! time-dependent preferential attachment kernel.
//!
//! A walker sits on the last active node. Each step either creates a new
//! node hanging off the walker (probability p(τ) = p0·τ^(δ−1)) or draws an
//! existing node with weight k^(1 − t^(−η)), links the walker to it and
//! moves there. The seed is a two-node chain, counted as step τ = 1.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growthcurve::{mean_and_std, CheckpointSchedule, CurveMode, CurveSample, GrowthCurve};
use crate::metrics::aspl;
use crate::netbuild::{AdjacencyNetwork, NodeId};

pub const DEFAULT_MAX_RETRIES: u32 = 100;
pub const DEFAULT_SEED: u64 = 20_130_417;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub p0: f64,
    pub delta: f64,
    pub eta: f64,
    pub seed: u64,
    pub steps: u64,
    /// Redraw when the chosen node is already linked to the walker. When
    /// off, or when the walker is linked to every other node, such a step
    /// only moves the walker.
    pub resample_duplicates: bool,
    pub max_retries: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            p0: 1.0,
            delta: 0.8,
            eta: 0.5,
            seed: DEFAULT_SEED,
            steps: 100_000,
            resample_duplicates: true,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

impl SynthConfig {
    /// Problems with the configuration, empty when valid. δ = 1 is accepted
    /// as the constant-probability boundary.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.p0 > 0.0 && self.p0 <= 1.0) {
            out.push(format!("p0 must be in (0, 1], got {}", self.p0));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            out.push(format!("delta must be in (0, 1], got {}", self.delta));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            out.push(format!("eta must be positive, got {}", self.eta));
        }
        if self.steps < 2 {
            out.push(format!("steps must be at least 2, got {}", self.steps));
        }
        if self.steps > u32::MAX as u64 {
            out.push(format!("steps must fit in 32 bits, got {}", self.steps));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(problems.join("; ")))
        }
    }

    /// Same parameters with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

/// min(1, p0·τ^(δ−1)).
pub fn new_node_probability(tau: u64, cfg: &SynthConfig) -> f64 {
    (cfg.p0 * (tau as f64).powf(cfg.delta - 1.0)).min(1.0)
}

/// k^ξ with ξ = 1 − t^(−η).
pub fn attachment_weight(k: usize, t: usize, eta: f64) -> f64 {
    (k as f64).powf(attachment_exponent(t, eta))
}

pub fn attachment_exponent(t: usize, eta: f64) -> f64 {
    1.0 - (t as f64).powf(-eta)
}

/// Expected node count after all steps: 1 + Σ_{τ=1}^{steps} p(τ), with the
/// seed step counted as certain.
pub fn expected_nodes(cfg: &SynthConfig) -> f64 {
    1.0 + 1.0 + (2..=cfg.steps).map(|t| new_node_probability(t, cfg)).sum::<f64>()
}

/// Node and edge counts after each step; index τ − 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynthTrace {
    pub n_nodes: Vec<u32>,
    pub n_edges: Vec<u32>,
}

impl SynthTrace {
    pub fn steps(&self) -> usize {
        self.n_nodes.len()
    }

    /// (τ, N(τ)) at log-spaced τ, for Heaps fitting.
    pub fn heaps_curve(&self) -> Vec<(usize, usize)> {
        crate::metrics::log_positions(self.n_nodes.len())
            .into_iter()
            .map(|t| (t, self.n_nodes[t - 1] as usize))
            .collect()
    }
}

/// Nodes grouped by degree for weighted sampling.
#[derive(Debug, Default)]
struct DegreeBuckets {
    buckets: BTreeMap<usize, Vec<NodeId>>,
    position: Vec<usize>,
}

impl DegreeBuckets {
    fn insert(&mut self, node: NodeId, degree: usize) {
        let list = self.buckets.entry(degree).or_default();
        if self.position.len() <= node as usize {
            self.position.resize(node as usize + 1, 0);
        }
        self.position[node as usize] = list.len();
        list.push(node);
    }

    fn remove(&mut self, node: NodeId, degree: usize) {
        let list = self.buckets.get_mut(&degree).expect("degree bucket");
        let pos = self.position[node as usize];
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            self.position[moved as usize] = pos;
        }
        if list.is_empty() {
            self.buckets.remove(&degree);
        }
    }

    fn bump(&mut self, node: NodeId, old_degree: usize) {
        self.remove(node, old_degree);
        self.insert(node, old_degree + 1);
    }

    /// Draws a node ∝ k^xi, never `exclude`.
    fn sample<R: Rng>(&self, rng: &mut R, xi: f64, exclude: NodeId, exclude_degree: usize) -> NodeId {
        let weights: Vec<(usize, f64, usize)> = self
            .buckets
            .iter()
            .map(|(&k, list)| {
                let count = list.len() - usize::from(k == exclude_degree);
                (k, (k as f64).powf(xi) * count as f64, count)
            })
            .collect();
        let total: f64 = weights.iter().map(|w| w.1).sum();
        let mut u = rng.gen::<f64>() * total;
        let mut chosen = weights.iter().rev().find(|w| w.2 > 0).copied().expect("candidate");
        for &w in &weights {
            if w.2 == 0 {
                continue;
            }
            if u < w.1 {
                chosen = w;
                break;
            }
            u -= w.1;
        }
        let (k, _, count) = chosen;
        let list = &self.buckets[&k];
        let mut j = rng.gen_range(0..count);
        if k == exclude_degree && j >= self.position[exclude as usize] {
            j += 1;
        }
        list[j]
    }
}

/// Step-by-step generator. The network and trace are available at any
/// point, which lets callers measure intermediate snapshots.
pub struct Generator {
    cfg: SynthConfig,
    rng: ChaCha8Rng,
    net: AdjacencyNetwork,
    buckets: DegreeBuckets,
    walker: NodeId,
    tau: u64,
    trace: SynthTrace,
}

impl Generator {
    pub fn new(cfg: SynthConfig) -> Result<Self> {
        cfg.validate()?;
        let mut net = AdjacencyNetwork::new();
        let a = net.add_node();
        let b = net.add_node();
        net.add_edge(a, b);
        net.set_last_active(b);
        net.set_tokens_consumed(1);
        let mut buckets = DegreeBuckets::default();
        buckets.insert(a, 1);
        buckets.insert(b, 1);
        Ok(Self {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            net,
            buckets,
            walker: b,
            tau: 1,
            trace: SynthTrace { n_nodes: vec![2], n_edges: vec![1] },
        })
    }

    pub fn network(&self) -> &AdjacencyNetwork {
        &self.net
    }

    pub fn into_parts(self) -> (AdjacencyNetwork, SynthTrace) {
        (self.net, self.trace)
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn done(&self) -> bool {
        self.tau >= self.cfg.steps
    }

    /// Performs one growth step. Returns Ok(false) once all steps are used.
    pub fn step(&mut self) -> Result<bool> {
        if self.done() {
            return Ok(false);
        }
        self.tau += 1;
        let walker = self.walker;
        let walker_degree = self.net.degree(walker);
        if self.rng.gen::<f64>() < new_node_probability(self.tau, &self.cfg) {
            let node = self.net.add_node();
            self.net.add_edge(walker, node);
            self.buckets.bump(walker, walker_degree);
            self.buckets.insert(node, 1);
            self.walker = node;
        } else {
            let xi = attachment_exponent(self.net.n_nodes(), self.cfg.eta);
            let mut target = self.buckets.sample(&mut self.rng, xi, walker, walker_degree);
            // A walker linked to every other node cannot gain an edge; it
            // only moves.
            let can_link = walker_degree + 1 < self.net.n_nodes();
            let mut retries = 0;
            while self.cfg.resample_duplicates && can_link && self.net.has_edge(walker, target) {
                if retries == self.cfg.max_retries {
                    return Err(Error::Saturation { step: self.tau, retries });
                }
                retries += 1;
                target = self.buckets.sample(&mut self.rng, xi, walker, walker_degree);
            }
            let target_degree = self.net.degree(target);
            if self.net.add_edge(walker, target) {
                self.buckets.bump(walker, walker_degree);
                self.buckets.bump(target, target_degree);
            }
            self.walker = target;
        }
        self.net.set_last_active(self.walker);
        self.net.set_tokens_consumed(self.tau as usize);
        self.trace.n_nodes.push(self.net.n_nodes() as u32);
        self.trace.n_edges.push(self.net.n_edges() as u32);
        Ok(true)
    }

    /// Steps until the network has `target` nodes. Returns Ok(false) if the
    /// step budget runs out first.
    pub fn advance_to_nodes(&mut self, target: usize) -> Result<bool> {
        while self.net.n_nodes() < target {
            if !self.step()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Runs all steps of one realization.
pub fn generate(cfg: &SynthConfig) -> Result<(AdjacencyNetwork, SynthTrace)> {
    let mut g = Generator::new(*cfg)?;
    while g.step()? {}
    Ok(g.into_parts())
}

/// Seed of realization `r`; each realization gets its own stream.
pub fn realization_seed(base: u64, r: usize) -> u64 {
    base.wrapping_add(r as u64)
}

/// ASPL at each checkpoint for one seeded realization.
pub fn synth_realization(cfg: &SynthConfig, checkpoints: &[usize]) -> Result<Vec<f64>> {
    let mut g = Generator::new(*cfg)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        if !g.advance_to_nodes(n)? {
            return Err(Error::VocabularyExhausted {
                requested: n,
                available: g.network().n_nodes(),
            });
        }
        out.push(aspl(g.network())?);
    }
    Ok(out)
}

/// Mean L(N) over `n_realizations` generator runs seeded from `cfg.seed`.
/// Every realization must reach every checkpoint.
pub fn synth_curve(
    cfg: &SynthConfig,
    checkpoints: &CheckpointSchedule,
    n_realizations: usize,
) -> Result<GrowthCurve> {
    let seeds: Vec<u64> = (0..n_realizations).map(|r| realization_seed(cfg.seed, r)).collect();
    synth_curve_with_seeds(cfg, checkpoints, &seeds)
}

pub fn synth_curve_with_seeds(
    cfg: &SynthConfig,
    checkpoints: &CheckpointSchedule,
    seeds: &[u64],
) -> Result<GrowthCurve> {
    cfg.validate()?;
    if seeds.is_empty() {
        return Err(Error::InvalidConfig("at least one realization is required".into()));
    }
    let cp = checkpoints.points();
    let runs: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&s| synth_realization(&cfg.with_seed(s), cp))
        .collect::<Result<_>>()?;
    let samples = cp
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let values: Vec<f64> = runs.iter().map(|r| r[i]).collect();
            let (mean_l, std_l) = mean_and_std(&values);
            CurveSample { n, mean_l, realizations: values.len(), std_l }
        })
        .collect();
    Ok(GrowthCurve {
        text_id: format!("synth-p0{}-d{}-e{}-s{}", cfg.p0, cfg.delta, cfg.eta, cfg.seed),
        mode: CurveMode::Synthetic,
        samples,
    })
}
