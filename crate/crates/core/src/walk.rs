//! Exact evolution of position distributions and Monte Carlo simulation of
//! the report exchange.
//!
//! In both reporting protocols every held report is relayed to an
//! independently sampled neighbor each round, so the exchange of `n` reports
//! is exactly `n` independent simple random walks started one per node.
//!
//! Every trial draws from its own ChaCha8 stream (`seed`, stream = trial
//! index), so results do not depend on thread scheduling or trial order.

use std::ops::{AddAssign, Div};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{Graph, GraphError, PositionDistribution, TimeStep};

/// Number type the exact walk recursion can run over.
pub trait WalkScalar: Clone + AddAssign + for<'a> Div<&'a Self, Output = Self> {
    fn zero() -> Self;
    fn from_degree(k: u32) -> Self;
}

impl WalkScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_degree(k: u32) -> Self {
        k as f64
    }
}

/// One step `P(t+1) = M^T P(t)`: each node splits its mass evenly over its
/// neighbors.
pub fn step_with<T: WalkScalar>(g: &Graph, p: &[T]) -> Vec<T> {
    let mut next = vec![T::zero(); p.len()];
    for (u, mass) in p.iter().enumerate() {
        let k = g.degree(u);
        if k == 0 {
            continue;
        }
        let share = mass.clone() / &T::from_degree(k);
        for &v in g.neighbors(u) {
            next[v as usize] += share.clone();
        }
    }
    next
}

/// `(M^T)^t p0` over any [`WalkScalar`].
pub fn evolve_with<T: WalkScalar>(g: &Graph, p0: &[T], t: u64) -> Vec<T> {
    let mut p = p0.to_vec();
    for _ in 0..t {
        p = step_with(g, &p);
    }
    p
}

/// Position distribution after `t` exact walk steps from `p0`.
pub fn evolve_distribution(g: &Graph, p0: &PositionDistribution, t: u64) -> PositionDistribution {
    let probs = evolve_with(g, p0.probs(), t);
    let step = match p0.step() {
        TimeStep::At(s) => TimeStep::At(s + t),
        TimeStep::Stationary => TimeStep::Stationary,
    };
    PositionDistribution::from_parts(probs, step)
}

/// Walk distribution of one report on a regular graph after `t` steps.
///
/// On vertex-transitive regular graphs this is, up to relabeling, the
/// distribution of every user's report. Random regular graphs are only
/// approximately symmetric; only regularity is checked here.
pub fn exact_symmetric_distribution(g: &Graph, start: usize, t: u64) -> Result<PositionDistribution, GraphError> {
    let (min, max) = g.degree_range();
    if min != max {
        return Err(GraphError::NotRegular { min, max });
    }
    Ok(evolve_distribution(g, &PositionDistribution::delta(g.node_count(), start), t))
}

/// Ratio of the largest entry to the smallest non-zero entry.
pub fn rho_star(p: &PositionDistribution) -> f64 {
    let (max, min) = p
        .probs()
        .iter()
        .filter(|&&x| x > 0.0)
        .fold((0.0f64, f64::INFINITY), |(hi, lo), &x| (hi.max(x), lo.min(x)));
    assert!(max > 0.0, "distribution has no positive entry");
    max / min
}

/// Expected number of users left without any report when all `n` reports
/// land independently according to `pi`: `sum_i (1 - pi_i)^n`.
pub fn expected_empty_holders(pi: &PositionDistribution) -> f64 {
    let n = pi.len() as f64;
    pi.probs().iter().map(|p| (n * (-p).ln_1p()).exp()).sum()
}

/// Final position of every report after one simulated exchange.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTrace {
    /// `final_nodes[j]` is where the report injected by user `j` ended up.
    pub final_nodes: Vec<u32>,
    pub rounds: u64,
    pub seed: u64,
    pub trial: u64,
}

impl WalkTrace {
    /// Reports held by each node, in increasing report index.
    pub fn holdings(&self) -> Vec<Vec<usize>> {
        let mut held = vec![Vec::new(); self.final_nodes.len()];
        for (report, &node) in self.final_nodes.iter().enumerate() {
            held[node as usize].push(report);
        }
        held
    }
}

/// Per-node report counts after the final round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportAllocation {
    pub counts: Vec<u32>,
}

impl ReportAllocation {
    pub fn from_trace(trace: &WalkTrace) -> Self {
        let mut counts = vec![0u32; trace.final_nodes.len()];
        for &node in &trace.final_nodes {
            counts[node as usize] += 1;
        }
        Self { counts }
    }

    pub fn l2_norm(&self) -> f64 {
        self.counts.iter().map(|&c| (c as f64).powi(2)).sum::<f64>().sqrt()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn empty_holders(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 0).count()
    }
}

/// RNG for one trial: stream `trial` of the ChaCha8 generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Walks one report from `start` for `t` uniform-neighbor steps.
pub fn walk_report<R: Rng + ?Sized>(g: &Graph, start: usize, t: u64, rng: &mut R) -> usize {
    let mut node = start;
    for _ in 0..t {
        let nbrs = g.neighbors(node);
        node = nbrs[rng.random_range(0..nbrs.len())] as usize;
    }
    node
}

/// One exchange of `n` reports (one injected per node) for `t` rounds.
pub fn simulate_trace(g: &Graph, t: u64, seed: u64, trial: u64) -> WalkTrace {
    let mut rng = trial_rng(seed, trial);
    let final_nodes = (0..g.node_count()).map(|start| walk_report(g, start, t, &mut rng) as u32).collect();
    WalkTrace { final_nodes, rounds: t, seed, trial }
}

/// Lazily simulated allocations for trials `0..trials`.
pub fn simulate_allocation(g: &Graph, t: u64, trials: u64, seed: u64) -> impl Iterator<Item = ReportAllocation> + '_ {
    (0..trials).map(move |trial| ReportAllocation::from_trace(&simulate_trace(g, t, seed, trial)))
}

/// Same allocations as [`simulate_allocation`], computed in parallel and
/// returned in trial order.
pub fn simulate_allocations_par(g: &Graph, t: u64, trials: u64, seed: u64) -> Vec<ReportAllocation> {
    (0..trials)
        .into_par_iter()
        .map(|trial| ReportAllocation::from_trace(&simulate_trace(g, t, seed, trial)))
        .collect()
}

/// Empirical landing distribution of the report injected at `start`, over
/// `trials` independent exchanges.
pub fn landing_histogram(g: &Graph, start: usize, t: u64, trials: u64, seed: u64) -> Vec<f64> {
    let n = g.node_count();
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut acc, trial| {
                let mut rng = trial_rng(seed, trial);
                acc[walk_report(g, start, t, &mut rng)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    counts.into_iter().map(|c| c as f64 / trials as f64).collect()
}

/// High-probability bound on `||L||_2` when every report lands according
/// to a distribution with `sum_i P_i^2 = sum_p2`:
/// `sqrt((n^2 - n) sum_p2) + sqrt(n log(1/delta))`, holding with
/// probability at least `1 - delta`.
pub fn allocation_l2_bound(sum_p2: f64, n: usize, delta: f64) -> f64 {
    let n = n as f64;
    ((n * n - n) * sum_p2).sqrt() + (n * (1.0 / delta).ln()).sqrt()
}

/// What one user submits under single-report reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingleReport {
    Dummy,
    /// Index of the report (equivalently, of the user who injected it).
    Report(usize),
}

/// Each node with held reports submits one of them uniformly at random;
/// empty nodes submit a dummy. Returns exactly one entry per node.
pub fn sample_single_reports(alloc: &ReportAllocation, trace: &WalkTrace, seed: u64) -> Vec<SingleReport> {
    debug_assert_eq!(alloc, &ReportAllocation::from_trace(trace));
    let mut rng = trial_rng(seed, trace.trial);
    trace
        .holdings()
        .into_iter()
        .map(|held| {
            if held.is_empty() {
                SingleReport::Dummy
            } else {
                SingleReport::Report(held[rng.random_range(0..held.len())])
            }
        })
        .collect()
}
