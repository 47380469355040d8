//! Undirected simple graphs: loading, sanitization, connected components,
//! ergodicity checks and the degree-proportional stationary distribution.
//!
//! Graphs are stored in compressed sparse row form with dense node indices
//! `0..n`. Dense indices follow the ascending order of the original node IDs,
//! and the original IDs are kept as a side table for reporting.

use std::collections::{BTreeSet, VecDeque};
use std::fs;
use std::path::Path;

use thiserror::Error;

/// Tolerance used when validating that a probability vector sums to one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("empty graph")]
    Empty,
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not regular (degrees range from {min} to {max})")]
    NotRegular { min: u32, max: u32 },
    #[error("invalid position distribution: {0}")]
    InvalidDistribution(String),
}

/// Options for [`load_edge_list`].
#[derive(Clone, Copy, Debug)]
pub struct LoadOptions {
    /// When set, every listed pair `(u, v)` becomes the undirected edge
    /// `{u, v}`. When unset, the file is read as a directed edge list and only
    /// mutual pairs (both `(u, v)` and `(v, u)` listed) become edges.
    pub symmetrize: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { symmetrize: true }
    }
}

/// An immutable undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    original_ids: Vec<u64>,
}

impl Graph {
    /// Builds the simple undirected graph spanned by `edges`.
    ///
    /// Self-loops and duplicate edges are dropped, but the endpoints of a
    /// dropped self-loop still count as referenced nodes.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut ids = BTreeSet::new();
        let mut pairs = Vec::new();
        for (u, v) in edges {
            ids.insert(u);
            ids.insert(v);
            if u != v {
                pairs.push(if u < v { (u, v) } else { (v, u) });
            }
        }
        let original_ids: Vec<u64> = ids.into_iter().collect();
        let index = |id: u64| original_ids.binary_search(&id).expect("referenced id") as u32;
        let mut dense: Vec<(u32, u32)> = pairs.into_iter().map(|(u, v)| (index(u), index(v))).collect();
        dense.sort_unstable();
        dense.dedup();
        Self::from_dense(original_ids, &dense)
    }

    /// Builds a graph over dense node indices `0..n` from a deduplicated,
    /// loop-free edge list with `u < v`.
    fn from_dense(original_ids: Vec<u64>, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = original_ids.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(u, v) in edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Ok(Self { offsets, neighbors, original_ids })
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, node: usize) -> u32 {
        (self.offsets[node + 1] - self.offsets[node]) as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    /// Sorted neighbor list of `node`.
    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Original (pre-remapping) ID of each dense node index.
    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn is_regular(&self) -> bool {
        let (min, max) = self.degree_range();
        min == max
    }

    pub fn degree_range(&self) -> (u32, u32) {
        (0..self.node_count())
            .map(|i| self.degree(i))
            .fold((u32::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)))
    }

    /// Component label per node, labels assigned in order of smallest member.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let n = self.node_count();
        let mut label = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for root in 0..n {
            if label[root] != u32::MAX {
                continue;
            }
            label[root] = count;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if label[v as usize] == u32::MAX {
                        label[v as usize] = count;
                        queue.push_back(v as usize);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    /// Induced subgraph on `keep` (dense indices, any order). Node order of
    /// the result follows ascending original ID.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<Self, GraphError> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_index = vec![u32::MAX; self.node_count()];
        for (i, &node) in keep.iter().enumerate() {
            new_index[node] = i as u32;
        }
        let mut edges = Vec::new();
        for &u in &keep {
            for &v in self.neighbors(u) {
                let (a, b) = (new_index[u], new_index[v as usize]);
                if b != u32::MAX && a < b {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        let ids = keep.iter().map(|&i| self.original_ids[i]).collect();
        Self::from_dense(ids, &edges)
    }
}

/// Parses an edge list: one whitespace- or comma-separated node pair per
/// line; `#` and `%` start comment lines; extra columns are ignored. A single
/// non-numeric header line (e.g. `id_1,id_2`) is tolerated before the first
/// edge.
pub fn parse_edge_list(text: &str, options: LoadOptions) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut seen_data = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty());
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(GraphError::Parse {
                    line: lineno + 1,
                    reason: format!("expected a node pair, found {line:?}"),
                })
            }
        };
        match (a.parse::<u64>(), b.parse::<u64>()) {
            (Ok(u), Ok(v)) => {
                edges.push((u, v));
                seen_data = true;
            }
            _ if !seen_data && a.parse::<f64>().is_err() && b.parse::<f64>().is_err() => {
                // column header
                seen_data = true;
            }
            _ => {
                return Err(GraphError::Parse {
                    line: lineno + 1,
                    reason: format!("node IDs must be non-negative integers, found {line:?}"),
                })
            }
        }
    }
    if !options.symmetrize {
        let listed: BTreeSet<(u64, u64)> = edges.iter().copied().collect();
        let nodes: Vec<(u64, u64)> = edges.iter().flat_map(|&(u, v)| [(u, u), (v, v)]).collect();
        edges.retain(|&(u, v)| u == v || listed.contains(&(v, u)));
        // keep every referenced node, even when its edges were not mutual
        edges.extend(nodes);
    }
    if edges.is_empty() {
        return Err(GraphError::Empty);
    }
    Graph::from_edges(edges)
}

/// Reads and parses an edge-list file (see [`parse_edge_list`]).
pub fn load_edge_list(path: impl AsRef<Path>, options: LoadOptions) -> Result<Graph, GraphError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text, options)
}

/// Induced subgraph on the largest connected component. Ties go to the
/// component holding the smallest original node ID.
pub fn largest_connected_component(g: &Graph) -> Graph {
    let (label, count) = g.components();
    if count == 1 {
        return g.clone();
    }
    let mut sizes = vec![0usize; count];
    for &l in &label {
        sizes[l as usize] += 1;
    }
    // labels are ordered by smallest member, so the first maximum wins ties
    let best = (0..count).fold(0, |best, c| if sizes[c] > sizes[best] { c } else { best }) as u32;
    let keep: Vec<usize> = (0..g.node_count()).filter(|&i| label[i] == best).collect();
    g.induced_subgraph(&keep).expect("largest component of a non-empty graph has an edge")
}

/// Connectivity and bipartiteness. The walk is ergodic iff the graph is
/// connected and not bipartite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ergodicity {
    pub is_connected: bool,
    pub is_bipartite: bool,
}

impl Ergodicity {
    pub fn is_ergodic(&self) -> bool {
        self.is_connected && !self.is_bipartite
    }
}

pub fn check_ergodic(g: &Graph) -> Ergodicity {
    let n = g.node_count();
    let mut color = vec![u8::MAX; n];
    let mut is_bipartite = true;
    let mut roots = 0;
    let mut queue = VecDeque::new();
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        roots += 1;
        color[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let v = v as usize;
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    is_bipartite = false;
                }
            }
        }
    }
    Ergodicity { is_connected: roots == 1, is_bipartite }
}

/// Time index of a position distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeStep {
    At(u64),
    Stationary,
}

/// Probability of a report sitting at each node.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionDistribution {
    probs: Vec<f64>,
    step: TimeStep,
}

impl PositionDistribution {
    pub fn new(probs: Vec<f64>, step: TimeStep) -> Result<Self, GraphError> {
        if probs.is_empty() {
            return Err(GraphError::InvalidDistribution("no entries".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(GraphError::InvalidDistribution(format!("entry {p} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(GraphError::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { probs, step })
    }

    /// Point mass on `node`.
    pub fn delta(n: usize, node: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[node] = 1.0;
        Self { probs, step: TimeStep::At(0) }
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n], step: TimeStep::Stationary }
    }

    pub(crate) fn from_parts(probs: Vec<f64>, step: TimeStep) -> Self {
        Self { probs, step }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn step(&self) -> TimeStep {
        self.step
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn sum_squared(&self) -> f64 {
        self.probs.iter().map(|p| p * p).sum()
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum()
    }
}

/// `pi_i = k(i) / 2m`.
pub fn stationary_distribution(g: &Graph) -> Result<PositionDistribution, GraphError> {
    if !check_ergodic(g).is_connected {
        return Err(GraphError::Disconnected);
    }
    let two_m = (2 * g.edge_count()) as f64;
    let probs = (0..g.node_count()).map(|i| g.degree(i) as f64 / two_m).collect();
    Ok(PositionDistribution::from_parts(probs, TimeStep::Stationary))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSummary {
    pub node_count: usize,
    pub edge_count: usize,
    /// Irregularity `n * sum_i pi_i^2`; exactly 1 for regular graphs.
    pub gamma: f64,
    pub sum_pi_squared: f64,
    pub is_bipartite: bool,
    pub is_connected: bool,
}

pub fn graph_summary(g: &Graph) -> GraphSummary {
    let n = g.node_count();
    let two_m = 2 * g.edge_count() as u128;
    // sum_i k_i^2 / (2m)^2 with the numerator accumulated exactly
    let sum_k2: u128 = (0..n).map(|i| (g.degree(i) as u128).pow(2)).sum();
    let sum_pi_squared = sum_k2 as f64 / (two_m * two_m) as f64;
    let gamma = if g.is_regular() {
        1.0
    } else {
        (n as u128 * sum_k2) as f64 / (two_m * two_m) as f64
    };
    let erg = check_ergodic(g);
    GraphSummary {
        node_count: n,
        edge_count: g.edge_count(),
        gamma,
        sum_pi_squared,
        is_bipartite: erg.is_bipartite,
        is_connected: erg.is_connected,
    }
}
