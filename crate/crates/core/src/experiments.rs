//! Experiment plumbing: dataset manifests, graph sources, and the CSV tables
//! behind every figure and command.
//!
//! Every table starts with `#`-prefixed metadata lines (schema name, schema
//! version, library version, and the full input echo) followed by a header
//! row. Row order is deterministic given the inputs and seed.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::accountant::{
    amplify, AccountantError, AmplificationResult, DeltaParams, LocalPrivacyParams, Protocol, Scenario,
};
use crate::generators;
use crate::graph::{
    graph_summary, largest_connected_component, load_edge_list, stationary_distribution, Graph, GraphError,
    LoadOptions,
};
use crate::ldp::{mean_estimation_experiment, LdpError};
use crate::spectral::{spectral_summary, sum_p_squared_bound, SpectralError, SpectralOptions, SpectralSummary};
use crate::walk::{
    allocation_l2_bound, evolve_distribution, rho_star, simulate_trace, trial_rng, ReportAllocation,
};
use crate::graph::PositionDistribution;
use crate::VERSION;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
    #[error("dataset '{0}' is not listed in the manifest")]
    MissingEntry(String),
    #[error("dataset '{name}' (manifest entry) not found at {}", path.display())]
    MissingFile { name: String, path: PathBuf },
    #[error("dataset '{0}' needs a manifest")]
    NoManifest(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Accountant(#[from] AccountantError),
    #[error(transparent)]
    Ldp(#[from] LdpError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

type Result<T> = std::result::Result<T, ExperimentError>;

/// Maps dataset names to edge-list files.
///
/// One `name = path` entry per line; `#` starts a comment. Relative paths are
/// resolved against the manifest's directory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    entries: BTreeMap<String, PathBuf>,
}

impl Manifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (name, path) = line.split_once('=').ok_or_else(|| ExperimentError::Manifest {
                line: i + 1,
                reason: format!("expected 'name = path', got '{line}'"),
            })?;
            let (name, path) = (name.trim(), path.trim());
            if name.is_empty() || path.is_empty() {
                return Err(ExperimentError::Manifest { line: i + 1, reason: "empty name or path".into() });
            }
            entries.insert(name.to_string(), base.join(path));
        }
        Ok(Self { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Path of an entry that exists on disk.
    pub fn resolve(&self, name: &str) -> Result<&Path> {
        let path = self.entries.get(name).ok_or_else(|| ExperimentError::MissingEntry(name.to_string()))?;
        if !path.is_file() {
            return Err(ExperimentError::MissingFile { name: name.to_string(), path: path.clone() });
        }
        Ok(path)
    }
}

/// Where a graph comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    /// A manifest entry; the largest connected component is used.
    Dataset(String),
    /// Random `k`-regular graph on `n` nodes.
    Regular { n: usize, k: usize },
    /// Preferential attachment with `m` edges per new node.
    BarabasiAlbert { n: usize, m: usize },
    Cycle(usize),
    Complete(usize),
    Petersen,
}

impl GraphSource {
    /// `regular:n:k`, `ba:n:m`, `cycle:n`, `complete:n`, `petersen`, or a
    /// dataset name.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| {
            s.parse::<usize>().map_err(|_| ExperimentError::InvalidSpec(format!("'{s}' in '{spec}' is not a count")))
        };
        let bad = || ExperimentError::InvalidSpec(format!("malformed generator spec '{spec}'"));
        Ok(match parts.as_slice() {
            ["regular", n, k] => {
                let (n, k) = (num(n)?, num(k)?);
                if k == 0 || k >= n || (n * k) % 2 != 0 {
                    return Err(ExperimentError::InvalidSpec(format!("no simple {k}-regular graph on {n} nodes")));
                }
                Self::Regular { n, k }
            }
            ["ba", n, m] => {
                let (n, m) = (num(n)?, num(m)?);
                if m == 0 || n <= m {
                    return Err(ExperimentError::InvalidSpec(format!("ba needs 1 <= m < n, got n={n} m={m}")));
                }
                Self::BarabasiAlbert { n, m }
            }
            ["cycle", n] if num(n)? >= 3 => Self::Cycle(num(n)?),
            ["complete", n] if num(n)? >= 2 => Self::Complete(num(n)?),
            ["petersen"] => Self::Petersen,
            ["regular" | "ba" | "cycle" | "complete", ..] => return Err(bad()),
            [name] if !name.is_empty() => Self::Dataset(name.to_string()),
            _ => return Err(bad()),
        })
    }

    pub fn load(&self, manifest: Option<&Manifest>, seed: u64) -> Result<Graph> {
        let mut rng = trial_rng(seed, u64::MAX);
        Ok(match self {
            Self::Dataset(name) => {
                let manifest = manifest.ok_or_else(|| ExperimentError::NoManifest(name.clone()))?;
                let path = manifest.resolve(name)?;
                largest_connected_component(&load_edge_list(path, LoadOptions::default())?)
            }
            Self::Regular { n, k } => generators::random_regular(*n, *k, &mut rng)?,
            Self::BarabasiAlbert { n, m } => generators::barabasi_albert(*n, *m, &mut rng),
            Self::Cycle(n) => generators::cycle(*n),
            Self::Complete(n) => generators::complete(*n),
            Self::Petersen => generators::petersen(),
        })
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dataset(name) => f.write_str(name),
            Self::Regular { n, k } => write!(f, "regular:{n}:{k}"),
            Self::BarabasiAlbert { n, m } => write!(f, "ba:{n}:{m}"),
            Self::Cycle(n) => write!(f, "cycle:{n}"),
            Self::Complete(n) => write!(f, "complete:{n}"),
            Self::Petersen => f.write_str("petersen"),
        }
    }
}

/// Largest-component size and `Gamma` of the social and web graphs used in
/// the reference experiments. Used as stand-ins when the edge lists are not
/// available locally.
pub const REFERENCE_PROFILES: [ReferenceProfile; 5] = [
    ReferenceProfile { name: "facebook", nodes: 22_470, gamma: 5.0064 },
    ReferenceProfile { name: "twitch", nodes: 9_498, gamma: 7.5840 },
    ReferenceProfile { name: "deezer", nodes: 28_281, gamma: 3.5633 },
    ReferenceProfile { name: "enron", nodes: 33_696, gamma: 36.866 },
    ReferenceProfile { name: "google", nodes: 855_802, gamma: 20.642 },
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceProfile {
    pub name: &'static str,
    pub nodes: usize,
    pub gamma: f64,
}

impl ReferenceProfile {
    pub fn get(name: &str) -> Option<Self> {
        REFERENCE_PROFILES.iter().copied().find(|p| p.name == name)
    }

    /// `sum pi^2 = Gamma / n`.
    pub fn sum_pi_squared(&self) -> f64 {
        self.gamma / self.nodes as f64
    }
}

/// How many walk steps to run.
#[derive(Clone, Debug, PartialEq)]
pub enum Steps {
    /// `round(log n / gap)`.
    Mixing,
    Fixed(Vec<u64>),
}

/// A fully specified run of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub source: GraphSource,
    pub scenario: Scenario,
    pub protocol: Protocol,
    pub epsilon0: Vec<f64>,
    pub delta0: f64,
    /// `None` selects [`DeltaParams::defaults_for`] the graph size.
    pub deltas: Option<DeltaParams>,
    pub steps: Steps,
    pub trials: u64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(source: GraphSource) -> Self {
        Self {
            source,
            scenario: Scenario::Stationary,
            protocol: Protocol::All,
            epsilon0: vec![1.0],
            delta0: 0.0,
            deltas: None,
            steps: Steps::Mixing,
            trials: 100,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon0.is_empty() {
            return Err(ExperimentError::InvalidSpec("epsilon0 grid is empty".into()));
        }
        if let Some(e) = self.epsilon0.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
            return Err(ExperimentError::InvalidSpec(format!("epsilon0 = {e} must be finite and >= 0")));
        }
        if let Steps::Fixed(t) = &self.steps {
            if t.is_empty() {
                return Err(ExperimentError::InvalidSpec("step grid is empty".into()));
            }
        }
        if let Some(d) = &self.deltas {
            let open = |x: f64| x > 0.0 && x < 1.0;
            if !open(d.delta) || !open(d.delta2) || d.delta1.is_some_and(|x| !open(x)) {
                return Err(ExperimentError::InvalidSpec("delta, delta1, delta2 must lie in (0, 1)".into()));
            }
        }
        Ok(())
    }

    pub fn deltas_for(&self, n: usize) -> DeltaParams {
        self.deltas.unwrap_or_else(|| DeltaParams::defaults_for(n))
    }

    fn echo(&self, n: usize) -> Vec<(String, String)> {
        let d = self.deltas_for(n);
        vec![
            ("dataset".into(), self.source.to_string()),
            ("scenario".into(), scenario_name(self.scenario).into()),
            ("protocol".into(), protocol_name(self.protocol).into()),
            ("epsilon0".into(), join(&self.epsilon0)),
            ("delta0".into(), self.delta0.to_string()),
            ("delta".into(), d.delta.to_string()),
            ("delta1".into(), d.delta1.map_or("none".into(), |x| x.to_string())),
            ("delta2".into(), d.delta2.to_string()),
            ("deltas_defaulted".into(), self.deltas.is_none().to_string()),
            ("steps".into(), match &self.steps {
                Steps::Mixing => "mixing".into(),
                Steps::Fixed(t) => join(t),
            }),
            ("trials".into(), self.trials.to_string()),
            ("seed".into(), self.seed.to_string()),
        ]
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

pub fn protocol_name(p: Protocol) -> &'static str {
    match p {
        Protocol::All => "all",
        Protocol::Single => "single",
    }
}

pub fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::Stationary => "stationary",
        Scenario::Symmetric => "symmetric",
    }
}

/// A CSV table with a metadata preamble.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub schema: &'static str,
    pub schema_version: u32,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &'static str, schema_version: u32, columns: &[&'static str]) -> Self {
        Self { schema, schema_version, meta: Vec::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        let row: Vec<String> = row.into_iter().collect();
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.schema);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Parsed numeric column.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let i = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].parse().unwrap_or(f64::NAN)).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!(
            "# schema: {}\n# schema_version: {}\n# netshuffle_version: {}\n",
            self.schema, self.schema_version, VERSION
        );
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let body = w.into_inner().map_err(|e| ExperimentError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("utf8 fields"));
        Ok(out)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}

fn f(x: f64) -> String {
    format!("{x:.12e}")
}

/// Walk-distribution quantities a bound needs at step `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrivacyInputs {
    pub n: usize,
    pub steps: u64,
    pub sum_p2: f64,
    pub rho_star: f64,
}

/// `sum_p2` (and `rho_star`) of `g` at each requested step. Stationary uses
/// the spectral finite-time bound; symmetric needs a regular graph and
/// evolves the exact distribution from node 0.
pub fn privacy_inputs(g: &Graph, scenario: Scenario, steps: &Steps, seed: u64) -> Result<Vec<PrivacyInputs>> {
    let n = g.node_count();
    let spectral = || spectral_summary(g, &SpectralOptions { seed, ..Default::default() });
    let grid = |s: &SpectralSummary| -> Result<Vec<u64>> {
        Ok(match steps {
            Steps::Fixed(t) => t.clone(),
            Steps::Mixing => vec![s.mixing_time.ok_or_else(|| {
                ExperimentError::InvalidSpec("graph is bipartite: walks never mix".into())
            })?],
        })
    };
    match scenario {
        Scenario::Stationary => {
            let s = spectral()?;
            let pi = stationary_distribution(g)?;
            Ok(grid(&s)?
                .into_iter()
                .map(|t| PrivacyInputs { n, steps: t, sum_p2: sum_p_squared_bound(&pi, s.gap, t), rho_star: 1.0 })
                .collect())
        }
        Scenario::Symmetric => {
            if !g.is_regular() {
                let (min, max) = g.degree_range();
                return Err(GraphError::NotRegular { min, max }.into());
            }
            let ts = match steps {
                Steps::Fixed(t) => t.clone(),
                Steps::Mixing => grid(&spectral()?)?,
            };
            let mut sorted = ts.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let mut at = BTreeMap::new();
            let mut p = PositionDistribution::delta(n, 0);
            let mut now = 0;
            for t in sorted {
                p = evolve_distribution(g, &p, t - now);
                now = t;
                at.insert(t, PrivacyInputs { n, steps: t, sum_p2: p.sum_squared(), rho_star: rho_star(&p) });
            }
            Ok(ts.iter().map(|t| at[t]).collect())
        }
    }
}

pub const GRAPH_STATS_COLUMNS: &[&str] = &[
    "dataset", "nodes", "edges", "gamma", "sum_pi_squared", "connected", "bipartite", "alpha2", "alpha_n",
    "spectral_gap", "mixing_time", "version",
];

/// One row of graph statistics; spectral columns are left empty unless
/// `spectral` is set.
pub fn graph_stats_row(name: &str, g: &Graph, spectral: Option<&SpectralSummary>) -> Vec<String> {
    let s = graph_summary(g);
    let (a2, an, gap, mix) = match spectral {
        Some(sp) => (f(sp.alpha2), f(sp.alpha_n), f(sp.gap), sp.mixing_time.map_or(String::new(), |t| t.to_string())),
        None => Default::default(),
    };
    vec![
        name.to_string(),
        s.node_count.to_string(),
        s.edge_count.to_string(),
        f(s.gamma),
        f(s.sum_pi_squared),
        s.is_connected.to_string(),
        s.is_bipartite.to_string(),
        a2,
        an,
        gap,
        mix,
        VERSION.to_string(),
    ]
}

pub fn graph_stats(spec: &ExperimentSpec, manifest: Option<&Manifest>, spectral: bool) -> Result<Table> {
    let g = spec.source.load(manifest, spec.seed)?;
    let sp = if spectral { Some(spectral_summary(&g, &SpectralOptions { seed: spec.seed, ..Default::default() })?) } else { None };
    let mut table = Table::new("graph_stats", 1, GRAPH_STATS_COLUMNS);
    table.meta = vec![("dataset".into(), spec.source.to_string()), ("component".into(), "largest".into())];
    table.push(graph_stats_row(&spec.source.to_string(), &g, sp.as_ref()));
    Ok(table)
}

pub const AMPLIFY_COLUMNS: &[&str] = &[
    "dataset", "protocol", "scenario", "nodes", "steps", "sum_p2", "rho_star", "epsilon0", "delta0", "delta",
    "delta1", "delta2", "epsilon", "total_delta", "epsilon1", "approximate", "version",
];

fn amplify_row(source: &str, r: &AmplificationResult, steps: u64) -> Vec<String> {
    let i = &r.inputs;
    vec![
        source.to_string(),
        protocol_name(r.protocol).into(),
        scenario_name(r.scenario).into(),
        i.n.to_string(),
        steps.to_string(),
        f(i.sum_p2),
        f(i.rho_star),
        f(i.local.epsilon0),
        f(i.local.delta0),
        f(i.deltas.delta),
        i.deltas.delta1.map_or(String::new(), f),
        f(i.deltas.delta2),
        f(r.epsilon),
        f(r.delta),
        r.epsilon1.map_or(String::new(), f),
        r.approximate.to_string(),
        VERSION.to_string(),
    ]
}

/// Central guarantee for each `(steps, epsilon0)` of the spec.
pub fn amplify_table(spec: &ExperimentSpec, manifest: Option<&Manifest>) -> Result<Table> {
    spec.validate()?;
    let g = spec.source.load(manifest, spec.seed)?;
    let n = g.node_count();
    let deltas = spec.deltas_for(n);
    let mut table = Table::new("amplify", 1, AMPLIFY_COLUMNS);
    table.meta = spec.echo(n);
    for inputs in privacy_inputs(&g, spec.scenario, &spec.steps, spec.seed)? {
        for &e0 in &spec.epsilon0 {
            let lp = LocalPrivacyParams::new(e0, spec.delta0)?;
            let r = amplify(spec.protocol, spec.scenario, &lp, n, inputs.sum_p2, inputs.rho_star, &deltas)?;
            table.push(amplify_row(&spec.source.to_string(), &r, inputs.steps));
        }
    }
    Ok(table)
}

pub const SIMULATE_COLUMNS: &[&str] =
    &["dataset", "steps", "trial", "seed", "l2_norm", "l2_bound", "max_load", "empty_holders", "empirical_epsilon", "version"];

/// Per-trial allocation statistics. `l2_bound` uses the spec's `delta2` and
/// the stationary `sum_p2` bound; `empirical_epsilon` conditions on the
/// realized allocation at the first `epsilon0`.
pub fn simulate_table(spec: &ExperimentSpec, manifest: Option<&Manifest>) -> Result<Table> {
    spec.validate()?;
    let g = spec.source.load(manifest, spec.seed)?;
    let n = g.node_count();
    let deltas = spec.deltas_for(n);
    let mut table = Table::new("simulate", 1, SIMULATE_COLUMNS);
    table.meta = spec.echo(n);
    if spec.trials == 0 {
        return Ok(table);
    }
    let e0 = spec.epsilon0[0];
    for inputs in privacy_inputs(&g, Scenario::Stationary, &spec.steps, spec.seed)? {
        let bound = allocation_l2_bound(inputs.sum_p2, n, deltas.delta2);
        let rows: Vec<Vec<String>> = (0..spec.trials)
            .into_par_iter()
            .map(|trial| {
                let trace = simulate_trace(&g, inputs.steps, spec.seed, trial);
                let alloc = ReportAllocation::from_trace(&trace);
                vec![
                    spec.source.to_string(),
                    inputs.steps.to_string(),
                    trial.to_string(),
                    spec.seed.to_string(),
                    f(alloc.l2_norm()),
                    f(bound),
                    alloc.counts.iter().max().unwrap().to_string(),
                    alloc.empty_holders().to_string(),
                    f(crate::accountant::empirical_epsilon_from_allocation(&alloc.counts, e0, deltas.delta)),
                    VERSION.to_string(),
                ]
            })
            .collect();
        rows.into_iter().for_each(|r| table.push(r));
    }
    Ok(table)
}

pub const UTILITY_COLUMNS: &[&str] =
    &["epsilon0", "central_epsilon", "protocol", "squared_error", "seed", "dummies", "dimension", "steps", "version"];

/// Mean-estimation error against the central guarantee of each protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct UtilitySpec {
    pub dimension: usize,
    pub epsilon0: Vec<f64>,
    pub seeds: Vec<u64>,
    pub protocols: Vec<Protocol>,
    /// `None` runs for the mixing time.
    pub steps: Option<u64>,
}

pub fn utility_table(g: &Graph, source: &str, spec: &UtilitySpec, deltas: Option<DeltaParams>) -> Result<Table> {
    let n = g.node_count();
    let deltas = deltas.unwrap_or_else(|| DeltaParams::defaults_for(n));
    let steps = match spec.steps {
        Some(t) => Steps::Fixed(vec![t]),
        None => Steps::Mixing,
    };
    let inputs = privacy_inputs(g, Scenario::Stationary, &steps, 0)?[0];
    let mut table = Table::new("utility", 1, UTILITY_COLUMNS);
    table.meta = vec![
        ("dataset".into(), source.into()),
        ("dimension".into(), spec.dimension.to_string()),
        ("steps".into(), inputs.steps.to_string()),
        ("sum_p2".into(), f(inputs.sum_p2)),
        ("delta".into(), deltas.delta.to_string()),
        ("delta2".into(), deltas.delta2.to_string()),
        ("error".into(), "total squared L2 error of the mean".into()),
    ];
    for &protocol in &spec.protocols {
        for &e0 in &spec.epsilon0 {
            let central = amplify(protocol, Scenario::Stationary, &LocalPrivacyParams::pure(e0)?, n, inputs.sum_p2, 1.0, &deltas)?;
            for &seed in &spec.seeds {
                let trace = simulate_trace(g, inputs.steps, seed, 0);
                let est = mean_estimation_experiment(&trace, spec.dimension, e0, protocol, seed)?;
                table.push([
                    f(e0),
                    f(central.epsilon),
                    protocol_name(protocol).to_string(),
                    f(est.squared_error),
                    seed.to_string(),
                    est.dummies.to_string(),
                    spec.dimension.to_string(),
                    inputs.steps.to_string(),
                    VERSION.to_string(),
                ]);
            }
        }
    }
    Ok(table)
}

/// Seed-averaged `(central_epsilon, squared_error)` curve of one protocol
/// from a utility table, sorted by epsilon.
pub fn utility_curve(table: &Table, protocol: Protocol) -> Vec<(f64, f64)> {
    let (pc, ec, sc) = (table.column("protocol").unwrap(), table.column("central_epsilon").unwrap(), table.column("squared_error").unwrap());
    let mut groups: BTreeMap<String, (f64, f64, usize)> = BTreeMap::new();
    for r in table.rows.iter().filter(|r| r[pc] == protocol_name(protocol)) {
        let e = groups.entry(r[ec].clone()).or_insert((r[ec].parse().unwrap(), 0.0, 0));
        e.1 += r[sc].parse::<f64>().unwrap();
        e.2 += 1;
    }
    let mut curve: Vec<(f64, f64)> = groups.into_values().map(|(e, s, c)| (e, s / c as f64)).collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    curve
}

/// Compares two error curves at matched central epsilon: for every point of
/// `other` inside the epsilon range of `reference`, the reference error is
/// interpolated log-linearly. Returns `(epsilon, reference_error, other_error)`.
pub fn matched_errors(reference: &[(f64, f64)], other: &[(f64, f64)]) -> Vec<(f64, f64, f64)> {
    other
        .iter()
        .filter_map(|&(e, err)| {
            let i = reference.windows(2).position(|w| w[0].0 <= e && e <= w[1].0)?;
            let ((e0, y0), (e1, y1)) = (reference[i], reference[i + 1]);
            let w = if e1 > e0 { (e.ln() - e0.ln()) / (e1.ln() - e0.ln()) } else { 0.0 };
            Some((e, (y0.ln() + w * (y1.ln() - y0.ln())).exp(), err))
        })
        .collect()
}

pub const FIG3_COLUMNS: &[&str] = &["series", "steps", "epsilon", "sum_p2", "asymptote", "spectral_gap", "mixing_time"];

/// Epsilon of the all-reports protocol against walk length, stationary
/// finite-time bound. The asymptote uses `sum_p2 = sum pi^2`.
pub fn fig3_rows(table: &mut Table, name: &str, g: &Graph, epsilon0: f64, steps: &[u64], deltas: Option<DeltaParams>) -> Result<SpectralSummary> {
    let n = g.node_count();
    let deltas = deltas.unwrap_or_else(|| DeltaParams::defaults_for(n));
    let s = spectral_summary(g, &SpectralOptions::default())?;
    let pi = stationary_distribution(g)?;
    let lp = LocalPrivacyParams::pure(epsilon0)?;
    let asymptote = amplify(Protocol::All, Scenario::Stationary, &lp, n, pi.sum_squared(), 1.0, &deltas)?.epsilon;
    for &t in steps {
        let sp2 = sum_p_squared_bound(&pi, s.gap, t);
        let r = amplify(Protocol::All, Scenario::Stationary, &lp, n, sp2, 1.0, &deltas)?;
        table.push([
            name.to_string(),
            t.to_string(),
            f(r.epsilon),
            f(sp2),
            f(asymptote),
            f(s.gap),
            s.mixing_time.map_or(String::new(), |t| t.to_string()),
        ]);
    }
    Ok(s)
}

/// Roughly log-spaced integers from 1 to `max` inclusive.
pub fn log_grid(max: u64, points: usize) -> Vec<u64> {
    let mut grid: Vec<u64> = (0..points)
        .map(|i| ((max as f64).powf(i as f64 / (points - 1).max(1) as f64)).round() as u64)
        .collect();
    grid.push(max);
    grid.sort_unstable();
    grid.dedup();
    grid
}

pub const FIG4_COLUMNS: &[&str] = &["series", "seed", "steps", "epsilon", "sum_p2", "rho_star", "asymptote"];

/// Epsilon against walk length for a regular graph with the exact symmetric
/// distribution, for every `t` in `1..=max_steps`. Returns the epsilons.
pub fn fig4_rows(table: &mut Table, series: &str, seed: u64, g: &Graph, epsilon0: f64, max_steps: u64, deltas: Option<DeltaParams>) -> Result<Vec<f64>> {
    let n = g.node_count();
    let deltas = deltas.unwrap_or_else(|| DeltaParams::defaults_for(n));
    let lp = LocalPrivacyParams::pure(epsilon0)?;
    let asymptote = amplify(Protocol::All, Scenario::Symmetric, &lp, n, 1.0 / n as f64, 1.0, &deltas)?.epsilon;
    let steps: Vec<u64> = (1..=max_steps).collect();
    let mut eps = Vec::with_capacity(steps.len());
    for inputs in privacy_inputs(g, Scenario::Symmetric, &Steps::Fixed(steps), seed)? {
        let r = amplify(Protocol::All, Scenario::Symmetric, &lp, n, inputs.sum_p2, inputs.rho_star, &deltas)?;
        eps.push(r.epsilon);
        table.push([
            series.to_string(),
            seed.to_string(),
            inputs.steps.to_string(),
            f(r.epsilon),
            f(inputs.sum_p2),
            f(inputs.rho_star),
            f(asymptote),
        ]);
    }
    Ok(eps)
}

/// First step after which the series stays within `rel` of `asymptote`.
pub fn settling_step(eps: &[f64], asymptote: f64, rel: f64) -> Option<usize> {
    let last_out = eps.iter().rposition(|e| (e - asymptote).abs() > rel * asymptote);
    match last_out {
        None => Some(1),
        Some(i) if i + 1 < eps.len() => Some(i + 2),
        Some(_) => None,
    }
}

pub const FIG5_COLUMNS: &[&str] = &["series", "nodes", "sum_p2", "epsilon0", "epsilon", "delta"];

/// Epsilon against `epsilon0` for one population at its mixing time.
pub fn fig5_rows(table: &mut Table, name: &str, n: usize, sum_p2: f64, epsilon0: &[f64], deltas: Option<DeltaParams>) -> Result<()> {
    let deltas = deltas.unwrap_or_else(|| DeltaParams::defaults_for(n));
    for &e0 in epsilon0 {
        let r = amplify(Protocol::All, Scenario::Stationary, &LocalPrivacyParams::pure(e0)?, n, sum_p2, 1.0, &deltas)?;
        table.push([name.to_string(), n.to_string(), f(sum_p2), f(e0), f(r.epsilon), f(r.delta)]);
    }
    Ok(())
}

/// `sum_p2` at the mixing time from a population profile: `Gamma / n` plus
/// the `(1 - gap)^(2 log n / gap) ~ 1/n^2` deviation.
pub fn mixing_sum_p2(n: usize, gamma: f64) -> f64 {
    gamma / n as f64 + 1.0 / (n as f64 * n as f64)
}

pub const FIG7_COLUMNS: &[&str] = &["series", "nodes", "gamma", "protocol", "epsilon0", "epsilon"];

/// Stationary epsilon against `epsilon0` for synthetic `(n, Gamma)` pairs and
/// both protocols.
pub fn fig7_table(populations: &[(usize, f64)], epsilon0: &[f64]) -> Result<Table> {
    let mut table = Table::new("fig7", 1, FIG7_COLUMNS);
    table.meta = vec![("deltas".into(), "delta = delta2 = 1/n^2".into())];
    for &(n, gamma) in populations {
        let deltas = DeltaParams::defaults_for(n);
        for protocol in [Protocol::All, Protocol::Single] {
            let series = format!("n={n} gamma={gamma} {}", protocol_name(protocol));
            for &e0 in epsilon0 {
                let r = amplify(protocol, Scenario::Stationary, &LocalPrivacyParams::pure(e0)?, n, gamma / n as f64, 1.0, &deltas)?;
                table.push([series.clone(), n.to_string(), gamma.to_string(), protocol_name(protocol).into(), f(e0), f(r.epsilon)]);
            }
        }
    }
    Ok(table)
}

/// Evenly spaced grid `lo, lo + step, ..., hi`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig7,
    Fig8,
}

impl std::str::FromStr for Figure {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fig3" => Self::Fig3,
            "fig4" => Self::Fig4,
            "fig5" => Self::Fig5,
            "fig7" => Self::Fig7,
            "fig8" => Self::Fig8,
            _ => return Err(ExperimentError::InvalidSpec(format!("unknown figure '{s}'"))),
        })
    }
}

/// Knobs shared by the figure builders.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureOptions {
    /// Graphs or datasets; each figure has its own default list.
    pub sources: Vec<GraphSource>,
    pub epsilon0: Vec<f64>,
    pub deltas: Option<DeltaParams>,
    /// Walk-length limit (fig4) or fixed walk length (fig8).
    pub steps: Option<u64>,
    /// Number of seeds averaged (fig4, fig8).
    pub seeds: u64,
    pub seed: u64,
    /// Use [`REFERENCE_PROFILES`] for datasets that are not available (fig5).
    pub reference_profiles: bool,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self { sources: Vec::new(), epsilon0: Vec::new(), deltas: None, steps: None, seeds: 5, seed: 0, reference_profiles: false }
    }
}

fn sources_or(sources: &[GraphSource], default: &[&str]) -> Vec<GraphSource> {
    if sources.is_empty() {
        default.iter().map(|s| GraphSource::parse(s).expect("valid default")).collect()
    } else {
        sources.to_vec()
    }
}

/// Builds the data table of one figure.
pub fn figure_table(which: Figure, opts: &FigureOptions, manifest: Option<&Manifest>) -> Result<Table> {
    let eps_or = |default: Vec<f64>| if opts.epsilon0.is_empty() { default } else { opts.epsilon0.clone() };
    match which {
        Figure::Fig3 => {
            let mut table = Table::new("fig3", 1, FIG3_COLUMNS);
            let e0 = eps_or(vec![1.0])[0];
            table.meta = vec![("epsilon0".into(), e0.to_string())];
            for src in sources_or(&opts.sources, &["facebook", "twitch", "deezer"]) {
                let g = src.load(manifest, opts.seed)?;
                let s = spectral_summary(&g, &SpectralOptions::default())?;
                let mix = s.mixing_time.ok_or_else(|| ExperimentError::InvalidSpec(format!("{src} is bipartite")))?;
                let max = opts.steps.unwrap_or(3 * mix);
                fig3_rows(&mut table, &src.to_string(), &g, e0, &log_grid(max, 60), opts.deltas)?;
            }
            Ok(table)
        }
        Figure::Fig4 => {
            let mut table = Table::new("fig4", 1, FIG4_COLUMNS);
            let e0 = eps_or(vec![1.0])[0];
            table.meta = vec![("epsilon0".into(), e0.to_string())];
            for src in sources_or(&opts.sources, &["regular:4096:4", "regular:4096:8", "regular:4096:16"]) {
                for seed in opts.seed..opts.seed + opts.seeds {
                    let g = src.load(manifest, seed)?;
                    fig4_rows(&mut table, &src.to_string(), seed, &g, e0, opts.steps.unwrap_or(60), opts.deltas)?;
                }
            }
            Ok(table)
        }
        Figure::Fig5 => {
            let mut table = Table::new("fig5", 1, FIG5_COLUMNS);
            let grid = eps_or(linear_grid(0.1, 1.2, 12));
            let mut stand_ins = Vec::new();
            for src in sources_or(&opts.sources, &["facebook", "twitch", "deezer", "enron", "google"]) {
                let name = src.to_string();
                let profile = ReferenceProfile::get(&name).filter(|_| opts.reference_profiles);
                let (n, sum_p2) = match src.load(manifest, opts.seed) {
                    Ok(g) => {
                        let inputs = privacy_inputs(&g, Scenario::Stationary, &Steps::Mixing, opts.seed)?[0];
                        (g.node_count(), inputs.sum_p2)
                    }
                    Err(ExperimentError::MissingEntry(_) | ExperimentError::MissingFile { .. } | ExperimentError::NoManifest(_))
                        if profile.is_some() =>
                    {
                        let p = profile.unwrap();
                        stand_ins.push(name.clone());
                        (p.nodes, mixing_sum_p2(p.nodes, p.gamma))
                    }
                    Err(e) => return Err(e),
                };
                fig5_rows(&mut table, &name, n, sum_p2, &grid, opts.deltas)?;
            }
            table.meta.push(("reference_profiles".into(), stand_ins.join(";")));
            Ok(table)
        }
        Figure::Fig7 => fig7_table(
            &[(10_000, 1.0), (10_000, 10.0), (100_000, 1.0), (100_000, 10.0), (1_000_000, 1.0), (1_000_000, 10.0)],
            &eps_or(linear_grid(0.1, 2.0, 20)),
        ),
        Figure::Fig8 => {
            let src = sources_or(&opts.sources, &["twitch"]).remove(0);
            let g = src.load(manifest, opts.seed)?;
            let spec = UtilitySpec {
                dimension: 200,
                epsilon0: eps_or(vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0]),
                seeds: (opts.seed..opts.seed + opts.seeds).collect(),
                protocols: vec![Protocol::All, Protocol::Single],
                steps: opts.steps,
            };
            let mut table = utility_table(&g, &src.to_string(), &spec, opts.deltas)?;
            table.schema = "fig8";
            Ok(table)
        }
    }
}
