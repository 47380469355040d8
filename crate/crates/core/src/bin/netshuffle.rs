use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netshuffle::experiments::{
    amplify_table, figure_table, graph_stats, simulate_table, utility_table, ExperimentError, ExperimentSpec, Figure,
    FigureOptions, GraphSource, Manifest, Steps, Table, UtilitySpec,
};
use netshuffle::{DeltaParams, Protocol, Scenario};

#[derive(Parser)]
#[command(name = "netshuffle", version, about = "Network shuffling: simulate, analyze and account")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, Gamma, connectivity and spectral summary of a graph's largest component
    GraphStats {
        #[command(flatten)]
        common: Common,
        /// Skip the spectral columns
        #[arg(long)]
        no_spectral: bool,
    },
    /// Data behind one figure: fig3, fig4, fig5, fig7 or fig8
    Figure {
        which: String,
        #[command(flatten)]
        common: Common,
        /// Fall back to published (n, Gamma) profiles for missing datasets
        #[arg(long)]
        reference_profiles: bool,
    },
    /// Central (epsilon, delta) guarantee
    Amplify {
        #[command(flatten)]
        common: Common,
    },
    /// Per-trial report allocations
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Private mean-estimation error against central epsilon
    Utility {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        dimension: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Stationary,
    Symmetric,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    All,
    Single,
}

#[derive(Args)]
struct Common {
    /// Manifest entry or generator spec (regular:n:k, ba:n:m, cycle:n, complete:n, petersen); repeatable
    #[arg(long)]
    dataset: Vec<String>,
    /// File mapping dataset names to edge lists
    #[arg(long, env = "NETSHUFFLE_MANIFEST")]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "stationary")]
    scenario: ScenarioArg,
    #[arg(long, value_enum, default_value = "all")]
    protocol: ProtocolArg,
    /// Local epsilon; comma-separated grid allowed
    #[arg(long, value_delimiter = ',')]
    eps0: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    delta0: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    delta2: Option<f64>,
    /// Walk length(s); defaults to the mixing time
    #[arg(long, value_delimiter = ',')]
    steps: Vec<u64>,
    /// Trials (simulate) or seeds averaged (figures, utility)
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn manifest(&self) -> Result<Option<Manifest>, ExperimentError> {
        self.manifest.as_ref().map(Manifest::load).transpose()
    }

    fn sources(&self) -> Result<Vec<GraphSource>, ExperimentError> {
        self.dataset.iter().map(|d| GraphSource::parse(d)).collect()
    }

    fn deltas(&self) -> Result<Option<DeltaParams>, ExperimentError> {
        match (self.delta, self.delta1, self.delta2) {
            (None, None, None) => Ok(None),
            (Some(delta), delta1, delta2) => Ok(Some(DeltaParams { delta, delta1, delta2: delta2.unwrap_or(delta) })),
            _ => Err(ExperimentError::InvalidSpec("--delta1/--delta2 need --delta".into())),
        }
    }

    fn spec(&self) -> Result<ExperimentSpec, ExperimentError> {
        let source = match self.sources()?.as_slice() {
            [one] => one.clone(),
            _ => return Err(ExperimentError::InvalidSpec("exactly one --dataset is required".into())),
        };
        let mut spec = ExperimentSpec::new(source);
        spec.scenario = match self.scenario {
            ScenarioArg::Stationary => Scenario::Stationary,
            ScenarioArg::Symmetric => Scenario::Symmetric,
        };
        spec.protocol = self.protocol();
        if !self.eps0.is_empty() {
            spec.epsilon0 = self.eps0.clone();
        }
        spec.delta0 = self.delta0;
        spec.deltas = self.deltas()?;
        if !self.steps.is_empty() {
            spec.steps = Steps::Fixed(self.steps.clone());
        }
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        spec.seed = self.seed;
        spec.validate()?;
        Ok(spec)
    }

    fn protocol(&self) -> Protocol {
        match self.protocol {
            ProtocolArg::All => Protocol::All,
            ProtocolArg::Single => Protocol::Single,
        }
    }

    fn emit(&self, table: &Table) -> Result<(), ExperimentError> {
        match &self.out {
            Some(path) => table.write(path),
            None => {
                print!("{}", table.to_csv()?);
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), ExperimentError> {
    match cli.command {
        Command::GraphStats { common, no_spectral } => {
            let table = graph_stats(&common.spec()?, common.manifest()?.as_ref(), !no_spectral)?;
            common.emit(&table)
        }
        Command::Figure { which, common, reference_profiles } => {
            let opts = FigureOptions {
                sources: common.sources()?,
                epsilon0: common.eps0.clone(),
                deltas: common.deltas()?,
                steps: common.steps.first().copied(),
                seeds: common.trials.unwrap_or(if which == "fig8" { 20 } else { 5 }),
                seed: common.seed,
                reference_profiles,
            };
            let table = figure_table(which.parse::<Figure>()?, &opts, common.manifest()?.as_ref())?;
            common.emit(&table)
        }
        Command::Amplify { common } => common.emit(&amplify_table(&common.spec()?, common.manifest()?.as_ref())?),
        Command::Simulate { common } => common.emit(&simulate_table(&common.spec()?, common.manifest()?.as_ref())?),
        Command::Utility { common, dimension } => {
            let spec = common.spec()?;
            let g = spec.source.load(common.manifest()?.as_ref(), spec.seed)?;
            let utility = UtilitySpec {
                dimension,
                epsilon0: spec.epsilon0.clone(),
                seeds: (spec.seed..spec.seed + common.trials.unwrap_or(20)).collect(),
                protocols: vec![spec.protocol],
                steps: common.steps.first().copied(),
            };
            common.emit(&utility_table(&g, &spec.source.to_string(), &utility, spec.deltas)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
