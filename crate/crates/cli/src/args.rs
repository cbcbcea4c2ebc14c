use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swarmroute::harness::ORACLE_CAP;
use swarmroute::{
    BandwidthMode, BandwidthRange, CrossoverKind, CrossoverSemantics, GaParams, MutationKind,
    OutputFormat, PsoParams, TopologyConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "swarmroute",
    version,
    about = "Bandwidth-fitness path search with PSO and GA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random region-based network and print it as JSON.
    Generate {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the particle swarm optimizer once.
    RunPso {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        ends: Endpoints,
        #[command(flatten)]
        pso: PsoArgs,
        /// Number of iterations.
        #[arg(long, default_value_t = 20)]
        iterations: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the genetic algorithm once.
    RunGa {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        ends: Endpoints,
        #[command(flatten)]
        ga: GaArgs,
        /// Number of generations.
        #[arg(long, default_value_t = 20)]
        iterations: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run PSO and GA side by side over a range of iteration budgets.
    Compare {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        ends: Endpoints,
        #[command(flatten)]
        pso: PsoArgs,
        #[command(flatten)]
        ga: GaArgs,
        /// Iteration budgets, e.g. `5-20` or `5,10,20`.
        #[arg(long, value_parser = parse_budgets, default_value = "5-20")]
        budgets: Budgets,
        /// Trial seeds per budget.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Reuse the `--seed` network for every budget and trial.
        #[arg(long)]
        fixed_topology: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustively search all simple paths for the best fitness.
    Oracle {
        #[command(flatten)]
        net: NetworkArgs,
        #[command(flatten)]
        ends: Endpoints,
        /// Largest network the search accepts.
        #[arg(long, default_value_t = ORACLE_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    /// Number of nodes.
    #[arg(long, default_value_t = 21)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub bandwidth_max: f64,
    #[arg(long, default_value_t = 0.6)]
    pub intra_density: f64,
    #[arg(long, default_value_t = 0.15)]
    pub inter_density: f64,
    /// Re-draw link bandwidths every iteration.
    #[arg(long)]
    pub dynamic_bandwidth: bool,
    /// Load the network from a JSON file written by `generate` instead of
    /// generating one.
    #[arg(long, conflicts_with = "nodes")]
    pub network: Option<PathBuf>,
}

impl NetworkArgs {
    pub fn range(&self) -> swarmroute::Result<BandwidthRange> {
        BandwidthRange::new(self.bandwidth_min, self.bandwidth_max)
    }

    pub fn mode(&self) -> swarmroute::Result<BandwidthMode> {
        Ok(if self.dynamic_bandwidth {
            BandwidthMode::Dynamic(self.range()?)
        } else {
            BandwidthMode::Static
        })
    }

    pub fn topology(&self) -> TopologyConfig {
        TopologyConfig {
            intra_density: self.intra_density,
            inter_density: self.inter_density,
            ensure_connected: true,
        }
    }
}

#[derive(Debug, Args)]
pub struct Endpoints {
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    /// Destination node; defaults to the highest node id.
    #[arg(long)]
    pub dest: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PsoArgs {
    #[arg(long, default_value_t = 40)]
    pub particles: usize,
    #[arg(long, default_value_t = 0.729)]
    pub inertia: f64,
    #[arg(long, default_value_t = 1.49445)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.49445)]
    pub c2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub v_max: f64,
}

impl PsoArgs {
    pub fn params(&self, iterations: usize, bandwidth_mode: BandwidthMode) -> PsoParams {
        PsoParams {
            n_particles: self.particles,
            inertia: self.inertia,
            cognitive: self.c1,
            social: self.c2,
            v_max: self.v_max,
            iterations,
            bandwidth_mode,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Crossover {
    #[value(name = "1pt")]
    OnePoint,
    #[value(name = "2pt")]
    TwoPoint,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mutation {
    Swap,
    Adjswap,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct GaArgs {
    #[arg(long, default_value_t = 40)]
    pub population: usize,
    #[arg(long, value_enum, default_value_t = Crossover::OnePoint)]
    pub crossover: Crossover,
    /// Exchange only the genes at the cut points instead of whole segments.
    #[arg(long)]
    pub single_gene_crossover: bool,
    #[arg(long, value_enum, default_value_t = Mutation::Swap)]
    pub mutation: Mutation,
    #[arg(long, default_value_t = 0.8)]
    pub crossover_prob: f64,
    #[arg(long, default_value_t = 0.1)]
    pub mutation_prob: f64,
    #[arg(long)]
    pub no_elitism: bool,
}

impl GaArgs {
    pub fn params(&self, kmax: usize, bandwidth_mode: BandwidthMode) -> GaParams {
        GaParams {
            pop_size: self.population,
            kmax,
            crossover_kind: match self.crossover {
                Crossover::OnePoint => CrossoverKind::OnePoint,
                Crossover::TwoPoint => CrossoverKind::TwoPoint,
            },
            crossover_semantics: if self.single_gene_crossover {
                CrossoverSemantics::SingleGene
            } else {
                CrossoverSemantics::Segment
            },
            crossover_prob: self.crossover_prob,
            mutation_kind: match self.mutation {
                Mutation::Swap => MutationKind::Swap,
                Mutation::Adjswap => MutationKind::AdjacentSwap,
            },
            mutation_prob: self.mutation_prob,
            elitism: !self.no_elitism,
            bandwidth_mode,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Budgets(pub Vec<usize>);

fn parse_budgets(text: &str) -> Result<Budgets, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad budget `{s}`: {e}"))
        };
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(format!("empty budget range `{part}`"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("no budgets given".into());
    }
    Ok(Budgets(out))
}
