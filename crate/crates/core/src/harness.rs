//! PSO vs GA comparison runs, the exhaustive reference search, and report
//! output.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::encoding::{self, Path};
use crate::error::{Error, Result};
use crate::ga::{run_ga, GaParams};
use crate::pso::{run_pso, PsoParams};
use crate::seed;
use crate::topology::{BandwidthMode, BandwidthRange, Network, NodeId, TopologyConfig};

/// Default node cap for [`brute_force_best`].
pub const ORACLE_CAP: usize = 12;

pub const CSV_HEADER: &str = "budget,trial,pso_fitness,ga_fitness,pso_hops,ga_hops,pso_ms,ga_ms";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub pn: usize,
    pub seed: u64,
    pub source: NodeId,
    pub destination: NodeId,
    /// Iteration budgets; each one sets both the PSO iteration count and the
    /// GA generation count.
    pub budgets: Vec<usize>,
    pub trials: usize,
    pub pso: PsoParams,
    pub ga: GaParams,
    pub bandwidth_mode: BandwidthMode,
    pub bandwidth_range: BandwidthRange,
    pub topology: TopologyConfig,
    /// Use one network (from `seed`) for every budget and trial instead of
    /// drawing a new one per `(budget, trial)`.
    pub fixed_topology: bool,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pn: 21,
            seed: 0,
            source: 0,
            destination: 20,
            budgets: (5..=20).collect(),
            trials: 1,
            pso: PsoParams::default(),
            ga: GaParams::default(),
            bandwidth_mode: BandwidthMode::Static,
            bandwidth_range: BandwidthRange::default(),
            topology: TopologyConfig::default(),
            fixed_topology: false,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budgets.is_empty() || self.budgets.contains(&0) {
            return Err(Error::InvalidParams(
                "budgets must be non-empty and all >= 1".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("need at least one trial".into()));
        }
        if self.source == self.destination {
            return Err(Error::SameEndpoints(self.source));
        }
        for node in [self.source, self.destination] {
            if node >= self.pn {
                return Err(Error::InvalidNode { node, pn: self.pn });
            }
        }
        self.pso.validate()?;
        self.ga.validate()
    }

    /// Seed shared by both optimizers for one `(budget, trial)` cell.
    pub fn trial_seed(&self, budget: usize, trial: usize) -> u64 {
        seed::derive_seed(
            seed::derive_seed(self.seed, seed::TRIAL, budget as u64),
            seed::TRIAL,
            trial as u64,
        )
    }

    pub fn network_seed(&self, budget: usize, trial: usize) -> u64 {
        if self.fixed_topology {
            self.seed
        } else {
            self.trial_seed(budget, trial)
        }
    }

    pub fn network(&self, budget: usize, trial: usize) -> Result<Network> {
        Network::random(
            self.pn,
            self.network_seed(budget, trial),
            &self.topology,
            self.bandwidth_range,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub budget: usize,
    pub trial: usize,
    pub pso_fitness: f64,
    pub ga_fitness: f64,
    pub pso_hops: usize,
    pub ga_hops: usize,
    pub pso_ms: f64,
    pub ga_ms: f64,
    pub pso_path: Path,
    pub ga_path: Path,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub pso_mean_fitness: f64,
    pub pso_median_fitness: f64,
    pub ga_mean_fitness: f64,
    pub ga_median_fitness: f64,
    pub pso_mean_ms: f64,
    pub pso_median_ms: f64,
    pub ga_mean_ms: f64,
    pub ga_median_ms: f64,
}

impl Aggregates {
    pub fn from_records(records: &[IterationRecord]) -> Self {
        let col = |f: fn(&IterationRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
        let pso_fit = col(|r| r.pso_fitness);
        let ga_fit = col(|r| r.ga_fitness);
        let pso_ms = col(|r| r.pso_ms);
        let ga_ms = col(|r| r.ga_ms);
        Self {
            pso_mean_fitness: mean(&pso_fit),
            pso_median_fitness: median(&pso_fit),
            ga_mean_fitness: mean(&ga_fit),
            ga_median_fitness: median(&ga_fit),
            pso_mean_ms: mean(&pso_ms),
            pso_median_ms: median(&pso_ms),
            ga_mean_ms: mean(&ga_ms),
            ga_median_ms: median(&ga_ms),
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    }
}

/// Directional PSO-vs-GA claims evaluated on the records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub pso_mean_fitness_ge_ga: bool,
    pub pso_mean_ms_le_ga: bool,
}

impl Verdicts {
    pub fn from_aggregates(agg: &Aggregates) -> Self {
        Self {
            pso_mean_fitness_ge_ga: agg.pso_mean_fitness >= agg.ga_mean_fitness,
            pso_mean_ms_le_ga: agg.pso_mean_ms <= agg.ga_mean_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub records: Vec<IterationRecord>,
    pub aggregates: Aggregates,
    pub verdicts: Verdicts,
}

/// Runs PSO and GA for every budget and trial on the same network and seed.
/// Records come out ordered by `(budget, trial)`.
pub fn compare(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let fixed = if config.fixed_topology {
        Some(config.network(0, 0)?)
    } else {
        None
    };

    let mut records = Vec::with_capacity(config.budgets.len() * config.trials);
    for &budget in &config.budgets {
        for trial in 0..config.trials {
            let owned;
            let network = match &fixed {
                Some(net) => net,
                None => {
                    owned = config.network(budget, trial)?;
                    &owned
                }
            };
            let seed = config.trial_seed(budget, trial);
            let pso = PsoParams {
                iterations: budget,
                bandwidth_mode: config.bandwidth_mode,
                ..config.pso.clone()
            };
            let ga = GaParams {
                kmax: budget,
                bandwidth_mode: config.bandwidth_mode,
                ..config.ga.clone()
            };
            let p = run_pso(network, config.source, config.destination, &pso, seed)?;
            let g = run_ga(network, config.source, config.destination, &ga, seed)?;
            records.push(IterationRecord {
                budget,
                trial,
                pso_fitness: p.fitness,
                ga_fitness: g.fitness,
                pso_hops: p.hops,
                ga_hops: g.hops,
                pso_ms: p.wall_ms,
                ga_ms: g.wall_ms,
                pso_path: p.path,
                ga_path: g.path,
            });
        }
    }

    let aggregates = Aggregates::from_records(&records);
    Ok(Report {
        config: config.clone(),
        verdicts: Verdicts::from_aggregates(&aggregates),
        aggregates,
        records,
    })
}

/// Exhaustive depth-first search over all simple paths, returning the one with
/// the highest bandwidth fitness. Ties go to the lexicographically smallest
/// node sequence.
pub fn brute_force_best(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    cap: usize,
) -> Result<(Path, f64)> {
    if network.pn() > cap {
        return Err(Error::OracleTooLarge {
            pn: network.pn(),
            cap,
        });
    }
    encoding::check_endpoints(network, source, destination)?;

    struct Search<'a> {
        network: &'a Network,
        destination: NodeId,
        on_path: Vec<bool>,
        stack: Vec<NodeId>,
        best: Option<(Vec<NodeId>, f64)>,
    }

    impl Search<'_> {
        fn walk(&mut self, first: f64, total: f64) {
            let node = *self.stack.last().unwrap();
            if node == self.destination {
                let fit = first / total;
                if self.best.as_ref().is_none_or(|(_, best)| fit > *best) {
                    self.best = Some((self.stack.clone(), fit));
                }
                return;
            }
            let next: Vec<_> = self.network.neighbors(node).collect();
            for n in next {
                if self.on_path[n] {
                    continue;
                }
                let bw = self.network.bandwidth(node, n).unwrap();
                let first = if self.stack.len() == 1 { bw } else { first };
                self.on_path[n] = true;
                self.stack.push(n);
                self.walk(first, total + bw);
                self.stack.pop();
                self.on_path[n] = false;
            }
        }
    }

    let mut search = Search {
        network,
        destination,
        on_path: vec![false; network.pn()],
        stack: vec![source],
        best: None,
    };
    search.on_path[source] = true;
    search.walk(0.0, 0.0);
    let (nodes, fit) = search.best.ok_or(Error::NoPathFound {
        from: source,
        to: destination,
    })?;
    Ok((Path::new(network, nodes)?, fit))
}

/// Renders a report as CSV (one row per record) or pretty JSON.
pub fn render(report: &Report, format: OutputFormat) -> Result<String> {
    if report.records.is_empty() {
        return Err(Error::EmptyReport);
    }
    match format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            Ok(text)
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in &report.records {
                writeln!(
                    out,
                    "{},{},{:.6},{:.6},{},{},{:.3},{:.3}",
                    r.budget,
                    r.trial,
                    r.pso_fitness,
                    r.ga_fitness,
                    r.pso_hops,
                    r.ga_hops,
                    r.pso_ms,
                    r.ga_ms
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}

/// Writes the rendered report to `target` and returns the byte count.
pub fn emit(report: &Report, format: OutputFormat, target: &FsPath) -> Result<usize> {
    let text = render(report, format)?;
    std::fs::write(target, &text).map_err(|source| Error::Io {
        path: target.to_path_buf(),
        source,
    })?;
    Ok(text.len())
}
