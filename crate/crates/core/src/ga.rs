//! Generational genetic algorithm over priority-vector chromosomes.
//!
//! Chromosomes decode exactly like PSO positions and are scored by the same
//! [`fitness`](crate::pso::fitness). Positions in the operator functions are
//! 1-indexed, matching how cut points and mutation sites are usually written
//! down for these operators.

use std::time::Instant;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::{self, DecodeParams, Path, PriorityVector};
use crate::error::{Error, Result};
use crate::pso::{fitness, TracePoint};
use crate::seed;
use crate::topology::{perturb_bandwidths, BandwidthMode, Network, NodeId};

/// A GA individual; the same representation as a particle position.
pub type Chromosome = PriorityVector;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverKind {
    #[default]
    OnePoint,
    TwoPoint,
}

/// What a crossover exchanges between the parents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverSemantics {
    /// Exchange the whole tail (one point) or the whole `[j, k]` segment (two
    /// point).
    #[default]
    Segment,
    /// Exchange only the genes sitting at the cut points.
    SingleGene,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    #[default]
    Swap,
    AdjacentSwap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub pop_size: usize,
    /// Number of generations bred after the initial population.
    pub kmax: usize,
    pub crossover_kind: CrossoverKind,
    pub crossover_semantics: CrossoverSemantics,
    pub crossover_prob: f64,
    pub mutation_kind: MutationKind,
    pub mutation_prob: f64,
    /// Carry the best chromosome of each generation into the next unchanged.
    pub elitism: bool,
    pub bandwidth_mode: BandwidthMode,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            pop_size: 40,
            kmax: 20,
            crossover_kind: CrossoverKind::OnePoint,
            crossover_semantics: CrossoverSemantics::Segment,
            crossover_prob: 0.8,
            mutation_kind: MutationKind::Swap,
            mutation_prob: 0.1,
            elitism: true,
            bandwidth_mode: BandwidthMode::Static,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::InvalidParams("population must be at least 2".into()));
        }
        for (name, p) in [
            ("crossover", self.crossover_prob),
            ("mutation", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!(
                    "{name} probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

fn same_len<T>(p1: &[T], p2: &[T]) -> Result<usize> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch {
            left: p1.len(),
            right: p2.len(),
        });
    }
    Ok(p1.len())
}

/// Child 1 takes genes `1..k-1` from `p1` and `k..len` from `p2`; child 2 the
/// other way round. `k = 1` swaps the parents.
pub fn crossover_one_point<T: Clone>(p1: &[T], p2: &[T], k: usize) -> Result<(Vec<T>, Vec<T>)> {
    let len = same_len(p1, p2)?;
    if k < 1 || k > len {
        return Err(Error::InvalidIndex { index: k, len });
    }
    let cut = k - 1;
    let child = |a: &[T], b: &[T]| [&a[..cut], &b[cut..]].concat();
    Ok((child(p1, p2), child(p2, p1)))
}

/// Exchanges the inclusive segment `[j, k]` between the parents.
pub fn crossover_two_point<T: Clone>(
    p1: &[T],
    p2: &[T],
    j: usize,
    k: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let len = same_len(p1, p2)?;
    if j < 1 || j > k || k > len {
        return Err(Error::InvalidCutPoints { j, k, len });
    }
    let seg = j - 1..k;
    let child = |a: &[T], b: &[T]| {
        let mut c = a.to_vec();
        c[seg.clone()].clone_from_slice(&b[seg.clone()]);
        c
    };
    Ok((child(p1, p2), child(p2, p1)))
}

/// Exchanges only the genes at the given 1-indexed positions.
pub fn exchange_genes<T: Clone>(
    p1: &[T],
    p2: &[T],
    positions: &[usize],
) -> Result<(Vec<T>, Vec<T>)> {
    let len = same_len(p1, p2)?;
    let (mut c1, mut c2) = (p1.to_vec(), p2.to_vec());
    for &pos in positions {
        if pos < 1 || pos > len {
            return Err(Error::InvalidIndex { index: pos, len });
        }
        c1[pos - 1] = p2[pos - 1].clone();
        c2[pos - 1] = p1[pos - 1].clone();
    }
    Ok((c1, c2))
}

/// Exchanges the genes at positions `i < j`.
pub fn mutate_swap<T: Clone>(c: &[T], i: usize, j: usize) -> Result<Vec<T>> {
    let len = c.len();
    if i < 1 || i > len {
        return Err(Error::InvalidIndex { index: i, len });
    }
    if j <= i || j > len {
        return Err(Error::InvalidIndex { index: j, len });
    }
    let mut out = c.to_vec();
    out.swap(i - 1, j - 1);
    Ok(out)
}

/// Exchanges the genes at positions `j` and `j + 1`.
pub fn mutate_adjacent_swap<T: Clone>(c: &[T], j: usize) -> Result<Vec<T>> {
    let len = c.len();
    if j < 1 || j + 1 > len {
        return Err(Error::InvalidIndex { index: j, len });
    }
    let mut out = c.to_vec();
    out.swap(j - 1, j);
    Ok(out)
}

/// Roulette-wheel selection of `pairs` parent index pairs, with replacement.
/// All-zero fitness falls back to uniform selection.
pub fn select_parents(fitnesses: &[f64], pairs: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    select_parents_with(fitnesses, pairs, &mut seed::rng(seed, seed::SELECTION, 0))
}

pub(crate) fn select_parents_with<R: Rng>(
    fitnesses: &[f64],
    pairs: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    if fitnesses.is_empty() {
        return Err(Error::InvalidParams(
            "cannot select from an empty population".into(),
        ));
    }
    if let Some(f) = fitnesses.iter().find(|f| !(**f >= 0.0 && f.is_finite())) {
        return Err(Error::InvalidParams(format!(
            "fitness {f} is not a finite non-negative value"
        )));
    }
    if fitnesses.iter().all(|&f| f == 0.0) {
        let n = fitnesses.len();
        return Ok((0..pairs)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .collect());
    }
    let wheel = WeightedIndex::new(fitnesses)
        .map_err(|e| Error::InvalidParams(format!("roulette wheel: {e}")))?;
    Ok((0..pairs)
        .map(|_| (wheel.sample(rng), wheel.sample(rng)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub path: Path,
    /// Fitness of `path` on the network state of the last generation.
    pub fitness: f64,
    pub hops: usize,
    pub generations: usize,
    /// Best fitness of each generation, starting with the initial population.
    pub trace: Vec<TracePoint>,
    pub wall_ms: f64,
}

struct Scored {
    fitness: Vec<f64>,
    paths: Vec<Option<Path>>,
}

impl Scored {
    fn evaluate(
        network: &Network,
        population: &[Chromosome],
        source: NodeId,
        destination: NodeId,
        decode: &DecodeParams,
    ) -> Self {
        let mut fitness = Vec::with_capacity(population.len());
        let mut paths = Vec::with_capacity(population.len());
        for chromosome in population {
            match encoding::decode_unchecked(
                network,
                chromosome.as_slice(),
                source,
                destination,
                decode,
            ) {
                Ok(path) => {
                    fitness.push(crate::pso::fitness(network, &path).expect("decoded path"));
                    paths.push(Some(path));
                }
                Err(_) => {
                    fitness.push(0.0);
                    paths.push(None);
                }
            }
        }
        Self { fitness, paths }
    }

    fn best(&self) -> usize {
        let mut best = 0;
        for (i, &f) in self.fitness.iter().enumerate().skip(1) {
            if f > self.fitness[best] {
                best = i;
            }
        }
        best
    }
}

fn breed<R: Rng>(
    population: &[Chromosome],
    scored: &Scored,
    params: &GaParams,
    rng: &mut R,
) -> Vec<Chromosome> {
    let len = population[0].len();
    let mut next = Vec::with_capacity(params.pop_size);
    if params.elitism {
        next.push(population[scored.best()].clone());
    }
    let pairs = params.pop_size.div_ceil(2);
    let parents = select_parents_with(&scored.fitness, pairs, rng)
        .expect("fitness values are finite and non-negative");

    for (a, b) in parents {
        let (p1, p2) = (population[a].as_slice(), population[b].as_slice());
        let (c1, c2) = if rng.random_bool(params.crossover_prob) {
            crossover(p1, p2, len, params, rng)
        } else {
            (p1.to_vec(), p2.to_vec())
        };
        for child in [c1, c2] {
            let child = if rng.random_bool(params.mutation_prob) {
                mutate(&child, params.mutation_kind, rng)
            } else {
                child
            };
            next.push(PriorityVector(child));
        }
    }
    next.truncate(params.pop_size);
    next
}

fn crossover<R: Rng>(
    p1: &[f64],
    p2: &[f64],
    len: usize,
    params: &GaParams,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let children = match (params.crossover_kind, params.crossover_semantics) {
        (CrossoverKind::OnePoint, CrossoverSemantics::Segment) => {
            crossover_one_point(p1, p2, rng.random_range(1..=len))
        }
        (CrossoverKind::OnePoint, CrossoverSemantics::SingleGene) => {
            exchange_genes(p1, p2, &[rng.random_range(1..=len)])
        }
        (CrossoverKind::TwoPoint, semantics) => {
            let x = rng.random_range(1..=len);
            let y = rng.random_range(1..=len);
            let (j, k) = (x.min(y), x.max(y));
            match semantics {
                CrossoverSemantics::Segment => crossover_two_point(p1, p2, j, k),
                CrossoverSemantics::SingleGene => exchange_genes(p1, p2, &[j, k]),
            }
        }
    };
    children.expect("cut points drawn within range")
}

fn mutate<R: Rng>(child: &[f64], kind: MutationKind, rng: &mut R) -> Vec<f64> {
    let len = child.len();
    if len < 2 {
        return child.to_vec();
    }
    let mutated = match kind {
        MutationKind::Swap => {
            let i = rng.random_range(1..len);
            let j = rng.random_range(i + 1..=len);
            mutate_swap(child, i, j)
        }
        MutationKind::AdjacentSwap => mutate_adjacent_swap(child, rng.random_range(1..len)),
    };
    mutated.expect("mutation sites drawn within range")
}

/// Evolves `params.kmax` generations from a random initial population whose
/// members all decode, and reports the best path seen.
pub fn run_ga(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    params: &GaParams,
    seed: u64,
) -> Result<GaResult> {
    params.validate()?;
    encoding::check_endpoints(network, source, destination)?;
    let started = Instant::now();
    let decode = DecodeParams::for_network(network);

    let mut rng = seed::rng(seed, seed::GA_INIT, 0);
    let mut population = Vec::with_capacity(params.pop_size);
    for _ in 0..params.pop_size {
        let (genes, _) = encoding::draw_decodable(network, source, destination, &decode, &mut rng)?;
        population.push(genes);
    }

    let mut scored = Scored::evaluate(network, &population, source, destination, &decode);
    let first = scored.best();
    let mut best_fitness = scored.fitness[first];
    let mut best_path = scored.paths[first]
        .clone()
        .expect("initial chromosomes decode");
    let mut trace = vec![TracePoint {
        iter: 0,
        gbest: best_fitness,
    }];

    for generation in 1..=params.kmax {
        let mut rng = seed::rng(seed, seed::GA_GENERATION, generation as u64);
        population = breed(&population, &scored, params, &mut rng);
        let state = perturb_bandwidths(network, seed, generation as u64, params.bandwidth_mode);
        scored = Scored::evaluate(&state, &population, source, destination, &decode);
        let top = scored.best();
        trace.push(TracePoint {
            iter: generation,
            gbest: scored.fitness[top],
        });
        if scored.fitness[top] > best_fitness {
            if let Some(path) = &scored.paths[top] {
                best_fitness = scored.fitness[top];
                best_path = path.clone();
            }
        }
    }
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let last = perturb_bandwidths(network, seed, params.kmax as u64, params.bandwidth_mode);
    Ok(GaResult {
        fitness: fitness(&last, &best_path)?,
        hops: best_path.hop_count(),
        path: best_path,
        generations: params.kmax,
        trace,
        wall_ms,
    })
}
