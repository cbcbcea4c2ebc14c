//! Particle swarm search over priority vectors.
//!
//! Each particle's position is a [`PriorityVector`]; its fitness is the
//! bandwidth fitness of the path the position decodes to. The swarm keeps
//! per-particle and global bests and moves with the usual inertia, cognitive
//! and social terms.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::{self, DecodeParams, Path, PriorityVector};
use crate::error::{Error, Result};
use crate::seed;
use crate::topology::{perturb_bandwidths, BandwidthMode, Network, NodeId};

/// Bandwidth of the first link of `path` divided by the sum of bandwidths of
/// all its links. Lies in `(0, 1]`, and is exactly 1 for a single link.
pub fn fitness(network: &Network, path: &Path) -> Result<f64> {
    let nodes = path.nodes();
    if nodes.len() < 2 {
        return Err(Error::InvalidPath("path has no links".into()));
    }
    let mut first = None;
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let bw = network
            .bandwidth(w[0], w[1])
            .ok_or_else(|| Error::InvalidPath(format!("no link {}-{}", w[0], w[1])))?;
        first.get_or_insert(bw);
        total += bw;
    }
    Ok(first.unwrap() / total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub n_particles: usize,
    /// Inertia weight `w`.
    pub inertia: f64,
    /// Cognitive coefficient `c1`.
    pub cognitive: f64,
    /// Social coefficient `c2`.
    pub social: f64,
    pub v_max: f64,
    pub iterations: usize,
    pub bandwidth_mode: BandwidthMode,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            n_particles: 40,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            v_max: 1.0,
            iterations: 20,
            bandwidth_mode: BandwidthMode::Static,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_particles < 2 {
            return Err(Error::InvalidParams("need at least 2 particles".into()));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidParams("need at least 1 iteration".into()));
        }
        if self.v_max.is_nan() || self.v_max <= 0.0 {
            return Err(Error::InvalidParams("v_max must be positive".into()));
        }
        if ![self.inertia, self.cognitive, self.social]
            .iter()
            .all(|c| c.is_finite())
        {
            return Err(Error::InvalidParams(
                "PSO coefficients must be finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Particle {
    pub position: PriorityVector,
    pub velocity: Vec<f64>,
    /// Fitness of `position` when it was last scored; 0 for a dead end.
    pub fitness: f64,
    pub pbest_position: PriorityVector,
    pub pbest_fitness: f64,
    pub pbest_path: Path,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub gbest_position: PriorityVector,
    pub gbest_fitness: f64,
    pub gbest_path: Path,
    pub params: PsoParams,
    pub decode: DecodeParams,
    pub source: NodeId,
    pub destination: NodeId,
    /// Number of completed steps.
    pub iteration: u64,
}

/// Builds a swarm of particles whose random initial positions all decode.
/// Velocities start at zero and every personal best is the initial position.
pub fn init_swarm(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    params: &PsoParams,
    seed: u64,
) -> Result<Swarm> {
    params.validate()?;
    encoding::check_endpoints(network, source, destination)?;
    let decode = DecodeParams::for_network(network);
    let mut rng = seed::rng(seed, seed::PSO_INIT, 0);
    let pn = network.pn();

    let mut particles = Vec::with_capacity(params.n_particles);
    for _ in 0..params.n_particles {
        let (position, path) =
            encoding::draw_decodable(network, source, destination, &decode, &mut rng)?;
        let fit = fitness(network, &path)?;
        particles.push(Particle {
            velocity: vec![0.0; pn],
            fitness: fit,
            pbest_position: position.clone(),
            pbest_fitness: fit,
            pbest_path: path,
            position,
        });
    }

    let best = best_index(&particles);
    Ok(Swarm {
        gbest_position: particles[best].pbest_position.clone(),
        gbest_fitness: particles[best].pbest_fitness,
        gbest_path: particles[best].pbest_path.clone(),
        particles,
        params: params.clone(),
        decode,
        source,
        destination,
        iteration: 0,
    })
}

/// First particle holding the highest personal best.
fn best_index(particles: &[Particle]) -> usize {
    let mut best = 0;
    for (i, p) in particles.iter().enumerate().skip(1) {
        if p.pbest_fitness > particles[best].pbest_fitness {
            best = i;
        }
    }
    best
}

impl Swarm {
    /// One iteration: score current positions (against the re-drawn network
    /// in dynamic mode), refresh personal and global bests, then move.
    pub fn step(&mut self, network: &Network, seed: u64) {
        self.iteration += 1;
        let state = perturb_bandwidths(network, seed, self.iteration, self.params.bandwidth_mode);

        for particle in &mut self.particles {
            let decoded = encoding::decode_unchecked(
                &state,
                particle.position.as_slice(),
                self.source,
                self.destination,
                &self.decode,
            );
            particle.fitness = 0.0;
            if let Ok(path) = decoded {
                let fit = fitness(&state, &path).expect("decoded paths use existing links");
                particle.fitness = fit;
                if fit > particle.pbest_fitness {
                    particle.pbest_fitness = fit;
                    particle.pbest_position = particle.position.clone();
                    particle.pbest_path = path;
                }
            }
        }

        let best = best_index(&self.particles);
        if self.particles[best].pbest_fitness > self.gbest_fitness {
            let p = &self.particles[best];
            self.gbest_fitness = p.pbest_fitness;
            self.gbest_position = p.pbest_position.clone();
            self.gbest_path = p.pbest_path.clone();
        }

        let PsoParams {
            inertia: w,
            cognitive: c1,
            social: c2,
            v_max,
            ..
        } = self.params;
        let mut rng = seed::rng(seed, seed::PSO_STEP, self.iteration);
        let gbest = self.gbest_position.as_slice();
        for particle in &mut self.particles {
            let x = &mut particle.position.0;
            let pbest = particle.pbest_position.as_slice();
            for d in 0..x.len() {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let v = w * particle.velocity[d]
                    + c1 * r1 * (pbest[d] - x[d])
                    + c2 * r2 * (gbest[d] - x[d]);
                let v = v.clamp(-v_max, v_max);
                particle.velocity[d] = v;
                x[d] += v;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iter: usize,
    pub gbest: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsoResult {
    pub path: Path,
    /// Fitness of `path` on the network state after the last iteration.
    pub fitness: f64,
    pub hops: usize,
    pub iterations: usize,
    pub trace: Vec<TracePoint>,
    pub wall_ms: f64,
}

/// Runs the swarm for `params.iterations` steps and reports the global best.
pub fn run_pso(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    params: &PsoParams,
    seed: u64,
) -> Result<PsoResult> {
    let started = Instant::now();
    let mut swarm = init_swarm(network, source, destination, params, seed)?;
    let mut trace = Vec::with_capacity(params.iterations);
    for _ in 0..params.iterations {
        swarm.step(network, seed);
        trace.push(TracePoint {
            iter: swarm.iteration as usize,
            gbest: swarm.gbest_fitness,
        });
    }
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let last = perturb_bandwidths(network, seed, swarm.iteration, params.bandwidth_mode);
    let fitness = fitness(&last, &swarm.gbest_path)?;
    Ok(PsoResult {
        hops: swarm.gbest_path.hop_count(),
        path: swarm.gbest_path,
        fitness,
        iterations: params.iterations,
        trace,
        wall_ms,
    })
}
