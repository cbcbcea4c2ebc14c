//! Region-based random networks, priority-encoded paths, and two optimizers
//! (particle swarm and genetic algorithm) that search for the path with the
//! best bandwidth fitness between two nodes.
//!
//! ```
//! use swarmroute::{run_pso, BandwidthRange, Network, PsoParams, TopologyConfig};
//!
//! let net = Network::random(21, 7, &TopologyConfig::default(), BandwidthRange::default())?;
//! let result = run_pso(&net, 0, 20, &PsoParams::default(), 7)?;
//! assert_eq!(result.hops, result.path.hop_count());
//! # Ok::<(), swarmroute::Error>(())
//! ```

pub mod encoding;
pub mod error;
pub mod ga;
pub mod harness;
pub mod pso;
mod seed;
pub mod topology;

pub use encoding::{
    decode, eligible_neighbors, heuristic_allows, random_priorities, DeadEnd, DecodeParams, Path,
    PriorityVector,
};
pub use error::{Error, Result};
pub use ga::{
    crossover_one_point, crossover_two_point, mutate_adjacent_swap, mutate_swap, run_ga,
    select_parents, Chromosome, CrossoverKind, CrossoverSemantics, GaParams, GaResult,
    MutationKind,
};
pub use harness::{
    brute_force_best, compare, emit, render, ExperimentConfig, IterationRecord, OutputFormat,
    Report,
};
pub use pso::{fitness, init_swarm, run_pso, Particle, PsoParams, PsoResult, Swarm, TracePoint};
pub use seed::derive_seed;
pub use topology::{
    assign_bandwidths, generate_topology, partition_regions, perturb_bandwidths, BandwidthMode,
    BandwidthRange, Link, Network, NodeId, RegionLayout, TopologyConfig,
};
