//! Indirect path encoding.
//!
//! A path is represented by one priority per node. Decoding starts at the
//! source and repeatedly moves to the eligible neighbor with the highest
//! priority until the destination is appended. Selected nodes get the
//! [`SELECTED`] sentinel in a working copy of the priorities so they cannot be
//! chosen twice, and a node-id window `M` stops the walk from drifting back
//! toward the source side of the id space.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;
use crate::topology::{Network, NodeId};

/// Working priority given to nodes already on the partial path.
pub const SELECTED: f64 = -999.0;

/// Per-node priorities. Doubles as particle position and GA chromosome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PriorityVector(pub Vec<f64>);

impl PriorityVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// I.i.d. uniform `[0, 1)` priorities drawn from `rng`.
    pub fn random_with<R: Rng>(pn: usize, rng: &mut R) -> Self {
        Self((0..pn).map(|_| rng.random::<f64>()).collect())
    }
}

/// Uniform `[0, 1)` priorities, deterministic per `(pn, seed)`.
pub fn random_priorities(pn: usize, seed: u64) -> PriorityVector {
    PriorityVector::random_with(pn, &mut seed::rng(seed, seed::PRIORITIES, 0))
}

/// A simple path from source to destination.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<NodeId>);

impl Path {
    /// Wraps a node sequence after checking it is a simple, edge-connected
    /// path of at least one link in `network`.
    pub fn new(network: &Network, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath(format!(
                "{} node(s), need at least 2",
                nodes.len()
            )));
        }
        let mut seen = vec![false; network.pn()];
        for &node in &nodes {
            network.check_node(node)?;
            if std::mem::replace(&mut seen[node], true) {
                return Err(Error::InvalidPath(format!("node {node} repeats")));
            }
        }
        if let Some(w) = nodes.windows(2).find(|w| !network.has_link(w[0], w[1])) {
            return Err(Error::InvalidPath(format!("no link {}-{}", w[0], w[1])));
        }
        Ok(Self(nodes))
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn source(&self) -> NodeId {
        self.0[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.0.last().expect("path is never empty")
    }

    /// Number of links.
    pub fn hop_count(&self) -> usize {
        self.0.len() - 1
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.0
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, node) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{node}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeParams {
    /// Backtracking window `M`.
    pub window: usize,
    /// Fresh priority draws allowed when initialization hits a dead end.
    pub max_retries: usize,
}

impl DecodeParams {
    pub const DEFAULT_RETRIES: usize = 50;

    pub fn new(window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidParams("decode window must be >= 1".into()));
        }
        Ok(Self {
            window,
            max_retries: Self::DEFAULT_RETRIES,
        })
    }

    /// Window equal to the base region size of `network`.
    pub fn for_network(network: &Network) -> Self {
        Self {
            window: network.layout().base_size(),
            max_retries: Self::DEFAULT_RETRIES,
        }
    }
}

/// Backtracking filter: when heading to a higher id the candidate may not sit
/// `window` or more ids below the terminal node, and symmetrically when
/// heading to a lower id.
pub fn heuristic_allows(
    source: NodeId,
    destination: NodeId,
    terminal: NodeId,
    candidate: NodeId,
    window: usize,
) -> bool {
    let diff = candidate as i64 - terminal as i64;
    let window = window as i64;
    if source < destination {
        diff > -window
    } else {
        diff < window
    }
}

/// Neighbors of the terminal node that may extend the partial path, in
/// ascending id order. The destination is exempt from the window check.
pub fn eligible_neighbors(
    network: &Network,
    working: &[f64],
    path_so_far: &[NodeId],
    source: NodeId,
    destination: NodeId,
    params: &DecodeParams,
) -> Vec<NodeId> {
    let terminal = *path_so_far.last().expect("partial path is never empty");
    network
        .neighbors(terminal)
        .filter(|&n| working[n] != SELECTED)
        .filter(|&n| {
            n == destination || heuristic_allows(source, destination, terminal, n, params.window)
        })
        .collect()
}

/// Why a priority vector failed to decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeadEnd {
    /// The partial path at the point no eligible neighbor was left.
    pub partial: Vec<NodeId>,
}

/// Greedy highest-priority walk from `source` to `destination`.
///
/// The outer `Result` reports invalid input; the inner one a dead end.
/// Ties on priority go to the lower node id. `priorities` is never modified.
pub fn decode(
    network: &Network,
    priorities: &PriorityVector,
    source: NodeId,
    destination: NodeId,
    params: &DecodeParams,
) -> Result<Result<Path, DeadEnd>> {
    network.check_node(source)?;
    network.check_node(destination)?;
    if source == destination {
        return Err(Error::SameEndpoints(source));
    }
    if priorities.len() != network.pn() {
        return Err(Error::PriorityLength {
            got: priorities.len(),
            expected: network.pn(),
        });
    }
    Ok(decode_unchecked(
        network,
        priorities.as_slice(),
        source,
        destination,
        params,
    ))
}

pub(crate) fn decode_unchecked(
    network: &Network,
    priorities: &[f64],
    source: NodeId,
    destination: NodeId,
    params: &DecodeParams,
) -> Result<Path, DeadEnd> {
    let mut working = priorities.to_vec();
    let mut path = vec![source];
    working[source] = SELECTED;
    while *path.last().unwrap() != destination {
        let next = eligible_neighbors(network, &working, &path, source, destination, params)
            .into_iter()
            .fold(None::<NodeId>, |best, n| match best {
                Some(b) if working[b] >= working[n] => Some(b),
                _ => Some(n),
            });
        match next {
            Some(node) => {
                working[node] = SELECTED;
                path.push(node);
            }
            None => return Err(DeadEnd { partial: path }),
        }
    }
    Ok(Path(path))
}

/// Draws fresh priority vectors until one decodes, giving up after
/// `params.max_retries` redraws.
pub(crate) fn draw_decodable<R: Rng>(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    params: &DecodeParams,
    rng: &mut R,
) -> Result<(PriorityVector, Path)> {
    for _ in 0..=params.max_retries {
        let priorities = PriorityVector::random_with(network.pn(), rng);
        if let Ok(path) =
            decode_unchecked(network, priorities.as_slice(), source, destination, params)
        {
            return Ok((priorities, path));
        }
    }
    Err(Error::NoPathFound {
        from: source,
        to: destination,
    })
}

/// Shared precondition checks for the optimizers.
pub(crate) fn check_endpoints(
    network: &Network,
    source: NodeId,
    destination: NodeId,
) -> Result<()> {
    network.check_node(source)?;
    network.check_node(destination)?;
    if source == destination {
        return Err(Error::SameEndpoints(source));
    }
    if !network.reachable(source)[destination] {
        return Err(Error::NoPathFound {
            from: source,
            to: destination,
        });
    }
    Ok(())
}
