//! Region-partitioned random networks.
//!
//! Node ids are contiguous `0..pn` and split into `a = floor(log2 pn)`
//! regions. Every region holds `floor(pn / a)` nodes except the last one,
//! which also absorbs the `pn mod a` remainder. Links are undirected and carry
//! a bandwidth; the optimizers maximize a bandwidth ratio along a path.

use std::borrow::Cow;
use std::collections::VecDeque;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

pub type NodeId = usize;

/// How the node ids of a network are split into regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionLayout {
    pn: usize,
    a: usize,
    sizes: Vec<usize>,
    ranges: Vec<Range<NodeId>>,
}

impl RegionLayout {
    /// Node count.
    pub fn pn(&self) -> usize {
        self.pn
    }

    /// Region count.
    pub fn regions(&self) -> usize {
        self.a
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn ranges(&self) -> &[Range<NodeId>] {
        &self.ranges
    }

    /// Nodes per region, not counting the remainder held by the last region.
    pub fn base_size(&self) -> usize {
        self.pn / self.a
    }

    pub fn region_of(&self, node: NodeId) -> Option<usize> {
        if node >= self.pn {
            return None;
        }
        Some((node / self.base_size()).min(self.a - 1))
    }
}

/// Splits `pn` nodes into regions.
///
/// The region count is `floor(log2 pn)`. For `pn = 21` that gives four regions
/// of sizes `[5, 5, 5, 6]`. Exact powers of two take the lower exponent, so 32
/// nodes form 5 regions.
pub fn partition_regions(pn: usize) -> Result<RegionLayout> {
    if pn < 4 {
        return Err(Error::InvalidNodeCount { pn });
    }
    let a = pn.ilog2() as usize;
    let base = pn / a;
    let mut sizes = vec![base; a];
    sizes[a - 1] += pn % a;
    let mut ranges = Vec::with_capacity(a);
    let mut start = 0;
    for &size in &sizes {
        ranges.push(start..start + size);
        start += size;
    }
    Ok(RegionLayout {
        pn,
        a,
        sizes,
        ranges,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub u: NodeId,
    pub v: NodeId,
    pub bandwidth: f64,
}

/// Closed interval bandwidths are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandwidthRange {
    min: f64,
    max: f64,
}

impl BandwidthRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && min <= max && max.is_finite()) {
            return Err(Error::InvalidBandwidthRange { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn contains(&self, bandwidth: f64) -> bool {
        (self.min..=self.max).contains(&bandwidth)
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        rng.random_range(self.min..=self.max)
    }
}

impl Default for BandwidthRange {
    fn default() -> Self {
        Self {
            min: 1.0,
            max: 100.0,
        }
    }
}

/// Whether link bandwidths stay fixed during an optimizer run or are re-drawn
/// once per iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthMode {
    #[default]
    Static,
    Dynamic(BandwidthRange),
}

/// Link probabilities used by [`generate_topology`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyConfig {
    /// Probability that two nodes of the same region are linked.
    pub intra_density: f64,
    /// Probability that two nodes of different regions are linked.
    pub inter_density: f64,
    /// Lay a random spanning tree before the density pass.
    pub ensure_connected: bool,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        Self {
            intra_density: 0.6,
            inter_density: 0.15,
            ensure_connected: true,
        }
    }
}

impl TopologyConfig {
    fn validate(&self) -> Result<()> {
        for value in [self.intra_density, self.inter_density] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidDensity { value });
            }
        }
        Ok(())
    }
}

/// An undirected region-based network with per-link bandwidths.
///
/// Links are kept sorted by `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "NetworkJson", try_from = "NetworkJson")]
pub struct Network {
    layout: RegionLayout,
    links: Vec<Link>,
    seed: u64,
    /// Per node, `(neighbor, link index)` sorted by neighbor.
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl Network {
    /// Builds a network from an explicit link list. Endpoints are normalized
    /// so that `u < v`.
    pub fn from_links(pn: usize, links: impl IntoIterator<Item = Link>, seed: u64) -> Result<Self> {
        let layout = partition_regions(pn)?;
        let mut normalized = Vec::new();
        for link in links {
            let (u, v) = (link.u.min(link.v), link.u.max(link.v));
            if v >= pn {
                return Err(Error::InvalidNode { node: v, pn });
            }
            if u == v {
                return Err(Error::InvalidPath(format!("self-loop on node {u}")));
            }
            if !(link.bandwidth > 0.0 && link.bandwidth.is_finite()) {
                return Err(Error::InvalidBandwidthRange {
                    min: link.bandwidth,
                    max: link.bandwidth,
                });
            }
            normalized.push(Link {
                u,
                v,
                bandwidth: link.bandwidth,
            });
        }
        normalized.sort_by_key(|l| (l.u, l.v));
        if let Some(w) = normalized
            .windows(2)
            .find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v))
        {
            return Err(Error::InvalidPath(format!(
                "duplicate link {}-{}",
                w[0].u, w[0].v
            )));
        }
        Ok(Self::assemble(layout, normalized, seed))
    }

    fn assemble(layout: RegionLayout, links: Vec<Link>, seed: u64) -> Self {
        let mut adjacency = vec![Vec::new(); layout.pn];
        for (idx, link) in links.iter().enumerate() {
            adjacency[link.u].push((link.v, idx));
            adjacency[link.v].push((link.u, idx));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            layout,
            links,
            seed,
            adjacency,
        }
    }

    /// Random network with bandwidths drawn from `range`, both derived from
    /// `seed`.
    pub fn random(
        pn: usize,
        seed: u64,
        config: &TopologyConfig,
        range: BandwidthRange,
    ) -> Result<Self> {
        let net = generate_topology(pn, seed, config)?;
        Ok(assign_bandwidths(&net, seed, range))
    }

    pub fn pn(&self) -> usize {
        self.layout.pn
    }

    pub fn layout(&self) -> &RegionLayout {
        &self.layout
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[node].iter().map(|&(n, _)| n)
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    /// Bandwidth of the link between `u` and `v`, if there is one.
    pub fn bandwidth(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|pos| self.links[list[pos].1].bandwidth)
    }

    pub fn has_link(&self, u: NodeId, v: NodeId) -> bool {
        self.bandwidth(u, v).is_some()
    }

    /// Breadth-first reachability from `from`.
    pub fn reachable(&self, from: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.pn()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(node) = queue.pop_front() {
            for next in self.neighbors(node) {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    pub(crate) fn check_node(&self, node: NodeId) -> Result<()> {
        if node >= self.pn() {
            return Err(Error::InvalidNode {
                node,
                pn: self.pn(),
            });
        }
        Ok(())
    }

    fn with_bandwidths(&self, mut draw: impl FnMut() -> f64) -> Self {
        let links = self
            .links
            .iter()
            .map(|l| Link {
                bandwidth: draw(),
                ..*l
            })
            .collect();
        Self {
            links,
            ..self.clone()
        }
    }
}

/// Generates the link structure of a random region-based network. Every link
/// gets unit bandwidth; use [`assign_bandwidths`] afterwards.
///
/// Same-region pairs are linked with probability `intra_density`, cross-region
/// pairs with `inter_density`. With `ensure_connected` a random spanning tree
/// is laid first.
pub fn generate_topology(pn: usize, seed: u64, config: &TopologyConfig) -> Result<Network> {
    config.validate()?;
    let layout = partition_regions(pn)?;
    let mut rng = seed::rng(seed, seed::TOPOLOGY, 0);
    let mut linked = vec![false; pn * pn];
    let mut link = |u: NodeId, v: NodeId| linked[u.min(v) * pn + u.max(v)] = true;

    if config.ensure_connected {
        let mut order: Vec<NodeId> = (0..pn).collect();
        order.shuffle(&mut rng);
        for i in 1..pn {
            let parent = order[rng.random_range(0..i)];
            let child = order[i];
            link(parent, child);
        }
    }

    for u in 0..pn {
        for v in u + 1..pn {
            let p = if layout.region_of(u) == layout.region_of(v) {
                config.intra_density
            } else {
                config.inter_density
            };
            // Always draw, so the stream does not depend on the spanning tree.
            let hit = rng.random::<f64>() < p;
            if hit {
                link(u, v);
            }
        }
    }

    let links = (0..pn)
        .flat_map(|u| (u + 1..pn).map(move |v| (u, v)))
        .filter(|&(u, v)| linked[u * pn + v])
        .map(|(u, v)| Link {
            u,
            v,
            bandwidth: 1.0,
        })
        .collect();
    Ok(Network::assemble(layout, links, seed))
}

/// Draws every link bandwidth uniformly from `range`.
pub fn assign_bandwidths(network: &Network, seed: u64, range: BandwidthRange) -> Network {
    let mut rng = seed::rng(seed, seed::BANDWIDTH, 0);
    network.with_bandwidths(|| range.sample(&mut rng))
}

/// Network state seen by an optimizer at `iteration`.
///
/// Static mode returns the input untouched. Dynamic mode re-draws every link
/// bandwidth from a stream keyed by `(seed, iteration)`.
pub fn perturb_bandwidths(
    network: &Network,
    seed: u64,
    iteration: u64,
    mode: BandwidthMode,
) -> Cow<'_, Network> {
    match mode {
        BandwidthMode::Static => Cow::Borrowed(network),
        BandwidthMode::Dynamic(range) => {
            let mut rng = seed::rng(seed, seed::PERTURB, iteration);
            Cow::Owned(network.with_bandwidths(|| range.sample(&mut rng)))
        }
    }
}

/// On-disk shape of a [`Network`].
#[derive(Serialize, Deserialize)]
struct NetworkJson {
    pn: usize,
    a: usize,
    sizes: Vec<usize>,
    links: Vec<Link>,
    seed: u64,
}

impl From<Network> for NetworkJson {
    fn from(net: Network) -> Self {
        Self {
            pn: net.layout.pn,
            a: net.layout.a,
            sizes: net.layout.sizes,
            links: net.links,
            seed: net.seed,
        }
    }
}

impl TryFrom<NetworkJson> for Network {
    type Error = Error;

    fn try_from(json: NetworkJson) -> Result<Self> {
        let net = Network::from_links(json.pn, json.links, json.seed)?;
        if net.layout.a != json.a || net.layout.sizes != json.sizes {
            return Err(Error::InvalidParams(format!(
                "region layout {:?} does not match {} nodes",
                json.sizes, json.pn
            )));
        }
        Ok(net)
    }
}
