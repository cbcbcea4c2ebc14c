#![allow(dead_code)]

use std::collections::VecDeque;

use swarmroute::{BandwidthRange, Network, NodeId, Path, TopologyConfig};

pub fn random_network(pn: usize, seed: u64) -> Network {
    Network::random(
        pn,
        seed,
        &TopologyConfig::default(),
        BandwidthRange::default(),
    )
    .unwrap()
}

/// Reachability computed from the raw link list.
pub fn bfs_reaches_all(net: &Network, from: NodeId) -> bool {
    let pn = net.pn();
    let mut adj = vec![Vec::new(); pn];
    for l in net.links() {
        adj[l.u].push(l.v);
        adj[l.v].push(l.u);
    }
    let mut seen = vec![false; pn];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(n) = queue.pop_front() {
        for &m in &adj[n] {
            if !seen[m] {
                seen[m] = true;
                queue.push_back(m);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Bandwidth of the first link over the summed bandwidth, looked up by a
/// linear scan of the link list.
pub fn fitness_oracle(net: &Network, nodes: &[NodeId]) -> f64 {
    let lookup = |a: NodeId, b: NodeId| {
        net.links()
            .iter()
            .find(|l| (l.u == a && l.v == b) || (l.u == b && l.v == a))
            .map(|l| l.bandwidth)
            .expect("link on path")
    };
    let bws: Vec<f64> = nodes.windows(2).map(|w| lookup(w[0], w[1])).collect();
    let mut sum = 0.0;
    for b in &bws {
        sum += b;
    }
    bws[0] / sum
}

pub fn assert_valid_path(net: &Network, path: &Path, source: NodeId, destination: NodeId) {
    let nodes = path.nodes();
    assert_eq!(nodes.first(), Some(&source));
    assert_eq!(nodes.last(), Some(&destination));
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), nodes.len(), "repeated node in {nodes:?}");
    for w in nodes.windows(2) {
        assert!(net.has_link(w[0], w[1]), "missing link {}-{}", w[0], w[1]);
    }
    assert_eq!(path.hop_count(), nodes.len() - 1);
}

/// Random simple path from `source` by a seeded random walk that stops at a
/// dead end or after `max_len` nodes. Returns `None` for walks of one node.
pub fn random_walk(
    net: &Network,
    source: NodeId,
    max_len: usize,
    seed: u64,
) -> Option<Vec<NodeId>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = vec![source];
    while nodes.len() < max_len {
        let last = *nodes.last().unwrap();
        let options: Vec<_> = net.neighbors(last).filter(|n| !nodes.contains(n)).collect();
        if options.is_empty() {
            break;
        }
        nodes.push(options[rng.random_range(0..options.len())]);
    }
    (nodes.len() > 1).then_some(nodes)
}
