//! Synthetic graph families used by tests, examples and figure experiments.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, GraphError};

pub fn complete(n: usize) -> Graph {
    let n = n as u64;
    Graph::from_edges((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("n >= 2")
}

pub fn cycle(n: usize) -> Graph {
    let n = n as u64;
    Graph::from_edges((0..n).map(|u| (u, (u + 1) % n))).expect("n >= 3")
}

pub fn path(n: usize) -> Graph {
    let n = n as u64;
    Graph::from_edges((0..n - 1).map(|u| (u, u + 1))).expect("n >= 2")
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges((1..=leaves as u64).map(|v| (0, v))).expect("leaves >= 1")
}

pub fn petersen() -> Graph {
    let outer = (0..5u64).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5u64).map(|i| (i, i + 5));
    let inner = (0..5u64).map(|i| (i + 5, (i + 2) % 5 + 5));
    Graph::from_edges(outer.chain(spokes).chain(inner)).unwrap()
}

/// Uniform-ish random `k`-regular simple graph on `n` nodes.
///
/// Pairing model: `n * k` half-edges are matched at random; a candidate pair
/// that would create a self-loop or a repeated edge is rejected and redrawn,
/// and the whole matching restarts if it gets stuck.
pub fn random_regular<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Graph, GraphError> {
    assert!(k < n && (n * k).is_multiple_of(2), "need k < n and n*k even");
    'restart: loop {
        let mut stubs: Vec<u32> = (0..n as u32).flat_map(|u| std::iter::repeat_n(u, k)).collect();
        let mut edges: HashSet<(u32, u32)> = HashSet::with_capacity(n * k / 2);
        while !stubs.is_empty() {
            let mut accepted = false;
            for _ in 0..100 {
                let i = rng.random_range(0..stubs.len());
                let j = rng.random_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v {
                    continue;
                }
                let key = (u.min(v), u.max(v));
                if edges.contains(&key) {
                    continue;
                }
                edges.insert(key);
                let (hi, lo) = (i.max(j), i.min(j));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                accepted = true;
                break;
            }
            if !accepted {
                continue 'restart;
            }
        }
        let mut list: Vec<(u64, u64)> = edges.into_iter().map(|(u, v)| (u as u64, v as u64)).collect();
        list.sort_unstable();
        return Graph::from_edges(list);
    }
}

/// Preferential attachment: each new node attaches to `m` distinct existing
/// nodes chosen proportionally to degree. Connected and heavy-tailed.
pub fn barabasi_albert<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Graph {
    assert!(m >= 1 && n > m);
    let mut edges = Vec::with_capacity(n * m);
    let mut endpoints: Vec<u64> = Vec::with_capacity(2 * n * m);
    // seed clique on m + 1 nodes
    for u in 0..=m as u64 {
        for v in u + 1..=m as u64 {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for new in (m as u64 + 1)..n as u64 {
        let mut targets = HashSet::with_capacity(m);
        while targets.len() < m {
            targets.insert(endpoints[rng.random_range(0..endpoints.len())]);
        }
        let mut targets: Vec<u64> = targets.into_iter().collect();
        targets.sort_unstable();
        for t in targets {
            edges.push((t, new));
            endpoints.extend([t, new]);
        }
    }
    Graph::from_edges(edges).unwrap()
}

/// `communities` preferential-attachment graphs of `size` nodes each, joined
/// by `bridges` uniformly random edges between distinct communities plus a
/// ring through the communities so the result is connected. Few bridges give
/// a small spectral gap, the way social networks with tight clusters do.
pub fn community_graph<R: Rng + ?Sized>(communities: usize, size: usize, m: usize, bridges: usize, rng: &mut R) -> Graph {
    assert!(communities >= 2);
    let mut edges = Vec::new();
    for c in 0..communities {
        let offset = (c * size) as u64;
        let block = barabasi_albert(size, m, rng);
        for u in 0..size {
            for &v in block.neighbors(u) {
                if (u as u32) < v {
                    edges.push((offset + u as u64, offset + v as u64));
                }
            }
        }
        let next = ((c + 1) % communities * size) as u64;
        edges.push((offset, next + 1));
    }
    let total = communities * size;
    for _ in 0..bridges {
        loop {
            let u = rng.random_range(0..total);
            let v = rng.random_range(0..total);
            if u / size != v / size {
                edges.push((u as u64, v as u64));
                break;
            }
        }
    }
    Graph::from_edges(edges).unwrap()
}

/// Erdős–Rényi G(n, p). May be disconnected or empty.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for u in 0..n as u64 {
        edges.push((u, u));
        for v in u + 1..n as u64 {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(edges)
}

/// Connected induced subgraph on the first `size` nodes reached by a
/// breadth-first search from `root`, with neighbor order shuffled.
pub fn bfs_subsample<R: Rng + ?Sized>(g: &Graph, root: usize, size: usize, rng: &mut R) -> Graph {
    let mut seen = vec![false; g.node_count()];
    let mut order = Vec::with_capacity(size);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        if order.len() == size {
            break;
        }
        let mut nbrs: Vec<u32> = g.neighbors(u).to_vec();
        nbrs.shuffle(rng);
        for v in nbrs {
            if !seen[v as usize] {
                seen[v as usize] = true;
                queue.push_back(v as usize);
            }
        }
    }
    g.induced_subgraph(&order).expect("bfs ball has edges")
}
