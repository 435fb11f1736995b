//! Seeded random graph generators for sweeps and property tests.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{DirectedGraph, Edge};

/// A Hamiltonian cycle through a random vertex order plus up to `extra`
/// further random edges. Strongly connected by construction.
pub fn random_strongly_connected(n: usize, extra: usize, seed: u64) -> DirectedGraph {
    assert!(n >= 1, "graph needs a vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut edges: Vec<Edge> = Vec::new();
    if n > 1 {
        for k in 0..n {
            edges.push(Edge::new(order[k], order[(k + 1) % n]));
        }
    }
    let mut free: Vec<Edge> = (1..=n)
        .flat_map(|a| (1..=n).map(move |b| Edge::new(a, b)))
        .filter(|e| e.from != e.to && !edges.contains(e))
        .collect();
    free.shuffle(&mut rng);
    edges.extend(free.into_iter().take(extra));
    DirectedGraph::new(n, edges).expect("generated edges are valid")
}

/// Inductively strongly connected graph from vertex 1 with exactly
/// `2n - 2` edges: each new vertex gets one edge from and one edge to the
/// vertices already placed. Labels `2..=n` are shuffled.
pub fn random_isc_graph(n: usize, seed: u64) -> DirectedGraph {
    assert!(n >= 1, "graph needs a vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (2..=n).collect();
    order.shuffle(&mut rng);
    order.insert(0, 1);
    let mut edges = Vec::with_capacity(2 * n - 2);
    for k in 1..n {
        let v = order[k];
        let from = order[rng.gen_range(0..k)];
        let to = order[rng.gen_range(0..k)];
        edges.push(Edge::new(from, v));
        edges.push(Edge::new(v, to));
    }
    DirectedGraph::new(n, edges).expect("generated edges are valid")
}
