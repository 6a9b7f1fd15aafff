//! Test-only oracles, independent of the library's BFS girth.

#![allow(dead_code)]

use cagekit::graph::SimpleGraph;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Shortest cycle length by enumerating simple paths from each vertex `s`
/// through vertices larger than `s` only, so every cycle is seen from its
/// smallest vertex.
pub fn exhaustive_girth(g: &SimpleGraph) -> Option<usize> {
    let n = g.order();
    let mut best = usize::MAX;
    let mut on_path = vec![false; n];
    for s in 0..n {
        on_path[s] = true;
        extend(g, s, s, 1, &mut on_path, &mut best);
        on_path[s] = false;
    }
    (best != usize::MAX).then_some(best)
}

fn extend(g: &SimpleGraph, s: usize, v: usize, len: usize, on_path: &mut [bool], best: &mut usize) {
    if len >= *best {
        return;
    }
    for &w in g.neighbors(v) {
        if w == s && len >= 3 {
            *best = (*best).min(len);
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            extend(g, s, w, len + 1, on_path, best);
            on_path[w] = false;
        }
    }
}

/// Erdős–Rényi graph with a seeded stream.
pub fn random_graph(seed: u64, max_n: usize) -> SimpleGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let p: f64 = rng.gen_range(0.05..0.45);
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, edges).expect("generated edges are simple")
}

pub fn petersen() -> SimpleGraph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    SimpleGraph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
}
