//! Brute-force reference implementation, written straight from the cost
//! definition and kept independent of the library's evaluation path.
#![allow(dead_code)]

use hcplace::model::{CostParams, SbaGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (hosting, public_comm, hybrid_comm, total) for bits given as 0/1.
pub fn brute_cost(graph: &SbaGraph, bits: &[u8], params: &CostParams) -> (f64, f64, f64, f64) {
    let mut hosted = 0.0;
    for (i, node) in graph.nodes().iter().enumerate() {
        hosted += node.hosting * bits[i] as f64;
    }
    let mut public = 0.0;
    let mut hybrid = 0.0;
    for e in graph.edges() {
        let (x, y) = (bits[e.a] as f64, bits[e.b] as f64);
        public += e.rate * x * y;
        // Ordered-pair reading x(1-y) + y(1-x) charges a cut edge exactly once.
        hybrid += e.rate * (x * (1.0 - y) + y * (1.0 - x));
    }
    let h = params.alpha * hosted;
    let pc = params.beta2 * public;
    let hc = params.beta1 * hybrid;
    (h, pc, hc, h + pc + hc)
}

pub fn brute_public_hosting(graph: &SbaGraph, bits: &[u8]) -> f64 {
    graph
        .nodes()
        .iter()
        .zip(bits)
        .map(|(n, &b)| n.hosting * b as f64)
        .sum()
}

/// All bit vectors of length n in lexicographic order (node 0 most significant).
pub fn lex_vectors(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u64..1 << n).map(move |k| (0..n).map(|d| (k >> (n - 1 - d) & 1) as u8).collect())
}

/// Minimum feasible total and the lexicographically first vector within 1e-9
/// (relative) of it. `None` when nothing is feasible.
pub fn brute_optimum(graph: &SbaGraph, params: &CostParams) -> Option<(f64, Vec<u8>)> {
    let n = graph.node_count();
    let mut best = f64::INFINITY;
    for bits in lex_vectors(n) {
        if brute_public_hosting(graph, &bits) >= params.hq {
            best = best.min(brute_cost(graph, &bits, params).3);
        }
    }
    if best.is_infinite() {
        return None;
    }
    let tol = 1e-9 * best.abs().max(1.0);
    lex_vectors(n)
        .find(|bits| {
            brute_public_hosting(graph, bits) >= params.hq
                && brute_cost(graph, bits, params).3 <= best + tol
        })
        .map(|bits| (best, bits))
}

/// Random simple graph with integer hosting in 1..=50 and one-decimal rates.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64) -> SbaGraph {
    let hosting: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=50) as f64).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((a, b, (rng.gen_range(10..=500) as f64) / 10.0));
            }
        }
    }
    SbaGraph::from_parts(&hosting, &edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn default_params(hq: f64) -> CostParams {
    CostParams::new(40.0, 20.0, 10.0, hq).unwrap()
}
