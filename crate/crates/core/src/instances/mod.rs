//! Synthetic SBA instances and graph file formats.
//!
//! The ten named presets reproduce the node count, edge count and total
//! hosting of the benchmark graphs; the graphs themselves are drawn at random.

mod io;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use io::{
    format_edge_list, format_json, parse_edge_list, parse_json, read_graph, read_graph_as,
    write_graph, write_graph_as, GraphFormat,
};

use crate::error::{Error, Result};
use crate::model::{CommEdge, SbaGraph, ServiceNode};

pub const DEFAULT_RATE_MIN: f64 = 1.0;
pub const DEFAULT_RATE_MAX: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: String,
    pub nodes: usize,
    pub edges: usize,
    /// Integer hosting units, split so every node gets at least one.
    pub total_hosting: u64,
    #[serde(default = "default_rate_min")]
    pub rate_min: f64,
    #[serde(default = "default_rate_max")]
    pub rate_max: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_rate_min() -> f64 {
    DEFAULT_RATE_MIN
}

fn default_rate_max() -> f64 {
    DEFAULT_RATE_MAX
}

impl InstanceSpec {
    pub fn new(
        name: impl Into<String>,
        nodes: usize,
        edges: usize,
        total_hosting: u64,
        seed: u64,
    ) -> Self {
        InstanceSpec {
            name: name.into(),
            nodes,
            edges,
            total_hosting,
            rate_min: DEFAULT_RATE_MIN,
            rate_max: DEFAULT_RATE_MAX,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        InstanceSpec { seed, ..self }
    }

    pub fn max_edges(&self) -> usize {
        self.nodes * self.nodes.saturating_sub(1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.edges > self.max_edges() {
            return Err(Error::invalid(format!(
                "{}: {} edges exceed the {} possible on {} nodes",
                self.name,
                self.edges,
                self.max_edges(),
                self.nodes
            )));
        }
        if self.total_hosting < self.nodes as u64 {
            return Err(Error::invalid(format!(
                "{}: total hosting {} is below one unit per node ({})",
                self.name, self.total_hosting, self.nodes
            )));
        }
        if !(self.rate_min > 0.0 && self.rate_min <= self.rate_max && self.rate_max.is_finite()) {
            return Err(Error::invalid(format!(
                "{}: rate range [{}, {}] must satisfy 0 < min <= max",
                self.name, self.rate_min, self.rate_max
            )));
        }
        Ok(())
    }
}

/// `(name, nodes, edges, total hosting)` of the ten benchmark graphs.
const PRESETS: [(&str, usize, usize, u64); 10] = [
    ("G1", 20, 19, 469),
    ("G2", 17, 28, 521),
    ("G3", 18, 46, 418),
    ("G4", 11, 22, 254),
    ("G5", 16, 60, 413),
    ("G6", 14, 55, 332),
    ("G7", 13, 55, 319),
    ("G8", 19, 137, 570),
    ("G9", 15, 95, 363),
    ("G10", 12, 66, 297),
];

/// The ten preset specs `G1`..`G10`; preset `Gk` uses seed `k`.
pub fn preset_specs() -> Vec<InstanceSpec> {
    PRESETS
        .iter()
        .enumerate()
        .map(|(i, &(name, nodes, edges, hosting))| {
            InstanceSpec::new(name, nodes, edges, hosting, i as u64 + 1)
        })
        .collect()
}

/// Looks up a preset by name, case-insensitively.
pub fn preset(name: &str) -> Option<InstanceSpec> {
    preset_specs()
        .into_iter()
        .find(|spec| spec.name.eq_ignore_ascii_case(name))
}

/// Draws a simple undirected graph matching `spec`.
///
/// Edges are a uniform sample without replacement from all unordered pairs,
/// listed in lexicographic order. Every node starts with one hosting unit and
/// the remaining units go to uniformly random nodes one at a time. Rates are
/// uniform in `[rate_min, rate_max]`, rounded to one decimal.
pub fn generate_instance(spec: &InstanceSpec) -> Result<SbaGraph> {
    spec.validate()?;
    let n = spec.nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut pair_indices = index::sample(&mut rng, spec.max_edges(), spec.edges).into_vec();
    pair_indices.sort_unstable();
    let pairs: Vec<(usize, usize)> = pair_indices
        .into_iter()
        .map(|k| pair_from_index(k, n))
        .collect();

    let mut hosting = vec![1u64; n];
    for _ in 0..spec.total_hosting - n as u64 {
        hosting[rng.gen_range(0..n)] += 1;
    }

    let edges = pairs
        .into_iter()
        .map(|(a, b)| {
            let raw = rng.gen_range(spec.rate_min..=spec.rate_max);
            let rate = ((raw * 10.0).round() / 10.0).clamp(spec.rate_min, spec.rate_max);
            CommEdge { a, b, rate }
        })
        .collect();
    let nodes = hosting
        .into_iter()
        .enumerate()
        .map(|(id, h)| ServiceNode {
            id,
            hosting: h as f64,
        })
        .collect();
    SbaGraph::new(nodes, edges)
}

/// Maps `k` in `0..n(n-1)/2` to the `k`-th pair `(a, b)`, `a < b`, in
/// lexicographic order.
fn pair_from_index(mut k: usize, n: usize) -> (usize, usize) {
    let mut a = 0;
    loop {
        let row = n - a - 1;
        if k < row {
            return (a, a + 1 + k);
        }
        k -= row;
        a += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_table() {
        let specs = preset_specs();
        assert_eq!(specs.len(), 10);
        let g5 = preset("g5").unwrap();
        assert_eq!((g5.nodes, g5.edges, g5.total_hosting), (16, 60, 413));
        let g1 = preset("G1").unwrap();
        assert!(g1.edges < g1.nodes);
        assert!(preset("G11").is_none());
    }

    #[test]
    fn pair_enumeration_is_complete() {
        let n = 6;
        let pairs: Vec<_> = (0..15).map(|k| pair_from_index(k, n)).collect();
        let mut expected = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                expected.push((a, b));
            }
        }
        assert_eq!(pairs, expected);
    }

    #[test]
    fn generated_graph_respects_spec() {
        let spec = preset("G7").unwrap();
        let g = generate_instance(&spec).unwrap();
        assert_eq!(g.node_count(), 13);
        assert_eq!(g.edge_count(), 55);
        assert_eq!(g.total_hosting(), 319.0);
        assert_eq!((g.density_percent().unwrap() / 10.0).round() * 10.0, 70.0);
        for node in g.nodes() {
            assert!(node.hosting >= 1.0 && node.hosting.fract() == 0.0);
        }
        for edge in g.edges() {
            assert!((DEFAULT_RATE_MIN..=DEFAULT_RATE_MAX).contains(&edge.rate));
            assert!(((edge.rate * 10.0).round() - edge.rate * 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = InstanceSpec::new("x", 12, 30, 100, 42);
        assert_eq!(
            generate_instance(&spec).unwrap(),
            generate_instance(&spec).unwrap()
        );
        assert_ne!(
            generate_instance(&spec).unwrap(),
            generate_instance(&spec.clone().with_seed(43)).unwrap()
        );
    }

    #[test]
    fn spec_validation() {
        assert!(generate_instance(&InstanceSpec::new("x", 4, 7, 10, 0)).is_err());
        assert!(generate_instance(&InstanceSpec::new("x", 4, 2, 3, 0)).is_err());
        let bad_rates = InstanceSpec {
            rate_min: 0.0,
            ..InstanceSpec::new("x", 4, 2, 10, 0)
        };
        assert!(generate_instance(&bad_rates).is_err());
        let empty = generate_instance(&InstanceSpec::new("x", 0, 0, 0, 0)).unwrap();
        assert_eq!(empty.node_count(), 0);
    }
}
