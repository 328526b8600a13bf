//! Graph, placement, and pricing model plus the placement cost function.
//!
//! Only the public side of a placement is billed:
//!
//! * hosting `H = alpha * sum(h(s))` over public services,
//! * public communication `PC = beta2 * sum(c(e))` over edges with both ends public,
//! * hybrid communication `HC = beta1 * sum(c(e))` over edges with exactly one end public.
//!
//! Edges are undirected and each cut edge is charged once. Private hosting and
//! private-private traffic cost nothing.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ServiceNode {
    pub id: usize,
    pub hosting: f64,
}

/// Undirected communication edge. Stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommEdge {
    pub a: usize,
    pub b: usize,
    pub rate: f64,
}

impl CommEdge {
    pub fn new(a: usize, b: usize, rate: f64) -> Self {
        CommEdge {
            a: a.min(b),
            b: a.max(b),
            rate,
        }
    }
}

/// A service-based application graph. Node `d` has id `d`; node order is
/// significant because bit `d` of a [`Placement`] refers to it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SbaGraph {
    nodes: Vec<ServiceNode>,
    edges: Vec<CommEdge>,
}

impl SbaGraph {
    /// Builds a validated graph. Nodes may arrive in any order but their ids
    /// must be exactly `0..n`.
    pub fn new(mut nodes: Vec<ServiceNode>, edges: Vec<CommEdge>) -> Result<Self> {
        nodes.sort_by_key(|node| node.id);
        for (expected, node) in nodes.iter().enumerate() {
            if node.id != expected {
                return Err(Error::Validation(format!(
                    "node ids must be unique and contiguous from 0; expected id {expected}, found {}",
                    node.id
                )));
            }
            if !(node.hosting.is_finite() && node.hosting >= 0.0) {
                return Err(Error::Validation(format!(
                    "node {} has invalid hosting {}",
                    node.id, node.hosting
                )));
            }
        }

        let n = nodes.len();
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for edge in edges {
            if edge.a == edge.b {
                return Err(Error::Validation(format!("self-loop on node {}", edge.a)));
            }
            if edge.a >= n || edge.b >= n {
                return Err(Error::Validation(format!(
                    "edge ({}, {}) references a node outside 0..{n}",
                    edge.a, edge.b
                )));
            }
            if !(edge.rate.is_finite() && edge.rate >= 0.0) {
                return Err(Error::Validation(format!(
                    "edge ({}, {}) has invalid rate {}",
                    edge.a, edge.b, edge.rate
                )));
            }
            let edge = CommEdge::new(edge.a, edge.b, edge.rate);
            if !seen.insert((edge.a, edge.b)) {
                return Err(Error::Validation(format!(
                    "duplicate edge ({}, {})",
                    edge.a, edge.b
                )));
            }
            normalized.push(edge);
        }

        Ok(SbaGraph {
            nodes,
            edges: normalized,
        })
    }

    /// Convenience constructor: node `d` gets `hosting[d]`.
    pub fn from_parts(hosting: &[f64], edges: &[(usize, usize, f64)]) -> Result<Self> {
        let nodes = hosting
            .iter()
            .enumerate()
            .map(|(id, &hosting)| ServiceNode { id, hosting })
            .collect();
        let edges = edges
            .iter()
            .map(|&(a, b, rate)| CommEdge { a, b, rate })
            .collect();
        SbaGraph::new(nodes, edges)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[ServiceNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[CommEdge] {
        &self.edges
    }

    pub fn hosting(&self, id: usize) -> f64 {
        self.nodes[id].hosting
    }

    /// Sum of hosting over all services.
    pub fn total_hosting(&self) -> f64 {
        self.nodes.iter().map(|node| node.hosting).sum()
    }

    /// `100 * |E| / (n(n-1)/2)`.
    pub fn density_percent(&self) -> Result<f64> {
        let n = self.nodes.len();
        if n < 2 {
            return Err(Error::invalid(format!(
                "density needs at least 2 nodes, graph has {n}"
            )));
        }
        let possible = (n * (n - 1) / 2) as f64;
        Ok(100.0 * self.edges.len() as f64 / possible)
    }

    /// Absolute offload threshold for a fraction of the total hosting.
    pub fn hq_from_fraction(&self, fraction: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::invalid(format!(
                "hq fraction {fraction} outside [0, 1]"
            )));
        }
        Ok(fraction * self.total_hosting())
    }
}

/// Binary location vector: `true` (1) is public cloud, `false` (0) is private.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Placement(Vec<bool>);

impl Placement {
    pub fn new(bits: Vec<bool>) -> Self {
        Placement(bits)
    }

    pub fn all_private(n: usize) -> Self {
        Placement(vec![false; n])
    }

    pub fn all_public(n: usize) -> Self {
        Placement(vec![true; n])
    }

    /// Parses 0/1 integers; anything else is rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&bit| match bit {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::invalid(format!(
                    "placement entry {other} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Placement)
    }

    /// Bit `d` of `mask` becomes entry `d`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Placement((0..n).map(|d| mask >> d & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_public(&self, d: usize) -> bool {
        self.0[d]
    }

    pub fn set(&mut self, d: usize, public: bool) {
        self.0[d] = public;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn public_count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn to_u8(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }
}

/// Serialized as a bit string such as `"0110"`.
impl Serialize for Placement {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &bit in &self.0 {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Pricing coefficients and the minimum offload threshold (absolute hosting units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Cost per public hosting unit.
    pub alpha: f64,
    /// Cost per hybrid (cross-cloud) communication unit.
    pub beta1: f64,
    /// Cost per public-internal communication unit.
    pub beta2: f64,
    /// Minimum hosting units that must be placed in the public cloud.
    pub hq: f64,
}

impl CostParams {
    pub fn new(alpha: f64, beta1: f64, beta2: f64, hq: f64) -> Result<Self> {
        let params = CostParams {
            alpha,
            beta1,
            beta2,
            hq,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("hq", self.hq),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {value}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_hq(self, hq: f64) -> Self {
        CostParams { hq, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub hosting: f64,
    pub public_comm: f64,
    pub hybrid_comm: f64,
    pub total: f64,
}

/// A graph paired with its prices. Every solver goes through
/// [`CostModel::breakdown_with`], so a placement costs the same bits no matter
/// which solver produced it.
#[derive(Debug, Clone, Copy)]
pub struct CostModel<'a> {
    graph: &'a SbaGraph,
    params: CostParams,
}

impl<'a> CostModel<'a> {
    pub fn new(graph: &'a SbaGraph, params: CostParams) -> Result<Self> {
        params.validate()?;
        Ok(CostModel { graph, params })
    }

    pub fn graph(&self) -> &'a SbaGraph {
        self.graph
    }

    pub fn params(&self) -> &CostParams {
        &self.params
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn breakdown_with(&self, is_public: impl Fn(usize) -> bool) -> CostBreakdown {
        let public_hosting = self.public_hosting_with(&is_public);
        let mut public_rate = 0.0;
        let mut hybrid_rate = 0.0;
        for edge in &self.graph.edges {
            match (is_public(edge.a), is_public(edge.b)) {
                (true, true) => public_rate += edge.rate,
                (true, false) | (false, true) => hybrid_rate += edge.rate,
                (false, false) => {}
            }
        }
        let hosting = self.params.alpha * public_hosting;
        let public_comm = self.params.beta2 * public_rate;
        let hybrid_comm = self.params.beta1 * hybrid_rate;
        CostBreakdown {
            hosting,
            public_comm,
            hybrid_comm,
            total: hosting + public_comm + hybrid_comm,
        }
    }

    pub fn public_hosting_with(&self, is_public: impl Fn(usize) -> bool) -> f64 {
        let mut sum = 0.0;
        for node in &self.graph.nodes {
            if is_public(node.id) {
                sum += node.hosting;
            }
        }
        sum
    }

    pub fn breakdown(&self, placement: &Placement) -> CostBreakdown {
        self.breakdown_with(|d| placement.is_public(d))
    }

    pub fn breakdown_mask(&self, mask: u64) -> CostBreakdown {
        self.breakdown_with(|d| mask >> d & 1 == 1)
    }

    pub fn public_hosting(&self, placement: &Placement) -> f64 {
        self.public_hosting_with(|d| placement.is_public(d))
    }

    pub fn public_hosting_mask(&self, mask: u64) -> f64 {
        self.public_hosting_with(|d| mask >> d & 1 == 1)
    }

    pub fn feasible(&self, placement: &Placement) -> bool {
        self.public_hosting(placement) >= self.params.hq
    }

    pub fn feasible_mask(&self, mask: u64) -> bool {
        self.public_hosting_mask(mask) >= self.params.hq
    }

    /// True when even the all-public placement misses the threshold.
    pub fn infeasible_instance(&self) -> bool {
        self.public_hosting_with(|_| true) < self.params.hq
    }

    pub fn check_len(&self, placement: &Placement) -> Result<()> {
        if placement.len() != self.graph.node_count() {
            return Err(Error::invalid(format!(
                "placement has {} entries but the graph has {} nodes",
                placement.len(),
                self.graph.node_count()
            )));
        }
        Ok(())
    }
}

/// Cost breakdown of a placement. Does not check the offload constraint.
pub fn evaluate_cost(
    graph: &SbaGraph,
    placement: &Placement,
    params: &CostParams,
) -> Result<CostBreakdown> {
    let model = CostModel::new(graph, *params)?;
    model.check_len(placement)?;
    Ok(model.breakdown(placement))
}

/// Whether the public side of `placement` hosts at least `params.hq` units.
pub fn is_feasible(graph: &SbaGraph, placement: &Placement, params: &CostParams) -> Result<bool> {
    let model = CostModel::new(graph, *params)?;
    model.check_len(placement)?;
    Ok(model.feasible(placement))
}

pub fn total_hosting(graph: &SbaGraph) -> f64 {
    graph.total_hosting()
}

pub fn density_percent(graph: &SbaGraph) -> Result<f64> {
    graph.density_percent()
}

pub fn hq_from_fraction(graph: &SbaGraph, fraction: f64) -> Result<f64> {
    graph.hq_from_fraction(fraction)
}
