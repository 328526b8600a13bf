//! Exact solvers: full enumeration and a depth-first branch and bound.
//!
//! Both return the same answer: the minimum-cost feasible placement, with
//! ties (costs within [`tie_tolerance`] of the optimum) broken towards the
//! lexicographically smallest bit vector, node 0 first.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CostBreakdown, CostModel, CostParams, Placement, SbaGraph};

/// Default enumeration guard.
pub const DEFAULT_MAX_NODES: usize = 30;

/// Masks are `u64`, so no limit can exceed this.
pub const HARD_MAX_NODES: usize = 63;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub placement: Placement,
    pub breakdown: CostBreakdown,
    pub feasible: bool,
    /// Number of full cost evaluations performed.
    pub evaluations: u64,
    /// Solver iterations; 0 for the exact solvers.
    pub iterations: u64,
    /// Seconds.
    pub wall_time: f64,
    pub solver_name: String,
}

impl SolveResult {
    pub fn total(&self) -> f64 {
        self.breakdown.total
    }

    /// Equality on everything but `wall_time`.
    pub fn same_outcome(&self, other: &SolveResult) -> bool {
        self.placement == other.placement
            && self.breakdown == other.breakdown
            && self.feasible == other.feasible
            && self.evaluations == other.evaluations
            && self.iterations == other.iterations
            && self.solver_name == other.solver_name
    }
}

/// Costs within this distance of the optimum count as ties.
pub fn tie_tolerance(optimum: f64) -> f64 {
    1e-9 * optimum.abs().max(1.0)
}

pub fn exact_solve(graph: &SbaGraph, params: &CostParams) -> Result<SolveResult> {
    exact_solve_with_limit(graph, params, DEFAULT_MAX_NODES)
}

pub fn exact_solve_bnb(graph: &SbaGraph, params: &CostParams) -> Result<SolveResult> {
    exact_solve_bnb_with_limit(graph, params, DEFAULT_MAX_NODES)
}

fn prepare<'a>(
    graph: &'a SbaGraph,
    params: &CostParams,
    max_nodes: usize,
) -> Result<CostModel<'a>> {
    let model = CostModel::new(graph, *params)?;
    let limit = max_nodes.min(HARD_MAX_NODES);
    if graph.node_count() > limit {
        return Err(Error::InstanceTooLarge {
            nodes: graph.node_count(),
            limit,
        });
    }
    Ok(model)
}

fn infeasible_result(model: &CostModel<'_>, name: &str, started: Instant) -> SolveResult {
    let placement = Placement::all_public(model.node_count());
    SolveResult {
        breakdown: model.breakdown(&placement),
        placement,
        feasible: false,
        evaluations: 1,
        iterations: 0,
        wall_time: started.elapsed().as_secs_f64(),
        solver_name: name.to_string(),
    }
}

/// Reverses the low `n` bits so that integer order equals lexicographic order
/// of the bit vector read from node 0.
fn lex_key(mask: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - n)
    }
}

/// Exhaustive enumeration over all `2^n` placements.
pub fn exact_solve_with_limit(
    graph: &SbaGraph,
    params: &CostParams,
    max_nodes: usize,
) -> Result<SolveResult> {
    let started = Instant::now();
    let model = prepare(graph, params, max_nodes)?;
    if model.infeasible_instance() {
        return Ok(infeasible_result(&model, "exact", started));
    }
    let n = graph.node_count();
    let count: u64 = 1 << n;
    let mut evaluations = 0u64;

    let mut optimum = f64::INFINITY;
    for mask in 0..count {
        if !model.feasible_mask(mask) {
            continue;
        }
        evaluations += 1;
        let total = model.breakdown_mask(mask).total;
        if total < optimum {
            optimum = total;
        }
    }

    let threshold = optimum + tie_tolerance(optimum);
    let mut winner: Option<(u64, u64)> = None;
    for mask in 0..count {
        if !model.feasible_mask(mask) {
            continue;
        }
        evaluations += 1;
        if model.breakdown_mask(mask).total <= threshold {
            let key = lex_key(mask, n);
            if winner.map_or(true, |(best_key, _)| key < best_key) {
                winner = Some((key, mask));
            }
        }
    }

    let (_, mask) = winner.expect("a feasible instance has at least one feasible placement");
    Ok(SolveResult {
        placement: Placement::from_mask(mask, n),
        breakdown: model.breakdown_mask(mask),
        feasible: true,
        evaluations,
        iterations: 0,
        wall_time: started.elapsed().as_secs_f64(),
        solver_name: "exact".to_string(),
    })
}

/// Depth-first branch and bound over nodes `0..n`, trying private before public.
///
/// The bound is `alpha * decided public hosting` plus the communication cost
/// of edges whose endpoints are both decided. A subtree is also cut when the
/// remaining hosting cannot reach `hq`.
pub fn exact_solve_bnb_with_limit(
    graph: &SbaGraph,
    params: &CostParams,
    max_nodes: usize,
) -> Result<SolveResult> {
    let started = Instant::now();
    let model = prepare(graph, params, max_nodes)?;
    if model.infeasible_instance() {
        return Ok(infeasible_result(&model, "exact-bnb", started));
    }
    let n = graph.node_count();
    let mut search = BnbSearch::new(&model);

    search.find_optimum(0, 0, 0.0, 0.0);
    let optimum = search.best;
    search.target = optimum + tie_tolerance(optimum);
    search.find_first(0, 0, 0.0, 0.0);

    let mask = search
        .found
        .expect("the optimum is reachable within its own tolerance");
    Ok(SolveResult {
        placement: Placement::from_mask(mask, n),
        breakdown: model.breakdown_mask(mask),
        feasible: true,
        evaluations: search.evaluations,
        iterations: 0,
        wall_time: started.elapsed().as_secs_f64(),
        solver_name: "exact-bnb".to_string(),
    })
}

struct BnbSearch<'m, 'g> {
    model: &'m CostModel<'g>,
    n: usize,
    hosting: Vec<f64>,
    /// `suffix_hosting[d]` = hosting of nodes `d..n`.
    suffix_hosting: Vec<f64>,
    /// Edges from node `d` to lower-indexed nodes, as `(other, rate)`.
    back_edges: Vec<Vec<(usize, f64)>>,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    hq_floor: f64,
    best: f64,
    target: f64,
    found: Option<u64>,
    evaluations: u64,
}

impl<'m, 'g> BnbSearch<'m, 'g> {
    fn new(model: &'m CostModel<'g>) -> Self {
        let graph = model.graph();
        let n = graph.node_count();
        let hosting: Vec<f64> = graph.nodes().iter().map(|node| node.hosting).collect();
        let mut suffix_hosting = vec![0.0; n + 1];
        for d in (0..n).rev() {
            suffix_hosting[d] = suffix_hosting[d + 1] + hosting[d];
        }
        let mut back_edges = vec![Vec::new(); n];
        for edge in graph.edges() {
            back_edges[edge.b].push((edge.a, edge.rate));
        }
        let params = model.params();
        // Rounding slack so a reachable threshold is never pruned.
        let hq_floor = params.hq - 1e-9 * params.hq.abs().max(1.0);
        BnbSearch {
            model,
            n,
            hosting,
            suffix_hosting,
            back_edges,
            alpha: params.alpha,
            beta1: params.beta1,
            beta2: params.beta2,
            hq_floor,
            best: f64::INFINITY,
            target: f64::INFINITY,
            found: None,
            evaluations: 0,
        }
    }

    /// Cost added by deciding node `d`, given decisions for `0..d` in `mask`.
    fn step_cost(&self, d: usize, public: bool, mask: u64) -> f64 {
        let mut cost = if public {
            self.alpha * self.hosting[d]
        } else {
            0.0
        };
        for &(other, rate) in &self.back_edges[d] {
            let other_public = mask >> other & 1 == 1;
            match (public, other_public) {
                (true, true) => cost += self.beta2 * rate,
                (true, false) | (false, true) => cost += self.beta1 * rate,
                (false, false) => {}
            }
        }
        cost
    }

    fn can_reach_hq(&self, d: usize, public_hosting: f64) -> bool {
        public_hosting + self.suffix_hosting[d] >= self.hq_floor
    }

    fn leaf_total(&mut self, mask: u64) -> Option<f64> {
        if !self.model.feasible_mask(mask) {
            return None;
        }
        self.evaluations += 1;
        Some(self.model.breakdown_mask(mask).total)
    }

    fn find_optimum(&mut self, d: usize, mask: u64, bound: f64, public_hosting: f64) {
        if d == self.n {
            if let Some(total) = self.leaf_total(mask) {
                if total < self.best {
                    self.best = total;
                }
            }
            return;
        }
        for public in [false, true] {
            let (child_mask, child_hosting) = self.child(d, mask, public, public_hosting);
            if !self.can_reach_hq(d + 1, child_hosting) {
                continue;
            }
            let child_bound = bound + self.step_cost(d, public, mask);
            if child_bound > self.best + tie_tolerance(self.best) {
                continue;
            }
            self.find_optimum(d + 1, child_mask, child_bound, child_hosting);
        }
    }

    fn find_first(&mut self, d: usize, mask: u64, bound: f64, public_hosting: f64) -> bool {
        if d == self.n {
            if let Some(total) = self.leaf_total(mask) {
                if total <= self.target {
                    self.found = Some(mask);
                    return true;
                }
            }
            return false;
        }
        for public in [false, true] {
            let (child_mask, child_hosting) = self.child(d, mask, public, public_hosting);
            if !self.can_reach_hq(d + 1, child_hosting) {
                continue;
            }
            let child_bound = bound + self.step_cost(d, public, mask);
            if child_bound > self.target + tie_tolerance(self.target) {
                continue;
            }
            if self.find_first(d + 1, child_mask, child_bound, child_hosting) {
                return true;
            }
        }
        false
    }

    fn child(&self, d: usize, mask: u64, public: bool, public_hosting: f64) -> (u64, f64) {
        if public {
            (mask | 1 << d, public_hosting + self.hosting[d])
        } else {
            (mask, public_hosting)
        }
    }
}
