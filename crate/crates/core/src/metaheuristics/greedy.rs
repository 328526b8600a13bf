use std::time::Instant;

use super::ensure_feasible_instance;
use crate::error::Result;
use crate::exact::SolveResult;
use crate::model::{CostModel, CostParams, Placement, SbaGraph};

/// Starts all-private and repeatedly moves to public the service whose move
/// raises the total least (ties: lowest id), until the threshold is met.
/// Uses at most `n^2` cost evaluations.
pub fn greedy_solve(graph: &SbaGraph, params: &CostParams) -> Result<SolveResult> {
    let started = Instant::now();
    let model = CostModel::new(graph, *params)?;
    ensure_feasible_instance(&model)?;
    let n = graph.node_count();

    let mut placement = Placement::all_private(n);
    let mut evaluations = 0u64;
    let mut flips = 0u64;
    while !model.feasible(&placement) {
        let mut best: Option<(usize, f64)> = None;
        for d in 0..n {
            if placement.is_public(d) {
                continue;
            }
            placement.set(d, true);
            let total = model.breakdown(&placement).total;
            placement.set(d, false);
            evaluations += 1;
            if best.map_or(true, |(_, best_total)| total < best_total) {
                best = Some((d, total));
            }
        }
        let (d, _) =
            best.expect("an infeasible placement on a feasible instance has a private node");
        placement.set(d, true);
        flips += 1;
    }

    Ok(SolveResult {
        breakdown: model.breakdown(&placement),
        feasible: true,
        placement,
        evaluations,
        iterations: flips,
        wall_time: started.elapsed().as_secs_f64(),
        solver_name: "greedy".to_string(),
    })
}
