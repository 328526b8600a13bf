//! Heuristic solvers over the shared cost model.
//!
//! All solvers return a feasible placement. Infeasible candidates produced
//! during search are either repaired (flip the largest private services to
//! public until the offload threshold is met) or scored with a linear penalty
//! on the missing hosting units.

mod bpso;
mod ga;
mod greedy;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use bpso::{
    bpso_solve, bpso_solve_traced, inertia_at, position_from_draws, position_update,
    velocity_update, velocity_update_with, BpsoConfig, BpsoTrace, Particle,
};
pub use ga::{ga_solve, GaConfig};
pub use greedy::greedy_solve;

use crate::error::{Error, Result};
use crate::model::{CostBreakdown, CostModel, CostParams, Placement, SbaGraph};

/// How infeasible candidates are handled during search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintHandling {
    #[default]
    Repair,
    Penalty,
}

/// Logistic transfer function mapping a velocity to a bit probability.
///
/// Evaluated in the form that never overflows. Mathematically the result is in
/// `(0, 1)`; in `f64` it saturates once `|v|` exceeds about 36.
pub fn sigmoid(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}

/// Makes `placement` feasible by flipping private services to public, largest
/// hosting first (ties: lowest id), until the threshold is met. Feasible input
/// comes back unchanged.
pub fn repair_placement(
    graph: &SbaGraph,
    placement: &Placement,
    params: &CostParams,
) -> Result<Placement> {
    let model = CostModel::new(graph, *params)?;
    model.check_len(placement)?;
    let repairer = Repairer::new(&model)?;
    let mut repaired = placement.clone();
    repairer.repair(&model, &mut repaired);
    Ok(repaired)
}

pub(crate) fn ensure_feasible_instance(model: &CostModel<'_>) -> Result<()> {
    if model.infeasible_instance() {
        return Err(Error::Infeasible {
            hq: model.params().hq,
            total_hosting: model.graph().total_hosting(),
        });
    }
    Ok(())
}

/// Precomputed flip order for repeated repairs on one instance.
pub(crate) struct Repairer {
    order: Vec<usize>,
}

impl Repairer {
    pub(crate) fn new(model: &CostModel<'_>) -> Result<Self> {
        ensure_feasible_instance(model)?;
        let graph = model.graph();
        let mut order: Vec<usize> = (0..graph.node_count()).collect();
        order.sort_by(|&x, &y| {
            graph
                .hosting(y)
                .partial_cmp(&graph.hosting(x))
                .unwrap_or(Ordering::Equal)
                .then(x.cmp(&y))
        });
        Ok(Repairer { order })
    }

    pub(crate) fn repair(&self, model: &CostModel<'_>, placement: &mut Placement) {
        for &d in &self.order {
            if model.feasible(placement) {
                return;
            }
            if !placement.is_public(d) {
                placement.set(d, true);
            }
        }
    }
}

/// Search objective: the plain total in repair mode, total plus penalty otherwise.
pub(crate) struct Objective<'m, 'g> {
    pub(crate) model: &'m CostModel<'g>,
    mode: ConstraintHandling,
    penalty_factor: f64,
    repairer: Repairer,
    pub(crate) evaluations: u64,
    best_feasible: Option<(f64, Placement)>,
}

impl<'m, 'g> Objective<'m, 'g> {
    pub(crate) fn new(
        model: &'m CostModel<'g>,
        mode: ConstraintHandling,
        penalty_factor: Option<f64>,
    ) -> Result<Self> {
        let penalty_factor = penalty_factor.unwrap_or(10.0 * model.params().alpha);
        if !(penalty_factor.is_finite() && penalty_factor >= 0.0) {
            return Err(Error::invalid(format!(
                "penalty factor must be finite and >= 0, got {penalty_factor}"
            )));
        }
        Ok(Objective {
            model,
            mode,
            penalty_factor,
            repairer: Repairer::new(model)?,
            evaluations: 0,
            best_feasible: None,
        })
    }

    /// Applies the constraint policy to a fresh candidate, then scores it.
    pub(crate) fn score(&mut self, placement: &mut Placement) -> f64 {
        if self.mode == ConstraintHandling::Repair {
            self.repairer.repair(self.model, placement);
        }
        self.evaluations += 1;
        let total = self.model.breakdown(placement).total;
        let public_hosting = self.model.public_hosting(placement);
        let feasible = public_hosting >= self.model.params().hq;
        if feasible
            && self
                .best_feasible
                .as_ref()
                .map_or(true, |(best, _)| total < *best)
        {
            self.best_feasible = Some((total, placement.clone()));
        }
        if feasible {
            total
        } else {
            total + self.penalty_factor * (self.model.params().hq - public_hosting)
        }
    }

    /// Best feasible placement seen; falls back to repairing `fallback`.
    pub(crate) fn final_placement(&self, fallback: &Placement) -> (Placement, CostBreakdown) {
        let placement = match &self.best_feasible {
            Some((_, p)) => p.clone(),
            None => {
                let mut p = fallback.clone();
                self.repairer.repair(self.model, &mut p);
                p
            }
        };
        let breakdown = self.model.breakdown(&placement);
        (placement, breakdown)
    }
}
