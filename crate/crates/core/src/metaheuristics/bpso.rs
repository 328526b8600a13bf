//! Binary particle swarm optimisation.
//!
//! Velocities are real vectors clamped to `[-v_max, v_max]`; a bit is set
//! when `sigmoid(v) > r3`. The swarm best is updated synchronously once every
//! particle has moved.
//!
//! Random draws come from one ChaCha8 stream seeded by `seed`, in this order:
//! initialisation, per particle, `n` position coins then `n` velocities;
//! each iteration, per particle in index order, the `r1`, `r2` and `r3`
//! vectors. All draws of an iteration happen before any particle is scored.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{sigmoid, ConstraintHandling, Objective};
use crate::error::{Error, Result};
use crate::exact::SolveResult;
use crate::model::{CostModel, CostParams, Placement, SbaGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BpsoConfig {
    pub swarm_size: usize,
    pub max_iters: usize,
    /// Inertia at the first iteration, decaying linearly to `w_end`.
    pub w_start: f64,
    pub w_end: f64,
    /// Cognitive (personal best) acceleration.
    pub c1: f64,
    /// Social (swarm best) acceleration.
    pub c2: f64,
    pub v_max: f64,
    /// Stop after this many iterations without a swarm-best improvement; 0 disables.
    pub stagnation_limit: usize,
    pub seed: u64,
    pub repair: ConstraintHandling,
    /// Penalty per missing hosting unit; `None` means `10 * alpha`.
    pub penalty_factor: Option<f64>,
}

impl Default for BpsoConfig {
    fn default() -> Self {
        BpsoConfig {
            swarm_size: 30,
            max_iters: 200,
            w_start: 0.9,
            w_end: 0.4,
            c1: 2.0,
            c2: 2.0,
            v_max: 4.0,
            stagnation_limit: 50,
            seed: 0,
            repair: ConstraintHandling::Repair,
            penalty_factor: None,
        }
    }
}

impl BpsoConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        BpsoConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::invalid("swarm_size must be >= 2"));
        }
        if self.max_iters < 1 {
            return Err(Error::invalid("max_iters must be >= 1"));
        }
        if !(self.v_max.is_finite() && self.v_max > 0.0) {
            return Err(Error::invalid("v_max must be finite and > 0"));
        }
        if !(0.0 <= self.w_end && self.w_end <= self.w_start && self.w_start.is_finite()) {
            return Err(Error::invalid("inertia must satisfy 0 <= w_end <= w_start"));
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0 && self.c1.is_finite() && self.c2.is_finite()) {
            return Err(Error::invalid("c1 and c2 must be finite and >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Placement,
    pub velocity: Vec<f64>,
    pub pbest_position: Placement,
    pub pbest_cost: f64,
}

/// Per-run diagnostics used by the property tests.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BpsoTrace {
    /// Swarm-best objective after initialisation and after every iteration.
    pub gbest_history: Vec<f64>,
    /// Largest `|v|` observed across all particles and iterations.
    pub max_abs_velocity: f64,
}

/// Inertia for iteration `t` of `max_iters`, linear from `w_start` to `w_end`.
pub fn inertia_at(cfg: &BpsoConfig, t: usize) -> f64 {
    if cfg.max_iters <= 1 {
        return cfg.w_start;
    }
    let progress = t as f64 / (cfg.max_iters - 1) as f64;
    cfg.w_start - (cfg.w_start - cfg.w_end) * progress
}

/// Velocity update with explicit `r1`/`r2` draws.
pub fn velocity_update_with(
    particle: &Particle,
    gbest: &Placement,
    w: f64,
    cfg: &BpsoConfig,
    r1: &[f64],
    r2: &[f64],
) -> Result<Vec<f64>> {
    let n = particle.position.len();
    if [
        particle.velocity.len(),
        particle.pbest_position.len(),
        gbest.len(),
        r1.len(),
        r2.len(),
    ]
    .iter()
    .any(|&len| len != n)
    {
        return Err(Error::invalid(
            "velocity update inputs must all have the particle's dimension",
        ));
    }
    let bit = |p: &Placement, d: usize| if p.is_public(d) { 1.0 } else { 0.0 };
    Ok((0..n)
        .map(|d| {
            let x = bit(&particle.position, d);
            let raw = w * particle.velocity[d]
                + cfg.c1 * r1[d] * (bit(&particle.pbest_position, d) - x)
                + cfg.c2 * r2[d] * (bit(gbest, d) - x);
            raw.clamp(-cfg.v_max, cfg.v_max)
        })
        .collect())
}

/// Velocity update drawing `r1` then `r2` (one value per dimension) from `rng`.
pub fn velocity_update<R: Rng + ?Sized>(
    particle: &Particle,
    gbest: &Placement,
    w: f64,
    cfg: &BpsoConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = particle.position.len();
    let r1 = draw_unit(rng, n);
    let r2 = draw_unit(rng, n);
    velocity_update_with(particle, gbest, w, cfg, &r1, &r2)
}

/// Bit `d` is 1 iff `sigmoid(velocity[d]) > r3[d]`.
pub fn position_from_draws(velocity: &[f64], r3: &[f64]) -> Placement {
    Placement::new(
        velocity
            .iter()
            .zip(r3)
            .map(|(&v, &r)| sigmoid(v) > r)
            .collect(),
    )
}

pub fn position_update<R: Rng + ?Sized>(velocity: &[f64], rng: &mut R) -> Placement {
    let r3 = draw_unit(rng, velocity.len());
    position_from_draws(velocity, &r3)
}

fn draw_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

pub fn bpso_solve(graph: &SbaGraph, params: &CostParams, cfg: &BpsoConfig) -> Result<SolveResult> {
    bpso_solve_traced(graph, params, cfg).map(|(result, _)| result)
}

pub fn bpso_solve_traced(
    graph: &SbaGraph,
    params: &CostParams,
    cfg: &BpsoConfig,
) -> Result<(SolveResult, BpsoTrace)> {
    let started = Instant::now();
    cfg.validate()?;
    let model = CostModel::new(graph, *params)?;
    let mut objective = Objective::new(&model, cfg.repair, cfg.penalty_factor)?;
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = BpsoTrace::default();

    let mut swarm: Vec<Particle> = Vec::with_capacity(cfg.swarm_size);
    for _ in 0..cfg.swarm_size {
        let mut position = Placement::new((0..n).map(|_| rng.gen_bool(0.5)).collect());
        let velocity: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(-cfg.v_max..=cfg.v_max))
            .collect();
        let cost = objective.score(&mut position);
        swarm.push(Particle {
            pbest_position: position.clone(),
            position,
            velocity,
            pbest_cost: cost,
        });
    }
    for particle in &swarm {
        track_velocity(&mut trace, &particle.velocity);
    }

    let (mut gbest_position, mut gbest_cost) = swarm_best(&swarm);
    trace.gbest_history.push(gbest_cost);

    let mut iterations = 0u64;
    let mut stagnant = 0usize;
    let mut r1 = vec![vec![0.0; n]; cfg.swarm_size];
    let mut r2 = r1.clone();
    let mut r3 = r1.clone();
    for t in 0..cfg.max_iters {
        iterations += 1;
        let w = inertia_at(cfg, t);
        for i in 0..cfg.swarm_size {
            for buf in [&mut r1[i], &mut r2[i], &mut r3[i]] {
                buf.iter_mut().for_each(|r| *r = rng.gen::<f64>());
            }
        }

        for (i, particle) in swarm.iter_mut().enumerate() {
            let velocity = velocity_update_with(particle, &gbest_position, w, cfg, &r1[i], &r2[i])?;
            let mut position = position_from_draws(&velocity, &r3[i]);
            let cost = objective.score(&mut position);
            track_velocity(&mut trace, &velocity);
            particle.velocity = velocity;
            particle.position = position;
            if cost < particle.pbest_cost {
                particle.pbest_cost = cost;
                particle.pbest_position = particle.position.clone();
            }
        }

        let (candidate, candidate_cost) = swarm_best(&swarm);
        if candidate_cost < gbest_cost {
            gbest_cost = candidate_cost;
            gbest_position = candidate;
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        trace.gbest_history.push(gbest_cost);
        if cfg.stagnation_limit > 0 && stagnant >= cfg.stagnation_limit {
            break;
        }
    }

    let (placement, breakdown) = objective.final_placement(&gbest_position);
    let result = SolveResult {
        feasible: model.feasible(&placement),
        placement,
        breakdown,
        evaluations: objective.evaluations,
        iterations,
        wall_time: started.elapsed().as_secs_f64(),
        solver_name: "bpso".to_string(),
    };
    Ok((result, trace))
}

/// Lowest personal-best cost in the swarm; ties go to the lowest index.
fn swarm_best(swarm: &[Particle]) -> (Placement, f64) {
    let mut best = &swarm[0];
    for particle in &swarm[1..] {
        if particle.pbest_cost < best.pbest_cost {
            best = particle;
        }
    }
    (best.pbest_position.clone(), best.pbest_cost)
}

fn track_velocity(trace: &mut BpsoTrace, velocity: &[f64]) {
    for &v in velocity {
        trace.max_abs_velocity = trace.max_abs_velocity.max(v.abs());
    }
}
