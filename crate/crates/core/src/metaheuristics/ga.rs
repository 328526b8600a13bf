//! Binary genetic algorithm baseline: tournament selection, uniform
//! crossover, bit-flip mutation, and elitism.

use std::cmp::Ordering;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ConstraintHandling, Objective};
use crate::error::{Error, Result};
use crate::exact::SolveResult;
use crate::model::{CostModel, CostParams, Placement, SbaGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability; `None` means `1 / n`.
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
    pub elitism: usize,
    pub seed: u64,
    pub repair: ConstraintHandling,
    pub penalty_factor: Option<f64>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 100,
            generations: 200,
            crossover_rate: 0.9,
            mutation_rate: None,
            tournament_size: 3,
            elitism: 2,
            seed: 0,
            repair: ConstraintHandling::Repair,
            penalty_factor: None,
        }
    }
}

impl GaConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        GaConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::invalid("population must be >= 2"));
        }
        if self.elitism >= self.population {
            return Err(Error::invalid(
                "elitism must be smaller than the population",
            ));
        }
        if self.tournament_size < 1 {
            return Err(Error::invalid("tournament_size must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::invalid("crossover_rate must be in [0, 1]"));
        }
        if let Some(rate) = self.mutation_rate {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::invalid("mutation_rate must be in [0, 1]"));
            }
        }
        Ok(())
    }
}

pub fn ga_solve(graph: &SbaGraph, params: &CostParams, cfg: &GaConfig) -> Result<SolveResult> {
    let started = Instant::now();
    cfg.validate()?;
    let model = CostModel::new(graph, *params)?;
    let mut objective = Objective::new(&model, cfg.repair, cfg.penalty_factor)?;
    let n = graph.node_count();
    let mutation_rate = cfg
        .mutation_rate
        .unwrap_or(if n == 0 { 0.0 } else { 1.0 / n as f64 });
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut population: Vec<(Placement, f64)> = (0..cfg.population)
        .map(|_| {
            let mut genome = Placement::new((0..n).map(|_| rng.gen_bool(0.5)).collect());
            let fitness = objective.score(&mut genome);
            (genome, fitness)
        })
        .collect();
    sort_by_fitness(&mut population);

    for _ in 0..cfg.generations {
        let mut next: Vec<(Placement, f64)> = population[..cfg.elitism].to_vec();
        while next.len() < cfg.population {
            let first = &population[tournament(&population, cfg.tournament_size, &mut rng)].0;
            let second = &population[tournament(&population, cfg.tournament_size, &mut rng)].0;
            let (mut a, mut b) = if rng.gen::<f64>() < cfg.crossover_rate {
                uniform_crossover(first, second, &mut rng)
            } else {
                (first.clone(), second.clone())
            };
            for child in [&mut a, &mut b] {
                mutate(child, mutation_rate, &mut rng);
            }
            let fitness = objective.score(&mut a);
            next.push((a, fitness));
            if next.len() < cfg.population {
                let fitness = objective.score(&mut b);
                next.push((b, fitness));
            }
        }
        population = next;
        sort_by_fitness(&mut population);
    }

    let (placement, breakdown) = objective.final_placement(&population[0].0);
    Ok(SolveResult {
        feasible: model.feasible(&placement),
        placement,
        breakdown,
        evaluations: objective.evaluations,
        iterations: cfg.generations as u64,
        wall_time: started.elapsed().as_secs_f64(),
        solver_name: "ga".to_string(),
    })
}

/// Stable ascending sort; equal fitness keeps insertion order.
fn sort_by_fitness(population: &mut [(Placement, f64)]) {
    population.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal));
}

/// Index of the fittest of `size` uniformly drawn members (with replacement).
fn tournament<R: Rng>(population: &[(Placement, f64)], size: usize, rng: &mut R) -> usize {
    let mut winner = rng.gen_range(0..population.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..population.len());
        if population[challenger].1 < population[winner].1
            || (population[challenger].1 == population[winner].1 && challenger < winner)
        {
            winner = challenger;
        }
    }
    winner
}

fn uniform_crossover<R: Rng>(x: &Placement, y: &Placement, rng: &mut R) -> (Placement, Placement) {
    let mut a = Vec::with_capacity(x.len());
    let mut b = Vec::with_capacity(x.len());
    for (&bx, &by) in x.bits().iter().zip(y.bits()) {
        if rng.gen_bool(0.5) {
            a.push(bx);
            b.push(by);
        } else {
            a.push(by);
            b.push(bx);
        }
    }
    (Placement::new(a), Placement::new(b))
}

fn mutate<R: Rng>(genome: &mut Placement, rate: f64, rng: &mut R) {
    for d in 0..genome.len() {
        if rng.gen::<f64>() < rate {
            let bit = genome.is_public(d);
            genome.set(d, !bit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(GaConfig::default().validate().is_ok());
        assert!(GaConfig {
            population: 1,
            ..GaConfig::default()
        }
        .validate()
        .is_err());
        assert!(GaConfig {
            elitism: 100,
            ..GaConfig::default()
        }
        .validate()
        .is_err());
        assert!(GaConfig {
            crossover_rate: 1.5,
            ..GaConfig::default()
        }
        .validate()
        .is_err());
        assert!(GaConfig {
            mutation_rate: Some(-0.1),
            ..GaConfig::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn finds_small_optimum() {
        let g = SbaGraph::from_parts(&[10.0, 20.0, 30.0], &[(0, 1, 5.0), (1, 2, 7.0)]).unwrap();
        let params = CostParams::new(1.0, 2.0, 3.0, 25.0).unwrap();
        let r = ga_solve(&g, &params, &GaConfig::default()).unwrap();
        assert!(r.feasible);
        assert!((r.total() - 44.0).abs() < 1e-9);
        assert_eq!(r.iterations, 200);

        let zero = ga_solve(&g, &params.with_hq(0.0), &GaConfig::default()).unwrap();
        assert_eq!(zero.total(), 0.0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let g = SbaGraph::from_parts(
            &[3.0, 4.0, 5.0, 6.0],
            &[(0, 1, 2.0), (2, 3, 1.5), (0, 3, 4.0)],
        )
        .unwrap();
        let params = CostParams::new(2.0, 1.0, 1.0, 9.0).unwrap();
        let cfg = GaConfig {
            generations: 20,
            ..GaConfig::default().with_seed(7)
        };
        let a = ga_solve(&g, &params, &cfg).unwrap();
        let b = ga_solve(&g, &params, &cfg).unwrap();
        assert!(a.same_outcome(&b));
    }
}
