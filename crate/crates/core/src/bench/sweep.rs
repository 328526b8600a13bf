use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{SolverEntry, SolverKind, SweepConfig};
use super::output::CsvSink;
use crate::error::Result;
use crate::exact::{exact_solve_bnb_with_limit, exact_solve_with_limit, SolveResult};
use crate::metaheuristics::{bpso_solve, ga_solve, greedy_solve};
use crate::model::{CostParams, SbaGraph};

/// One solver run on one (instance, hq) cell. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub instance: String,
    pub n: usize,
    pub edges: usize,
    pub density: f64,
    pub hq_fraction: f64,
    pub hq_absolute: f64,
    pub solver: String,
    /// Empty for deterministic solvers.
    pub seed: Option<u64>,
    pub total: f64,
    pub hosting: f64,
    pub public_comm: f64,
    pub hybrid_comm: f64,
    /// `total / optimum - 1`; empty when no exact solver ran on the cell.
    pub gap_to_optimal: Option<f64>,
    /// Seconds, microsecond resolution.
    pub wall_time: f64,
    pub evaluations: u64,
    pub feasible: bool,
    /// Failure reason; empty on success.
    pub error: String,
}

impl BenchmarkRow {
    pub fn failed(&self) -> bool {
        !self.error.is_empty()
    }
}

/// Seed (if any) and the timed result of one run.
type Outcome = (Option<u64>, Result<(SolveResult, f64)>);

/// Runs the sweep, writing rows to `config.output` (when set) as each
/// (instance, hq) group completes.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<BenchmarkRow>> {
    let mut sink = match &config.output {
        Some(path) => Some(CsvSink::create(path)?),
        None => None,
    };
    let mut rows = Vec::with_capacity(config.cell_count());
    run_sweep_with(config, |row| {
        if let Some(sink) = sink.as_mut() {
            sink.write(row)?;
        }
        rows.push(row.clone());
        Ok(())
    })?;
    if let Some(sink) = sink {
        sink.finish()?;
    }
    Ok(rows)
}

/// Sweep driver with a row callback. Rows arrive in (instance, hq, solver,
/// repetition) order. Load and solver failures become failed rows.
pub fn run_sweep_with(
    config: &SweepConfig,
    mut emit: impl FnMut(&BenchmarkRow) -> Result<()>,
) -> Result<()> {
    config.validate()?;
    for source in &config.instances {
        let label = source.label();
        let graph = source.load(config.base_dir.as_deref());
        for &fraction in &config.hq_fractions {
            let rows = match &graph {
                Ok(graph) => run_group(config, &label, graph, fraction),
                Err(e) => failed_group(config, &label, fraction, &e.to_string()),
            };
            for row in &rows {
                emit(row)?;
            }
        }
    }
    Ok(())
}

/// Exact entries run first so later rows can report their gap.
fn run_group(
    config: &SweepConfig,
    label: &str,
    graph: &SbaGraph,
    fraction: f64,
) -> Vec<BenchmarkRow> {
    let template = RowTemplate::new(label, graph, fraction);
    let params = graph
        .hq_from_fraction(fraction)
        .and_then(|hq| config.params.with_hq(hq));
    let params = match params {
        Ok(params) => params,
        Err(e) => return failed_group(config, label, fraction, &e.to_string()),
    };

    let mut outcomes: Vec<Vec<Outcome>> = config.solvers.iter().map(|_| Vec::new()).collect();
    let order = config
        .solvers
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind.is_exact())
        .chain(
            config
                .solvers
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.kind.is_exact()),
        );
    for (index, entry) in order {
        for rep in 0..entry.runs(config.repetitions) {
            let seed = entry
                .kind
                .is_stochastic()
                .then(|| config.seed_base + rep as u64);
            outcomes[index].push((seed, timed_solve(entry, graph, &params, seed)));
        }
    }

    let optimum = config
        .solvers
        .iter()
        .zip(&outcomes)
        .filter(|(entry, _)| entry.kind.is_exact())
        .find_map(|(_, runs)| match runs.first() {
            Some((_, Ok((result, _)))) if result.feasible => Some(result.total()),
            _ => None,
        });

    let mut rows = Vec::new();
    for (entry, runs) in config.solvers.iter().zip(outcomes) {
        for (seed, outcome) in runs {
            rows.push(match outcome {
                Ok((result, seconds)) => {
                    template.success(entry, seed, params.hq, &result, seconds, optimum)
                }
                Err(e) => template.failure(&entry.name, seed, params.hq, &e.to_string()),
            });
        }
    }
    rows
}

fn timed_solve(
    entry: &SolverEntry,
    graph: &SbaGraph,
    params: &CostParams,
    seed: Option<u64>,
) -> Result<(SolveResult, f64)> {
    let seed = seed.unwrap_or(0);
    let started = Instant::now();
    let result = match &entry.kind {
        SolverKind::Exact { max_nodes } => exact_solve_with_limit(graph, params, *max_nodes),
        SolverKind::ExactBnb { max_nodes } => exact_solve_bnb_with_limit(graph, params, *max_nodes),
        SolverKind::Bpso { config } => bpso_solve(graph, params, &config.clone().with_seed(seed)),
        SolverKind::Ga { config } => ga_solve(graph, params, &config.clone().with_seed(seed)),
        SolverKind::Greedy => greedy_solve(graph, params),
    };
    let seconds = started.elapsed().as_secs_f64();
    result.map(|r| (r, round_micros(seconds)))
}

fn round_micros(seconds: f64) -> f64 {
    (seconds * 1e6).round() / 1e6
}

/// Relative gap to the optimum. A zero optimum gives gap 0 for a zero total.
pub fn gap_to_optimal(total: f64, optimum: f64) -> f64 {
    if optimum > 0.0 {
        total / optimum - 1.0
    } else if total <= 1e-9 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn failed_group(
    config: &SweepConfig,
    label: &str,
    fraction: f64,
    reason: &str,
) -> Vec<BenchmarkRow> {
    let template = RowTemplate {
        instance: label.to_string(),
        n: 0,
        edges: 0,
        density: 0.0,
        hq_fraction: fraction,
    };
    let mut rows = Vec::new();
    for entry in &config.solvers {
        for rep in 0..entry.runs(config.repetitions) {
            let seed = entry
                .kind
                .is_stochastic()
                .then(|| config.seed_base + rep as u64);
            rows.push(template.failure(&entry.name, seed, f64::NAN, reason));
        }
    }
    rows
}

struct RowTemplate {
    instance: String,
    n: usize,
    edges: usize,
    density: f64,
    hq_fraction: f64,
}

impl RowTemplate {
    fn new(label: &str, graph: &SbaGraph, hq_fraction: f64) -> Self {
        RowTemplate {
            instance: label.to_string(),
            n: graph.node_count(),
            edges: graph.edge_count(),
            density: graph.density_percent().unwrap_or(0.0),
            hq_fraction,
        }
    }

    fn success(
        &self,
        entry: &SolverEntry,
        seed: Option<u64>,
        hq: f64,
        result: &SolveResult,
        seconds: f64,
        optimum: Option<f64>,
    ) -> BenchmarkRow {
        let b = result.breakdown;
        BenchmarkRow {
            instance: self.instance.clone(),
            n: self.n,
            edges: self.edges,
            density: self.density,
            hq_fraction: self.hq_fraction,
            hq_absolute: hq,
            solver: entry.name.clone(),
            seed,
            total: b.total,
            hosting: b.hosting,
            public_comm: b.public_comm,
            hybrid_comm: b.hybrid_comm,
            gap_to_optimal: optimum.map(|opt| gap_to_optimal(b.total, opt)),
            wall_time: seconds,
            evaluations: result.evaluations,
            feasible: result.feasible,
            error: String::new(),
        }
    }

    fn failure(&self, solver: &str, seed: Option<u64>, hq: f64, reason: &str) -> BenchmarkRow {
        BenchmarkRow {
            instance: self.instance.clone(),
            n: self.n,
            edges: self.edges,
            density: self.density,
            hq_fraction: self.hq_fraction,
            hq_absolute: hq,
            solver: solver.to_string(),
            seed,
            total: f64::NAN,
            hosting: f64::NAN,
            public_comm: f64::NAN,
            hybrid_comm: f64::NAN,
            gap_to_optimal: None,
            wall_time: 0.0,
            evaluations: 0,
            feasible: false,
            error: reason.to_string(),
        }
    }
}
