use std::collections::HashMap;
use std::fmt;

use super::sweep::BenchmarkRow;
use crate::error::{Error, Result};

/// Name of the solver that time ratios are taken against.
pub const REFERENCE_SOLVER: &str = "exact";

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub instance: String,
    pub hq_fraction: f64,
    pub solver: String,
    pub runs: usize,
    pub failed: usize,
    pub median_total: f64,
    pub min_total: f64,
    pub max_total: f64,
    pub median_wall_time: f64,
    pub median_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverAggregate {
    pub solver: String,
    pub cells: usize,
    /// Mean over cells of the per-cell median gap.
    pub mean_gap: Option<f64>,
    /// Mean over cells of `median wall time / reference median wall time`.
    pub time_ratio_vs_exact: Option<f64>,
    pub median_wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub cells: Vec<CellSummary>,
    pub solvers: Vec<SolverAggregate>,
}

/// Median of a non-empty slice; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 0 {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    }
}

pub fn summarize(rows: &[BenchmarkRow]) -> Result<Summary> {
    summarize_against(rows, REFERENCE_SOLVER)
}

/// Groups rows by (instance, hq fraction, solver) in first-seen order. Failed
/// rows are counted but excluded from the statistics.
pub fn summarize_against(rows: &[BenchmarkRow], reference: &str) -> Result<Summary> {
    if rows.is_empty() {
        return Err(Error::invalid("cannot summarize an empty set of rows"));
    }

    let mut groups: Vec<(String, f64, String, Vec<&BenchmarkRow>)> = Vec::new();
    let mut index: HashMap<(String, u64, String), usize> = HashMap::new();
    for row in rows {
        let key = (
            row.instance.clone(),
            row.hq_fraction.to_bits(),
            row.solver.clone(),
        );
        let slot = *index.entry(key).or_insert_with(|| {
            groups.push((
                row.instance.clone(),
                row.hq_fraction,
                row.solver.clone(),
                Vec::new(),
            ));
            groups.len() - 1
        });
        groups[slot].3.push(row);
    }

    let cells: Vec<CellSummary> = groups
        .into_iter()
        .map(|(instance, hq_fraction, solver, members)| {
            let ok: Vec<&BenchmarkRow> = members.iter().copied().filter(|r| !r.failed()).collect();
            let failed = members.len() - ok.len();
            if ok.is_empty() {
                return CellSummary {
                    instance,
                    hq_fraction,
                    solver,
                    runs: 0,
                    failed,
                    median_total: f64::NAN,
                    min_total: f64::NAN,
                    max_total: f64::NAN,
                    median_wall_time: f64::NAN,
                    median_gap: None,
                };
            }
            let totals: Vec<f64> = ok.iter().map(|r| r.total).collect();
            let times: Vec<f64> = ok.iter().map(|r| r.wall_time).collect();
            let gaps: Vec<f64> = ok.iter().filter_map(|r| r.gap_to_optimal).collect();
            CellSummary {
                instance,
                hq_fraction,
                solver,
                runs: ok.len(),
                failed,
                median_total: median(&totals),
                min_total: totals.iter().copied().fold(f64::INFINITY, f64::min),
                max_total: totals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                median_wall_time: median(&times),
                median_gap: (!gaps.is_empty()).then(|| median(&gaps)),
            }
        })
        .collect();

    let reference_time: HashMap<(String, u64), f64> = cells
        .iter()
        .filter(|c| c.solver == reference && c.runs > 0)
        .map(|c| {
            (
                (c.instance.clone(), c.hq_fraction.to_bits()),
                c.median_wall_time,
            )
        })
        .collect();

    let mut solver_order: Vec<String> = Vec::new();
    for cell in &cells {
        if !solver_order.contains(&cell.solver) {
            solver_order.push(cell.solver.clone());
        }
    }
    let solvers = solver_order
        .into_iter()
        .map(|solver| {
            let mine: Vec<&CellSummary> = cells
                .iter()
                .filter(|c| c.solver == solver && c.runs > 0)
                .collect();
            let gaps: Vec<f64> = mine.iter().filter_map(|c| c.median_gap).collect();
            let ratios: Vec<f64> = mine
                .iter()
                .filter_map(|c| {
                    let exact =
                        reference_time.get(&(c.instance.clone(), c.hq_fraction.to_bits()))?;
                    (*exact > 0.0).then(|| c.median_wall_time / exact)
                })
                .collect();
            let times: Vec<f64> = mine.iter().map(|c| c.median_wall_time).collect();
            SolverAggregate {
                cells: mine.len(),
                mean_gap: mean(&gaps),
                time_ratio_vs_exact: mean(&ratios),
                median_wall_time: if times.is_empty() {
                    f64::NAN
                } else {
                    median(&times)
                },
                solver,
            }
        })
        .collect();

    Ok(Summary { cells, solvers })
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn opt(value: Option<f64>, precision: usize) -> String {
    value.map_or_else(|| "-".to_string(), |v| format!("{v:.precision$}"))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>5} {:<10} {:>4} {:>12} {:>12} {:>12} {:>12} {:>9}",
            "instance", "hq", "solver", "runs", "median", "min", "max", "time_s", "gap"
        )?;
        for c in &self.cells {
            writeln!(
                f,
                "{:<10} {:>5.2} {:<10} {:>4} {:>12.2} {:>12.2} {:>12.2} {:>12.6} {:>9}",
                c.instance,
                c.hq_fraction,
                c.solver,
                c.runs,
                c.median_total,
                c.min_total,
                c.max_total,
                c.median_wall_time,
                opt(c.median_gap, 4)
            )?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "{:<10} {:>6} {:>10} {:>14} {:>16}",
            "solver", "cells", "mean_gap", "median_time_s", "time_vs_exact"
        )?;
        for s in &self.solvers {
            writeln!(
                f,
                "{:<10} {:>6} {:>10} {:>14.6} {:>16}",
                s.solver,
                s.cells,
                opt(s.mean_gap, 4),
                s.median_wall_time,
                opt(s.time_ratio_vs_exact, 4)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(solver: &str, total: f64, time: f64, gap: Option<f64>) -> BenchmarkRow {
        BenchmarkRow {
            instance: "G".into(),
            n: 3,
            edges: 2,
            density: 66.0,
            hq_fraction: 0.5,
            hq_absolute: 30.0,
            solver: solver.into(),
            seed: None,
            total,
            hosting: total,
            public_comm: 0.0,
            hybrid_comm: 0.0,
            gap_to_optimal: gap,
            wall_time: time,
            evaluations: 1,
            feasible: true,
            error: String::new(),
        }
    }

    #[test]
    fn medians_by_hand() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);

        let rows = vec![
            row("exact", 100.0, 0.4, Some(0.0)),
            row("bpso", 120.0, 0.1, Some(0.2)),
            row("bpso", 100.0, 0.3, Some(0.0)),
            row("bpso", 110.0, 0.2, Some(0.1)),
        ];
        let s = summarize(&rows).unwrap();
        let bpso = s.cells.iter().find(|c| c.solver == "bpso").unwrap();
        assert_eq!(bpso.runs, 3);
        assert_eq!(bpso.median_total, 110.0);
        assert_eq!(bpso.min_total, 100.0);
        assert_eq!(bpso.max_total, 120.0);
        assert_eq!(bpso.median_wall_time, 0.2);
        assert_eq!(bpso.median_gap, Some(0.1));

        let agg = s.solvers.iter().find(|a| a.solver == "bpso").unwrap();
        assert!((agg.time_ratio_vs_exact.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(s.solvers[0].mean_gap, Some(0.0));
        assert_eq!(s.solvers[0].time_ratio_vs_exact, Some(1.0));
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn failed_rows_are_counted_not_averaged() {
        let mut bad = row("ga", f64::NAN, 0.0, None);
        bad.error = "boom".into();
        let s = summarize(&[row("ga", 5.0, 0.1, None), bad]).unwrap();
        assert_eq!(s.cells[0].runs, 1);
        assert_eq!(s.cells[0].failed, 1);
        assert_eq!(s.cells[0].median_total, 5.0);
        assert!(s.to_string().contains("ga"));
    }
}
