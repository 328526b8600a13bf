//! Experiment sweep over instances, offload fractions and solvers, with
//! CSV and plot-data output and the `hcplace` command line.

pub mod cli;
pub mod config;
pub mod output;
pub mod summary;
pub mod sweep;

pub use config::{Coefficients, InstanceSource, SolverEntry, SolverKind, SweepConfig};
pub use output::{emit_csv, emit_plot_data, read_csv, CsvSink, CSV_HEADER};
pub use summary::{median, summarize, summarize_against, CellSummary, SolverAggregate, Summary};
pub use sweep::{gap_to_optimal, run_sweep, run_sweep_with, BenchmarkRow};
