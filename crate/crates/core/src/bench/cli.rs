//! `hcplace` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::config::SweepConfig;
use super::output::{emit_plot_data, read_csv};
use super::summary::summarize_against;
use super::sweep::run_sweep;
use crate::error::{Error, Result};
use crate::exact::{
    exact_solve_bnb_with_limit, exact_solve_with_limit, SolveResult, DEFAULT_MAX_NODES,
};
use crate::instances::{
    generate_instance, preset, preset_specs, read_graph, write_graph_as, GraphFormat, InstanceSpec,
};
use crate::metaheuristics::{bpso_solve, ga_solve, greedy_solve, BpsoConfig, GaConfig};
use crate::model::{CostParams, SbaGraph};

const DEFAULT_BENCH_OUTPUT: &str = "bench_results.csv";

#[derive(Debug, Parser)]
#[command(
    name = "hcplace",
    version,
    about = "Hybrid-cloud service placement solvers and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write preset or generated instances to disk.
    Gen(GenArgs),
    /// Solve one instance with one solver and print the cost breakdown.
    Solve(SolveArgs),
    /// Compute the optimal placement.
    Exact(ExactArgs),
    /// Run an experiment sweep from a config file (or `default`).
    Bench(BenchArgs),
    /// Summarize a sweep CSV.
    Report(ReportArgs),
    /// Check a graph file and print its statistics.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Graph file (.json or edge list), or a preset name G1..G10.
    graph: String,
    /// Pricing coefficients `alpha,beta1,beta2`.
    #[arg(long, default_value = "40,20,10", value_parser = parse_coefficients)]
    params: (f64, f64, f64),
    /// Offload threshold in absolute hosting units.
    #[arg(long, conflicts_with = "hq_frac")]
    hq: Option<f64>,
    /// Offload threshold as a fraction of total hosting.
    #[arg(long)]
    hq_frac: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverChoice {
    Bpso,
    Ga,
    Greedy,
    Exact,
    ExactBnb,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "bpso")]
    solver: SolverChoice,
    /// Enumeration guard for the exact solvers.
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: usize,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: usize,
    /// Use branch and bound instead of full enumeration.
    #[arg(long)]
    bnb: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatChoice {
    Json,
    Edges,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Preset names; `all` writes G1..G10. Ignored when --nodes is given.
    #[arg(long, default_value = "all")]
    preset: Vec<String>,
    #[arg(long, requires_all = ["edges", "hosting"])]
    nodes: Option<usize>,
    #[arg(long)]
    edges: Option<usize>,
    /// Total hosting units for a custom instance.
    #[arg(long)]
    hosting: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    rate_min: f64,
    #[arg(long, default_value_t = 50.0)]
    rate_max: f64,
    #[arg(long, default_value = "custom")]
    name: String,
    /// Overrides the preset seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short = 'o', default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatChoice,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// TOML sweep config, or `default` for the built-in sweep.
    #[arg(long, default_value = "default")]
    config: String,
    /// CSV destination; overrides the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write plot data here.
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    /// Overrides the config's repetitions.
    #[arg(long)]
    repetitions: Option<usize>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    csv: PathBuf,
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    /// Solver that time ratios are measured against.
    #[arg(long, default_value = "exact")]
    reference: String,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    graph: PathBuf,
}

fn parse_coefficients(raw: &str) -> std::result::Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let [a, b1, b2] = parts.as_slice() else {
        return Err(format!("expected alpha,beta1,beta2; got {raw:?}"));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    Ok((num(a)?, num(b1)?, num(b2)?))
}

/// Runs the CLI with process stdout/stderr and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Exit codes: 0 success, 1 runtime failure, 2 usage error.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Gen(args) => gen(args, out),
        Command::Solve(args) => {
            let kind = args.solver;
            solve(&args.problem, out, |graph, params, seed| match kind {
                SolverChoice::Bpso => {
                    bpso_solve(graph, params, &BpsoConfig::default().with_seed(seed))
                }
                SolverChoice::Ga => ga_solve(graph, params, &GaConfig::default().with_seed(seed)),
                SolverChoice::Greedy => greedy_solve(graph, params),
                SolverChoice::Exact => exact_solve_with_limit(graph, params, args.max_nodes),
                SolverChoice::ExactBnb => exact_solve_bnb_with_limit(graph, params, args.max_nodes),
            })
        }
        Command::Exact(args) => solve(&args.problem, out, |graph, params, _| {
            if args.bnb {
                exact_solve_bnb_with_limit(graph, params, args.max_nodes)
            } else {
                exact_solve_with_limit(graph, params, args.max_nodes)
            }
        }),
        Command::Bench(args) => bench(args, out),
        Command::Report(args) => report(args, out),
        Command::Validate(args) => validate(&args.graph, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn load_graph(source: &str) -> Result<SbaGraph> {
    let path = Path::new(source);
    if path.exists() {
        return read_graph(path);
    }
    match preset(source) {
        Some(spec) => generate_instance(&spec),
        None => Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or preset"),
        )),
    }
}

fn solve(
    problem: &ProblemArgs,
    out: &mut dyn Write,
    solver: impl Fn(&SbaGraph, &CostParams, u64) -> Result<SolveResult>,
) -> Result<()> {
    let graph = load_graph(&problem.graph)?;
    let hq = match (problem.hq, problem.hq_frac) {
        (Some(hq), _) => hq,
        (None, Some(fraction)) => graph.hq_from_fraction(fraction)?,
        (None, None) => 0.0,
    };
    let (alpha, beta1, beta2) = problem.params;
    let params = CostParams::new(alpha, beta1, beta2, hq)?;
    let result = solver(&graph, &params, problem.seed)?;

    let text = if problem.json {
        let mut json = serde_json::to_string_pretty(&result).expect("results always serialize");
        json.push('\n');
        json
    } else {
        let b = result.breakdown;
        format!(
            "solver       {}\nnodes        {}\nhq           {}\nplacement    {}\nhosting      {}\npublic_comm  {}\nhybrid_comm  {}\ntotal        {}\nfeasible     {}\nevaluations  {}\niterations   {}\nwall_time_s  {:.6}\n",
            result.solver_name,
            graph.node_count(),
            hq,
            result.placement,
            b.hosting,
            b.public_comm,
            b.hybrid_comm,
            b.total,
            result.feasible,
            result.evaluations,
            result.iterations,
            result.wall_time
        )
    };
    write_out(out, &text)
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Result<()> {
    let specs: Vec<InstanceSpec> = match (args.nodes, args.edges, args.hosting) {
        (Some(nodes), Some(edges), Some(hosting)) => vec![InstanceSpec {
            rate_min: args.rate_min,
            rate_max: args.rate_max,
            ..InstanceSpec::new(
                args.name.clone(),
                nodes,
                edges,
                hosting,
                args.seed.unwrap_or(0),
            )
        }],
        _ => {
            let mut specs = Vec::new();
            for name in &args.preset {
                if name.eq_ignore_ascii_case("all") {
                    specs.extend(preset_specs());
                } else {
                    specs.push(
                        preset(name)
                            .ok_or_else(|| Error::invalid(format!("unknown preset {name:?}")))?,
                    );
                }
            }
            if let Some(seed) = args.seed {
                specs = specs.into_iter().map(|s| s.with_seed(seed)).collect();
            }
            specs
        }
    };

    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    let (format, ext) = match args.format {
        FormatChoice::Json => (GraphFormat::Json, "json"),
        FormatChoice::Edges => (GraphFormat::EdgeList, "txt"),
    };
    for spec in specs {
        let graph = generate_instance(&spec)?;
        let path = args.out_dir.join(format!("{}.{ext}", spec.name));
        write_graph_as(&graph, &path, format)?;
        write_out(
            out,
            &format!(
                "{}  nodes={} edges={} hosting={} density={:.1}%\n",
                path.display(),
                graph.node_count(),
                graph.edge_count(),
                graph.total_hosting(),
                graph.density_percent().unwrap_or(0.0)
            ),
        )?;
    }
    Ok(())
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = if args.config == "default" {
        SweepConfig::default()
    } else {
        SweepConfig::load(&args.config)?
    };
    if let Some(reps) = args.repetitions {
        config.repetitions = reps;
    }
    let output = args
        .out
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_BENCH_OUTPUT));
    config.output = Some(output.clone());

    let rows = run_sweep(&config)?;
    let failed = rows.iter().filter(|r| r.failed()).count();
    write_out(
        out,
        &format!(
            "wrote {} rows ({failed} failed) to {}\n",
            rows.len(),
            output.display()
        ),
    )?;
    if !rows.is_empty() {
        let summary = summarize_against(&rows, "exact")?;
        if let Some(dir) = args.plot_dir {
            let files = emit_plot_data(&summary, &dir)?;
            write_out(
                out,
                &format!("wrote {} plot files to {}\n", files.len(), dir.display()),
            )?;
        }
    }
    Ok(())
}

fn report(args: ReportArgs, out: &mut dyn Write) -> Result<()> {
    let rows = read_csv(&args.csv)?;
    let summary = summarize_against(&rows, &args.reference)?;
    write_out(out, &summary.to_string())?;
    if let Some(dir) = args.plot_dir {
        let files = emit_plot_data(&summary, &dir)?;
        write_out(
            out,
            &format!("wrote {} plot files to {}\n", files.len(), dir.display()),
        )?;
    }
    Ok(())
}

fn validate(path: &Path, out: &mut dyn Write) -> Result<()> {
    let graph = read_graph(path)?;
    let density = graph
        .density_percent()
        .map_or_else(|_| "n/a".to_string(), |d| format!("{d:.2}%"));
    write_out(
        out,
        &format!(
            "ok: {}\nnodes         {}\nedges         {}\ntotal_hosting {}\ndensity       {}\n",
            path.display(),
            graph.node_count(),
            graph.edge_count(),
            graph.total_hosting(),
            density
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(args, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!(parse_coefficients("30,20,5").unwrap(), (30.0, 20.0, 5.0));
        assert!(parse_coefficients("1,2").is_err());
        assert!(parse_coefficients("1,x,2").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_capture(&["hcplace", "frobnicate"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"), "{err}");
        let (code, _, _) = run_capture(&["hcplace", "solve", "--bogus", "G1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn solve_preset_by_name() {
        let (code, out, _) = run_capture(&[
            "hcplace",
            "solve",
            "--solver",
            "greedy",
            "--hq-frac",
            "0",
            "G4",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("total        0\n"), "{out}");
    }

    #[test]
    fn missing_graph_is_a_runtime_error() {
        let (code, _, err) = run_capture(&["hcplace", "validate", "/nonexistent.json"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"), "{err}");
    }
}
