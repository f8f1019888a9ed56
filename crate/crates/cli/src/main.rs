//! Command-line front end. Every subcommand is deterministic given its
//! full flag set; randomized commands draw a seed from the OS when none
//! is supplied and record the value in their output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use satcarve_core::iex::SignedCubeLedger;
use satcarve_core::sat::assignment_text;
use satcarve_core::solver::trace_to_csv;
use satcarve_core::tiling::{
    self, d_curve_formula_range, d_curve_lattice, d_curve_lattice_with, d_curve_montecarlo,
    inflection_from_d, inflection_from_intersection, m_curve_range, CurvePoint, InflectionReport,
    TilingMode,
};
use satcarve_core::transition::{self, compute_transition, SolveEngine};
use satcarve_core::{solve, Instance, OrderingStrategy};

#[derive(Parser)]
#[command(name = "satcarve", version, about = "Exact 3-SAT solving by cube carving")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a DIMACS instance and report verdict, count, and solutions
    Solve(SolveArgs),
    /// Generate a random instance or the 8-clause unsatisfiable kernel
    Gen(GenArgs),
    /// Sweep clause counts and measure the SAT fraction per point
    Transition(TransitionArgs),
    /// Evaluate a tiling model curve and its transition summary
    Tiling(TilingArgs),
    /// Count models by one of the three counting methods
    Count(CountArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS CNF file
    file: PathBuf,
    /// Clause ordering fed to the carver
    #[arg(long, value_enum, default_value_t = Order::Given)]
    order: Order,
    /// Seed for --order random; drawn from the OS when absent
    #[arg(long)]
    seed: Option<u64>,
    /// Print the exact model count
    #[arg(long)]
    count: bool,
    /// Print up to LIMIT satisfying assignments
    #[arg(long, value_name = "LIMIT")]
    enumerate: Option<usize>,
    /// Write the per-clause growth trace as CSV
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Given,
    Random,
    Greedy,
    Density,
}

#[derive(Args)]
struct GenArgs {
    /// Variable count
    #[arg(long)]
    n: u32,
    /// Clause count; ignored with --kernel
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Generator seed; drawn from the OS when absent
    #[arg(long)]
    seed: Option<u64>,
    /// Emit the 8-clause kernel over the first three variables instead
    #[arg(long)]
    kernel: bool,
}

#[derive(Args)]
struct TransitionArgs {
    /// Variable count
    #[arg(long)]
    n: u32,
    /// Smallest clause count; defaults to n (ratio 1)
    #[arg(long)]
    m_min: Option<usize>,
    /// Largest clause count; defaults to 8n
    #[arg(long)]
    m_max: Option<usize>,
    /// Clause count increment; defaults to n/2
    #[arg(long)]
    m_step: Option<usize>,
    /// Instances per clause count
    #[arg(long, default_value_t = 200)]
    trials: u32,
    /// Master seed; drawn from the OS when absent
    #[arg(long)]
    seed: Option<u64>,
    /// Verdict engine
    #[arg(long, value_enum, default_value_t = Engine::Trie)]
    engine: Engine,
    /// Output path; standard output when absent
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Trie,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct TilingArgs {
    /// Space width in variables
    #[arg(long)]
    n: u32,
    /// Model and evaluation path
    #[arg(long, value_enum)]
    mode: Mode,
    /// Tiles per placement; lattice-less-simple and montecarlo only,
    /// defaults to the clause-cube volume 2^(n-3)
    #[arg(long)]
    block_size: Option<u64>,
    /// Placement steps; defaults to a span covering the transition
    #[arg(long)]
    t_max: Option<u32>,
    /// Simulated fill sequences; montecarlo only
    #[arg(long)]
    trials: Option<u32>,
    /// Simulation seed; montecarlo only, drawn from the OS when absent
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; standard output when absent
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Unit tiles, exact occupancy lattice
    Simple,
    /// Non-overlapping blocks, exact occupancy lattice
    LatticeLessSimple,
    /// Non-overlapping blocks, simulated fills
    Montecarlo,
    /// Unit tiles, closed-form survival curve
    Formula,
    /// Unit tiles, expected-fill curve and its crossing with D
    MCurve,
}

#[derive(Args)]
struct CountArgs {
    /// DIMACS CNF file
    file: PathBuf,
    /// Counting method
    #[arg(long, value_enum, default_value_t = Method::Trie)]
    method: Method,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Trie,
    Iex,
    Oracle,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    let invocation = std::env::args().collect::<Vec<_>>().join(" ");
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args, &invocation),
        Command::Gen(args) => cmd_gen(args, &invocation),
        Command::Transition(args) => cmd_transition(args, &invocation),
        Command::Tiling(args) => cmd_tiling(args, &invocation),
        Command::Count(args) => cmd_count(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Instance::from_dimacs(&text)?)
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs, invocation: &str) -> Result<u8> {
    let instance = read_instance(&args.file)?;
    let strategy = match args.order {
        Order::Given => OrderingStrategy::AsGiven,
        Order::Random => {
            let seed = args.seed.unwrap_or_else(rand::random);
            println!("seed {seed}");
            OrderingStrategy::RandomShuffle { seed }
        }
        Order::Greedy => OrderingStrategy::GreedyMinGrowth,
        Order::Density => OrderingStrategy::DensityOptimized,
    };
    let report = solve(&instance, &strategy, args.enumerate.unwrap_or(0))?;

    println!("{}", if report.satisfiable { "SAT" } else { "UNSAT" });
    if args.count {
        println!("models {}", report.model_count);
    }
    if args.enumerate.is_some() {
        for solution in &report.solutions {
            println!("{}", assignment_text(solution));
        }
    }
    if let Some(path) = &args.trace {
        let content = format!("# {invocation}\n{}", trace_to_csv(&report.trace));
        write_output(Some(path), &content)?;
    }
    Ok(if report.satisfiable { 10 } else { 20 })
}

fn cmd_gen(args: GenArgs, invocation: &str) -> Result<u8> {
    let mut header = format!("c {invocation}\n");
    let instance = if args.kernel {
        Instance::unsat_kernel(args.n)?
    } else {
        let seed = args.seed.unwrap_or_else(rand::random);
        header.push_str(&format!("c seed {seed}\n"));
        Instance::random(args.n, args.m, seed)?
    };
    print!("{header}{}", instance.to_dimacs());
    Ok(0)
}

fn cmd_transition(args: TransitionArgs, invocation: &str) -> Result<u8> {
    let n = args.n as usize;
    let m_min = args.m_min.unwrap_or(n);
    let m_max = args.m_max.unwrap_or(8 * n);
    let m_step = args.m_step.unwrap_or(n / 2).max(1);
    if m_min == 0 || m_max < m_min {
        bail!("empty clause-count range {m_min}..{m_max}");
    }
    let m_range: Vec<usize> = (m_min..=m_max).step_by(m_step).collect();
    let seed = args.seed.unwrap_or_else(rand::random);
    let engine = match args.engine {
        Engine::Trie => SolveEngine::Trie,
        Engine::Oracle => SolveEngine::Oracle,
    };
    let curve = compute_transition(args.n, &m_range, args.trials, seed, engine)?;

    let content = match args.format {
        Format::Csv => format!(
            "# {invocation}\n# seed {seed}\n{}",
            transition::curve_to_csv(&curve)
        ),
        Format::Json => {
            let rows: Vec<serde_json::Value> = curve
                .points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "n_vars": curve.n_vars,
                        "m": p.m,
                        "ratio": p.ratio,
                        "trials": p.trials,
                        "sat_count": p.sat_count,
                        "sat_fraction": p.sat_fraction,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "invocation": invocation,
                "seed": seed.to_string(),
                "rows": rows,
            });
            format!("{doc:#}\n")
        }
    };
    write_output(args.output.as_ref(), &content)?;
    Ok(0)
}

fn default_t_max(n: u32) -> u32 {
    (1.53 * n as f64 * (1u64 << n) as f64) as u32 + 12
}

fn cmd_tiling(args: TilingArgs, invocation: &str) -> Result<u8> {
    let block_capable = matches!(args.mode, Mode::LatticeLessSimple | Mode::Montecarlo);
    if args.block_size.is_some() && !block_capable {
        bail!("--block-size only applies to lattice-less-simple and montecarlo");
    }
    if args.trials.is_some() && args.mode != Mode::Montecarlo {
        bail!("--trials only applies to montecarlo");
    }
    if args.seed.is_some() && args.mode != Mode::Montecarlo {
        bail!("--seed only applies to montecarlo");
    }
    let block = args
        .block_size
        .unwrap_or_else(|| if args.n >= 3 { 1 << (args.n - 3) } else { 1 });
    let t_max = args.t_max.unwrap_or_else(|| {
        let span = default_t_max(args.n);
        if block_capable {
            (span / block.min(u64::from(u32::MAX)) as u32).max(8) + 4
        } else {
            span
        }
    });

    let mut seed_line = String::new();
    let mut points: Vec<CurvePoint>;
    let summary: Result<InflectionReport, tiling::TilingError>;
    match args.mode {
        Mode::Simple => {
            points = d_curve_lattice(args.n, t_max)?;
            summary = inflection_from_d(&d_values(&points), args.n, 1);
        }
        Mode::LatticeLessSimple => {
            let mode = TilingMode::LessSimple { block_size: block };
            points = d_curve_lattice_with(args.n, t_max, mode, false)?;
            summary = inflection_from_d(&d_values(&points), args.n, block);
        }
        Mode::Montecarlo => {
            let trials = args.trials.unwrap_or(200);
            let seed = args.seed.unwrap_or_else(rand::random);
            seed_line = format!("# seed {seed}\n");
            points = d_curve_montecarlo(args.n, t_max, block, trials, seed)?;
            summary = inflection_from_d(&d_values(&points), args.n, block);
        }
        Mode::Formula => {
            points = d_curve_formula_range(args.n, t_max)?;
            summary = inflection_from_d(&d_values(&points), args.n, 1);
        }
        Mode::MCurve => {
            points = m_curve_range(args.n, t_max)?;
            let d = d_values(&d_curve_lattice(args.n, t_max)?);
            for (point, &d_value) in points.iter_mut().zip(d.iter()) {
                point.d_value = Some(d_value);
            }
            let m: Vec<f64> = points.iter().map(|p| p.m_value.unwrap()).collect();
            summary = inflection_from_intersection(&d, &m, args.n, 1);
        }
    }

    let content = match args.format {
        Format::Csv => {
            let summary_line = match &summary {
                Ok(r) => format!(
                    "# inflection t_0 {:.6} t_prime_0 {:.6} m_0_over_n {:.6} d_0 {:.6}\n",
                    r.t_0, r.t_prime_0, r.m_0_over_n, r.d_0
                ),
                Err(_) => String::from("# inflection unavailable on this curve\n"),
            };
            format!(
                "# {invocation}\n{seed_line}{summary_line}{}",
                tiling::curve_to_csv(args.n, &points)
            )
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "n": args.n,
                        "t": p.t,
                        "t_prime": p.t_prime,
                        "m_over_n": p.m_over_n,
                        "d_value": p.d_value,
                        "m_value": p.m_value,
                    })
                })
                .collect();
            let inflection = match &summary {
                Ok(r) => serde_json::json!({
                    "t_0": r.t_0,
                    "t_prime_0": r.t_prime_0,
                    "m_0_over_n": r.m_0_over_n,
                    "d_0": r.d_0,
                }),
                Err(_) => serde_json::Value::Null,
            };
            let doc = serde_json::json!({
                "invocation": invocation,
                "seed": seed_line.trim().strip_prefix("# seed "),
                "inflection": inflection,
                "rows": rows,
            });
            format!("{doc:#}\n")
        }
    };
    write_output(args.output.as_ref(), &content)?;
    Ok(0)
}

fn d_values(points: &[CurvePoint]) -> Vec<f64> {
    points.iter().filter_map(|p| p.d_value).collect()
}

fn cmd_count(args: CountArgs) -> Result<u8> {
    let instance = read_instance(&args.file)?;
    let count = match args.method {
        Method::Trie => solve(&instance, &OrderingStrategy::AsGiven, 0)?.model_count,
        Method::Iex => {
            let drop_contained = instance.clauses().len() > 2 * instance.n_vars() as usize;
            SignedCubeLedger::from_cubes(
                instance.n_vars(),
                &instance.to_cubes(),
                drop_contained,
            )?
            .free_volume()
        }
        Method::Oracle => instance.brute_force()?.model_count as u128,
    };
    println!("{count}");
    Ok(0)
}
