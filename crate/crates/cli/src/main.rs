use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pielm_cli::config::{RunConfig, ResolvedRun};
use pielm_cli::run::{execute_run, execute_sweep, RunSummary};
use pielm_cli::{list, CliError, EXIT_SOLVER, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "pielm", version, about = "Physics-informed extreme learning machine benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one seed and write solution.csv, snapshots and summary.json.
    Run(RunArgs),
    /// Train several seeds and write a summary with per-seed errors.
    Sweep(RunArgs),
    /// Print the case catalog.
    List,
}

#[derive(Clone)]
struct Seeds(Vec<u64>);

/// `1,2,3` or `1..5` (inclusive).
fn parse_seeds(s: &str) -> Result<Seeds, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad seed range `{s}`"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad seed range `{s}`"))?;
        if a > b {
            return Err(format!("empty seed range `{s}`"));
        }
        return Ok(Seeds((a..=b).collect()));
    }
    s.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|_| format!("cannot parse `{p}` in `{s}`")))
        .collect::<Result<_, _>>()
        .map(Seeds)
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["case", "config"]))]
struct RunArgs {
    /// Case id, tc1 … tc15.
    #[arg(long)]
    case: Option<String>,
    /// JSON run configuration (same keys as the flags).
    #[arg(long)]
    config: Option<PathBuf>,
    /// pielm or dpielm.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma list or inclusive range, e.g. `1..5`.
    #[arg(long, value_parser = parse_seeds)]
    seeds: Option<Seeds>,
    /// N* for pielm, neurons per cell for dpielm.
    #[arg(long)]
    neurons: Option<usize>,
    /// N_f,N_bc[,N_ic] for pielm.
    #[arg(long, value_delimiter = ',')]
    points: Option<Vec<usize>>,
    /// grid, halton or lattice:AxB.
    #[arg(long)]
    strategy: Option<String>,
    /// DPIELM architecture, e.g. 10,10,5,5,30.
    #[arg(long, value_delimiter = ',')]
    arch: Option<Vec<usize>>,
    /// svd|qr|ridge (pielm) or auto|densify_svd|iterative_lsqr (dpielm).
    #[arg(long)]
    solver: Option<String>,
    /// SVD cutoff, ridge lambda or LSQR stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    init_scale: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Output directory (default $PIELM_OUT_DIR/<case>_<method> or results/<case>_<method>).
    #[arg(long)]
    out: Option<String>,
    /// Evaluation grid, e.g. 201 or 101x51.
    #[arg(long)]
    eval_grid: Option<String>,
    /// Snapshot times for time-dependent cases.
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<f64>>,
    /// Use the reported architecture even where it is paper-scale (tc10).
    #[arg(long)]
    paper_scale: bool,
    /// Record wall-clock training time (makes summaries run-dependent).
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if self.config.is_some() && base.case.is_none() {
            return Err(CliError::Usage("config file must name a \"case\"".into()));
        }
        let flags = RunConfig {
            case: self.case.clone(),
            method: self.method.clone(),
            seed: self.seed,
            seeds: self.seeds.clone().map(|s| s.0),
            neurons: self.neurons,
            points: self.points.clone(),
            strategy: self.strategy.clone(),
            arch: self.arch.clone(),
            solver: self.solver.clone(),
            tol: self.tol,
            init_scale: self.init_scale,
            max_iter: self.max_iter,
            eval_grid: self.eval_grid.clone(),
            snapshots: self.snapshots.clone(),
            out: self.out.clone(),
            paper_scale: self.paper_scale.then_some(true),
            options: None,
        };
        Ok(base.merged_with(flags))
    }
}

fn report(summary: &RunSummary, out: &std::path::Path) {
    let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}"));
    println!(
        "{} {} seeds={:?} status={} max_abs_error={} l2_error={} train_residual={} -> {}",
        summary.case,
        summary.method,
        summary.seeds,
        summary.status,
        fmt(summary.max_abs_error),
        fmt(summary.l2_error),
        fmt(summary.train_residual),
        out.display()
    );
    for r in summary.runs.iter().filter(|r| r.failure.is_some()) {
        eprintln!("seed {}: {}", r.seed, r.failure.as_deref().unwrap_or(""));
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let (args, sweep) = match cli.command {
        Command::List => {
            print!("{}", list::list_cases());
            return Ok(0);
        }
        Command::Run(a) => (a, false),
        Command::Sweep(a) => (a, true),
    };
    let resolved = ResolvedRun::resolve(&args.to_config()?)?;
    if resolved.case.paper_scale_dpielm && resolved.paper_scale {
        eprintln!("note: running the paper-scale architecture; expect long runtimes and large memory use");
    }
    let summary = if sweep {
        execute_sweep(&resolved, args.timing)?
    } else {
        execute_run(&resolved, args.timing)?
    };
    report(&summary, &resolved.out_dir);
    Ok(if summary.failed() { EXIT_SOLVER } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
