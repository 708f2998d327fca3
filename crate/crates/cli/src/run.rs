//! Training, evaluation and artifact writing for `run` and `sweep`.

use std::path::Path;

use pielm::dpielm::{error_report_dpielm, evaluate_points, train_dpielm, DpielmModel};
use pielm::geometry::Domain;
use pielm::linalg::DenseMatrix;
use pielm::operator::ScalarField;
use pielm::pielm::{error_report, evaluate, train, ErrorReport, EvalGrid, PielmModel};
use serde::{Deserialize, Serialize};

use crate::config::{CaseOverrides, Plan, ResolvedRun};
use crate::output::{solution_csv, write_atomic};
use crate::CliError;

/// Error magnitude above which a run is flagged as a failure mode.
pub const FAILURE_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub neurons: usize,
    pub points: Option<Vec<usize>>,
    pub strategy: Option<String>,
    pub arch: Option<Vec<usize>>,
    pub solver: String,
    pub tol: Option<f64>,
    pub init_scale: f64,
    pub max_iter: Option<usize>,
    pub paper_scale: bool,
    pub snapshots: Vec<f64>,
    pub options: CaseOverrides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub t: f64,
    pub location: Vec<f64>,
    pub predicted: f64,
    pub exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `max_abs_error > 0.1`.
    pub exceeds_failure_threshold: bool,
    /// Error sign flips along `x` at `t = T/2` (1D space-time only).
    pub sign_changes_mid_time: Option<usize>,
    /// Largest predicted value at each snapshot time.
    pub peaks: Vec<PeakRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub status: String,
    pub failure: Option<String>,
    pub max_abs_error: Option<f64>,
    pub l2_error: Option<f64>,
    pub train_residual: Option<f64>,
    pub shape: Option<[usize; 2]>,
    pub solver_used: Option<String>,
    pub converged: Option<bool>,
    pub iterations: Option<usize>,
    pub train_time_s: Option<f64>,
    pub diagnostics: Option<Diagnostics>,
}

/// Top-level error fields are medians over the successful seeds, so a
/// one-seed sweep reads the same as a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub case: String,
    pub method: String,
    pub config: ConfigEcho,
    pub eval_grid: String,
    pub seeds: Vec<u64>,
    pub status: String,
    pub max_abs_error: Option<f64>,
    pub l2_error: Option<f64>,
    pub train_residual: Option<f64>,
    pub worst_max_abs_error: Option<f64>,
    pub shape: Option<[usize; 2]>,
    pub train_time_s: Option<f64>,
    pub runs: Vec<SeedRun>,
}

impl RunSummary {
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("summary serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn failed(&self) -> bool {
        self.status != "ok"
    }
}

pub enum Trained {
    Pielm(PielmModel),
    Dpielm(DpielmModel),
}

impl Trained {
    pub fn evaluate(&self, points: &DenseMatrix) -> pielm::Result<Vec<f64>> {
        match self {
            Trained::Pielm(m) => evaluate(m, points),
            Trained::Dpielm(m) => evaluate_points(m, points),
        }
    }

    pub fn report(&self, exact: &ScalarField, domain: &Domain, grid: &EvalGrid) -> pielm::Result<ErrorReport> {
        match self {
            Trained::Pielm(m) => error_report(m, exact, domain, grid),
            Trained::Dpielm(m) => error_report_dpielm(m, exact, domain, grid),
        }
    }
}

pub fn train_plan(run: &ResolvedRun, plan: &Plan) -> pielm::Result<Trained> {
    match plan {
        Plan::Pielm(c) => train(&run.case.problem, c).map(Trained::Pielm),
        Plan::Dpielm(c) => train_dpielm(&run.case.problem, c).map(Trained::Dpielm),
    }
}

fn echo(run: &ResolvedRun) -> ConfigEcho {
    match &run.plan {
        Plan::Pielm(c) => ConfigEcho {
            neurons: c.n_neurons,
            points: Some(if run.case.problem.domain.is_time_dependent() {
                vec![c.n_interior, c.n_boundary, c.n_initial]
            } else {
                vec![c.n_interior, c.n_boundary]
            }),
            strategy: Some(c.strategy.to_string()),
            arch: None,
            solver: c.method.to_string(),
            tol: c.tolerance,
            init_scale: c.init_scale,
            max_iter: None,
            paper_scale: run.paper_scale,
            snapshots: run.snapshots.clone(),
            options: run.options.clone(),
        },
        Plan::Dpielm(c) => ConfigEcho {
            neurons: c.neurons_per_cell,
            points: None,
            strategy: None,
            arch: Some(c.architecture()),
            solver: c.solver.to_string(),
            tol: c.tolerance,
            init_scale: c.init_scale,
            max_iter: Some(c.max_iter),
            paper_scale: run.paper_scale,
            snapshots: run.snapshots.clone(),
            options: run.options.clone(),
        },
    }
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

fn failed_run(seed: u64, reason: String) -> SeedRun {
    SeedRun {
        seed,
        status: "failed".into(),
        failure: Some(reason),
        max_abs_error: None,
        l2_error: None,
        train_residual: None,
        shape: None,
        solver_used: None,
        converged: None,
        iterations: None,
        train_time_s: None,
        diagnostics: None,
    }
}

fn diagnostics(run: &ResolvedRun, report: &ErrorReport) -> Diagnostics {
    let domain = &run.case.problem.domain;
    let mut diag = Diagnostics {
        exceeds_failure_threshold: report.max_abs_error > FAILURE_THRESHOLD,
        sign_changes_mid_time: None,
        peaks: Vec::new(),
    };
    if let Some(t_end) = domain.t_end() {
        let t_axis = domain.dim() - 1;
        let n_t = *run.eval_grid.counts.last().expect("grid has a time axis");
        // Snap to the nearest eval-grid time level so the slice is populated.
        let level = |t: f64| -> f64 {
            if n_t == 1 {
                return 0.5 * t_end;
            }
            let k = (t / t_end * (n_t - 1) as f64).round() as usize;
            pielm::geometry::lattice(&[0.0], &[t_end], &[n_t], false).get(k.min(n_t - 1), 0)
        };
        if domain.spatial_dim() == 1 {
            diag.sign_changes_mid_time = Some(report.error_sign_changes(t_axis, level(0.5 * t_end)));
        }
        for &t in &run.snapshots {
            if let Some(p) = report.peak_on_slice(t_axis, level(t)) {
                diag.peaks.push(PeakRecord {
                    t: level(t),
                    location: p.point[..t_axis].to_vec(),
                    predicted: p.predicted,
                    exact: p.exact,
                });
            }
        }
    }
    diag
}

/// Trains one seed and returns its record together with the model and report.
pub fn run_seed(run: &ResolvedRun, seed: u64, timing: bool) -> (SeedRun, Option<(Trained, ErrorReport)>) {
    let plan = run.plan.with_seed(seed);
    let trained = match train_plan(run, &plan) {
        Ok(t) => t,
        Err(e) => return (failed_run(seed, e.to_string()), None),
    };
    let report = match trained.report(&run.case.exact, &run.case.problem.domain, &run.eval_grid) {
        Ok(r) => r,
        Err(e) => return (failed_run(seed, e.to_string()), None),
    };
    if !report.max_abs_error.is_finite() || report.predicted.iter().any(|v| !v.is_finite()) {
        return (failed_run(seed, "solver produced non-finite predictions".into()), None);
    }
    let (residual, shape, solver_used, converged, iterations, time) = match &trained {
        Trained::Pielm(m) => (
            m.train_residual,
            [m.shape.0, m.shape.1],
            plan_method(&plan),
            None,
            None,
            m.train_time_s,
        ),
        Trained::Dpielm(m) => (
            m.train_residual,
            [m.shape.0, m.shape.1],
            m.method_used.to_string(),
            Some(m.converged),
            Some(m.iterations),
            m.train_time_s,
        ),
    };
    let record = SeedRun {
        seed,
        status: if converged == Some(false) { "not_converged".into() } else { "ok".into() },
        failure: if converged == Some(false) {
            Some("iterative solver hit max_iter before the tolerance".into())
        } else {
            None
        },
        max_abs_error: Some(report.max_abs_error),
        l2_error: Some(report.l2_error),
        train_residual: Some(residual),
        shape: Some(shape),
        solver_used: Some(solver_used),
        converged,
        iterations,
        train_time_s: timing.then_some(time),
        diagnostics: Some(diagnostics(run, &report)),
    };
    (record, Some((trained, report)))
}

fn plan_method(plan: &Plan) -> String {
    match plan {
        Plan::Pielm(c) => c.method.to_string(),
        Plan::Dpielm(c) => c.solver.to_string(),
    }
}

pub fn summarize(run: &ResolvedRun, runs: Vec<SeedRun>, timing: bool) -> RunSummary {
    let ok: Vec<&SeedRun> = runs.iter().filter(|r| r.max_abs_error.is_some()).collect();
    let pick = |f: fn(&SeedRun) -> Option<f64>| median(ok.iter().filter_map(|r| f(r)).collect());
    let n_ok = runs.iter().filter(|r| r.status == "ok").count();
    RunSummary {
        case: run.case.id.to_string(),
        method: run.method.to_string(),
        config: echo(run),
        eval_grid: run.eval_grid.describe(),
        seeds: runs.iter().map(|r| r.seed).collect(),
        status: if n_ok == runs.len() { "ok".into() } else if n_ok == 0 { "failed".into() } else { "partial".into() },
        max_abs_error: pick(|r| r.max_abs_error),
        l2_error: pick(|r| r.l2_error),
        train_residual: pick(|r| r.train_residual),
        worst_max_abs_error: ok.iter().filter_map(|r| r.max_abs_error).reduce(f64::max),
        shape: ok.first().and_then(|r| r.shape),
        train_time_s: if timing { pick(|r| r.train_time_s) } else { None },
        runs,
    }
}

/// Per-snapshot CSVs over the spatial eval grid at each requested time.
fn write_snapshots(run: &ResolvedRun, trained: &Trained, dir: &Path) -> Result<(), CliError> {
    let domain = &run.case.problem.domain;
    if run.snapshots.is_empty() {
        return Ok(());
    }
    let spatial = domain.spatial();
    let spatial_grid = EvalGrid {
        counts: run.eval_grid.counts[..domain.dim() - 1].to_vec(),
    };
    let base = spatial_grid.points(spatial).map_err(CliError::Solver)?;
    for &t in &run.snapshots {
        let d = base.cols();
        let pts = DenseMatrix::from_fn(base.rows(), d + 1, |i, j| if j < d { base.get(i, j) } else { t })
            .map_err(CliError::Solver)?;
        let pred = trained.evaluate(&pts).map_err(CliError::Solver)?;
        let report = ErrorReport::from_values(pts, pred, &run.case.exact, spatial_grid.describe())
            .map_err(CliError::Solver)?;
        let name = format!("snapshot_t{t}.csv");
        write_atomic(&dir.join(name), &solution_csv(domain, &report))?;
    }
    Ok(())
}

/// `run`: one seed, solution CSV, snapshots and summary.
pub fn execute_run(run: &ResolvedRun, timing: bool) -> Result<RunSummary, CliError> {
    std::fs::create_dir_all(&run.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", run.out_dir.display())))?;
    let seed = run.seeds[0];
    let (record, trained) = run_seed(run, seed, timing);
    let summary = summarize(run, vec![record], timing);
    if let Some((model, report)) = &trained {
        write_atomic(&run.out_dir.join("solution.csv"), &solution_csv(&run.case.problem.domain, report))?;
        write_snapshots(run, model, &run.out_dir)?;
    }
    write_atomic(&run.out_dir.join("summary.json"), &summary.to_json())?;
    Ok(summary)
}

/// `sweep`: every seed in order; failures are recorded and the sweep goes on.
pub fn execute_sweep(run: &ResolvedRun, timing: bool) -> Result<RunSummary, CliError> {
    std::fs::create_dir_all(&run.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", run.out_dir.display())))?;
    let runs = run.seeds.iter().map(|&s| run_seed(run, s, timing).0).collect();
    let summary = summarize(run, runs, timing);
    write_atomic(&run.out_dir.join("summary.json"), &summary.to_json())?;
    Ok(summary)
}
