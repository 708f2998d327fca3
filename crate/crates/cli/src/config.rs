//! Run configuration: JSON schema, flag merging and resolution against the
//! case catalog.

use std::path::{Path, PathBuf};

use pielm::cases::{build_case_with, CaseOptions, Method, TestCase};
use pielm::dpielm::{DpielmConfig, DpielmSolver};
use pielm::geometry::{load_polygon, SampleStrategy};
use pielm::linalg::LsMethod;
use pielm::pielm::{EvalGrid, PielmConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the base directory for run outputs.
pub const OUT_DIR_ENV: &str = "PIELM_OUT_DIR";

/// Everything a run can be told. Field names match the JSON config keys and
/// the long flags (with `-` for `_`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub case: Option<String>,
    pub method: Option<String>,
    pub seed: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    /// `N*` for pielm, neurons per cell for dpielm.
    pub neurons: Option<usize>,
    /// `[N_f, N_bc]` or `[N_f, N_bc, N_ic]`.
    pub points: Option<Vec<usize>>,
    pub strategy: Option<String>,
    pub arch: Option<Vec<usize>>,
    pub solver: Option<String>,
    pub tol: Option<f64>,
    pub init_scale: Option<f64>,
    pub max_iter: Option<usize>,
    /// `201`, `101x51`, ...
    pub eval_grid: Option<String>,
    pub snapshots: Option<Vec<f64>>,
    pub out: Option<String>,
    pub paper_scale: Option<bool>,
    pub options: Option<CaseOverrides>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaseOverrides {
    pub nu: Option<f64>,
    pub tc9_speed: Option<f64>,
    pub tc10_angle: Option<f64>,
    /// `degrees` (default) or `radians`.
    pub tc10_angle_unit: Option<String>,
    pub tc10_center: Option<[f64; 2]>,
    pub tc10_t_end: Option<f64>,
    /// CSV outline replacing the star (tc4, tc5) or complex polygon (tc6).
    pub polygon: Option<String>,
    pub polygon_rescale: Option<bool>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merged_with(mut self, over: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            case, method, seed, seeds, neurons, points, strategy, arch, solver, tol, init_scale, max_iter,
            eval_grid, snapshots, out, paper_scale, options
        );
        self
    }
}

/// The network-specific part of a resolved run.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Pielm(PielmConfig),
    Dpielm(DpielmConfig),
}

impl Plan {
    pub fn with_seed(&self, seed: u64) -> Plan {
        match self {
            Plan::Pielm(c) => Plan::Pielm(PielmConfig { seed, ..c.clone() }),
            Plan::Dpielm(c) => Plan::Dpielm(DpielmConfig { seed, ..c.clone() }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub case: TestCase,
    pub method: Method,
    pub plan: Plan,
    pub seeds: Vec<u64>,
    pub eval_grid: EvalGrid,
    pub snapshots: Vec<f64>,
    pub out_dir: PathBuf,
    pub paper_scale: bool,
    pub options: CaseOverrides,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn case_options(id: &str, o: &CaseOverrides) -> Result<CaseOptions, CliError> {
    let mut opts = CaseOptions::default();
    opts.nu = o.nu;
    if let Some(v) = o.tc9_speed {
        opts.tc9_speed = v;
    }
    if let Some(v) = o.tc10_angle {
        opts.tc10_angle = v;
    }
    match o.tc10_angle_unit.as_deref() {
        None | Some("degrees") => {}
        Some("radians") => opts.tc10_angle_in_degrees = false,
        Some(other) => return Err(usage(format!("tc10_angle_unit must be degrees or radians, got `{other}`"))),
    }
    if let Some(c) = o.tc10_center {
        opts.tc10_center = c;
    }
    if let Some(t) = o.tc10_t_end {
        opts.tc10_t_end = t;
    }
    if let Some(path) = &o.polygon {
        let poly = load_polygon(path, o.polygon_rescale.unwrap_or(false)).map_err(|e| usage(e.to_string()))?;
        match id {
            "tc4" | "tc5" => opts.star = Some(poly),
            "tc6" => opts.complex = Some(poly),
            other => return Err(usage(format!("a polygon override only applies to tc4, tc5 and tc6, not {other}"))),
        }
    }
    Ok(opts)
}

pub fn parse_eval_grid(s: &str) -> Result<EvalGrid, CliError> {
    let counts: Option<Vec<usize>> = s
        .split('x')
        .map(|c| c.trim().parse::<usize>().ok().filter(|&n| n > 0))
        .collect();
    counts
        .map(|counts| EvalGrid { counts })
        .ok_or_else(|| usage(format!("eval grid must look like 201 or 101x51, got `{s}`")))
}

impl ResolvedRun {
    pub fn resolve(cfg: &RunConfig) -> Result<Self, CliError> {
        let id = cfg.case.as_deref().ok_or_else(|| usage("a case id is required (--case or \"case\" in the config)"))?;
        let overrides = cfg.options.clone().unwrap_or_default();
        let id = pielm::cases::normalize_id(id).map_err(|e| usage(e.to_string()))?;
        let case = build_case_with(id, &case_options(id, &overrides)?).map_err(|e| usage(e.to_string()))?;
        let method = match &cfg.method {
            Some(m) => m.parse::<Method>().map_err(|e| usage(e.to_string()))?,
            None => case.preferred_method(),
        };
        let paper_scale = cfg.paper_scale.unwrap_or(false);
        let plan = match method {
            Method::Pielm => Plan::Pielm(pielm_plan(&case, cfg)?),
            Method::Dpielm => Plan::Dpielm(dpielm_plan(&case, cfg, paper_scale)?),
        };
        let seeds = match (&cfg.seeds, cfg.seed) {
            (Some(s), _) if s.is_empty() => return Err(usage("--seeds needs at least one seed")),
            (Some(s), _) => s.clone(),
            (None, Some(s)) => vec![s],
            (None, None) => vec![1],
        };
        let domain = &case.problem.domain;
        let eval_grid = match &cfg.eval_grid {
            Some(s) => parse_eval_grid(s)?,
            None => EvalGrid::default_for(domain),
        };
        if eval_grid.counts.len() != domain.dim() {
            return Err(usage(format!(
                "{} needs a {}-axis eval grid, got {}",
                case.id,
                domain.dim(),
                eval_grid.describe()
            )));
        }
        let snapshots = match (domain.t_end(), &cfg.snapshots) {
            (None, Some(s)) if !s.is_empty() => return Err(usage(format!("{} is steady; snapshots need a time axis", case.id))),
            (None, _) => Vec::new(),
            (Some(t), None) => vec![0.0, t / 2.0, t],
            (Some(t), Some(s)) => {
                if let Some(bad) = s.iter().find(|v| !(0.0..=t).contains(*v)) {
                    return Err(usage(format!("snapshot time {bad} outside [0, {t}]")));
                }
                s.clone()
            }
        };
        let out_dir = match &cfg.out {
            Some(o) => PathBuf::from(o),
            None => {
                let base = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("results"));
                base.join(format!("{}_{}", case.id, method))
            }
        };
        Ok(Self {
            case,
            method,
            plan,
            seeds,
            eval_grid,
            snapshots,
            out_dir,
            paper_scale,
            options: overrides,
        })
    }
}

fn pielm_plan(case: &TestCase, cfg: &RunConfig) -> Result<PielmConfig, CliError> {
    if cfg.arch.is_some() {
        return Err(usage("--arch applies to dpielm; use --points and --neurons for pielm"));
    }
    let mut c = match (case.default_pielm.clone(), &cfg.points) {
        (Some(c), _) => c,
        (None, Some(_)) => PielmConfig {
            strategy: SampleStrategy::default_for(&case.problem.domain),
            ..PielmConfig::with_counts(0, 0, 0)
        },
        (None, None) => {
            return Err(usage(format!(
                "no reported pielm setting for {}; pass --points and --neurons",
                case.id
            )))
        }
    };
    if let Some(p) = &cfg.points {
        let (nf, nbc, nic) = match p.as_slice() {
            [nf, nbc] => (*nf, *nbc, 0),
            [nf, nbc, nic] => (*nf, *nbc, *nic),
            _ => return Err(usage("--points takes N_f,N_bc or N_f,N_bc,N_ic")),
        };
        if case.problem.domain.is_time_dependent() && nic == 0 {
            return Err(usage(format!("{} is time dependent; --points needs N_f,N_bc,N_ic", case.id)));
        }
        c.n_interior = nf;
        c.n_boundary = nbc;
        c.n_initial = nic;
        c.n_neurons = nf + nbc + nic;
        if matches!(c.strategy, SampleStrategy::Lattice(_)) {
            c.strategy = SampleStrategy::default_for(&case.problem.domain);
        }
    }
    if let Some(n) = cfg.neurons {
        c.n_neurons = n;
    }
    if let Some(s) = &cfg.strategy {
        c.strategy = s.parse().map_err(|e: pielm::Error| usage(e.to_string()))?;
    }
    if let Some(s) = &cfg.solver {
        c.method = s.parse::<LsMethod>().map_err(|e| usage(e.to_string()))?;
    }
    if cfg.max_iter.is_some() {
        return Err(usage("--max-iter applies to the iterative dpielm solver only"));
    }
    c.tolerance = cfg.tol.or(c.tolerance);
    if let Some(s) = cfg.init_scale {
        c.init_scale = s;
    }
    c.validate().map_err(|e| usage(e.to_string()))?;
    Ok(c)
}

fn dpielm_plan(case: &TestCase, cfg: &RunConfig, paper_scale: bool) -> Result<DpielmConfig, CliError> {
    if cfg.points.is_some() || cfg.strategy.is_some() {
        return Err(usage("--points/--strategy apply to pielm; use --arch for dpielm"));
    }
    let d = case.problem.domain.dim();
    let mut c = match (&case.default_dpielm, &cfg.arch) {
        (Some(c), _) => c.clone(),
        (None, Some(a)) => DpielmConfig::from_architecture(a, d).map_err(|e| usage(e.to_string()))?,
        (None, None) => {
            return Err(usage(format!("no reported dpielm architecture for {}; pass --arch", case.id)))
        }
    };
    let arch = match (&cfg.arch, paper_scale) {
        (Some(a), _) => Some(a.clone()),
        (None, true) if case.paper_scale_dpielm => case.reported_dpielm.clone(),
        _ => None,
    };
    if let Some(a) = arch {
        let parsed = DpielmConfig::from_architecture(&a, d).map_err(|e| usage(e.to_string()))?;
        c.cells = parsed.cells;
        c.points_per_cell = parsed.points_per_cell;
        c.neurons_per_cell = parsed.neurons_per_cell;
    }
    if let Some(n) = cfg.neurons {
        c.neurons_per_cell = n;
    }
    if let Some(s) = &cfg.solver {
        c.solver = s.parse::<DpielmSolver>().map_err(|e| usage(e.to_string()))?;
    }
    c.tolerance = cfg.tol.or(c.tolerance);
    if let Some(s) = cfg.init_scale {
        c.init_scale = s;
    }
    if let Some(m) = cfg.max_iter {
        c.max_iter = m;
    }
    if !case.problem.domain.is_box() {
        return Err(usage(format!("dpielm needs a box domain; {} is a polygon", case.id)));
    }
    if c.cells.iter().chain(&c.points_per_cell).any(|&n| n == 0) || c.neurons_per_cell == 0 {
        return Err(usage("architecture entries must all be >= 1"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(case: &str) -> RunConfig {
        RunConfig { case: Some(case.into()), ..RunConfig::default() }
    }

    #[test]
    fn eval_grid_syntax() {
        assert_eq!(parse_eval_grid("201").unwrap().counts, vec![201]);
        assert_eq!(parse_eval_grid("101x51").unwrap().counts, vec![101, 51]);
        assert!(parse_eval_grid("0").is_err());
        assert!(parse_eval_grid("10xa").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let file = RunConfig { seed: Some(1), neurons: Some(10), ..cfg("tc1") };
        let flags = RunConfig { seed: Some(9), ..RunConfig::default() };
        let merged = file.merged_with(flags);
        assert_eq!((merged.seed, merged.neurons, merged.case.as_deref()), (Some(9), Some(10), Some("tc1")));
    }

    #[test]
    fn point_flags_reset_neurons() {
        let run = ResolvedRun::resolve(&RunConfig { points: Some(vec![30, 2]), ..cfg("tc2") }).unwrap();
        let Plan::Pielm(c) = run.plan else { panic!("tc2 resolves to pielm") };
        assert_eq!((c.n_interior, c.n_boundary, c.n_neurons), (30, 2, 32));
        assert!(ResolvedRun::resolve(&RunConfig { arch: Some(vec![2, 5, 5]), ..cfg("tc2") }).is_err());
    }

    #[test]
    fn time_dependent_defaults() {
        let run = ResolvedRun::resolve(&cfg("tc7")).unwrap();
        assert_eq!(run.snapshots, vec![0.0, 0.25, 0.5]);
        assert_eq!(run.seeds, vec![1]);
        assert_eq!(run.method, Method::Pielm);
    }

    #[test]
    fn scale_flag_selects_the_full_grid() {
        let desk = ResolvedRun::resolve(&cfg("tc10")).unwrap();
        let paper = ResolvedRun::resolve(&RunConfig { paper_scale: Some(true), ..cfg("tc10") }).unwrap();
        let arch = |r: &ResolvedRun| match &r.plan {
            Plan::Dpielm(c) => c.architecture(),
            Plan::Pielm(_) => panic!("tc10 resolves to dpielm"),
        };
        assert_eq!(arch(&desk), vec![6, 6, 10, 3, 3, 3, 20]);
        assert_eq!(arch(&paper), vec![20, 20, 50, 3, 3, 3, 30]);
    }
}
