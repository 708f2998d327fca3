//! The fifteen benchmark problems `tc1` … `tc15` with their exact solutions,
//! manufactured sources and default network sizes.

use std::f64::consts::PI;
use std::fmt;

use crate::dpielm::{DpielmConfig, DpielmSolver};
use crate::error::{Error, Result};
use crate::geometry::{bundled_complex_polygon, star_polygon, Domain, Polygon, SampleStrategy};
use crate::linalg::BlockMethod;
use crate::operator::{
    constant_field, field, BoundarySpec, Coefficient, FaceSelection, LinearPde, Problem, ScalarField,
};
use crate::pielm::PielmConfig;

/// Default hidden-layer half-width for single networks (box-normalized inputs).
pub const PIELM_SCALE: f64 = 1.0;
/// Default half-width for per-cell networks (cell-normalized inputs).
pub const DPIELM_SCALE: f64 = 0.5;
/// tc1 carries a `sin(6 pi x)` mode that needs steeper features.
pub const TC1_SCALE: f64 = 2.0;

pub const CASE_IDS: [&str; 15] = [
    "tc1", "tc2", "tc3", "tc4", "tc5", "tc6", "tc7", "tc8", "tc9", "tc10", "tc11", "tc12", "tc13",
    "tc14", "tc15",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Pielm,
    Dpielm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Pielm => "pielm",
            Method::Dpielm => "dpielm",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pielm" => Ok(Method::Pielm),
            "dpielm" => Ok(Method::Dpielm),
            other => Err(Error::InvalidArgument(format!(
                "unknown method `{other}` (expected pielm or dpielm)"
            ))),
        }
    }
}

/// Knobs for the parameters the case definitions leave open.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseOptions {
    /// Diffusion for tc3/tc9/tc10/tc14 (defaults 0.2, 0.005, 0.005, 0.02).
    pub nu: Option<f64>,
    /// Advection speed of the tc9 hump.
    pub tc9_speed: f64,
    /// tc10 flow angle and whether it is in degrees.
    pub tc10_angle: f64,
    pub tc10_angle_in_degrees: bool,
    /// tc10 hump centre at `t = 0`.
    pub tc10_center: [f64; 2],
    /// Time horizon for tc10.
    pub tc10_t_end: f64,
    /// Replacement domains for the star (tc4, tc5) and complex polygon (tc6).
    pub star: Option<Polygon>,
    pub complex: Option<Polygon>,
}

impl Default for CaseOptions {
    fn default() -> Self {
        Self {
            nu: None,
            tc9_speed: 1.0,
            tc10_angle: 22.5,
            tc10_angle_in_degrees: true,
            tc10_center: [0.0, 0.0],
            tc10_t_end: 0.5,
            star: None,
            complex: None,
        }
    }
}

#[derive(Clone)]
pub struct TestCase {
    pub id: &'static str,
    pub description: &'static str,
    pub problem: Problem,
    pub exact: ScalarField,
    /// Runnable single-network configuration.
    pub default_pielm: Option<PielmConfig>,
    /// Runnable cell-decomposed configuration (a reduced grid when the
    /// reported one is impractical on a desktop).
    pub default_dpielm: Option<DpielmConfig>,
    /// Architecture vector as reported, and whether running it is paper-scale.
    pub reported_dpielm: Option<Vec<usize>>,
    pub paper_scale_dpielm: bool,
    /// Reported order of the maximum error, where one is given.
    pub expected_order: Option<f64>,
    /// Locations of jumps and kinks in the target (tc11).
    pub singular_points: Vec<f64>,
}

impl fmt::Debug for TestCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestCase")
            .field("id", &self.id)
            .field("description", &self.description)
            .field("problem", &self.problem)
            .field("default_pielm", &self.default_pielm)
            .field("default_dpielm", &self.default_dpielm)
            .field("reported_dpielm", &self.reported_dpielm)
            .field("expected_order", &self.expected_order)
            .finish_non_exhaustive()
    }
}

impl TestCase {
    pub fn methods(&self) -> Vec<Method> {
        let mut m = Vec::new();
        if self.default_pielm.is_some() {
            m.push(Method::Pielm);
        }
        if self.default_dpielm.is_some() {
            m.push(Method::Dpielm);
        }
        m
    }

    pub fn preferred_method(&self) -> Method {
        if self.default_pielm.is_some() && self.reported_dpielm.is_none() {
            Method::Pielm
        } else {
            Method::Dpielm
        }
    }
}

/// Default configuration as reported for `(id, method)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Architecture {
    Pielm(PielmConfig),
    Dpielm { config: DpielmConfig, paper_scale: bool },
}

pub fn normalize_id(id: &str) -> Result<&'static str> {
    let lower = id.trim().to_ascii_lowercase().replace(['-', '_'], "");
    CASE_IDS
        .iter()
        .copied()
        .find(|c| *c == lower)
        .ok_or_else(|| Error::UnknownCase {
            given: id.to_string(),
            valid: CASE_IDS.join(", "),
        })
}

pub fn build_case(id: &str) -> Result<TestCase> {
    build_case_with(id, &CaseOptions::default())
}

pub fn all_cases() -> Vec<TestCase> {
    CASE_IDS.iter().map(|id| build_case(id).expect("catalog ids build")).collect()
}

/// Defaults as reported; tc10's reported grid comes back flagged paper-scale.
pub fn default_architecture(id: &str, method: Method) -> Result<Architecture> {
    let case = build_case(id)?;
    let unreported = || Error::UnreportedArchitecture {
        case: case.id.to_string(),
        method: method.to_string(),
    };
    match method {
        Method::Pielm => case.default_pielm.clone().map(Architecture::Pielm).ok_or_else(unreported),
        Method::Dpielm => {
            let arch = case.reported_dpielm.clone().ok_or_else(unreported)?;
            let mut config = case.default_dpielm.clone().ok_or_else(unreported)?;
            let d = case.problem.domain.dim();
            let parsed = DpielmConfig::from_architecture(&arch, d)?;
            config.cells = parsed.cells;
            config.points_per_cell = parsed.points_per_cell;
            config.neurons_per_cell = parsed.neurons_per_cell;
            Ok(Architecture::Dpielm {
                config,
                paper_scale: case.paper_scale_dpielm,
            })
        }
    }
}

fn pielm_config(n_f: usize, n_bc: usize, n_ic: usize, n_star: usize, init_scale: f64, strategy: SampleStrategy) -> PielmConfig {
    PielmConfig {
        n_neurons: n_star,
        init_scale,
        strategy,
        ..PielmConfig::with_counts(n_f, n_bc, n_ic)
    }
}

fn dpielm_config(arch: &[usize], dim: usize, init_scale: f64) -> DpielmConfig {
    DpielmConfig {
        init_scale,
        ..DpielmConfig::from_architecture(arch, dim).expect("catalog architecture is well formed")
    }
}

fn dpielm_lsqr(arch: &[usize], dim: usize, init_scale: f64) -> DpielmConfig {
    DpielmConfig {
        solver: DpielmSolver::Block(BlockMethod::IterativeLsqr),
        ..dpielm_config(arch, dim, init_scale)
    }
}

fn interval(lo: f64, hi: f64) -> Domain {
    Domain::interval(lo, hi).expect("catalog interval")
}

fn space_time(spatial: Domain, t_end: f64) -> Domain {
    Domain::time_extruded(spatial, t_end).expect("catalog time horizon")
}

fn unit_square() -> Domain {
    Domain::rectangle([0.0, 1.0], [0.0, 1.0]).expect("catalog square")
}

/// Maps `x` into `[-1, 1)` by period 2.
fn wrap_periodic(x: f64) -> f64 {
    (x + 1.0).rem_euclid(2.0) - 1.0
}

/// `(e^{x/ν} − 1) / (e^{1/ν} − 1)`, written to avoid overflow for small `ν`.
pub fn boundary_layer(x: f64, nu: f64) -> f64 {
    (((x - 1.0) / nu).exp() - (-1.0 / nu).exp()) / (1.0 - (-1.0 / nu).exp())
}

/// Piecewise tc11 target with `sgn(0) = 0`.
pub fn composite_target(x: f64) -> f64 {
    fn sgn(v: f64) -> f64 {
        if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
    if x <= -0.5 {
        0.5 * (sgn(x + 0.8) - sgn(x + 0.5))
    } else if x <= 0.5 {
        (-100.0 * x * x).exp()
    } else if x <= 0.65 {
        20.0 / 3.0 * x - 10.0 / 3.0
    } else if x <= 0.8 {
        -20.0 / 3.0 * x + 16.0 / 3.0
    } else {
        0.0
    }
}

fn steady_1d(
    advection: f64,
    nu: f64,
    exact: ScalarField,
    source: ScalarField,
) -> Result<(Problem, ScalarField)> {
    let pde = LinearPde::new(1, 0.0, vec![Coefficient::Constant(advection)], vec![nu], 0.0, source)?;
    let problem = Problem::new(
        pde,
        interval(0.0, 1.0),
        BoundarySpec::dirichlet(exact.clone()),
        None,
        Some(exact.clone()),
    )?;
    Ok((problem, exact))
}

fn periodic_advection(f: fn(f64) -> f64) -> Result<(Problem, ScalarField)> {
    let exact = field(move |p: &[f64]| f(wrap_periodic(p[0] - p[1])));
    let pde = LinearPde::new(1, 1.0, vec![Coefficient::Constant(1.0)], vec![0.0], 0.0, constant_field(0.0))?;
    let problem = Problem::new(
        pde,
        space_time(interval(-1.0, 1.0), 0.5),
        BoundarySpec::Periodic,
        Some(field(move |x: &[f64]| f(x[0]))),
        Some(exact.clone()),
    )?;
    Ok((problem, exact))
}

pub fn build_case_with(id: &str, opts: &CaseOptions) -> Result<TestCase> {
    let id = normalize_id(id)?;
    let mut case = TestCase {
        id,
        description: "",
        problem: placeholder_problem(),
        exact: constant_field(0.0),
        default_pielm: None,
        default_dpielm: None,
        reported_dpielm: None,
        paper_scale_dpielm: false,
        expected_order: None,
        singular_points: Vec::new(),
    };
    let grid = SampleStrategy::Grid;
    let halton = SampleStrategy::Halton;
    let st_lattice = SampleStrategy::Lattice(vec![20, 21]);
    let (problem, exact) = match id {
        "tc1" => {
            case.description = "steady 1D advection u_x = R on [0,1]";
            case.expected_order = Some(1e-4);
            case.default_pielm = Some(pielm_config(40, 2, 0, 42, TC1_SCALE, grid));
            let exact = field(|p: &[f64]| (2.0 * PI * p[0]).sin() * (4.0 * PI * p[0]).cos() + 1.0);
            let source = field(|p: &[f64]| {
                let x = p[0];
                2.0 * PI * (2.0 * PI * x).cos() * (4.0 * PI * x).cos()
                    - 4.0 * PI * (2.0 * PI * x).sin() * (4.0 * PI * x).sin()
            });
            steady_1d(1.0, 0.0, exact, source)?
        }
        "tc2" => {
            case.description = "steady 1D diffusion u_xx = R on [0,1]";
            case.expected_order = Some(1e-4);
            case.default_pielm = Some(pielm_config(40, 2, 0, 42, PIELM_SCALE, grid));
            let exact = field(|p: &[f64]| (PI * p[0] / 2.0).sin() * (2.0 * PI * p[0]).cos() + 1.0);
            // Stored as -u_xx = -R so the diffusion coefficient stays nonnegative.
            let source = field(|p: &[f64]| {
                let x = p[0];
                let s = (PI * x / 2.0).sin();
                let c = (PI * x / 2.0).cos();
                17.0 * PI * PI / 4.0 * s * (2.0 * PI * x).cos() + 2.0 * PI * PI * c * (2.0 * PI * x).sin()
            });
            steady_1d(0.0, 1.0, exact, source)?
        }
        "tc3" | "tc14" => {
            let tc3 = id == "tc3";
            let nu = opts.nu.unwrap_or(if tc3 { 0.2 } else { 0.02 });
            if tc3 {
                case.description = "steady 1D advection-diffusion u_x - nu u_xx = 0, nu = 0.2";
                case.expected_order = Some(1e-6);
                case.default_pielm = Some(pielm_config(20, 2, 0, 22, PIELM_SCALE, grid));
            } else {
                case.description = "steady 1D advection-diffusion with a thin layer, nu = 0.02";
                case.default_pielm = Some(pielm_config(20, 2, 0, 22, PIELM_SCALE, grid));
                case.reported_dpielm = Some(vec![20, 5, 20]);
                case.default_dpielm = Some(dpielm_config(&[20, 5, 20], 1, DPIELM_SCALE));
            }
            let exact = field(move |p: &[f64]| boundary_layer(p[0], nu));
            steady_1d(1.0, nu, exact, constant_field(0.0))?
        }
        "tc4" | "tc5" => {
            let star = opts.star.clone().map_or_else(|| star_polygon(1.0, 0.5), Ok)?;
            let domain = Domain::polygon(star);
            let (pde, exact) = if id == "tc4" {
                case.description = "steady 2D advection u_x + 0.5 u_y = R on a star";
                case.expected_order = Some(1e-6);
                let (a, b) = (1.0, 0.5);
                let exact = field(|p: &[f64]| 0.5 * (PI * p[0]).cos() * (PI * p[1]).sin());
                let source = field(move |p: &[f64]| {
                    let (x, y) = (p[0], p[1]);
                    -a * 0.5 * PI * (PI * x).sin() * (PI * y).sin() + b * 0.5 * PI * (PI * x).cos() * (PI * y).cos()
                });
                let adv = vec![Coefficient::Constant(a), Coefficient::Constant(b)];
                (LinearPde::new(2, 0.0, adv, vec![0.0, 0.0], 0.0, source)?, exact)
            } else {
                case.description = "steady 2D diffusion u_xx + u_yy = R on a star";
                case.expected_order = Some(1e-4);
                let exact = field(|p: &[f64]| 0.5 + (-(2.0 * p[0] * p[0] + 4.0 * p[1] * p[1])).exp());
                let source = field(|p: &[f64]| {
                    let (x, y) = (p[0], p[1]);
                    -(16.0 * x * x + 64.0 * y * y - 12.0) * (-(2.0 * x * x + 4.0 * y * y)).exp()
                });
                (laplacian(source)?, exact)
            };
            case.default_pielm = Some(pielm_config(921, 240, 0, 2000, PIELM_SCALE, halton));
            let problem = Problem::new(pde, domain, BoundarySpec::dirichlet(exact.clone()), None, Some(exact.clone()))?;
            (problem, exact)
        }
        "tc6" => {
            case.description = "steady 2D diffusion on a complex polygon";
            case.expected_order = Some(1e-7);
            case.default_pielm = Some(pielm_config(1489, 881, 0, 5000, PIELM_SCALE, halton));
            let poly = opts.complex.clone().unwrap_or_else(bundled_complex_polygon);
            let r2 = |p: &[f64]| (p[0] - 0.6).powi(2) + (p[1] - 0.6).powi(2);
            let exact = field(move |p: &[f64]| 0.5 + (-r2(p)).exp());
            let source = field(move |p: &[f64]| -(4.0 * r2(p) - 4.0) * (-r2(p)).exp());
            let problem = Problem::new(
                laplacian(source)?,
                Domain::polygon(poly),
                BoundarySpec::dirichlet(exact.clone()),
                None,
                Some(exact.clone()),
            )?;
            (problem, exact)
        }
        "tc7" => {
            case.description = "unsteady 1D advection u_t + u_x = 0, periodic, F = sin(pi x)";
            case.default_pielm = Some(pielm_config(420, 21, 20, 440, PIELM_SCALE, st_lattice));
            periodic_advection(|x| (PI * x).sin())?
        }
        "tc8" => {
            case.description = "unsteady 1D advection u_t + (1+x) u_x = 0, inflow at x = -1";
            case.default_pielm = Some(pielm_config(420, 21, 20, 440, PIELM_SCALE, st_lattice));
            let f = |x: f64| (PI * x).sin();
            let exact = field(move |p: &[f64]| f((1.0 + p[0]) * (-p[1]).exp() - 1.0));
            let pde = LinearPde::new(
                1,
                1.0,
                vec![Coefficient::Field(field(|p: &[f64]| 1.0 + p[0]))],
                vec![0.0],
                0.0,
                constant_field(0.0),
            )?;
            let domain = space_time(interval(-1.0, 1.0), 0.5);
            let inflow = domain.box_face_tag(0, false).expect("left face");
            let problem = Problem::new(
                pde,
                domain,
                BoundarySpec::Dirichlet {
                    data: exact.clone(),
                    faces: FaceSelection::Only(vec![inflow]),
                },
                Some(field(move |x: &[f64]| f(x[0]))),
                Some(exact.clone()),
            )?;
            (problem, exact)
        }
        "tc9" => {
            case.description = "unsteady 1D advection-diffusion of a Gaussian hump, nu = 0.005";
            let nu = opts.nu.unwrap_or(0.005);
            let a = opts.tc9_speed;
            case.default_pielm = Some(pielm_config(1200, 30, 40, 1300, PIELM_SCALE, SampleStrategy::Lattice(vec![40, 30])));
            case.reported_dpielm = Some(vec![10, 10, 5, 5, 30]);
            case.default_dpielm = Some(dpielm_lsqr(&[10, 10, 5, 5, 30], 2, DPIELM_SCALE));
            let exact = field(move |p: &[f64]| {
                let s = 4.0 * p[1] + 1.0;
                (-(p[0] - 0.2 - a * p[1]).powi(2) / (nu * s)).exp() / s.sqrt()
            });
            let pde = LinearPde::new(1, 1.0, vec![Coefficient::Constant(a)], vec![nu], 0.0, constant_field(0.0))?;
            let problem = Problem::new(
                pde,
                space_time(interval(0.0, 1.0), 0.5),
                BoundarySpec::dirichlet(exact.clone()),
                Some(at_time_zero(exact.clone())),
                Some(exact.clone()),
            )?;
            (problem, exact)
        }
        "tc10" => {
            case.description = "unsteady 2D advection-diffusion of a Gaussian hump, nu = 0.005";
            let nu = opts.nu.unwrap_or(0.005);
            let theta = if opts.tc10_angle_in_degrees {
                opts.tc10_angle.to_radians()
            } else {
                opts.tc10_angle
            };
            let (a, b) = (theta.cos(), theta.sin());
            let [x0, y0] = opts.tc10_center;
            case.reported_dpielm = Some(vec![20, 20, 50, 3, 3, 3, 30]);
            case.paper_scale_dpielm = true;
            case.default_dpielm = Some(dpielm_lsqr(&[6, 6, 10, 3, 3, 3, 20], 3, DPIELM_SCALE));
            let exact = field(move |p: &[f64]| {
                let s = 4.0 * p[2] + 1.0;
                let r2 = (p[0] - x0 - a * p[2]).powi(2) + (p[1] - y0 - b * p[2]).powi(2);
                (-r2 / (nu * s)).exp() / s
            });
            let adv = vec![Coefficient::Constant(a), Coefficient::Constant(b)];
            let pde = LinearPde::new(2, 1.0, adv, vec![nu, nu], 0.0, constant_field(0.0))?;
            let problem = Problem::new(
                pde,
                space_time(unit_square(), opts.tc10_t_end),
                BoundarySpec::dirichlet(exact.clone()),
                Some(at_time_zero(exact.clone())),
                Some(exact.clone()),
            )?;
            (problem, exact)
        }
        "tc11" => {
            case.description = "representation of a 1D function with jumps and kinks";
            case.reported_dpielm = Some(vec![50, 5, 5]);
            case.default_dpielm = Some(dpielm_config(&[50, 5, 5], 1, DPIELM_SCALE));
            case.singular_points = vec![-0.8, -0.5, 0.5, 0.65, 0.8];
            let exact = field(|p: &[f64]| composite_target(p[0]));
            let problem = Problem::new(
                LinearPde::representation(1, exact.clone())?,
                interval(-1.0, 1.0),
                BoundarySpec::dirichlet(exact.clone()),
                None,
                Some(exact.clone()),
            )?;
            (problem, exact)
        }
        "tc12" => {
            case.description = "representation of a sharply peaked 2D Gaussian";
            case.reported_dpielm = Some(vec![15, 15, 5, 5, 15]);
            case.default_dpielm = Some(dpielm_lsqr(&[15, 15, 5, 5, 15], 2, DPIELM_SCALE));
            let exact = field(|p: &[f64]| (-20.0 * ((p[0] - 0.25).powi(2) + (p[1] - 0.25).powi(2))).exp());
            let problem = Problem::new(
                LinearPde::representation(2, exact.clone())?,
                unit_square(),
                BoundarySpec::dirichlet(exact.clone()),
                None,
                Some(exact.clone()),
            )?;
            (problem, exact)
        }
        "tc13" => {
            case.description = "periodic advection of a sharp Gaussian, F = exp(-100 x^2)";
            case.default_pielm = Some(pielm_config(420, 21, 20, 440, PIELM_SCALE, st_lattice));
            case.reported_dpielm = Some(vec![15, 10, 5, 5, 30]);
            case.default_dpielm = Some(dpielm_lsqr(&[15, 10, 5, 5, 30], 2, DPIELM_SCALE));
            periodic_advection(|x| (-100.0 * x * x).exp())?
        }
        "tc15" => {
            case.description = "periodic advection of a wave packet, F = exp(-5 x^2) sin(10 pi x)";
            case.reported_dpielm = Some(vec![15, 10, 5, 5, 30]);
            case.default_dpielm = Some(dpielm_lsqr(&[15, 10, 5, 5, 30], 2, DPIELM_SCALE));
            periodic_advection(|x| (-5.0 * x * x).exp() * (10.0 * PI * x).sin())?
        }
        _ => unreachable!("normalize_id only returns catalog ids"),
    };
    case.problem = problem;
    case.exact = exact;
    Ok(case)
}

fn laplacian(source: ScalarField) -> Result<LinearPde> {
    LinearPde::new(
        2,
        0.0,
        vec![Coefficient::Constant(0.0), Coefficient::Constant(0.0)],
        vec![1.0, 1.0],
        0.0,
        source,
    )
}

/// `F(x) = û(x, 0)` from a space-time solution.
fn at_time_zero(exact: ScalarField) -> ScalarField {
    field(move |x: &[f64]| {
        let mut p = x.to_vec();
        p.push(0.0);
        exact(&p)
    })
}

fn placeholder_problem() -> Problem {
    Problem::new(
        LinearPde::representation(1, constant_field(0.0)).expect("identity operator"),
        interval(0.0, 1.0),
        BoundarySpec::dirichlet(constant_field(0.0)),
        None,
        None,
    )
    .expect("placeholder problem")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(case: &TestCase, p: &[f64]) -> f64 {
        (case.exact)(p)
    }

    #[test]
    fn tc1_left_value() {
        assert_eq!(at(&build_case("tc1").unwrap(), &[0.0]), 1.0);
    }

    #[test]
    fn tc3_endpoints_and_zero_source() {
        let c = build_case("tc3").unwrap();
        assert!(at(&c, &[0.0]).abs() < 1e-15);
        assert!((at(&c, &[1.0]) - 1.0).abs() < 1e-15);
        assert_eq!((c.problem.pde.source())(&[0.3]), 0.0);
    }

    #[test]
    fn tc9_peak() {
        assert_eq!(at(&build_case("tc9").unwrap(), &[0.2, 0.0]), 1.0);
    }

    #[test]
    fn tc10_defaults() {
        let c = build_case("tc10").unwrap();
        assert_eq!(c.problem.pde.diffusion(), &[0.005, 0.005]);
        let a = c.problem.pde.advection()[0].eval(&[0.0, 0.0, 0.0]);
        let b = c.problem.pde.advection()[1].eval(&[0.0, 0.0, 0.0]);
        assert!((b.atan2(a).to_degrees() - 22.5).abs() < 1e-12);
    }

    #[test]
    fn tc13_initial_values() {
        let c = build_case("tc13").unwrap();
        let f = c.problem.initial.clone().unwrap();
        assert_eq!(f(&[0.0]), 1.0);
        assert!((f(&[0.3]) - (-9.0f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn composite_values() {
        assert_eq!(composite_target(-0.9), 0.0);
        assert_eq!(composite_target(-0.6), 1.0);
        assert_eq!(composite_target(-0.5), 0.5);
        assert_eq!(composite_target(0.0), 1.0);
        assert!((composite_target(0.65) - 1.0).abs() < 1e-14);
        assert!(composite_target(0.8).abs() < 1e-14);
        assert_eq!(composite_target(0.9), 0.0);
    }

    #[test]
    fn unknown_ids_list_valid_ones() {
        match build_case("tc16") {
            Err(Error::UnknownCase { valid, .. }) => assert!(valid.contains("tc15")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(normalize_id("TC-7").unwrap(), "tc7");
    }

    #[test]
    fn reported_architectures() {
        match default_architecture("tc6", Method::Pielm).unwrap() {
            Architecture::Pielm(c) => {
                assert_eq!((c.n_interior, c.n_boundary, c.n_neurons), (1489, 881, 5000))
            }
            other => panic!("unexpected {other:?}"),
        }
        match default_architecture("tc7", Method::Pielm).unwrap() {
            Architecture::Pielm(c) => assert_eq!((c.n_interior, c.n_boundary, c.n_initial, c.n_neurons), (420, 21, 20, 440)),
            other => panic!("unexpected {other:?}"),
        }
        match default_architecture("tc12", Method::Dpielm).unwrap() {
            Architecture::Dpielm { config, paper_scale } => {
                assert_eq!(config.architecture(), vec![15, 15, 5, 5, 15]);
                assert!(!paper_scale);
            }
            other => panic!("unexpected {other:?}"),
        }
        match default_architecture("tc10", Method::Dpielm).unwrap() {
            Architecture::Dpielm { config, paper_scale } => {
                assert_eq!(config.architecture(), vec![20, 20, 50, 3, 3, 3, 30]);
                assert!(paper_scale);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            default_architecture("tc15", Method::Pielm),
            Err(Error::UnreportedArchitecture { .. })
        ));
    }
}
