use pielm::cases::{build_case, DPIELM_SCALE};
use pielm::dpielm::{
    assemble_global, cell_layers, evaluate_dpielm, evaluate_points, interface_mismatch, partition,
    plan_interfaces, train_dpielm, DpielmConfig, DpielmSolver,
};
use pielm::geometry::Domain;
use pielm::linalg::{BlockMethod, DenseMatrix, LsMethod};
use pielm::operator::{field, BoundarySpec, Coefficient, LinearPde, Problem};
use pielm::pielm::{default_layer, evaluate, train_on, EvalGrid};
use proptest::prelude::*;

fn single_cell(problem: &Problem, points: Vec<usize>, neurons: usize, seed: u64) -> DpielmConfig {
    let d = problem.domain.dim();
    let mut arch = vec![1; d];
    arch.extend(points);
    arch.push(neurons);
    DpielmConfig {
        seed,
        init_scale: DPIELM_SCALE,
        solver: DpielmSolver::Block(BlockMethod::DensifySvd),
        ..DpielmConfig::from_architecture(&arch, d).unwrap()
    }
}

fn check_degenerate(id: &str, points: Vec<usize>, neurons: usize, seed: u64) {
    let case = build_case(id).unwrap();
    let problem = &case.problem;
    let config = single_cell(problem, points, neurons, seed);
    let dp = train_dpielm(problem, &config).unwrap();

    let grid = partition(&problem.domain, &config.cells, &config.points_per_cell).unwrap();
    let layer = default_layer(&problem.domain, neurons, seed, DPIELM_SCALE).unwrap();
    assert_eq!(layer, dp.layers[0], "{id}: layers differ");
    let pts = grid.cell_points(&problem.domain, 0);
    let single = train_on(problem, layer, &pts, LsMethod::Svd, None).unwrap();

    assert_eq!(single.shape, dp.shape, "{id}: system shapes differ");
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&single.coefficients), bits(&dp.coefficients[0]), "{id}: coefficients differ");

    let eval = EvalGrid::default_for(&problem.domain).points(&problem.domain).unwrap();
    assert_eq!(
        bits(&evaluate(&single, &eval).unwrap()),
        bits(&evaluate_points(&dp, &eval).unwrap()),
        "{id}: predictions differ"
    );
}

#[test]
fn single_cell_equals_single_network() {
    check_degenerate("tc1", vec![30], 25, 1);
    check_degenerate("tc3", vec![20], 22, 4);
    check_degenerate("tc11", vec![60], 40, 2);
    check_degenerate("tc14", vec![40], 30, 3);
    check_degenerate("tc9", vec![12, 8], 60, 5);
    check_degenerate("tc12", vec![9, 9], 50, 1);
}

/// `max |mismatch| <= 10 * rms training residual` at every constraint point.
fn check_interface_bound(problem: &Problem, config: &DpielmConfig) -> (f64, f64, f64) {
    let model = train_dpielm(problem, config).unwrap();
    let grid = partition(&problem.domain, &config.cells, &config.points_per_cell).unwrap();
    let constraints = plan_interfaces(&grid, &problem.pde);
    let (c0, c1) = interface_mismatch(&model, &constraints).unwrap();
    (c0, c1, 10.0 * model.rms_residual())
}

#[test]
fn interface_mismatch_is_bounded_by_training_residual() {
    for id in ["tc11", "tc12", "tc14", "tc15"] {
        let case = build_case(id).unwrap();
        let config = case.default_dpielm.clone().unwrap();
        let (c0, c1, bound) = check_interface_bound(&case.problem, &config);
        assert!(c0 <= bound, "{id}: C0 mismatch {c0:e} above {bound:e}");
        assert!(c1 <= bound, "{id}: C1 mismatch {c1:e} above {bound:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Steady advection-diffusion with a smooth manufactured solution.
    #[test]
    fn interface_bound_on_smooth_steady_problems(
        cells in 2usize..6, pts in 4usize..8, neurons in 4usize..10, seed in 0u64..1000, nu in 0.05f64..1.0,
    ) {
        let u = |x: f64| (2.0 * x).sin() + x * x;
        let source = move |p: &[f64]| {
            let x = p[0];
            (2.0 * (2.0 * x).cos() + 2.0 * x) - nu * (-4.0 * (2.0 * x).sin() + 2.0)
        };
        let exact = field(move |p: &[f64]| u(p[0]));
        let pde = LinearPde::new(1, 0.0, vec![Coefficient::Constant(1.0)], vec![nu], 0.0, field(source)).unwrap();
        let domain = Domain::interval(-1.0, 1.0).unwrap();
        let problem = Problem::new(pde, domain, BoundarySpec::dirichlet(exact.clone()), None, Some(exact)).unwrap();
        let config = DpielmConfig {
            seed,
            init_scale: DPIELM_SCALE,
            ..DpielmConfig::from_architecture(&[cells, pts, neurons], 1).unwrap()
        };
        let (c0, c1, bound) = check_interface_bound(&problem, &config);
        prop_assert!(c0 <= bound, "C0 {c0:e} > {bound:e}");
        prop_assert!(c1 <= bound, "C1 {c1:e} > {bound:e}");
    }
}

#[test]
fn rows_touch_at_most_two_cells() {
    for id in ["tc9", "tc13", "tc14"] {
        let case = build_case(id).unwrap();
        let config = case.default_dpielm.clone().unwrap();
        let grid = partition(&case.problem.domain, &config.cells, &config.points_per_cell).unwrap();
        let layers = cell_layers(&grid, config.neurons_per_cell, config.seed, config.init_scale).unwrap();
        let constraints = plan_interfaces(&grid, &case.problem.pde);
        let system = assemble_global(&case.problem, &grid, &layers, &constraints).unwrap();
        let mut cells_per_row = vec![0usize; system.total_rows()];
        for block in system.blocks() {
            for r in block.row_range() {
                cells_per_row[r] += 1;
            }
        }
        assert!(cells_per_row.iter().all(|&c| (1..=2).contains(&c)), "{id}");
    }
}

#[test]
fn two_cell_interface_row_is_feature_difference() {
    let problem = build_case("tc11").unwrap().problem;
    let config = DpielmConfig::from_architecture(&[2, 3, 4], 1).unwrap();
    let grid = partition(&problem.domain, &config.cells, &config.points_per_cell).unwrap();
    let layers = cell_layers(&grid, 4, 1, 1.0).unwrap();
    let constraints = plan_interfaces(&grid, &problem.pde);
    assert_eq!(constraints.len(), 1);
    let system = assemble_global(&problem, &grid, &layers, &constraints).unwrap();
    let dense = system.to_dense();
    let mid = DenseMatrix::new(1, 1, vec![0.0]).unwrap();
    let (l, r) = (layers[0].eval_features(&mid).unwrap(), layers[1].eval_features(&mid).unwrap());
    let last = dense.row(dense.rows() - 1);
    for k in 0..4 {
        assert_eq!(last[k], l.get(0, k));
        assert_eq!(last[4 + k], -r.get(0, k));
    }
    assert_eq!(*system.rhs().last().unwrap(), 0.0);
}

#[test]
fn evaluation_outside_the_box_is_an_error() {
    let case = build_case("tc14").unwrap();
    let model = train_dpielm(&case.problem, case.default_dpielm.as_ref().unwrap()).unwrap();
    assert!(evaluate_dpielm(&model, &[1.5]).is_err());
    assert!(evaluate_dpielm(&model, &[0.25]).unwrap().is_finite());
}

#[test]
fn training_is_deterministic() {
    let case = build_case("tc12").unwrap();
    let config = case.default_dpielm.clone().unwrap();
    let a = train_dpielm(&case.problem, &config).unwrap();
    let b = train_dpielm(&case.problem, &config).unwrap();
    assert_eq!(a.coefficients, b.coefficients);
    assert!(matches!(case.problem.boundary, BoundarySpec::Dirichlet { .. }));
}
