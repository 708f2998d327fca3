use pielm::cases::{all_cases, build_case, TestCase, CASE_IDS};
use pielm::features::SplitMix64;
use pielm::geometry::{lattice, sample_boundary, sample_initial, SampleStrategy};
use pielm::operator::BoundarySpec;

const STEP: f64 = 1e-5;
const TOL: f64 = 1e-4;
const WINDOW: f64 = 0.02;

fn probe_points(case: &TestCase) -> Vec<Vec<f64>> {
    let domain = &case.problem.domain;
    let (lo, hi) = domain.bounding_box();
    let counts = vec![if lo.len() == 1 { 101 } else if lo.len() == 2 { 25 } else { 11 }; lo.len()];
    let grid = lattice(&lo, &hi, &counts, true);
    (0..grid.rows())
        .map(|i| grid.row(i).to_vec())
        .filter(|p| domain.contains_strictly(p))
        .filter(|p| case.singular_points.iter().all(|s| (p[0] - s).abs() > WINDOW))
        .collect()
}

#[test]
fn exact_solutions_satisfy_their_operators() {
    for case in all_cases() {
        let pde = &case.problem.pde;
        let points = probe_points(&case);
        assert!(points.len() > 50, "{}: only {} probe points", case.id, points.len());
        let mut worst = 0.0f64;
        for p in &points {
            let lhs = pde.apply_fd(&*case.exact, p, STEP);
            let rhs = pde.source()(p);
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
        assert!(worst <= TOL, "{}: operator residual {worst:e}", case.id);
    }
}

#[test]
fn boundary_and_initial_data_agree_with_exact() {
    for case in all_cases() {
        let domain = &case.problem.domain;
        if let BoundarySpec::Dirichlet { data, faces } = &case.problem.boundary {
            let pts = sample_boundary(domain, 40).unwrap();
            let mut used = 0;
            for (i, tag) in pts.tags.iter().enumerate() {
                if !faces.includes(*tag) {
                    continue;
                }
                let p = pts.points.row(i);
                if case.singular_points.iter().any(|s| (p[0] - s).abs() <= WINDOW) {
                    continue;
                }
                used += 1;
                assert!((data(p) - (case.exact)(p)).abs() <= 1e-12, "{}: boundary data at {p:?}", case.id);
            }
            assert!(used > 0, "{}: no constrained boundary points", case.id);
        }
        if let Some(init) = &case.problem.initial {
            let pts = sample_initial(domain, 64, &SampleStrategy::Grid).unwrap();
            for i in 0..pts.rows() {
                let p = pts.row(i);
                assert_eq!(p[p.len() - 1], 0.0);
                assert!((init(p) - (case.exact)(p)).abs() <= 1e-12, "{}: initial data at {p:?}", case.id);
            }
        }
    }
}

#[test]
fn periodic_cases_are_periodic_in_x() {
    for case in all_cases() {
        if !matches!(case.problem.boundary, BoundarySpec::Periodic) {
            continue;
        }
        for k in 0..=20 {
            let t = 0.5 * k as f64 / 20.0;
            let (l, r) = ((case.exact)(&[-1.0, t]), (case.exact)(&[1.0, t]));
            assert!((l - r).abs() <= 1e-12, "{} at t = {t}: {l} vs {r}", case.id);
        }
    }
}

fn pairs() -> Vec<(f64, f64, f64)> {
    let mut rng = SplitMix64::new(20);
    (0..100)
        .map(|_| (2.0 * rng.next_f64() - 1.0, 0.5 * rng.next_f64(), 0.5 * rng.next_f64()))
        .collect()
}

#[test]
fn tc7_is_constant_along_x_minus_t() {
    let case = build_case("tc7").unwrap();
    for (x, t1, t2) in pairs() {
        // Exact solution is periodic, so the shifted foot may leave [-1, 1].
        let x2 = x + (t2 - t1);
        let (a, b) = ((case.exact)(&[x, t1]), (case.exact)(&[x2, t2]));
        assert!((a - b).abs() <= 1e-10, "({x}, {t1}) -> ({x2}, {t2}): {a} vs {b}");
    }
}

#[test]
fn tc8_is_constant_along_its_characteristics() {
    let case = build_case("tc8").unwrap();
    for (x, t1, t2) in pairs() {
        let x2 = (1.0 + x) * (t2 - t1).exp() - 1.0;
        let (a, b) = ((case.exact)(&[x, t1]), (case.exact)(&[x2, t2]));
        assert!((a - b).abs() <= 1e-10, "({x}, {t1}) -> ({x2}, {t2}): {a} vs {b}");
    }
}

#[test]
fn catalog_is_complete() {
    let cases = all_cases();
    assert_eq!(cases.len(), 15);
    for (case, id) in cases.iter().zip(CASE_IDS) {
        assert_eq!(case.id, id);
        assert!(!case.methods().is_empty(), "{id} has no runnable method");
    }
    assert_eq!(build_case("TC-7").unwrap().id, "tc7");
    assert!(build_case("tc16").is_err());
}
