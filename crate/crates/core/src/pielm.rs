//! Single-network PIELM: stack all constraint rows into `H c = K`, solve,
//! evaluate, and compare with a closed-form solution.

use std::time::Instant;

use crate::error::{check_dim, Error, Result};
use crate::features::{init_layer_on_box, FeatureLayer};
use crate::geometry::{lattice, Domain, PointSet, SampleStrategy};
use crate::linalg::{default_tolerance, residual_norm, solve_least_squares, DenseMatrix, LsMethod};
use crate::operator::{
    dirichlet_rows, initial_rows, periodic_rows, residual_rows, BoundarySpec, Problem, ScalarField,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PielmConfig {
    pub n_neurons: usize,
    pub seed: u64,
    /// Weight/bias half-width in box-normalized coordinates.
    pub init_scale: f64,
    pub method: LsMethod,
    /// `None` selects [`default_tolerance`] for the assembled shape.
    pub tolerance: Option<f64>,
    pub n_interior: usize,
    pub n_boundary: usize,
    pub n_initial: usize,
    pub strategy: SampleStrategy,
}

impl PielmConfig {
    /// Point counts with `N* = N_f + N_bc + N_ic`.
    pub fn with_counts(n_interior: usize, n_boundary: usize, n_initial: usize) -> Self {
        Self {
            n_neurons: n_interior + n_boundary + n_initial,
            seed: 1,
            init_scale: 1.0,
            method: LsMethod::Svd,
            tolerance: None,
            n_interior,
            n_boundary,
            n_initial,
            strategy: SampleStrategy::Grid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_neurons == 0 {
            return Err(Error::InvalidArgument("n_neurons must be >= 1".into()));
        }
        if self.n_interior == 0 {
            return Err(Error::InvalidArgument("at least one interior point is required".into()));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance must be > 0, got {t}")));
            }
        }
        Ok(())
    }
}

/// The collocation system `H c = K`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub h: DenseMatrix,
    pub k: Vec<f64>,
}

impl LinearSystem {
    pub fn shape(&self) -> (usize, usize) {
        (self.h.rows(), self.h.cols())
    }
}

/// Stacks residual rows, then boundary rows (Dirichlet or periodic), then
/// initial rows.
pub fn assemble(problem: &Problem, layer: &FeatureLayer, pts: &PointSet) -> Result<LinearSystem> {
    if pts.interior.rows() == 0 {
        return Err(Error::InvalidArgument("the interior point set is empty".into()));
    }
    check_dim("point dimension vs domain", problem.domain.dim(), pts.dim())?;
    let (hf, kf) = residual_rows(&problem.pde, layer, &pts.interior)?;
    let (hb, kb) = boundary_rows(problem, layer, pts)?;
    let mut parts = vec![hf, hb];
    let mut k = kf;
    k.extend(kb);
    if let Some(f) = &problem.initial {
        if pts.initial.rows() > 0 {
            let (hi, ki) = initial_rows(layer, &pts.initial, f)?;
            parts.push(hi);
            k.extend(ki);
        }
    }
    let refs: Vec<&DenseMatrix> = parts.iter().collect();
    Ok(LinearSystem {
        h: DenseMatrix::vstack(&refs)?,
        k,
    })
}

pub(crate) fn boundary_rows(
    problem: &Problem,
    layer: &FeatureLayer,
    pts: &PointSet,
) -> Result<(DenseMatrix, Vec<f64>)> {
    let b = &pts.boundary;
    match &problem.boundary {
        BoundarySpec::Dirichlet { data, faces } => {
            let idx: Vec<usize> = (0..b.len()).filter(|&i| faces.includes(b.tags[i])).collect();
            dirichlet_rows(layer, &b.points.select_rows(&idx), data)
        }
        BoundarySpec::Periodic => {
            let pairs = b.periodic_pairs();
            if pairs.is_empty() && !b.is_empty() {
                return Err(Error::InvalidArgument(
                    "periodic boundary requested but no boundary point has a partner".into(),
                ));
            }
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (i, j) in pairs {
                if b.points.get(i, 0) <= b.points.get(j, 0) {
                    left.push(i);
                    right.push(j);
                } else {
                    left.push(j);
                    right.push(i);
                }
            }
            periodic_rows(layer, &b.points.select_rows(&left), &b.points.select_rows(&right))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PielmModel {
    pub layer: FeatureLayer,
    pub coefficients: Vec<f64>,
    /// `‖H c − K‖₂` of the training system.
    pub train_residual: f64,
    pub train_time_s: f64,
    pub shape: (usize, usize),
    pub effective_rank: usize,
}

impl PielmModel {
    /// Residual normalized by the square root of the row count.
    pub fn rms_residual(&self) -> f64 {
        self.train_residual / (self.shape.0.max(1) as f64).sqrt()
    }
}

/// Layer drawn in coordinates normalized over the domain's bounding box.
pub fn default_layer(domain: &Domain, n_neurons: usize, seed: u64, init_scale: f64) -> Result<FeatureLayer> {
    let (lo, hi) = domain.bounding_box();
    init_layer_on_box(n_neurons, &lo, &hi, seed, init_scale)
}

pub fn sample_points(problem: &Problem, config: &PielmConfig) -> Result<PointSet> {
    PointSet::sample(
        &problem.domain,
        config.n_interior,
        config.n_boundary,
        config.n_initial,
        &config.strategy,
    )
}

pub fn train(problem: &Problem, config: &PielmConfig) -> Result<PielmModel> {
    config.validate()?;
    let start = Instant::now();
    let pts = sample_points(problem, config)?;
    let layer = default_layer(&problem.domain, config.n_neurons, config.seed, config.init_scale)?;
    let mut model = train_on(problem, layer, &pts, config.method, config.tolerance)?;
    model.train_time_s = start.elapsed().as_secs_f64();
    Ok(model)
}

/// Fits output weights for an explicit layer and point set.
pub fn train_on(
    problem: &Problem,
    layer: FeatureLayer,
    pts: &PointSet,
    method: LsMethod,
    tolerance: Option<f64>,
) -> Result<PielmModel> {
    let start = Instant::now();
    let sys = assemble(problem, &layer, pts)?;
    let (rows, cols) = sys.shape();
    let tol = tolerance.unwrap_or_else(|| default_tolerance(rows, cols));
    let sol = solve_least_squares(&sys.h, &sys.k, method, tol)?;
    if sol.coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::Factorization("solution has non-finite coefficients".into()));
    }
    Ok(PielmModel {
        layer,
        train_residual: residual_norm(&sys.h, &sol.coefficients, &sys.k),
        coefficients: sol.coefficients,
        train_time_s: start.elapsed().as_secs_f64(),
        shape: (rows, cols),
        effective_rank: sol.effective_rank,
    })
}

/// `f(x) = h(x) · c` for each row of `points`.
pub fn evaluate(model: &PielmModel, points: &DenseMatrix) -> Result<Vec<f64>> {
    model.layer.eval_features(points)?.matvec(&model.coefficients)
}

/// Closed tensor grid over the domain's bounding box, clipped to the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalGrid {
    pub counts: Vec<usize>,
}

impl EvalGrid {
    /// 201 points in 1D, 101×101 in 2D, 101×51 for 1D space-time and
    /// 51×51×11 for 2D space-time.
    pub fn default_for(domain: &Domain) -> Self {
        let counts = match (domain.spatial_dim(), domain.is_time_dependent()) {
            (1, false) => vec![201],
            (1, true) => vec![101, 51],
            (_, false) => vec![101, 101],
            (_, true) => vec![51, 51, 11],
        };
        Self { counts }
    }

    pub fn describe(&self) -> String {
        self.counts
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn points(&self, domain: &Domain) -> Result<DenseMatrix> {
        check_dim("evaluation grid axes", domain.dim(), self.counts.len())?;
        if self.counts.contains(&0) {
            return Err(Error::InvalidArgument("evaluation grid counts must be >= 1".into()));
        }
        let (lo, hi) = domain.bounding_box();
        let all = lattice(&lo, &hi, &self.counts, false);
        let keep: Vec<usize> = (0..all.rows()).filter(|&i| domain.contains(all.row(i))).collect();
        Ok(all.select_rows(&keep))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub max_abs_error: f64,
    /// Root mean square of the pointwise error.
    pub l2_error: f64,
    pub eval_grid: String,
    pub points: DenseMatrix,
    pub exact: Vec<f64>,
    pub predicted: Vec<f64>,
}

impl ErrorReport {
    pub fn from_values(
        points: DenseMatrix,
        predicted: Vec<f64>,
        exact: &ScalarField,
        eval_grid: String,
    ) -> Result<Self> {
        check_dim("error report predictions", points.rows(), predicted.len())?;
        let exact: Vec<f64> = (0..points.rows()).map(|i| exact(points.row(i))).collect();
        let mut max_abs: f64 = 0.0;
        let mut sq = 0.0;
        for (p, e) in predicted.iter().zip(&exact) {
            let d = (p - e).abs();
            max_abs = max_abs.max(d);
            sq += d * d;
        }
        let l2 = if exact.is_empty() {
            0.0
        } else {
            (sq / exact.len() as f64).sqrt().min(max_abs)
        };
        Ok(Self {
            max_abs_error: max_abs,
            l2_error: l2,
            eval_grid,
            points,
            exact,
            predicted,
        })
    }

    /// Signed pointwise error `predicted − exact`.
    pub fn errors(&self) -> Vec<f64> {
        self.predicted.iter().zip(&self.exact).map(|(p, e)| p - e).collect()
    }

    /// Indices of grid points whose coordinate `axis` equals `value` within 1e-12,
    /// in grid order.
    pub fn slice(&self, axis: usize, value: f64) -> Vec<usize> {
        (0..self.points.rows())
            .filter(|&i| (self.points.get(i, axis) - value).abs() <= 1e-12)
            .collect()
    }

    /// Sign changes of the error along the first axis on the slice `axis = value`.
    pub fn error_sign_changes(&self, axis: usize, value: f64) -> usize {
        let err = self.errors();
        let mut idx = self.slice(axis, value);
        idx.sort_by(|&a, &b| self.points.get(a, 0).total_cmp(&self.points.get(b, 0)));
        count_sign_changes(&idx.iter().map(|&i| err[i]).collect::<Vec<_>>())
    }

    /// Grid point with the largest prediction on the slice `axis = value`.
    /// Ties keep the first point in grid order.
    pub fn peak_on_slice(&self, axis: usize, value: f64) -> Option<Peak> {
        let idx = self.slice(axis, value);
        let best = idx.into_iter().fold(None, |best: Option<usize>, i| match best {
            Some(b) if self.predicted[b] >= self.predicted[i] => Some(b),
            _ => Some(i),
        })?;
        Some(Peak {
            point: self.points.row(best).to_vec(),
            predicted: self.predicted[best],
            exact: self.exact[best],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub point: Vec<f64>,
    pub predicted: f64,
    pub exact: f64,
}

/// Number of strict sign flips in a sequence; exact zeros are skipped.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

pub fn error_report(model: &PielmModel, exact: &ScalarField, domain: &Domain, grid: &EvalGrid) -> Result<ErrorReport> {
    let points = grid.points(domain)?;
    let predicted = evaluate(model, &points)?;
    ErrorReport::from_values(points, predicted, exact, grid.describe())
}
