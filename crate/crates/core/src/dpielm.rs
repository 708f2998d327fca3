//! Cell-decomposed PIELM: one feature layer per cell of a uniform box grid,
//! local residual/boundary/initial rows, and interface rows that glue
//! neighbouring cells together, all solved as one least-squares problem.
//!
//! Cells are numbered with the first axis fastest:
//! `index = ix + NB_x * (iy + NB_y * it)`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{check_dim, Error, Result};
use crate::features::{init_layer_on_box, FeatureLayer};
use crate::geometry::{lattice, BoundaryPoints, Domain, PointSet, ON_EDGE_TOL};
use crate::linalg::{
    default_tolerance, norm2, solve_block_sparse, Block, BlockMethod, BlockSparseSystem,
    DenseMatrix, MethodUsed,
};
use crate::operator::{periodic_rows, BoundarySpec, LinearPde, Problem, ScalarField};
use crate::pielm::{assemble, ErrorReport, EvalGrid};

/// Systems with at least this many unknowns default to the iterative solver.
pub const DENSE_UNKNOWN_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    lo: Vec<f64>,
    hi: Vec<f64>,
    counts: Vec<usize>,
    points_per_cell: Vec<usize>,
    strides: Vec<usize>,
}

/// Partitions a box domain into `counts[a]` uniform cells along each axis.
pub fn partition(domain: &Domain, counts: &[usize], points_per_cell: &[usize]) -> Result<CellGrid> {
    if !domain.is_box() {
        return Err(Error::InvalidArgument(
            "cell decomposition needs an axis-aligned box domain".into(),
        ));
    }
    let (lo, hi) = domain.bounding_box();
    CellGrid::new(lo, hi, counts.to_vec(), points_per_cell.to_vec())
}

impl CellGrid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, counts: Vec<usize>, points_per_cell: Vec<usize>) -> Result<Self> {
        let d = lo.len();
        check_dim("cell grid upper bounds", d, hi.len())?;
        check_dim("cells per axis", d, counts.len())?;
        check_dim("points per cell axis", d, points_per_cell.len())?;
        if let Some(a) = (0..d).find(|&a| !(hi[a] > lo[a])) {
            return Err(Error::DegenerateDomain(format!("axis {a} has zero extent")));
        }
        if counts.contains(&0) {
            return Err(Error::InvalidArgument("cell counts must be >= 1 per axis".into()));
        }
        if points_per_cell.contains(&0) {
            return Err(Error::InvalidArgument("per-cell point counts must be >= 1".into()));
        }
        let mut strides = Vec::with_capacity(d);
        let mut s = 1;
        for &c in &counts {
            strides.push(s);
            s *= c;
        }
        Ok(Self {
            lo,
            hi,
            counts,
            points_per_cell,
            strides,
        })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn points_per_cell(&self) -> &[usize] {
        &self.points_per_cell
    }

    pub fn n_cells(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn cell_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn cell_multi_index(&self, mut cell: usize) -> Vec<usize> {
        self.counts
            .iter()
            .map(|&c| {
                let i = cell % c;
                cell /= c;
                i
            })
            .collect()
    }

    /// Coordinate of the `k`-th grid plane along `axis` (`0 ≤ k ≤ counts[axis]`).
    pub fn plane(&self, axis: usize, k: usize) -> f64 {
        let n = self.counts[axis];
        if k == n {
            self.hi[axis]
        } else {
            self.lo[axis] + (self.hi[axis] - self.lo[axis]) * k as f64 / n as f64
        }
    }

    pub fn cell_bounds(&self, cell: usize) -> (Vec<f64>, Vec<f64>) {
        let m = self.cell_multi_index(cell);
        let lo = (0..self.dim()).map(|a| self.plane(a, m[a])).collect();
        let hi = (0..self.dim()).map(|a| self.plane(a, m[a] + 1)).collect();
        (lo, hi)
    }

    /// Cell containing `p`; points on a shared face go to the lower index.
    pub fn locate(&self, p: &[f64]) -> Result<usize> {
        check_dim("point dimension vs cell grid", self.dim(), p.len())?;
        let mut multi = Vec::with_capacity(self.dim());
        for a in 0..self.dim() {
            if !(p[a] >= self.lo[a] - ON_EDGE_TOL && p[a] <= self.hi[a] + ON_EDGE_TOL) {
                return Err(Error::OutsideGrid(p.to_vec()));
            }
            let n = self.counts[a];
            let q = (p[a] - self.lo[a]) / (self.hi[a] - self.lo[a]) * n as f64;
            let mut i = (q.ceil() as isize - 1).clamp(0, n as isize - 1) as usize;
            // Rounding in `q` can misplace points sitting exactly on a plane.
            while i > 0 && p[a] <= self.plane(a, i) {
                i -= 1;
            }
            while i + 1 < n && p[a] > self.plane(a, i + 1) {
                i += 1;
            }
            multi.push(i);
        }
        Ok(self.cell_index(&multi))
    }

    /// Open lattice on the face of `cell` with normal `axis`, using the
    /// per-cell counts of the transverse axes.
    pub fn face_points(&self, cell: usize, axis: usize, high: bool) -> DenseMatrix {
        let (lo, hi) = self.cell_bounds(cell);
        let mut counts = self.points_per_cell.clone();
        counts[axis] = 1;
        let mut pts = lattice(&lo, &hi, &counts, true);
        let v = if high { hi[axis] } else { lo[axis] };
        let cols = pts.cols();
        let mut entries = pts.as_slice().to_vec();
        for i in 0..pts.rows() {
            entries[i * cols + axis] = v;
        }
        pts = DenseMatrix::from_vec_unchecked(pts.rows(), cols, entries);
        pts
    }

    pub fn interior_points(&self, cell: usize) -> DenseMatrix {
        let (lo, hi) = self.cell_bounds(cell);
        lattice(&lo, &hi, &self.points_per_cell, true)
    }

    /// Collocation, boundary and initial points owned by one cell.
    ///
    /// Boundary points lie on the cell faces that are spatial faces of the
    /// global box; initial points on the `t = 0` face for extruded domains.
    pub fn cell_points(&self, domain: &Domain, cell: usize) -> PointSet {
        let d = self.dim();
        let m = self.cell_multi_index(cell);
        let spatial = domain.spatial_dim();
        let mut rows: Vec<f64> = Vec::new();
        let mut tags = Vec::new();
        for a in 0..spatial {
            for high in [false, true] {
                let outer = if high { m[a] + 1 == self.counts[a] } else { m[a] == 0 };
                if !outer {
                    continue;
                }
                let tag = domain.box_face_tag(a, high).expect("spatial box face has a tag");
                let f = self.face_points(cell, a, high);
                rows.extend_from_slice(f.as_slice());
                tags.extend(std::iter::repeat(tag).take(f.rows()));
            }
        }
        let n_b = tags.len();
        let boundary = BoundaryPoints {
            points: DenseMatrix::from_vec_unchecked(n_b, d, rows),
            tags,
            partners: vec![None; n_b],
        };
        let initial = if domain.is_time_dependent() && m[d - 1] == 0 {
            self.face_points(cell, d - 1, false)
        } else {
            DenseMatrix::zeros(0, d)
        };
        PointSet {
            interior: self.interior_points(cell),
            boundary,
            initial,
        }
    }

    /// Internal faces normal to `axis`, as `(lower cell, upper cell)` pairs.
    pub fn internal_faces(&self, axis: usize) -> Vec<(usize, usize)> {
        (0..self.n_cells())
            .filter(|&c| self.cell_multi_index(c)[axis] + 1 < self.counts[axis])
            .map(|c| (c, c + self.strides[axis]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceConstraint {
    /// Cell on the low side of the face.
    pub left: usize,
    /// Cell on the high side.
    pub right: usize,
    /// Face normal.
    pub axis: usize,
    /// 0: values agree; 1: derivatives along `axis` agree.
    pub order: u8,
    pub points: DenseMatrix,
}

/// C0 rows on every internal face, plus C1 rows on faces whose normal is a
/// spatial axis with nonzero diffusion.
pub fn plan_interfaces(grid: &CellGrid, pde: &LinearPde) -> Vec<InterfaceConstraint> {
    let mut out = Vec::new();
    for axis in 0..grid.dim() {
        let smooth = axis < pde.spatial_dim() && pde.diffusion()[axis] > 0.0;
        for (left, right) in grid.internal_faces(axis) {
            let points = grid.face_points(left, axis, true);
            if smooth {
                out.push(InterfaceConstraint {
                    left,
                    right,
                    axis,
                    order: 0,
                    points: points.clone(),
                });
                out.push(InterfaceConstraint {
                    left,
                    right,
                    axis,
                    order: 1,
                    points,
                });
            } else {
                out.push(InterfaceConstraint {
                    left,
                    right,
                    axis,
                    order: 0,
                    points,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpielmSolver {
    /// Dense below [`DENSE_UNKNOWN_LIMIT`] unknowns, iterative above.
    Auto,
    Block(BlockMethod),
}

impl fmt::Display for DpielmSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DpielmSolver::Auto => f.write_str("auto"),
            DpielmSolver::Block(m) => m.fmt(f),
        }
    }
}

impl FromStr for DpielmSolver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("auto") {
            Ok(DpielmSolver::Auto)
        } else {
            s.trim().parse().map(DpielmSolver::Block)
        }
    }
}

impl DpielmSolver {
    pub fn resolve(self, unknowns: usize) -> BlockMethod {
        match self {
            DpielmSolver::Auto if unknowns < DENSE_UNKNOWN_LIMIT => BlockMethod::DensifySvd,
            DpielmSolver::Auto => BlockMethod::IterativeLsqr,
            DpielmSolver::Block(m) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpielmConfig {
    pub cells: Vec<usize>,
    pub points_per_cell: Vec<usize>,
    pub neurons_per_cell: usize,
    pub seed: u64,
    pub init_scale: f64,
    pub solver: DpielmSolver,
    /// SVD cutoff (dense) or stopping tolerance (iterative); `None` picks a
    /// default for the chosen method.
    pub tolerance: Option<f64>,
    pub max_iter: usize,
}

impl DpielmConfig {
    /// Parses an architecture vector `[NB..., nb..., N*]` of length `2d + 1`.
    pub fn from_architecture(arch: &[usize], dim: usize) -> Result<Self> {
        if arch.len() != 2 * dim + 1 {
            return Err(Error::InvalidArgument(format!(
                "a {dim}-dimensional architecture needs {} entries [NB..., nb..., N*], got {}",
                2 * dim + 1,
                arch.len()
            )));
        }
        Ok(Self {
            cells: arch[..dim].to_vec(),
            points_per_cell: arch[dim..2 * dim].to_vec(),
            neurons_per_cell: arch[2 * dim],
            seed: 1,
            init_scale: 1.0,
            solver: DpielmSolver::Auto,
            tolerance: None,
            max_iter: 20_000,
        })
    }

    pub fn architecture(&self) -> Vec<usize> {
        let mut v = self.cells.clone();
        v.extend(&self.points_per_cell);
        v.push(self.neurons_per_cell);
        v
    }

    pub fn n_unknowns(&self) -> usize {
        self.cells.iter().product::<usize>() * self.neurons_per_cell
    }
}

/// One layer per cell, drawn on the cell box with seed `seed + cell`.
pub fn cell_layers(grid: &CellGrid, n_neurons: usize, seed: u64, init_scale: f64) -> Result<Vec<FeatureLayer>> {
    (0..grid.n_cells())
        .map(|c| {
            let (lo, hi) = grid.cell_bounds(c);
            init_layer_on_box(n_neurons, &lo, &hi, seed.wrapping_add(c as u64), init_scale)
        })
        .collect()
}

fn column_range(cell: usize, n: usize) -> Range<usize> {
    cell * n..(cell + 1) * n
}

fn negated(m: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_vec_unchecked(m.rows(), m.cols(), m.as_slice().iter().map(|v| -v).collect())
}

fn constraint_block(layer: &FeatureLayer, pts: &DenseMatrix, order: u8, axis: usize) -> Result<DenseMatrix> {
    if order == 0 {
        layer.eval_features(pts)
    } else {
        layer.eval_feature_partial(pts, axis, order)
    }
}

/// Global block system. Rows: each cell's local rows in cell order, then
/// periodic rows coupling the first and last cells along axis 0, then the
/// interface rows in plan order.
pub fn assemble_global(
    problem: &Problem,
    grid: &CellGrid,
    layers: &[FeatureLayer],
    constraints: &[InterfaceConstraint],
) -> Result<BlockSparseSystem> {
    check_dim("one feature layer per cell", grid.n_cells(), layers.len())?;
    check_dim("problem dimension vs cell grid", problem.domain.dim(), grid.dim())?;
    let n = layers[0].n_neurons();
    if layers.iter().any(|l| l.n_neurons() != n) {
        return Err(Error::InvalidArgument("all cells need the same neuron count".into()));
    }
    let mut blocks = Vec::new();
    let mut rhs = Vec::new();
    let mut row = 0;
    for (c, layer) in layers.iter().enumerate() {
        let pts = grid.cell_points(&problem.domain, c);
        let local = if matches!(problem.boundary, BoundarySpec::Periodic) {
            PointSet {
                boundary: BoundaryPoints::empty(grid.dim()),
                ..pts
            }
        } else {
            pts
        };
        let sys = assemble(problem, layer, &local)?;
        rhs.extend_from_slice(&sys.k);
        let rows = sys.h.rows();
        blocks.push(Block {
            row_start: row,
            col_start: c * n,
            matrix: sys.h,
        });
        row += rows;
    }
    if matches!(problem.boundary, BoundarySpec::Periodic) {
        let last = grid.counts()[0] - 1;
        for left in (0..grid.n_cells()).filter(|&c| grid.cell_multi_index(c)[0] == 0) {
            let right = left + last;
            let lp = grid.face_points(left, 0, false);
            let rp = grid.face_points(right, 0, true);
            let rows = lp.rows();
            if left == right {
                let (h, _) = periodic_rows(&layers[left], &lp, &rp)?;
                blocks.push(Block {
                    row_start: row,
                    col_start: left * n,
                    matrix: h,
                });
            } else {
                blocks.push(Block {
                    row_start: row,
                    col_start: left * n,
                    matrix: layers[left].eval_features(&lp)?,
                });
                blocks.push(Block {
                    row_start: row,
                    col_start: right * n,
                    matrix: negated(&layers[right].eval_features(&rp)?),
                });
            }
            rhs.extend(std::iter::repeat(0.0).take(rows));
            row += rows;
        }
    }
    for ic in constraints {
        let rows = ic.points.rows();
        blocks.push(Block {
            row_start: row,
            col_start: ic.left * n,
            matrix: constraint_block(&layers[ic.left], &ic.points, ic.order, ic.axis)?,
        });
        blocks.push(Block {
            row_start: row,
            col_start: ic.right * n,
            matrix: negated(&constraint_block(&layers[ic.right], &ic.points, ic.order, ic.axis)?),
        });
        rhs.extend(std::iter::repeat(0.0).take(rows));
        row += rows;
    }
    let groups = (0..grid.n_cells()).map(|c| column_range(c, n)).collect();
    BlockSparseSystem::new(blocks, row, groups, rhs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpielmModel {
    pub grid: CellGrid,
    pub layers: Vec<FeatureLayer>,
    /// Per-cell output weights.
    pub coefficients: Vec<Vec<f64>>,
    pub train_residual: f64,
    pub train_time_s: f64,
    pub shape: (usize, usize),
    pub method_used: MethodUsed,
    pub converged: bool,
    pub iterations: usize,
}

impl DpielmModel {
    pub fn rms_residual(&self) -> f64 {
        self.train_residual / (self.shape.0.max(1) as f64).sqrt()
    }

    /// Value of cell `cell`'s local network at `p`, wherever `p` lies.
    pub fn evaluate_cell(&self, cell: usize, points: &DenseMatrix) -> Result<Vec<f64>> {
        self.layers[cell].eval_features(points)?.matvec(&self.coefficients[cell])
    }

    /// Derivative of cell `cell`'s network along `axis`.
    pub fn evaluate_cell_partial(&self, cell: usize, points: &DenseMatrix, axis: usize) -> Result<Vec<f64>> {
        self.layers[cell]
            .eval_feature_partial(points, axis, 1)?
            .matvec(&self.coefficients[cell])
    }
}

pub fn train_dpielm(problem: &Problem, config: &DpielmConfig) -> Result<DpielmModel> {
    if config.neurons_per_cell == 0 {
        return Err(Error::InvalidArgument("neurons per cell must be >= 1".into()));
    }
    let start = Instant::now();
    let grid = partition(&problem.domain, &config.cells, &config.points_per_cell)?;
    let layers = cell_layers(&grid, config.neurons_per_cell, config.seed, config.init_scale)?;
    let constraints = plan_interfaces(&grid, &problem.pde);
    let system = assemble_global(problem, &grid, &layers, &constraints)?;
    let method = config.solver.resolve(system.total_cols());
    let tol = config.tolerance.unwrap_or_else(|| match method {
        BlockMethod::DensifySvd => default_tolerance(system.total_rows(), system.total_cols()),
        BlockMethod::IterativeLsqr => 1e-10,
    });
    let sol = solve_block_sparse(&system, method, tol, config.max_iter)?;
    if sol.coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::Factorization("solution has non-finite coefficients".into()));
    }
    let train_residual = {
        let r = system.matvec(&sol.coefficients)?;
        let diff: Vec<f64> = r.iter().zip(system.rhs()).map(|(a, b)| a - b).collect();
        norm2(&diff)
    };
    let n = config.neurons_per_cell;
    let coefficients = sol.coefficients.chunks(n).map(<[f64]>::to_vec).collect();
    Ok(DpielmModel {
        shape: (system.total_rows(), system.total_cols()),
        grid,
        layers,
        coefficients,
        train_residual,
        train_time_s: start.elapsed().as_secs_f64(),
        method_used: sol.method_used,
        converged: sol.converged,
        iterations: sol.iterations,
    })
}

/// Value at one point, evaluated by its owning cell.
pub fn evaluate_dpielm(model: &DpielmModel, point: &[f64]) -> Result<f64> {
    let c = model.grid.locate(point)?;
    let p = DenseMatrix::new(1, point.len(), point.to_vec())?;
    Ok(model.evaluate_cell(c, &p)?[0])
}

/// Batch evaluation, grouping points by owning cell.
pub fn evaluate_points(model: &DpielmModel, points: &DenseMatrix) -> Result<Vec<f64>> {
    check_dim("point dimension vs cell grid", model.grid.dim(), points.cols())?;
    let mut by_cell: Vec<Vec<usize>> = vec![Vec::new(); model.grid.n_cells()];
    for i in 0..points.rows() {
        by_cell[model.grid.locate(points.row(i))?].push(i);
    }
    let mut out = vec![0.0; points.rows()];
    for (c, idx) in by_cell.iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        let vals = model.evaluate_cell(c, &points.select_rows(idx))?;
        for (&i, v) in idx.iter().zip(vals) {
            out[i] = v;
        }
    }
    Ok(out)
}

pub fn error_report_dpielm(
    model: &DpielmModel,
    exact: &ScalarField,
    domain: &Domain,
    grid: &EvalGrid,
) -> Result<ErrorReport> {
    let points = grid.points(domain)?;
    let predicted = evaluate_points(model, &points)?;
    ErrorReport::from_values(points, predicted, exact, grid.describe())
}

/// Largest value/derivative mismatch over all interface constraint points,
/// split into `(C0, C1)`.
pub fn interface_mismatch(model: &DpielmModel, constraints: &[InterfaceConstraint]) -> Result<(f64, f64)> {
    let mut worst = (0.0f64, 0.0f64);
    for ic in constraints {
        let (l, r) = if ic.order == 0 {
            (
                model.evaluate_cell(ic.left, &ic.points)?,
                model.evaluate_cell(ic.right, &ic.points)?,
            )
        } else {
            (
                model.evaluate_cell_partial(ic.left, &ic.points, ic.axis)?,
                model.evaluate_cell_partial(ic.right, &ic.points, ic.axis)?,
            )
        };
        let m = l.iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if ic.order == 0 {
            worst.0 = worst.0.max(m);
        } else {
            worst.1 = worst.1.max(m);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{constant_field, Coefficient};

    fn tc9_like() -> Problem {
        let pde = LinearPde::new(1, 1.0, vec![Coefficient::Constant(1.0)], vec![0.005], 0.0, constant_field(0.0))
            .unwrap();
        let d = Domain::time_extruded(Domain::interval(0.0, 1.0).unwrap(), 0.5).unwrap();
        Problem::new(
            pde,
            d,
            BoundarySpec::dirichlet(constant_field(0.0)),
            Some(constant_field(0.0)),
            None,
        )
        .unwrap()
    }

    #[test]
    fn partition_sizes() {
        let d = Domain::time_extruded(Domain::interval(0.0, 1.0).unwrap(), 0.5).unwrap();
        let g = partition(&d, &[10, 10], &[5, 5]).unwrap();
        assert_eq!(g.n_cells(), 100);
        let (lo, hi) = g.cell_bounds(11);
        assert!((hi[0] - lo[0] - 0.1).abs() < 1e-15);
        assert!((hi[1] - lo[1] - 0.05).abs() < 1e-15);
        let g = partition(&Domain::interval(-1.0, 1.0).unwrap(), &[50], &[5]).unwrap();
        let (lo, hi) = g.cell_bounds(7);
        assert!((hi[0] - lo[0] - 0.04).abs() < 1e-14);
        assert!(partition(&d, &[0, 1], &[1, 1]).is_err());
    }

    #[test]
    fn locate_ties_go_low() {
        let g = CellGrid::new(vec![0.0], vec![1.0], vec![10], vec![3]).unwrap();
        assert_eq!(g.locate(&[0.0]).unwrap(), 0);
        assert_eq!(g.locate(&[0.1]).unwrap(), 0);
        assert_eq!(g.locate(&[0.3]).unwrap(), 2);
        assert_eq!(g.locate(&[0.30000001]).unwrap(), 3);
        assert_eq!(g.locate(&[1.0]).unwrap(), 9);
        assert!(g.locate(&[1.1]).is_err());
    }

    #[test]
    fn advection_grid_has_c0_only() {
        let pde = LinearPde::new(1, 1.0, vec![Coefficient::Constant(1.0)], vec![0.0], 0.0, constant_field(0.0))
            .unwrap();
        let g = CellGrid::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![2, 2], vec![3, 3]).unwrap();
        let plan = plan_interfaces(&g, &pde);
        assert_eq!(plan.len(), 4);
        assert!(plan.iter().all(|c| c.order == 0));
    }

    #[test]
    fn tc9_interface_and_row_counts() {
        let p = tc9_like();
        let g = partition(&p.domain, &[10, 10], &[5, 5]).unwrap();
        let plan = plan_interfaces(&g, &p.pde);
        let rows = |axis: usize, order: u8| -> usize {
            plan.iter()
                .filter(|c| c.axis == axis && c.order == order)
                .map(|c| c.points.rows())
                .sum()
        };
        assert_eq!(rows(0, 0), 9 * 10 * 5);
        assert_eq!(rows(0, 1), 9 * 10 * 5);
        assert_eq!(rows(1, 0), 10 * 9 * 5);
        assert_eq!(rows(1, 1), 0);
        let layers = cell_layers(&g, 30, 1, 1.0).unwrap();
        let sys = assemble_global(&p, &g, &layers, &plan).unwrap();
        assert_eq!(sys.total_cols(), 3000);
        assert_eq!(sys.total_rows(), 450 + 450 + 450 + 2500 + 100 + 50);
    }

    #[test]
    fn interface_points_on_shared_face() {
        let p = tc9_like();
        let g = partition(&p.domain, &[3, 2], &[4, 3]).unwrap();
        for ic in plan_interfaces(&g, &p.pde) {
            let (_, lhi) = g.cell_bounds(ic.left);
            let (rlo, _) = g.cell_bounds(ic.right);
            for i in 0..ic.points.rows() {
                let v = ic.points.get(i, ic.axis);
                assert!((v - lhi[ic.axis]).abs() <= 1e-12 && (v - rlo[ic.axis]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn layer_count_mismatch_is_an_error() {
        let p = tc9_like();
        let g = partition(&p.domain, &[2, 2], &[2, 2]).unwrap();
        let layers = cell_layers(&g, 4, 1, 1.0).unwrap();
        assert!(assemble_global(&p, &g, &layers[..3], &[]).is_err());
    }

    #[test]
    fn architecture_parsing() {
        let c = DpielmConfig::from_architecture(&[10, 10, 5, 5, 30], 2).unwrap();
        assert_eq!(c.cells, vec![10, 10]);
        assert_eq!(c.points_per_cell, vec![5, 5]);
        assert_eq!(c.neurons_per_cell, 30);
        assert_eq!(c.architecture(), vec![10, 10, 5, 5, 30]);
        assert!(DpielmConfig::from_architecture(&[50, 5], 1).is_err());
    }
}
