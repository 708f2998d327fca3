//! Block-sparse least-squares systems.
//!
//! Columns are partitioned into groups (one per cell of a decomposed
//! domain); every stored block lives inside a single column group. Rows
//! coupling two groups are represented by two blocks sharing a row range.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use faer::Mat;

use super::dense::{norm2, DenseMatrix};
use super::lstsq::{
    default_tolerance, solve_least_squares, thin_svd, LeastSquaresSolution, LsMethod, MethodUsed,
};
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub row_start: usize,
    pub col_start: usize,
    pub matrix: DenseMatrix,
}

impl Block {
    pub fn row_range(&self) -> Range<usize> {
        self.row_start..self.row_start + self.matrix.rows()
    }

    pub fn col_range(&self) -> Range<usize> {
        self.col_start..self.col_start + self.matrix.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSparseSystem {
    blocks: Vec<Block>,
    total_rows: usize,
    total_cols: usize,
    rhs: Vec<f64>,
    column_groups: Vec<Range<usize>>,
}

impl BlockSparseSystem {
    /// Validates that blocks stay in bounds and inside one column group each,
    /// and that the groups partition `0..total_cols` in order.
    pub fn new(
        blocks: Vec<Block>,
        total_rows: usize,
        column_groups: Vec<Range<usize>>,
        rhs: Vec<f64>,
    ) -> Result<Self> {
        check_dim("block system rhs length", total_rows, rhs.len())?;
        let mut next = 0;
        for g in &column_groups {
            if g.start != next || g.end < g.start {
                return Err(Error::InvalidArgument(format!(
                    "column groups must partition the columns in order; group {g:?} after column {next}"
                )));
            }
            next = g.end;
        }
        let total_cols = next;
        for (n, b) in blocks.iter().enumerate() {
            let (rr, cr) = (b.row_range(), b.col_range());
            if rr.end > total_rows || cr.end > total_cols {
                return Err(Error::InvalidArgument(format!(
                    "block {n} ({rr:?} x {cr:?}) exceeds system bounds {total_rows} x {total_cols}"
                )));
            }
            if !column_groups
                .iter()
                .any(|g| g.start <= cr.start && cr.end <= g.end)
            {
                return Err(Error::InvalidArgument(format!(
                    "block {n} columns {cr:?} straddle a column group boundary"
                )));
            }
        }
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("block system rhs"));
        }
        Ok(Self {
            blocks,
            total_rows,
            total_cols,
            rhs,
            column_groups,
        })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn total_rows(&self) -> usize {
        self.total_rows
    }

    pub fn total_cols(&self) -> usize {
        self.total_cols
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn column_groups(&self) -> &[Range<usize>] {
        &self.column_groups
    }

    pub fn nnz(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.matrix.rows() * b.matrix.cols())
            .sum()
    }

    /// Materializes the system matrix. Overlapping blocks are summed.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.total_rows, self.total_cols);
        for b in &self.blocks {
            for i in 0..b.matrix.rows() {
                let row = out.row_mut(b.row_start + i);
                for (j, &v) in b.matrix.row(i).iter().enumerate() {
                    row[b.col_start + j] += v;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("block matvec length", self.total_cols, x.len())?;
        let mut y = vec![0.0; self.total_rows];
        self.add_matvec(x, &mut y);
        Ok(y)
    }

    /// `y += A x`
    fn add_matvec(&self, x: &[f64], y: &mut [f64]) {
        for b in &self.blocks {
            let xs = &x[b.col_range()];
            for i in 0..b.matrix.rows() {
                y[b.row_start + i] += super::dense::dot(b.matrix.row(i), xs);
            }
        }
    }

    /// `x += Aᵀ y`
    fn add_transpose_matvec(&self, y: &[f64], x: &mut [f64]) {
        for b in &self.blocks {
            let r = b.row_range();
            let c = b.col_range();
            b.matrix.add_transpose_matvec(&y[r], &mut x[c]);
        }
    }

    /// Dense column slab `A[:, group]` restricted to the rows it touches.
    fn group_slab(&self, group: &Range<usize>) -> DenseMatrix {
        let mut rows: Vec<usize> = Vec::new();
        for b in &self.blocks {
            let c = b.col_range();
            if group.start <= c.start && c.end <= group.end {
                rows.extend(b.row_range());
            }
        }
        rows.sort_unstable();
        rows.dedup();
        let width = group.end - group.start;
        let mut slab = DenseMatrix::zeros(rows.len(), width);
        for b in &self.blocks {
            let c = b.col_range();
            if !(group.start <= c.start && c.end <= group.end) {
                continue;
            }
            for i in 0..b.matrix.rows() {
                let local = rows.binary_search(&(b.row_start + i)).expect("row collected");
                let dst = slab.row_mut(local);
                for (j, &v) in b.matrix.row(i).iter().enumerate() {
                    dst[c.start - group.start + j] += v;
                }
            }
        }
        slab
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockMethod {
    /// Materialize and run the dense SVD pseudo-inverse.
    DensifySvd,
    /// Preconditioned LSQR on the block structure.
    IterativeLsqr,
}

impl fmt::Display for BlockMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockMethod::DensifySvd => "densify_svd",
            BlockMethod::IterativeLsqr => "iterative_lsqr",
        })
    }
}

impl FromStr for BlockMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "densify_svd" | "dense" | "svd" => Ok(BlockMethod::DensifySvd),
            "iterative_lsqr" | "lsqr" => Ok(BlockMethod::IterativeLsqr),
            other => Err(Error::InvalidArgument(format!(
                "unknown block solver `{other}` (expected densify_svd or iterative_lsqr)"
            ))),
        }
    }
}

/// Solves a block-sparse least-squares problem.
///
/// `densify_svd` is exactly [`solve_least_squares`] on [`BlockSparseSystem::to_dense`].
/// `iterative_lsqr` runs LSQR with a block-column right preconditioner: each
/// column group `A[:, g]` is replaced by its truncated-SVD orthonormal factor,
/// so the iteration only has to resolve the coupling between groups.
/// Exhausting `max_iter` is reported through `converged = false`.
pub fn solve_block_sparse(
    system: &BlockSparseSystem,
    method: BlockMethod,
    tolerance: f64,
    max_iter: usize,
) -> Result<LeastSquaresSolution> {
    match method {
        BlockMethod::DensifySvd => {
            solve_least_squares(&system.to_dense(), &system.rhs, LsMethod::Svd, tolerance)
        }
        BlockMethod::IterativeLsqr => lsqr_preconditioned(system, tolerance, max_iter),
    }
}

/// Per-group map `c_g = P_g y_g` with `P_g = V_g diag(1/sigma)` over retained
/// singular values.
struct GroupPreconditioner {
    /// For each group: column-major `width x rank` matrix.
    maps: Vec<(usize, usize, Vec<f64>)>,
    reduced_offsets: Vec<usize>,
    reduced_cols: usize,
}

impl GroupPreconditioner {
    fn build(system: &BlockSparseSystem) -> Result<Self> {
        let mut maps = Vec::with_capacity(system.column_groups.len());
        let mut reduced_offsets = Vec::with_capacity(system.column_groups.len());
        let mut reduced_cols = 0;
        for g in &system.column_groups {
            let width = g.end - g.start;
            let slab = system.group_slab(g);
            reduced_offsets.push(reduced_cols);
            if slab.rows() == 0 || width == 0 || slab.is_zero() {
                maps.push((width, 0, Vec::new()));
                continue;
            }
            let svd = thin_svd(&slab)?;
            let smax = svd.sigma.iter().cloned().fold(0.0, f64::max);
            let cutoff = default_tolerance(slab.rows(), width) * smax;
            let keep: Vec<usize> = (0..svd.sigma.len())
                .filter(|&r| svd.sigma[r] > cutoff)
                .collect();
            let v: &Mat<f64> = &svd.v;
            let mut p = vec![0.0; width * keep.len()];
            for (rc, &r) in keep.iter().enumerate() {
                for j in 0..width {
                    p[rc * width + j] = v[(j, r)] / svd.sigma[r];
                }
            }
            reduced_cols += keep.len();
            maps.push((width, keep.len(), p));
        }
        Ok(Self {
            maps,
            reduced_offsets,
            reduced_cols,
        })
    }

    /// `c = P y`
    fn expand(&self, system: &BlockSparseSystem, y: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; system.total_cols];
        for (gi, g) in system.column_groups.iter().enumerate() {
            let (width, rank, p) = &self.maps[gi];
            let off = self.reduced_offsets[gi];
            let dst = &mut c[g.start..g.end];
            for r in 0..*rank {
                let yr = y[off + r];
                for j in 0..*width {
                    dst[j] += p[r * width + j] * yr;
                }
            }
        }
        c
    }

    /// `y = Pᵀ c`
    fn contract(&self, system: &BlockSparseSystem, c: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.reduced_cols];
        for (gi, g) in system.column_groups.iter().enumerate() {
            let (width, rank, p) = &self.maps[gi];
            let off = self.reduced_offsets[gi];
            let src = &c[g.start..g.end];
            for r in 0..*rank {
                y[off + r] = super::dense::dot(&p[r * width..(r + 1) * width], src);
            }
        }
        y
    }
}

fn scale(v: &mut [f64], s: f64) {
    for x in v {
        *x *= s;
    }
}

/// Paige–Saunders LSQR on `A P y = b`, returning `c = P y`.
fn lsqr_preconditioned(
    system: &BlockSparseSystem,
    tolerance: f64,
    max_iter: usize,
) -> Result<LeastSquaresSolution> {
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {tolerance}"
        )));
    }
    let pre = GroupPreconditioner::build(system)?;
    let b = &system.rhs;
    let apply = |y: &[f64], out: &mut [f64]| {
        let c = pre.expand(system, y);
        system.add_matvec(&c, out);
    };
    let apply_t = |u: &[f64]| {
        let mut c = vec![0.0; system.total_cols];
        system.add_transpose_matvec(u, &mut c);
        pre.contract(system, &c)
    };

    let n = pre.reduced_cols;
    let mut y = vec![0.0; n];
    let bnorm = norm2(b);
    let finish = |y: &[f64], iterations: usize, converged: bool| {
        let c = pre.expand(system, y);
        let r = system.matvec(&c).expect("shape");
        let residual_norm = r
            .iter()
            .zip(b)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        LeastSquaresSolution {
            coefficients: c,
            residual_norm,
            effective_rank: n,
            method_used: MethodUsed::Lsqr,
            converged,
            iterations,
        }
    };
    if bnorm == 0.0 || n == 0 {
        return Ok(finish(&y, 0, true));
    }

    let mut u = b.clone();
    let mut beta = bnorm;
    scale(&mut u, 1.0 / beta);
    let mut v = apply_t(&u);
    let mut alpha = norm2(&v);
    if alpha == 0.0 {
        return Ok(finish(&y, 0, true));
    }
    scale(&mut v, 1.0 / alpha);
    let mut w = v.clone();
    let mut phibar = beta;
    let mut rhobar = alpha;
    let mut anorm_sq = 0.0;
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=max_iter {
        iterations = it;
        // u = A v - alpha u
        scale(&mut u, -alpha);
        apply(&v, &mut u);
        beta = norm2(&u);
        if beta > 0.0 {
            scale(&mut u, 1.0 / beta);
            anorm_sq += alpha * alpha + beta * beta;
            let atu = apply_t(&u);
            for (vi, ai) in v.iter_mut().zip(&atu) {
                *vi = ai - beta * *vi;
            }
            alpha = norm2(&v);
            if alpha > 0.0 {
                scale(&mut v, 1.0 / alpha);
            }
        } else {
            anorm_sq += alpha * alpha;
        }

        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let s = beta / rho;
        let theta = s * alpha;
        rhobar = -c * alpha;
        let phi = c * phibar;
        phibar *= s;

        let t1 = phi / rho;
        let t2 = -theta / rho;
        for ((yi, wi), vi) in y.iter_mut().zip(w.iter_mut()).zip(&v) {
            *yi += t1 * *wi;
            *wi = vi + t2 * *wi;
        }

        let rnorm = phibar;
        let arnorm = phibar * alpha * c.abs();
        let anorm = anorm_sq.sqrt();
        let ynorm = norm2(&y);
        let test1 = rnorm / bnorm;
        let test2 = if rnorm > 0.0 && anorm > 0.0 {
            arnorm / (anorm * rnorm)
        } else {
            0.0
        };
        if test1 <= tolerance + tolerance * anorm * ynorm / bnorm || test2 <= tolerance {
            converged = true;
            break;
        }
        if alpha == 0.0 || beta == 0.0 {
            converged = true;
            break;
        }
    }
    Ok(finish(&y, iterations, converged))
}
