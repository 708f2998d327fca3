//! Minimum-norm least-squares solves of `H c = K`.
//!
//! The default path is the truncated-SVD pseudo-inverse: singular values
//! below `tolerance * sigma_max` are discarded. Householder QR and a ridge
//! (Tikhonov) mode are provided as alternatives.

use std::fmt;
use std::str::FromStr;

use faer::Mat;

use super::dense::{norm2, DenseMatrix};
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LsMethod {
    /// Truncated SVD pseudo-inverse.
    Svd,
    /// Householder QR; min-norm for full-rank systems only.
    Qr,
    /// Minimizes `|Hc - K|^2 + lambda |c|^2`, with `lambda` passed as the tolerance.
    Ridge,
}

/// Solver that actually produced a [`LeastSquaresSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodUsed {
    Svd,
    Qr,
    Ridge,
    Lsqr,
}

impl fmt::Display for MethodUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodUsed::Svd => "svd",
            MethodUsed::Qr => "qr",
            MethodUsed::Ridge => "ridge",
            MethodUsed::Lsqr => "lsqr",
        })
    }
}

impl fmt::Display for LsMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LsMethod::Svd => "svd",
            LsMethod::Qr => "qr",
            LsMethod::Ridge => "ridge",
        })
    }
}

impl FromStr for LsMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svd" | "pinv" => Ok(LsMethod::Svd),
            "qr" => Ok(LsMethod::Qr),
            "ridge" => Ok(LsMethod::Ridge),
            other => Err(Error::InvalidArgument(format!(
                "unknown least-squares method `{other}` (expected svd, qr or ridge)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresSolution {
    pub coefficients: Vec<f64>,
    /// `|H c - K|_2`, recomputed from the returned coefficients.
    pub residual_norm: f64,
    pub effective_rank: usize,
    pub method_used: MethodUsed,
    /// Iterative solves only: whether the stopping test was met before `max_iter`.
    pub converged: bool,
    pub iterations: usize,
}

/// `max(rows, cols) * eps`, the conventional pseudo-inverse cutoff.
pub fn default_tolerance(rows: usize, cols: usize) -> f64 {
    rows.max(cols).max(1) as f64 * f64::EPSILON
}

pub fn residual_norm(h: &DenseMatrix, c: &[f64], k: &[f64]) -> f64 {
    let hc = h.matvec(c).expect("residual_norm: shape checked by caller");
    hc.iter()
        .zip(k)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

pub fn solve_least_squares(
    h: &DenseMatrix,
    k: &[f64],
    method: LsMethod,
    tolerance: f64,
) -> Result<LeastSquaresSolution> {
    check_dim("solve_least_squares rhs length", h.rows(), k.len())?;
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {tolerance}"
        )));
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("least-squares right-hand side"));
    }
    let method_used = match method {
        LsMethod::Svd => MethodUsed::Svd,
        LsMethod::Qr => MethodUsed::Qr,
        LsMethod::Ridge => MethodUsed::Ridge,
    };
    if h.is_zero() {
        return Ok(LeastSquaresSolution {
            coefficients: vec![0.0; h.cols()],
            residual_norm: norm2(k),
            effective_rank: 0,
            method_used,
            converged: true,
            iterations: 0,
        });
    }
    let (coefficients, effective_rank) = match method {
        LsMethod::Svd => svd_solve(h, k, tolerance)?,
        LsMethod::Qr => qr_solve(h, k, default_tolerance(h.rows(), h.cols()).max(tolerance)),
        LsMethod::Ridge => ridge_solve(h, k, tolerance),
    };
    if coefficients.iter().any(|v| !v.is_finite()) {
        return Err(Error::Factorization(format!(
            "{method} solve produced non-finite coefficients"
        )));
    }
    let residual_norm = residual_norm(h, &coefficients, k);
    Ok(LeastSquaresSolution {
        coefficients,
        residual_norm,
        effective_rank,
        method_used,
        converged: true,
        iterations: 0,
    })
}

/// Thin SVD of a dense matrix: `(U, sigma, V)` with `U` rows x r, `V` cols x r.
pub(crate) struct ThinSvd {
    pub u: Mat<f64>,
    pub sigma: Vec<f64>,
    pub v: Mat<f64>,
}

pub(crate) fn thin_svd(h: &DenseMatrix) -> Result<ThinSvd> {
    let a = Mat::<f64>::from_fn(h.rows(), h.cols(), |i, j| h.get(i, j));
    let svd = a
        .thin_svd()
        .map_err(|e| Error::Factorization(format!("svd did not converge: {e:?}")))?;
    let s = svd.S().column_vector();
    let sigma = (0..s.nrows()).map(|i| s[i]).collect();
    Ok(ThinSvd {
        u: svd.U().to_owned(),
        sigma,
        v: svd.V().to_owned(),
    })
}

fn svd_solve(h: &DenseMatrix, k: &[f64], tolerance: f64) -> Result<(Vec<f64>, usize)> {
    let ThinSvd { u, sigma, v } = thin_svd(h)?;
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    let cutoff = tolerance * sigma_max;
    let mut c = vec![0.0; h.cols()];
    let mut rank = 0;
    for (r, &s) in sigma.iter().enumerate() {
        if !(s > cutoff) {
            continue;
        }
        rank += 1;
        let mut proj = 0.0;
        for (i, &ki) in k.iter().enumerate() {
            proj += u[(i, r)] * ki;
        }
        let scale = proj / s;
        for (j, cj) in c.iter_mut().enumerate() {
            *cj += v[(j, r)] * scale;
        }
    }
    Ok((c, rank))
}

/// Householder QR of a column-major working copy. Returns the packed factors.
struct Householder {
    rows: usize,
    cols: usize,
    /// Column-major; below the diagonal holds the reflector vectors.
    a: Vec<f64>,
    /// Reflector scalars `beta` with `H = I - beta v vᵀ`, `v[0] = 1`.
    beta: Vec<f64>,
    /// Diagonal of R.
    rdiag: Vec<f64>,
}

impl Householder {
    fn factor(rows: usize, cols: usize, mut a: Vec<f64>) -> Self {
        let steps = rows.min(cols);
        let mut beta = vec![0.0; steps];
        let mut rdiag = vec![0.0; steps];
        for j in 0..steps {
            let col = j * rows;
            let x = &a[col + j..col + rows];
            let norm = norm2(x);
            if norm == 0.0 {
                continue;
            }
            let alpha = if x[0] > 0.0 { -norm } else { norm };
            let v0 = a[col + j] - alpha;
            for i in j + 1..rows {
                a[col + i] /= v0;
            }
            a[col + j] = 1.0;
            let vtv: f64 = 1.0 + a[col + j + 1..col + rows].iter().map(|x| x * x).sum::<f64>();
            let b = 2.0 / vtv;
            beta[j] = b;
            rdiag[j] = alpha;
            for jj in j + 1..cols {
                let c2 = jj * rows;
                let mut s = 0.0;
                for i in j..rows {
                    s += a[col + i] * a[c2 + i];
                }
                s *= b;
                for i in j..rows {
                    a[c2 + i] -= s * a[col + i];
                }
            }
            a[col + j] = alpha;
        }
        Self {
            rows,
            cols,
            a,
            beta,
            rdiag,
        }
    }

    fn reflector_dot(&self, j: usize, y: &[f64]) -> f64 {
        let col = j * self.rows;
        let mut s = y[j];
        for i in j + 1..self.rows {
            s += self.a[col + i] * y[i];
        }
        s
    }

    fn reflector_axpy(&self, j: usize, s: f64, y: &mut [f64]) {
        let col = j * self.rows;
        y[j] -= s;
        for i in j + 1..self.rows {
            y[i] -= s * self.a[col + i];
        }
    }

    /// `y <- Qᵀ y`.
    fn apply_qt(&self, y: &mut [f64]) {
        for j in 0..self.beta.len() {
            if self.beta[j] == 0.0 {
                continue;
            }
            let s = self.beta[j] * self.reflector_dot(j, y);
            self.reflector_axpy(j, s, y);
        }
    }

    /// `y <- Q y`.
    fn apply_q(&self, y: &mut [f64]) {
        for j in (0..self.beta.len()).rev() {
            if self.beta[j] == 0.0 {
                continue;
            }
            let s = self.beta[j] * self.reflector_dot(j, y);
            self.reflector_axpy(j, s, y);
        }
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.rdiag[i]
        } else {
            self.a[j * self.rows + i]
        }
    }

    fn rank_mask(&self, tol: f64) -> Vec<bool> {
        let rmax = self.rdiag.iter().map(|v| v.abs()).fold(0.0, f64::max);
        self.rdiag.iter().map(|v| v.abs() > tol * rmax).collect()
    }

    /// Solves `R x = y` on the leading square block, zeroing dropped pivots.
    fn back_substitute(&self, y: &[f64], keep: &[bool]) -> Vec<f64> {
        let n = self.cols.min(self.rows);
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            if !keep[i] {
                continue;
            }
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.r(i, j) * x[j];
            }
            x[i] = s / self.rdiag[i];
        }
        x
    }

    /// Solves `Rᵀ x = y`, zeroing dropped pivots.
    fn forward_substitute_transpose(&self, y: &[f64], keep: &[bool]) -> Vec<f64> {
        let n = self.cols.min(self.rows);
        let mut x = vec![0.0; n];
        for i in 0..n {
            if !keep[i] {
                continue;
            }
            let mut s = y[i];
            for j in 0..i {
                s -= self.r(j, i) * x[j];
            }
            x[i] = s / self.rdiag[i];
        }
        x
    }
}

fn column_major(h: &DenseMatrix) -> Vec<f64> {
    let mut a = vec![0.0; h.rows() * h.cols()];
    for i in 0..h.rows() {
        for (j, &v) in h.row(i).iter().enumerate() {
            a[j * h.rows() + i] = v;
        }
    }
    a
}

fn qr_solve(h: &DenseMatrix, k: &[f64], tol: f64) -> (Vec<f64>, usize) {
    if h.rows() >= h.cols() {
        let qr = Householder::factor(h.rows(), h.cols(), column_major(h));
        let keep = qr.rank_mask(tol);
        let mut y = k.to_vec();
        qr.apply_qt(&mut y);
        let c = qr.back_substitute(&y, &keep);
        (c, keep.iter().filter(|&&b| b).count())
    } else {
        // Underdetermined: factor Hᵀ = QR, then c = Q R⁻ᵀ K.
        let t = h.transpose();
        let qr = Householder::factor(t.rows(), t.cols(), column_major(&t));
        let keep = qr.rank_mask(tol);
        let z = qr.forward_substitute_transpose(k, &keep);
        let mut c = vec![0.0; h.cols()];
        c[..z.len()].copy_from_slice(&z);
        qr.apply_q(&mut c);
        (c, keep.iter().filter(|&&b| b).count())
    }
}

/// Ridge through QR of the augmented system `[H; sqrt(lambda) I] c = [K; 0]`.
fn ridge_solve(h: &DenseMatrix, k: &[f64], lambda: f64) -> (Vec<f64>, usize) {
    let (m, n) = (h.rows(), h.cols());
    let rows = m + n;
    let mut a = vec![0.0; rows * n];
    let damp = lambda.sqrt();
    for j in 0..n {
        for i in 0..m {
            a[j * rows + i] = h.get(i, j);
        }
        a[j * rows + m + j] = damp;
    }
    let qr = Householder::factor(rows, n, a);
    let keep = vec![true; n];
    let mut y = k.to_vec();
    y.resize(rows, 0.0);
    qr.apply_qt(&mut y);
    let c = qr.back_substitute(&y, &keep);
    let rank = qr
        .rank_mask(default_tolerance(m, n))
        .iter()
        .filter(|&&b| b)
        .count()
        .min(m.min(n));
    (c, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(h: &DenseMatrix, k: &[f64], m: LsMethod) -> LeastSquaresSolution {
        solve_least_squares(h, k, m, default_tolerance(h.rows(), h.cols())).unwrap()
    }

    #[test]
    fn identity_system() {
        let h = DenseMatrix::identity(3);
        for m in [LsMethod::Svd, LsMethod::Qr] {
            let s = solve(&h, &[1.0, 2.0, 3.0], m);
            for (c, e) in s.coefficients.iter().zip([1.0, 2.0, 3.0]) {
                assert!((c - e).abs() < 1e-14);
            }
            assert!(s.residual_norm < 1e-14);
            assert_eq!(s.effective_rank, 3);
        }
    }

    #[test]
    fn underdetermined_splits_evenly() {
        let h = DenseMatrix::new(1, 2, vec![1.0, 1.0]).unwrap();
        for m in [LsMethod::Svd, LsMethod::Qr] {
            let s = solve(&h, &[2.0], m);
            assert!((s.coefficients[0] - 1.0).abs() < 1e-14, "{m}");
            assert!((s.coefficients[1] - 1.0).abs() < 1e-14, "{m}");
            assert!(s.residual_norm < 1e-14);
        }
    }

    #[test]
    fn two_samples_give_mean() {
        let h = DenseMatrix::new(2, 1, vec![1.0, 1.0]).unwrap();
        for m in [LsMethod::Svd, LsMethod::Qr] {
            let s = solve(&h, &[1.0, 3.0], m);
            assert!((s.coefficients[0] - 2.0).abs() < 1e-14);
            assert!((s.residual_norm - 2f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_matrix_is_not_an_error() {
        let h = DenseMatrix::zeros(3, 2);
        for m in [LsMethod::Svd, LsMethod::Qr, LsMethod::Ridge] {
            let s = solve_least_squares(&h, &[3.0, 0.0, 4.0], m, 1e-6).unwrap();
            assert_eq!(s.coefficients, vec![0.0, 0.0]);
            assert_eq!(s.residual_norm, 5.0);
            assert_eq!(s.effective_rank, 0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = DenseMatrix::identity(2);
        assert!(matches!(
            solve_least_squares(&h, &[1.0], LsMethod::Svd, 1e-12),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(solve_least_squares(&h, &[1.0, 1.0], LsMethod::Svd, 0.0).is_err());
        assert!(solve_least_squares(&h, &[1.0, f64::NAN], LsMethod::Svd, 1e-12).is_err());
    }

    #[test]
    fn rank_deficient_svd_drops_null_direction() {
        // Two identical columns: rank 1, min-norm splits the weight.
        let h = DenseMatrix::new(3, 2, vec![1.0, 1.0, 2.0, 2.0, -1.0, -1.0]).unwrap();
        let s = solve(&h, &[2.0, 4.0, -2.0], LsMethod::Svd);
        assert_eq!(s.effective_rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((s.coefficients[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ridge_shrinks_towards_zero() {
        let h = DenseMatrix::identity(2);
        let s = solve_least_squares(&h, &[1.0, 2.0], LsMethod::Ridge, 1.0).unwrap();
        // (HᵀH + I) c = Hᵀ K  =>  c = K / 2
        assert!((s.coefficients[0] - 0.5).abs() < 1e-14);
        assert!((s.coefficients[1] - 1.0).abs() < 1e-14);
        assert_eq!(s.method_used, MethodUsed::Ridge);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("SVD".parse::<LsMethod>().unwrap(), LsMethod::Svd);
        assert_eq!("ridge".parse::<LsMethod>().unwrap(), LsMethod::Ridge);
        assert!("lu".parse::<LsMethod>().is_err());
    }
}
