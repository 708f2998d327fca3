//! Linear PDEs `time_coeff * u_t + sum_j a_j u_{x_j} - sum_j nu_j u_{x_j x_j} + reaction * u = R`
//! with Dirichlet or periodic boundaries and optional initial data.
//!
//! Points are rows `[x, (y), (t)]`: spatial coordinates first, time last.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::features::{tanh_d1, tanh_d2, FeatureLayer};
use crate::geometry::Domain;
use crate::linalg::DenseMatrix;

/// A scalar function of a point `[x, (y), (t)]`.
pub type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

pub fn field(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> ScalarField {
    Arc::new(f)
}

pub fn constant_field(c: f64) -> ScalarField {
    Arc::new(move |_| c)
}

#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    Field(ScalarField),
}

impl Coefficient {
    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Field(f) => f(p),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Constant(c) if *c == 0.0)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(c) => write!(f, "Constant({c})"),
            Coefficient::Field(_) => f.write_str("Field(..)"),
        }
    }
}

#[derive(Clone)]
pub struct LinearPde {
    spatial_dim: usize,
    time_coeff: f64,
    advection: Vec<Coefficient>,
    diffusion: Vec<f64>,
    reaction: f64,
    source: ScalarField,
}

impl fmt::Debug for LinearPde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearPde")
            .field("spatial_dim", &self.spatial_dim)
            .field("time_coeff", &self.time_coeff)
            .field("advection", &self.advection)
            .field("diffusion", &self.diffusion)
            .field("reaction", &self.reaction)
            .finish_non_exhaustive()
    }
}

impl LinearPde {
    /// `time_coeff` must be 0 (steady) or 1; `advection` and `diffusion`
    /// have one entry per spatial axis.
    pub fn new(
        spatial_dim: usize,
        time_coeff: f64,
        advection: Vec<Coefficient>,
        diffusion: Vec<f64>,
        reaction: f64,
        source: ScalarField,
    ) -> Result<Self> {
        if !(1..=2).contains(&spatial_dim) {
            return Err(Error::InvalidArgument(format!(
                "spatial dimension must be 1 or 2, got {spatial_dim}"
            )));
        }
        check_dim("advection coefficients per axis", spatial_dim, advection.len())?;
        check_dim("diffusion coefficients per axis", spatial_dim, diffusion.len())?;
        if time_coeff != 0.0 && time_coeff != 1.0 {
            return Err(Error::InvalidArgument(format!(
                "time coefficient must be 0 or 1, got {time_coeff}"
            )));
        }
        if diffusion.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "diffusion coefficients must be finite and >= 0".into(),
            ));
        }
        if !reaction.is_finite() {
            return Err(Error::NonFinite("reaction coefficient"));
        }
        let trivial = time_coeff == 0.0
            && advection.iter().all(Coefficient::is_zero)
            && diffusion.iter().all(|&v| v == 0.0)
            && reaction == 0.0;
        if trivial {
            return Err(Error::InvalidArgument("the operator has no nonzero term".into()));
        }
        Ok(Self {
            spatial_dim,
            time_coeff,
            advection,
            diffusion,
            reaction,
            source,
        })
    }

    /// Identity operator `u = f`, used to fit a target function.
    pub fn representation(spatial_dim: usize, target: ScalarField) -> Result<Self> {
        Self::new(
            spatial_dim,
            0.0,
            vec![Coefficient::Constant(0.0); spatial_dim],
            vec![0.0; spatial_dim],
            1.0,
            target,
        )
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial_dim
    }

    pub fn time_dependent(&self) -> bool {
        self.time_coeff != 0.0
    }

    pub fn time_coeff(&self) -> f64 {
        self.time_coeff
    }

    /// Input dimension of the network: spatial axes plus time when present.
    pub fn dim(&self) -> usize {
        self.spatial_dim + usize::from(self.time_dependent())
    }

    pub fn advection(&self) -> &[Coefficient] {
        &self.advection
    }

    pub fn diffusion(&self) -> &[f64] {
        &self.diffusion
    }

    pub fn reaction(&self) -> f64 {
        self.reaction
    }

    pub fn source(&self) -> &ScalarField {
        &self.source
    }

    pub fn with_source(&self, source: ScalarField) -> Self {
        Self {
            source,
            ..self.clone()
        }
    }

    /// Applies the operator to `u` at `p` with central differences of step `h`.
    pub fn apply_fd(&self, u: &dyn Fn(&[f64]) -> f64, p: &[f64], h: f64) -> f64 {
        let mut q = p.to_vec();
        let mut shifted = |axis: usize, delta: f64| {
            q[axis] = p[axis] + delta;
            let v = u(&q);
            q[axis] = p[axis];
            v
        };
        let u0 = u(p);
        let mut out = self.reaction * u0;
        if self.time_dependent() {
            let t = self.spatial_dim;
            out += self.time_coeff * (shifted(t, h) - shifted(t, -h)) / (2.0 * h);
        }
        for j in 0..self.spatial_dim {
            let (up, um) = (shifted(j, h), shifted(j, -h));
            out += self.advection[j].eval(p) * (up - um) / (2.0 * h);
            out -= self.diffusion[j] * (up - 2.0 * u0 + um) / (h * h);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceSelection {
    All,
    /// Only boundary points whose tag is listed.
    Only(Vec<usize>),
}

impl FaceSelection {
    pub fn includes(&self, tag: usize) -> bool {
        match self {
            FaceSelection::All => true,
            FaceSelection::Only(tags) => tags.contains(&tag),
        }
    }
}

#[derive(Clone)]
pub enum BoundarySpec {
    Dirichlet { data: ScalarField, faces: FaceSelection },
    /// Left/right faces of the first axis identified.
    Periodic,
}

impl BoundarySpec {
    pub fn dirichlet(data: ScalarField) -> Self {
        BoundarySpec::Dirichlet {
            data,
            faces: FaceSelection::All,
        }
    }
}

impl fmt::Debug for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySpec::Dirichlet { faces, .. } => write!(f, "Dirichlet({faces:?})"),
            BoundarySpec::Periodic => f.write_str("Periodic"),
        }
    }
}

#[derive(Clone)]
pub struct Problem {
    pub pde: LinearPde,
    pub domain: Domain,
    pub boundary: BoundarySpec,
    /// Initial condition `F(x)` on the spatial coordinates.
    pub initial: Option<ScalarField>,
    pub exact: Option<ScalarField>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("pde", &self.pde)
            .field("domain", &self.domain)
            .field("boundary", &self.boundary)
            .field("initial", &self.initial.is_some())
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl Problem {
    pub fn new(
        pde: LinearPde,
        domain: Domain,
        boundary: BoundarySpec,
        initial: Option<ScalarField>,
        exact: Option<ScalarField>,
    ) -> Result<Self> {
        if pde.time_dependent() != domain.is_time_dependent() {
            return Err(Error::InvalidArgument(
                "time-dependent operators need a time-extruded domain and vice versa".into(),
            ));
        }
        check_dim("operator vs domain spatial dimension", domain.spatial_dim(), pde.spatial_dim())?;
        if pde.time_dependent() != initial.is_some() {
            return Err(Error::InvalidArgument(
                "an initial condition is required exactly for time-dependent problems".into(),
            ));
        }
        if matches!(boundary, BoundarySpec::Periodic) && !domain.is_box() {
            return Err(Error::InvalidArgument("periodic boundaries need a box domain".into()));
        }
        Ok(Self {
            pde,
            domain,
            boundary,
            initial,
            exact,
        })
    }
}

/// PDE residual rows: one per interior point, one column per neuron.
pub fn residual_rows(
    pde: &LinearPde,
    layer: &FeatureLayer,
    pts: &DenseMatrix,
) -> Result<(DenseMatrix, Vec<f64>)> {
    check_dim("operator dimension vs layer", pde.dim(), layer.dim())?;
    let z = layer.pre_activations(pts)?;
    let n = layer.n_neurons();
    let d = pde.spatial_dim;
    let w = layer.weights();
    let mut h = z;
    let mut rhs = Vec::with_capacity(pts.rows());
    let mut adv = vec![0.0; d];
    for i in 0..pts.rows() {
        let p = pts.row(i);
        for (j, a) in adv.iter_mut().enumerate() {
            *a = pde.advection[j].eval(p);
        }
        let row = h.row_mut(i);
        for (k, v) in row.iter_mut().enumerate().take(n) {
            let t = v.tanh();
            let (d1, d2) = (tanh_d1(t), tanh_d2(t));
            let mut first = 0.0;
            let mut second = 0.0;
            if pde.time_dependent() {
                first += pde.time_coeff * w.get(k, d);
            }
            for j in 0..d {
                let wj = w.get(k, j);
                first += adv[j] * wj;
                second += pde.diffusion[j] * wj * wj;
            }
            *v = first * d1 - second * d2 + pde.reaction * t;
        }
        rhs.push(finite((pde.source)(p), "source term")?);
    }
    Ok((h, rhs))
}

fn finite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Value constraints `h(x) c = B(x)`.
pub fn dirichlet_rows(
    layer: &FeatureLayer,
    pts: &DenseMatrix,
    data: &ScalarField,
) -> Result<(DenseMatrix, Vec<f64>)> {
    let h = layer.eval_features(pts)?;
    let rhs = (0..pts.rows())
        .map(|i| finite(data(pts.row(i)), "boundary data"))
        .collect::<Result<_>>()?;
    Ok((h, rhs))
}

/// Periodic constraints `(h(x_left) - h(x_right)) c = 0`. Paired points must
/// agree in every coordinate except the first.
pub fn periodic_rows(
    layer: &FeatureLayer,
    left: &DenseMatrix,
    right: &DenseMatrix,
) -> Result<(DenseMatrix, Vec<f64>)> {
    if left.rows() != right.rows() {
        return Err(Error::InvalidArgument(format!(
            "periodic pairing has {} left points but {} right points",
            left.rows(),
            right.rows()
        )));
    }
    check_dim("periodic point dimension", left.cols(), right.cols())?;
    for i in 0..left.rows() {
        if left.row(i)[1..] != right.row(i)[1..] {
            return Err(Error::InvalidArgument(format!(
                "periodic pair {i} is not matched: {:?} vs {:?}",
                left.row(i),
                right.row(i)
            )));
        }
    }
    let hl = layer.eval_features(left)?;
    let hr = layer.eval_features(right)?;
    let entries = hl.as_slice().iter().zip(hr.as_slice()).map(|(a, b)| a - b).collect();
    Ok((
        DenseMatrix::from_vec_unchecked(left.rows(), layer.n_neurons(), entries),
        vec![0.0; left.rows()],
    ))
}

/// Initial constraints `h(x, 0) c = F(x)`; every point must have `t = 0` exactly.
pub fn initial_rows(
    layer: &FeatureLayer,
    pts: &DenseMatrix,
    initial: &ScalarField,
) -> Result<(DenseMatrix, Vec<f64>)> {
    let tc = pts.cols().saturating_sub(1);
    let mut rhs = Vec::with_capacity(pts.rows());
    for i in 0..pts.rows() {
        let p = pts.row(i);
        if p[tc] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "initial point {p:?} does not lie at t = 0"
            )));
        }
        rhs.push(finite(initial(&p[..tc]), "initial data")?);
    }
    Ok((layer.eval_features(pts)?, rhs))
}
