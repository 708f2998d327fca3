//! Random tanh feature layer and its analytic partial derivatives.
//!
//! A layer with `N*` neurons maps a point `x` in `R^d` to
//! `h_k(x) = tanh(w_k · x + b_k)`. Derivatives along an input axis follow
//! from the chain rule: `d^p h_k / dx_a^p = w_ka^p tanh^(p)(z_k)`.
//!
//! Weights and biases are drawn from [`SplitMix64`], so a layer is fully
//! determined by `(seed, n_neurons, dim, init_scale)`: for each neuron in
//! turn, its `dim` direction weights are drawn first, then its bias, each
//! as `init_scale * (2u - 1)` with `u = (next() >> 11) * 2^-53`.

use crate::error::{check_dim, Error, Result};
use crate::linalg::DenseMatrix;

/// Feature values for a batch of points: one row per point, one column per neuron.
pub type FeatureMatrix = DenseMatrix;

/// SplitMix64 (Steele, Lea, Flood 2014). Tiny, portable, and easy to
/// reimplement bit-exactly in any language.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureLayer {
    /// `n_neurons x dim`; row `k` holds the direction weights of neuron `k`.
    weights: DenseMatrix,
    bias: Vec<f64>,
    seed: u64,
    init_scale: f64,
}

/// Draws a layer with weights and biases i.i.d. uniform on `[-init_scale, init_scale)`.
pub fn init_layer(n_neurons: usize, dim: usize, seed: u64, init_scale: f64) -> Result<FeatureLayer> {
    if n_neurons == 0 {
        return Err(Error::InvalidArgument("a feature layer needs at least one neuron".into()));
    }
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidArgument(format!(
            "input dimension must be 1, 2 or 3, got {dim}"
        )));
    }
    if !(init_scale >= 0.0) || !init_scale.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "init_scale must be finite and non-negative, got {init_scale}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut w = Vec::with_capacity(n_neurons * dim);
    let mut bias = Vec::with_capacity(n_neurons);
    for _ in 0..n_neurons {
        for _ in 0..dim {
            w.push(init_scale * (2.0 * rng.next_f64() - 1.0));
        }
        bias.push(init_scale * (2.0 * rng.next_f64() - 1.0));
    }
    Ok(FeatureLayer {
        weights: DenseMatrix::from_vec_unchecked(n_neurons, dim, w),
        bias,
        seed,
        init_scale,
    })
}

/// Draws a layer in coordinates normalized to `[-1, 1]` over the box
/// `[lo, hi]`, then expresses it in the original coordinates.
///
/// With `xi_a = (x_a - c_a) / r_a`, the neuron `tanh(v · xi + beta)` equals
/// `tanh(w · x + b)` for `w_a = v_a / r_a` and `b = beta - sum_a w_a c_a`.
pub fn init_layer_on_box(
    n_neurons: usize,
    lo: &[f64],
    hi: &[f64],
    seed: u64,
    init_scale: f64,
) -> Result<FeatureLayer> {
    check_dim("init_layer_on_box bounds", lo.len(), hi.len())?;
    let local = init_layer(n_neurons, lo.len(), seed, init_scale)?;
    local.rescaled_to_box(lo, hi)
}

impl FeatureLayer {
    /// Builds a layer from explicit weights (`n x d`) and biases.
    pub fn from_parts(weights: DenseMatrix, bias: Vec<f64>) -> Result<Self> {
        check_dim("FeatureLayer bias length", weights.rows(), bias.len())?;
        if weights.rows() == 0 {
            return Err(Error::InvalidArgument("a feature layer needs at least one neuron".into()));
        }
        if bias.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("FeatureLayer bias"));
        }
        Ok(Self {
            weights,
            bias,
            seed: 0,
            init_scale: 0.0,
        })
    }

    fn rescaled_to_box(&self, lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim("box dimension", self.dim(), lo.len())?;
        let d = self.dim();
        let mut w = self.weights.clone();
        let mut bias = self.bias.clone();
        for a in 0..d {
            if !(hi[a] > lo[a]) {
                return Err(Error::DegenerateDomain(format!(
                    "box axis {a} has empty extent [{}, {}]",
                    lo[a], hi[a]
                )));
            }
        }
        for k in 0..self.n_neurons() {
            let row = w.row_mut(k);
            for a in 0..d {
                let centre = 0.5 * (lo[a] + hi[a]);
                let radius = 0.5 * (hi[a] - lo[a]);
                row[a] /= radius;
                bias[k] -= row[a] * centre;
            }
        }
        Ok(Self {
            weights: w,
            bias,
            seed: self.seed,
            init_scale: self.init_scale,
        })
    }

    pub fn n_neurons(&self) -> usize {
        self.weights.rows()
    }

    pub fn dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn init_scale(&self) -> f64 {
        self.init_scale
    }

    /// Column `axis` of the weight matrix: one entry per neuron.
    pub fn axis_weights(&self, axis: usize) -> Vec<f64> {
        (0..self.n_neurons()).map(|k| self.weights.get(k, axis)).collect()
    }

    /// Pre-activations `z[i][k] = w_k · p_i + b_k`.
    pub fn pre_activations(&self, points: &DenseMatrix) -> Result<DenseMatrix> {
        check_dim("feature evaluation point dimension", self.dim(), points.cols())?;
        let n = self.n_neurons();
        let mut z = DenseMatrix::zeros(points.rows(), n);
        for i in 0..points.rows() {
            let p = points.row(i);
            let zr = z.row_mut(i);
            for (k, zk) in zr.iter_mut().enumerate() {
                let mut s = self.bias[k];
                for (a, &x) in p.iter().enumerate() {
                    s += self.weights.get(k, a) * x;
                }
                *zk = s;
            }
        }
        Ok(z)
    }

    pub fn eval_features(&self, points: &DenseMatrix) -> Result<FeatureMatrix> {
        let mut z = self.pre_activations(points)?;
        for i in 0..z.rows() {
            for v in z.row_mut(i) {
                *v = v.tanh();
            }
        }
        Ok(z)
    }

    /// `d^order h_k / dx_axis^order` at each point, for `order` in `{1, 2}`.
    pub fn eval_feature_partial(
        &self,
        points: &DenseMatrix,
        axis: usize,
        order: u8,
    ) -> Result<FeatureMatrix> {
        if axis >= self.dim() {
            return Err(Error::InvalidArgument(format!(
                "axis {axis} out of range for a {}-dimensional layer",
                self.dim()
            )));
        }
        if order != 1 && order != 2 {
            return Err(Error::InvalidArgument(format!(
                "derivative order must be 1 or 2, got {order}"
            )));
        }
        let w = self.axis_weights(axis);
        let mut z = self.pre_activations(points)?;
        for i in 0..z.rows() {
            for (k, v) in z.row_mut(i).iter_mut().enumerate() {
                let t = v.tanh();
                *v = if order == 1 {
                    w[k] * tanh_d1(t)
                } else {
                    w[k] * w[k] * tanh_d2(t)
                };
            }
        }
        Ok(z)
    }

    /// Mixed partial `d^2 h_k / dx_a dx_b = w_ka w_kb tanh''(z_k)`.
    pub fn eval_feature_mixed(
        &self,
        points: &DenseMatrix,
        axis_a: usize,
        axis_b: usize,
    ) -> Result<FeatureMatrix> {
        if axis_a >= self.dim() || axis_b >= self.dim() {
            return Err(Error::InvalidArgument("mixed partial axis out of range".into()));
        }
        let wa = self.axis_weights(axis_a);
        let wb = self.axis_weights(axis_b);
        let mut z = self.pre_activations(points)?;
        for i in 0..z.rows() {
            for (k, v) in z.row_mut(i).iter_mut().enumerate() {
                *v = wa[k] * wb[k] * tanh_d2(v.tanh());
            }
        }
        Ok(z)
    }
}

/// `tanh'` expressed through `t = tanh(z)`.
#[inline]
pub fn tanh_d1(t: f64) -> f64 {
    1.0 - t * t
}

/// `tanh''` expressed through `t = tanh(z)`.
#[inline]
pub fn tanh_d2(t: f64) -> f64 {
    -2.0 * t * (1.0 - t * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(w: f64, b: f64) -> FeatureLayer {
        FeatureLayer::from_parts(DenseMatrix::new(1, 1, vec![w]).unwrap(), vec![b]).unwrap()
    }

    fn pt(x: f64) -> DenseMatrix {
        DenseMatrix::new(1, 1, vec![x]).unwrap()
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0, matching the reference C implementation.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn init_is_deterministic() {
        let a = init_layer(17, 2, 42, 1.0).unwrap();
        let b = init_layer(17, 2, 42, 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.weights().as_slice().iter().all(|w| w.abs() <= 1.0));
    }

    #[test]
    fn seeds_differ() {
        let a = init_layer(5, 2, 1, 1.0).unwrap();
        let b = init_layer(5, 2, 2, 1.0).unwrap();
        let differs = a
            .weights()
            .as_slice()
            .iter()
            .zip(b.weights().as_slice())
            .any(|(x, y)| x != y)
            || a.bias().iter().zip(b.bias()).any(|(x, y)| x != y);
        assert!(differs);
    }

    #[test]
    fn zero_scale_gives_zero_features() {
        let l = init_layer(4, 1, 9, 0.0).unwrap();
        assert!(l.weights().is_zero());
        let f = l.eval_features(&pt(0.7)).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn init_preconditions() {
        assert!(init_layer(0, 1, 1, 1.0).is_err());
        assert!(init_layer(3, 4, 1, 1.0).is_err());
        assert!(init_layer(3, 1, 1, -1.0).is_err());
    }

    #[test]
    fn feature_values() {
        assert_eq!(single(1.0, 0.0).eval_features(&pt(0.0)).unwrap().get(0, 0), 0.0);
        let sat = single(1.0, 0.0).eval_features(&pt(1e6)).unwrap().get(0, 0);
        assert!((sat - 1.0).abs() < 1e-12);
        let v = single(2.0, 1.0).eval_features(&pt(0.5)).unwrap().get(0, 0);
        assert_eq!(v, 2f64.tanh());
    }

    #[test]
    fn partials_at_origin() {
        let l = single(1.0, 0.0);
        assert_eq!(l.eval_feature_partial(&pt(0.0), 0, 1).unwrap().get(0, 0), 1.0);
        assert_eq!(l.eval_feature_partial(&pt(0.0), 0, 2).unwrap().get(0, 0), 0.0);
        assert!(l.eval_feature_partial(&pt(0.0), 0, 3).is_err());
        assert!(l.eval_feature_partial(&pt(0.0), 1, 1).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let l = init_layer(3, 2, 1, 1.0).unwrap();
        assert!(matches!(
            l.eval_features(&pt(0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn box_rescaling_matches_local_evaluation() {
        let lo = [2.0, -1.0];
        let hi = [4.0, 0.0];
        let local = init_layer(6, 2, 5, 1.5).unwrap();
        let global = init_layer_on_box(6, &lo, &hi, 5, 1.5).unwrap();
        let x = DenseMatrix::new(2, 2, vec![2.5, -0.2, 3.9, -0.9]).unwrap();
        let xi = DenseMatrix::from_fn(2, 2, |i, a| {
            (x.get(i, a) - 0.5 * (lo[a] + hi[a])) / (0.5 * (hi[a] - lo[a]))
        })
        .unwrap();
        let f_global = global.eval_features(&x).unwrap();
        let f_local = local.eval_features(&xi).unwrap();
        for (a, b) in f_global.as_slice().iter().zip(f_local.as_slice()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
