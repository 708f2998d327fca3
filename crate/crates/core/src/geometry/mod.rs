//! Computational domains and deterministic point sampling.

mod polygon;

pub use polygon::{
    bundled_complex_polygon, load_polygon, parse_polygon_csv, point_in_polygon, star_polygon,
    Polygon, BUNDLED_POLYGON_CSV, ON_EDGE_TOL,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Interval { lo: f64, hi: f64 },
    Rectangle { x: [f64; 2], y: [f64; 2] },
    Polygon(Polygon),
    /// Spatial domain × `[0, t_end]`; time is the last coordinate.
    TimeExtruded { spatial: Box<Domain>, t_end: f64 },
}

impl Domain {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::NonFinite("interval bounds"));
        }
        if lo >= hi {
            return Err(Error::DegenerateDomain(format!("interval [{lo}, {hi}] is empty")));
        }
        Ok(Domain::Interval { lo, hi })
    }

    pub fn rectangle(x: [f64; 2], y: [f64; 2]) -> Result<Self> {
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("rectangle bounds"));
        }
        if x[0] >= x[1] || y[0] >= y[1] {
            return Err(Error::DegenerateDomain(format!(
                "rectangle {x:?} x {y:?} has zero area"
            )));
        }
        Ok(Domain::Rectangle { x, y })
    }

    pub fn polygon(p: Polygon) -> Self {
        Domain::Polygon(p)
    }

    pub fn time_extruded(spatial: Domain, t_end: f64) -> Result<Self> {
        if matches!(spatial, Domain::TimeExtruded { .. }) {
            return Err(Error::InvalidArgument(
                "cannot extrude a time-extruded domain again".into(),
            ));
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::DegenerateDomain(format!("time horizon {t_end} must be > 0")));
        }
        Ok(Domain::TimeExtruded {
            spatial: Box::new(spatial),
            t_end,
        })
    }

    pub fn spatial(&self) -> &Domain {
        match self {
            Domain::TimeExtruded { spatial, .. } => spatial,
            d => d,
        }
    }

    pub fn spatial_dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Rectangle { .. } | Domain::Polygon(_) => 2,
            Domain::TimeExtruded { spatial, .. } => spatial.spatial_dim(),
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, Domain::TimeExtruded { .. })
    }

    /// Total coordinate count (space plus time when extruded).
    pub fn dim(&self) -> usize {
        self.spatial_dim() + usize::from(self.is_time_dependent())
    }

    pub fn t_end(&self) -> Option<f64> {
        match self {
            Domain::TimeExtruded { t_end, .. } => Some(*t_end),
            _ => None,
        }
    }

    /// Axis-aligned domains (everything except polygons).
    pub fn is_box(&self) -> bool {
        !matches!(self.spatial(), Domain::Polygon(_))
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Domain::Interval { lo, hi } => (vec![*lo], vec![*hi]),
            Domain::Rectangle { x, y } => (vec![x[0], y[0]], vec![x[1], y[1]]),
            Domain::Polygon(p) => {
                let (lo, hi) = p.bounding_box();
                (lo.to_vec(), hi.to_vec())
            }
            Domain::TimeExtruded { spatial, t_end } => {
                let (mut lo, mut hi) = spatial.bounding_box();
                lo.push(0.0);
                hi.push(*t_end);
                (lo, hi)
            }
        }
    }

    /// Closed membership; polygon edges count as inside within [`ON_EDGE_TOL`].
    pub fn contains(&self, p: &[f64]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            Domain::Polygon(poly) => point_in_polygon(poly, [p[0], p[1]]),
            Domain::TimeExtruded { spatial, t_end } => {
                let t = p[p.len() - 1];
                t >= -ON_EDGE_TOL && t <= t_end + ON_EDGE_TOL && spatial.contains(&p[..p.len() - 1])
            }
            _ => {
                let (lo, hi) = self.bounding_box();
                p.iter()
                    .zip(lo.iter().zip(&hi))
                    .all(|(&v, (&l, &h))| v >= l - ON_EDGE_TOL && v <= h + ON_EDGE_TOL)
            }
        }
    }

    /// Open membership: inside and farther than [`ON_EDGE_TOL`] from the boundary.
    pub fn contains_strictly(&self, p: &[f64]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            Domain::Polygon(poly) => {
                let q = [p[0], p[1]];
                point_in_polygon(poly, q) && poly.distance_to_boundary(q) > ON_EDGE_TOL
            }
            Domain::TimeExtruded { spatial, t_end } => {
                let t = p[p.len() - 1];
                t > ON_EDGE_TOL && t < t_end - ON_EDGE_TOL && spatial.contains_strictly(&p[..p.len() - 1])
            }
            _ => {
                let (lo, hi) = self.bounding_box();
                p.iter()
                    .zip(lo.iter().zip(&hi))
                    .all(|(&v, (&l, &h))| v > l + ON_EDGE_TOL && v < h - ON_EDGE_TOL)
            }
        }
    }

    /// Tag of the box face with normal `axis` at its low or high end.
    ///
    /// Intervals tag left/right as 0/1. Rectangles follow their edge order
    /// (bottom 0, right 1, top 2, left 3); the `t` axis of an extruded domain
    /// has no boundary tag.
    pub fn box_face_tag(&self, axis: usize, high: bool) -> Option<usize> {
        match (self.spatial(), axis, high) {
            (Domain::Interval { .. }, 0, false) => Some(0),
            (Domain::Interval { .. }, 0, true) => Some(1),
            (Domain::Rectangle { .. }, 0, false) => Some(3),
            (Domain::Rectangle { .. }, 0, true) => Some(1),
            (Domain::Rectangle { .. }, 1, false) => Some(0),
            (Domain::Rectangle { .. }, 1, true) => Some(2),
            _ => None,
        }
    }

    /// Distance from the spatial part of `p` to the boundary piece named by `tag`.
    pub fn distance_to_tagged_boundary(&self, tag: usize, p: &[f64]) -> f64 {
        match self.spatial() {
            Domain::Interval { lo, hi } => match tag {
                0 => (p[0] - lo).abs(),
                1 => (p[0] - hi).abs(),
                _ => f64::INFINITY,
            },
            Domain::Rectangle { x, y } => {
                let corners = rectangle_vertices(*x, *y);
                if tag >= 4 {
                    return f64::INFINITY;
                }
                polygon::segment_distance(corners[tag], corners[(tag + 1) % 4], [p[0], p[1]])
            }
            Domain::Polygon(poly) => {
                if tag >= poly.n_edges() {
                    return f64::INFINITY;
                }
                poly.distance_to_edge(tag, [p[0], p[1]])
            }
            Domain::TimeExtruded { .. } => unreachable!("spatial() never returns an extruded domain"),
        }
    }

    fn measure(&self) -> f64 {
        match self {
            Domain::Interval { lo, hi } => hi - lo,
            Domain::Rectangle { x, y } => (x[1] - x[0]) * (y[1] - y[0]),
            Domain::Polygon(p) => p.area(),
            Domain::TimeExtruded { spatial, t_end } => spatial.measure() * t_end,
        }
    }
}

fn rectangle_vertices(x: [f64; 2], y: [f64; 2]) -> [[f64; 2]; 4] {
    [[x[0], y[0]], [x[1], y[0]], [x[1], y[1]], [x[0], y[1]]]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleStrategy {
    /// Open tensor lattice with equal per-axis counts, clipped to the domain.
    Grid,
    /// 2,3,5-base Halton sequence over the bounding box, filtered by inclusion.
    Halton,
    /// Open tensor lattice with explicit per-axis counts, clipped to the domain.
    Lattice(Vec<usize>),
}

impl SampleStrategy {
    pub fn default_for(domain: &Domain) -> Self {
        if domain.is_box() {
            SampleStrategy::Grid
        } else {
            SampleStrategy::Halton
        }
    }
}

impl fmt::Display for SampleStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleStrategy::Grid => f.write_str("grid"),
            SampleStrategy::Halton => f.write_str("halton"),
            SampleStrategy::Lattice(c) => {
                let counts: Vec<String> = c.iter().map(usize::to_string).collect();
                write!(f, "lattice:{}", counts.join("x"))
            }
        }
    }
}

/// `grid`, `halton` or `lattice:20x21`.
impl FromStr for SampleStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "grid" => return Ok(SampleStrategy::Grid),
            "halton" => return Ok(SampleStrategy::Halton),
            _ => {}
        }
        let bad = || Error::InvalidArgument(format!("unknown sampling strategy `{s}` (expected grid, halton or lattice:AxB)"));
        let counts = s.strip_prefix("lattice:").ok_or_else(bad)?;
        let counts: Vec<usize> = counts
            .split('x')
            .map(|c| c.parse::<usize>().ok().filter(|&n| n > 0))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        Ok(SampleStrategy::Lattice(counts))
    }
}

/// Boundary samples with per-point tags and optional periodic partners.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoints {
    pub points: DenseMatrix,
    pub tags: Vec<usize>,
    /// Index of the paired point on the opposite face, if any.
    pub partners: Vec<Option<usize>>,
}

impl BoundaryPoints {
    pub fn empty(dim: usize) -> Self {
        Self {
            points: DenseMatrix::zeros(0, dim),
            tags: Vec::new(),
            partners: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// Pairs `(i, j)` with `i < j` that are each other's partners.
    pub fn periodic_pairs(&self) -> Vec<(usize, usize)> {
        self.partners
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.filter(|&j| j > i).map(|j| (i, j)))
            .collect()
    }

    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            points: self.points.select_rows(idx),
            tags: idx.iter().map(|&i| self.tags[i]).collect(),
            partners: vec![None; idx.len()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub interior: DenseMatrix,
    pub boundary: BoundaryPoints,
    pub initial: DenseMatrix,
}

impl PointSet {
    /// Samples interior, boundary and (for extruded domains) initial points.
    pub fn sample(
        domain: &Domain,
        n_interior: usize,
        n_boundary: usize,
        n_initial: usize,
        strategy: &SampleStrategy,
    ) -> Result<Self> {
        let interior = sample_interior(domain, n_interior, strategy)?;
        let boundary = if n_boundary == 0 {
            BoundaryPoints::empty(domain.dim())
        } else {
            sample_boundary(domain, n_boundary)?
        };
        let initial = if domain.is_time_dependent() && n_initial > 0 {
            sample_initial(domain, n_initial, &initial_strategy(strategy))?
        } else {
            DenseMatrix::zeros(0, domain.dim())
        };
        Ok(Self {
            interior,
            boundary,
            initial,
        })
    }

    pub fn dim(&self) -> usize {
        self.interior.cols()
    }
}

fn initial_strategy(s: &SampleStrategy) -> SampleStrategy {
    match s {
        // Spatial part of an explicit space-time lattice.
        SampleStrategy::Lattice(c) if c.len() > 1 => SampleStrategy::Lattice(c[..c.len() - 1].to_vec()),
        other => other.clone(),
    }
}

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

const HALTON_BASES: [u64; 3] = [2, 3, 5];

/// Tensor lattice over `[lo, hi]`. Open lattices place `k / (n + 1)`
/// fractions (no endpoints); closed ones span both ends (`n ≥ 2`, or the
/// midpoint for `n = 1`). The first axis varies fastest.
pub fn lattice(lo: &[f64], hi: &[f64], counts: &[usize], open: bool) -> DenseMatrix {
    let d = counts.len();
    let axes: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            let n = counts[a];
            (0..n)
                .map(|k| {
                    let f = if open {
                        (k + 1) as f64 / (n + 1) as f64
                    } else if n == 1 {
                        0.5
                    } else {
                        k as f64 / (n - 1) as f64
                    };
                    if !open && k + 1 == n && n > 1 {
                        hi[a]
                    } else {
                        lo[a] + f * (hi[a] - lo[a])
                    }
                })
                .collect()
        })
        .collect();
    let total: usize = counts.iter().product();
    let mut entries = Vec::with_capacity(total * d);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        for a in 0..d {
            entries.push(axes[a][idx[a]]);
        }
        for a in 0..d {
            idx[a] += 1;
            if idx[a] < counts[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    DenseMatrix::from_vec_unchecked(total, d, entries)
}

fn filter_rows(m: &DenseMatrix, keep: impl Fn(&[f64]) -> bool) -> DenseMatrix {
    let idx: Vec<usize> = (0..m.rows()).filter(|&i| keep(m.row(i))).collect();
    m.select_rows(&idx)
}

fn grid_side(n: usize, d: usize) -> usize {
    let mut m = (n as f64).powf(1.0 / d as f64).round() as usize;
    while m > 0 && m.pow(d as u32) > n {
        m -= 1;
    }
    while (m + 1).pow(d as u32) <= n {
        m += 1;
    }
    m.max(1)
}

/// Interior collocation points (strictly inside the domain).
///
/// `Grid` and `Lattice` may return fewer than `n` points after clipping;
/// `Halton` returns exactly `n`.
pub fn sample_interior(domain: &Domain, n: usize, strategy: &SampleStrategy) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("interior sample count must be >= 1".into()));
    }
    if domain.measure() <= 0.0 {
        return Err(Error::DegenerateDomain("domain has zero measure".into()));
    }
    let d = domain.dim();
    let (lo, hi) = domain.bounding_box();
    match strategy {
        SampleStrategy::Grid => {
            let m = grid_side(n, d);
            let pts = lattice(&lo, &hi, &vec![m; d], true);
            Ok(filter_rows(&pts, |p| domain.contains_strictly(p)))
        }
        SampleStrategy::Lattice(counts) => {
            if counts.len() != d {
                return Err(Error::DimensionMismatch {
                    context: "lattice counts vs domain dimension",
                    expected: d,
                    actual: counts.len(),
                });
            }
            if counts.contains(&0) {
                return Err(Error::InvalidArgument("lattice counts must be >= 1".into()));
            }
            let pts = lattice(&lo, &hi, counts, true);
            Ok(filter_rows(&pts, |p| domain.contains_strictly(p)))
        }
        SampleStrategy::Halton => {
            let mut entries = Vec::with_capacity(n * d);
            let mut index = 1u64;
            let mut accepted = 0;
            let mut p = vec![0.0; d];
            // Rejection can only stall on near-empty domains; the measure check
            // above plus this cap keep the loop finite.
            let cap = 1_000_000 + 1000 * n as u64;
            while accepted < n {
                if index > cap {
                    return Err(Error::DegenerateDomain(
                        "Halton rejection sampling did not fill the domain".into(),
                    ));
                }
                for a in 0..d {
                    p[a] = lo[a] + radical_inverse(index, HALTON_BASES[a]) * (hi[a] - lo[a]);
                }
                index += 1;
                if domain.contains_strictly(&p) {
                    entries.extend_from_slice(&p);
                    accepted += 1;
                }
            }
            Ok(DenseMatrix::from_vec_unchecked(n, d, entries))
        }
    }
}

/// Points on the spatial domain at `t = 0`, excluding the spatial boundary.
pub fn sample_initial(domain: &Domain, n: usize, strategy: &SampleStrategy) -> Result<DenseMatrix> {
    let Domain::TimeExtruded { spatial, .. } = domain else {
        return Err(Error::InvalidArgument(
            "initial points need a time-extruded domain".into(),
        ));
    };
    let s = sample_interior(spatial, n, strategy)?;
    let d = s.cols();
    let mut entries = Vec::with_capacity(s.rows() * (d + 1));
    for i in 0..s.rows() {
        entries.extend_from_slice(s.row(i));
        entries.push(0.0);
    }
    Ok(DenseMatrix::from_vec_unchecked(s.rows(), d + 1, entries))
}

fn perimeter_points(vertices: &[[f64; 2]], n: usize) -> (Vec<[f64; 2]>, Vec<usize>) {
    let m = vertices.len();
    let lengths: Vec<f64> = (0..m)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % m]);
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .collect();
    let perimeter: f64 = lengths.iter().sum();
    let mut pts = Vec::with_capacity(n);
    let mut tags = Vec::with_capacity(n);
    let mut edge = 0;
    let mut start = 0.0;
    for k in 0..n {
        let s = k as f64 * perimeter / n as f64;
        while edge + 1 < m && s >= start + lengths[edge] {
            start += lengths[edge];
            edge += 1;
        }
        let (a, b) = (vertices[edge], vertices[(edge + 1) % m]);
        let f = ((s - start) / lengths[edge]).clamp(0.0, 1.0);
        pts.push(if f == 0.0 {
            a
        } else {
            [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]
        });
        tags.push(edge);
    }
    (pts, tags)
}

/// Tagged points on the boundary.
///
/// * Interval: the two endpoints, tagged 0 (left) and 1 (right).
/// * Rectangle / polygon: `n` arc-length-uniform points starting at vertex 0,
///   tagged with the edge index.
/// * Extruded interval: `n` points per side (so `2n` in total), uniform in
///   `t` over `[0, T]`, each paired with the opposite-side point at equal `t`.
/// * Extruded 2D: `n_t = ⌊√n⌋` time levels over `[0, T]`, each carrying
///   `n / n_t` perimeter points.
pub fn sample_boundary(domain: &Domain, n: usize) -> Result<BoundaryPoints> {
    match domain {
        Domain::Interval { lo, hi } => {
            if n < 2 {
                return Err(Error::InvalidArgument(format!(
                    "1D boundary needs n >= 2 (its two endpoints), got {n}"
                )));
            }
            Ok(BoundaryPoints {
                points: DenseMatrix::from_vec_unchecked(2, 1, vec![*lo, *hi]),
                tags: vec![0, 1],
                partners: vec![Some(1), Some(0)],
            })
        }
        Domain::Rectangle { x, y } => planar_boundary(&rectangle_vertices(*x, *y), n),
        Domain::Polygon(p) => planar_boundary(p.vertices(), n),
        Domain::TimeExtruded { spatial, t_end } => match spatial.as_ref() {
            Domain::Interval { lo, hi } => {
                if n < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "extruded 1D boundary needs n >= 2 points per side, got {n}"
                    )));
                }
                let m = n;
                let ts: Vec<f64> = (0..m).map(|k| time_level(k, m, *t_end)).collect();
                let mut entries = Vec::with_capacity(4 * m);
                for &t in &ts {
                    entries.extend_from_slice(&[*lo, t]);
                }
                for &t in &ts {
                    entries.extend_from_slice(&[*hi, t]);
                }
                let mut tags = vec![0; m];
                tags.extend(std::iter::repeat(1).take(m));
                let partners = (0..2 * m).map(|i| Some(if i < m { i + m } else { i - m })).collect();
                Ok(BoundaryPoints {
                    points: DenseMatrix::from_vec_unchecked(2 * m, 2, entries),
                    tags,
                    partners,
                })
            }
            planar => {
                let n_t = ((n as f64).sqrt().floor() as usize).max(2);
                let n_s = n / n_t;
                let base = sample_boundary(planar, n_s)?;
                let mut entries = Vec::with_capacity(n_t * n_s * 3);
                let mut tags = Vec::with_capacity(n_t * n_s);
                for k in 0..n_t {
                    let t = time_level(k, n_t, *t_end);
                    for i in 0..base.len() {
                        entries.extend_from_slice(base.points.row(i));
                        entries.push(t);
                        tags.push(base.tags[i]);
                    }
                }
                let rows = tags.len();
                Ok(BoundaryPoints {
                    points: DenseMatrix::from_vec_unchecked(rows, 3, entries),
                    tags,
                    partners: vec![None; rows],
                })
            }
        },
    }
}

fn time_level(k: usize, m: usize, t_end: f64) -> f64 {
    if k + 1 == m {
        t_end
    } else {
        t_end * k as f64 / (m - 1) as f64
    }
}

fn planar_boundary(vertices: &[[f64; 2]], n: usize) -> Result<BoundaryPoints> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "2D boundary needs n >= 3, got {n}"
        )));
    }
    let (pts, tags) = perimeter_points(vertices, n);
    Ok(BoundaryPoints {
        points: DenseMatrix::from_vec_unchecked(n, 2, pts.into_iter().flatten().collect()),
        tags,
        partners: vec![None; n],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Domain {
        Domain::rectangle([0.0, 1.0], [0.0, 1.0]).unwrap()
    }

    #[test]
    fn interval_grid_is_open_lattice() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        let p = sample_interior(&d, 3, &SampleStrategy::Grid).unwrap();
        assert_eq!(p.as_slice(), &[0.25, 0.5, 0.75]);
    }

    #[test]
    fn halton_square_is_deterministic() {
        let d = unit_square();
        let a = sample_interior(&d, 10, &SampleStrategy::Halton).unwrap();
        let b = sample_interior(&d, 10, &SampleStrategy::Halton).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows(), 10);
        assert_eq!(a.row(0), &[0.5, 1.0 / 3.0]);
        for i in 0..10 {
            assert!(d.contains_strictly(a.row(i)));
        }
    }

    #[test]
    fn radical_inverse_values() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_domains_rejected() {
        assert!(Domain::interval(1.0, 1.0).is_err());
        assert!(Domain::rectangle([0.0, 1.0], [2.0, 2.0]).is_err());
        assert!(Domain::time_extruded(unit_square(), 0.0).is_err());
        assert!(sample_interior(&unit_square(), 0, &SampleStrategy::Grid).is_err());
    }

    #[test]
    fn interval_boundary_endpoints() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        let b = sample_boundary(&d, 2).unwrap();
        assert_eq!(b.points.as_slice(), &[0.0, 1.0]);
        assert_eq!(b.tags, vec![0, 1]);
        assert!(sample_boundary(&d, 1).is_err());
    }

    #[test]
    fn square_boundary_two_per_edge() {
        let b = sample_boundary(&unit_square(), 8).unwrap();
        assert_eq!(
            b.points.as_slice(),
            &[0.0, 0.0, 0.5, 0.0, 1.0, 0.0, 1.0, 0.5, 1.0, 1.0, 0.5, 1.0, 0.0, 1.0, 0.0, 0.5]
        );
        assert_eq!(b.tags, vec![0, 0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn extruded_interval_pairs() {
        let d = Domain::time_extruded(Domain::interval(-1.0, 1.0).unwrap(), 0.5).unwrap();
        let b = sample_boundary(&d, 21).unwrap();
        assert_eq!(b.len(), 42);
        let pairs = b.periodic_pairs();
        assert_eq!(pairs.len(), 21);
        for (i, j) in pairs {
            assert_eq!(b.points.get(i, 0), -1.0);
            assert_eq!(b.points.get(j, 0), 1.0);
            assert_eq!(b.points.get(i, 1), b.points.get(j, 1));
        }
        assert_eq!(b.points.get(20, 1), 0.5);
        assert!(sample_boundary(&d, 1).is_err());
    }

    #[test]
    fn space_time_lattice_and_initial() {
        let d = Domain::time_extruded(Domain::interval(-1.0, 1.0).unwrap(), 0.5).unwrap();
        let ps = PointSet::sample(&d, 420, 21, 20, &SampleStrategy::Lattice(vec![20, 21])).unwrap();
        assert_eq!(ps.interior.rows(), 420);
        assert_eq!(ps.initial.rows(), 20);
        for i in 0..20 {
            assert_eq!(ps.initial.get(i, 1), 0.0);
        }
    }

    #[test]
    fn star_halton_exact_count() {
        let d = Domain::polygon(star_polygon(1.0, 0.5).unwrap());
        let p = sample_interior(&d, 921, &SampleStrategy::Halton).unwrap();
        assert_eq!(p.rows(), 921);
    }

    #[test]
    fn grid_side_rounding() {
        assert_eq!(grid_side(100, 2), 10);
        assert_eq!(grid_side(99, 2), 9);
        assert_eq!(grid_side(1000, 3), 10);
        assert_eq!(grid_side(1, 3), 1);
    }

    #[test]
    fn closed_lattice_hits_ends() {
        let m = lattice(&[0.0, -1.0], &[0.3, 1.0], &[4, 3], false);
        assert_eq!(m.rows(), 12);
        assert_eq!(m.row(3), &[0.3, -1.0]);
        assert_eq!(m.row(11), &[0.3, 1.0]);
    }
}
