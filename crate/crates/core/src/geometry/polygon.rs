use std::path::Path;

use crate::error::{Error, Result};

/// Distance within which a point counts as lying on an edge.
pub const ON_EDGE_TOL: f64 = 1e-12;

/// Simple closed polygon; the closing edge from the last vertex back to the
/// first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

impl Polygon {
    /// Validates vertex count, finiteness, non-zero area and that no two
    /// non-adjacent edges intersect.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegenerateDomain(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("polygon vertices"));
        }
        let p = Self { vertices };
        if let Some((i, j)) = p.first_self_intersection() {
            return Err(Error::DegenerateDomain(format!(
                "polygon edges {i} and {j} intersect"
            )));
        }
        if p.signed_area().abs() <= f64::EPSILON {
            return Err(Error::DegenerateDomain("polygon has zero area".into()));
        }
        Ok(p)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn n_edges(&self) -> usize {
        self.vertices.len()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (mod n).
    pub fn edge(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let (a, b) = self.edge(i);
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.n_edges()).map(|i| self.edge_length(i)).sum()
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut s = 0.0;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            s += a[0] * b[1] - b[0] * a[1];
        }
        0.5 * s
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for a in 0..2 {
                lo[a] = lo[a].min(v[a]);
                hi[a] = hi[a].max(v[a]);
            }
        }
        (lo, hi)
    }

    /// Euclidean distance from `p` to edge `i`.
    pub fn distance_to_edge(&self, i: usize, p: [f64; 2]) -> f64 {
        let (a, b) = self.edge(i);
        segment_distance(a, b, p)
    }

    pub fn distance_to_boundary(&self, p: [f64; 2]) -> f64 {
        (0..self.n_edges())
            .map(|i| self.distance_to_edge(i, p))
            .fold(f64::INFINITY, f64::min)
    }

    fn first_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.n_edges();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = self.edge(i);
                let (c, d) = self.edge(j);
                if adjacent {
                    // Adjacent edges share a vertex; they only clash if they overlap collinearly.
                    if collinear_overlap(a, b, c, d) {
                        return Some((i, j));
                    }
                } else if segments_intersect(a, b, c, d) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn collinear_overlap(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    if cross(a, b, c) != 0.0 || cross(a, b, d) != 0.0 {
        return false;
    }
    // Shared endpoint is expected; overlap means the segments fold back.
    let dir = [b[0] - a[0], b[1] - a[1]];
    let proj = |p: [f64; 2]| (p[0] - a[0]) * dir[0] + (p[1] - a[1]) * dir[1];
    let len2 = dir[0] * dir[0] + dir[1] * dir[1];
    let (s, t) = (proj(c), proj(d));
    let (lo, hi) = (s.min(t), s.max(t));
    hi.min(len2) - lo.max(0.0) > 0.0
}

pub(crate) fn segment_distance(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Even-odd ray-crossing test; points within [`ON_EDGE_TOL`] of an edge
/// count as inside.
pub fn point_in_polygon(poly: &Polygon, p: [f64; 2]) -> bool {
    if poly.distance_to_boundary(p) <= ON_EDGE_TOL {
        return true;
    }
    let v = poly.vertices();
    let n = v.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = (v[i][0], v[i][1]);
        let (xj, yj) = (v[j][0], v[j][1]);
        if (yi > p[1]) != (yj > p[1]) {
            let x_cross = xj + (p[1] - yj) * (xi - xj) / (yi - yj);
            if p[0] < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Reads a polygon from a CSV of `x,y` rows (no header, implicit closure).
///
/// With `rescale`, the bounding box is mapped affinely so the longer side
/// spans `[0, 1]` and the shorter side is centred inside `[0, 1]`.
pub fn load_polygon(path: impl AsRef<Path>, rescale: bool) -> Result<Polygon> {
    let path_ref = path.as_ref();
    let shown = path_ref.display().to_string();
    let text = std::fs::read_to_string(path_ref).map_err(|e| Error::Io(format!("{shown}: {e}")))?;
    parse_polygon_csv(&text, &shown, rescale)
}

pub fn parse_polygon_csv(text: &str, source: &str, rescale: bool) -> Result<Polygon> {
    let file_err = |line: usize, message: String| Error::PolygonFile {
        path: source.to_string(),
        line,
        message,
    };
    let mut vertices = Vec::new();
    let mut last_line = 0;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        last_line = line_no;
        let mut fields = line.split(',');
        let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(file_err(line_no, format!("expected `x,y`, found `{line}`")));
        };
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| file_err(line_no, format!("cannot parse `{}` as a number", s.trim())))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(file_err(line_no, "non-finite coordinate".into()))
            }
        };
        vertices.push(([parse(x)?, parse(y)?], line_no));
    }
    if vertices.len() < 3 {
        return Err(file_err(
            last_line.max(1),
            format!("need at least 3 vertices, found {}", vertices.len()),
        ));
    }
    let lines: Vec<usize> = vertices.iter().map(|(_, l)| *l).collect();
    let mut pts: Vec<[f64; 2]> = vertices.into_iter().map(|(p, _)| p).collect();
    if rescale {
        pts = rescale_unit(&pts);
    }
    Polygon::new(pts).map_err(|e| match e {
        Error::DegenerateDomain(msg) => {
            // Report the first vertex of the offending edge where possible.
            let line = msg
                .split_whitespace()
                .nth(2)
                .and_then(|s| s.parse::<usize>().ok())
                .and_then(|i| lines.get(i).copied())
                .unwrap_or(lines[0]);
            file_err(line, msg)
        }
        other => other,
    })
}

fn rescale_unit(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    if span <= 0.0 {
        return pts.to_vec();
    }
    let offset = [
        0.5 * (1.0 - (hi[0] - lo[0]) / span),
        0.5 * (1.0 - (hi[1] - lo[1]) / span),
    ];
    pts.iter()
        .map(|p| {
            [
                (p[0] - lo[0]) / span + offset[0],
                (p[1] - lo[1]) / span + offset[1],
            ]
        })
        .collect()
}

/// Five-pointed star: outer radius `outer`, inner radius `inner`, centred at
/// the origin with one tip on the +y axis. Vertices run counter-clockwise.
pub fn star_polygon(outer: f64, inner: f64) -> Result<Polygon> {
    let mut v = Vec::with_capacity(10);
    for k in 0..10 {
        let r = if k % 2 == 0 { outer } else { inner };
        let theta = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI / 5.0;
        v.push([r * theta.cos(), r * theta.sin()]);
    }
    // Snap the tip so it sits exactly on the axis.
    v[0] = [0.0, outer];
    Polygon::new(v)
}

/// Polygon used in place of the state outline: a ~100-vertex jagged shape
/// bundled with the crate, already scaled to the unit box.
pub fn bundled_complex_polygon() -> Polygon {
    parse_polygon_csv(BUNDLED_POLYGON_CSV, "bundled complex_polygon.csv", false)
        .expect("bundled polygon is valid")
}

pub const BUNDLED_POLYGON_CSV: &str = include_str!("../../data/complex_polygon.csv");

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polygon {
        Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn square_membership() {
        let sq = unit_square();
        assert!(point_in_polygon(&sq, [0.5, 0.5]));
        assert!(!point_in_polygon(&sq, [1.5, 0.5]));
        assert!(point_in_polygon(&sq, [1.0, 0.3]));
        assert!(point_in_polygon(&sq, [0.0, 0.0]));
    }

    #[test]
    fn rejects_invalid_polygons() {
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_err());
        // bow tie
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn star_shape() {
        let s = star_polygon(1.0, 0.5).unwrap();
        assert_eq!(s.n_edges(), 10);
        assert_eq!(s.vertices()[0], [0.0, 1.0]);
        assert!(point_in_polygon(&s, [0.0, 0.0]));
        assert!(point_in_polygon(&s, [0.0, 0.9]));
        assert!(!point_in_polygon(&s, [0.6, 0.6]));
        assert!(s.signed_area() > 0.0);
    }

    #[test]
    fn parses_triangle() {
        let p = parse_polygon_csv("0,0\n1,0\n0,1\n", "t", false).unwrap();
        assert_eq!(p.vertices(), &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn rescale_maps_long_axis_to_unit() {
        let p = parse_polygon_csv("10,10\n20,10\n20,15\n10,15\n", "r", true).unwrap();
        let (lo, hi) = p.bounding_box();
        assert_eq!((lo[0], hi[0]), (0.0, 1.0));
        assert!((lo[1] - 0.25).abs() < 1e-15 && (hi[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_polygon_csv("0,0\n1,zero\n0,1\n", "bad", false) {
            Err(Error::PolygonFile { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polygon_csv("0,0\n1,1\n", "short", false) {
            Err(Error::PolygonFile { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polygon_csv("0,0\n1,1\n1,0\n0,1\n", "bowtie", false) {
            Err(Error::PolygonFile { message, .. }) => assert!(message.contains("intersect")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bundled_polygon_is_valid() {
        let p = bundled_complex_polygon();
        assert!(p.n_edges() >= 90);
        let (lo, hi) = p.bounding_box();
        assert!(lo[0] >= 0.0 && lo[1] >= 0.0 && hi[0] <= 1.0 && hi[1] <= 1.0);
    }
}
