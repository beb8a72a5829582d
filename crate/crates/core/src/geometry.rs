//! Planar primitives and per-cell geometry: area, centroid, diameter,
//! outward edge frames, polygon kernel and the fan point `x_B`.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Shoelace signed area, positive for counterclockwise polygons. Computed
/// relative to the first vertex to avoid cancellation far from the origin.
pub fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let Some(&origin) = vertices.first() else { return 0.0 };
    let mut twice = 0.0;
    for i in 1..n.saturating_sub(1) {
        twice += (vertices[i] - origin).cross(vertices[i + 1] - origin);
    }
    0.5 * twice
}

/// Area-weighted centroid of a simple polygon with nonzero signed area.
pub fn polygon_centroid(vertices: &[Point2]) -> Point2 {
    let n = vertices.len();
    let origin = vertices[0];
    let (mut cx, mut cy, mut twice) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let p = vertices[i] - origin;
        let q = vertices[(i + 1) % n] - origin;
        let w = p.cross(q);
        twice += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Point2::new(origin.x + cx / (3.0 * twice), origin.y + cy / (3.0 * twice))
}

pub fn polygon_diameter(vertices: &[Point2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, &p) in vertices.iter().enumerate() {
        for &q in &vertices[i + 1..] {
            d = d.max(p.distance(q));
        }
    }
    d
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// True when no two non-adjacent edges of the closed polyline touch.
pub fn is_simple(vertices: &[Point2]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Inward half-plane `{x : n·x >= offset}` of one polygon edge, with unit `n`.
#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    normal: Point2,
    offset: f64,
}

impl HalfPlane {
    fn signed_distance(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

fn edge_half_planes(vertices: &[Point2]) -> Vec<HalfPlane> {
    let n = vertices.len();
    (0..n)
        .filter_map(|i| {
            let a = vertices[i];
            let t = vertices[(i + 1) % n] - a;
            let len = t.norm();
            if len <= 0.0 {
                return None;
            }
            let normal = Point2::new(-t.y / len, t.x / len);
            Some(HalfPlane { normal, offset: normal.dot(a) })
        })
        .collect()
}

/// The kernel (set of points seeing the whole polygon) of a counterclockwise
/// polygon, as a convex polygon. Empty when the polygon is not star-shaped.
pub fn polygon_kernel(vertices: &[Point2]) -> Vec<Point2> {
    // Start from the bounding box: the kernel is inside the polygon anyway.
    let (mut lo, mut hi) = (vertices[0], vertices[0]);
    for v in vertices {
        lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let mut kernel = vec![lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
    for hp in edge_half_planes(vertices) {
        kernel = clip(&kernel, &hp);
        if kernel.len() < 3 {
            return Vec::new();
        }
    }
    if signed_area(&kernel) <= 0.0 {
        return Vec::new();
    }
    kernel
}

fn clip(poly: &[Point2], hp: &HalfPlane) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let dp = hp.signed_distance(p);
        let dq = hp.signed_distance(q);
        if dp >= 0.0 {
            out.push(p);
        }
        if (dp >= 0.0) != (dq >= 0.0) {
            let s = dp / (dp - dq);
            out.push(p + (q - p) * s);
        }
    }
    out
}

/// Centre and radius of the largest disc inside the kernel of the polygon
/// (the Chebyshev centre of the edge half-planes). `None` when the polygon is
/// not star-shaped.
pub fn kernel_chebyshev_center(vertices: &[Point2]) -> Option<(Point2, f64)> {
    let planes = edge_half_planes(vertices);
    let kernel = polygon_kernel(vertices);
    if kernel.is_empty() {
        return None;
    }
    let depth = |p: Point2| {
        planes
            .iter()
            .map(|hp| hp.signed_distance(p))
            .fold(f64::INFINITY, f64::min)
    };
    // Fallback candidate: kernel centroid.
    let kc = polygon_centroid(&kernel);
    let mut best = (kc, depth(kc));
    let m = planes.len();
    if m <= 48 {
        // The optimum of max r s.t. n_i·x - r >= c_i is attained where three
        // constraints are active.
        let scale = polygon_diameter(vertices);
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    if let Some((p, r)) = solve_three(&planes[i], &planes[j], &planes[k]) {
                        if r > best.1 && depth(p) >= r - 1e-12 * scale {
                            best = (p, r.min(depth(p)));
                        }
                    }
                }
            }
        }
    }
    (best.1 > 0.0).then_some(best)
}

fn solve_three(a: &HalfPlane, b: &HalfPlane, c: &HalfPlane) -> Option<(Point2, f64)> {
    // rows: [n.x, n.y, -1] [x y r]^T = offset
    let m = [
        [a.normal.x, a.normal.y, -1.0, a.offset],
        [b.normal.x, b.normal.y, -1.0, b.offset],
        [c.normal.x, c.normal.y, -1.0, c.offset],
    ];
    let det3 = |m: &[[f64; 4]; 3], col: usize| {
        let pick = |r: usize, c: usize| if c == col { m[r][3] } else { m[r][c] };
        pick(0, 0) * (pick(1, 1) * pick(2, 2) - pick(1, 2) * pick(2, 1))
            - pick(0, 1) * (pick(1, 0) * pick(2, 2) - pick(1, 2) * pick(2, 0))
            + pick(0, 2) * (pick(1, 0) * pick(2, 1) - pick(1, 1) * pick(2, 0))
    };
    let det = det3(&m, usize::MAX);
    if det.abs() < 1e-12 {
        return None;
    }
    let x = det3(&m, 0) / det;
    let y = det3(&m, 1) / det;
    let r = det3(&m, 2) / det;
    (x.is_finite() && y.is_finite() && r.is_finite()).then_some((Point2::new(x, y), r))
}

/// Smallest signed distance from `p` to the supporting lines of the edges,
/// positive when `p` lies strictly inside the kernel.
pub fn kernel_depth(vertices: &[Point2], p: Point2) -> f64 {
    edge_half_planes(vertices)
        .iter()
        .map(|hp| hp.signed_distance(p))
        .fold(f64::INFINITY, f64::min)
}

/// Edge of a cell in the cell's own counterclockwise traversal.
#[derive(Clone, Copy, Debug)]
pub struct LocalEdge {
    pub start: Point2,
    pub end: Point2,
    pub midpoint: Point2,
    pub length: f64,
    pub tangent: Point2,
    /// Outward unit normal: the tangent rotated by -90°.
    pub normal: Point2,
}

impl LocalEdge {
    pub fn new(start: Point2, end: Point2) -> Self {
        let d = end - start;
        let length = d.norm();
        let tangent = d * (1.0 / length);
        Self {
            start,
            end,
            midpoint: (start + end) * 0.5,
            length,
            tangent,
            normal: Point2::new(tangent.y, -tangent.x),
        }
    }

    /// Point at scaled parameter `s ∈ [-1/2, 1/2]` measured from the midpoint.
    pub fn point_at(&self, s: f64) -> Point2 {
        self.midpoint + self.tangent * (s * self.length)
    }

    /// Sign `n_∂e` of the edge's boundary points: −1 at the start, +1 at the end.
    pub const ENDPOINT_SIGNS: [f64; 2] = [-1.0, 1.0];
}

/// Geometric data of a single polygonal cell. `edges[i]` joins vertex `i` to
/// vertex `i + 1`.
#[derive(Clone, Debug)]
pub struct CellGeometry {
    pub vertices: Vec<Point2>,
    pub edges: Vec<LocalEdge>,
    pub area: f64,
    pub centroid: Point2,
    pub diameter: f64,
    pub star_point: Point2,
}

impl CellGeometry {
    /// Validates the polygon (counterclockwise, simple, star-shaped) and
    /// computes its geometry. The fan point is the centroid when that lies
    /// inside the kernel, else the kernel's Chebyshev centre.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let degenerate = |reason: &str| Error::DegenerateCell { cell: usize::MAX, reason: reason.into() };
        if vertices.len() < 3 {
            return Err(degenerate("fewer than three vertices"));
        }
        if !vertices.iter().all(|p| p.is_finite()) {
            return Err(degenerate("non-finite coordinates"));
        }
        let area = signed_area(&vertices);
        if !(area > 0.0) {
            return Err(degenerate("non-positive signed area (clockwise or collapsed)"));
        }
        if !is_simple(&vertices) {
            return Err(degenerate("self-intersecting boundary"));
        }
        let centroid = polygon_centroid(&vertices);
        let diameter = polygon_diameter(&vertices);
        let star_point = if kernel_depth(&vertices, centroid) > 1e-10 * diameter {
            centroid
        } else {
            match kernel_chebyshev_center(&vertices) {
                Some((p, r)) if r > 1e-10 * diameter => p,
                _ => return Err(degenerate("not star-shaped with respect to any interior point")),
            }
        };
        Self::with_star_point(vertices, area, centroid, diameter, star_point)
    }

    fn with_star_point(
        vertices: Vec<Point2>,
        area: f64,
        centroid: Point2,
        diameter: f64,
        star_point: Point2,
    ) -> Result<Self> {
        let n = vertices.len();
        let edges: Vec<LocalEdge> = (0..n)
            .map(|i| LocalEdge::new(vertices[i], vertices[(i + 1) % n]))
            .collect();
        for e in &edges {
            if orient(star_point, e.start, e.end) <= 0.0 {
                return Err(Error::DegenerateCell {
                    cell: usize::MAX,
                    reason: "fan triangle with non-positive area".into(),
                });
            }
        }
        Ok(Self { vertices, edges, area, centroid, diameter, star_point })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Fan sub-triangles `(x_B, v_i, v_{i+1})`.
    pub fn fan(&self) -> impl Iterator<Item = [Point2; 3]> + '_ {
        self.edges.iter().map(move |e| [self.star_point, e.start, e.end])
    }

    /// Smallest interior angle (radians) over the fan sub-triangles.
    pub fn min_fan_angle(&self) -> f64 {
        self.fan().map(|t| triangle_min_angle(&t)).fold(f64::INFINITY, f64::min)
    }
}

pub fn triangle_min_angle(t: &[Point2; 3]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..3 {
        let a = t[(i + 1) % 3] - t[i];
        let b = t[(i + 2) % 3] - t[i];
        let ang = a.cross(b).abs().atan2(a.dot(b));
        m = m.min(ang);
    }
    m
}
