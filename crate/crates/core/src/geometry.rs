//! Planar primitives used by every other module.
//!
//! All classification (collinear, on-edge, corner) goes through [`orient`]
//! with the single tolerance [`EPS_GEOM`], so a configuration is classified
//! the same way no matter which caller asks.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::GeomError;

/// Absolute tolerance for orientation and distance tests, scaled by the
/// largest coordinate magnitude in [`orient`].
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction. Zero stays zero.
    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, rhs: f64) -> Point {
        Point::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Sign of `(b - a) x (c - a)`: `+1` for a counterclockwise turn, `-1` for
/// clockwise, `0` when the magnitude is within `EPS_GEOM * scale`.
pub fn orient(a: Point, b: Point, c: Point) -> i32 {
    let cross = (b - a).cross(c - a);
    let scale = a.max_abs().max(b.max_abs()).max(c.max_abs());
    if cross.abs() <= EPS_GEOM * scale {
        0
    } else if cross > 0.0 {
        1
    } else {
        -1
    }
}

/// Clockwise angle in degrees, `[0, 360)`, swept from ray `b->a` to ray `b->d`.
pub fn angle_cw(a: Point, b: Point, d: Point) -> Result<f64, GeomError> {
    let u = a - b;
    let v = d - b;
    if u.norm() <= EPS_GEOM || v.norm() <= EPS_GEOM {
        return Err(GeomError::DegenerateRay);
    }
    let deg = (u.y.atan2(u.x) - v.y.atan2(v.x)).to_degrees();
    let wrapped = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    Ok(if wrapped >= 360.0 { 0.0 } else { wrapped })
}

/// Unsigned angle at `b` between rays `b->a` and `b->d`, in degrees `[0, 180]`.
pub fn angle_between(a: Point, b: Point, d: Point) -> f64 {
    let u = a - b;
    let v = d - b;
    u.cross(v).abs().atan2(u.dot(v)).to_degrees()
}

/// Convex hull of a point set, with every input index accounted for.
#[derive(Debug, Clone, PartialEq)]
pub struct HullView {
    /// Hull vertices, counterclockwise.
    pub vertices: Vec<usize>,
    /// Indices strictly inside a hull edge.
    pub on_edge: Vec<usize>,
    /// Indices strictly inside the hull.
    pub interior: Vec<usize>,
    /// Set when all points are collinear (or there are exactly two); holds
    /// the two extreme indices.
    pub degenerate_line: Option<(usize, usize)>,
}

impl HullView {
    pub fn is_vertex(&self, idx: usize) -> bool {
        self.vertices.contains(&idx)
    }

    pub fn vertex_position(&self, idx: usize) -> Option<usize> {
        self.vertices.iter().position(|&v| v == idx)
    }

    /// Counterclockwise predecessor and successor of a hull vertex.
    pub fn neighbors(&self, idx: usize) -> Option<(usize, usize)> {
        let k = self.vertices.len();
        if k < 3 {
            return None;
        }
        let pos = self.vertex_position(idx)?;
        Some((self.vertices[(pos + k - 1) % k], self.vertices[(pos + 1) % k]))
    }

    /// Hull edges as counterclockwise `(from, to)` vertex pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.vertices.len();
        if k < 3 {
            return Vec::new();
        }
        (0..k)
            .map(|i| (self.vertices[i], self.vertices[(i + 1) % k]))
            .collect()
    }
}

/// Convex hull with corner / on-edge / interior classification.
///
/// Vertices are strictly convex: any point whose turn is within tolerance
/// of 180 degrees is reported as on-edge instead.
pub fn convex_hull(points: &[Point]) -> Result<HullView, GeomError> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    let n = points.len();
    if n == 0 {
        return Ok(HullView {
            vertices: Vec::new(),
            on_edge: Vec::new(),
            interior: Vec::new(),
            degenerate_line: None,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp(&points[b].x)
            .then(points[a].y.total_cmp(&points[b].y))
    });
    for w in order.windows(2) {
        if points[w[0]].dist(points[w[1]]) <= EPS_GEOM {
            return Err(GeomError::DuplicatePoints(w[0], w[1]));
        }
    }
    // sorting by x only neighbors duplicates that share x closely; check the rest
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].dist(points[j]) <= EPS_GEOM {
                return Err(GeomError::DuplicatePoints(i, j));
            }
        }
    }

    if n == 1 {
        return Ok(HullView {
            vertices: vec![0],
            on_edge: Vec::new(),
            interior: Vec::new(),
            degenerate_line: None,
        });
    }

    let chain = |iter: &mut dyn Iterator<Item = usize>| {
        let mut out: Vec<usize> = Vec::new();
        for idx in iter {
            while out.len() >= 2
                && orient(
                    points[out[out.len() - 2]],
                    points[out[out.len() - 1]],
                    points[idx],
                ) <= 0
            {
                out.pop();
            }
            out.push(idx);
        }
        out
    };
    let mut lower = chain(&mut order.iter().copied());
    let mut upper = chain(&mut order.iter().rev().copied());
    lower.pop();
    upper.pop();
    let mut vertices = lower;
    vertices.extend(upper);

    let first = order[0];
    let last = order[n - 1];
    if vertices.len() < 3 {
        let on_edge = order[1..n - 1].to_vec();
        return Ok(HullView {
            vertices: vec![first, last],
            on_edge,
            interior: Vec::new(),
            degenerate_line: Some((first, last)),
        });
    }

    let mut on_edge = Vec::new();
    let mut interior = Vec::new();
    let k = vertices.len();
    for idx in 0..n {
        if vertices.contains(&idx) {
            continue;
        }
        let p = points[idx];
        let on = (0..k).any(|e| {
            let a = points[vertices[e]];
            let b = points[vertices[(e + 1) % k]];
            orient(a, b, p) == 0 && {
                let t = (p - a).dot(b - a) / (b - a).norm_sq();
                t > 0.0 && t < 1.0
            }
        });
        if on {
            on_edge.push(idx);
        } else {
            interior.push(idx);
        }
    }
    Ok(HullView {
        vertices,
        on_edge,
        interior,
        degenerate_line: None,
    })
}

/// Euclidean distance from `p` to the closed segment `ab`.
pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Orthogonal projection of `p` onto the line through `a` and `b`.
pub fn project_on_line(p: Point, a: Point, b: Point) -> Point {
    let ab = b - a;
    let t = (p - a).dot(ab) / ab.norm_sq();
    a + ab * t
}

/// Minimum distance between two points moving linearly over `t in [0, 1]`,
/// `p(t) = p0 + t (p1 - p0)` and `q(t) = q0 + t (q1 - q0)`.
pub fn min_dist_moving(p0: Point, p1: Point, q0: Point, q1: Point) -> f64 {
    let d0 = p0 - q0;
    let dv = (p1 - p0) - (q1 - q0);
    let a = dv.norm_sq();
    if a == 0.0 {
        return d0.norm();
    }
    let t = (-d0.dot(dv) / a).clamp(0.0, 1.0);
    (d0 + dv * t).norm()
}

/// Unit vector along the bisector of the exterior angle at `v`, pointing
/// away from the side containing `prev` and `next`.
pub fn exterior_bisector(prev: Point, v: Point, next: Point) -> Result<Point, GeomError> {
    if prev.dist(v) <= EPS_GEOM || next.dist(v) <= EPS_GEOM || prev.dist(next) <= EPS_GEOM {
        return Err(GeomError::NotACorner);
    }
    if orient(prev, v, next) == 0 {
        return Err(GeomError::NotACorner);
    }
    let sum = (prev - v).normalized() + (next - v).normalized();
    Ok(-sum.normalized())
}

/// Perimeter of the hull described by `hull` over `points`; a degenerate
/// line counts both directions.
pub fn hull_perimeter(points: &[Point], hull: &HullView) -> f64 {
    let k = hull.vertices.len();
    match k {
        0 | 1 => 0.0,
        2 => 2.0 * points[hull.vertices[0]].dist(points[hull.vertices[1]]),
        _ => (0..k)
            .map(|i| points[hull.vertices[i]].dist(points[hull.vertices[(i + 1) % k]]))
            .sum(),
    }
}
