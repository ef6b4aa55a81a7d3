//! Obstructed visibility between unit-diameter disks.
//!
//! Robot `i` sees robot `j` iff some segment from a point on circle `i` to a
//! point on circle `j` keeps a clearance strictly greater than the radius
//! (plus [`EPS_GEOM`]) from every other robot center. Blocking is by closed
//! disks, so a segment that exactly grazes an occluder is blocked.
//!
//! [`visible`] enumerates candidate endpoint pairs: `K` uniformly spaced
//! angles on each circle plus tangent-extremal points. It is sound (every
//! reported witness is checked directly) and only under-reports.

use std::f64::consts::{PI, TAU};

use crate::geometry::{dist_point_segment, Point, EPS_GEOM};

/// Robot radius; robots are disks of diameter 1.
pub const ROBOT_RADIUS: f64 = 0.5;
/// Angular samples per circle used by the engine.
pub const DEFAULT_SAMPLES: usize = 64;
/// Angular samples per circle used by [`visibility_oracle`].
pub const ORACLE_SAMPLES: usize = 4096;

const BLOCK_RADIUS: f64 = ROBOT_RADIUS + EPS_GEOM;
const TANGENT_NUDGE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct DiskSet {
    centers: Vec<Point>,
}

impl DiskSet {
    pub fn new(centers: Vec<Point>) -> Self {
        DiskSet { centers }
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Smallest pairwise center distance, `inf` for fewer than two disks.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (a, &p) in self.centers.iter().enumerate() {
            for &q in &self.centers[a + 1..] {
                best = best.min(p.dist(q));
            }
        }
        best
    }

    /// Occluders that can touch some segment between circles `i` and `j`:
    /// every such segment stays within the radius of the center segment.
    fn occluders(&self, i: usize, j: usize) -> Vec<Point> {
        let (a, b) = ordered(self.centers[i], self.centers[j]);
        self.centers
            .iter()
            .enumerate()
            .filter(|&(k, &c)| {
                k != i && k != j && dist_point_segment(c, a, b) <= 2.0 * ROBOT_RADIUS + 1e-6
            })
            .map(|(_, &c)| c)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clearance {
    Visible,
    Unknown,
}

/// Center-to-center segment test: `Visible` when every other center is
/// farther than the radius from the segment.
pub fn fast_clear(i: usize, j: usize, disks: &DiskSet) -> Clearance {
    let c = disks.centers();
    let (a, b) = ordered(c[i], c[j]);
    let clear = c
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .all(|(_, &ck)| dist_point_segment(ck, a, b) > BLOCK_RADIUS);
    if clear {
        Clearance::Visible
    } else {
        Clearance::Unknown
    }
}

/// Candidate-enumeration visibility with `samples` angles per circle.
pub fn visible(i: usize, j: usize, disks: &DiskSet, samples: usize) -> bool {
    assert_ne!(i, j, "visibility of a robot with itself");
    if fast_clear(i, j, disks) == Clearance::Visible {
        return true;
    }
    let c = disks.centers();
    let occ = disks.occluders(i, j);
    let from = candidate_points(c[i], c[j], &occ, samples);
    let to = candidate_points(c[j], c[i], &occ, samples);
    from.iter()
        .any(|&p| to.iter().any(|&q| segment_clear(p, q, &occ)))
}

/// Indices of robots visible from `i`, ascending.
pub fn visible_set(i: usize, disks: &DiskSet, samples: usize) -> Vec<usize> {
    (0..disks.len())
        .filter(|&j| j != i && visible(i, j, disks, samples))
        .collect()
}

/// Symmetric visibility matrix; each unordered pair is evaluated once.
pub fn visibility_matrix(disks: &DiskSet, samples: usize) -> Vec<Vec<bool>> {
    let n = disks.len();
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = visible(i, j, disks, samples);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Dense reference check used by tests and trace verification.
///
/// Every candidate point of [`visible`] at `samples` resolution (on either
/// circle) is tried as one endpoint; the other endpoint is searched over the
/// whole opposite circle by subtracting the angular shadows of the occluders
/// lying in front of it. Any witness found is re-checked segment-wise, so a
/// `true` answer is always backed by an explicit clear segment. No
/// center-line shortcut is taken.
pub fn visibility_oracle(i: usize, j: usize, disks: &DiskSet, samples: usize) -> bool {
    assert_ne!(i, j, "visibility of a robot with itself");
    let c = disks.centers();
    let occ = disks.occluders(i, j);
    let from = candidate_points(c[i], c[j], &occ, samples);
    if from.iter().any(|&p| free_segment_to_circle(p, c[j], &occ)) {
        return true;
    }
    let to = candidate_points(c[j], c[i], &occ, samples);
    to.iter().any(|&q| free_segment_to_circle(q, c[i], &occ))
}

/// Strict clearance test of one segment against all occluders.
pub fn segment_clear(p: Point, q: Point, occluders: &[Point]) -> bool {
    let (a, b) = ordered(p, q);
    occluders
        .iter()
        .all(|&c| dist_point_segment(c, a, b) > BLOCK_RADIUS)
}

/// Canonical endpoint order so that a segment tests the same both ways.
fn ordered(p: Point, q: Point) -> (Point, Point) {
    if (p.x, p.y) <= (q.x, q.y) {
        (p, q)
    } else {
        (q, p)
    }
}

/// Angle `2*pi*m/k` computed from the reduced fraction, so that a grid of
/// `k` angles is bit-identical to the matching subset of any multiple of `k`.
fn grid_angle(m: usize, k: usize) -> f64 {
    let g = gcd(m, k);
    TAU * (m / g) as f64 / (k / g) as f64
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn on_circle(center: Point, angle: f64) -> Point {
    center + Point::new(angle.cos(), angle.sin()) * ROBOT_RADIUS
}

/// Uniform grid angles plus, for the partner circle and each occluder, the
/// touching points of the four common tangents (each with a small nudge
/// either way, since an exact tangent is blocked under the closed rule).
fn candidate_points(center: Point, partner: Point, occluders: &[Point], samples: usize) -> Vec<Point> {
    let mut angles: Vec<f64> = (0..samples).map(|m| grid_angle(m, samples)).collect();
    for &other in std::iter::once(&partner).chain(occluders) {
        let d = other - center;
        let dist = d.norm();
        if dist == 0.0 {
            continue;
        }
        let base = d.y.atan2(d.x);
        // equal radii: outer tangents touch at +-90 degrees, inner at +-acos(2r/d)
        let inner = (2.0 * ROBOT_RADIUS / dist).min(1.0).acos();
        for offset in [PI / 2.0, -PI / 2.0, inner, -inner] {
            for nudge in [0.0, TANGENT_NUDGE, -TANGENT_NUDGE] {
                angles.push(base + offset + nudge);
            }
        }
    }
    angles.into_iter().map(|a| on_circle(center, a)).collect()
}

/// Distance along a ray from the origin at relative angle `rel` to the first
/// point of a disk whose center lies at distance `d` along angle 0.
fn entry_distance(d: f64, radius: f64, rel: f64) -> f64 {
    let s = d * rel.sin();
    d * rel.cos() - (radius * radius - s * s).max(0.0).sqrt()
}

/// Whether some segment from `p` to a point of the circle around `target`
/// clears every occluder.
fn free_segment_to_circle(p: Point, target: Point, occluders: &[Point]) -> bool {
    let to_target = target - p;
    let dt = to_target.norm();
    if dt <= ROBOT_RADIUS + 1e-12 {
        // p already lies on the target circle
        return occluders.iter().all(|&c| c.dist(p) > BLOCK_RADIUS);
    }
    let base = to_target.y.atan2(to_target.x);
    let half = (ROBOT_RADIUS / dt).asin();

    let mut blocked: Vec<(f64, f64)> = Vec::new();
    for &c in occluders {
        let v = c - p;
        let d = v.norm();
        if d <= BLOCK_RADIUS {
            return false;
        }
        let rel = wrap_angle(v.y.atan2(v.x) - base);
        let w = (BLOCK_RADIUS / d).asin();
        let lo = (rel - w).max(-half);
        let hi = (rel + w).min(half);
        if lo > hi {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let occ_entry = entry_distance(d, BLOCK_RADIUS, mid - rel);
        let target_entry = entry_distance(dt, ROBOT_RADIUS, mid);
        if occ_entry <= target_entry {
            blocked.push((lo, hi));
        }
    }
    blocked.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut gaps = Vec::new();
    let mut cursor = -half;
    for (lo, hi) in blocked {
        if lo > cursor {
            gaps.push((cursor, lo));
        }
        cursor = cursor.max(hi);
    }
    if cursor < half {
        gaps.push((cursor, half));
    }

    gaps.into_iter().filter(|(a, b)| b - a > 1e-12).any(|(a, b)| {
        let rel = 0.5 * (a + b);
        let s = entry_distance(dt, ROBOT_RADIUS, rel);
        let dir = Point::new((base + rel).cos(), (base + rel).sin());
        segment_clear(p, p + dir * s, occluders)
    })
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disks(pts: &[(f64, f64)]) -> DiskSet {
        DiskSet::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    #[test]
    fn fast_clear_examples() {
        assert_eq!(fast_clear(0, 1, &disks(&[(0.0, 0.0), (3.0, 0.0)])), Clearance::Visible);
        let d = disks(&[(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)]);
        assert_eq!(fast_clear(0, 1, &d), Clearance::Visible);
        let d = disks(&[(0.0, 0.0), (4.0, 0.0), (2.0, 0.4)]);
        assert_eq!(fast_clear(0, 1, &d), Clearance::Unknown);
    }

    #[test]
    fn collinear_row_blocks_ends() {
        let d = disks(&[(0.0, 0.0), (2.0, 0.0), (4.0, 0.0)]);
        assert!(!visible(0, 2, &d, DEFAULT_SAMPLES));
        assert!(!visible(2, 0, &d, DEFAULT_SAMPLES));
        assert!(!visibility_oracle(0, 2, &d, ORACLE_SAMPLES));
        assert_eq!(visible_set(1, &d, DEFAULT_SAMPLES), vec![0, 2]);
        assert_eq!(visible_set(0, &d, DEFAULT_SAMPLES), vec![1]);
    }

    #[test]
    fn offset_blocker_leaves_corridor() {
        let d = disks(&[(0.0, 0.0), (2.0, 0.9), (4.0, 0.0)]);
        assert!(visible(0, 2, &d, DEFAULT_SAMPLES));
        assert!(visibility_oracle(0, 2, &d, ORACLE_SAMPLES));
    }

    #[test]
    fn pair_and_singleton() {
        let d = disks(&[(0.0, 0.0), (2.0, 0.0)]);
        assert!(visible(0, 1, &d, DEFAULT_SAMPLES));
        assert!(visible_set(0, &disks(&[(1.0, 1.0)]), DEFAULT_SAMPLES).is_empty());
    }

    #[test]
    fn square_corners_see_each_other() {
        let d = disks(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
        for i in 0..4 {
            assert_eq!(visible_set(i, &d, DEFAULT_SAMPLES).len(), 3);
            for j in 0..4 {
                if i != j {
                    assert_eq!(fast_clear(i, j, &d), Clearance::Visible);
                    assert!(visibility_oracle(i, j, &d, ORACLE_SAMPLES));
                }
            }
        }
    }

    #[test]
    fn slightly_bent_row_is_visible_through_outer_tangent() {
        // the middle disk sits 0.01 off the line of centers: only segments
        // hugging the far side clear it
        let d = disks(&[(0.0, 0.0), (2.0, 0.01), (4.0, 0.0)]);
        assert_eq!(fast_clear(0, 2, &d), Clearance::Unknown);
        assert!(visible(0, 2, &d, DEFAULT_SAMPLES));
        assert!(visibility_oracle(0, 2, &d, ORACLE_SAMPLES));
    }

    #[test]
    fn grid_angles_are_nested() {
        for m in 0..64 {
            assert_eq!(grid_angle(m, 64).to_bits(), grid_angle(m * 3, 192).to_bits());
            assert_eq!(grid_angle(m, 64).to_bits(), grid_angle(m * 64, 4096).to_bits());
        }
    }

    #[test]
    fn wall_of_two_blocks_everything() {
        // two touching occluders straddling the line of centers
        let d = disks(&[(0.0, 0.0), (2.0, 0.5), (2.0, -0.5), (4.0, 0.0)]);
        assert!(!visible(0, 3, &d, DEFAULT_SAMPLES));
        assert!(!visibility_oracle(0, 3, &d, ORACLE_SAMPLES));
    }
}
