//! The Compute function.
//!
//! Everything here works on a [`Snapshot`] in the observer's own frame, with
//! the observer at the origin. Index 0 of the internal point list is always
//! the observer.

use std::fmt;
use std::str::FromStr;

use crate::error::AlgorithmError;
use crate::geometry::{
    angle_between, convex_hull, dist_point_segment, exterior_bisector, min_dist_moving, orient,
    project_on_line, HullView, Point, EPS_GEOM,
};
use crate::model::{Decision, Light, Observed, Snapshot};

/// Center distance that two robot paths must keep.
pub const CLEARANCE: f64 = 1.0 - 1e-9;
/// Minimum length of an edge an interior robot may cross.
pub const MIN_EDGE_LENGTH: f64 = 3.0;
/// Step length for corner expansion and the line special cases.
pub const STEP: f64 = 1.0;
/// Height factor applied to interior targets.
pub const INTERIOR_HEIGHT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Corner,
    Side,
    Interior,
    LineCase,
    Alone,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Corner => "corner",
            Role::Side => "side",
            Role::Interior => "interior",
            Role::LineCase => "line",
            Role::Alone => "alone",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "corner" => Ok(Role::Corner),
            "side" => Ok(Role::Side),
            "interior" => Ok(Role::Interior),
            "line" => Ok(Role::LineCase),
            "alone" => Ok(Role::Alone),
            other => Err(format!("unknown role {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgorithmParams {
    /// Compute side and interior targets against the expanded corners.
    pub predict: bool,
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        AlgorithmParams { predict: true }
    }
}

/// Angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafeZoneParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

impl SafeZoneParams {
    /// From the hull angles at the two edge endpoints.
    pub fn from_hull_angles(angle_a: f64, angle_b: f64) -> Self {
        let alpha = 180.0 - angle_a;
        let beta = 180.0 - angle_b;
        SafeZoneParams {
            alpha,
            beta,
            delta: (alpha / 4.0).min(beta / 4.0),
        }
    }
}

/// Where a single equidistant Off robot sits relative to the observer,
/// measured along the edge from `u1` towards `u2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeerSide {
    None,
    Clockwise,
    Counterclockwise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EligibleEdge {
    /// `(u1, u2)` in clockwise hull order.
    pub endpoints: (Point, Point),
    pub foot: Point,
    pub distance: f64,
    pub peer_side: PeerSide,
    hull_edge: (usize, usize),
}

/// The edge and target a side or interior robot used, for post-hoc checks.
/// `a`-`b` is the edge, `prev` is the hull neighbor of `a` and `next` the
/// hull neighbor of `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafeZone {
    pub prev: Point,
    pub a: Point,
    pub b: Point,
    pub next: Point,
    pub destination: Point,
}

impl SafeZone {
    pub fn map(&self, f: impl Fn(Point) -> Point) -> SafeZone {
        SafeZone {
            prev: f(self.prev),
            a: f(self.a),
            b: f(self.b),
            next: f(self.next),
            destination: f(self.destination),
        }
    }

    /// Slack of both angle bounds in degrees; both are `>= 0` inside the zone.
    pub fn slack(&self) -> (f64, f64) {
        let bound_a = (180.0 - angle_between(self.prev, self.a, self.b)) / 4.0;
        let bound_b = (180.0 - angle_between(self.a, self.b, self.next)) / 4.0;
        (
            bound_a - angle_between(self.destination, self.a, self.b),
            bound_b - angle_between(self.a, self.b, self.destination),
        )
    }

    /// Destination lies strictly on the side of `ab` away from `prev`/`next`.
    pub fn outward(&self) -> bool {
        let side = |p: Point| (self.b - self.a).cross(p - self.a);
        let dest = side(self.destination);
        dest * side(self.prev) < 0.0 && dest * side(self.next) < 0.0
    }
}

/// Full result of one Compute call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plan {
    pub role: Role,
    pub decision: Decision,
    pub safe_zone: Option<SafeZone>,
}

impl Plan {
    fn stay(role: Role, light: Light) -> Self {
        Plan {
            role,
            decision: Decision::stay(light),
            safe_zone: None,
        }
    }
}

struct View {
    points: Vec<Point>,
    lights: Vec<Light>,
    hull: HullView,
}

impl View {
    fn new(s: &Snapshot) -> Result<Self, AlgorithmError> {
        let points = s.points();
        let hull = convex_hull(&points)?;
        Ok(View {
            points,
            lights: s.lights(),
            hull,
        })
    }

    fn own(&self) -> Light {
        self.lights[0]
    }

    fn role(&self) -> Role {
        if self.points.len() == 1 {
            Role::Alone
        } else if self.hull.degenerate_line.is_some() {
            Role::LineCase
        } else if self.hull.is_vertex(0) {
            Role::Corner
        } else if self.hull.on_edge.contains(&0) {
            Role::Side
        } else {
            Role::Interior
        }
    }

    fn is_red_corner(&self, idx: usize) -> bool {
        self.lights[idx] == Light::Red && self.hull.is_vertex(idx)
    }

    /// Positions after every red hull vertex takes its corner step.
    fn predicted(&self, params: &AlgorithmParams) -> Vec<Point> {
        let mut out = self.points.clone();
        if !params.predict {
            return out;
        }
        for &v in &self.hull.vertices {
            if v == 0 || self.lights[v] != Light::Red {
                continue;
            }
            if let Some((prev, next)) = self.hull.neighbors(v) {
                if let Ok(dir) = exterior_bisector(self.points[prev], self.points[v], self.points[next]) {
                    out[v] = self.points[v] + dir * STEP;
                }
            }
        }
        out
    }
}

/// Role of the observer in its own local hull.
pub fn classify(s: &Snapshot) -> Role {
    match View::new(s) {
        Ok(view) => view.role(),
        // coincident points cannot occur in a legal configuration
        Err(_) => Role::Interior,
    }
}

pub fn compute(s: &Snapshot, params: &AlgorithmParams) -> Decision {
    plan(s, params).decision
}

/// Compute with the role and the safe zone used, if any.
pub fn plan(s: &Snapshot, params: &AlgorithmParams) -> Plan {
    let view = match View::new(s) {
        Ok(v) => v,
        Err(_) => return Plan::stay(Role::Interior, s.self_light),
    };
    let own = view.own();
    let role = view.role();
    match role {
        Role::Alone => Plan {
            role,
            decision: Decision {
                destination: None,
                new_light: Light::Red,
                terminate: true,
            },
            safe_zone: None,
        },
        Role::LineCase => line_step(&view),
        Role::Corner => Plan {
            role,
            decision: corner_decision(&view),
            safe_zone: None,
        },
        Role::Side => match side_plan(&view, params) {
            Ok(p) => p,
            Err(_) => Plan::stay(role, own),
        },
        Role::Interior => interior_plan(&view, params),
    }
}

fn line_step(view: &View) -> Plan {
    let own = view.own();
    let others = view.points.len() - 1;
    let stay = Plan::stay(Role::LineCase, own);
    let moving = |toward: Point| Plan {
        role: Role::LineCase,
        decision: Decision {
            destination: Some(toward.normalized().perp() * STEP),
            new_light: Light::Red,
            terminate: false,
        },
        safe_zone: None,
    };
    match others {
        1 => {
            if own == Light::Off {
                moving(view.points[1])
            } else if view.lights[1] == Light::Red {
                Plan {
                    role: Role::LineCase,
                    decision: Decision {
                        destination: None,
                        new_light: Light::Red,
                        terminate: true,
                    },
                    safe_zone: None,
                }
            } else {
                stay
            }
        }
        2 => {
            if own == Light::Off && view.lights[1] == Light::Red && view.lights[2] == Light::Red {
                let nearer = if view.points[1].norm() <= view.points[2].norm() { 1 } else { 2 };
                moving(view.points[nearer])
            } else {
                stay
            }
        }
        _ => stay,
    }
}

fn corner_decision(view: &View) -> Decision {
    let own = view.own();
    if own == Light::Red && view.lights.iter().all(|&l| l == Light::Red) {
        return Decision {
            destination: None,
            new_light: Light::Red,
            terminate: true,
        };
    }
    let Some((prev, next)) = view.hull.neighbors(0) else {
        return Decision::stay(own);
    };
    match exterior_bisector(view.points[prev], view.points[0], view.points[next]) {
        Ok(dir) => Decision {
            destination: Some(dir * STEP),
            new_light: Light::Red,
            terminate: false,
        },
        Err(_) => Decision::stay(own),
    }
}

/// Corner rule; meaningful when `classify(s) == Role::Corner`.
pub fn corner_step(s: &Snapshot) -> Decision {
    match View::new(s) {
        Ok(view) if view.role() == Role::Corner => corner_decision(&view),
        _ => Decision::stay(s.self_light),
    }
}

/// Side rule; `Ok(None)` for the no-move branch.
pub fn side_step(s: &Snapshot, params: &AlgorithmParams) -> Result<Decision, AlgorithmError> {
    let view = View::new(s)?;
    if view.role() != Role::Side {
        return Err(AlgorithmError::MalformedSide("observer is not on a hull edge"));
    }
    side_plan(&view, params).map(|p| p.decision)
}

fn side_plan(view: &View, params: &AlgorithmParams) -> Result<Plan, AlgorithmError> {
    let own = view.own();
    let pts = &view.points;
    let me = pts[0];
    let k = view.hull.vertices.len();
    let (a, b) = (0..k)
        .map(|e| (view.hull.vertices[e], view.hull.vertices[(e + 1) % k]))
        .find(|&(a, b)| orient(pts[a], pts[b], me) == 0)
        .ok_or(AlgorithmError::MalformedSide("no hull edge through the observer"))?;

    // collinear neighbors on the edge, one on each side of the observer
    let dir = (pts[b] - pts[a]).normalized();
    let mut before: Option<(usize, f64)> = None;
    let mut after: Option<(usize, f64)> = None;
    for q in 1..pts.len() {
        if orient(pts[a], pts[b], pts[q]) != 0 {
            continue;
        }
        let t = (pts[q] - me).dot(dir);
        if t < 0.0 && before.is_none_or(|(_, bt)| t > bt) {
            before = Some((q, t));
        }
        if t > 0.0 && after.is_none_or(|(_, at)| t < at) {
            after = Some((q, t));
        }
    }
    let (r, v2) = match (before, after) {
        (Some((r, _)), Some((v2, _))) => (r, v2),
        _ => return Err(AlgorithmError::MalformedSide("missing collinear neighbor")),
    };
    if view.lights[r] != Light::Red && view.lights[v2] != Light::Red {
        return Ok(Plan::stay(Role::Side, own));
    }

    let off_line: Vec<usize> = (1..pts.len())
        .filter(|&q| view.lights[q] == Light::Red && orient(pts[a], pts[b], pts[q]) != 0)
        .collect();
    let nearest_by_angle = |toward: usize| {
        off_line
            .iter()
            .copied()
            .min_by(|&p, &q| {
                angle_between(pts[toward], me, pts[p]).total_cmp(&angle_between(pts[toward], me, pts[q]))
            })
    };
    let v0 = nearest_by_angle(r).ok_or(AlgorithmError::MalformedSide("no red robot beyond r"))?;
    let v3 = nearest_by_angle(v2).ok_or(AlgorithmError::MalformedSide("no red robot beyond v2"))?;

    let pred = view.predicted(params);
    let (r_p, v2_p, v0_p, v3_p) = (pred[r], pred[v2], pred[v0], pred[v3]);
    let zone = SafeZoneParams::from_hull_angles(angle_between(v0_p, r_p, v2_p), angle_between(r_p, v2_p, v3_p));
    if !(zone.delta > 0.0) {
        return Err(AlgorithmError::MalformedSide("flat corner"));
    }
    let foot = project_on_line(me, r_p, v2_p);
    let height = zone.delta.to_radians().tan() * foot.dist(v2_p).min(foot.dist(r_p));
    let normal = outward_normal(r_p, v2_p, &[v0_p, v3_p]);
    let destination = foot + normal * height;
    Ok(Plan {
        role: Role::Side,
        decision: Decision {
            destination: Some(destination),
            new_light: Light::Red,
            terminate: false,
        },
        safe_zone: Some(SafeZone {
            prev: v0_p,
            a: r_p,
            b: v2_p,
            next: v3_p,
            destination,
        }),
    })
}

/// Unit normal of line `ab` pointing away from `inside`.
fn outward_normal(a: Point, b: Point, inside: &[Point]) -> Point {
    let n = (b - a).normalized().perp();
    let pull: f64 = inside.iter().map(|&p| (p - a).dot(n)).sum();
    if pull > 0.0 {
        -n
    } else {
        n
    }
}

/// Edges an interior robot may cross, in hull order.
pub fn eligible_edges(s: &Snapshot) -> Vec<EligibleEdge> {
    match View::new(s) {
        Ok(view) if view.role() == Role::Interior => edges_for(&view),
        _ => Vec::new(),
    }
}

fn tie_tolerance(d: f64) -> f64 {
    EPS_GEOM * (1.0 + d)
}

fn in_closed_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    let o = [orient(a, b, p), orient(b, c, p), orient(c, a, p)];
    o.iter().all(|&s| s >= 0) || o.iter().all(|&s| s <= 0)
}

fn edges_for(view: &View) -> Vec<EligibleEdge> {
    let pts = &view.points;
    let me = pts[0];
    let mut out = Vec::new();
    for (a, b) in view.hull.edges() {
        if view.lights[a] != Light::Red || view.lights[b] != Light::Red {
            continue;
        }
        let (u1, u2) = (b, a);
        // (e)
        if pts[a].dist(pts[b]) < MIN_EDGE_LENGTH {
            continue;
        }
        let others = || (1..pts.len()).filter(|&q| q != a && q != b);
        // (b)
        let on_segment = others().any(|q| {
            orient(pts[a], pts[b], pts[q]) == 0 && {
                let t = (pts[q] - pts[a]).dot(pts[b] - pts[a]) / (pts[b] - pts[a]).norm_sq();
                t > 0.0 && t < 1.0
            }
        });
        if on_segment {
            continue;
        }
        // (a)
        if others().any(|q| in_closed_triangle(pts[q], me, pts[a], pts[b])) {
            continue;
        }
        // (c) and (d)
        let d_self = dist_point_segment(me, pts[a], pts[b]);
        let tol = tie_tolerance(d_self);
        let along = pts[u2] - pts[u1];
        let mut closer = false;
        let (mut cw, mut ccw) = (false, false);
        let mut peer = PeerSide::None;
        for q in others().filter(|&q| !view.is_red_corner(q)) {
            let d = dist_point_segment(pts[q], pts[a], pts[b]);
            if d < d_self - tol {
                closer = true;
                break;
            }
            if (d - d_self).abs() <= tol {
                let side = if (pts[q] - me).dot(along) > 0.0 {
                    cw = true;
                    PeerSide::Clockwise
                } else {
                    ccw = true;
                    PeerSide::Counterclockwise
                };
                if view.lights[q] == Light::Off {
                    peer = side;
                }
            }
        }
        if closer || (cw && ccw) {
            continue;
        }
        out.push(EligibleEdge {
            endpoints: (pts[u1], pts[u2]),
            foot: project_on_line(me, pts[a], pts[b]),
            distance: d_self,
            peer_side: peer,
            hull_edge: (a, b),
        });
    }
    out
}

/// Interior rule.
pub fn interior_step(s: &Snapshot, params: &AlgorithmParams) -> Decision {
    match View::new(s) {
        Ok(view) if view.role() == Role::Interior => interior_plan(&view, params).decision,
        _ => Decision::stay(s.self_light),
    }
}

fn interior_plan(view: &View, params: &AlgorithmParams) -> Plan {
    let own = view.own();
    let stay = Plan::stay(Role::Interior, own);
    if own != Light::Off {
        return stay;
    }
    let edges = edges_for(view);
    let Some(edge) = edges.iter().min_by(|e, f| {
        e.distance
            .total_cmp(&f.distance)
            .then(e.foot.x.total_cmp(&f.foot.x))
            .then(e.foot.y.total_cmp(&f.foot.y))
    }) else {
        return stay;
    };

    let (a, b) = edge.hull_edge;
    let Some((v1, _)) = view.hull.neighbors(a) else {
        return stay;
    };
    let Some((_, v4)) = view.hull.neighbors(b) else {
        return stay;
    };
    let pred = view.predicted(params);
    let (pa, pb, p1, p4) = (pred[a], pred[b], pred[v1], pred[v4]);
    let zone = SafeZoneParams::from_hull_angles(angle_between(p1, pa, pb), angle_between(pa, pb, p4));
    if !(zone.delta > 0.0) {
        return stay;
    }
    // u1 = b, u2 = a
    let len = pa.dist(pb);
    let m = match edge.peer_side {
        PeerSide::None => pa.lerp(pb, 0.5),
        PeerSide::Clockwise => pb.lerp(pa, 1.0 / 3.0),
        PeerSide::Counterclockwise => pa.lerp(pb, 1.0 / 3.0),
    };
    debug_assert!(len > 0.0);
    let height = INTERIOR_HEIGHT * zone.delta.to_radians().tan() * m.dist(pa).min(m.dist(pb));
    let normal = outward_normal(pa, pb, &[p1, p4]);
    let destination = m + normal * height;

    let me = view.points[0];
    let moving: Vec<(Point, Point)> = (1..view.points.len())
        .map(|q| (view.points[q], pred[q]))
        .collect();
    if !path_clear(me, destination, &moving) {
        return stay;
    }
    Plan {
        role: Role::Interior,
        decision: Decision {
            destination: Some(destination),
            new_light: Light::Red,
            terminate: false,
        },
        safe_zone: Some(SafeZone {
            prev: p1,
            a: pa,
            b: pb,
            next: p4,
            destination,
        }),
    }
}

/// Swept-disk test of the straight path `from -> to` against every other
/// robot in the snapshot, all of them assumed static.
pub fn corridor_clear(s: &Snapshot, from: Point, to: Point) -> bool {
    s.others
        .iter()
        .all(|o| dist_point_segment(o.position, from, to) >= CLEARANCE)
}

/// Like [`corridor_clear`] but each obstacle is either static or moving
/// linearly from `.0` to `.1` during the same round; both are checked.
fn path_clear(from: Point, to: Point, obstacles: &[(Point, Point)]) -> bool {
    obstacles.iter().all(|&(q0, q1)| {
        dist_point_segment(q0, from, to) >= CLEARANCE
            && (q0 == q1 || min_dist_moving(from, to, q0, q1) >= CLEARANCE)
    })
}

/// The snapshot with every red hull vertex advanced by its corner step.
pub fn predict_corners(s: &Snapshot, params: &AlgorithmParams) -> Snapshot {
    let Ok(view) = View::new(s) else {
        return s.clone();
    };
    let pred = view.predicted(params);
    Snapshot::new(
        s.self_light,
        (1..pred.len())
            .map(|q| Observed {
                position: pred[q],
                light: view.lights[q],
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    /// Snapshot seen from `me`, others given in world coordinates.
    fn snap(me: (f64, f64), own: Light, others: &[((f64, f64), Light)]) -> Snapshot {
        Snapshot::new(
            own,
            others
                .iter()
                .map(|&((x, y), light)| Observed {
                    position: p(x - me.0, y - me.1),
                    light,
                })
                .collect(),
        )
    }

    const SQUARE: [(f64, f64); 4] = [(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)];

    fn square(light: Light) -> Vec<((f64, f64), Light)> {
        SQUARE.iter().map(|&c| (c, light)).collect()
    }

    const NO_PREDICT: AlgorithmParams = AlgorithmParams { predict: false };

    fn close(a: Point, b: Point, tol: f64) -> bool {
        a.dist(b) < tol
    }

    #[test]
    fn classify_examples() {
        let off = Light::Off;
        let s = snap((0.0, 0.0), off, &[((10.0, 0.0), off), ((10.0, 10.0), off), ((0.0, 10.0), off)]);
        assert_eq!(classify(&s), Role::Corner);
        let s = snap((5.0, 0.0), off, &square(off));
        assert_eq!(classify(&s), Role::Side);
        let s = snap((5.0, 5.0), off, &square(off));
        assert_eq!(classify(&s), Role::Interior);
        assert_eq!(classify(&Snapshot::new(off, vec![])), Role::Alone);
        let s = snap((0.0, 0.0), off, &[((3.0, 0.0), off)]);
        assert_eq!(classify(&s), Role::LineCase);
    }

    #[test]
    fn alone_terminates_red() {
        let d = compute(&Snapshot::new(Light::Off, vec![]), &AlgorithmParams::default());
        assert_eq!(d.destination, None);
        assert!(d.terminate);
        assert_eq!(d.new_light, Light::Red);
    }

    #[test]
    fn line_with_one_other() {
        let s = snap((0.0, 0.0), Light::Off, &[((3.0, 0.0), Light::Off)]);
        let d = compute(&s, &AlgorithmParams::default());
        let dest = d.destination.unwrap();
        assert!((dest.norm() - 1.0).abs() < 1e-12);
        assert!(dest.dot(p(1.0, 0.0)).abs() < 1e-12);
        assert_eq!(d.new_light, Light::Red);
        assert!(!d.terminate);

        let s = snap((0.0, 0.0), Light::Red, &[((3.0, 0.0), Light::Red)]);
        let d = compute(&s, &AlgorithmParams::default());
        assert!(d.terminate && d.destination.is_none());

        let s = snap((0.0, 0.0), Light::Red, &[((3.0, 0.0), Light::Off)]);
        assert_eq!(compute(&s, &AlgorithmParams::default()), Decision::stay(Light::Red));
    }

    #[test]
    fn line_with_two_red_others() {
        let red = Light::Red;
        let s = snap((2.0, 0.0), Light::Off, &[((0.0, 0.0), red), ((5.0, 0.0), red)]);
        let d = compute(&s, &AlgorithmParams::default());
        let dest = d.destination.unwrap();
        assert!((dest.norm() - 1.0).abs() < 1e-12);
        assert!(dest.x.abs() < 1e-12);
        assert_eq!(d.new_light, red);

        let s = snap((2.0, 0.0), Light::Off, &[((0.0, 0.0), red), ((5.0, 0.0), Light::Off)]);
        assert_eq!(compute(&s, &AlgorithmParams::default()), Decision::stay(Light::Off));
    }

    #[test]
    fn corner_moves_along_bisector() {
        let mut others = vec![((10.0, 0.0), Light::Off), ((0.0, 10.0), Light::Off)];
        others.push(((5.0, 5.0), Light::Off));
        let s = snap((0.0, 0.0), Light::Off, &others);
        let d = corner_step(&s);
        assert!(close(d.destination.unwrap(), p(-0.70711, -0.70711), 1e-5));
        assert_eq!(d.new_light, Light::Red);
        assert!(!d.terminate);

        // red corner with an Off robot in sight keeps expanding
        let s = snap((0.0, 0.0), Light::Red, &others);
        assert!(corner_step(&s).destination.is_some());
    }

    #[test]
    fn corner_terminates_when_all_red() {
        let red = Light::Red;
        let s = snap((0.0, 0.0), red, &[((10.0, 0.0), red), ((10.0, 10.0), red), ((0.0, 10.0), red)]);
        let d = corner_step(&s);
        assert!(d.terminate);
        assert_eq!(d.destination, None);
        assert_eq!(d.new_light, red);
    }

    #[test]
    fn side_robot_between_red_corners() {
        let s = snap((4.0, 0.0), Light::Off, &square(Light::Red));
        let d = side_step(&s, &NO_PREDICT).unwrap();
        // local frame is a pure translation by (-4, 0)
        let dest = d.destination.unwrap() + p(4.0, 0.0);
        assert!(close(dest, p(4.0, -1.6569), 1e-4), "{dest}");
        assert_eq!(d.new_light, Light::Red);

        let zone = plan(&s, &NO_PREDICT).safe_zone.unwrap();
        let (sa, sb) = zone.slack();
        assert!(sa >= -1e-9 && sb >= -1e-9);
        assert!(zone.outward());
    }

    #[test]
    fn side_robot_between_off_neighbors_stays() {
        let mut others = square(Light::Red);
        others.push(((2.0, 0.0), Light::Off));
        others.push(((6.0, 0.0), Light::Off));
        let s = snap((4.0, 0.0), Light::Off, &others);
        assert_eq!(side_step(&s, &NO_PREDICT).unwrap(), Decision::stay(Light::Off));
    }

    #[test]
    fn side_with_prediction_stays_in_zone() {
        let s = snap((3.0, 0.0), Light::Off, &square(Light::Red));
        let pl = plan(&s, &AlgorithmParams::default());
        assert_eq!(pl.role, Role::Side);
        let zone = pl.safe_zone.unwrap();
        let (sa, sb) = zone.slack();
        assert!(sa >= -1e-9 && sb >= -1e-9);
        assert!(zone.outward());
    }

    #[test]
    fn lone_interior_robot_edges() {
        let s = snap((5.0, 3.0), Light::Off, &square(Light::Red));
        let edges = eligible_edges(&s);
        let bottom = edges
            .iter()
            .find(|e| close(e.foot, p(0.0, -3.0), 1e-12))
            .expect("bottom edge eligible");
        assert_eq!(bottom.peer_side, PeerSide::None);
        assert!((bottom.distance - 3.0).abs() < 1e-12);
        assert_eq!(edges.len(), 4);
    }

    #[test]
    fn two_interior_peers_split_the_edge() {
        let mut others = square(Light::Red);
        others.push(((6.0, 3.0), Light::Off));
        let s = snap((4.0, 3.0), Light::Off, &others);
        let bottom = eligible_edges(&s)
            .into_iter()
            .find(|e| e.foot.y < -2.9)
            .expect("bottom edge eligible");
        assert_eq!(bottom.peer_side, PeerSide::Counterclockwise);

        let mut others = square(Light::Red);
        others.push(((4.0, 3.0), Light::Off));
        let s = snap((6.0, 3.0), Light::Off, &others);
        let bottom = eligible_edges(&s)
            .into_iter()
            .find(|e| e.foot.y < -2.9)
            .expect("bottom edge eligible");
        assert_eq!(bottom.peer_side, PeerSide::Clockwise);
    }

    #[test]
    fn peers_cross_a_third_apart() {
        let mut left = square(Light::Red);
        left.push(((6.0, 3.0), Light::Off));
        let mut right = square(Light::Red);
        right.push(((4.0, 3.0), Light::Off));
        let dl = interior_step(&snap((4.0, 3.0), Light::Off, &left), &NO_PREDICT);
        let dr = interior_step(&snap((6.0, 3.0), Light::Off, &right), &NO_PREDICT);
        let a = dl.destination.unwrap() + p(4.0, 3.0);
        let b = dr.destination.unwrap() + p(6.0, 3.0);
        assert!((a.x - 10.0 / 3.0).abs() < 1e-9);
        assert!((b.x - 20.0 / 3.0).abs() < 1e-9);
        assert!(min_dist_moving(p(4.0, 3.0), a, p(6.0, 3.0), b) >= 1.0);
    }

    #[test]
    fn peers_on_both_sides_disqualify() {
        let mut others = square(Light::Red);
        others.push(((3.0, 3.0), Light::Off));
        others.push(((7.0, 3.0), Light::Off));
        let s = snap((5.0, 3.0), Light::Off, &others);
        assert!(eligible_edges(&s).iter().all(|e| e.foot.y > -2.9));
    }

    #[test]
    fn short_edges_are_excluded() {
        let red = Light::Red;
        let s = snap(
            (1.25, 0.8),
            Light::Off,
            &[((0.0, 0.0), red), ((2.5, 0.0), red), ((2.5, 2.5), red), ((0.0, 2.5), red)],
        );
        assert!(eligible_edges(&s).is_empty());
        assert_eq!(interior_step(&s, &NO_PREDICT), Decision::stay(Light::Off));
    }

    #[test]
    fn lone_interior_target() {
        let s = snap((5.0, 3.0), Light::Off, &square(Light::Red));
        let d = interior_step(&s, &NO_PREDICT);
        let dest = d.destination.unwrap() + p(5.0, 3.0);
        assert!(close(dest, p(5.0, -1.0355), 1e-4), "{dest}");
        assert_eq!(d.new_light, Light::Red);
        let ang = angle_between(dest, p(0.0, 0.0), p(10.0, 0.0));
        assert!(ang <= 22.5 && (ang - 11.7).abs() < 0.05);
    }

    #[test]
    fn corridor_examples() {
        let s = snap((5.0, 3.0), Light::Off, &[((6.5, 1.0), Light::Red)]);
        assert!(corridor_clear(&s, p(0.0, 0.0), p(0.0, -4.0355)));
        let s = snap((5.0, 3.0), Light::Off, &[((5.8, 1.0), Light::Red)]);
        assert!(!corridor_clear(&s, p(0.0, 0.0), p(0.0, -4.0355)));
        assert!(corridor_clear(&Snapshot::new(Light::Off, vec![]), p(0.0, 0.0), p(3.0, 0.0)));
    }

    #[test]
    fn blocked_corridor_means_no_move() {
        let mut others = square(Light::Red);
        others.push(((3.0, 1.3), Light::Off));
        let s = snap((1.5, 1.2), Light::Off, &others);
        assert_eq!(interior_step(&s, &NO_PREDICT), Decision::stay(Light::Off));
    }

    #[test]
    fn no_eligible_edge_means_no_move() {
        // another Off robot strictly closer to every long edge
        let mut others = square(Light::Red);
        others.push(((5.0, 1.5), Light::Off));
        others.push(((5.0, 8.5), Light::Off));
        others.push(((1.5, 5.0), Light::Off));
        others.push(((8.5, 5.0), Light::Off));
        let s = snap((5.0, 5.0), Light::Off, &others);
        assert!(eligible_edges(&s).is_empty());
        assert_eq!(interior_step(&s, &NO_PREDICT), Decision::stay(Light::Off));
    }

    #[test]
    fn prediction_expands_the_square() {
        let s = snap((5.0, 3.0), Light::Off, &square(Light::Red));
        let pred = predict_corners(&s, &AlgorithmParams::default());
        let corner = pred
            .others
            .iter()
            .map(|o| o.position + p(5.0, 3.0))
            .find(|q| q.x < 0.0 && q.y < 0.0)
            .unwrap();
        assert!(close(corner, p(-0.70711, -0.70711), 1e-5));
        let xs: Vec<f64> = pred.others.iter().map(|o| o.position.x).collect();
        let width = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
        assert!((width - 11.41421).abs() < 1e-5);
        assert_eq!(predict_corners(&s, &NO_PREDICT), s);
    }

    #[test]
    fn interior_with_prediction_lands_outside() {
        let s = snap((5.0, 3.0), Light::Off, &square(Light::Red));
        let pl = plan(&s, &AlgorithmParams::default());
        let zone = pl.safe_zone.unwrap();
        let (sa, sb) = zone.slack();
        assert!(sa > 0.0 && sb > 0.0);
        assert!(zone.outward());
        assert!(zone.destination.dist(zone.a) >= 1.0 && zone.destination.dist(zone.b) >= 1.0);
    }

    #[test]
    fn red_interior_robot_stays() {
        let s = snap((5.0, 3.0), Light::Red, &square(Light::Red));
        assert_eq!(compute(&s, &AlgorithmParams::default()), Decision::stay(Light::Red));
    }
}
