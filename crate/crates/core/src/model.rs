//! Robots, configurations, local frames and snapshots.
//!
//! A [`Snapshot`] is everything a robot learns in its Look step: the
//! positions of the robots it can see, in its own frame, and their lights.
//! No identifiers, round number or history are carried.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;
use crate::visibility::{visible_set, DiskSet};

/// Minimum center distance accepted between two robots.
pub const MIN_SEPARATION: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Light {
    Off,
    Red,
}

impl Light {
    pub fn as_str(self) -> &'static str {
        match self {
            Light::Off => "off",
            Light::Red => "red",
        }
    }
}

impl fmt::Display for Light {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Light {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" | "Off" => Ok(Light::Off),
            "red" | "Red" => Ok(Light::Red),
            other => Err(format!("unknown light color {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Robot {
    pub center: Point,
    pub light: Light,
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub robots: Vec<Robot>,
    pub round: u64,
}

impl Configuration {
    /// Round-0 configuration: all lights off, nobody terminated.
    pub fn initial(positions: &[Point]) -> Result<Self, String> {
        if positions.is_empty() {
            return Err("configuration needs at least one robot".into());
        }
        if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
            return Err(format!("non-finite position {p}"));
        }
        let cfg = Configuration {
            robots: positions
                .iter()
                .map(|&center| Robot {
                    center,
                    light: Light::Off,
                    terminated: false,
                })
                .collect(),
            round: 0,
        };
        if let Some((i, j, d)) = cfg.closest_pair() {
            if d < MIN_SEPARATION {
                return Err(format!("robots {i} and {j} are {d} apart (< 1)"));
            }
        }
        Ok(cfg)
    }

    pub fn len(&self) -> usize {
        self.robots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.robots.is_empty()
    }

    pub fn positions(&self) -> Vec<Point> {
        self.robots.iter().map(|r| r.center).collect()
    }

    pub fn disks(&self) -> DiskSet {
        DiskSet::new(self.positions())
    }

    pub fn all_terminated(&self) -> bool {
        self.robots.iter().all(|r| r.terminated)
    }

    pub fn count_light(&self, light: Light) -> usize {
        self.robots.iter().filter(|r| r.light == light).count()
    }

    /// Closest pair `(i, j, distance)`, `None` for fewer than two robots.
    pub fn closest_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.robots.len() {
            for j in (i + 1)..self.robots.len() {
                let d = self.robots[i].center.dist(self.robots[j].center);
                if best.is_none_or(|(_, _, b)| d < b) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FramePolicy {
    Aligned,
    Rotated,
    RotatedReflected,
}

impl FramePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            FramePolicy::Aligned => "aligned",
            FramePolicy::Rotated => "rotated",
            FramePolicy::RotatedReflected => "rotated-reflected",
        }
    }
}

impl fmt::Display for FramePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FramePolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aligned" => Ok(FramePolicy::Aligned),
            "rotated" => Ok(FramePolicy::Rotated),
            "rotated-reflected" => Ok(FramePolicy::RotatedReflected),
            other => Err(format!("unknown frame policy {other:?}")),
        }
    }
}

/// A robot's private rigid coordinate system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub origin: Point,
    pub rotation: f64,
    pub reflect: bool,
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        origin: Point::ORIGIN,
        rotation: 0.0,
        reflect: false,
    };

    pub fn anchored_at(self, origin: Point) -> Frame {
        Frame { origin, ..self }
    }
}

/// Deterministic frame for robot `index` of a run seeded with `seed`.
/// The origin is left at zero; the engine re-anchors it every round.
pub fn make_frame(seed: u64, index: usize, policy: FramePolicy) -> Frame {
    if policy == FramePolicy::Aligned {
        return Frame::IDENTITY;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let rotation = rng.gen_range(0.0..TAU);
    let reflect = policy == FramePolicy::RotatedReflected && rng.gen::<bool>();
    Frame {
        origin: Point::ORIGIN,
        rotation,
        reflect,
    }
}

/// World to local: translate, rotate by `-rotation`, then mirror `y`.
pub fn to_local(frame: &Frame, p: Point) -> Point {
    let v = (p - frame.origin).rotated(-frame.rotation);
    if frame.reflect {
        Point::new(v.x, -v.y)
    } else {
        v
    }
}

/// Local to world; inverse of [`to_local`].
pub fn to_global(frame: &Frame, p: Point) -> Point {
    let v = if frame.reflect { Point::new(p.x, -p.y) } else { p };
    frame.origin + v.rotated(frame.rotation)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observed {
    pub position: Point,
    pub light: Light,
}

/// The observer sits implicitly at the local origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub self_light: Light,
    pub others: Vec<Observed>,
}

impl Snapshot {
    pub fn new(self_light: Light, mut others: Vec<Observed>) -> Self {
        // canonical order so that nothing about simulation indices leaks through
        others.sort_by(|a, b| {
            a.position
                .x
                .total_cmp(&b.position.x)
                .then(a.position.y.total_cmp(&b.position.y))
        });
        Snapshot { self_light, others }
    }

    /// Observer first (at the origin), then the others.
    pub fn points(&self) -> Vec<Point> {
        std::iter::once(Point::ORIGIN)
            .chain(self.others.iter().map(|o| o.position))
            .collect()
    }

    pub fn lights(&self) -> Vec<Light> {
        std::iter::once(self.self_light)
            .chain(self.others.iter().map(|o| o.light))
            .collect()
    }

    /// Rigidly rotate every observed position about the observer.
    pub fn rotated(&self, angle: f64) -> Snapshot {
        Snapshot::new(
            self.self_light,
            self.others
                .iter()
                .map(|o| Observed {
                    position: o.position.rotated(angle),
                    light: o.light,
                })
                .collect(),
        )
    }
}

/// What one Compute step returns, in the robot's local frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub destination: Option<Point>,
    pub new_light: Light,
    pub terminate: bool,
}

impl Decision {
    pub fn stay(light: Light) -> Self {
        Decision {
            destination: None,
            new_light: light,
            terminate: false,
        }
    }
}

/// Snapshot for robot `i` given the indices it sees.
pub fn snapshot_from_visible(config: &Configuration, i: usize, frame: &Frame, seen: &[usize]) -> Snapshot {
    let frame = frame.anchored_at(config.robots[i].center);
    Snapshot::new(
        config.robots[i].light,
        seen.iter()
            .map(|&j| Observed {
                position: to_local(&frame, config.robots[j].center),
                light: config.robots[j].light,
            })
            .collect(),
    )
}

/// Look step for robot `i` with `samples` visibility samples per circle.
pub fn make_snapshot(config: &Configuration, i: usize, frame: &Frame, samples: usize) -> Snapshot {
    let seen = visible_set(i, &config.disks(), samples);
    snapshot_from_visible(config, i, frame, &seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::visibility::DEFAULT_SAMPLES;
    use std::f64::consts::FRAC_PI_2;

    fn cfg(pts: &[(f64, f64)]) -> Configuration {
        Configuration::initial(&pts.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn aligned_frame_is_identity() {
        let f = make_frame(99, 3, FramePolicy::Aligned);
        assert_eq!(f.rotation, 0.0);
        assert!(!f.reflect);
    }

    #[test]
    fn frames_are_reproducible() {
        for policy in [FramePolicy::Rotated, FramePolicy::RotatedReflected] {
            assert_eq!(make_frame(5, 2, policy), make_frame(5, 2, policy));
        }
        assert_ne!(
            make_frame(5, 2, FramePolicy::Rotated),
            make_frame(5, 3, FramePolicy::Rotated)
        );
        assert!(!make_frame(5, 2, FramePolicy::Rotated).reflect);
    }

    #[test]
    fn rotated_frames_are_uniform() {
        // chi-square over 20 bins, 1e4 draws; 43.82 is the 0.999 quantile at 19 dof
        let bins = 20;
        let draws = 10_000;
        let mut counts = vec![0usize; bins];
        for idx in 0..draws {
            let r = make_frame(7, idx, FramePolicy::Rotated).rotation;
            assert!((0.0..TAU).contains(&r));
            counts[((r / TAU) * bins as f64) as usize] += 1;
        }
        let expected = draws as f64 / bins as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 43.82, "chi2 = {chi2}");
    }

    #[test]
    fn reflected_policy_reflects_some_frames() {
        let reflected = (0..100)
            .filter(|&i| make_frame(1, i, FramePolicy::RotatedReflected).reflect)
            .count();
        assert!(reflected > 20 && reflected < 80);
    }

    #[test]
    fn to_global_examples() {
        let p = Point::new(3.5, -2.0);
        assert_eq!(to_global(&Frame::IDENTITY, p), p);
        let f = Frame {
            origin: Point::ORIGIN,
            rotation: FRAC_PI_2,
            reflect: false,
        };
        let g = to_global(&f, Point::new(1.0, 0.0));
        assert!((g.x - 0.0).abs() < 1e-15 && (g.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn local_global_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let frame = Frame {
                origin: Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)),
                rotation: rng.gen_range(0.0..TAU),
                reflect: rng.gen(),
            };
            let q = Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
            let back = to_global(&frame, to_local(&frame, q));
            assert!(back.dist(q) < 1e-12);
        }
    }

    #[test]
    fn snapshot_of_two_robots() {
        let c = cfg(&[(0.0, 0.0), (3.0, 0.0)]);
        for i in 0..2 {
            let s = make_snapshot(&c, i, &make_frame(3, i, FramePolicy::Rotated), DEFAULT_SAMPLES);
            assert_eq!(s.others.len(), 1);
            assert!((s.others[0].position.norm() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn snapshot_of_row_end_sees_one() {
        let c = cfg(&[(0.0, 0.0), (2.0, 0.0), (4.0, 0.0)]);
        let s = make_snapshot(&c, 0, &Frame::IDENTITY, DEFAULT_SAMPLES);
        assert_eq!(s.others.len(), 1);
        let s = make_snapshot(&c, 1, &Frame::IDENTITY, DEFAULT_SAMPLES);
        assert_eq!(s.others.len(), 2);
    }

    #[test]
    fn rotating_frame_rotates_snapshot_backwards() {
        let mut c = cfg(&[(0.0, 0.0), (3.0, 1.0), (-1.0, 4.0)]);
        c.robots[1].light = Light::Red;
        let theta = 0.7;
        let base = make_snapshot(&c, 0, &Frame::IDENTITY, DEFAULT_SAMPLES);
        let turned = make_snapshot(
            &c,
            0,
            &Frame {
                rotation: theta,
                ..Frame::IDENTITY
            },
            DEFAULT_SAMPLES,
        );
        let expect = base.rotated(-theta);
        assert_eq!(turned.others.len(), expect.others.len());
        for (a, b) in turned.others.iter().zip(&expect.others) {
            assert!(a.position.dist(b.position) < 1e-12);
            assert_eq!(a.light, b.light);
        }
    }

    #[test]
    fn snapshots_ignore_robot_order() {
        let a = cfg(&[(0.0, 0.0), (3.0, 1.0), (-1.0, 4.0), (2.0, 5.0)]);
        let b = cfg(&[(2.0, 5.0), (-1.0, 4.0), (0.0, 0.0), (3.0, 1.0)]);
        let sa = make_snapshot(&a, 0, &Frame::IDENTITY, DEFAULT_SAMPLES);
        let sb = make_snapshot(&b, 2, &Frame::IDENTITY, DEFAULT_SAMPLES);
        assert_eq!(sa, sb);
    }

    #[test]
    fn initial_rejects_overlap() {
        assert!(Configuration::initial(&[Point::new(0.0, 0.0), Point::new(0.5, 0.0)]).is_err());
        assert!(Configuration::initial(&[]).is_err());
        let c = cfg(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(c.round, 0);
        assert_eq!(c.count_light(Light::Off), 2);
    }
}
