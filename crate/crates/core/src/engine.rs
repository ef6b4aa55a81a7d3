//! Fully synchronous round executor.

use std::fmt;
use std::str::FromStr;

use crate::algorithm::{plan, AlgorithmParams, Plan, Role, SafeZone};
use crate::geometry::{convex_hull, min_dist_moving, Point};
use crate::model::{
    make_frame, snapshot_from_visible, to_global, Configuration, Decision, Frame, Light, Snapshot,
    MIN_SEPARATION,
};
use crate::scenario::Scenario;
use crate::visibility::{visibility_matrix, visibility_oracle, ORACLE_SAMPLES};

/// Compute function plugged into the engine.
pub trait Controller {
    fn plan(&self, s: &Snapshot, params: &AlgorithmParams) -> Plan;
}

/// The mutual visibility algorithm.
#[derive(Debug, Clone, Copy, Default)]
pub struct Standard;

impl Controller for Standard {
    fn plan(&self, s: &Snapshot, params: &AlgorithmParams) -> Plan {
        plan(s, params)
    }
}

/// Deliberately wrong: every robot jumps onto the nearest robot it sees.
/// Used to check that the collision assertion fires.
#[derive(Debug, Clone, Copy, Default)]
pub struct Colliding;

impl Controller for Colliding {
    fn plan(&self, s: &Snapshot, _params: &AlgorithmParams) -> Plan {
        let target = s
            .others
            .iter()
            .map(|o| o.position)
            .min_by(|a, b| a.norm().total_cmp(&b.norm()));
        Plan {
            role: Role::Interior,
            decision: Decision {
                destination: target,
                new_light: Light::Red,
                terminate: false,
            },
            safe_zone: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move {
    pub index: usize,
    pub from: Point,
    pub to: Point,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightChange {
    pub index: usize,
    pub old: Light,
    pub new: Light,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Collision { i: usize, j: usize, distance: f64 },
    NonFinite { index: usize },
    /// Every robot terminated but the final state is not a solution.
    BadFinalState(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Collision { i, j, distance } => write!(f, "collision {i} {j} {distance:.16e}"),
            Violation::NonFinite { index } => write!(f, "non-finite {index}"),
            Violation::BadFinalState(msg) => write!(f, "final-state {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoundEvents {
    pub moves: Vec<Move>,
    pub light_changes: Vec<LightChange>,
    /// `None` for robots that had already terminated.
    pub roles: Vec<Option<Role>>,
    /// Safe zones in global coordinates.
    pub safe_zones: Vec<(usize, SafeZone)>,
    pub terminations: Vec<usize>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    MaxRoundsExceeded,
    Violation,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::MaxRoundsExceeded => "max-rounds-exceeded",
            Outcome::Violation => "violation",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Outcome {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "solved" => Ok(Outcome::Solved),
            "max-rounds-exceeded" => Ok(Outcome::MaxRoundsExceeded),
            "violation" => Ok(Outcome::Violation),
            other => Err(format!("unknown outcome {other:?}")),
        }
    }
}

/// One executed round: the configuration it started from and what happened.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub start: Configuration,
    pub events: RoundEvents,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub scenario: Scenario,
    pub rounds: Vec<RoundRecord>,
    pub final_config: Configuration,
    pub outcome: Outcome,
}

impl Trace {
    pub fn rounds_used(&self) -> usize {
        self.rounds.len()
    }
}

/// Per-run knobs the engine passes down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub algorithm: AlgorithmParams,
    pub samples: usize,
}

/// Execute one round: Look for all on the same configuration, Compute for
/// all, then apply every move at once.
pub fn step(
    config: &Configuration,
    frames: &[Frame],
    params: &StepParams,
    controller: &dyn Controller,
) -> (Configuration, RoundEvents) {
    let n = config.len();
    let matrix = visibility_matrix(&config.disks(), params.samples);
    let mut events = RoundEvents {
        roles: vec![None; n],
        ..RoundEvents::default()
    };
    let mut next = config.clone();
    next.round += 1;

    let mut targets: Vec<Point> = config.positions();
    for i in 0..n {
        let robot = config.robots[i];
        if robot.terminated {
            continue;
        }
        let seen: Vec<usize> = (0..n).filter(|&j| j != i && matrix[i][j]).collect();
        let frame = frames[i].anchored_at(robot.center);
        let snapshot = snapshot_from_visible(config, i, &frame, &seen);
        let pl = controller.plan(&snapshot, &params.algorithm);
        events.roles[i] = Some(pl.role);

        if let Some(dest) = pl.decision.destination {
            let to = to_global(&frame, dest);
            if !to.is_finite() {
                events.violations.push(Violation::NonFinite { index: i });
            } else if to != robot.center {
                targets[i] = to;
                events.moves.push(Move {
                    index: i,
                    from: robot.center,
                    to,
                });
            }
        }
        if let Some(zone) = pl.safe_zone {
            events.safe_zones.push((i, zone.map(|p| to_global(&frame, p))));
        }
        let new_light = pl.decision.new_light;
        if new_light != robot.light {
            events.light_changes.push(LightChange {
                index: i,
                old: robot.light,
                new: new_light,
            });
            next.robots[i].light = new_light;
        }
        if pl.decision.terminate {
            events.terminations.push(i);
            next.robots[i].terminated = true;
        }
    }

    for i in 0..n {
        for j in (i + 1)..n {
            let d = min_dist_moving(
                config.robots[i].center,
                targets[i],
                config.robots[j].center,
                targets[j],
            );
            if d < MIN_SEPARATION {
                events.violations.push(Violation::Collision { i, j, distance: d });
            }
        }
    }
    for (robot, &t) in next.robots.iter_mut().zip(&targets) {
        robot.center = t;
    }
    (next, events)
}

/// Solved-state test used for the run outcome.
pub fn is_solution(config: &Configuration) -> Result<(), String> {
    if let Some(i) = config.robots.iter().position(|r| r.light != Light::Red) {
        return Err(format!("robot {i} is not red"));
    }
    if !strictly_convex(&config.positions()) {
        return Err("not in strictly convex position".into());
    }
    Ok(())
}

/// Every point is a vertex of the convex hull.
pub fn strictly_convex(points: &[Point]) -> bool {
    match convex_hull(points) {
        Ok(h) => h.on_edge.is_empty() && h.interior.is_empty() && (h.degenerate_line.is_none() || points.len() <= 2),
        Err(_) => false,
    }
}

pub fn frames_for(scenario: &Scenario) -> Vec<Frame> {
    (0..scenario.len())
        .map(|i| make_frame(scenario.seed, i, scenario.frames))
        .collect()
}

/// Run the algorithm on `scenario` until everyone terminates or the round
/// budget runs out.
pub fn run(scenario: &Scenario) -> Trace {
    run_with(scenario, &Standard)
}

/// Panics if the scenario's initial configuration is invalid; use
/// [`Scenario::validate`] first on untrusted input.
pub fn run_with(scenario: &Scenario, controller: &dyn Controller) -> Trace {
    let mut config = scenario.validate().expect("invalid scenario");
    let frames = frames_for(scenario);
    let params = StepParams {
        algorithm: AlgorithmParams {
            predict: scenario.predict,
        },
        samples: scenario.samples,
    };
    let mut rounds = Vec::new();
    let mut outcome = Outcome::MaxRoundsExceeded;
    for _ in 0..scenario.max_rounds {
        if config.all_terminated() {
            break;
        }
        let (next, mut events) = step(&config, &frames, &params, controller);
        let violated = !events.violations.is_empty();
        if !violated && next.all_terminated() {
            if let Err(msg) = is_solution(&next) {
                events.violations.push(Violation::BadFinalState(msg));
            }
        }
        let violated = !events.violations.is_empty();
        rounds.push(RoundRecord {
            start: std::mem::replace(&mut config, next),
            events,
        });
        if violated {
            outcome = Outcome::Violation;
            break;
        }
    }
    if outcome != Outcome::Violation && config.all_terminated() {
        outcome = Outcome::Solved;
    }
    Trace {
        scenario: scenario.clone(),
        rounds,
        final_config: config,
        outcome,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinalReport {
    pub mutually_visible: bool,
    pub all_red: bool,
    pub strictly_convex: bool,
    pub spacing: bool,
}

impl FinalReport {
    pub fn passed(&self) -> bool {
        self.mutually_visible && self.all_red && self.strictly_convex && self.spacing
    }
}

/// Independent check of a final configuration.
pub fn check_final(config: &Configuration) -> FinalReport {
    let positions = config.positions();
    let disks = config.disks();
    let n = positions.len();
    let mutually_visible =
        (0..n).all(|i| ((i + 1)..n).all(|j| visibility_oracle(i, j, &disks, ORACLE_SAMPLES)));
    FinalReport {
        mutually_visible,
        all_red: config.robots.iter().all(|r| r.light == Light::Red),
        strictly_convex: strictly_convex(&positions),
        spacing: config.closest_pair().is_none_or(|(_, _, d)| d >= MIN_SEPARATION),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hull_perimeter;

    fn scenario(pts: &[(f64, f64)]) -> Scenario {
        Scenario::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect(), 0)
    }

    #[test]
    fn single_robot_terminates_in_one_round() {
        let t = run(&scenario(&[(2.0, 3.0)]));
        assert_eq!(t.outcome, Outcome::Solved);
        assert_eq!(t.rounds_used(), 1);
        assert!(t.final_config.robots[0].terminated);
        assert_eq!(t.final_config.robots[0].light, Light::Red);
    }

    #[test]
    fn two_robots_finish_quickly() {
        let t = run(&scenario(&[(0.0, 0.0), (3.0, 0.0)]));
        assert_eq!(t.outcome, Outcome::Solved);
        assert!(t.rounds_used() <= 3);
        assert!(check_final(&t.final_config).passed());
    }

    #[test]
    fn three_in_a_row() {
        let t = run(&scenario(&[(0.0, 0.0), (2.0, 0.0), (4.0, 0.0)]));
        assert_eq!(t.outcome, Outcome::Solved, "{:?}", t.rounds.last().map(|r| &r.events));
        assert!(t.rounds_used() <= 5);
    }

    #[test]
    fn square_with_side_robots_loses_them_after_one_round() {
        let t = run(&scenario(&[
            (0.0, 0.0),
            (10.0, 0.0),
            (10.0, 10.0),
            (0.0, 10.0),
            (4.0, 0.0),
            (10.0, 6.0),
        ]));
        assert!(t.rounds.len() >= 2);
        assert!(t.rounds[1..]
            .iter()
            .all(|r| r.events.roles.iter().all(|&role| role != Some(Role::Side))));
        assert_eq!(t.outcome, Outcome::Solved);
        assert!(check_final(&t.final_config).passed());
    }

    #[test]
    fn colliding_controller_is_caught() {
        let t = run_with(&scenario(&[(0.0, 0.0), (3.0, 0.0)]), &Colliding);
        assert_eq!(t.outcome, Outcome::Violation);
        assert!(matches!(
            t.rounds[0].events.violations[0],
            Violation::Collision { i: 0, j: 1, .. }
        ));
    }

    #[test]
    fn runs_are_deterministic() {
        let s = crate::scenario::generate(9, 4, 9.0, false).unwrap();
        assert_eq!(run(&s), run(&s));
    }

    #[test]
    fn perimeter_grows_with_corners() {
        let s = scenario(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0), (5.0, 5.0)]);
        let t = run(&s);
        let per = |c: &Configuration| {
            let p = c.positions();
            hull_perimeter(&p, &convex_hull(&p).unwrap())
        };
        assert!(per(&t.rounds[1].start) - per(&t.rounds[0].start) >= 1.0);
        assert_eq!(t.outcome, Outcome::Solved);
    }

    #[test]
    fn check_final_examples() {
        let pentagon: Vec<Point> = (0..5)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 5.0;
                // circumradius for side 5
                let r = 5.0 / (2.0 * (std::f64::consts::PI / 5.0).sin());
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let mut c = Configuration::initial(&pentagon).unwrap();
        for r in &mut c.robots {
            r.light = Light::Red;
        }
        assert!(check_final(&c).passed());
        c.robots[2].light = Light::Off;
        let rep = check_final(&c);
        assert!(!rep.all_red && rep.mutually_visible);

        let mut sq = Configuration::initial(&[
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 4.0),
            Point::new(0.0, 4.0),
            Point::new(2.0, 2.0),
        ])
        .unwrap();
        for r in &mut sq.robots {
            r.light = Light::Red;
        }
        let rep = check_final(&sq);
        assert!(!rep.mutually_visible && !rep.strictly_convex);
        assert!(rep.all_red && rep.spacing);
    }
}
