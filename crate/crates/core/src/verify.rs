//! Independent post-hoc checks of a trace file.
//!
//! Nothing here reuses engine state: every check is recomputed from the
//! positions, lights and events written in the trace.

use std::fmt;

use crate::engine::strictly_convex;
use crate::geometry::{convex_hull, hull_perimeter, min_dist_moving, Point};
use crate::model::MIN_SEPARATION;
use crate::trace::{RobotLine, TraceEvent, TraceFile};
use crate::visibility::{visibility_oracle, DiskSet, ORACLE_SAMPLES};

/// Required perimeter increase per round while Off robots remain.
pub const HULL_GROWTH: f64 = 1.0;
pub const HULL_GROWTH_TOL: f64 = 1e-6;
/// Angle slack allowed in the safe-zone bounds, degrees.
pub const SAFE_ZONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Smallest closest approach seen over all motions.
    pub min_motion_distance: f64,
    pub rounds: u64,
    pub n: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<20} {}  {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            )?;
        }
        Ok(())
    }
}

fn check(name: &'static str, failure: Option<String>, ok: String) -> Check {
    match failure {
        Some(detail) => Check {
            name,
            passed: false,
            detail,
        },
        None => Check {
            name,
            passed: true,
            detail: ok,
        },
    }
}

fn positions(robots: &[RobotLine]) -> Vec<Point> {
    robots.iter().map(|r| r.position).collect()
}

fn perimeter(robots: &[RobotLine]) -> Option<f64> {
    let pts = positions(robots);
    convex_hull(&pts).ok().map(|h| hull_perimeter(&pts, &h))
}

pub fn verify(trace: &TraceFile) -> Report {
    let n = trace.header.n;
    let states = trace.states();
    let mut checks = Vec::new();

    // shape
    let mut shape = None;
    if let Some((k, s)) = states.iter().enumerate().find(|(_, s)| s.len() != n) {
        shape = Some(format!("state {k} has {} robots, header says {n}", s.len()));
    } else if trace.rounds_used != trace.rounds.len() as u64 {
        shape = Some(format!(
            "outcome says {} rounds, trace has {}",
            trace.rounds_used,
            trace.rounds.len()
        ));
    } else if let Some(r) = trace
        .rounds
        .iter()
        .enumerate()
        .find(|(k, r)| r.index != *k as u64 + 1)
    {
        shape = Some(format!("round {} out of sequence", r.1.index));
    }
    checks.push(check("trace shape", shape, format!("{} states of {n} robots", states.len())));

    // pairwise distance at every round boundary
    let mut worst = f64::INFINITY;
    let mut spacing = None;
    for (k, s) in states.iter().enumerate() {
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let d = s[i].position.dist(s[j].position);
                worst = worst.min(d);
                if d < MIN_SEPARATION && spacing.is_none() {
                    spacing = Some(format!("state {k}: robots {i},{j} at distance {d:.12}"));
                }
            }
        }
    }
    checks.push(check("pairwise distance", spacing, format!("min {worst:.9}")));

    // closest approach along the straight motions between states
    let mut min_motion = f64::INFINITY;
    let mut motion = None;
    for (k, w) in states.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if a.len() != b.len() {
            continue;
        }
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                let d = min_dist_moving(a[i].position, b[i].position, a[j].position, b[j].position);
                min_motion = min_motion.min(d);
                if d < MIN_SEPARATION && motion.is_none() {
                    motion = Some(format!("round {}: robots {i},{j} come within {d:.12}", k + 1));
                }
            }
        }
    }
    checks.push(check("motion clearance", motion, format!("min {min_motion:.9}")));

    // colors
    let allowed = |l: &str| l == "off" || l == "red";
    let mut colors = None;
    'outer: for (k, s) in states.iter().enumerate() {
        for r in s.iter() {
            if !allowed(&r.light) {
                colors = Some(format!("state {k}: robot {} has light {:?}", r.id, r.light));
                break 'outer;
            }
        }
    }
    if colors.is_none() {
        for round in &trace.rounds {
            for e in &round.events {
                if let TraceEvent::Light { id, old, new } = e {
                    if !allowed(old) || !allowed(new) {
                        colors = Some(format!("round {}: robot {id} light {old} -> {new}", round.index));
                    }
                }
            }
        }
    }
    checks.push(check("two colors", colors, "only off and red".into()));

    // lights only go off -> red; terminated robots are frozen
    let mut monotone = None;
    for (k, w) in states.windows(2).enumerate() {
        for (a, b) in w[0].iter().zip(w[1].iter()) {
            if a.light == "red" && b.light != "red" {
                monotone = Some(format!("round {}: robot {} turned {}", k + 1, a.id, b.light));
            } else if a.terminated && (a.position != b.position || a.light != b.light || !b.terminated) {
                monotone = Some(format!("round {}: terminated robot {} changed", k + 1, a.id));
            }
        }
    }
    checks.push(check("light monotone", monotone, "no red->off, terminated frozen".into()));

    // no robot is a side robot from round 2 on
    let late_sides: Vec<String> = trace
        .rounds
        .iter()
        .filter(|r| r.index >= 2)
        .flat_map(|r| {
            r.robots
                .iter()
                .filter(|x| x.role == "side")
                .map(move |x| format!("round {} robot {}", r.index, x.id))
        })
        .collect();
    checks.push(check(
        "side depletion",
        (!late_sides.is_empty()).then(|| late_sides.join(", ")),
        "no side robots after round 1".into(),
    ));

    // perimeter grows while Off robots remain
    let mut growth = None;
    let mut least_growth = f64::INFINITY;
    for (k, w) in states.windows(2).enumerate() {
        let round = k + 1;
        if round < 2 || !w[0].iter().any(|r| r.light == "off") {
            continue;
        }
        match (perimeter(w[0]), perimeter(w[1])) {
            (Some(p0), Some(p1)) => {
                least_growth = least_growth.min(p1 - p0);
                if p1 - p0 < HULL_GROWTH - HULL_GROWTH_TOL && growth.is_none() {
                    growth = Some(format!("round {round}: perimeter {p0:.6} -> {p1:.6}"));
                }
            }
            _ => growth = growth.or(Some(format!("round {round}: hull undefined"))),
        }
    }
    checks.push(check(
        "hull growth",
        growth,
        if least_growth.is_finite() {
            format!("min increase {least_growth:.6}")
        } else {
            "no rounds with off robots after round 1".into()
        },
    ));

    // safe-zone bounds for every side and interior destination
    let mut zones = 0usize;
    let mut zone_fail = None;
    let mut least_slack = f64::INFINITY;
    for round in &trace.rounds {
        for e in &round.events {
            if let TraceEvent::SafeZone { id, zone } = e {
                zones += 1;
                let (sa, sb) = zone.slack();
                least_slack = least_slack.min(sa.min(sb));
                let moved_there = round.events.iter().any(
                    |m| matches!(m, TraceEvent::Move { id: mid, to, .. } if mid == id && *to == zone.destination),
                );
                if zone_fail.is_none() {
                    if sa < -SAFE_ZONE_TOL || sb < -SAFE_ZONE_TOL {
                        zone_fail = Some(format!("round {} robot {id}: slack {sa:.3e}, {sb:.3e}", round.index));
                    } else if !zone.outward() {
                        zone_fail = Some(format!("round {} robot {id}: destination not outside the edge", round.index));
                    } else if !moved_there {
                        zone_fail = Some(format!("round {} robot {id}: no matching move", round.index));
                    }
                }
            }
        }
    }
    checks.push(check(
        "safe zone",
        zone_fail,
        if zones > 0 {
            format!("{zones} destinations, min slack {least_slack:.3e} deg")
        } else {
            "no side or interior moves".into()
        },
    ));

    // no recorded violations
    let violations: Vec<String> = trace
        .rounds
        .iter()
        .flat_map(|r| {
            r.events.iter().filter_map(move |e| match e {
                TraceEvent::Violation(t) => Some(format!("round {}: {t}", r.index)),
                _ => None,
            })
        })
        .collect();
    checks.push(check(
        "no violations",
        (!violations.is_empty()).then(|| violations.join("; ")),
        "none recorded".into(),
    ));

    // round budget
    let bound = 10 * n as u64 + 10;
    checks.push(check(
        "round bound",
        (trace.rounds_used > bound).then(|| format!("{} rounds > {bound}", trace.rounds_used)),
        format!("{} rounds <= {bound}", trace.rounds_used),
    ));

    // final state
    let fin = &trace.final_robots;
    let pts = positions(fin);
    let mut final_state = None;
    if trace.outcome != "solved" {
        final_state = Some(format!("outcome {}", trace.outcome));
    } else if let Some(r) = fin.iter().find(|r| r.light != "red" || !r.terminated) {
        final_state = Some(format!("robot {} is {} terminated={}", r.id, r.light, r.terminated));
    } else if !strictly_convex(&pts) {
        final_state = Some("not in strictly convex position".into());
    }
    checks.push(check("final state", final_state, "all red, terminated, convex".into()));

    let disks = DiskSet::new(pts.clone());
    let mut hidden = None;
    'vis: for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if !visibility_oracle(i, j, &disks, ORACLE_SAMPLES) {
                hidden = Some(format!("robots {i} and {j} do not see each other"));
                break 'vis;
            }
        }
    }
    checks.push(check("final visibility", hidden, "all pairs visible".into()));

    Report {
        checks,
        min_motion_distance: min_motion,
        rounds: trace.rounds_used,
        n,
    }
}
