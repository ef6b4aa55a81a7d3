//! The trace file format.
//!
//! ```text
//! mutvis-trace 1
//! scenario n=2 seed=0 frames=rotated predict=true k=64 max_rounds=30
//! round 1
//! robot 0 <x> <y> off line 0
//! robot 1 <x> <y> off line 0
//! move 0 <x0> <y0> <x1> <y1>
//! light 0 off red
//! ...
//! final
//! robot 0 <x> <y> red - 1
//! outcome solved rounds=2
//! ```
//!
//! Robot lines under `round k` hold the state at the start of round `k` and
//! the role computed in that round (`-` once terminated). Other event kinds
//! are `safezone <id>` followed by the previous vertex, the edge endpoints,
//! the next vertex and the destination, `terminate <id>` and
//! `violation <text>`. Coordinates use 17 significant digits.
//!
//! Light and role tokens are kept as text so that a verifier can report
//! unexpected values instead of failing to parse.

use std::fmt::Write as _;
use std::path::Path;

use crate::algorithm::SafeZone;
use crate::engine::{RoundRecord, Trace};
use crate::error::FormatError;
use crate::geometry::Point;
use crate::model::{Configuration, FramePolicy};

pub const TRACE_HEADER: &str = "mutvis-trace 1";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceHeader {
    pub n: usize,
    pub seed: u64,
    pub frames: FramePolicy,
    pub predict: bool,
    pub samples: usize,
    pub max_rounds: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotLine {
    pub id: usize,
    pub position: Point,
    pub light: String,
    pub role: String,
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    Move { id: usize, from: Point, to: Point },
    Light { id: usize, old: String, new: String },
    SafeZone { id: usize, zone: SafeZone },
    Terminate { id: usize },
    Violation(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRound {
    pub index: u64,
    pub robots: Vec<RobotLine>,
    pub events: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub header: TraceHeader,
    pub rounds: Vec<TraceRound>,
    pub final_robots: Vec<RobotLine>,
    pub outcome: String,
    pub rounds_used: u64,
}

fn robot_lines(config: &Configuration, roles: Option<&[Option<crate::algorithm::Role>]>) -> Vec<RobotLine> {
    config
        .robots
        .iter()
        .enumerate()
        .map(|(id, r)| RobotLine {
            id,
            position: r.center,
            light: r.light.to_string(),
            role: roles
                .and_then(|rs| rs[id])
                .map_or_else(|| "-".to_string(), |role| role.to_string()),
            terminated: r.terminated,
        })
        .collect()
}

fn round_of(record: &RoundRecord) -> TraceRound {
    let ev = &record.events;
    let mut events = Vec::new();
    for m in &ev.moves {
        events.push(TraceEvent::Move {
            id: m.index,
            from: m.from,
            to: m.to,
        });
    }
    for l in &ev.light_changes {
        events.push(TraceEvent::Light {
            id: l.index,
            old: l.old.to_string(),
            new: l.new.to_string(),
        });
    }
    for &(id, zone) in &ev.safe_zones {
        events.push(TraceEvent::SafeZone { id, zone });
    }
    for &id in &ev.terminations {
        events.push(TraceEvent::Terminate { id });
    }
    for v in &ev.violations {
        events.push(TraceEvent::Violation(v.to_string()));
    }
    TraceRound {
        index: record.start.round + 1,
        robots: robot_lines(&record.start, Some(&ev.roles)),
        events,
    }
}

impl From<&Trace> for TraceFile {
    fn from(t: &Trace) -> Self {
        let s = &t.scenario;
        TraceFile {
            header: TraceHeader {
                n: s.len(),
                seed: s.seed,
                frames: s.frames,
                predict: s.predict,
                samples: s.samples,
                max_rounds: s.max_rounds,
            },
            rounds: t.rounds.iter().map(round_of).collect(),
            final_robots: robot_lines(&t.final_config, None),
            outcome: t.outcome.to_string(),
            rounds_used: t.rounds.len() as u64,
        }
    }
}

fn num(out: &mut String, v: f64) {
    let _ = write!(out, " {v:.16e}");
}

fn point(out: &mut String, p: Point) {
    num(out, p.x);
    num(out, p.y);
}

fn write_robot(out: &mut String, r: &RobotLine) {
    let _ = write!(out, "robot {}", r.id);
    point(out, r.position);
    let _ = writeln!(out, " {} {} {}", r.light, r.role, u8::from(r.terminated));
}

impl TraceFile {
    pub fn to_text(&self) -> String {
        let h = &self.header;
        let mut out = String::new();
        let _ = writeln!(out, "{TRACE_HEADER}");
        let _ = writeln!(
            out,
            "scenario n={} seed={} frames={} predict={} k={} max_rounds={}",
            h.n, h.seed, h.frames, h.predict, h.samples, h.max_rounds
        );
        for round in &self.rounds {
            let _ = writeln!(out, "round {}", round.index);
            for r in &round.robots {
                write_robot(&mut out, r);
            }
            for e in &round.events {
                match e {
                    TraceEvent::Move { id, from, to } => {
                        let _ = write!(out, "move {id}");
                        point(&mut out, *from);
                        point(&mut out, *to);
                    }
                    TraceEvent::Light { id, old, new } => {
                        let _ = write!(out, "light {id} {old} {new}");
                    }
                    TraceEvent::SafeZone { id, zone } => {
                        let _ = write!(out, "safezone {id}");
                        for p in [zone.prev, zone.a, zone.b, zone.next, zone.destination] {
                            point(&mut out, p);
                        }
                    }
                    TraceEvent::Terminate { id } => {
                        let _ = write!(out, "terminate {id}");
                    }
                    TraceEvent::Violation(text) => {
                        let _ = write!(out, "violation {text}");
                    }
                }
                out.push('\n');
            }
        }
        let _ = writeln!(out, "final");
        for r in &self.final_robots {
            write_robot(&mut out, r);
        }
        let _ = writeln!(out, "outcome {} rounds={}", self.outcome, self.rounds_used);
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Parser::new(text).file()
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Robot states in order: the start of every round, then the final state.
    pub fn states(&self) -> Vec<&[RobotLine]> {
        self.rounds
            .iter()
            .map(|r| r.robots.as_slice())
            .chain(std::iter::once(self.final_robots.as_slice()))
            .collect()
    }
}

struct Parser<'a> {
    lines: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn parse_at<T: std::str::FromStr>(no: usize, tok: Option<&&str>, what: &str) -> Result<T, FormatError> {
    tok.ok_or_else(|| FormatError::parse(no, format!("missing {what}")))?
        .parse()
        .map_err(|_| FormatError::parse(no, format!("bad {what}")))
}

fn parse_point(no: usize, toks: &[&str], at: usize) -> Result<Point, FormatError> {
    let x: f64 = parse_at(no, toks.get(at), "x")?;
    let y: f64 = parse_at(no, toks.get(at + 1), "y")?;
    Ok(Point::new(x, y))
}

fn key_value<'t>(no: usize, tok: Option<&&'t str>, key: &str) -> Result<&'t str, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::parse(no, format!("missing {key}")))?;
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| FormatError::parse(no, format!("expected {key}=...")))
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Parser { lines: it.peekable() }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        self.lines
            .next()
            .ok_or_else(|| FormatError::parse(0, format!("unexpected end of trace, expected {what}")))
    }

    fn file(mut self) -> Result<TraceFile, FormatError> {
        let (no, line) = self.next_line("header")?;
        if line != TRACE_HEADER {
            return Err(FormatError::parse(no, format!("expected {TRACE_HEADER:?}")));
        }
        let header = self.header()?;
        let mut rounds = Vec::new();
        loop {
            let (no, line) = self.next_line("round or final")?;
            let toks = tokens(line);
            match toks.first().copied() {
                Some("round") => {
                    let index: u64 = parse_at(no, toks.get(1), "round index")?;
                    rounds.push(self.round(index)?);
                }
                Some("final") => break,
                _ => return Err(FormatError::parse(no, format!("unexpected line {line:?}"))),
            }
        }
        let final_robots = self.robots()?;
        let (no, line) = self.next_line("outcome")?;
        let toks = tokens(line);
        if toks.first() != Some(&"outcome") || toks.len() != 3 {
            return Err(FormatError::parse(no, "expected \"outcome <name> rounds=<k>\""));
        }
        let rounds_used: u64 = key_value(no, toks.get(2), "rounds")?
            .parse()
            .map_err(|_| FormatError::parse(no, "bad rounds"))?;
        if let Some((no, _)) = self.lines.next() {
            return Err(FormatError::parse(no, "trailing content after outcome"));
        }
        Ok(TraceFile {
            header,
            rounds,
            final_robots,
            outcome: toks[1].to_string(),
            rounds_used,
        })
    }

    fn header(&mut self) -> Result<TraceHeader, FormatError> {
        let (no, line) = self.next_line("scenario line")?;
        let toks = tokens(line);
        if toks.first() != Some(&"scenario") || toks.len() != 7 {
            return Err(FormatError::parse(no, "malformed scenario line"));
        }
        let bad = |what: &str| FormatError::parse(no, format!("bad {what}"));
        Ok(TraceHeader {
            n: key_value(no, toks.get(1), "n")?.parse().map_err(|_| bad("n"))?,
            seed: key_value(no, toks.get(2), "seed")?.parse().map_err(|_| bad("seed"))?,
            frames: key_value(no, toks.get(3), "frames")?.parse().map_err(|_| bad("frames"))?,
            predict: key_value(no, toks.get(4), "predict")?.parse().map_err(|_| bad("predict"))?,
            samples: key_value(no, toks.get(5), "k")?.parse().map_err(|_| bad("k"))?,
            max_rounds: key_value(no, toks.get(6), "max_rounds")?
                .parse()
                .map_err(|_| bad("max_rounds"))?,
        })
    }

    fn robots(&mut self) -> Result<Vec<RobotLine>, FormatError> {
        let mut out = Vec::new();
        while let Some(&(no, line)) = self.lines.peek() {
            let toks = tokens(line);
            if toks.first() != Some(&"robot") {
                break;
            }
            self.lines.next();
            if toks.len() != 7 {
                return Err(FormatError::parse(no, "robot line needs 6 fields"));
            }
            let terminated = match toks[6] {
                "0" => false,
                "1" => true,
                _ => return Err(FormatError::parse(no, "terminated flag must be 0 or 1")),
            };
            out.push(RobotLine {
                id: parse_at(no, toks.get(1), "robot id")?,
                position: parse_point(no, &toks, 2)?,
                light: toks[4].to_string(),
                role: toks[5].to_string(),
                terminated,
            });
        }
        Ok(out)
    }

    fn round(&mut self, index: u64) -> Result<TraceRound, FormatError> {
        let robots = self.robots()?;
        let mut events = Vec::new();
        while let Some(&(no, line)) = self.lines.peek() {
            let toks = tokens(line);
            let event = match toks.first().copied() {
                Some("move") if toks.len() == 6 => TraceEvent::Move {
                    id: parse_at(no, toks.get(1), "id")?,
                    from: parse_point(no, &toks, 2)?,
                    to: parse_point(no, &toks, 4)?,
                },
                Some("light") if toks.len() == 4 => TraceEvent::Light {
                    id: parse_at(no, toks.get(1), "id")?,
                    old: toks[2].to_string(),
                    new: toks[3].to_string(),
                },
                Some("safezone") if toks.len() == 12 => TraceEvent::SafeZone {
                    id: parse_at(no, toks.get(1), "id")?,
                    zone: SafeZone {
                        prev: parse_point(no, &toks, 2)?,
                        a: parse_point(no, &toks, 4)?,
                        b: parse_point(no, &toks, 6)?,
                        next: parse_point(no, &toks, 8)?,
                        destination: parse_point(no, &toks, 10)?,
                    },
                },
                Some("terminate") if toks.len() == 2 => TraceEvent::Terminate {
                    id: parse_at(no, toks.get(1), "id")?,
                },
                Some("violation") => TraceEvent::Violation(toks[1..].join(" ")),
                Some("round") | Some("final") => break,
                _ => return Err(FormatError::parse(no, format!("malformed event {line:?}"))),
            };
            self.lines.next();
            events.push(event);
        }
        Ok(TraceRound { index, robots, events })
    }
}
