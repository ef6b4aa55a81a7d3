//! SVG frames of a trace, one per round.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::FormatError;
use crate::geometry::{convex_hull, Point};
use crate::trace::{RobotLine, TraceFile};
use crate::visibility::ROBOT_RADIUS;

const MARGIN: f64 = 1.5;
const PX_PER_UNIT: f64 = 20.0;

/// World-space box shared by all frames of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub min: Point,
    pub max: Point,
}

impl Viewport {
    pub fn of(trace: &TraceFile) -> Viewport {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for state in trace.states() {
            for r in state {
                min = Point::new(min.x.min(r.position.x), min.y.min(r.position.y));
                max = Point::new(max.x.max(r.position.x), max.y.max(r.position.y));
            }
        }
        if !min.is_finite() {
            min = Point::ORIGIN;
            max = Point::ORIGIN;
        }
        Viewport {
            min: min - Point::new(MARGIN, MARGIN),
            max: max + Point::new(MARGIN, MARGIN),
        }
    }

    fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// One frame. `y` is flipped so that the picture matches the usual axes.
pub fn render_state(robots: &[RobotLine], view: &Viewport, title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        view.width() * PX_PER_UNIT,
        view.height() * PX_PER_UNIT,
        view.min.x,
        -view.max.y,
        view.width(),
        view.height()
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(
        out,
        r#"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="white"/>"#,
        view.min.x,
        -view.max.y,
        view.width(),
        view.height()
    );
    let pts: Vec<Point> = robots.iter().map(|r| r.position).collect();
    if let Ok(hull) = convex_hull(&pts) {
        if hull.vertices.len() >= 2 {
            let coords: Vec<String> = hull
                .vertices
                .iter()
                .map(|&v| format!("{:.6},{:.6}", pts[v].x, -pts[v].y))
                .collect();
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="none" stroke="black" stroke-width="0.05" stroke-dasharray="0.3 0.2"/>"#,
                coords.join(" ")
            );
        }
    }
    for r in robots {
        let fill = match r.light.as_str() {
            "red" => "red",
            "off" => "gray",
            _ => "blue",
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{ROBOT_RADIUS}" fill="{fill}" stroke="black" stroke-width="0.03"/>"#,
            r.position.x, -r.position.y
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Writes `round_0001.svg`, ... with the state after each round.
pub fn render_trace(trace: &TraceFile, dir: &Path) -> Result<Vec<PathBuf>, FormatError> {
    std::fs::create_dir_all(dir)?;
    let view = Viewport::of(trace);
    let states = trace.states();
    let mut written = Vec::new();
    for (k, state) in states.iter().enumerate().skip(1) {
        let path = dir.join(format!("round_{k:04}.svg"));
        std::fs::write(&path, render_state(state, &view, &format!("after round {k}")))?;
        written.push(path);
    }
    Ok(written)
}
