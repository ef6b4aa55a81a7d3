//! Scenario generation and the scenario file format.
//!
//! ```text
//! mutvis-scenario 1
//! n 3
//! seed 7
//! frames rotated
//! predict true
//! k 64
//! max_rounds 40
//! 0.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FormatError, GenerateError};
use crate::geometry::Point;
use crate::model::{Configuration, FramePolicy};
use crate::visibility::DEFAULT_SAMPLES;

pub const SCENARIO_HEADER: &str = "mutvis-scenario 1";
/// Pairwise distance enforced by the generator.
pub const GENERATED_SEPARATION: f64 = 1.0 + 1e-6;
pub const MAX_ATTEMPTS: u64 = 1_000_000;

pub fn default_max_rounds(n: usize) -> u64 {
    10 * n as u64 + 10
}

/// Default side of the sampling square for `n` robots.
pub fn default_spread(n: usize) -> f64 {
    3.0 * (n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub positions: Vec<Point>,
    pub seed: u64,
    pub frames: FramePolicy,
    pub predict: bool,
    pub samples: usize,
    pub max_rounds: u64,
}

impl Scenario {
    pub fn new(positions: Vec<Point>, seed: u64) -> Self {
        let max_rounds = default_max_rounds(positions.len());
        Scenario {
            positions,
            seed,
            frames: FramePolicy::Rotated,
            predict: true,
            samples: DEFAULT_SAMPLES,
            max_rounds,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn validate(&self) -> Result<Configuration, FormatError> {
        if self.max_rounds == 0 {
            return Err(FormatError::Invalid("max_rounds must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(FormatError::Invalid("k must be at least 1".into()));
        }
        Configuration::initial(&self.positions).map_err(FormatError::Invalid)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{SCENARIO_HEADER}");
        let _ = writeln!(out, "n {}", self.positions.len());
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "frames {}", self.frames);
        let _ = writeln!(out, "predict {}", self.predict);
        let _ = writeln!(out, "k {}", self.samples);
        let _ = writeln!(out, "max_rounds {}", self.max_rounds);
        for p in &self.positions {
            let _ = writeln!(out, "{:.16e} {:.16e}", p.x, p.y);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        match lines.next() {
            Some((_, SCENARIO_HEADER)) => {}
            Some((no, other)) => return Err(FormatError::parse(no, format!("expected {SCENARIO_HEADER:?}, got {other:?}"))),
            None => return Err(FormatError::parse(1, "empty scenario")),
        }
        let mut field = |key: &str| -> Result<(usize, String), FormatError> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| FormatError::parse(0, format!("missing {key}")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(FormatError::parse(no, format!("expected {key}")));
            }
            let value = parts
                .next()
                .ok_or_else(|| FormatError::parse(no, format!("{key} has no value")))?;
            if parts.next().is_some() {
                return Err(FormatError::parse(no, "trailing tokens"));
            }
            Ok((no, value.to_string()))
        };
        let (no, v) = field("n")?;
        let n: usize = v.parse().map_err(|_| FormatError::parse(no, "bad n"))?;
        let (no, v) = field("seed")?;
        let seed: u64 = v.parse().map_err(|_| FormatError::parse(no, "bad seed"))?;
        let (no, v) = field("frames")?;
        let frames: FramePolicy = v.parse().map_err(|e: String| FormatError::parse(no, e))?;
        let (no, v) = field("predict")?;
        let predict: bool = v.parse().map_err(|_| FormatError::parse(no, "predict must be true or false"))?;
        let (no, v) = field("k")?;
        let samples: usize = v.parse().map_err(|_| FormatError::parse(no, "bad k"))?;
        let (no, v) = field("max_rounds")?;
        let max_rounds: u64 = v.parse().map_err(|_| FormatError::parse(no, "bad max_rounds"))?;

        let mut positions = Vec::with_capacity(n);
        for (no, line) in lines {
            let coords: Vec<&str> = line.split_whitespace().collect();
            if coords.len() != 2 {
                return Err(FormatError::parse(no, "expected \"x y\""));
            }
            let x: f64 = coords[0].parse().map_err(|_| FormatError::parse(no, "bad x"))?;
            let y: f64 = coords[1].parse().map_err(|_| FormatError::parse(no, "bad y"))?;
            if !x.is_finite() || !y.is_finite() {
                return Err(FormatError::parse(no, "non-finite coordinate"));
            }
            positions.push(Point::new(x, y));
        }
        if positions.len() != n {
            return Err(FormatError::Invalid(format!(
                "header says n = {n} but {} positions follow",
                positions.len()
            )));
        }
        let scenario = Scenario {
            positions,
            seed,
            frames,
            predict,
            samples,
            max_rounds,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Random scenario: `n` robots uniform in `[0, spread]^2`, or on the x-axis
/// with gaps of `1.5 + U(0, 1)` when `collinear` is set.
pub fn generate(n: usize, seed: u64, spread: f64, collinear: bool) -> Result<Scenario, GenerateError> {
    if n == 0 {
        return Err(GenerateError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if collinear {
        let mut x = 0.0;
        let mut positions = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                x += 1.5 + rng.gen::<f64>();
            }
            positions.push(Point::new(x, 0.0));
        }
        return Ok(Scenario::new(positions, seed));
    }
    let min = (n as f64).sqrt();
    if !(spread >= min) {
        return Err(GenerateError::SpreadTooSmall { spread, min });
    }
    let mut positions: Vec<Point> = Vec::with_capacity(n);
    let mut attempts = 0u64;
    while positions.len() < n {
        if attempts >= MAX_ATTEMPTS {
            return Err(GenerateError::Infeasible { n, attempts });
        }
        attempts += 1;
        let p = Point::new(rng.gen_range(0.0..=spread), rng.gen_range(0.0..=spread));
        if positions.iter().all(|q| q.dist(p) >= GENERATED_SEPARATION) {
            positions.push(p);
        }
    }
    Ok(Scenario::new(positions, seed))
}
