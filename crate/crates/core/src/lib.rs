//! Simulator and verification harness for two-color mutual visibility of
//! unit-disk robots under a fully synchronous Look-Compute-Move schedule.

pub mod algorithm;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod model;
pub mod render;
pub mod scenario;
pub mod trace;
pub mod verify;
pub mod visibility;

pub use engine::{check_final, run, Outcome, Trace};
pub use error::{AlgorithmError, FormatError, GenerateError, GeomError};
pub use geometry::Point;
pub use model::{Configuration, Decision, Frame, FramePolicy, Light, Robot, Snapshot};
pub use scenario::{generate, Scenario};
pub use trace::TraceFile;
pub use verify::{verify, Report};
