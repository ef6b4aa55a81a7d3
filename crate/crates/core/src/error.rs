use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate ray: angle endpoint coincides with the apex")]
    DegenerateRay,
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("vertex is not a strict corner of its neighbors")]
    NotACorner,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgorithmError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("snapshot does not support the side ordering: {0}")]
    MalformedSide(&'static str),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FormatError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("need n >= 1")]
    Empty,
    #[error("spread {spread} is below sqrt(n) = {min}")]
    SpreadTooSmall { spread: f64, min: f64 },
    #[error("could not place {n} robots after {attempts} attempts")]
    Infeasible { n: usize, attempts: u64 },
}
