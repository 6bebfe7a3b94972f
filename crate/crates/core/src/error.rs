use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: &'static str,
    },

    /// A homography denominator vanished: the point left the chart.
    #[error("singular action: denominator {denominator:e} at or below threshold")]
    SingularAction { denominator: f64 },

    /// A group element lies outside the second-kind canonical chart.
    #[error("group element outside the canonical chart: {0}")]
    OutsideChart(&'static str),

    #[error("flow pole: 1 - lambda * x = {0:e}")]
    FlowPole(f64),

    #[error("degenerate superposition data: {0}")]
    Degenerate(&'static str),

    #[error("matrix path has no analytic derivatives and finite-difference fallback is disabled")]
    MissingDerivative,

    #[error("singular matrix")]
    SingularMatrix,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    /// Failure inside a trajectory solve, tagged with the step that failed.
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tags the error with a trajectory step unless it already carries one.
    pub fn at_step(self, step: usize) -> Error {
        match self {
            e @ Error::AtStep { .. } => e,
            e => Error::AtStep {
                step,
                source: Box::new(e),
            },
        }
    }

    /// True for errors that mean the numerical state left the domain where
    /// the group action is defined.
    pub fn is_chart_violation(&self) -> bool {
        match self {
            Error::SingularAction { .. } | Error::OutsideChart(_) | Error::FlowPole(_) => true,
            Error::AtStep { source, .. } => source.is_chart_violation(),
            _ => false,
        }
    }

    pub fn step(&self) -> Option<usize> {
        match self {
            Error::AtStep { step, .. } => Some(*step),
            _ => None,
        }
    }
}
