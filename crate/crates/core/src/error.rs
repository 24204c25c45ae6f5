use thiserror::Error;

use crate::compat::{CheckReport, MetrizationDecision};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty point label")]
    EmptyLabel,

    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("angle ({a},{b},{c}) = {theta} lies outside [0, pi]")]
    AngleOutOfRange {
        a: String,
        b: String,
        c: String,
        theta: f64,
    },

    #[error("angle ({a},{b},{c}) has a repeated vertex; the vertex must differ from both arms")]
    AngleVertexRepeated { a: String, b: String, c: String },

    #[error("conflicting angle entries for ({a},{b},{c}): {first} vs {second}")]
    ConflictingAngle {
        a: String,
        b: String,
        c: String,
        first: f64,
        second: f64,
    },

    #[error("missing angle ({a},{b},{c})")]
    MissingAngle { a: String, b: String, c: String },

    #[error("betweenness triple ({a},{b},{c}) does not consist of three distinct points")]
    TripleNotDistinct { a: String, b: String, c: String },

    #[error("betweenness triples ({a},{b},{c}) and ({b},{a},{c}) cannot both hold")]
    ExclusionViolated { a: String, b: String, c: String },

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1e-2]")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),

    #[error("distance between `{p}` and `{q}` must be positive and finite, got {d}")]
    InvalidDistance { p: String, q: String, d: f64 },

    #[error("missing distance between `{p}` and `{q}`")]
    MissingDistance { p: String, q: String },

    #[error("conflicting distances between `{p}` and `{q}`: {first} vs {second}")]
    ConflictingDistance {
        p: String,
        q: String,
        first: f64,
        second: f64,
    },

    #[error("{what}: need {expected}, got {got}")]
    OutOfRange {
        what: &'static str,
        expected: String,
        got: usize,
    },

    #[error("points {0:?} are all collinear")]
    AllCollinear(Vec<String>),

    #[error("sine of angle ({a},{b},{c}) is {value:e}, below the degeneracy floor")]
    DegenerateSine {
        a: String,
        b: String,
        c: String,
        value: f64,
    },

    #[error("trivial space: metric not unique")]
    TrivialSpace,

    #[error("metric inconsistent with the angle table at {tuple:?} (residual {residual:e})")]
    Inconsistent { tuple: Vec<String>, residual: f64 },

    #[error("metric fails the Stewart relation")]
    Stewart(Box<CheckReport>),

    #[error("law-of-cosines ratio {value} for ({a},{b},{c}) lies outside [-1, 1]: triangle inequality breached")]
    TriangleInequality {
        a: String,
        b: String,
        c: String,
        value: f64,
    },

    #[error("point sets differ")]
    PointSetMismatch,

    #[error("space does not admit a euclidean-compatible metric")]
    NotMetrizable(Box<MetrizationDecision>),

    #[error("metric is not flat: Gram eigenvalue {eigenvalue:e} below tolerance")]
    NotFlat { eigenvalue: f64 },

    #[error("numerical rank {rank} exceeds target dimension {dim}")]
    RankExceeded { rank: usize, dim: usize },

    #[error("not embeddable in dimension {0}")]
    NotEmbeddable(usize),

    #[error("realized configuration misses the input at {tuple:?} (residual {residual:e})")]
    RealizationMismatch { tuple: Vec<String>, residual: f64 },

    #[error("infeasible generator request: {0}")]
    InfeasibleGenerator(String),

    #[error("generator could not draw a non-degenerate sample after {0} attempts")]
    DegenerateSample(usize),

    /// `message` already names the line and column.
    #[error("{message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported schema_version {0}")]
    SchemaVersion(u32),

    #[error("{location}: {source}")]
    At {
        location: String,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, location: impl Into<String>) -> Self {
        Error::At {
            location: location.into(),
            source: Box::new(self),
        }
    }
}
