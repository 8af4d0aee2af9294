use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix (|det| = {0:e})")]
    SingularMatrix(f64),

    #[error("cover degree mismatch: {0} vs {1}")]
    CoverMismatch(u32, u32),

    #[error("holomorphic extension left the strip chart after {prefix} letters (|Im z| = {imag})")]
    ExtensionLeavesChart { prefix: usize, imag: f64 },

    #[error("map is not univalent on the requested ball: {0}")]
    NotUnivalent(String),

    #[error("no positive univalence radius on the bisection grid")]
    NoPositiveRadius,

    #[error("point {0} is too close to the pole of the affine chart")]
    NearPole(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ball exceeds the element cap of {0}")]
    BallTooLarge(usize),

    #[error("element lies outside the radius-{0} ball")]
    OutOfBall(u32),

    #[error("no generator reaches log-derivative {c} at step {step} (point {point}, best {best})")]
    NoExpandingGenerator {
        step: usize,
        point: f64,
        best: f64,
        c: f64,
    },

    #[error("no depth pair with cocycle gap below c up to depth {0}")]
    NoMatchingDepths(usize),

    #[error("interior vertex {0} is isolated in the expansion graph")]
    DisconnectedGamma(usize),

    #[error("depth must be positive")]
    InvalidDepth,

    #[error("sample count must be positive")]
    InvalidSampleCount,

    #[error("fiber clusters are separated by fewer than two grid points")]
    InconclusiveClustering,

    #[error("fiber cardinalities disagree: {0:?}")]
    NonConstantFibers(Vec<(usize, usize)>),

    #[error("derivative band excludes every candidate element")]
    EmptyCandidateSet,

    #[error("maps share no fixed point")]
    NoCommonFixedPoint,

    #[error("angles ({0}, {1}, {2}) do not give a hyperbolic triangle")]
    NotHyperbolic(u32, u32, u32),

    #[error("genus {0} is not supported")]
    UnsupportedGenus(u32),

    #[error("no branch assignment lifts every relator trivially to the {0}-fold cover")]
    NoConsistentLift(u32),

    #[error("ping-pong configuration fails: {0}")]
    PingPongFails(String),

    #[error("oracle failed: {0}")]
    OracleFailed(String),

    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
