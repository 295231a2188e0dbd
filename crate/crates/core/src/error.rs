use num_complex::Complex64;
use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("pole at z = {at}")]
    Pole { at: Complex64 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("the leading coefficient of a second-order operator must be nonzero")]
    ZeroLeadingCoefficient,

    #[error("denominator does not split over the Gaussian rationals: {0}")]
    Unsplit(String),

    #[error("Riemann indices sum to {sum}, expected 1")]
    IndexSum { sum: String },

    #[error("singular points must be pairwise distinct")]
    CoincidentPoints,

    #[error("Möbius map must satisfy ad - bc = 1 (got {det})")]
    DegenerateMobius { det: String },

    #[error("conjugation requires finite z1 and z2")]
    InfiniteConjugationPoint,

    #[error("the Schwarz derivative of a constant map is undefined")]
    ConstantMap,

    #[error("derivative magnitude {value:e} below 1e-12 near y = {at}")]
    NearCritical { at: f64, value: f64 },

    #[error("point {at} outside the domain ({lo}, {hi})")]
    OutsideDomain { at: f64, lo: f64, hi: f64 },

    #[error("change of variables does not match the basis: worst mismatch {mismatch:e} at r = {at}")]
    CovMismatch { at: f64, mismatch: f64 },

    #[error("metric function is not positive at z = {at} (value {value:e})")]
    NonPositiveMetric { at: f64, value: f64 },

    #[error("series argument {z} outside the supported evaluation region: {msg}")]
    SeriesDomain { z: Complex64, msg: String },

    #[error("lower parameter c = {c} is a non-positive integer")]
    CPole { c: Complex64 },

    #[error("series failed to converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown parameter `{name}` for family {family}")]
    UnknownParameter { family: String, name: String },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shooting failed: {0}")]
    Shooting(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("output closed")]
    BrokenPipe,
}

impl Error {
    /// Short machine-readable tag used in the CLI error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::Pole { .. } => "pole",
            Error::Parse { .. } => "parse",
            Error::ZeroLeadingCoefficient => "zero_leading_coefficient",
            Error::Unsplit(_) => "unsplit",
            Error::IndexSum { .. } => "index_sum",
            Error::CoincidentPoints => "coincident_points",
            Error::DegenerateMobius { .. } => "degenerate_mobius",
            Error::InfiniteConjugationPoint => "infinite_conjugation_point",
            Error::ConstantMap => "constant_map",
            Error::NearCritical { .. } => "near_critical",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::CovMismatch { .. } => "cov_mismatch",
            Error::NonPositiveMetric { .. } => "non_positive_metric",
            Error::SeriesDomain { .. } => "series_domain",
            Error::CPole { .. } => "c_pole",
            Error::NoConvergence { .. } => "no_convergence",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::UnknownParameter { .. } => "unknown_parameter",
            Error::UnknownFamily(_) => "unknown_family",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::Shooting(_) => "shooting",
            Error::Io(_) => "io",
            Error::BrokenPipe => "broken_pipe",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Error::BrokenPipe;
        }
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => e.into(),
            k => Error::Io(format!("{k:?}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
