use thiserror::Error;

/// Every failure the analysis can report. None of these is ever replaced by an
/// approximate answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("resultant of two zero polynomials")]
    ZeroResultant,
    #[error("polynomial has degree 0 in y")]
    DegreeZero,
    #[error("unsupported point: {0}")]
    UnsupportedPoint(String),
    #[error("pole at an irrational point: denominator factor {0}")]
    UnsupportedPoleLocation(String),
    #[error("undeclared pole at {0}")]
    UndeclaredPole(String),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("unsupported extension: {0}")]
    UnsupportedExtension(String),
    #[error("characteristic polynomial is not squarefree in y")]
    NotSquarefree,
    #[error("block spectra overlap")]
    SpectraOverlap,
    #[error("not regular semisimple: {0}")]
    NotRss(String),
    #[error("reduction unavailable: {0}")]
    ReductionUnavailable(String),
    #[error("germ undefined: {0}")]
    GermUndefined(String),
    #[error("germ is not reduced")]
    NonReducedGerm,
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl Error {
    /// Short machine-readable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroResultant => "zero-resultant",
            Error::DegreeZero => "degree-zero",
            Error::UnsupportedPoint(_) => "unsupported-point",
            Error::UnsupportedPoleLocation(_) => "unsupported-pole-location",
            Error::UndeclaredPole(_) => "undeclared-pole",
            Error::InsufficientTruncation(_) => "insufficient-truncation",
            Error::UnsupportedExtension(_) => "unsupported-extension",
            Error::NotSquarefree => "not-squarefree",
            Error::SpectraOverlap => "spectra-overlap",
            Error::NotRss(_) => "not-rss",
            Error::ReductionUnavailable(_) => "reduction-unavailable",
            Error::GermUndefined(_) => "germ-undefined",
            Error::NonReducedGerm => "non-reduced-germ",
            Error::AssumptionViolation(_) => "assumption-violation",
            Error::Inconsistency(_) => "internal-inconsistency",
            Error::Parse { .. } => "parse-error",
            Error::InvalidProblem(_) => "invalid-problem",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
