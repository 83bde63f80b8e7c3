use thiserror::Error;

use crate::rat::Rat;
use crate::validate::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("missing values for subsets: {}", .0.join(", "))]
    MissingSubsets(Vec<String>),

    #[error("negative value {value} for subset {subset:?}")]
    NegativeValue { subset: String, value: Rat },

    #[error("ground set of {size} points exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("support must be nonempty")]
    EmptySupport,

    #[error("function is not admissible ({} violations)", .0.violations.len())]
    NotAdmissible(Box<ValidationReport>),

    #[error("label {0:?} already present")]
    DuplicateLabel(String),

    #[error("unknown point label {0:?}")]
    UnknownLabel(String),

    #[error("invalid point label {0:?}: labels must be nonempty and contain no whitespace")]
    InvalidLabel(String),

    #[error("functions are defined over different base diversities")]
    MixedBase,

    #[error("pairs do not form a partial isomorphism: {0}")]
    InvalidPartialIso(String),

    #[error("map distorts subset {subset} by {distortion}, not below {bound}")]
    DistortionTooLarge { subset: String, distortion: Rat, bound: Rat },

    #[error("subset ordering is not superset-first: {0}")]
    InvalidOrdering(String),

    #[error("no feasible value for point {point}: lower bound {lower} exceeds upper bound {upper}")]
    InfeasibleInterval { point: usize, lower: Rat, upper: Rat },

    #[error("no admissible function accepted after {attempts} attempts")]
    GenerationExhausted { attempts: usize },

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    pub(crate) fn parse(err: &serde_json::Error) -> Error {
        Error::Parse { line: err.line(), column: err.column(), message: err.to_string() }
    }
}
