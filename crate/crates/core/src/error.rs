use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("angle {value} is outside the open interval (0, 1)")]
    AngleOutOfRange { value: Rational },

    #[error("angle {value} is degenerate at iterate {k} (k*theta/2 is an integer)")]
    NonDegeneracyViolation { value: Rational, k: u64 },

    #[error("signature {signature} is incompatible with multiplicity {multiplicity}")]
    SignatureParityError { multiplicity: u64, signature: i64 },

    #[error("loop part {0} is odd")]
    OddLoopError(i64),

    #[error("iterate {requested} is beyond the certified horizon {horizon}")]
    HorizonExceeded { requested: u64, horizon: u64 },

    #[error("iterates are counted from 1")]
    ZeroIterate,

    #[error("no pool member reproduces the jump sequence")]
    NoMatch,

    #[error("descriptor has a loop or hyperbolic part")]
    NotElliptic,

    #[error("vertex {vertex} lies on the wall of coordinate {coordinate}")]
    EndpointOnCycle { vertex: usize, coordinate: usize },

    #[error("segment {segment} runs inside the wall of coordinate {coordinate}")]
    DegenerateSegment { segment: usize, coordinate: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("divisibility hypothesis fails for l = {l}")]
    HypothesisNotMet { l: u64 },

    #[error("rotation is degenerate: k*(a_{j} - a_{i}) is an integer for k = {k}")]
    DegenerateRotation { i: usize, j: usize, k: u64 },

    #[error("recapping failed: {0}")]
    RecappingFailed(String),

    #[error("matching rotation does not reproduce the table: {0}")]
    RoundTripMismatch(String),

    #[error("two action values coincide at {0}")]
    DuplicateAction(Rational),

    #[error("window bound {0} lies in the action spectrum")]
    WindowOnSpectrum(Rational),

    #[error("window [{lo}, {hi}] is empty")]
    InvalidWindow { lo: Rational, hi: Rational },

    #[error("table is not balanced: mean indices sum to {sum}")]
    NotBalanced { sum: Rational },

    #[error("invalid fixed point table: {0}")]
    InvalidTable(String),

    #[error("descriptor has dimension {dimension}, expected a two-dimensional elliptic path")]
    WrongDimension { dimension: u64 },

    #[error("cannot parse {0:?} as a rational number")]
    ParseRational(String),

    #[error("arithmetic overflow")]
    Overflow,
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::AngleOutOfRange { .. } => "angle_out_of_range",
            Error::NonDegeneracyViolation { .. } => "non_degeneracy_violation",
            Error::SignatureParityError { .. } => "signature_parity",
            Error::OddLoopError(_) => "odd_loop",
            Error::HorizonExceeded { .. } => "horizon_exceeded",
            Error::ZeroIterate => "zero_iterate",
            Error::NoMatch => "no_match",
            Error::NotElliptic => "not_elliptic",
            Error::EndpointOnCycle { .. } => "endpoint_on_cycle",
            Error::DegenerateSegment { .. } => "degenerate_segment",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::HypothesisNotMet { .. } => "hypothesis_not_met",
            Error::DegenerateRotation { .. } => "degenerate_rotation",
            Error::RecappingFailed(_) => "recapping_failed",
            Error::RoundTripMismatch(_) => "round_trip_mismatch",
            Error::DuplicateAction(_) => "duplicate_action",
            Error::WindowOnSpectrum(_) => "window_on_spectrum",
            Error::InvalidWindow { .. } => "invalid_window",
            Error::NotBalanced { .. } => "not_balanced",
            Error::InvalidTable(_) => "invalid_table",
            Error::WrongDimension { .. } => "wrong_dimension",
            Error::ParseRational(_) => "parse_rational",
            Error::Overflow => "overflow",
        }
    }
}
