use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every way an operation in this crate can fail.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An outcome space needs at least one outcome.
    EmptySpace,
    /// More outcomes than the event bitmask can hold.
    TooManyOutcomes { count: usize, max: usize },
    /// `labels` and `probs` have different lengths.
    LengthMismatch { expected: usize, found: usize },
    DuplicateLabel(String),
    UnknownLabel(String),
    NegativeProbability { label: String, value: f64 },
    NonFinite(&'static str),
    /// Point probabilities do not sum to one.
    Normalization { sum: f64 },
    /// Events are always non-empty.
    EmptyEvent,
    /// Conditioning on an event of probability zero.
    NullConditioning,
    /// `T ∩ S` has probability zero, so no post-measurement state exists.
    NullIntersection,
    /// Two values were built over different outcome spaces.
    SpaceMismatch,
    /// Partition blocks overlap.
    OverlappingBlocks,
    /// Partition blocks do not cover the carrier set.
    IncompleteCover,
    /// Mixture weights are negative or do not sum to one.
    WeightNormalization { sum: f64 },
    NegativeWeight(f64),
    EmptyMixture,
    /// Matrix entries are not symmetric at `(row, col)`.
    NotSymmetric { row: usize, col: usize },
    BadTrace(f64),
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    /// The eigenvalue check only runs up to this many outcomes.
    EigenCheckCap { size: usize, max: usize },
    /// `ρ² = ρ` and `tr[ρ²] = 1` gave different answers.
    PurityDisagreement { max_deviation: f64, trace_of_square: f64 },
    /// The state has weight outside the partition's carrier set.
    SupportOutsideCarrier { lost: f64 },
    DimensionMismatch { expected: usize, found: usize },
    /// Bit pattern does not fit the vector dimension.
    InvalidVector(String),
    NotABasis,
    SingularMatrix,
    ZeroVector,
    /// Basis counting uses exact integers up to this dimension.
    CountOverflow { n: usize, max: usize },
    /// Exhaustive enumeration cap.
    EnumerationCap { n: usize, max: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Error::*;
        match self {
            EmptySpace => write!(f, "outcome space has no outcomes"),
            TooManyOutcomes { count, max } => {
                write!(f, "{count} outcomes exceeds the maximum of {max}")
            }
            LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            DuplicateLabel(l) => write!(f, "duplicate outcome label `{l}`"),
            UnknownLabel(l) => write!(f, "unknown label `{l}`"),
            NegativeProbability { label, value } => {
                write!(f, "outcome `{label}` has negative probability {value}")
            }
            NonFinite(what) => write!(f, "{what} must be finite"),
            Normalization { sum } => write!(f, "probabilities sum to {sum}, not 1"),
            EmptyEvent => write!(f, "events must be non-empty"),
            NullConditioning => write!(f, "cannot condition on an event of probability zero"),
            NullIntersection => write!(f, "projected event has probability zero"),
            SpaceMismatch => write!(f, "values belong to different outcome spaces"),
            OverlappingBlocks => write!(f, "partition blocks are not disjoint"),
            IncompleteCover => write!(f, "partition blocks do not cover the carrier set"),
            WeightNormalization { sum } => write!(f, "mixture weights sum to {sum}, not 1"),
            NegativeWeight(w) => write!(f, "negative mixture weight {w}"),
            EmptyMixture => write!(f, "mixture has no components"),
            NotSymmetric { row, col } => write!(f, "matrix is not symmetric at ({row}, {col})"),
            BadTrace(t) => write!(f, "trace is {t}, not 1"),
            NotPositiveSemidefinite { min_eigenvalue } => {
                write!(f, "matrix has negative eigenvalue {min_eigenvalue}")
            }
            EigenCheckCap { size, max } => {
                write!(f, "eigenvalue check limited to {max} outcomes, got {size}")
            }
            PurityDisagreement { max_deviation, trace_of_square } => write!(
                f,
                "purity tests disagree: max|ρ²-ρ| = {max_deviation}, tr[ρ²] = {trace_of_square}"
            ),
            SupportOutsideCarrier { lost } => {
                write!(f, "state has weight {lost} outside the partition's carrier")
            }
            DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            InvalidVector(s) => write!(f, "invalid GF(2) vector `{s}`"),
            NotABasis => write!(f, "vectors are not linearly independent over GF(2)"),
            SingularMatrix => write!(f, "matrix is singular over GF(2)"),
            ZeroVector => write!(f, "the zero vector is not a ket"),
            CountOverflow { n, max } => {
                write!(f, "basis count supports 1 <= n <= {max}, got {n}")
            }
            EnumerationCap { n, max } => {
                write!(f, "enumeration supports 1 <= n <= {max}, got {n}")
            }
        }
    }
}

impl core::error::Error for Error {}
