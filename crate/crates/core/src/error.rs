use thiserror::Error;

/// Everything that can go wrong in exact arithmetic or curve geometry.
///
/// Arithmetic on truncated series is partial: a query whose answer depends
/// on terms beyond the horizon must fail loudly rather than guess.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The answer depends on coefficients past the truncation horizon.
    #[error("result is indeterminate at the current truncation horizon")]
    IndeterminateAtHorizon,

    #[error("division by zero")]
    DivisionByZero,

    /// Square root of a number whose sign is negative.
    #[error("square root of a negative number")]
    NegativeRadicand,

    /// A coefficient square root left the supported tower of real radicals.
    #[error("square root not representable in the coefficient field")]
    SqrtUnsupported,

    /// Standard part requested of an infinitely large number.
    #[error("no finite standard part")]
    NotFinite,

    /// A cubic with a repeated root defines no smooth curve.
    #[error("curve is degenerate: repeated root")]
    DegenerateRoots,

    /// The point lies off the component the operation is defined on.
    #[error("point is not on the required curve component")]
    NotOnComponent,

    /// No valid half-point was found where one was required.
    #[error("halving produced no point on the identity component")]
    HalvingFailed,

    /// Chord-tangent arithmetic through the singular point of a bad reduction.
    #[error("group law is undefined at the singular point")]
    SingularOperand,

    /// The requested map or witness does not exist for this classification case.
    #[error("operation does not apply to this classification case")]
    WrongCase,

    #[error("invalid truncation point: {0}")]
    InvalidTruncationPoint(&'static str),

    /// The curve parameter must satisfy 0 < epsilon < 1.
    #[error("epsilon must lie strictly between 0 and 1")]
    InvalidEpsilon,

    /// A multiplicative truncation needs a bound strictly above 1.
    #[error("multiplicative truncation bound must exceed 1")]
    InvalidTruncationBound,

    /// An exponent denominator exceeded the configured ramification cap.
    #[error("exponent denominator exceeds the configured cap")]
    DenominatorCapExceeded,

    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
