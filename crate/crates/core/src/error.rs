use thiserror::Error;

/// Contract errors raised by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent at position {0}")]
    NegativeExponent(usize),
    #[error("non-integer exponent at position {0}")]
    NonIntegerExponent(usize),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("name collision: `{0}` is already a ring variable")]
    NameCollision(String),
    #[error("incomplete substitution: no image for `{0}`")]
    IncompleteMap(String),
    #[error("unsupported characteristic {characteristic}: {reason}")]
    Characteristic { characteristic: u32, reason: String },
    #[error("coefficient {0} is not integral at the reduction prime")]
    NonIntegral(String),
    #[error("zero polynomial not allowed here: {0}")]
    ZeroPolynomial(String),
    #[error("not monic: {0}")]
    NotMonic(String),
    #[error("center not permissible: {0}")]
    NotPermissible(String),
    #[error("exact division failed: {0}")]
    ExactDivision(String),
    #[error("point not in the singular locus")]
    NotInSing,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown chart path {0:?}")]
    UnknownChart(Vec<String>),
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("step budget of {0} blow-ups exceeded")]
    BudgetExceeded(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Internal assertion failures, as opposed to contract errors.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
