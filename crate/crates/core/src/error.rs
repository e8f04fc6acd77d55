use thiserror::Error;

/// Errors surfaced by the library. Every variant carries enough context to
/// produce a one-line diagnostic naming the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty generator set: an ideal needs at least one generator")]
    EmptyIdeal,

    #[error("ambient dimension must be at least 1")]
    ZeroAmbientDimension,

    #[error("generator {gen} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        gen: String,
        got: usize,
        expected: usize,
    },

    #[error("ideal is not zero-dimensional: no pure power in variable {var}")]
    NotZeroDimensional { var: String },

    #[error("containment violated: generator {gen} does not lie in the second ideal")]
    NotContained { gen: String },

    #[error("not a parameter ideal: generator {gen} is not a pure power")]
    NotParameterIdeal { gen: String },

    #[error("monomial syntax error at `{token}`: {reason}")]
    MonomialSyntax { token: String, reason: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("prime {p} divides the Veronese degree {n}")]
    PrimeDividesDegree { p: u64, n: u64 },

    #[error("class index {l} out of range for Veronese degree {n}")]
    ClassOutOfRange { l: u64, n: u64 },

    #[error("Veronese degree {0} must be at least 2")]
    DegreeTooSmall(u64),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid module action: {0}")]
    InvalidModule(String),

    #[error("invalid socle subspace: {0}")]
    InvalidSubspace(String),

    #[error(
        "socle hypothesis violated: dim({witness} * M) = {got} < {needed} = dim V"
    )]
    HypothesisViolated {
        witness: String,
        got: usize,
        needed: usize,
    },

    #[error(
        "no scalar in the field of size {field_size} completes the \
         construction; retry over a field extension"
    )]
    NoGenericScalar { field_size: u64 },

    #[error("post-hoc verification failed: the constructed map is not injective on V")]
    VerificationFailed,

    #[error("series too short: {len} points given, {needed} needed")]
    InsufficientData { len: usize, needed: usize },

    #[error("count {count} at e={e} exceeds q^{delta}")]
    CountExceedsGrowth { count: String, e: u32, delta: u32 },

    #[error("module growth index {i} exceeds ambient dimension {d}")]
    IndexExceedsDimension { i: u32, d: u32 },

    #[error("problem file error: {0}")]
    ProblemFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
