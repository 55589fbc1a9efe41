use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Bad series/rank pair, malformed algebra name or weight literal.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A weight (or matrix) has the wrong number of labels for its algebra.
    #[error("rank mismatch: expected {expected} labels, got {got}")]
    RankMismatch { expected: usize, got: usize },

    /// The operation requires a dominant weight.
    #[error("weight {0} is not dominant")]
    NotDominant(String),

    /// A weight lies outside the set of integrable weights at the given level.
    #[error("weight {weight} is not integrable at level {level}")]
    NotIntegrable { weight: String, level: String },

    /// The requested level is below the computable bound for the source weight.
    #[error("level {given} is below the required bound {required}")]
    LevelTooLow { given: String, required: String },

    /// The projection matrix does not describe a genuine embedding
    /// (negative or inconsistent multiplicities showed up).
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    /// Two algebras that must coincide do not.
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    /// A floating point quantity that should be an integer is too far from one.
    #[error("numerical residual {residual:.3e} exceeds tolerance {tolerance:.1e} ({context})")]
    Numerical {
        residual: f64,
        tolerance: f64,
        context: String,
    },

    /// The Weyl group is too large for an explicit element-by-element sum.
    #[error("Weyl group of {algebra} has order {order}, above the cap {cap}")]
    WeylGroupTooLarge {
        algebra: String,
        order: u64,
        cap: u64,
    },

    /// Labels violate the parity/range rule of an identification map.
    #[error("selection rule violated: {0}")]
    SelectionRule(String),

    /// A finite NIM-rep window is too small to decide an axiom on its interior.
    #[error("window too small: {0}")]
    Window(String),

    /// Adaptive quadrature did not settle within the point budget.
    #[error("quadrature did not converge within {points} points (last change {last_change:.3e})")]
    NoConvergence { points: usize, last_change: f64 },

    #[error("reflection to the dominant chamber exceeded {0} steps")]
    ReflectionCap(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
