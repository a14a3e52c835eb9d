//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Variants are grouped by the
//! stage that raises them: input validation, solver convergence, algebraic
//! preconditions, and stability-analysis preconditions.

use thiserror::Error;

/// Errors raised by game construction, solving, synthesis, and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// Cost matrix has no nonzero entry, so it cannot be normalized.
    #[error("cost matrix is identically zero; cannot normalize")]
    AllZeroMatrix,

    /// Absolute entries do not sum to 1 and normalization was not requested.
    #[error("cost matrix absolute sum is {sum:.17}, expected 1 (enable normalization to rescale)")]
    NotNormalized { sum: f64 },

    /// A matrix or vector entry is NaN or infinite.
    #[error("non-finite entry encountered in {context}")]
    NonFiniteEntry { context: &'static str },

    /// Graph-based constructions need at least one edge.
    #[error("graph has no edges")]
    EmptyGraph,

    /// Structural problem with a graph description.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A size or index parameter is outside its documented range.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// Exhaustive sign enumeration is capped; both sides exceed the cap.
    #[error("exhaustive enumeration infeasible: min(m, n) = {side} exceeds cap {cap}")]
    TooLarge { side: usize, cap: usize },

    /// Two objects that must agree in dimension do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The solver could not certify optimality within tolerance.
    #[error("not converged: best duality gap {gap:.3e} exceeds tolerance {tol:.3e}")]
    NotConverged { gap: f64, tol: f64 },

    /// A matrix that must have unit diagonal does not.
    #[error("diagonal entry {index} is {value:.17}, expected 1 within tolerance")]
    BadDiagonal { index: usize, value: f64 },

    /// A matrix that must be positive semidefinite is not.
    #[error("matrix not positive semidefinite: minimum eigenvalue {min_eig:.3e}")]
    NotPsd { min_eig: f64 },

    /// Optimal-strategy synthesis requires every marginal row bias positive.
    #[error("marginal row bias {index} vanishes; synthesis undefined for zero rows")]
    ZeroRowBias { index: usize },

    /// An observable fails the Hermitian-involution contract.
    #[error("observable {index} violates the Hermitian involution contract (defect {defect:.3e})")]
    NonHermitianObservable { index: usize, defect: f64 },

    /// Optimality deficit outside the range where a bound applies.
    #[error("optimality deficit {eps:.3e} outside valid range [0, {max:.3e})")]
    EpsilonOutOfRange { eps: f64, max: f64 },

    /// Optimality deficit too large for approximate-representation extraction.
    #[error("optimality deficit {eps:.3e} exceeds extraction cap {cap:.3e}")]
    EpsilonTooLarge { eps: f64, cap: f64 },

    /// The state is maximally mixed, so no spectral split exists.
    #[error("state is maximally mixed; no eigenvalue-gap split exists")]
    MaximallyMixed,

    /// Measured defect exceeds the stability radius for exact rounding.
    #[error("measured defect {eps:.3e} exceeds stability radius {radius:.3e}")]
    DefectTooLarge { eps: f64, radius: f64 },

    /// No exact representation exists on this dimension.
    #[error("no exact representation: minimal dimension {min_dim} does not divide {dim}")]
    NoExactRep { min_dim: usize, dim: usize },

    /// Minimum-entanglement bounds are only available for strongly Clifford
    /// solution algebras.
    #[error("solution algebra is not strongly Clifford; minimal dimension unknown (lower bound 1)")]
    NotClifford,

    /// I/O failure while reading or writing a file.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON or CSV payload.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
