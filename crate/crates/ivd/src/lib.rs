//! Information-vs-disturbance toolkit for D-dimensional quantum key
//! distribution.
//!
//! The crate is organized around the question "how much can an eavesdropper
//! learn, given the errors she causes?":
//!
//! - [`linalg`]: dense complex linear algebra, trace norms, partial traces,
//!   and the validated state/measurement types everything else consumes.
//! - [`info`]: exact classical and quantum entropy and mutual-information
//!   functionals (all in bits, log base 2).
//! - [`bounds`]: evaluators for the information bounds — entropy lower
//!   bounds, variational and trace-norm mutual-information bounds, and the
//!   disturbance bounds `4 log₂(D) √P̃ₑ` and `H(f(K)) · 4√P̃ₑ`.
//! - [`mub`]: generalized Hadamard matrices and mutually unbiased bases,
//!   certified numerically at construction time.
//! - [`attack`]: probe-unitary eavesdropping attacks, Kraus-vector
//!   extraction, disturbance in a mutually unbiased basis, and the
//!   purification machinery that ties information to disturbance.
//! - [`fm`]: the encrypted-message scenario — announcements `a = m + k`,
//!   conditional states consistent with a function value, and the
//!   function-of-message bound.
//! - [`optimizer`]: candidate measurements (pretty-good measurement,
//!   eigenbasis projectors) and local POVM ascent, used to probe how tight
//!   the upper bounds are.
//! - [`report`]: reproducible report records with stable input digests.
//! - [`suites`]: the numerical verification suites run by the CLI.

pub mod attack;
pub mod bounds;
pub mod fm;
pub mod info;
pub mod linalg;
pub mod mub;
pub mod optimizer;
pub mod report;
pub mod suites;

use thiserror::Error;

/// Default tolerance for Hermiticity, positivity, trace and normalization
/// checks. Overridable per call where it matters.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors for state validation and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("not Hermitian (max |A - A†| entry = {deviation:.3e} > tol {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace:.12} (expected 1 within {tol:.3e})")]
    BadTrace { trace: f64, tol: f64 },

    #[error("vector norm is {norm:.12} (expected 1 within {tol:.3e})")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("not unitary (max deviation {deviation:.3e} > tol {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("dimension {dim} does not factor as {d1} x {d2}")]
    BadFactorization { dim: usize, d1: usize, d2: usize },

    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("POVM does not sum to identity (max deviation {deviation:.3e})")]
    PovmIncomplete { deviation: f64 },

    #[error("invalid probability distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("prior p[{index}] = {value} exceeds 1/2{hint}")]
    PriorAboveHalf {
        index: usize,
        value: f64,
        hint: String,
    },

    #[error("expected {expected} items, got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{0} is not an odd prime <= 97 (dimension 2 uses the Pauli eigenbases)")]
    NotSupportedPrime(u64),

    #[error("matrix is not a group Hadamard for any supported group law")]
    NotGroupHadamard,

    #[error("probe dimension {got} insufficient (need >= {needed})")]
    InsufficientProbe { needed: usize, got: usize },

    #[error("independent computation routes disagree: {a:.12e} vs {b:.12e}")]
    RouteMismatch { a: f64, b: f64 },

    #[error("verified identity violated: {0}")]
    InvariantViolation(String),

    #[error("eigendecomposition failed to converge")]
    EigenFailed,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Deterministic per-point seed derivation from a master seed and stream
/// coordinates (splitmix64 finalizer).
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
