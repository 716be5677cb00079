//! Exact computation of the major-index generating function
//! `sum_T q^maj(T)` over standard Young tableaux of skew shapes, focused on
//! shapes of the form "staircase minus rectangle",
//! `(N, N-1, ..., N-n+1) / (m^r)`.
//!
//! The generating function is computed by four independent routes:
//!
//! - brute-force enumeration of tableaux ([`tableaux::maj_gf_oracle`]),
//! - a determinant of reciprocal q-factorials ([`genfun::det_majgf`]),
//! - multi-dimensional basic hypergeometric sums ([`genfun::staircase_gf`]),
//! - closed product formulas for the two smallest staircase offsets
//!   ([`genfun::closed_staircase`], [`genfun::closed_staircase_plus1`]).
//!
//! All four agree exactly; the test suite and the `skewmaj` CLI cross-check
//! them coefficient by coefficient.
//!
//! Two companion modules verify the transformation identities that connect
//! the determinant to the hypergeometric sums: [`hypergeom`] checks a chain
//! of multi-dimensional basic hypergeometric transformations by exact
//! rational-function arithmetic at q-power specializations, and [`elliptic`]
//! checks the underlying elliptic-hypergeometric transformation numerically
//! with theta functions.
//!
//! Everything exact is built on [`qseries::LaurentPoly`] (dense Laurent
//! polynomials in `q` with arbitrary-precision integer coefficients) and
//! [`qseries::RationalQ`] (reduced ratios of those).

pub mod elliptic;
pub mod factored;
pub mod genfun;
pub mod hypergeom;
pub mod modp;
pub mod qcombinat;
pub mod qseries;
pub mod tableaux;

pub use qseries::{LaurentPoly, RationalQ};
pub use tableaux::{SkewShape, StaircaseSpec};

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Division by the zero polynomial or rational value.
    #[error("division by zero")]
    DivisionByZero,

    /// A value expected to be a polynomial is not; carries the canonical
    /// denominator and the minimal exponent that witnessed the failure.
    #[error("not a polynomial: denominator {denominator}, minimal exponent {min_exponent}")]
    NotAPolynomial {
        denominator: String,
        min_exponent: i64,
    },

    /// Numeric evaluation hit a denominator below the configured tolerance.
    #[error("denominator vanishes at evaluation point (|den| = {magnitude:e})")]
    NearZeroDenominator { magnitude: f64 },

    /// An argument outside an operation's domain (odd double-factorial
    /// argument, zero theta argument, wrong parity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A shape or parameter set violating a stated invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Enumeration limits exceeded; formula-based evaluators still apply.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A parameter specialization that makes a required denominator vanish.
    /// Verifiers report this as "inadmissible", never as a failed identity.
    #[error("inadmissible specialization: {0}")]
    Inadmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
