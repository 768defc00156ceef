//! Exact asymptotics and explicit-N log-behavior certificates for P-recursive
//! sequences.
//!
//! Given a linear recurrence with polynomial coefficients and exact initial
//! values, this crate computes the asymptotic expansion of the term ratio
//! `a_{n+1}/a_n` and of `a_n` itself, classifies the asymptotic log-concavity
//! and ratio log-convexity of the root sequence `a_n^{1/n}`, and produces a
//! machine-checkable certificate of the form "the root sequence is log-concave
//! (or ratio log-convex) for all n >= N".  All arithmetic is exact (big
//! rationals, real algebraic numbers) or certified (directed-rounding interval
//! arithmetic); no uncertified floating point enters any decision.
//!
//! The pipeline, surfaced by the `rootlog` binary:
//!
//! 1. [`asymptotics::expand_ratio`] solves the recurrence's ratio form for a
//!    truncated expansion of `r_n = a_{n+1}/a_n`.
//! 2. [`asymptotics::to_asymptotic_form`] converts it to the expansion of
//!    `a_n` itself and [`asymptotics::classify`] applies the three-case
//!    asymptotic criteria.
//! 3. [`bounds`] turns the expansion into certified two-sided ratio bounds
//!    `f_n <= r_n <= g_n` with an explicit threshold.
//! 4. [`certify`] builds a certified term upper bound `h_n`, discharges the
//!    governing log-inequality by a derivative/limit/max-root sign chain, and
//!    assembles the end-to-end certificate.
//! 5. [`verify`] decides the remaining finite range exactly.

pub mod algebra;
pub mod asymptotics;
pub mod bounds;
pub mod certify;
pub mod corpus;
pub mod formats;
pub mod interval;
pub mod lograt;
pub mod recurrence;
pub mod series;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.  Pipeline stages wrap their failures in
/// [`Error::Stage`] so the CLI can name the failing stage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZeroPoly,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("mixed algebraic number fields in one operation")]
    MixedFields,
    #[error("polynomial is not irreducible or irreducibility could not be certified (degree {0})")]
    Irreducibility(usize),
    #[error("interval does not isolate exactly one real root")]
    NotIsolating,
    #[error("series reciprocal/log requires nonzero (resp. unit) constant term")]
    BadConstantTerm,
    #[error("log n appears with power >= 2; unsupported")]
    LogPowerTooHigh,
    #[error("insufficient expansion order: {0}")]
    InsufficientOrder(String),
    #[error("leading coefficient vanishes at integer index {0}")]
    LeadingCoefficientRoot(i64),
    #[error("recurrence needs exactly {expected} initial values, got {got}")]
    InitialValues { expected: usize, got: usize },
    #[error("sequence term at index {0} is not positive")]
    NotPositive(i64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("unsupported expansion shape: {0}")]
    Unsupported(String),
    #[error("bound certification failed: {0}")]
    InductionFailed(String),
    #[error("base-case check failed: {0}")]
    BaseCheckFailed(String),
    #[error("sign chain does not close: {0}")]
    LimitPattern(String),
    #[error("interval comparison indeterminate at precision cap ({0} bits)")]
    PrecisionExhausted(usize),
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("unsupported certificate schema version {found} (expected {expected})")]
    Schema { found: u32, expected: u32 },
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Name of the failing pipeline stage, if this is a stage error.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
