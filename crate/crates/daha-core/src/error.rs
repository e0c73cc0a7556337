//! Error taxonomy shared by every layer.
//!
//! Four kinds, matching the CLI exit-code contract: parse errors (exit 2),
//! domain errors (bad mathematical input), capacity errors and representation
//! errors (exit 3). Membership violations are not errors; they travel in
//! reports.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid input outside the operation's domain
    /// (division by zero, non-dominant coweight where one is required, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A guardrail tripped: the computation would exceed a size budget.
    #[error("capacity exceeded for {what}: {got} > {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// The exact result exists but cannot be written in the closed class the
    /// crate works in (e.g. a denominator that is not a product of binomial
    /// atoms).
    #[error("not representable in the closed class: {0}")]
    Representation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
