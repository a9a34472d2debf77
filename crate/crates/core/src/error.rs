use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// Positive bits must cross a slot of zero length.
    #[error("infinite power required: positive bits over a zero-length slot")]
    InfinitePower,
    /// A scenario field violates its invariant.
    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),
    /// Linear program rows, columns or bounds do not line up.
    #[error("malformed linear program: {0}")]
    MalformedLp(&'static str),
    /// The simplex iteration lost accuracy and its result failed the self-audit.
    #[error("linear program solution failed its feasibility audit")]
    LpAudit,
    /// Multipliers outside the dual-feasible set.
    #[error("dual point outside the feasible set (lambda and mu1 must be nonnegative)")]
    DualInfeasible,
    /// An invariant that should hold for every valid input was broken.
    #[error("internal error: {0}")]
    Internal(&'static str),
}
