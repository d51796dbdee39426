use thiserror::Error;

/// Errors raised by the valuation library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two group elements of different rank were combined.
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    /// A value or node outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument that violates a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No free least-significant slot is left for an infinitesimal probe.
    #[error("rank {rank} exhausted: no free slot for a probe infinitesimal (use a higher --rank)")]
    RankExhausted { rank: usize },

    /// A stable value could not be certified within the generated prefix.
    #[error("stability horizon exceeded after {tried} family members")]
    StabilityHorizon { tried: usize },

    /// The supremum of a family's values does not match a recognised pattern.
    #[error("supremum underdetermined: {0}")]
    SupUnderdetermined(String),

    /// A family generator produced an invalid member sequence.
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    /// Textual or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Bad configuration (prime, rank, horizon).
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
