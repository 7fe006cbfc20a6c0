//! Error type shared across the crate.

use thiserror::Error;

/// All failure modes surfaced by the library.
///
/// Statistical misses (a soft criterion off target, a constraint violation in
/// an audited trial) are report entries, not errors; this enum covers misuse,
/// configured caps, and genuine bookkeeping bugs.
#[derive(Debug, Error)]
pub enum Error {
    /// The exact matching solver was handed more touched vertices than its
    /// bitmask DP cap allows.
    #[error("exact solver cap exceeded: {touched} touched vertices > cap {cap}")]
    CapExceeded { touched: usize, cap: usize },

    /// The brute-force oracle was handed more active edges than it enumerates.
    #[error("brute-force cap exceeded: {edges} active edges > cap {cap}")]
    BruteForceCapExceeded { edges: usize, cap: usize },

    /// The greedy sparsifier loop ran longer than its progress argument
    /// allows; this signals a bookkeeping bug, not bad input.
    #[error("greedy loop exceeded {max_iterations} iterations")]
    IterationOverflow { max_iterations: u64 },

    /// The sampling-round formula exceeded the configured hard cap and no
    /// override was given.
    #[error("sampling rounds R = {formula:.3e} exceeds hard cap {cap} and no override is set")]
    ParameterOverflow { formula: f64, cap: u64 },

    /// A conditional-rescaling denominator estimate fell below epsilon,
    /// contradicting the matching-probability bound it relies on.
    #[error("degenerate denominator: estimated Pr[v∉Z] < ε at vertex {vertex}")]
    DegenerateDenominator { vertex: usize },

    /// A multi-walk failed the alternating-walk precondition of `apply_walk`.
    #[error("invalid multi-walk: {reason}")]
    InvalidWalk { reason: String },

    /// The recursive matching sampler would exceed its configured call budget.
    #[error("recursion budget exceeded: estimated {estimated:.3e} calls > budget {budget}")]
    RecursionBudgetExceeded { estimated: f64, budget: u64 },

    /// The independence test found no vertex pair at the requested distance.
    #[error("no vertex pairs at hop distance >= {lambda_hops}")]
    NoEligiblePairs { lambda_hops: u32 },

    /// Malformed input: graph files, generator specs, configuration values.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An I/O failure, annotated with the path involved.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Wraps an I/O error with its path for context.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Shorthand for [`Error::InvalidInput`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
