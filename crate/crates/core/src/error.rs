use thiserror::Error;

/// Crate-wide error type. Variants are grouped by the module that raises
/// them; the CLI maps `BudgetExceeded` to its own exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("d∘d ≠ 0 at degree {degree}, basis element {basis}: {detail}")]
    NotAComplex {
        degree: usize,
        basis: String,
        detail: String,
    },

    #[error("augmentation violation: {0}")]
    Augmentation(String),

    #[error("degree range mismatch: {0}")]
    DegreeMismatch(String),

    #[error("endpoint mismatch: cannot compose {g} after {f}")]
    EndpointMismatch { g: String, f: String },

    #[error("invalid object notation: {0}")]
    Notation(String),

    #[error("malformed morphism: {0}")]
    Morphism(String),

    #[error("category axiom violated: {0}")]
    CategoryAxiom(String),

    #[error("input exceeds supported dimension: {0}")]
    Dimension(String),

    #[error("induced composition ill-defined under hom collapse: {0}")]
    IllDefinedTruncation(String),

    #[error("disconnected left argument: {0}")]
    Disconnected(String),

    #[error("enumeration budget exceeded ({limit} nodes)")]
    BudgetExceeded { limit: u64 },

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Node counter shared by the backtracking enumerators. Every search node
/// visit ticks it once; exceeding the limit aborts the enumeration with a
/// distinguishable error rather than returning a truncated answer.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "NERVELAB_BUDGET";

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Default limit, overridden by the NERVELAB_BUDGET environment
    /// variable when it parses as a positive integer.
    pub fn standard() -> Self {
        let limit = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_BUDGET);
        Budget::new(limit)
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}
