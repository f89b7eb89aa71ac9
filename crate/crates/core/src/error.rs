use thiserror::Error;

use crate::group::Element;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What was observed while a randomized construction kept failing.
#[derive(Debug, Clone, PartialEq)]
pub struct AttemptDiagnostics {
    /// Member sizes of every rejected draw, in attempt order.
    pub sizes_seen: Vec<Vec<usize>>,
    /// The size cap the draws were checked against.
    pub size_cap: f64,
    /// First tuple whose translates had an empty intersection, if any draw got
    /// as far as verification.
    pub first_failing_tuple: Option<Vec<Element>>,
}

impl std::fmt::Display for AttemptDiagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let oversized = self
            .sizes_seen
            .iter()
            .filter(|s| s.iter().any(|&x| x as f64 > self.size_cap))
            .count();
        write!(
            f,
            "{} draws, {} over the size cap {:.3}",
            self.sizes_seen.len(),
            oversized,
            self.size_cap
        )?;
        if let Some(t) = &self.first_failing_tuple {
            write!(f, ", first empty intersection at {t:?}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),

    #[error("group order overflows 64 bits")]
    OrderOverflow,

    #[error("{small} does not divide {large}")]
    NotDivisible { small: u64, large: u64 },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed after {attempts} attempts: {diagnostics}")]
    AttemptsExhausted {
        attempts: u32,
        diagnostics: Box<AttemptDiagnostics>,
    },

    #[error("exhaustive verification needs {needed} steps but the budget is {budget}; use sampled mode")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("stage {stage} inadmissible: literal form {literal:.1} < {kernel_order} is {literal_ok}, strengthened form {strengthened:.1} < {kernel_order} is {strengthened_ok}")]
    Inadmissible {
        stage: usize,
        kernel_order: u64,
        literal: f64,
        literal_ok: bool,
        strengthened: f64,
        strengthened_ok: bool,
    },

    #[error("construction soundness violation: {0}")]
    Soundness(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
