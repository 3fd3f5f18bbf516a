use alloc::string::String;

/// Errors shared by every module of the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// `projected` is set when the build stopped early because the sphere
    /// growth seen so far projects a ball far beyond the budget.
    #[error("ball budget exceeded at layer {layer} ({elements} elements, budget {budget}{})",
        projected.map(|p| alloc::format!(", projected total {p:.1e}")).unwrap_or_default())]
    BudgetExceeded {
        layer: u32,
        elements: usize,
        budget: usize,
        projected: Option<f64>,
    },
    #[error("subgroup distance unresolved inside the ball: {0}")]
    Unresolved(String),
    #[error("outside the scope of the characterization: {0}")]
    Scope(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = core::result::Result<T, Error>;
