use thiserror::Error;

/// Errors raised by the kernel algebra and the theorem layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChaosError {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("kernel of order ({p},{q}) on {n} cells exceeds caps (order <= {max_order}, cells <= {max_cells})")]
    CapExceeded {
        p: usize,
        q: usize,
        n: usize,
        max_order: usize,
        max_cells: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("degenerate orders: {0}")]
    DegenerateOrder(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),

    #[error("heterogeneous sequence: {0}")]
    Heterogeneous(String),
}

pub type Result<T> = std::result::Result<T, ChaosError>;
