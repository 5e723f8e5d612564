use thiserror::Error;

/// Errors surfaced by distribution evaluation and order checking.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index {index} out of range for vector of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// The survival function at `k` is below the hazard floor; the point is
    /// beyond meaningful support and hazards are not evaluated there.
    #[error("degenerate tail: survival at k={k} is at or below {floor:e}")]
    DegenerateTail { k: u32, floor: f64 },

    /// Dual of `DegenerateTail` for the distribution function.
    #[error("degenerate head: cdf at k={k} is at or below {floor:e}")]
    DegenerateHead { k: u32, floor: f64 },

    #[error("finite-difference step {step} exceeds domain margin {margin}")]
    StepTooLarge { step: f64, margin: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
