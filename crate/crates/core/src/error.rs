use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state has no nonzero coefficient")]
    ZeroState,

    #[error("state norm is {norm} (expected 1 within 1e-10); pass renormalize to accept it")]
    NotNormalized { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis table of {rows} x {cols} entries exceeds the cap of {cap}")]
    ResourceLimit { rows: usize, cols: usize, cap: usize },

    #[error("density is degenerate (no mass above the node threshold)")]
    DegenerateProfile,

    #[error("entropy {0} too large for the entropy power")]
    EntropyOverflow(f64),

    #[error("truncated expansion captures norm {captured}; {advice}")]
    Truncation { captured: f64, advice: String },

    #[error("rotation angle {0} is a multiple of pi; the kernel is singular there")]
    DegenerateAngle(f64),

    #[error("improper integral did not converge after {pieces} pieces (tail bound {tail_bound:e})")]
    NonConvergence { pieces: usize, tail_bound: f64 },

    #[error("cannot parse state literal `{literal}`: {reason}")]
    Parse { literal: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
