//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures raised by the geometric and combinatorial routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vector is not in the negative cone: self product {self_product:e}")]
    NotInterior { self_product: f64 },
    #[error("vector is positive for the Hermitian form: self product {self_product:e}")]
    PositiveVector { self_product: f64 },
    #[error("zero input has no projective class")]
    ZeroInput,
    #[error("the point at infinity is not allowed here")]
    InfinityArgument,
    #[error("matrix is not H-unitary: residual {residual:e}")]
    NonUnitary { residual: f64 },
    #[error("polar vector must be positive, got self product {self_product:e}")]
    NonPositivePolar { self_product: f64 },
    #[error("element is elliptic and has no boundary fixed point")]
    EllipticFixedPoint,
    #[error("fixed point extraction failed: {0}")]
    FixedPoint(String),
    #[error("theta = {theta} is outside {range}")]
    ThetaOutOfRange { theta: f64, range: &'static str },
    #[error("element fixes infinity (|g31| = {g31:e}), isometric sphere undefined")]
    FixesInfinity { g31: f64 },
    #[error("geographic coordinate w = {w} exceeds sqrt(cos alpha) = {bound}")]
    OutsideGeographic { w: f64, bound: f64 },
    #[error("window K = {k} is too small, need K >= 2")]
    WindowTooSmall { k: i32 },
    #[error("operation requires theta = pi/3, got {theta}")]
    NotParabolicCase { theta: f64 },
    #[error("invalid word letter {0:?}")]
    InvalidLetter(char),
    #[error("edge cycle starting at {edge} does not close")]
    CycleNotClosed { edge: String },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("integer overflow in Smith normal form")]
    Overflow,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
