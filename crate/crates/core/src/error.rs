use thiserror::Error;

use crate::spectral::Inertia;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("hyperplane does not pass through the center (residual {residual:e})")]
    PlaneNotThroughCenter { residual: f64 },

    #[error("center is (nearly) orthogonal to the normal: |aᵀc| = {dot:e}")]
    PlaneThroughOriginDirection { dot: f64 },

    #[error("origin lies inside the sphere (‖c‖ = {norm})")]
    OriginInsideSphere { norm: f64 },

    #[error("sphere is nearly tangent to the origin (‖c‖² − 1 = {gap:e})")]
    NearTangent { gap: f64 },

    #[error("not a Lorenz cone: inertia is {inertia}, expected (n−1, 0, 1)")]
    NotALorenzCone { inertia: Inertia },

    #[error("matrix is not in the kernel of X ↦ HᵀXH (‖HᵀXH‖ = {residual:e})")]
    NotInKernel { residual: f64 },

    #[error("initial point is not a member of the set (violation {violation:e})")]
    NotAMember { violation: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_) | Error::NonFinite(_))
    }
}

pub(crate) fn ensure_dim(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::InvalidDimension(format!(
            "{what}: expected {expected}, got {got}"
        )));
    }
    Ok(())
}
