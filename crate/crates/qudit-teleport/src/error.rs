use thiserror::Error;

use crate::register::ParticleLabel;

/// Error type shared by all modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuditError {
    #[error("dimension must be >= 2, got {0}")]
    InvalidDimension(usize),
    #[error("amplitude list has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },
    #[error("duplicate particle label {0}")]
    DuplicateLabel(ParticleLabel),
    #[error("qudit dimensions differ")]
    DimensionMismatch,
    #[error("label {0} already present in the other register")]
    LabelCollision(ParticleLabel),
    #[error("registries differ (labels or order)")]
    RegistryMismatch,
    #[error("unknown particle label {0}")]
    UnknownLabel(ParticleLabel),
    #[error("matrix is not unitary within tolerance")]
    NotUnitary,
    #[error("index {value} out of range [0, {bound})")]
    IndexOutOfRange { value: usize, bound: usize },
    #[error("the two measured particles must differ")]
    SameParticle,
    #[error("amplitude count {required} exceeds cap {cap}")]
    CapExceeded { required: u128, cap: usize },
    #[error("branch count {required} exceeds cap {cap}")]
    BranchCapExceeded { required: u128, cap: usize },
    #[error("operation called out of protocol order")]
    OutOfOrder,
    #[error("transcript shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported eavesdropper model")]
    UnsupportedModel,
    #[error("invalid state spec: {0}")]
    InvalidStateSpec(String),
}

pub type Result<T> = std::result::Result<T, QuditError>;
