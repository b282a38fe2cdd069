use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("potential evaluated outside its domain at r = {0}")]
    Domain(f64),
    #[error("invalid grid specification: {0}")]
    GridSpec(String),
    #[error("eigensolver did not converge (residual off-diagonal norm {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("states were not solved on the same grid")]
    GridMismatch,
    #[error("requested {requested} states but only {available} are available")]
    TooManyStates { requested: usize, available: usize },
    #[error("state not found: {0}")]
    StateNotFound(String),
    #[error("excluded final state n = {0} for this channel")]
    ExcludedFinalState(u32),
    #[error("no closed form for channel: {0}")]
    UnknownChannel(String),
    #[error("momentum grid captures only {captured:.8} of the norm; increase p_max beyond {p_max}")]
    MomentumCutoff { captured: f64, p_max: f64 },
    #[error("atlas row {label} at ({r_inner}, {r_outer}) has energy {energy}, expected {expected}")]
    AtlasMismatch {
        label: String,
        r_inner: f64,
        r_outer: String,
        energy: f64,
        expected: f64,
    },
    #[error("state unbound: {0}")]
    Unbound(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
