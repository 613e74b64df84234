use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("momentum must be nonzero")]
    ZeroMomentum,
    #[error("mass must be finite and non-negative, got {0}")]
    NegativeMass(f64),
    #[error("degenerate event: x = tau = 0")]
    DegenerateEvent,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("analytic derivative requested but none supplied")]
    MissingDerivative,
    #[error("zero field: relative residual undefined")]
    ZeroField,
    #[error("energy representation needs m > 0")]
    MasslessEnergyMap,
    #[error("boundary condition violated at E = {edge}: |g| = {value:.3e} exceeds {limit:.3e}")]
    BoundaryViolation { edge: f64, value: f64, limit: f64 },
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("grid does not cover the packet: needs |p| up to {needed}, grid ends at {p_max}")]
    InsufficientCoverage { needed: f64, p_max: f64 },
    #[error("label {label} out of grid range (max resolvable {max})")]
    LabelOutOfRange { label: f64, max: f64 },
    #[error("invalid time window: {0}")]
    InvalidWindow(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
