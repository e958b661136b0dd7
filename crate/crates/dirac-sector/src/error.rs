use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("opening angle must lie in (0, 2*pi], got {0}")]
    InvalidOmega(f64),

    #[error("mass must be finite and nonnegative, got {0}")]
    InvalidMass(f64),

    #[error("coupling strength must be finite, got {0}")]
    InvalidCoupling(f64),

    #[error("extension parameter alpha must lie in [0, pi), got {0}")]
    InvalidAlpha(f64),

    #[error("angle {theta} outside the sector range [0, {omega}]")]
    ThetaOutOfRange { theta: f64, omega: f64 },

    #[error("channel k={k} is essentially self-adjoint (delta={delta}); no extension matrix exists")]
    EssentiallySelfAdjointChannel { k: usize, delta: f64 },

    #[error("the partial-wave action requires zero mass (channels couple otherwise), got m={0}")]
    NonzeroMass(f64),

    #[error("invalid log grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: {what} needs {needed}, got {got}")]
    Resolution {
        what: &'static str,
        needed: String,
        got: String,
    },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("ODE integration stalled: step size underflow at r={r:.3e}")]
    Stiffness { r: f64 },

    #[error("shooting solution overflowed or lost finiteness at r={r:.3e}")]
    NonFiniteSolution { r: f64 },

    #[error("exponent fit window is degenerate: {0}")]
    DegenerateFitWindow(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("malformed CSV at row {row}: {msg}")]
    Csv { row: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
