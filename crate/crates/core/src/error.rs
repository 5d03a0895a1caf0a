//! Crate-wide error type and result alias.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("model file has bad magic bytes")]
    BadMagic,

    #[error("model file version {0} is not supported")]
    UnsupportedVersion(u32),

    #[error("model shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("model file checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    ChecksumMismatch { stored: u64, computed: u64 },

    #[error("model file is truncated or malformed: {0}")]
    MalformedModel(String),

    #[error("training diverged: non-finite loss in stage {stage}, epoch {epoch}")]
    TrainingDiverged { stage: u8, epoch: usize },

    #[error("non-positive {quantity} at cell {location} (t = {time})")]
    Positivity {
        quantity: &'static str,
        location: String,
        time: f64,
    },

    #[error("non-finite value at cell {location} (t = {time})")]
    NonFinite { location: String, time: f64 },

    #[error("unknown problem '{name}'; available: {available}")]
    UnknownProblem { name: String, available: String },

    #[error("no exact solution for problem '{0}' (use a fine-grid reference)")]
    NoExactSolution(String),

    #[error("initial data generates vacuum; the Riemann solver does not cover vacuum states")]
    Vacuum,

    #[error("Riemann pressure iteration failed to converge after {0} iterations")]
    RiemannNoConvergence(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems, 3 for
    /// numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::UnknownProblem { .. }
            | Error::InvalidInput(_)
            | Error::BadMagic
            | Error::UnsupportedVersion(_)
            | Error::ShapeMismatch { .. }
            | Error::ChecksumMismatch { .. }
            | Error::MalformedModel(_) => 2,
            Error::TrainingDiverged { .. }
            | Error::Positivity { .. }
            | Error::NonFinite { .. }
            | Error::Vacuum
            | Error::RiemannNoConvergence(_) => 3,
            _ => 1,
        }
    }
}
