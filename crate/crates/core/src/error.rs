use thiserror::Error;

/// Error type shared across the benchmark library.
#[derive(Debug, Error)]
pub enum HeatplanError {
    #[error("invalid tank parameters: {0}")]
    InvalidParams(String),

    #[error("invalid episode spec: {0}")]
    InvalidSpec(String),

    #[error("invalid reward parameters: {0}")]
    InvalidReward(String),

    #[error("non-finite temperature: {0}")]
    NonFiniteTemperature(f64),

    #[error("temperature {0} outside the sane range [-50, 150]")]
    TemperatureOutOfRange(f64),

    #[error("episode already finished; reset before stepping again")]
    EpisodeFinished,

    #[error("brute force refused: deadline {0} exceeds the 2^D budget guard (max 20)")]
    BruteForceTooLarge(usize),

    #[error("training fault: {0}")]
    TrainingFault(String),

    #[error("policy file error: {0}")]
    PolicyFormat(String),

    #[error("sweep configuration error: {0}")]
    SweepConfig(String),

    #[error("nothing to plot: empty row set")]
    EmptyPlot,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
