use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),

    #[error("parameter shift lands on a pole: {0}")]
    ShiftPole(String),

    #[error("divergence detected after {antidiagonals} anti-diagonals (last magnitude {last_magnitude:e})")]
    Divergence {
        antidiagonals: usize,
        last_magnitude: f64,
    },

    #[error("validity constraint failed: {0}")]
    Validity(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    #[error("exact arithmetic unavailable: {0}")]
    NotExact(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operator cannot be applied: {0}")]
    Operator(String),

    #[error("malformed panel: {0}")]
    Panel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_divergence(&self) -> bool {
        matches!(self, Error::Divergence { .. })
    }
}
