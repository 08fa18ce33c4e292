use thiserror::Error;

/// Errors raised by the rating, aggregation and evaluation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown rating system `{0}`")]
    UnknownSystem(String),
    #[error("unknown aggregation method `{0}`")]
    UnknownAggregation(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid team: {0}")]
    InvalidTeam(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("rank {rank} out of range for {teams} teams")]
    InvalidRank { rank: u32, teams: usize },
    #[error("invalid match `{match_id}`: {reason}")]
    InvalidMatch { match_id: String, reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by configuration rather than data.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::UnknownSystem(_) | Error::UnknownAggregation(_) | Error::Config(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
