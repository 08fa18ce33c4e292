//! Canonical match CSV and adapters from raw dataset exports.
//!
//! The canonical format is UTF-8, comma-separated, RFC 4180 quoted, with the
//! header `match_id,timestamp,team_key,player_id,team_rank` and one row per
//! (match, player).

mod adapter;
mod canonical;

use thiserror::Error;

pub use adapter::{adapt_dataset, AdaptOutput, AdapterSpec, RankSemantics};
pub use canonical::{
    assemble_matches, canonical_rows, parse_canonical, read_canonical_rows, write_canonical, write_rows, CanonicalRow,
    ParseOptions, ParseReport, CANONICAL_HEADER,
};

/// At most this many diagnostics are kept per report; the rest are counted.
pub const MAX_DIAGNOSTICS: usize = 1000;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<crate::Error> for IngestError {
    fn from(e: crate::Error) -> Self {
        if let crate::Error::Config(msg) = e {
            IngestError::Config(msg)
        } else if e.is_config() {
            IngestError::Config(e.to_string())
        } else {
            IngestError::Data(e.to_string())
        }
    }
}

/// Bounded list of line-numbered messages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub messages: Vec<String>,
    pub dropped: usize,
}

impl Diagnostics {
    pub fn push(&mut self, message: String) {
        log::debug!("{message}");
        if self.messages.len() < MAX_DIAGNOSTICS {
            self.messages.push(message);
        } else {
            self.dropped += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.messages.len() + self.dropped
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
