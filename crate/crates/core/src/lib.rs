//! Skill rating with team aggregation.
//!
//! Extended Elo, Glicko and TrueSkill (plus a PreviousRank baseline) rate
//! players from team matches whose team rating is the SUM, MAX or MIN of
//! the members' ratings. The [`evaluation`] module replays a chronological
//! match stream, scores every prediction (accuracy or NDCG) and summarises
//! the scores for three player populations.
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`); the `*64` and
//! `*32` aliases name the common instantiations.

pub mod aggregation;
mod error;
pub mod evaluation;
pub mod flat_config;
pub mod ingestion;
mod num;
pub mod rating;
mod store;
pub mod synth;
mod types;

pub use aggregation::{aggregate_mu, aggregate_sigma, contribution_weights, AggregationMethod, Weights};
pub use error::{Error, Result};
pub use num::Scalar;
pub use rating::{PredictionRecord, RatingEngine, SystemParams, TrueSkillMode};
pub use store::RatingStore;
pub use types::{
    default_rating, validate_ranks, Field, FieldEntry, MatchRecord, PlayerId, Rating, RatingSystemKind, Team, TeamKey,
    Timestamp,
};

pub type Rating64 = Rating<f64>;
pub type Rating32 = Rating<f32>;
pub type RatingStore64 = RatingStore<f64>;
pub type RatingStore32 = RatingStore<f32>;
pub type Field64 = Field<f64>;
pub type Field32 = Field<f32>;
pub type SystemParams64 = SystemParams<f64>;
pub type SystemParams32 = SystemParams<f32>;
pub type RatingEngine64 = RatingEngine<f64>;
pub type RatingEngine32 = RatingEngine<f32>;
pub type PredictionRecord64 = PredictionRecord<f64>;
pub type PredictionRecord32 = PredictionRecord<f32>;
