use std::collections::HashMap;

use crate::num::Scalar;
use crate::types::{default_rating, PlayerId, Rating, RatingSystemKind};

/// Mutable per-run map from player to rating.
///
/// Unknown players are never an error: reads fall back to the system's
/// default rating.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RatingStore<T = f64> {
    ratings: HashMap<PlayerId, Rating<T>>,
}

impl<T: Scalar> RatingStore<T> {
    pub fn new() -> Self {
        RatingStore {
            ratings: HashMap::new(),
        }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        RatingStore {
            ratings: HashMap::with_capacity(capacity),
        }
    }

    /// Returns the stored rating, inserting the default one first if the
    /// player has never been seen.
    pub fn get_or_init(&mut self, player: &PlayerId, system: RatingSystemKind) -> Rating<T> {
        if let Some(rating) = self.ratings.get(player) {
            return *rating;
        }
        let rating = default_rating(system);
        self.ratings.insert(player.clone(), rating);
        rating
    }

    /// Like [`get_or_init`](Self::get_or_init) without inserting.
    pub fn get_or_default(&self, player: &PlayerId, system: RatingSystemKind) -> Rating<T> {
        self.ratings
            .get(player)
            .copied()
            .unwrap_or_else(|| default_rating(system))
    }

    pub fn get(&self, player: &PlayerId) -> Option<&Rating<T>> {
        self.ratings.get(player)
    }

    pub fn get_mut(&mut self, player: &PlayerId) -> Option<&mut Rating<T>> {
        self.ratings.get_mut(player)
    }

    pub fn insert(&mut self, player: PlayerId, rating: Rating<T>) -> Option<Rating<T>> {
        self.ratings.insert(player, rating)
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    /// Iterates in arbitrary order.
    pub fn iter(&self) -> impl Iterator<Item = (&PlayerId, &Rating<T>)> {
        self.ratings.iter()
    }
}
