use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::rating::PredictionRecord;
use crate::types::{validate_ranks, TeamKey};

/// NDCG of a predicted ordering, given each team's observed rank.
///
/// Gains are linear, `N - rank`, discounted by `log2(position + 1)`.
pub fn ndcg<T: Scalar>(predicted_order: &[TeamKey], observed_ranks: &HashMap<TeamKey, u32>) -> Result<T> {
    if predicted_order.len() != observed_ranks.len() {
        return Err(Error::InvalidInput(format!(
            "{} predicted teams but {} observed",
            predicted_order.len(),
            observed_ranks.len()
        )));
    }
    let ranks = predicted_order
        .iter()
        .map(|key| {
            observed_ranks
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("team `{key}` has no observed rank")))
        })
        .collect::<Result<Vec<u32>>>()?;
    ndcg_from_ranks(&ranks)
}

/// NDCG from the observed ranks listed in predicted order.
pub fn ndcg_from_ranks<T: Scalar>(ranks_in_predicted_order: &[u32]) -> Result<T> {
    let n = ranks_in_predicted_order.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!("ndcg needs at least 2 teams, got {n}")));
    }
    validate_ranks(ranks_in_predicted_order)?;
    let discount = |pos: usize| T::one() / T::from_count(pos + 2).log2();
    let dcg: T = ranks_in_predicted_order
        .iter()
        .enumerate()
        .map(|(pos, &r)| T::from_count(n - r as usize) * discount(pos))
        .sum();
    // the ideal ordering lists gains n-1, n-2, ..., 0
    let idcg: T = (0..n).map(|pos| T::from_count(n - 1 - pos) * discount(pos)).sum();
    if dcg == idcg {
        return Ok(T::one());
    }
    Ok(dcg / idcg)
}

/// 1 when the team predicted first actually won a head-to-head match.
pub fn accuracy_outcome<T: Scalar>(prediction: &PredictionRecord<T>) -> Result<u8> {
    if prediction.teams.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "accuracy is defined for head-to-head matches, got {} teams",
            prediction.teams.len()
        )));
    }
    Ok(u8::from(prediction.teams[0].observed_rank == 1))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::rating::PredictedTeam;
    use approx::assert_abs_diff_eq;

    fn keys(ks: &[&str]) -> Vec<TeamKey> {
        ks.iter().map(|&k| TeamKey::from(k)).collect()
    }

    fn observed(pairs: &[(&str, u32)]) -> HashMap<TeamKey, u32> {
        pairs.iter().map(|&(k, r)| (TeamKey::from(k), r)).collect()
    }

    #[test]
    fn ndcg_examples() {
        let perfect: f64 = ndcg(
            &keys(&["a", "b", "c", "d"]),
            &observed(&[("a", 1), ("b", 2), ("c", 3), ("d", 4)]),
        )
        .unwrap();
        assert_eq!(perfect, 1.0);
        let reversed: f64 = ndcg(&keys(&["a", "b"]), &observed(&[("a", 2), ("b", 1)])).unwrap();
        // golden_values.py: 0.63092975357145744
        assert_abs_diff_eq!(reversed, 0.63092975357145744, epsilon = 1e-15);
        let three: f64 = ndcg(&keys(&["A", "B", "C"]), &observed(&[("A", 2), ("B", 1), ("C", 3)])).unwrap();
        assert_abs_diff_eq!(three, 0.85971869985219717, epsilon = 1e-15);
        let four: f64 = ndcg_from_ranks(&[3, 1, 4, 2]).unwrap();
        assert_abs_diff_eq!(four, 0.78837739148537369, epsilon = 1e-15);
    }

    #[test]
    fn ndcg_rejects_mismatched_keys() {
        assert!(ndcg::<f64>(&keys(&["a", "x"]), &observed(&[("a", 1), ("b", 2)])).is_err());
        assert!(ndcg::<f64>(&keys(&["a"]), &observed(&[("a", 1), ("b", 2)])).is_err());
        assert!(ndcg_from_ranks::<f64>(&[1]).is_err());
        assert!(ndcg_from_ranks::<f64>(&[1, 1]).is_err());
    }

    fn record(first_rank: u32, n: usize) -> PredictionRecord<f64> {
        let mut teams = vec![PredictedTeam {
            key: "a".into(),
            rating: 0.0,
            observed_rank: first_rank,
        }];
        let mut rank = 1;
        while teams.len() < n {
            if rank != first_rank {
                teams.push(PredictedTeam {
                    key: format!("t{rank}").into(),
                    rating: 0.0,
                    observed_rank: rank,
                });
            }
            rank += 1;
        }
        PredictionRecord {
            match_id: "m".into(),
            teams,
        }
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy_outcome(&record(1, 2)).unwrap(), 1);
        assert_eq!(accuracy_outcome(&record(2, 2)).unwrap(), 0);
        assert!(accuracy_outcome(&record(1, 3)).is_err());
    }
}
