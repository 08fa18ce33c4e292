use proptest::prelude::*;
use rankforge::rating::*;
use rankforge::*;

fn mus_and_sigmas() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..=50).prop_flat_map(|n| {
        (
            prop::collection::vec(500.0f64..3000.0, n),
            prop::collection::vec(30.0f64..350.0, n),
        )
    })
}

proptest! {
    #[test]
    fn elo_probabilities_sum_to_one((mus, _) in mus_and_sigmas()) {
        let field = Field::from_mus(&mus);
        let p = SystemParams::default();
        let total: f64 = (0..mus.len()).map(|i| elo_win_probability(&field, i, &p).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn glicko_probabilities_sum_to_one((mus, sigmas) in mus_and_sigmas()) {
        let field = Field::from_mus_sigmas(&mus, &sigmas);
        let p = SystemParams::default();
        let total: f64 = (0..mus.len()).map(|i| glicko_win_probability(&field, i, &p).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn elo_team_deltas_cancel((mus, _) in mus_and_sigmas(), seed in any::<u64>()) {
        let n = mus.len();
        let mut ranks: Vec<u32> = (1..=n as u32).collect();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(ranks.as_mut_slice(), &mut rng);
        let field = Field::from_mus(&mus);
        let p = SystemParams::default();
        let total: f64 = (0..n)
            .map(|i| {
                let pr = elo_win_probability(&field, i, &p).unwrap();
                let r = normalize_observed_rank::<f64>(n, ranks[i]).unwrap();
                elo_update_team(mus[i], r, pr, &p) - mus[i]
            })
            .sum();
        prop_assert!(total.abs() < 1e-9);
    }

    #[test]
    fn member_deltas_sum_to_team_delta(
        members in prop::collection::vec(1.0f64..3000.0, 1..8),
        delta in -50.0f64..50.0,
    ) {
        let d = distribute_team_delta(&members, delta).unwrap();
        prop_assert!(!d.uniform_fallback);
        prop_assert!((d.deltas.iter().sum::<f64>() - delta).abs() < 1e-9);
    }

    #[test]
    fn glicko_never_widens_deviation((mus, sigmas) in mus_and_sigmas(), winner in any::<prop::sample::Index>()) {
        let field = Field::from_mus_sigmas(&mus, &sigmas);
        let p = SystemParams::default();
        let n = mus.len();
        let w = winner.index(n);
        for (i, &sigma) in sigmas.iter().enumerate() {
            let rank = if i == w { 1 } else if i < w { i as u32 + 2 } else { i as u32 + 1 };
            let r = normalize_observed_rank::<f64>(n, rank).unwrap();
            let up = glicko_update_team(&field, i, r, &p).unwrap();
            prop_assert!(up.sigma <= sigma + 1e-9);
            prop_assert!(up.sigma > 0.0);
        }
    }

    #[test]
    fn trueskill_posterior_is_narrower(
        mu_w in 0.0f64..50.0, s_w in 0.5f64..10.0,
        mu_l in 0.0f64..50.0, s_l in 0.5f64..10.0,
    ) {
        let p = SystemParams::default();
        let up = trueskill_update_pair(SkillEstimate::new(mu_w, s_w), SkillEstimate::new(mu_l, s_l), &p).unwrap();
        prop_assert!(up.winner.mu >= mu_w && up.loser.mu <= mu_l);
        prop_assert!(up.winner.sigma <= s_w && up.loser.sigma <= s_l);
        prop_assert!(up.winner.sigma > 0.0 && up.loser.sigma > 0.0);
    }

    #[test]
    fn prediction_ignores_team_listing_order(
        (mus, _) in mus_and_sigmas(),
        rotate in any::<prop::sample::Index>(),
    ) {
        let n = mus.len();
        let mut store = RatingStore64::new();
        let mut teams = Vec::new();
        for (i, &mu) in mus.iter().enumerate() {
            let mut r = default_rating(RatingSystemKind::Elo);
            r.mu = mu;
            store.insert(PlayerId::from(format!("p{i}")), r);
            teams.push(Team::new(format!("t{i:02}").as_str(), [format!("p{i}")]));
        }
        let ranks: Vec<u32> = (1..=n as u32).collect();
        let m = MatchRecord::new("m", 0, teams.clone(), ranks.clone()).unwrap();
        let k = rotate.index(n);
        teams.rotate_left(k);
        let mut rotated_ranks = ranks;
        rotated_ranks.rotate_left(k);
        let m2 = MatchRecord::new("m", 0, teams, rotated_ranks).unwrap();
        let e = RatingEngine64::new(RatingSystemKind::Elo, AggregationMethod::Sum, SystemParams::default()).unwrap();
        prop_assert_eq!(
            e.predict_ranks(&m, &store).unwrap().predicted_order(),
            e.predict_ranks(&m2, &store).unwrap().predicted_order()
        );
    }
}

#[test]
fn normalized_rank_numerators_are_exact() {
    for n in 2..=50usize {
        let total: f64 = (1..=n as u32)
            .map(|r| normalize_observed_rank::<f64>(n, r).unwrap())
            .sum();
        assert!((total - 1.0).abs() <= 4.0 * f64::EPSILON * n as f64, "n={n}");
        let numerators: usize = (1..=n).map(|r| n - r).sum();
        assert_eq!(numerators, n * (n - 1) / 2);
    }
}
