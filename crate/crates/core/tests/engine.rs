use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankforge::evaluation::{replay, MetricKind};
use rankforge::*;

fn duel(id: &str, a: [&str; 2], b: [&str; 2], winner_a: bool) -> MatchRecord {
    let ranks = if winner_a { vec![1, 2] } else { vec![2, 1] };
    MatchRecord::new(id, 0, vec![Team::new("a", a), Team::new("b", b)], ranks).unwrap()
}

fn engine(system: RatingSystemKind, agg: AggregationMethod) -> RatingEngine64 {
    RatingEngine64::new(system, agg, SystemParams::default()).unwrap()
}

#[test]
fn elo_duo_win_splits_evenly() {
    let e = engine(RatingSystemKind::Elo, AggregationMethod::Sum);
    let mut store = RatingStore64::new();
    e.process_match(&duel("m", ["p1", "p2"], ["p3", "p4"], true), &mut store)
        .unwrap();
    for (p, want) in [("p1", 1502.5), ("p2", 1502.5), ("p3", 1497.5), ("p4", 1497.5)] {
        let r = store.get(&PlayerId::from(p)).unwrap();
        assert_abs_diff_eq!(r.mu, want, epsilon = 1e-12);
        assert_eq!(r.games_played, 1);
    }
}

#[test]
fn elo_max_team_uses_strongest_member_for_prediction() {
    let e = engine(RatingSystemKind::Elo, AggregationMethod::Max);
    let mut store = RatingStore64::new();
    let mut seed = |p: &str, mu: f64| {
        let mut r = default_rating(RatingSystemKind::Elo);
        r.mu = mu;
        store.insert(PlayerId::from(p), r);
    };
    seed("carry", 1900.0);
    seed("weak", 1000.0);
    seed("x", 1600.0);
    seed("y", 1600.0);
    let m = duel("m", ["carry", "weak"], ["x", "y"], false);
    let p = e.predict_ranks(&m, &store).unwrap();
    assert_eq!(p.predicted_order()[0].as_str(), "a");
    assert_eq!(p.teams[0].rating, 1900.0);
    let sum = engine(RatingSystemKind::Elo, AggregationMethod::Sum);
    assert_eq!(
        sum.predict_ranks(&m, &store).unwrap().predicted_order()[0].as_str(),
        "b"
    );
}

#[test]
fn previous_rank_remembers_last_placement() {
    let e = engine(RatingSystemKind::PreviousRank, AggregationMethod::Sum);
    let mut store = RatingStore64::new();
    let m = MatchRecord::new(
        "m",
        0,
        vec![Team::new("a", ["p1"]), Team::new("b", ["p2"]), Team::new("c", ["p3"])],
        vec![3, 1, 2],
    )
    .unwrap();
    e.process_match(&m, &mut store).unwrap();
    let last = |p: &str| store.get(&PlayerId::from(p)).unwrap().last_rank;
    assert_eq!((last("p1"), last("p2"), last("p3")), (Some(3), Some(1), Some(2)));

    let next = MatchRecord::new(
        "n",
        1,
        vec![Team::new("a", ["p1"]), Team::new("b", ["p2"]), Team::new("c", ["new"])],
        vec![1, 2, 3],
    )
    .unwrap();
    // unseen players score N/2 = 1.5, between p2 (1) and p1 (3)
    let order: Vec<String> = e
        .predict_ranks(&next, &store)
        .unwrap()
        .predicted_order()
        .iter()
        .map(|k| k.to_string())
        .collect();
    assert_eq!(order, vec!["b", "c", "a"]);
}

#[test]
fn prediction_uses_pre_match_ratings() {
    for system in RatingSystemKind::ALL {
        let e = engine(system, AggregationMethod::Sum);
        let mut store = RatingStore64::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..50 {
            let a = format!("p{}", rng.random_range(0..10));
            let b = format!("q{}", rng.random_range(0..10));
            let m = duel(&format!("m{i}"), [a.as_str(), "x"], [b.as_str(), "y"], rng.random());
            let before = e.predict_ranks(&m, &store).unwrap();
            let update = e.process_match(&m, &mut store).unwrap();
            assert_eq!(before, update.prediction, "{system}");
        }
    }
}

#[test]
fn failed_update_leaves_store_untouched() {
    let e = engine(RatingSystemKind::Glicko, AggregationMethod::Sum);
    let mut store = RatingStore64::new();
    store.insert(PlayerId::from("p1"), default_rating(RatingSystemKind::Glicko));
    // a rating without a deviation cannot take part in a Glicko update
    store.insert(PlayerId::from("broken"), default_rating(RatingSystemKind::Elo));
    let snapshot: Vec<_> = {
        let mut v: Vec<_> = store.iter().map(|(k, r)| (k.clone(), *r)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    };
    assert!(e
        .process_match(&duel("m", ["p1", "p2"], ["broken", "p3"], true), &mut store)
        .is_err());
    let mut after: Vec<_> = store.iter().map(|(k, r)| (k.clone(), *r)).collect();
    after.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(snapshot, after);
}

#[test]
fn replay_is_deterministic() {
    let data = synth::generate(&synth::SynthConfig {
        n_players: 60,
        n_matches: 500,
        teams_per_match: 4,
        seed: 11,
        ..Default::default()
    })
    .unwrap();
    for system in RatingSystemKind::ALL {
        for agg in AggregationMethod::ALL {
            let e = engine(system, agg);
            let a = replay(&e, &data.matches, MetricKind::Ndcg).unwrap();
            let b = replay(&e, &data.matches, MetricKind::Ndcg).unwrap();
            assert_eq!(a.metrics, b.metrics);
            let sorted = |log: &evaluation::ReplayLog<f64>| {
                let mut v: Vec<_> = log.store.iter().map(|(k, r)| (k.clone(), *r)).collect();
                v.sort_by(|x, y| x.0.cmp(&y.0));
                v
            };
            assert_eq!(sorted(&a), sorted(&b));
        }
    }
}

#[test]
fn random_outcomes_give_chance_accuracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let matches: Vec<MatchRecord> = (0..10_000)
        .filter_map(|i| {
            let mut pick = || format!("p{}", rng.random_range(0..500));
            let (a, b, c, d) = (pick(), pick(), pick(), pick());
            if [&b, &c, &d].contains(&&a) || [&c, &d].contains(&&b) || c == d {
                return None;
            }
            Some(
                MatchRecord::new(
                    format!("m{i:05}"),
                    i as i64,
                    vec![Team::new("a", [a, b]), Team::new("b", [c, d])],
                    if rng.random() { vec![1, 2] } else { vec![2, 1] },
                )
                .unwrap(),
            )
        })
        .collect();
    for system in [
        RatingSystemKind::Elo,
        RatingSystemKind::Glicko,
        RatingSystemKind::TrueSkill,
    ] {
        let log = replay(&engine(system, AggregationMethod::Sum), &matches, MetricKind::Accuracy).unwrap();
        let values: Vec<f64> = log.metrics.iter().flatten().copied().collect();
        let acc = values.iter().sum::<f64>() / values.len() as f64;
        assert!((acc - 0.5).abs() < 0.03, "{system}: {acc}");
    }
}

#[test]
fn single_precision_tracks_double() {
    let data = synth::generate(&synth::SynthConfig {
        n_players: 50,
        n_matches: 300,
        seed: 5,
        ..Default::default()
    })
    .unwrap();
    for system in [
        RatingSystemKind::Elo,
        RatingSystemKind::Glicko,
        RatingSystemKind::TrueSkill,
    ] {
        let e64 = engine(system, AggregationMethod::Sum);
        let e32 = RatingEngine32::new(system, AggregationMethod::Sum, SystemParams::default()).unwrap();
        let (mut s64, mut s32) = (RatingStore64::new(), RatingStore32::new());
        for m in &data.matches {
            e64.process_match(m, &mut s64).unwrap();
            e32.process_match(m, &mut s32).unwrap();
        }
        for (id, r) in s64.iter() {
            let r32 = s32.get(id).unwrap();
            let scale = r.mu.abs().max(1.0);
            assert!((r.mu - f64::from(r32.mu)).abs() / scale < 1e-3, "{system} {id}");
        }
    }
}
