//! Final-10k accuracy of every system and aggregation on synthetic worlds
//! built with each latent team rule.
//!
//! cargo run --release -p rankforge --example convergence_sweep [seed...]

use rankforge::evaluation::{replay, MetricKind};
use rankforge::synth::{generate, SynthConfig};
use rankforge::{AggregationMethod, RatingEngine64, RatingSystemKind, SystemParams};

const TAIL: usize = 10_000;

fn main() {
    let seeds: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("seed")).collect();
    let seeds = if seeds.is_empty() { vec![1] } else { seeds };
    println!("seed,world,system,aggregation,accuracy");
    for seed in seeds {
        for rule in AggregationMethod::ALL {
            let config = SynthConfig {
                latent_team_rule: rule,
                seed,
                ..SynthConfig::default()
            };
            let data = generate(&config).expect("synth");
            for system in RatingSystemKind::ALL {
                for agg in AggregationMethod::ALL {
                    let engine = RatingEngine64::new(system, agg, SystemParams::default()).expect("engine");
                    let log = replay(&engine, &data.matches, MetricKind::Accuracy).expect("replay");
                    let tail: Vec<f64> = log.metrics[log.metrics.len() - TAIL..]
                        .iter()
                        .flatten()
                        .copied()
                        .collect();
                    let acc = tail.iter().sum::<f64>() / tail.len() as f64;
                    println!("{seed},{rule},{system},{agg},{acc:.4}");
                }
            }
        }
    }
}
