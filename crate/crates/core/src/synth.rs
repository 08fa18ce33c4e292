//! Seeded synthetic matches with known latent skills.

use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::aggregation::{aggregate_mu, AggregationMethod};
use crate::error::{Error, Result};
use crate::flat_config::FlatConfig;
use crate::types::{MatchRecord, PlayerId, Team, TeamKey, Timestamp};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_players: usize,
    pub latent_mean: f64,
    pub latent_sd: f64,
    pub team_size: usize,
    pub teams_per_match: usize,
    pub n_matches: usize,
    pub performance_noise_sd: f64,
    pub seed: u64,
    pub latent_team_rule: AggregationMethod,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_players: 2000,
            latent_mean: 0.0,
            latent_sd: 1.0,
            team_size: 2,
            teams_per_match: 2,
            n_matches: 50_000,
            performance_noise_sd: 0.25,
            seed: 0,
            latent_team_rule: AggregationMethod::Sum,
        }
    }
}

impl SynthConfig {
    /// Reads the fields by name; missing keys keep their defaults.
    pub fn from_config(config: &FlatConfig) -> Result<Self> {
        let d = SynthConfig::default();
        let synth = SynthConfig {
            n_players: config.parsed_or("n_players", d.n_players)?,
            latent_mean: config.parsed_or("latent_mean", d.latent_mean)?,
            latent_sd: config.parsed_or("latent_sd", d.latent_sd)?,
            team_size: config.parsed_or("team_size", d.team_size)?,
            teams_per_match: config.parsed_or("teams_per_match", d.teams_per_match)?,
            n_matches: config.parsed_or("n_matches", d.n_matches)?,
            performance_noise_sd: config.parsed_or("performance_noise_sd", d.performance_noise_sd)?,
            seed: config.parsed_or("seed", d.seed)?,
            latent_team_rule: config.parsed_or("latent_team_rule", d.latent_team_rule)?,
        };
        synth.validate()?;
        Ok(synth)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.team_size == 0 {
            return bad("team_size must be at least 1".into());
        }
        if self.teams_per_match < 2 {
            return bad("teams_per_match must be at least 2".into());
        }
        let per_match = self.team_size.checked_mul(self.teams_per_match);
        if per_match.is_none_or(|k| k > self.n_players) {
            return bad(format!(
                "{} players cannot fill {} teams of {}",
                self.n_players, self.teams_per_match, self.team_size
            ));
        }
        if !(self.latent_sd > 0.0 && self.latent_sd.is_finite()) {
            return bad(format!("latent_sd must be positive, got {}", self.latent_sd));
        }
        if !(self.performance_noise_sd > 0.0 && self.performance_noise_sd.is_finite()) {
            return bad(format!(
                "performance_noise_sd must be positive, got {}",
                self.performance_noise_sd
            ));
        }
        if !self.latent_mean.is_finite() {
            return bad("latent_mean must be finite".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub matches: Vec<MatchRecord>,
    /// Latent skill of every player, in id order.
    pub latent: Vec<(PlayerId, f64)>,
}

/// Performance of one team: the rule applied to member latents plus
/// `Normal(0, noise_sd²)` noise drawn from `rng`.
pub fn team_performance<R: Rng + ?Sized>(
    rule: AggregationMethod,
    member_latents: &[f64],
    noise_sd: f64,
    rng: &mut R,
) -> Result<f64> {
    let noise: f64 = StandardNormal.sample(rng);
    Ok(aggregate_mu(rule, member_latents)? + noise_sd * noise)
}

fn width(n: usize) -> usize {
    n.saturating_sub(1).max(1).to_string().len()
}

/// Generates `n_matches` matches. Player ids are `p<i>` and match ids
/// `m<i>`, zero-padded so lexicographic order matches numeric order; the
/// timestamp of match `i` is `i`. Teams are keyed `t1`, `t2`, ...
pub fn generate(config: &SynthConfig) -> Result<SynthOutput> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let latent_dist = Normal::new(config.latent_mean, config.latent_sd)
        .map_err(|e| Error::Config(format!("latent distribution: {e}")))?;
    let pw = width(config.n_players);
    let ids: Vec<PlayerId> = (0..config.n_players)
        .map(|i| PlayerId::from(format!("p{i:0pw$}")))
        .collect();
    let latent: Vec<f64> = (0..config.n_players).map(|_| latent_dist.sample(&mut rng)).collect();
    let keys: Vec<TeamKey> = (1..=config.teams_per_match)
        .map(|k| TeamKey::from(format!("t{k}")))
        .collect();

    let mw = width(config.n_matches);
    let per_match = config.team_size * config.teams_per_match;
    let mut matches = Vec::with_capacity(config.n_matches);
    let mut perf = vec![0.0f64; config.teams_per_match];
    let mut member_latents = Vec::with_capacity(config.team_size);
    for i in 0..config.n_matches {
        let drawn = index::sample(&mut rng, config.n_players, per_match);
        let drawn: Vec<usize> = drawn.into_iter().collect();
        let mut teams = Vec::with_capacity(config.teams_per_match);
        for (t, chunk) in drawn.chunks(config.team_size).enumerate() {
            member_latents.clear();
            member_latents.extend(chunk.iter().map(|&p| latent[p]));
            perf[t] = team_performance(
                config.latent_team_rule,
                &member_latents,
                config.performance_noise_sd,
                &mut rng,
            )?;
            teams.push(Team {
                key: keys[t].clone(),
                members: chunk.iter().map(|&p| ids[p].clone()).collect(),
            });
        }
        let mut order: Vec<usize> = (0..config.teams_per_match).collect();
        order.sort_by(|&a, &b| perf[b].total_cmp(&perf[a]).then(a.cmp(&b)));
        let mut ranks = vec![0u32; config.teams_per_match];
        for (pos, &t) in order.iter().enumerate() {
            ranks[t] = pos as u32 + 1;
        }
        matches.push(MatchRecord {
            match_id: format!("m{i:0mw$}"),
            timestamp: Timestamp::Epoch(i as i64),
            teams,
            observed_ranks: ranks,
        });
    }
    Ok(SynthOutput {
        matches,
        latent: ids.into_iter().zip(latent).collect(),
    })
}

/// Writes the `player_id,latent_skill` sidecar.
pub fn write_latent<W: Write>(latent: &[(PlayerId, f64)], out: W) -> std::result::Result<(), csv::Error> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(["player_id", "latent_skill"])?;
    for (id, skill) in latent {
        writer.write_record([id.as_str(), &skill.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SynthConfig {
        SynthConfig {
            n_players: 40,
            n_matches: 200,
            teams_per_match: 3,
            seed: 7,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn matches_are_valid() {
        let out = generate(&small()).unwrap();
        assert_eq!(out.matches.len(), 200);
        for m in &out.matches {
            m.validate().unwrap();
            assert_eq!(m.teams.len(), 3);
            assert!(m.teams.iter().all(|t| t.members.len() == 2));
        }
        assert_eq!(out.matches[0].match_id, "m000");
        assert_eq!(out.latent[5].0.as_str(), "p05");
    }

    #[test]
    fn seed_determines_output() {
        assert_eq!(generate(&small()).unwrap(), generate(&small()).unwrap());
        let other = SynthConfig { seed: 8, ..small() };
        assert_ne!(generate(&small()).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn rejects_infeasible_configs() {
        for bad in [
            SynthConfig {
                n_players: 5,
                ..small()
            },
            SynthConfig {
                team_size: 0,
                ..small()
            },
            SynthConfig {
                teams_per_match: 1,
                ..small()
            },
            SynthConfig {
                latent_sd: 0.0,
                ..small()
            },
            SynthConfig {
                performance_noise_sd: 0.0,
                ..small()
            },
        ] {
            assert!(generate(&bad).unwrap_err().is_config());
        }
    }

    #[test]
    fn reads_flat_config() {
        let c = FlatConfig::parse("n_players = 10\nteam_size=1\nlatent_team_rule = max\nseed = 3\n").unwrap();
        let s = SynthConfig::from_config(&c).unwrap();
        assert_eq!(s.n_players, 10);
        assert_eq!(s.latent_team_rule, AggregationMethod::Max);
        assert_eq!(s.n_matches, 50_000);
    }

    #[test]
    fn latent_sidecar_format() {
        let mut buf = Vec::new();
        write_latent(&[(PlayerId::from("p0"), 0.5), (PlayerId::from("p1"), -1.25)], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "player_id,latent_skill\np0,0.5\np1,-1.25\n"
        );
    }
}
