//! Replication runner and the Bernoulli/composite estimator.
//!
//! Replications are independent: each one owns a counter-based RNG stream
//! (ChaCha with the replication index as the stream id), so results are
//! bit-identical no matter how rayon schedules them. Aggregation reduces
//! integer event counts (or, under antithetic pairing, pair means in fixed
//! order), keeping estimates deterministic as well.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hetnet_core::{Direction, MobilityProfile, NetworkModel};

use crate::config::{
    window_radii, AngleDomain, EstimandNeeds, EstimateWithCI, EventSpec, McError, Result, SimConfig,
};
use crate::pipeline::{associate, move_and_detect_handoff, sir};
use crate::realization::sample_realization;

const RESAMPLE_CAP: u32 = 10_000;
const DISCARD_WARNING_FRACTION: f64 = 0.05;

/// Everything measured on one replication.
#[derive(Debug, Clone, Copy)]
pub struct RepOutcome {
    pub tier: usize,
    pub r: f64,
    /// Movement angle relative to the away-from-AP axis; NaN when the
    /// estimand involves no movement.
    pub theta: f64,
    /// Received SIR (linear); NaN when not computed, +inf when the serving
    /// tier has no interferer in the window.
    pub sir: f64,
    pub covered: bool,
    pub handoff: bool,
    /// Detection disc clipped the window; excluded from estimates.
    pub discarded: bool,
    pub resamples: u32,
}

fn draw_theta<R: Rng>(profile: &MobilityProfile, domain: AngleDomain, rng: &mut R) -> f64 {
    match profile.direction {
        Direction::Fixed(theta) => theta,
        Direction::Uniform => match domain {
            AngleDomain::FullCircle => 2.0 * std::f64::consts::PI * rng.random::<f64>(),
            AngleDomain::HalfCircle => std::f64::consts::PI * rng.random::<f64>(),
        },
    }
}

/// Run one replication (and its antithetic partner when asked): sample until
/// every tier is populated, associate, then optionally evaluate SIR and the
/// movement step.
fn run_unit(
    net: &NetworkModel,
    profile: &MobilityProfile,
    windows: &[f64],
    needs: EstimandNeeds,
    domain: AngleDomain,
    antithetic: bool,
    rng: &mut ChaCha8Rng,
) -> Result<(RepOutcome, Option<RepOutcome>)> {
    let mut resamples = 0u32;
    let (real, serving) = loop {
        let real = sample_realization(net, windows, needs.sir, rng)?;
        if let Some(serving) = associate(&real, net) {
            break (real, serving);
        }
        resamples += 1;
        if resamples > RESAMPLE_CAP {
            return Err(McError::ResampleLimit {
                attempts: resamples,
            });
        }
    };

    let (sir_value, covered) = if needs.sir {
        let s = sir(&real, &serving, net);
        (s, s >= net.tiers()[serving.tier].sir_threshold)
    } else {
        (f64::NAN, false)
    };

    let (theta, handoff, discarded) = if needs.movement {
        let theta = draw_theta(profile, domain, rng);
        let m = move_and_detect_handoff(&real, &serving, profile.speed, theta);
        (theta, m.handoff, !m.contained)
    } else {
        (f64::NAN, false, false)
    };

    let base = RepOutcome {
        tier: serving.tier,
        r: serving.distance,
        theta,
        sir: sir_value,
        covered,
        handoff,
        discarded,
        resamples,
    };

    let partner = if antithetic {
        let theta2 = if needs.movement {
            (theta + std::f64::consts::PI) % (2.0 * std::f64::consts::PI)
        } else {
            f64::NAN
        };
        let (handoff2, discarded2) = if needs.movement {
            let m = move_and_detect_handoff(&real, &serving, profile.speed, theta2);
            (m.handoff, !m.contained)
        } else {
            (false, false)
        };
        Some(RepOutcome {
            theta: theta2,
            handoff: handoff2,
            discarded: discarded2,
            resamples: 0,
            ..base
        })
    } else {
        None
    };

    Ok((base, partner))
}

/// Run all replications for the given estimand shape, in parallel, in
/// deterministic order.
pub fn run_replications(
    net: &NetworkModel,
    profile: &MobilityProfile,
    cfg: &SimConfig,
    needs: EstimandNeeds,
) -> Result<Vec<RepOutcome>> {
    cfg.validate()?;
    if cfg.antithetic && matches!(profile.direction, Direction::Fixed(_)) {
        return Err(McError::InvalidConfig(
            "antithetic pairing flips the movement direction and is only \
             meaningful for the uniform direction distribution"
                .into(),
        ));
    }
    let windows = window_radii(net, profile, needs, cfg);

    if cfg.antithetic {
        let pairs = cfg.reps.div_ceil(2);
        let results: Vec<Result<(RepOutcome, Option<RepOutcome>)>> = (0..pairs)
            .into_par_iter()
            .map(|p| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(p as u64);
                run_unit(
                    net,
                    profile,
                    &windows,
                    needs,
                    cfg.angle_domain,
                    true,
                    &mut rng,
                )
            })
            .collect();
        let mut out = Vec::with_capacity(pairs * 2);
        for r in results {
            let (a, b) = r?;
            out.push(a);
            out.push(b.expect("antithetic unit returns a partner"));
        }
        Ok(out)
    } else {
        let results: Vec<Result<(RepOutcome, Option<RepOutcome>)>> = (0..cfg.reps)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(i as u64);
                run_unit(
                    net,
                    profile,
                    &windows,
                    needs,
                    cfg.angle_domain,
                    false,
                    &mut rng,
                )
            })
            .collect();
        results.into_iter().map(|r| r.map(|(a, _)| a)).collect()
    }
}

fn event_value(event: &EventSpec, beta: f64, o: &RepOutcome) -> f64 {
    match event {
        EventSpec::AlwaysTrue => 1.0,
        EventSpec::Handoff => f64::from(u8::from(o.handoff)),
        EventSpec::Coverage => f64::from(u8::from(o.covered)),
        EventSpec::CoverageAndNoHandoff => f64::from(u8::from(o.covered && !o.handoff)),
        EventSpec::TierAssociation(k) => f64::from(u8::from(o.tier == *k)),
        EventSpec::JointTierCoverageNoHandoff(k) => {
            f64::from(u8::from(o.tier == *k && o.covered && !o.handoff))
        }
        EventSpec::CompositeCost { .. } => {
            if o.covered && !o.handoff {
                1.0
            } else if o.covered {
                1.0 - beta
            } else {
                0.0
            }
        }
    }
}

fn is_bernoulli(event: &EventSpec) -> bool {
    !matches!(event, EventSpec::CompositeCost { .. })
}

/// Estimate several events from a single replication stream. All events
/// share the same realizations, so algebraic identities between them (for
/// example the coverage partition by the handoff event) hold exactly.
pub fn estimate_many(
    events: &[EventSpec],
    net: &NetworkModel,
    profile: &MobilityProfile,
    cfg: &SimConfig,
) -> Result<Vec<EstimateWithCI>> {
    if cfg.reps < 100 {
        return Err(McError::InvalidConfig(format!(
            "estimation needs at least 100 replications, got {}",
            cfg.reps
        )));
    }
    let needs = events
        .iter()
        .fold(EstimandNeeds::default(), |acc, e| acc.union(e.needs()));
    let outcomes = run_replications(net, profile, cfg, needs)?;
    let discarded = outcomes.iter().filter(|o| o.discarded).count();
    let resamples: u64 = outcomes.iter().map(|o| u64::from(o.resamples)).sum();

    let mut estimates = Vec::with_capacity(events.len());
    for event in events {
        let beta = event.resolve_beta(net);
        let est = if cfg.antithetic {
            // pair means in fixed order; a pair with any discarded member
            // is dropped whole
            let mut used = 0usize;
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for pair in outcomes.chunks_exact(2) {
                if pair[0].discarded || pair[1].discarded {
                    continue;
                }
                let m =
                    0.5 * (event_value(event, beta, &pair[0]) + event_value(event, beta, &pair[1]));
                sum += m;
                sum_sq += m * m;
                used += 1;
            }
            let mean = sum / used as f64;
            let var = (sum_sq / used as f64 - mean * mean).max(0.0);
            EstimateWithCI {
                estimate: mean,
                std_error: (var / used as f64).sqrt(),
                reps: used * 2,
                discarded,
                resamples,
                seed: cfg.seed,
                discard_warning: discarded as f64
                    > DISCARD_WARNING_FRACTION * outcomes.len() as f64,
            }
        } else {
            let mut used = 0u64;
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for o in &outcomes {
                if o.discarded {
                    continue;
                }
                let value = event_value(event, beta, o);
                sum += value;
                sum_sq += value * value;
                used += 1;
            }
            let n = used as f64;
            let mean = sum / n;
            let var = if is_bernoulli(event) {
                mean * (1.0 - mean)
            } else {
                (sum_sq / n - mean * mean).max(0.0)
            };
            EstimateWithCI {
                estimate: mean,
                std_error: (var / n).sqrt(),
                reps: used as usize,
                discarded,
                resamples,
                seed: cfg.seed,
                discard_warning: discarded as f64
                    > DISCARD_WARNING_FRACTION * outcomes.len() as f64,
            }
        };
        estimates.push(est);
    }
    Ok(estimates)
}

/// Estimate a single event; see [`estimate_many`].
pub fn estimate(
    event: EventSpec,
    net: &NetworkModel,
    profile: &MobilityProfile,
    cfg: &SimConfig,
) -> Result<EstimateWithCI> {
    Ok(estimate_many(&[event], net, profile, cfg)?
        .pop()
        .expect("one event in, one estimate out"))
}
