//! Per-replication mechanics: biased association, SIR, movement and handoff
//! detection.

use hetnet_core::NetworkModel;

use crate::realization::Realization;

/// Serving AP after biased maximum-average-received-power association.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Association {
    pub tier: usize,
    pub ap: usize,
    pub distance: f64,
}

/// Evaluates (d^2)^{-alpha/2} with cheap paths for the exponents the
/// experiments actually sweep; the general branch costs a `powf` per
/// interferer, which dominates the whole simulation otherwise.
#[derive(Debug, Clone, Copy)]
pub(crate) enum LossExponent {
    Four,
    ThreeAndHalf,
    Three,
    General(f64),
}

impl LossExponent {
    pub(crate) fn new(alpha: f64) -> Self {
        if alpha == 4.0 {
            LossExponent::Four
        } else if alpha == 3.5 {
            LossExponent::ThreeAndHalf
        } else if alpha == 3.0 {
            LossExponent::Three
        } else {
            LossExponent::General(alpha)
        }
    }

    /// d^{-alpha} from the squared distance.
    pub(crate) fn gain(self, d2: f64) -> f64 {
        match self {
            LossExponent::Four => 1.0 / (d2 * d2),
            LossExponent::ThreeAndHalf => {
                let d = d2.sqrt();
                1.0 / (d * d2 * d.sqrt())
            }
            LossExponent::Three => 1.0 / (d2 * d2.sqrt()),
            LossExponent::General(alpha) => d2.powf(-0.5 * alpha),
        }
    }
}

fn squared_norm(p: [f64; 2]) -> f64 {
    p[0] * p[0] + p[1] * p[1]
}

/// Index and squared distance of the nearest point, if any.
fn nearest(points: &[[f64; 2]]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &p) in points.iter().enumerate() {
        let d2 = squared_norm(p);
        match best {
            Some((_, bd2)) if bd2 <= d2 => {}
            _ => best = Some((i, d2)),
        }
    }
    best
}

/// Biased association: per tier the nearest AP is the candidate, the tier
/// with the largest biased average received power wins. Ties break toward
/// the lower tier index (a measure-zero event under the PPP).
///
/// Returns `None` when some tier has no point inside its window; the caller
/// resamples and counts the event.
pub fn associate(real: &Realization, net: &NetworkModel) -> Option<Association> {
    let alpha = net.alpha;
    let l0 = net.reference_loss;
    let r0 = net.reference_distance;
    let loss = LossExponent::new(alpha);
    let mut best: Option<(f64, Association)> = None;
    for (k, (tier, pts)) in net.tiers().iter().zip(&real.tiers).enumerate() {
        let (ap, d2) = nearest(&pts.xy)?;
        // P L0 (r/r0)^{-alpha} B; the reference terms are common factors
        // but kept for auditability.
        let power = tier.power_mw() * l0 * loss.gain(d2 / (r0 * r0)) * tier.bias;
        let candidate = Association {
            tier: k,
            ap,
            distance: d2.sqrt(),
        };
        match best {
            Some((bp, _)) if bp >= power => {}
            _ => best = Some((power, candidate)),
        }
    }
    best.map(|(_, a)| a)
}

/// Received SIR at the initial location: serving-tier interferers only
/// (orthogonal spectrum across tiers). Transmit power and reference loss
/// cancel within the tier but are included in both numerator and
/// denominator. Returns +inf when the serving tier has no other AP in the
/// window; such replications count as covered.
pub fn sir(real: &Realization, serving: &Association, net: &NetworkModel) -> f64 {
    let tier = &net.tiers()[serving.tier];
    let pts = &real.tiers[serving.tier];
    debug_assert_eq!(pts.xy.len(), pts.fading.len(), "fading gains missing");
    let loss = LossExponent::new(net.alpha);
    let scale = tier.power_mw() * net.reference_loss;
    let r0_sq = net.reference_distance * net.reference_distance;
    let signal =
        scale * pts.fading[serving.ap] * loss.gain(squared_norm(pts.xy[serving.ap]) / r0_sq);
    let mut interference = 0.0;
    for (i, &p) in pts.xy.iter().enumerate() {
        if i == serving.ap {
            continue;
        }
        interference += scale * pts.fading[i] * loss.gain(squared_norm(p) / r0_sq);
    }
    if interference == 0.0 {
        f64::INFINITY
    } else {
        signal / interference
    }
}

/// Outcome of one movement step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveOutcome {
    pub handoff: bool,
    /// False when the handoff detection disc was not contained in the
    /// serving tier's window; the replication must be discarded.
    pub contained: bool,
}

/// Displace the user by v at angle theta from the away-from-serving-AP axis
/// and check for a serving-tier AP closer than the serving one to the new
/// location.
pub fn move_and_detect_handoff(
    real: &Realization,
    serving: &Association,
    v: f64,
    theta: f64,
) -> MoveOutcome {
    if v == 0.0 {
        return MoveOutcome {
            handoff: false,
            contained: true,
        };
    }
    let pts = &real.tiers[serving.tier];
    let s = pts.xy[serving.ap];
    let r = serving.distance;
    // away-from-AP unit vector; the serving AP is never exactly at the
    // origin under the continuous distribution
    let (ux, uy) = if r > 0.0 {
        (-s[0] / r, -s[1] / r)
    } else {
        (1.0, 0.0)
    };
    let (sin_t, cos_t) = theta.sin_cos();
    let l2 = [v * (ux * cos_t - uy * sin_t), v * (uy * cos_t + ux * sin_t)];
    let detection_sq = {
        let dx = l2[0] - s[0];
        let dy = l2[1] - s[1];
        dx * dx + dy * dy
    };
    let detection = detection_sq.sqrt();
    let contained = (l2[0].hypot(l2[1]) + detection) <= pts.window_radius;
    let mut handoff = false;
    for (i, &p) in pts.xy.iter().enumerate() {
        if i == serving.ap {
            continue;
        }
        let dx = p[0] - l2[0];
        let dy = p[1] - l2[1];
        if dx * dx + dy * dy < detection_sq {
            handoff = true;
            break;
        }
    }
    MoveOutcome { handoff, contained }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::TierPoints;
    use hetnet_core::{NetworkModel, TierParams};

    fn net_k1() -> NetworkModel {
        NetworkModel::new(
            vec![TierParams::new(1e-3, 20.0, 1.0, 1.0).unwrap()],
            3.5,
            0.0,
        )
        .unwrap()
    }

    fn realization(points: Vec<[f64; 2]>, fading: Vec<f64>) -> Realization {
        Realization {
            tiers: vec![TierPoints {
                xy: points,
                fading,
                window_radius: 1000.0,
            }],
        }
    }

    #[test]
    fn single_tier_associates_with_nearest() {
        let real = realization(vec![[30.0, 0.0], [0.0, 10.0], [-20.0, 5.0]], vec![]);
        let a = associate(&real, &net_k1()).unwrap();
        assert_eq!(a.ap, 1);
        assert!((a.distance - 10.0).abs() < 1e-12);
    }

    #[test]
    fn empty_tier_reports_none() {
        let real = realization(vec![], vec![]);
        assert!(associate(&real, &net_k1()).is_none());
    }

    #[test]
    fn bias_shifts_association_between_tiers() {
        // Two tiers, nearest APs at 10 m and 25 m with equal powers: the
        // near one wins until the far tier's bias compensates the path-loss
        // gap.
        let tiers = vec![
            TierParams::new(1e-4, 20.0, 1.0, 1.0).unwrap(),
            TierParams::new(1e-3, 20.0, 1.0, 1.0).unwrap(),
        ];
        let net = NetworkModel::new(tiers, 3.5, 0.0).unwrap();
        let real = Realization {
            tiers: vec![
                TierPoints {
                    xy: vec![[25.0, 0.0]],
                    fading: vec![],
                    window_radius: 1000.0,
                },
                TierPoints {
                    xy: vec![[0.0, 10.0]],
                    fading: vec![],
                    window_radius: 1000.0,
                },
            ],
        };
        assert_eq!(associate(&real, &net).unwrap().tier, 1);
        // (25/10)^3.5 ~ 24.7: a bias above that on tier 1 flips the choice
        let flipped = net.with_biases(&[1.0, 1.0 / 30.0]).unwrap();
        assert_eq!(associate(&real, &flipped).unwrap().tier, 0);
    }

    #[test]
    fn association_invariant_to_reference_loss() {
        let real = realization(vec![[30.0, 0.0], [0.0, 10.0]], vec![]);
        let net = net_k1();
        let a = associate(&real, &net).unwrap();
        let b = associate(&real, &net.clone().with_reference_loss(1.0).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sir_with_single_interferer_matches_hand_computation() {
        let real = realization(vec![[10.0, 0.0], [0.0, 20.0]], vec![1.5, 0.5]);
        let net = net_k1();
        let serving = associate(&real, &net).unwrap();
        assert_eq!(serving.ap, 0);
        let got = sir(&real, &serving, &net);
        let expected = (1.5 * 10f64.powf(-3.5)) / (0.5 * 20f64.powf(-3.5));
        assert!(((got - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn sir_without_interferers_is_infinite() {
        let real = realization(vec![[10.0, 0.0]], vec![2.0]);
        let net = net_k1();
        let serving = associate(&real, &net).unwrap();
        assert_eq!(sir(&real, &serving, &net), f64::INFINITY);
    }

    #[test]
    fn zero_displacement_never_hands_off() {
        let real = realization(vec![[10.0, 0.0], [0.0, 11.0]], vec![]);
        let serving = associate(&real, &net_k1()).unwrap();
        let out = move_and_detect_handoff(&real, &serving, 0.0, 1.0);
        assert!(!out.handoff && out.contained);
    }

    #[test]
    fn radial_move_toward_second_ap_hands_off() {
        // Serving AP behind the user, second AP ahead: moving away from the
        // serving AP by enough must trigger a handoff.
        let real = realization(vec![[-10.0, 0.0], [30.0, 0.0]], vec![]);
        let serving = associate(&real, &net_k1()).unwrap();
        assert_eq!(serving.ap, 0);
        // at theta = 0 the user moves toward +x; new distance to serving is
        // 10 + v, distance to the other AP is 30 - v; handoff iff v > 10
        let no = move_and_detect_handoff(&real, &serving, 9.0, 0.0);
        assert!(!no.handoff);
        let yes = move_and_detect_handoff(&real, &serving, 11.0, 0.0);
        assert!(yes.handoff);
    }

    #[test]
    fn clipped_detection_disc_is_flagged() {
        let mut real = realization(vec![[-10.0, 0.0]], vec![]);
        real.tiers[0].window_radius = 25.0;
        let serving = associate(&real, &net_k1()).unwrap();
        // detection radius 10 + v = 22, displaced user at 12: 34 > 25
        let out = move_and_detect_handoff(&real, &serving, 12.0, 0.0);
        assert!(!out.contained);
    }
}
