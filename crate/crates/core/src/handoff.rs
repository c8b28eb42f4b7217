//! Handoff rate of a mobile user in a single-tier Poisson network.
//!
//! A user served by the nearest AP at distance r moves a distance v at angle
//! theta from the away-from-AP axis, ending at distance
//! R = sqrt(r^2 + v^2 + 2 r v cos(theta)). A handoff occurs exactly when the
//! region swept by the movement (the disc of radius R around the new
//! location minus the old disc of radius r) contains another AP, so the
//! conditional handoff probability is one minus the Poisson void probability
//! of that excess area.

use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::model::{Direction, MobilityProfile};
use crate::quad::{integrate, QuadratureSpec};
use crate::special::{excess_area_slope, q_function, tail_bracket};

fn check_density(lam: f64) -> Result<()> {
    if !lam.is_finite() || lam <= 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "density",
            value: lam,
            constraint: "must be finite and > 0",
        });
    }
    Ok(())
}

/// Truncation radius for Rayleigh-weighted r-integrals: the nearest-AP tail
/// e^{-pi lam r^2} drops below 1e-12 here.
pub fn r_integral_cutoff(lam: f64) -> f64 {
    (12.0 * std::f64::consts::LN_10 / (PI * lam)).sqrt()
}

/// Area swept by the movement: |A \ (A intersect C)| for the discs described
/// in the module docs.
///
/// The angle at the new location is computed as
/// atan2(v sin(theta), r + v cos(theta)), which equals
/// asin(v sin(theta) / R) while r + v cos(theta) >= 0 and picks the correct
/// supplementary branch otherwise (short connection distances with obtuse
/// movement angles). The two-circle lens formula agrees with this expression
/// on both branches.
pub fn excess_area(r: f64, v: f64, theta: f64) -> f64 {
    let y = v * theta.sin();
    let x = r + v * theta.cos();
    let r2 = x * x + y * y; // R^2 by the law of cosines
    let phi = y.atan2(x);
    r2 * (PI - theta + phi) - r * r * (PI - theta) + r * v * theta.sin()
}

/// Probability of handoff conditioned on connection distance r and movement
/// angle theta.
pub fn handoff_prob_conditional(lam: f64, r: f64, v: f64, theta: f64) -> Result<f64> {
    check_density(lam)?;
    if !(0.0..=PI).contains(&theta) {
        return Err(CoreError::InvalidParameter {
            name: "theta",
            value: theta,
            constraint: "must lie in [0, pi]",
        });
    }
    if r.is_nan() || r < 0.0 || v.is_nan() || v < 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "r/v",
            value: if r < 0.0 { r } else { v },
            constraint: "distances must be >= 0",
        });
    }
    Ok(1.0 - (-lam * excess_area(r, v, theta)).exp())
}

/// Handoff rate over one movement period: the conditional probability
/// averaged over the nearest-AP distance (Rayleigh) and the direction
/// distribution of the profile.
///
/// `Uniform` directions integrate over theta in [0, pi); `Fixed(theta)`
/// reduces to the single r-integral at that angle.
pub fn handoff_rate_exact(
    lam: f64,
    profile: &MobilityProfile,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_density(lam)?;
    let v = profile.speed;
    if v == 0.0 {
        return Ok(0.0);
    }
    let rmax = r_integral_cutoff(lam);

    let no_handoff_at = |theta: f64| -> Result<f64> {
        let inner = integrate(
            |r| {
                let density = 2.0 * PI * lam * r * (-PI * lam * r * r).exp();
                density * (-lam * excess_area(r, v, theta)).exp()
            },
            0.0,
            rmax,
            quad,
        )?;
        Ok(inner.value)
    };

    match profile.direction {
        Direction::Fixed(theta) => Ok(1.0 - no_handoff_at(theta)?),
        Direction::Uniform => {
            // The inner integral is smooth in theta; resolve it on [0, pi]
            // with the same adaptive rule. Errors from the inner level are
            // far below the outer tolerance.
            let mut inner_err: Option<CoreError> = None;
            let outer = integrate(
                |theta| match no_handoff_at(theta) {
                    Ok(v) => v,
                    Err(e) => {
                        inner_err.get_or_insert(e);
                        f64::NAN
                    }
                },
                0.0,
                PI,
                quad,
            );
            if let Some(e) = inner_err {
                return Err(e);
            }
            Ok(1.0 - outer?.value / PI)
        }
    }
}

/// Closed-form handoff rate for radial movement (theta = 0):
/// 1 - (e^{-lam v^2 pi} - 2 v pi sqrt(lam) Q(v sqrt(2 pi lam))).
pub fn handoff_rate_radial(lam: f64, v: f64) -> f64 {
    debug_assert!(lam > 0.0 && v >= 0.0);
    let ex = (-lam * v * v * PI).exp();
    let tail = 2.0 * v * PI * lam.sqrt() * q_function(v * (2.0 * PI * lam).sqrt());
    1.0 - (ex - tail)
}

/// Small-displacement approximation of the handoff rate: single integral
/// over theta with the excess area linearized in r.
///
/// The linearized no-handoff probability is
/// exp(-lam [v^2 (pi - theta) + r v a(theta)]) with a = `excess_area_slope`,
/// and the r-average collapses to `tail_bracket`.
pub fn handoff_rate_approx(lam: f64, v: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_density(lam)?;
    if v.is_nan() || v < 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "speed",
            value: v,
            constraint: "must be >= 0",
        });
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let scale = (PI * lam).sqrt() * v / (2.0 * PI);
    let outer = integrate(
        |theta| {
            let b = scale * excess_area_slope(theta);
            tail_bracket(b) * (-lam * v * v * (PI - theta)).exp()
        },
        0.0,
        PI,
        quad,
    )?;
    Ok(1.0 - outer.value / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    const QUAD: QuadratureSpec = QuadratureSpec {
        abs_tol: 1e-9,
        rel_tol: 1e-7,
        max_subdivisions: 200,
    };

    #[test]
    fn zero_displacement_never_hands_off() {
        for &(r, theta) in &[(0.0, 0.0), (10.0, 1.0), (50.0, 3.0)] {
            let p = handoff_prob_conditional(1e-3, r, 0.0, theta).unwrap();
            assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn radial_conditional_matches_annulus_void_probability() {
        let (lam, r, v) = (2e-3, 12.0, 4.0);
        let p = handoff_prob_conditional(lam, r, v, 0.0).unwrap();
        let annulus = PI * ((r + v) * (r + v) - r * r);
        assert!((p - (1.0 - (-lam * annulus).exp())).abs() < 1e-14);
    }

    #[test]
    fn theta_domain_is_enforced() {
        assert!(handoff_prob_conditional(1e-3, 1.0, 1.0, -0.1).is_err());
        assert!(handoff_prob_conditional(1e-3, 1.0, 1.0, PI + 0.1).is_err());
    }

    #[test]
    fn conditional_matches_point_count_monte_carlo() {
        // Drop a PPP in a box covering both discs and measure the void
        // frequency of the swept region directly.
        let (lam, r, v, theta) = (1e-3, 10.0, 5.0, PI / 2.0);
        let analytic = handoff_prob_conditional(lam, r, v, theta).unwrap();

        let mut rng = SmallRng::seed_from_u64(0x5eed);
        // serving AP at (-r, 0), movement from the origin at angle theta
        let l2 = (v * theta.cos(), v * theta.sin());
        let big_r = ((r + v * theta.cos()).powi(2) + (v * theta.sin()).powi(2)).sqrt();
        let half = v + big_r + 1.0;
        let area = (2.0 * half) * (2.0 * half);
        let mean = lam * area;
        let reps = 200_000;
        let mut swept_hits = 0u64;
        for _ in 0..reps {
            // Poisson count via inversion; the mean is tiny
            let mut k = 0u32;
            let mut p = (-mean).exp();
            let mut acc = p;
            let u: f64 = rng.random();
            while u > acc {
                k += 1;
                p *= mean / f64::from(k);
                acc += p;
                if k > 1000 {
                    break;
                }
            }
            let mut hit = false;
            for _ in 0..k {
                let x = rng.random_range(-half..half);
                let y = rng.random_range(-half..half);
                let in_new = (x - l2.0).hypot(y - l2.1) < big_r;
                let in_old = x.hypot(y) < r;
                if in_new && !in_old {
                    hit = true;
                }
            }
            if hit {
                swept_hits += 1;
            }
        }
        let freq = swept_hits as f64 / reps as f64;
        let se = (freq * (1.0 - freq) / reps as f64).sqrt();
        assert!(
            (freq - analytic).abs() < 4.0 * se,
            "analytic {analytic} vs point-count {freq} (se {se})"
        );
    }

    #[test]
    fn radial_rate_at_zero_speed() {
        assert_eq!(handoff_rate_radial(1e-3, 0.0), 0.0);
        assert_eq!(handoff_rate_radial(1e-4, 0.0), 0.0);
    }

    #[test]
    fn radial_rate_reference_value() {
        // 30-digit evaluation of the closed form at lam = 1e-3, v = 5.
        let v = handoff_rate_radial(1e-3, 5.0);
        assert!((v - 0.419_201_755_392_286_3).abs() < 1e-12);
    }

    #[test]
    fn exact_rate_zero_speed() {
        let profile = MobilityProfile::uniform(0.0).unwrap();
        assert_eq!(handoff_rate_exact(1e-3, &profile, &QUAD).unwrap(), 0.0);
    }

    #[test]
    fn exact_rate_reference_values() {
        // Independent 320x800-node Gauss-Legendre evaluations of the double
        // integral.
        let profile = MobilityProfile::uniform(5.0).unwrap();
        let h = handoff_rate_exact(1e-3, &profile, &QUAD).unwrap();
        assert!((h - 0.194_196_091_256).abs() < 1e-7, "got {h}");

        let profile = MobilityProfile::uniform(15.0).unwrap();
        let h = handoff_rate_exact(1e-3, &profile, &QUAD).unwrap();
        assert!((h - 0.531_741_834_243).abs() < 1e-7, "got {h}");
    }

    #[test]
    fn exact_rate_at_fixed_zero_angle_reduces_to_radial() {
        for &(lam, v) in &[(1e-4, 3.0), (1e-3, 5.0), (1e-3, 15.0)] {
            let profile = MobilityProfile::radial(v).unwrap();
            let by_integral = handoff_rate_exact(lam, &profile, &QUAD).unwrap();
            let closed = handoff_rate_radial(lam, v);
            assert!(
                (by_integral - closed).abs() < 1e-8,
                "lam={lam} v={v}: {by_integral} vs {closed}"
            );
        }
    }

    #[test]
    fn exact_rate_strictly_increasing_in_speed() {
        let mut prev = 0.0;
        for v in 1..=20 {
            let profile = MobilityProfile::uniform(f64::from(v)).unwrap();
            let h = handoff_rate_exact(1e-3, &profile, &QUAD).unwrap();
            assert!(h > prev, "rate not increasing at v = {v}");
            prev = h;
        }
    }

    #[test]
    fn approx_rate_zero_speed() {
        assert_eq!(handoff_rate_approx(1e-3, 0.0, &QUAD).unwrap(), 0.0);
    }

    #[test]
    fn approx_rate_reference_value() {
        let h = handoff_rate_approx(1e-3, 5.0, &QUAD).unwrap();
        assert!((h - 0.192_266_595).abs() < 1e-7, "got {h}");
    }

    #[test]
    fn approx_tracks_exact_at_moderate_speed() {
        let profile = MobilityProfile::uniform(5.0).unwrap();
        let exact = handoff_rate_exact(1e-3, &profile, &QUAD).unwrap();
        let approx = handoff_rate_approx(1e-3, 5.0, &QUAD).unwrap();
        assert!((exact - approx).abs() < 2e-3);
    }

    #[test]
    fn approx_undershoots_for_large_displacement() {
        // Once v is comparable to the connection distance the linearization
        // under-counts the swept area, so the approximation sits below the
        // exact rate.
        let profile = MobilityProfile::uniform(40.0).unwrap();
        let exact = handoff_rate_exact(1e-3, &profile, &QUAD).unwrap();
        let approx = handoff_rate_approx(1e-3, 40.0, &QUAD).unwrap();
        assert!(exact - approx > 0.05, "exact {exact}, approx {approx}");
    }
}
