//! Single-tier SIR coverage, with and without the handoff cost model.
//!
//! In the interference-limited Rayleigh-fading regime the conditional
//! coverage probability at connection distance r is e^{-pi lam rho r^2},
//! where rho depends only on the SIR threshold and the path-loss exponent.
//! Mobility enters through a linear cost: a fraction beta of handoffs drops
//! the connection even though the SIR criterion is met.

use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::model::{Direction, MobilityProfile};
use crate::quad::{integrate, integrate_semi_infinite, QuadratureSpec};
use crate::special::{excess_area_slope, tail_bracket};

fn check_threshold(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "sir_threshold",
            value: tau,
            constraint: "must be finite and > 0",
        });
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 2.0 {
        return Err(CoreError::DivergentIntegral { alpha });
    }
    Ok(())
}

/// Normalized same-tier interference integral
/// rho(tau, alpha) = tau^{2/alpha} integral_{tau^{-2/alpha}}^inf du / (1 + u^{alpha/2}).
pub fn rho(tau: f64, alpha: f64) -> Result<f64> {
    check_threshold(tau)?;
    check_alpha(alpha)?;
    let lower = tau.powf(-2.0 / alpha);
    let half_alpha = alpha / 2.0;
    let r = integrate_semi_infinite(
        |u| 1.0 / (1.0 + u.powf(half_alpha)),
        lower,
        &QuadratureSpec::default(),
    )?;
    Ok(tau.powf(2.0 / alpha) * r.value)
}

/// Cross-tier interference integral for the shared-spectrum variant:
/// Z(tau, alpha, b_hat) = tau^{2/alpha} integral_{(b_hat/tau)^{2/alpha}}^inf du / (1 + u^{alpha/2}).
///
/// Coincides with `rho` at b_hat = 1. No closed form exists; this is the
/// numerical evaluation path only.
pub fn z_interference(tau: f64, alpha: f64, bias_ratio: f64) -> Result<f64> {
    check_threshold(tau)?;
    check_alpha(alpha)?;
    if !bias_ratio.is_finite() || bias_ratio <= 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "bias_ratio",
            value: bias_ratio,
            constraint: "must be finite and > 0",
        });
    }
    let lower = (bias_ratio / tau).powf(2.0 / alpha);
    let half_alpha = alpha / 2.0;
    let r = integrate_semi_infinite(
        |u| 1.0 / (1.0 + u.powf(half_alpha)),
        lower,
        &QuadratureSpec::default(),
    )?;
    Ok(tau.powf(2.0 / alpha) * r.value)
}

/// Coverage probability conditioned on connection distance r.
pub fn coverage_given_distance(lam: f64, r: f64, tau: f64, alpha: f64) -> Result<f64> {
    if !lam.is_finite() || lam <= 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "density",
            value: lam,
            constraint: "must be finite and > 0",
        });
    }
    if r.is_nan() || r < 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "r",
            value: r,
            constraint: "must be >= 0",
        });
    }
    let rho_k = rho(tau, alpha)?;
    Ok((-PI * lam * r * r * rho_k).exp())
}

/// Coverage probability of a stationary user: 1 / (1 + rho).
///
/// Independent of the AP density and transmit power.
pub fn coverage_stationary(tau: f64, alpha: f64) -> Result<f64> {
    Ok(1.0 / (1.0 + rho(tau, alpha)?))
}

/// Inner direction integral shared by the single- and multi-tier mobile
/// coverage expressions: (1/pi) int_0^pi tail_bracket(b(theta))
/// e^{-lam v^2 (pi - theta)} dtheta with b scaled by `tail_scale`.
pub(crate) fn mobility_integral(
    lam: f64,
    v: f64,
    tail_scale: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if v == 0.0 {
        return Ok(1.0);
    }
    let pref = v / (2.0 * PI) * tail_scale;
    let r = integrate(
        |theta| {
            let b = pref * excess_area_slope(theta);
            tail_bracket(b) * (-lam * v * v * (PI - theta)).exp()
        },
        0.0,
        PI,
        quad,
    )?;
    Ok(r.value / PI)
}

/// Coverage probability of a mobile user under the linear handoff cost:
/// (1-beta) of handoffs keep the connection, so
///
///   P_c = 1/(1+rho) { (1-beta) + beta (1/pi) int_0^pi
///         [1 - 2 b' sqrt(pi) e^{b'^2} Q(sqrt2 b')] e^{-lam v^2 (pi-theta)} dtheta },
///
/// with b' = (v a(theta) / 2 pi) sqrt(pi lam / (1 + rho)).
pub fn coverage_mobile_single_tier(
    lam: f64,
    profile: &MobilityProfile,
    beta: f64,
    tau: f64,
    alpha: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !lam.is_finite() || lam <= 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "density",
            value: lam,
            constraint: "must be finite and > 0",
        });
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(CoreError::InvalidParameter {
            name: "beta",
            value: beta,
            constraint: "must lie in [0, 1]",
        });
    }
    if profile.direction != Direction::Uniform {
        return Err(CoreError::InvalidParameter {
            name: "direction",
            value: f64::NAN,
            constraint: "mobile coverage is defined for the uniform direction distribution",
        });
    }
    let rho_k = rho(tau, alpha)?;
    let stationary = 1.0 / (1.0 + rho_k);
    if beta == 0.0 || profile.speed == 0.0 {
        return Ok(stationary);
    }
    let scale = (PI * lam / (1.0 + rho_k)).sqrt();
    let inner = mobility_integral(lam, profile.speed, scale, quad)?;
    Ok(stationary * ((1.0 - beta) + beta * inner))
}
