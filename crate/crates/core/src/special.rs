//! Gaussian-tail helpers used throughout the handoff and coverage expressions.
//!
//! Everything here reduces to the complementary error function. The one
//! non-library piece is `erfcx` (the scaled complement e^{x^2} erfc(x)),
//! which keeps the recurring factor e^{b^2} Q(sqrt2 b) finite for large b;
//! the naive composition overflows once b exceeds ~26.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Upper-tail probability of the standard normal distribution.
///
/// Evaluated through `erfc`, not quadrature: Q(x) = erfc(x / sqrt2) / 2.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
///
/// Direct composition below x = 8 (exp(64) is far from overflow), asymptotic
/// series above. The two branches agree to ~1e-13 across the crossover.
pub fn erfcx(x: f64) -> f64 {
    assert!(x >= 0.0, "erfcx domain is x >= 0, got {x}");
    if x < 8.0 {
        (x * x).exp() * libm::erfc(x)
    } else {
        // erfcx(x) ~ 1/(x sqrt(pi)) * sum_n (-1)^n (2n-1)!! / (2x^2)^n
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..=16u32 {
            term *= -(2.0 * f64::from(n) - 1.0) * inv2x2;
            sum += term;
            if term.abs() < f64::EPSILON * sum.abs() {
                break;
            }
        }
        sum / (x * PI.sqrt())
    }
}

/// The factor e^{b^2} Q(sqrt2 b) appearing in every closed-form handoff and
/// coverage expression, evaluated without overflow for any b >= 0.
pub fn scaled_gauss_tail(b: f64) -> f64 {
    assert!(b >= 0.0, "scaled_gauss_tail domain is b >= 0, got {b}");
    // e^{b^2} Q(sqrt2 b) = e^{b^2} erfc(b) / 2 = erfcx(b) / 2
    0.5 * erfcx(b)
}

/// Closed form of the Rayleigh-weighted shifted-Gaussian integral,
///
///   integral_0^inf 2 pi lam r e^{-pi lam (r + c)^2 + pi lam c^2} dr
///     = 1 - 2 b sqrt(pi) e^{b^2} Q(sqrt2 b),   b = c sqrt(pi lam).
///
/// Valid for either sign of b; negative b only arises for obtuse movement
/// angles where |b| stays small, so the direct exponential is safe there.
pub fn tail_bracket(b: f64) -> f64 {
    if b >= 0.0 {
        1.0 - b * PI.sqrt() * erfcx(b)
    } else {
        // Q(sqrt2 b) = 1 - Q(-sqrt2 b) => e^{b^2} Q(sqrt2 b) = e^{b^2} - erfcx(-b)/2
        1.0 - 2.0 * b * PI.sqrt() * ((b * b).exp() - 0.5 * erfcx(-b))
    }
}

/// First-order coefficient of the excess area in the connection distance:
/// for v << r the area grows like r v times this factor of the movement angle.
///
/// Expanding the swept area
/// R^2 (pi - theta + asin(v sin(theta)/R)) - r^2 (pi - theta) + r v sin(theta)
/// to first order in v gives 2 (pi - theta) cos(theta) + 2 sin(theta); the
/// asin term contributes a second r v sin(theta), the same order as the
/// explicit one.
pub fn excess_area_slope(theta: f64) -> f64 {
    2.0 * (PI - theta) * theta.cos() + 2.0 * theta.sin()
}
