//! Network, tier and mobility parameter types shared by the analytic layer
//! and the simulator.

use crate::error::{CoreError, Result};

/// Wavelength at the 2 GHz carrier, metres.
const WAVELENGTH_2GHZ: f64 = 299_792_458.0 / 2.0e9;

/// Free-space reference loss (4 pi / wavelength)^-2 at r0 = 1 m.
///
/// Kept on the model for auditability; it cancels out of every association
/// and coverage formula (only power ratios survive).
pub fn default_reference_loss() -> f64 {
    let x = 4.0 * std::f64::consts::PI / WAVELENGTH_2GHZ;
    1.0 / (x * x)
}

/// One tier of access points: density, transmit power, SIR threshold, bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierParams {
    /// AP density, points per square metre.
    pub density: f64,
    /// Transmit power in dBm (converted to linear milliwatts internally).
    pub power_dbm: f64,
    /// SIR threshold, linear scale.
    pub sir_threshold: f64,
    /// Association bias, linear scale. Tier 1 is the reference with bias 1.
    pub bias: f64,
}

impl TierParams {
    pub fn new(density: f64, power_dbm: f64, sir_threshold: f64, bias: f64) -> Result<Self> {
        let t = TierParams {
            density,
            power_dbm,
            sir_threshold,
            bias,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if !self.density.is_finite() || self.density <= 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "density",
                value: self.density,
                constraint: "must be finite and > 0",
            });
        }
        if !self.power_dbm.is_finite() {
            return Err(CoreError::InvalidParameter {
                name: "power_dbm",
                value: self.power_dbm,
                constraint: "must be finite",
            });
        }
        if !self.sir_threshold.is_finite() || self.sir_threshold <= 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "sir_threshold",
                value: self.sir_threshold,
                constraint: "must be finite and > 0",
            });
        }
        if !self.bias.is_finite() || self.bias <= 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "bias",
                value: self.bias,
                constraint: "must be finite and > 0",
            });
        }
        Ok(())
    }

    /// Transmit power on the linear milliwatt scale.
    pub fn power_mw(&self) -> f64 {
        10f64.powf(self.power_dbm / 10.0)
    }
}

/// A multi-tier downlink network. Tiers are ordered sparsest first.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    tiers: Vec<TierParams>,
    /// Path-loss exponent; the interference integral requires alpha > 2.
    pub alpha: f64,
    /// Fraction of handoffs that drop the connection despite SIR coverage.
    pub beta: f64,
    /// Reference path loss at `reference_distance` (linear).
    pub reference_loss: f64,
    /// Reference distance, metres.
    pub reference_distance: f64,
}

impl NetworkModel {
    pub fn new(tiers: Vec<TierParams>, alpha: f64, beta: f64) -> Result<Self> {
        let net = NetworkModel {
            tiers,
            alpha,
            beta,
            reference_loss: default_reference_loss(),
            reference_distance: 1.0,
        };
        net.validate()?;
        Ok(net)
    }

    /// Same network with a different reference loss (association and
    /// coverage outputs must not change; tests rely on this).
    pub fn with_reference_loss(mut self, l0: f64) -> Result<Self> {
        if !l0.is_finite() || l0 <= 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "reference_loss",
                value: l0,
                constraint: "must be finite and > 0",
            });
        }
        self.reference_loss = l0;
        Ok(self)
    }

    /// Same network with different per-tier biases (tier 1 must stay at 1).
    pub fn with_biases(mut self, biases: &[f64]) -> Result<Self> {
        if biases.len() != self.tiers.len() {
            return Err(CoreError::InvalidParameter {
                name: "biases.len",
                value: biases.len() as f64,
                constraint: "must match the tier count",
            });
        }
        for (tier, &b) in self.tiers.iter_mut().zip(biases) {
            tier.bias = b;
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.tiers.is_empty() {
            return Err(CoreError::InvalidParameter {
                name: "tiers",
                value: 0.0,
                constraint: "need at least one tier",
            });
        }
        for tier in &self.tiers {
            tier.validate()?;
        }
        if self.alpha.is_nan() || self.alpha <= 2.0 {
            return Err(CoreError::DivergentIntegral { alpha: self.alpha });
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(CoreError::InvalidParameter {
                name: "beta",
                value: self.beta,
                constraint: "must lie in [0, 1]",
            });
        }
        for pair in self.tiers.windows(2) {
            if pair[0].density > pair[1].density {
                return Err(CoreError::InvalidParameter {
                    name: "density",
                    value: pair[1].density,
                    constraint: "tiers must be ordered by nondecreasing density",
                });
            }
        }
        if (self.tiers[0].bias - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidParameter {
                name: "bias[0]",
                value: self.tiers[0].bias,
                constraint: "reference tier bias must be 1",
            });
        }
        Ok(())
    }

    pub fn tiers(&self) -> &[TierParams] {
        &self.tiers
    }

    pub fn tier_count(&self) -> usize {
        self.tiers.len()
    }
}

/// Direction of the movement relative to the away-from-AP axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Direction {
    /// Theta uniform; the analytic expressions use [0, pi) by symmetry and
    /// the simulator draws on [0, 2 pi) to validate that reduction.
    Uniform,
    /// Fixed angle in [0, pi); 0 is radially away from the serving AP.
    Fixed(f64),
}

/// Per-unit-time displacement and direction distribution of the user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityProfile {
    pub speed: f64,
    pub direction: Direction,
}

impl MobilityProfile {
    pub fn new(speed: f64, direction: Direction) -> Result<Self> {
        if !speed.is_finite() || speed < 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "speed",
                value: speed,
                constraint: "must be finite and >= 0",
            });
        }
        if let Direction::Fixed(theta) = direction {
            if !(0.0..std::f64::consts::PI).contains(&theta) {
                return Err(CoreError::InvalidParameter {
                    name: "theta",
                    value: theta,
                    constraint: "fixed angle must lie in [0, pi)",
                });
            }
        }
        Ok(MobilityProfile { speed, direction })
    }

    pub fn uniform(speed: f64) -> Result<Self> {
        Self::new(speed, Direction::Uniform)
    }

    pub fn radial(speed: f64) -> Result<Self> {
        Self::new(speed, Direction::Fixed(0.0))
    }
}

/// A point on the association simplex together with the bias vector that
/// realizes it (bias of the reference tier is 1).
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationSolution {
    pub association: Vec<f64>,
    pub bias: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tier(density: f64) -> TierParams {
        TierParams::new(density, 20.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn rejects_alpha_at_or_below_two() {
        assert!(NetworkModel::new(vec![tier(1e-3)], 2.0, 0.0).is_err());
        assert!(NetworkModel::new(vec![tier(1e-3)], 1.5, 0.0).is_err());
        assert!(NetworkModel::new(vec![tier(1e-3)], 3.5, 0.0).is_ok());
    }

    #[test]
    fn rejects_decreasing_densities() {
        let err = NetworkModel::new(vec![tier(1e-2), tier(1e-3)], 4.0, 0.0);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_non_unit_reference_bias() {
        let mut t = tier(1e-3);
        t.bias = 2.0;
        assert!(NetworkModel::new(vec![t], 4.0, 0.0).is_err());
    }

    #[test]
    fn rejects_beta_outside_unit_interval() {
        assert!(NetworkModel::new(vec![tier(1e-3)], 4.0, 1.2).is_err());
        assert!(NetworkModel::new(vec![tier(1e-3)], 4.0, -0.1).is_err());
    }

    #[test]
    fn fixed_direction_domain() {
        assert!(MobilityProfile::new(1.0, Direction::Fixed(0.0)).is_ok());
        assert!(MobilityProfile::new(1.0, Direction::Fixed(std::f64::consts::PI)).is_err());
        assert!(MobilityProfile::new(-1.0, Direction::Uniform).is_err());
    }

    #[test]
    fn reference_loss_default_matches_two_ghz() {
        // (4 pi / 0.1499 m)^-2 ~ 1.42e-4
        let l0 = default_reference_loss();
        assert!((l0 - 1.423e-4).abs() < 1e-6);
    }
}
