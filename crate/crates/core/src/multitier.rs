//! Multi-tier association, coverage with handoff cost, and the
//! association/bias algebra.
//!
//! Under biased maximum-average-received-power association the per-tier
//! association probabilities are A_k = lam_k (P_k B_k)^{2/alpha} / sum_j ...;
//! the map from interior association targets to bias factors is one-to-one
//! and reduces to a (K-1)-dimensional linear system in x_k = B_k^{2/alpha}.
//! Coverage with handoffs sums per-tier terms that depend on the tier only
//! through (A_k, lam_k, tau_k), which is what the simplex optimizer exploits.

use std::f64::consts::PI;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::coverage::{mobility_integral, rho, z_interference};
use crate::error::{CoreError, Result};
use crate::model::{AssociationSolution, Direction, MobilityProfile, NetworkModel};
use crate::quad::QuadratureSpec;

/// Association weight of one tier: lam (P B)^{2/alpha} with P in milliwatts.
fn association_weight(lam: f64, power_mw: f64, bias: f64, alpha: f64) -> f64 {
    lam * (power_mw * bias).powf(2.0 / alpha)
}

/// Probability that a typical user associates with each tier.
pub fn association_probabilities(net: &NetworkModel) -> Vec<f64> {
    let alpha = net.alpha;
    let weights: Vec<f64> = net
        .tiers()
        .iter()
        .map(|t| association_weight(t.density, t.power_mw(), t.bias, alpha))
        .collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Probability that the user associates with `tier` given its nearest AP in
/// that tier sits at distance r: prod_{j != k} exp(-pi lam_j (P_hat B_hat)^{2/alpha} r^2).
pub fn association_prob_conditional(net: &NetworkModel, tier: usize, r: f64) -> Result<f64> {
    let tiers = net.tiers();
    if tier >= tiers.len() {
        return Err(CoreError::InvalidParameter {
            name: "tier",
            value: tier as f64,
            constraint: "tier index out of range",
        });
    }
    if r.is_nan() || r < 0.0 {
        return Err(CoreError::InvalidParameter {
            name: "r",
            value: r,
            constraint: "must be >= 0",
        });
    }
    let k = &tiers[tier];
    let denom_k = (k.power_mw() * k.bias).powf(2.0 / net.alpha);
    let mut exponent = 0.0;
    for (j, t) in tiers.iter().enumerate() {
        if j == tier {
            continue;
        }
        let rel = (t.power_mw() * t.bias).powf(2.0 / net.alpha) / denom_k;
        exponent += t.density * rel;
    }
    Ok((-PI * exponent * r * r).exp())
}

fn validate_association(net: &NetworkModel, assoc: &[f64], require_interior: bool) -> Result<()> {
    if assoc.len() != net.tier_count() {
        return Err(CoreError::InvalidParameter {
            name: "association.len",
            value: assoc.len() as f64,
            constraint: "must match the tier count",
        });
    }
    let sum: f64 = assoc.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(CoreError::InvalidParameter {
            name: "association sum",
            value: sum,
            constraint: "must total 1 within 1e-9",
        });
    }
    for (i, &a) in assoc.iter().enumerate() {
        if a.is_nan() || a <= 0.0 {
            return Err(CoreError::BoundaryAssociation { index: i, value: a });
        }
        if require_interior && net.tier_count() > 1 && a >= 1.0 {
            return Err(CoreError::BoundaryAssociation { index: i, value: a });
        }
    }
    Ok(())
}

/// Coverage probability of a stationary user at the given association point:
/// sum_k 1 / (A_k^{-1} + rho(tau_k, alpha)).
///
/// Depends on the tiers only through their SIR thresholds.
pub fn coverage_multitier_stationary(net: &NetworkModel, assoc: &[f64]) -> Result<f64> {
    validate_association(net, assoc, false)?;
    let mut total = 0.0;
    for (tier, &a) in net.tiers().iter().zip(assoc) {
        let rho_k = rho(tier.sir_threshold, net.alpha)?;
        total += 1.0 / (1.0 / a + rho_k);
    }
    Ok(total)
}

/// Stationary coverage when every tier shares one spectrum: the interference
/// constant of tier k becomes sum_j (lam_j/lam_k)(P_j/P_k)^{2/alpha}
/// Z(tau_k, alpha, B_j/B_k), which depends on the actual biases and powers,
/// so the association point is taken from the model itself. Evaluation path
/// only; the optimizer works on the orthogonal-spectrum objective.
pub fn coverage_multitier_stationary_shared(net: &NetworkModel) -> Result<f64> {
    let assoc = association_probabilities(net);
    let tiers = net.tiers();
    let two_over_alpha = 2.0 / net.alpha;
    let mut total = 0.0;
    for (k, (tier, &a)) in tiers.iter().zip(&assoc).enumerate() {
        let mut interference = 0.0;
        for t in tiers {
            let z = z_interference(tier.sir_threshold, net.alpha, t.bias / tiers[k].bias)?;
            interference += (t.density / tier.density)
                * (t.power_mw() / tier.power_mw()).powf(two_over_alpha)
                * z;
        }
        total += 1.0 / (1.0 / a + interference);
    }
    Ok(total)
}

/// Association point maximizing stationary coverage:
/// A_k* = (1/rho_k) / sum_j (1/rho_j).
pub fn optimal_association_stationary(net: &NetworkModel) -> Result<Vec<f64>> {
    let inv: Vec<f64> = net
        .tiers()
        .iter()
        .map(|t| rho(t.sir_threshold, net.alpha).map(f64::recip))
        .collect::<Result<_>>()?;
    let total: f64 = inv.iter().sum();
    Ok(inv.into_iter().map(|x| x / total).collect())
}

/// The (K-1)-dimensional linear system tying an interior association target
/// to the bias factors through x_k = B_k^{2/alpha}.
///
/// Row for tier k has (1 - 1/A_k) on the diagonal and a_{jk} =
/// (lam_j / lam_k)(P_j / P_k)^{2/alpha} elsewhere; the right-hand side is
/// -a_{1k}. Row-major storage, tiers 2..K in order.
#[derive(Debug, Clone)]
pub struct BiasSystem {
    pub dim: usize,
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl BiasSystem {
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim + col]
    }

    /// Determinant by LU with partial pivoting. The closed form is
    /// (-1)^{K-1} (1 - sum_{i>=2} A_i) / prod_{i>=2} A_i, which is nonzero
    /// for every interior target, so the solve below cannot hit a zero pivot.
    pub fn determinant(&self) -> f64 {
        let n = self.dim;
        let mut m = self.matrix.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&a, &b| m[a * n + col].abs().total_cmp(&m[b * n + col].abs()))
                .unwrap();
            let pivot = m[pivot_row * n + col];
            if pivot == 0.0 {
                return 0.0;
            }
            if pivot_row != col {
                for c in 0..n {
                    m.swap(pivot_row * n + c, col * n + c);
                }
                det = -det;
            }
            det *= m[col * n + col];
            for row in (col + 1)..n {
                let factor = m[row * n + col] / m[col * n + col];
                for c in col..n {
                    m[row * n + c] -= factor * m[col * n + c];
                }
            }
        }
        det
    }

    fn solve(&self) -> Result<Vec<f64>> {
        let n = self.dim;
        let mut m = self.matrix.clone();
        let mut b = self.rhs.clone();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&a, &c| m[a * n + col].abs().total_cmp(&m[c * n + col].abs()))
                .unwrap();
            if m[pivot_row * n + col] == 0.0 {
                return Err(CoreError::InfeasibleBias { solution: b });
            }
            if pivot_row != col {
                for c in 0..n {
                    m.swap(pivot_row * n + c, col * n + c);
                }
                b.swap(pivot_row, col);
            }
            for row in (col + 1)..n {
                let factor = m[row * n + col] / m[col * n + col];
                for c in col..n {
                    m[row * n + c] -= factor * m[col * n + c];
                }
                b[row] -= factor * b[col];
            }
        }
        for row in (0..n).rev() {
            let mut acc = b[row];
            for c in (row + 1)..n {
                acc -= m[row * n + c] * b[c];
            }
            b[row] = acc / m[row * n + row];
        }
        Ok(b)
    }
}

/// Assemble the bias linear system for an interior association target.
pub fn bias_system(net: &NetworkModel, target: &[f64]) -> Result<BiasSystem> {
    validate_association(net, target, true)?;
    let tiers = net.tiers();
    let k_total = tiers.len();
    let dim = k_total - 1;
    let two_over_alpha = 2.0 / net.alpha;
    let mut matrix = vec![0.0; dim * dim];
    let mut rhs = vec![0.0; dim];
    for row in 0..dim {
        let k = row + 1; // tier index of this equation
        for col in 0..dim {
            let j = col + 1;
            matrix[row * dim + col] = if j == k {
                1.0 - 1.0 / target[k]
            } else {
                (tiers[j].density / tiers[k].density)
                    * (tiers[j].power_mw() / tiers[k].power_mw()).powf(two_over_alpha)
            };
        }
        rhs[row] = -(tiers[0].density / tiers[k].density)
            * (tiers[0].power_mw() / tiers[k].power_mw()).powf(two_over_alpha);
    }
    Ok(BiasSystem { dim, matrix, rhs })
}

/// Bias factors realizing an interior association target (reference tier
/// pinned at bias 1). Returns the full K-vector [1, B_2, ..., B_K].
pub fn solve_bias(net: &NetworkModel, target: &[f64]) -> Result<Vec<f64>> {
    validate_association(net, target, true)?;
    if net.tier_count() == 1 {
        return Ok(vec![1.0]);
    }
    let system = bias_system(net, target)?;
    let x = system.solve()?;
    if x.iter().any(|&xi| !xi.is_finite() || xi <= 0.0) {
        return Err(CoreError::InfeasibleBias { solution: x });
    }
    let mut bias = Vec::with_capacity(net.tier_count());
    bias.push(1.0);
    bias.extend(x.into_iter().map(|xi| xi.powf(net.alpha / 2.0)));
    Ok(bias)
}

/// One tier's contribution to mobile coverage:
///
///   f(A) = 1/(A^{-1} + rho) { (1-beta) + beta (1/pi) int_0^pi
///          [1 - 2 b'' sqrt(pi) e^{b''^2} Q(sqrt2 b'')] e^{-lam v^2 (pi-theta)} dtheta },
///
/// b'' = (v a(theta) / 2 pi) sqrt(pi lam / (A^{-1} + rho)). Continuous at
/// A = 0 with value 0, which is how boundary associations are evaluated.
pub fn tier_coverage_term(
    assoc: f64,
    rho_k: f64,
    lam: f64,
    beta: f64,
    v: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if assoc <= 0.0 {
        return Ok(0.0);
    }
    let denom = 1.0 / assoc + rho_k;
    let base = 1.0 / denom;
    if v == 0.0 || beta == 0.0 {
        return Ok(base);
    }
    let scale = (PI * lam / denom).sqrt();
    let inner = mobility_integral(lam, v, scale, quad)?;
    Ok(base * ((1.0 - beta) + beta * inner))
}

/// Coverage probability of a mobile user in a multi-tier network at a given
/// association point, with the per-tier handoff cost beta from the model.
pub fn coverage_multitier_mobile(
    net: &NetworkModel,
    assoc: &[f64],
    profile: &MobilityProfile,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate_association(net, assoc, false)?;
    if profile.direction != Direction::Uniform {
        return Err(CoreError::InvalidParameter {
            name: "direction",
            value: f64::NAN,
            constraint: "mobile coverage is defined for the uniform direction distribution",
        });
    }
    if profile.speed == 0.0 || net.beta == 0.0 {
        return coverage_multitier_stationary(net, assoc);
    }
    let mut total = 0.0;
    for (tier, &a) in net.tiers().iter().zip(assoc) {
        let rho_k = rho(tier.sir_threshold, net.alpha)?;
        total += tier_coverage_term(a, rho_k, tier.density, net.beta, profile.speed, quad)?;
    }
    Ok(total)
}

/// Projected-gradient settings. Defaults: central differences with step
/// 1e-5, Armijo backtracking, 10 restarts (two deterministic starts plus
/// random interior points).
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub gradient_step: f64,
    pub armijo_shrink: f64,
    pub armijo_slope: f64,
    pub initial_step: f64,
    pub improvement_tol: f64,
    /// Associations below this are treated as boundary-pinned; the reported
    /// point is clamped here so the bias map stays defined.
    pub boundary_floor: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 10,
            max_iterations: 400,
            gradient_step: 1e-5,
            armijo_shrink: 0.5,
            armijo_slope: 1e-4,
            initial_step: 1.0,
            improvement_tol: 1e-13,
            boundary_floor: 1e-6,
            seed: 0x9e37_79b9_7f4a_7c15,
        }
    }
}

/// Result of the mobility-aware association search.
#[derive(Debug, Clone)]
pub struct OptimizeReport {
    /// Maximizing association point, clamped to the boundary floor.
    pub association: Vec<f64>,
    /// Objective value at `association`.
    pub objective: f64,
    /// Bias factors realizing `association` (reference tier = 1). For
    /// boundary-pinned tiers this is the value at the clamp, i.e. bias -> 0.
    pub bias: Vec<f64>,
    /// Tiers whose optimum hit the simplex boundary (association clamped).
    pub boundary_tiers: Vec<usize>,
    /// False when no restart met the improvement tolerance within its
    /// iteration budget; `association` is then the best iterate found.
    pub converged: bool,
    /// Objective evaluations spent across all restarts.
    pub evaluations: usize,
}

impl OptimizeReport {
    /// The optimum as an association/bias pair.
    pub fn solution(&self) -> AssociationSolution {
        AssociationSolution {
            association: self.association.clone(),
            bias: self.bias.clone(),
        }
    }
}

/// Euclidean projection onto the probability simplex (Duchi et al. 2008).
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut rho_idx = 0usize;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            rho_idx = i + 1;
            theta = t;
        }
    }
    debug_assert!(rho_idx > 0);
    v.iter().map(|&vi| (vi - theta).max(0.0)).collect()
}

/// Maximize mobile coverage over the association simplex and recover the
/// bias vector realizing the optimum.
pub fn optimize_association_mobile(
    net: &NetworkModel,
    profile: &MobilityProfile,
    quad: &QuadratureSpec,
) -> Result<OptimizeReport> {
    optimize_association_mobile_with(net, profile, quad, &OptimizerConfig::default())
}

pub fn optimize_association_mobile_with(
    net: &NetworkModel,
    profile: &MobilityProfile,
    quad: &QuadratureSpec,
    cfg: &OptimizerConfig,
) -> Result<OptimizeReport> {
    if profile.direction != Direction::Uniform {
        return Err(CoreError::InvalidParameter {
            name: "direction",
            value: f64::NAN,
            constraint: "optimization is defined for the uniform direction distribution",
        });
    }
    let k = net.tier_count();
    let v = profile.speed;
    let beta = net.beta;
    let rhos: Vec<f64> = net
        .tiers()
        .iter()
        .map(|t| rho(t.sir_threshold, net.alpha))
        .collect::<Result<_>>()?;
    let lams: Vec<f64> = net.tiers().iter().map(|t| t.density).collect();

    if k == 1 {
        let objective = tier_coverage_term(1.0, rhos[0], lams[0], beta, v, quad)?;
        return Ok(OptimizeReport {
            association: vec![1.0],
            objective,
            bias: vec![1.0],
            boundary_tiers: Vec::new(),
            converged: true,
            evaluations: 1,
        });
    }

    let mut evaluations = 0usize;
    let mut objective = |a: &[f64]| -> Result<f64> {
        evaluations += 1;
        let mut total = 0.0;
        for i in 0..k {
            total += tier_coverage_term(a[i], rhos[i], lams[i], beta, v, quad)?;
        }
        Ok(total)
    };

    // Deterministic starts (uniform and the stationary optimum) followed by
    // random interior points.
    let mut starts: Vec<Vec<f64>> = vec![
        vec![1.0 / k as f64; k],
        optimal_association_stationary(net)?,
    ];
    let mut rng = SmallRng::seed_from_u64(cfg.seed);
    while starts.len() < cfg.restarts.max(1) {
        let draws: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().ln()).collect();
        let total: f64 = draws.iter().sum();
        starts.push(draws.into_iter().map(|x| x / total).collect());
    }

    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    for start in starts {
        let mut a = start;
        let mut f = objective(&a)?;
        let mut run_converged = false;
        for _ in 0..cfg.max_iterations {
            // central differences, one-sided at the boundary
            let mut grad = vec![0.0; k];
            for i in 0..k {
                let h = cfg.gradient_step;
                let mut plus = a.clone();
                plus[i] += h;
                let fp = objective(&plus)?;
                if a[i] >= h {
                    let mut minus = a.clone();
                    minus[i] -= h;
                    let fm = objective(&minus)?;
                    grad[i] = (fp - fm) / (2.0 * h);
                } else {
                    grad[i] = (fp - f) / h;
                }
            }
            let mut step = cfg.initial_step;
            let mut accepted = false;
            while step > 1e-14 {
                let candidate: Vec<f64> = (0..k).map(|i| a[i] + step * grad[i]).collect();
                let projected = project_simplex(&candidate);
                let directional: f64 = (0..k).map(|i| grad[i] * (projected[i] - a[i])).sum();
                if directional <= 0.0 {
                    break;
                }
                let f_new = objective(&projected)?;
                if f_new >= f + cfg.armijo_slope * directional {
                    let improvement = f_new - f;
                    a = projected;
                    f = f_new;
                    accepted = true;
                    if improvement < cfg.improvement_tol {
                        run_converged = true;
                    }
                    break;
                }
                step *= cfg.armijo_shrink;
            }
            if !accepted {
                run_converged = true;
            }
            if run_converged {
                break;
            }
        }
        match &best {
            Some((_, best_f, _)) if *best_f >= f => {}
            _ => best = Some((a, f, run_converged)),
        }
    }

    let (raw, _, converged) = best.expect("at least one restart runs");

    // Clamp boundary-pinned tiers so the bias map stays defined, then
    // re-normalize the remainder.
    let mut boundary_tiers = Vec::new();
    let mut association = raw.clone();
    for (i, a) in association.iter_mut().enumerate() {
        if *a < cfg.boundary_floor {
            *a = cfg.boundary_floor;
            boundary_tiers.push(i);
        }
    }
    let pinned: f64 = boundary_tiers.iter().map(|&i| association[i]).sum();
    let free_sum: f64 = association
        .iter()
        .enumerate()
        .filter(|(i, _)| !boundary_tiers.contains(i))
        .map(|(_, a)| *a)
        .sum();
    let target_free = 1.0 - pinned;
    for (i, a) in association.iter_mut().enumerate() {
        if !boundary_tiers.contains(&i) {
            *a *= target_free / free_sum;
        }
    }

    let objective_at_clamp = {
        let mut total = 0.0;
        for i in 0..k {
            total += tier_coverage_term(association[i], rhos[i], lams[i], beta, v, quad)?;
        }
        total
    };
    let bias = solve_bias(net, &association)?;

    Ok(OptimizeReport {
        association,
        objective: objective_at_clamp,
        bias,
        boundary_tiers,
        converged,
        evaluations,
    })
}

/// Which per-tier term the concavity probe evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    /// Stationary coverage share f_{.,1}(A) = A / (1 + A rho).
    Stationary,
    /// Joint coverage-and-no-handoff share (the beta = 1 term).
    Mobile,
    /// The cost-weighted combination with the model's beta.
    Weighted,
}

/// Second finite differences of a per-tier objective term along a grid.
#[derive(Debug, Clone)]
pub struct ConcavityReport {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Second divided differences (times 2), one per interior grid point.
    pub second_differences: Vec<f64>,
    /// Interior indices where the second difference is >= 0.
    pub non_concave: Vec<usize>,
}

impl ConcavityReport {
    pub fn all_concave(&self) -> bool {
        self.non_concave.is_empty()
    }
}

/// Probe concavity of one tier's objective term over `grid` (association
/// values in (0,1), strictly increasing, at least three points).
pub fn concavity_probe(
    net: &NetworkModel,
    profile: &MobilityProfile,
    quad: &QuadratureSpec,
    tier: usize,
    grid: &[f64],
    kind: TermKind,
) -> Result<ConcavityReport> {
    if tier >= net.tier_count() {
        return Err(CoreError::InvalidParameter {
            name: "tier",
            value: tier as f64,
            constraint: "tier index out of range",
        });
    }
    if grid.len() < 3 {
        return Err(CoreError::InvalidParameter {
            name: "grid.len",
            value: grid.len() as f64,
            constraint: "need at least three points",
        });
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(CoreError::InvalidParameter {
                name: "grid",
                value: pair[1],
                constraint: "must be strictly increasing",
            });
        }
    }
    if grid[0] <= 0.0 || *grid.last().unwrap() >= 1.0 {
        return Err(CoreError::InvalidParameter {
            name: "grid",
            value: grid[0].min(*grid.last().unwrap()),
            constraint: "grid values must lie in (0, 1)",
        });
    }

    let t = &net.tiers()[tier];
    let rho_k = rho(t.sir_threshold, net.alpha)?;
    let (beta, v) = match kind {
        TermKind::Stationary => (0.0, 0.0),
        TermKind::Mobile => (1.0, profile.speed),
        TermKind::Weighted => (net.beta, profile.speed),
    };
    let values: Vec<f64> = grid
        .iter()
        .map(|&a| tier_coverage_term(a, rho_k, t.density, beta, v, quad))
        .collect::<Result<_>>()?;

    let mut second_differences = Vec::with_capacity(grid.len() - 2);
    let mut non_concave = Vec::new();
    for i in 1..grid.len() - 1 {
        let left = (values[i] - values[i - 1]) / (grid[i] - grid[i - 1]);
        let right = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
        let dd = 2.0 * (right - left) / (grid[i + 1] - grid[i - 1]);
        if dd >= 0.0 {
            non_concave.push(i);
        }
        second_differences.push(dd);
    }
    Ok(ConcavityReport {
        grid: grid.to_vec(),
        values,
        second_differences,
        non_concave,
    })
}
