//! Scenario execution: evaluate every requested curve at every sweep point,
//! then write all files (validation failures never leave partial output).

use std::path::{Path, PathBuf};

use hetnet_core::coverage::coverage_mobile_single_tier;
use hetnet_core::handoff::{handoff_rate_approx, handoff_rate_exact, handoff_rate_radial};
use hetnet_core::multitier::{
    association_probabilities, coverage_multitier_mobile, coverage_multitier_stationary,
    optimal_association_stationary, optimize_association_mobile_with, OptimizerConfig,
};
use hetnet_core::{MobilityProfile, NetworkModel, QuadratureSpec};
use hetnet_mc::{estimate, EventSpec, SimConfig};

use crate::error::{CliError, Result};
use crate::output::{write_curve, McCell, Row};
use crate::scenario::{Quantity, RunMode, Scenario, SweepVariable};

/// One sweep point, fully materialized.
struct SweepPoint {
    x: f64,
    network: NetworkModel,
    profile: MobilityProfile,
    /// Association point for a2 sweeps (None means "from the biases").
    association: Option<Vec<f64>>,
}

fn materialize_points(s: &Scenario) -> Result<Vec<SweepPoint>> {
    let mut points = Vec::with_capacity(s.sweep_values.len());
    for &x in &s.sweep_values {
        let point = match s.sweep_variable {
            SweepVariable::Speed => SweepPoint {
                x,
                network: s.network.clone(),
                profile: MobilityProfile::new(x, s.profile.direction)?,
                association: None,
            },
            SweepVariable::DensityPer1000m2 => {
                let mut tiers = s.network.tiers().to_vec();
                tiers[s.sweep_tier - 1].density = x / 1000.0;
                let network = NetworkModel::new(tiers, s.network.alpha, s.network.beta)?;
                SweepPoint {
                    x,
                    network,
                    profile: s.profile,
                    association: None,
                }
            }
            SweepVariable::A2 => SweepPoint {
                x,
                network: s.network.clone(),
                profile: s.profile,
                association: Some(vec![1.0 - x, x]),
            },
        };
        points.push(point);
    }
    Ok(points)
}

fn analytic_value(q: Quantity, p: &SweepPoint, quad: &QuadratureSpec) -> Result<f64> {
    match q {
        Quantity::HandoffRadial => Ok(handoff_rate_radial(
            p.network.tiers()[0].density,
            p.profile.speed,
        )),
        Quantity::HandoffExact => {
            let uniform = MobilityProfile::uniform(p.profile.speed)?;
            Ok(handoff_rate_exact(
                p.network.tiers()[0].density,
                &uniform,
                quad,
            )?)
        }
        Quantity::HandoffApprox => Ok(handoff_rate_approx(
            p.network.tiers()[0].density,
            p.profile.speed,
            quad,
        )?),
        Quantity::Coverage => {
            let assoc = match &p.association {
                Some(a) => a.clone(),
                None => association_probabilities(&p.network),
            };
            if p.profile.speed == 0.0 || p.network.beta == 0.0 {
                Ok(coverage_multitier_stationary(&p.network, &assoc)?)
            } else if p.network.tier_count() == 1 {
                let t = &p.network.tiers()[0];
                let uniform = MobilityProfile::uniform(p.profile.speed)?;
                Ok(coverage_mobile_single_tier(
                    t.density,
                    &uniform,
                    p.network.beta,
                    t.sir_threshold,
                    p.network.alpha,
                    quad,
                )?)
            } else {
                let uniform = MobilityProfile::uniform(p.profile.speed)?;
                Ok(coverage_multitier_mobile(
                    &p.network, &assoc, &uniform, quad,
                )?)
            }
        }
    }
}

fn mc_value(q: Quantity, p: &SweepPoint, sim: &SimConfig) -> Result<McCell> {
    let (event, network, profile) = match q {
        Quantity::HandoffRadial => (
            EventSpec::Handoff,
            p.network.clone(),
            MobilityProfile::radial(p.profile.speed)?,
        ),
        Quantity::HandoffExact | Quantity::HandoffApprox => (
            EventSpec::Handoff,
            p.network.clone(),
            MobilityProfile::uniform(p.profile.speed)?,
        ),
        Quantity::Coverage => {
            let network = match &p.association {
                Some(a) => {
                    let bias = hetnet_core::multitier::solve_bias(&p.network, a)?;
                    p.network.clone().with_biases(&bias)?
                }
                None => p.network.clone(),
            };
            (
                EventSpec::CompositeCost { beta: None },
                network,
                MobilityProfile::uniform(p.profile.speed)?,
            )
        }
    };
    let e = estimate(event, &network, &profile, sim)?;
    Ok(McCell {
        estimate: e.estimate,
        std_error: e.std_error,
        reps: e.reps,
        seed: e.seed,
    })
}

/// Run a scenario; returns the written files.
pub fn run_scenario(
    s: &Scenario,
    out_dir: &Path,
    quad: &QuadratureSpec,
    quiet: bool,
) -> Result<Vec<PathBuf>> {
    if !quiet {
        if let Some(desc) = &s.description {
            println!("# {desc}");
        }
    }
    match s.mode {
        RunMode::Curves => run_curves(s, out_dir, quad, quiet),
        RunMode::Optimize => run_optimize(s, out_dir, quad, quiet),
    }
}

fn run_curves(
    s: &Scenario,
    out_dir: &Path,
    quad: &QuadratureSpec,
    quiet: bool,
) -> Result<Vec<PathBuf>> {
    let points = materialize_points(s)?;
    let mut curves: Vec<(String, Vec<Row>)> = Vec::new();
    for &q in &s.quantities {
        let mut rows = Vec::with_capacity(points.len());
        for p in &points {
            let analytic = if s.curves.analytic() {
                Some(analytic_value(q, p, quad)?)
            } else {
                None
            };
            let mc = if s.curves.mc() {
                Some(mc_value(q, p, &s.sim)?)
            } else {
                None
            };
            rows.push(Row {
                x: p.x,
                analytic,
                mc,
            });
        }
        curves.push((format!("{}_{}", s.prefix, q.file_stem()), rows));
    }
    write_all(curves, out_dir, quiet)
}

fn run_optimize(
    s: &Scenario,
    out_dir: &Path,
    quad: &QuadratureSpec,
    quiet: bool,
) -> Result<Vec<PathBuf>> {
    let net = &s.network;
    let k = net.tier_count();
    let unit_bias_net = net.clone().with_biases(&vec![1.0; k])?;
    let max_sir_assoc = association_probabilities(&unit_bias_net);
    let stationary_assoc = optimal_association_stationary(net)?;
    let optimizer = OptimizerConfig::default();

    let mut optimum_rows = Vec::new();
    let mut v0_rows = Vec::new();
    let mut max_sir_rows = Vec::new();
    let mut assoc_rows: Vec<Vec<Row>> = vec![Vec::new(); k];
    let mut bias_rows: Vec<Vec<Row>> = vec![Vec::new(); k];

    for &v in &s.sweep_values {
        let profile = MobilityProfile::uniform(v)?;
        let report = optimize_association_mobile_with(net, &profile, quad, &optimizer)?;
        if !report.converged {
            return Err(CliError::Numerical(format!(
                "association optimizer did not converge at v = {v}; best objective {}",
                report.objective
            )));
        }
        let objective_at = |assoc: &[f64]| -> Result<f64> {
            Ok(coverage_multitier_mobile(net, assoc, &profile, quad)?)
        };
        let mc = if s.curves.mc() {
            let biased = net.clone().with_biases(&report.bias)?;
            let e = estimate(
                EventSpec::CompositeCost { beta: None },
                &biased,
                &profile,
                &s.sim,
            )?;
            Some(McCell {
                estimate: e.estimate,
                std_error: e.std_error,
                reps: e.reps,
                seed: e.seed,
            })
        } else {
            None
        };
        optimum_rows.push(Row {
            x: v,
            analytic: Some(report.objective),
            mc,
        });
        v0_rows.push(Row {
            x: v,
            analytic: Some(objective_at(&stationary_assoc)?),
            mc: None,
        });
        max_sir_rows.push(Row {
            x: v,
            analytic: Some(objective_at(&max_sir_assoc)?),
            mc: None,
        });
        for tier in 0..k {
            assoc_rows[tier].push(Row {
                x: v,
                analytic: Some(report.association[tier]),
                mc: None,
            });
            bias_rows[tier].push(Row {
                x: v,
                analytic: Some(report.bias[tier]),
                mc: None,
            });
        }
    }

    let mut curves = vec![
        (format!("{}_coverage_optimum", s.prefix), optimum_rows),
        (format!("{}_coverage_bias_v0", s.prefix), v0_rows),
        (format!("{}_coverage_max_sir", s.prefix), max_sir_rows),
    ];
    for tier in 1..k {
        curves.push((
            format!("{}_association_tier{}", s.prefix, tier + 1),
            std::mem::take(&mut assoc_rows[tier]),
        ));
        curves.push((
            format!("{}_bias_tier{}", s.prefix, tier + 1),
            std::mem::take(&mut bias_rows[tier]),
        ));
    }
    write_all(curves, out_dir, quiet)
}

fn write_all(curves: Vec<(String, Vec<Row>)>, out_dir: &Path, quiet: bool) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(curves.len());
    for (name, rows) in curves {
        let path = write_curve(out_dir, &name, &rows)?;
        if !quiet {
            println!("wrote {}", path.display());
        }
        written.push(path);
    }
    Ok(written)
}
