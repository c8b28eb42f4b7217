//! Analytic-vs-simulation comparison: per-point z-scores and a
//! machine-readable summary.

use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, Result};
use crate::output::read_curve;

#[derive(Debug, Serialize)]
pub struct ComparePoint {
    pub x: f64,
    pub analytic: f64,
    pub mc_estimate: f64,
    pub mc_se: f64,
    pub z: f64,
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub points: Vec<ComparePoint>,
    pub max_abs_z: f64,
    pub frac_abs_z_above_3: f64,
}

/// Join an analytic curve with a Monte Carlo curve on an identical x-grid.
/// z = (analytic - mc) / se; a zero-variance pair scores 0 when the values
/// agree exactly and +/-inf otherwise.
pub fn compare(analytic_path: &Path, mc_path: &Path) -> Result<CompareReport> {
    let a = read_curve(analytic_path)?;
    let b = read_curve(mc_path)?;
    if a.rows.len() != b.rows.len() {
        return Err(CliError::config(format!(
            "sweep grids differ: {} points vs {}",
            a.rows.len(),
            b.rows.len()
        )));
    }
    let mut points = Vec::with_capacity(a.rows.len());
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        if ra.x != rb.x {
            return Err(CliError::config(format!(
                "sweep grids differ at x = {} vs {}",
                ra.x, rb.x
            )));
        }
        let analytic = ra.analytic.ok_or_else(|| {
            CliError::config(format!(
                "{}: no analytic column at x = {}",
                analytic_path.display(),
                ra.x
            ))
        })?;
        let mc = rb.mc.ok_or_else(|| {
            CliError::config(format!(
                "{}: no mc columns at x = {}",
                mc_path.display(),
                rb.x
            ))
        })?;
        let diff = analytic - mc.estimate;
        let z = if mc.std_error > 0.0 {
            diff / mc.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        points.push(ComparePoint {
            x: ra.x,
            analytic,
            mc_estimate: mc.estimate,
            mc_se: mc.std_error,
            z,
        });
    }
    let max_abs_z = points.iter().map(|p| p.z.abs()).fold(0.0, f64::max);
    let above = points.iter().filter(|p| p.z.abs() > 3.0).count();
    Ok(CompareReport {
        frac_abs_z_above_3: above as f64 / points.len() as f64,
        max_abs_z,
        points,
    })
}
