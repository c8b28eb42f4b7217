//! Curve CSV emission. One file per curve, fixed schema
//! `x,analytic,mc_estimate,mc_se,n_reps,seed`; cells not produced by the
//! run stay empty. Floats use Rust's shortest round-trip formatting, so a
//! given scenario and seed always produce byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

#[derive(Debug, Clone, Copy, Default)]
pub struct Row {
    pub x: f64,
    pub analytic: Option<f64>,
    pub mc: Option<McCell>,
}

#[derive(Debug, Clone, Copy)]
pub struct McCell {
    pub estimate: f64,
    pub std_error: f64,
    pub reps: usize,
    pub seed: u64,
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_curve(dir: &Path, name: &str, rows: &[Row]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.csv"));
    let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
    writeln!(w, "x,analytic,mc_estimate,mc_se,n_reps,seed")?;
    for row in rows {
        let (mc_est, mc_se, n_reps, seed) = match row.mc {
            Some(cell) => (
                cell.estimate.to_string(),
                cell.std_error.to_string(),
                cell.reps.to_string(),
                cell.seed.to_string(),
            ),
            None => Default::default(),
        };
        writeln!(
            w,
            "{},{},{mc_est},{mc_se},{n_reps},{seed}",
            row.x,
            fmt_opt(row.analytic),
        )?;
    }
    w.flush()?;
    Ok(path)
}

/// A parsed curve file (for `compare` and the tests).
#[derive(Debug, Clone)]
pub struct CurveFile {
    pub rows: Vec<Row>,
}

pub fn read_curve(path: &Path) -> Result<CurveFile> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "x,analytic,mc_estimate,mc_se,n_reps,seed" {
        return Err(crate::error::CliError::config(format!(
            "{}: unexpected header {header:?}",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(crate::error::CliError::config(format!(
                "{}: line {} has {} fields",
                path.display(),
                i + 2,
                fields.len()
            )));
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| {
                crate::error::CliError::config(format!(
                    "{}: line {}: bad {what} {s:?}: {e}",
                    path.display(),
                    i + 2
                ))
            })
        };
        let x = parse(fields[0], "x")?;
        let analytic = if fields[1].is_empty() {
            None
        } else {
            Some(parse(fields[1], "analytic")?)
        };
        let mc = if fields[2].is_empty() {
            None
        } else {
            Some(McCell {
                estimate: parse(fields[2], "mc_estimate")?,
                std_error: parse(fields[3], "mc_se")?,
                reps: fields[4].parse().unwrap_or(0),
                seed: fields[5].parse().unwrap_or(0),
            })
        };
        rows.push(Row { x, analytic, mc });
    }
    Ok(CurveFile { rows })
}
