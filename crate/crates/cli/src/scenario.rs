//! Scenario files: a flat TOML document with one section per subsystem.
//! Unknown keys are rejected; densities accept a per-1000-m^2 convenience
//! unit; angles accept an explicit `deg` or `rad` suffix.

use serde::Deserialize;

use hetnet_core::{Direction, MobilityProfile, NetworkModel, TierParams};
use hetnet_mc::SimConfig;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub description: Option<String>,
    pub network: NetworkSection,
    #[serde(default)]
    pub mobility: MobilitySection,
    #[serde(default)]
    pub sim: SimSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(rename = "tier")]
    pub tiers: Vec<TierSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierSection {
    pub density_per_m2: Option<f64>,
    pub density_per_1000m2: Option<f64>,
    pub power_dbm: f64,
    pub sir_threshold: Option<f64>,
    pub sir_threshold_db: Option<f64>,
    #[serde(default = "one")]
    pub bias: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MobilitySection {
    #[serde(default)]
    pub speed: f64,
    /// "uniform" or "fixed:<angle>"; angles are radians unless suffixed
    /// with "deg".
    #[serde(default)]
    pub direction: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub window_radius: Option<f64>,
    #[serde(default)]
    pub antithetic: bool,
}

fn default_reps() -> usize {
    10_000
}
fn default_seed() -> u64 {
    1
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            reps: default_reps(),
            seed: default_seed(),
            window_radius: None,
            antithetic: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    /// 1-based tier index for density sweeps; defaults to the densest tier.
    #[serde(default)]
    pub tier: Option<usize>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Speed,
    #[serde(rename = "density_per_1000m2")]
    DensityPer1000m2,
    A2,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub curves: CurveSide,
    #[serde(default = "default_prefix")]
    pub prefix: String,
    #[serde(default)]
    pub mode: RunMode,
}

fn default_prefix() -> String {
    "run".to_string()
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    HandoffRadial,
    HandoffExact,
    HandoffApprox,
    Coverage,
}

impl Quantity {
    pub fn file_stem(self) -> &'static str {
        match self {
            Quantity::HandoffRadial => "handoff_radial",
            Quantity::HandoffExact => "handoff_exact",
            Quantity::HandoffApprox => "handoff_approx",
            Quantity::Coverage => "coverage",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum CurveSide {
    Analytic,
    Mc,
    #[default]
    Both,
}

impl CurveSide {
    pub fn analytic(self) -> bool {
        matches!(self, CurveSide::Analytic | CurveSide::Both)
    }
    pub fn mc(self) -> bool {
        matches!(self, CurveSide::Mc | CurveSide::Both)
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    #[default]
    Curves,
    Optimize,
}

/// Parse an angle with an optional `deg`/`rad` suffix; bare numbers are
/// radians.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let (num, factor) = if let Some(stripped) = t.strip_suffix("deg") {
        (stripped, std::f64::consts::PI / 180.0)
    } else if let Some(stripped) = t.strip_suffix("rad") {
        (stripped, 1.0)
    } else {
        (t, 1.0)
    };
    num.trim()
        .parse::<f64>()
        .map(|x| x * factor)
        .map_err(|e| CliError::config(format!("bad angle {text:?}: {e}")))
}

fn parse_direction(text: Option<&str>) -> Result<Direction> {
    match text {
        None => Ok(Direction::Uniform),
        Some(t) if t.trim() == "uniform" => Ok(Direction::Uniform),
        Some(t) => {
            let rest = t.trim().strip_prefix("fixed:").ok_or_else(|| {
                CliError::config(format!(
                    "direction must be \"uniform\" or \"fixed:<angle>\", got {t:?}"
                ))
            })?;
            Ok(Direction::Fixed(parse_angle(rest)?))
        }
    }
}

/// A fully validated scenario, with core types constructed.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub description: Option<String>,
    pub network: NetworkModel,
    pub profile: MobilityProfile,
    pub sim: SimConfig,
    pub sweep_variable: SweepVariable,
    pub sweep_tier: usize,
    pub sweep_values: Vec<f64>,
    pub quantities: Vec<Quantity>,
    pub curves: CurveSide,
    pub prefix: String,
    pub mode: RunMode,
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| CliError::config(format!("scenario parse: {e}")))?;
    build_scenario(file)
}

fn build_tier(t: &TierSection, index: usize) -> Result<TierParams> {
    let density = match (t.density_per_m2, t.density_per_1000m2) {
        (Some(d), None) => d,
        (None, Some(d)) => d / 1000.0,
        _ => {
            return Err(CliError::config(format!(
                "tier {}: set exactly one of density_per_m2 / density_per_1000m2",
                index + 1
            )))
        }
    };
    let tau = match (t.sir_threshold, t.sir_threshold_db) {
        (Some(x), None) => x,
        (None, Some(db)) => 10f64.powf(db / 10.0),
        _ => {
            return Err(CliError::config(format!(
                "tier {}: set exactly one of sir_threshold / sir_threshold_db",
                index + 1
            )))
        }
    };
    TierParams::new(density, t.power_dbm, tau, t.bias).map_err(Into::into)
}

fn expand_sweep(sweep: &SweepSection) -> Result<Vec<f64>> {
    let values = match (&sweep.values, &sweep.grid) {
        (Some(v), None) => v.clone(),
        (None, Some(g)) => {
            if g.step.is_nan() || g.step <= 0.0 || g.stop < g.start {
                return Err(CliError::config(format!(
                    "bad sweep grid: start {}, stop {}, step {}",
                    g.start, g.stop, g.step
                )));
            }
            let mut v = Vec::new();
            let mut k = 0u64;
            loop {
                let x = g.start + k as f64 * g.step;
                if x > g.stop + 1e-9 * g.step {
                    break;
                }
                v.push(x);
                k += 1;
            }
            v
        }
        _ => {
            return Err(CliError::config(
                "sweep: set exactly one of values / grid".to_string(),
            ))
        }
    };
    if values.is_empty() {
        return Err(CliError::config("sweep range is empty".to_string()));
    }
    for pair in values.windows(2) {
        if pair[1] <= pair[0] {
            return Err(CliError::config(format!(
                "sweep values must be strictly increasing ({} then {})",
                pair[0], pair[1]
            )));
        }
    }
    Ok(values)
}

fn build_scenario(file: ScenarioFile) -> Result<Scenario> {
    if file.network.tiers.is_empty() {
        return Err(CliError::config(
            "network needs at least one [[network.tier]]",
        ));
    }
    let tiers = file
        .network
        .tiers
        .iter()
        .enumerate()
        .map(|(i, t)| build_tier(t, i))
        .collect::<Result<Vec<_>>>()?;
    let network = NetworkModel::new(tiers, file.network.alpha, file.network.beta)?;
    let direction = parse_direction(file.mobility.direction.as_deref())?;
    let profile = MobilityProfile::new(file.mobility.speed, direction)?;

    let mut sim = SimConfig::new(file.sim.reps, file.sim.seed);
    sim.window_radius = file.sim.window_radius;
    sim.antithetic = file.sim.antithetic;
    sim.validate()?;

    let sweep_values = expand_sweep(&file.sweep)?;
    let sweep_tier = file.sweep.tier.unwrap_or(network.tier_count());
    if file.sweep.variable == SweepVariable::DensityPer1000m2
        && (sweep_tier == 0 || sweep_tier > network.tier_count())
    {
        return Err(CliError::config(format!(
            "sweep.tier {} out of range (network has {} tiers)",
            sweep_tier,
            network.tier_count()
        )));
    }
    if file.sweep.variable == SweepVariable::A2 {
        if network.tier_count() != 2 {
            return Err(CliError::config(
                "an a2 sweep needs exactly two tiers".to_string(),
            ));
        }
        if sweep_values[0] <= 0.0 || *sweep_values.last().unwrap() >= 1.0 {
            return Err(CliError::config(
                "a2 sweep values must lie strictly inside (0, 1)".to_string(),
            ));
        }
    }
    if file.output.quantities.is_empty() {
        return Err(CliError::config("output.quantities is empty".to_string()));
    }
    if file
        .output
        .quantities
        .iter()
        .any(|q| *q != Quantity::Coverage)
        && network.tier_count() != 1
    {
        return Err(CliError::config(
            "handoff-rate quantities are defined for single-tier networks".to_string(),
        ));
    }
    if file.output.mode == RunMode::Optimize && file.sweep.variable != SweepVariable::Speed {
        return Err(CliError::config(
            "optimize mode requires a speed sweep".to_string(),
        ));
    }

    Ok(Scenario {
        description: file.description,
        network,
        profile,
        sim,
        sweep_variable: file.sweep.variable,
        sweep_tier,
        sweep_values,
        quantities: file.output.quantities,
        curves: file.output.curves,
        prefix: file.output.prefix,
        mode: file.output.mode,
    })
}
