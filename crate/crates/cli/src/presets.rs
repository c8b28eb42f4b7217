//! Built-in experiment presets. Sweep grids and replication counts are
//! artifact choices recorded in each description.

pub struct Preset {
    pub name: &'static str,
    pub about: &'static str,
    pub scenarios: &'static [&'static str],
}

const FIG3_SPEED: &str = r#"
description = "Handoff rate vs displacement at density 1/1000 m^2; radial and uniform-direction curves. Sweep grid 0..20 step 2 chosen here."

[network]
alpha = 3.5

[[network.tier]]
density_per_1000m2 = 1.0
power_dbm = 20.0
sir_threshold_db = 0.0

[mobility]
direction = "uniform"

[sim]
reps = 20000
seed = 1003

[sweep]
variable = "speed"
grid = { start = 0.0, stop = 20.0, step = 2.0 }

[output]
quantities = ["handoff_radial", "handoff_exact", "handoff_approx"]
curves = "both"
prefix = "fig3_speed"
"#;

const FIG3_DENSITY: &str = r#"
description = "Handoff rate vs AP density at v = 5; radial and uniform-direction curves. Density grid in per-1000-m^2 units chosen here."

[network]
alpha = 3.5

[[network.tier]]
density_per_1000m2 = 1.0
power_dbm = 20.0
sir_threshold_db = 0.0

[mobility]
speed = 5.0
direction = "uniform"

[sim]
reps = 20000
seed = 1004

[sweep]
variable = "density_per_1000m2"
tier = 1
values = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0]

[output]
quantities = ["handoff_radial", "handoff_exact", "handoff_approx"]
curves = "both"
prefix = "fig3_density"
"#;

const FIG4: &str = r#"
description = "Handoff rate at large displacements: the linearized rate drifts below the exact one once v is comparable to the connection distance."

[network]
alpha = 3.5

[[network.tier]]
density_per_1000m2 = 1.0
power_dbm = 20.0
sir_threshold_db = 0.0

[mobility]
direction = "uniform"

[sim]
reps = 20000
seed = 1005

[sweep]
variable = "speed"
grid = { start = 0.0, stop = 60.0, step = 5.0 }

[output]
quantities = ["handoff_exact", "handoff_approx"]
curves = "both"
prefix = "fig4"
"#;

const FIG5_BETA03: &str = r#"
description = "Mobile coverage vs displacement, tau = 0 dB, beta = 0.3, density 1/1000 m^2. Density and speed grid chosen here."

[network]
alpha = 3.5
beta = 0.3

[[network.tier]]
density_per_1000m2 = 1.0
power_dbm = 20.0
sir_threshold_db = 0.0

[mobility]
direction = "uniform"

[sim]
reps = 20000
seed = 1006

[sweep]
variable = "speed"
grid = { start = 0.0, stop = 30.0, step = 3.0 }

[output]
quantities = ["coverage"]
curves = "both"
prefix = "fig5_beta03"
"#;

const FIG5_BETA09: &str = r#"
description = "Mobile coverage vs displacement, tau = 0 dB, beta = 0.9, density 1/1000 m^2."

[network]
alpha = 3.5
beta = 0.9

[[network.tier]]
density_per_1000m2 = 1.0
power_dbm = 20.0
sir_threshold_db = 0.0

[mobility]
direction = "uniform"

[sim]
reps = 20000
seed = 1007

[sweep]
variable = "speed"
grid = { start = 0.0, stop = 30.0, step = 3.0 }

[output]
quantities = ["coverage"]
curves = "both"
prefix = "fig5_beta09"
"#;

const FIG6: &str = r#"
description = "Stationary two-tier coverage vs the dense-tier association probability; densities {0.1, 1}/1000 m^2, powers {46, 20} dBm, tau = 0 dB. Maximum at the even split."

[network]
alpha = 3.5

[[network.tier]]
density_per_1000m2 = 0.1
power_dbm = 46.0
sir_threshold_db = 0.0

[[network.tier]]
density_per_1000m2 = 1.0
power_dbm = 20.0
sir_threshold_db = 0.0

[sim]
reps = 20000
seed = 1008

[sweep]
variable = "a2"
grid = { start = 0.01, stop = 0.99, step = 0.001 }

[output]
quantities = ["coverage"]
curves = "analytic"
prefix = "fig6"
"#;

const FIG7: &str = r#"
description = "Mobility-aware association in a two-tier network: densities {0.1, 10}/1000 m^2, powers {46, 20} dBm, beta = 0.9, tau = 0 dB. Optimum association/bias per speed against the stationary-optimum and max-SIR baselines."

[network]
alpha = 3.5
beta = 0.9

[[network.tier]]
density_per_1000m2 = 0.1
power_dbm = 46.0
sir_threshold_db = 0.0

[[network.tier]]
density_per_1000m2 = 10.0
power_dbm = 20.0
sir_threshold_db = 0.0

[mobility]
direction = "uniform"

[sim]
reps = 20000
seed = 1009

[sweep]
variable = "speed"
grid = { start = 0.0, stop = 30.0, step = 5.0 }

[output]
quantities = ["coverage"]
curves = "analytic"
prefix = "fig7"
mode = "optimize"
"#;

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig3",
        about: "handoff rate vs displacement and vs density (radial + uniform curves)",
        scenarios: &[FIG3_SPEED, FIG3_DENSITY],
    },
    Preset {
        name: "fig4",
        about: "handoff-rate approximation at large displacements",
        scenarios: &[FIG4],
    },
    Preset {
        name: "fig5",
        about: "single-tier mobile coverage vs displacement (beta 0.3 and 0.9)",
        scenarios: &[FIG5_BETA03, FIG5_BETA09],
    },
    Preset {
        name: "fig6",
        about: "stationary two-tier coverage vs association split",
        scenarios: &[FIG6],
    },
    Preset {
        name: "fig7",
        about: "mobility-aware association optimization vs speed",
        scenarios: &[FIG7],
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
