//! Optional replication-level event log.

use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::Result;
use crate::estimate::RepOutcome;

/// Write one CSV row per replication:
/// `seed,rep,tier,r,theta,v,sir_db,covered,handoff,discarded`.
/// Quantities that were not computed for the estimand are left empty.
pub fn write_event_log(path: &Path, outcomes: &[RepOutcome], seed: u64, speed: f64) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "seed,rep,tier,r,theta,v,sir_db,covered,handoff,discarded"
    )?;
    for (rep, o) in outcomes.iter().enumerate() {
        let theta = if o.theta.is_nan() {
            String::new()
        } else {
            format!("{}", o.theta)
        };
        let sir_db = if o.sir.is_nan() {
            String::new()
        } else if o.sir.is_infinite() {
            "inf".to_string()
        } else {
            format!("{}", 10.0 * o.sir.log10())
        };
        writeln!(
            w,
            "{seed},{rep},{tier},{r},{theta},{speed},{sir_db},{covered},{handoff},{discarded}",
            tier = o.tier + 1,
            r = o.r,
            covered = u8::from(o.covered),
            handoff = u8::from(o.handoff),
            discarded = u8::from(o.discarded),
        )?;
    }
    w.flush()?;
    Ok(())
}
