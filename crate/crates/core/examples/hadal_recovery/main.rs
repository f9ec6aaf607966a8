//! The full recovery mission: dive to 6000 m, survey, find the starfish, pick
//! it up and set it down at the drop-off point.
//!
//! ```text
//! cargo run --release --example hadal_recovery [OUT_DIR]
//! ```
//!
//! Logs go to `OUT_DIR` (default `hadal-out/hadal_recovery`).

use std::error::Error;
use std::path::{Path, PathBuf};

use hadal_sim::harness::{load_scenario_file, run_to_dir, summarize};

pub fn run(out: &Path) -> Result<(), Box<dyn Error>> {
    let scenario = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/hadal_recovery/scenario.toml");
    let config = load_scenario_file(&scenario)?;
    let summary = run_to_dir(&config, out)?;
    let logged = summarize(out)?;

    println!("outcome        {:?}", summary.outcome);
    println!(
        "sim time       {:.1} s ({:.0}x real time)",
        summary.sim_time, summary.real_time_factor
    );
    println!(
        "waypoints      {}/{}",
        summary.waypoints_captured, summary.waypoints_total
    );
    println!("grasp attempts {}", summary.grasp_attempts);
    if let Some(gap) = summary.attach_gap {
        println!("attach gap     {:.4} m", gap);
    }
    println!("dropoff error  {:.3} m", summary.dropoff_distance);
    println!("max INS error  {:.3} m", summary.max_ins_error);
    println!("transitions    {}", logged.phase_transitions);
    println!("logs           {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("hadal-out/hadal_recovery"));
    run(&out)
}
