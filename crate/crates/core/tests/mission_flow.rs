use std::collections::HashSet;
use std::path::Path;

use hadal_sim::harness::{load_scenario_file, LogRecord, Outcome, ScenarioConfig, Simulation};
use hadal_sim::mission::MissionPhase;
use hadal_sim::sensing::SensorSuiteConfig;

fn shipped() -> ScenarioConfig {
    load_scenario_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/hadal_recovery")).unwrap()
}

/// Steps a scenario to completion, checking per-tick mission invariants.
fn run_checked(cfg: ScenarioConfig) -> (Simulation, Vec<LogRecord>) {
    let mut sim = Simulation::new(cfg).unwrap();
    let mut records = Vec::new();
    while sim.step(&mut records).unwrap().is_none() {
        let Some(out) = sim.last_mission_output() else { continue };
        if out.suction {
            assert!(
                matches!(out.phase, MissionPhase::Grasp | MissionPhase::Transport),
                "suction on in {}",
                out.phase
            );
        }
        if out.request_attach {
            assert!(out.suction, "attach requested with suction off");
        }
    }
    (sim, records)
}

fn captured_indices(records: &[LogRecord]) -> Vec<usize> {
    records
        .iter()
        .filter_map(|r| match r {
            LogRecord::Waypoint { index, .. } => Some(*index),
            _ => None,
        })
        .collect()
}

#[test]
fn shipped_mission_keeps_suction_discipline() {
    let (sim, records) = run_checked(shipped());
    assert_eq!(sim.outcome(), Some(Outcome::Done));

    let indices = captured_indices(&records);
    let unique: HashSet<_> = indices.iter().collect();
    assert_eq!(unique.len(), indices.len(), "a waypoint was captured twice");
    assert_eq!(indices.len(), sim.executive().plan().waypoints.len());

    // Attach only happens while grasping, release only while transporting.
    let mut phase = "descend".to_string();
    for r in &records {
        match r {
            LogRecord::Phase { to, .. } => phase = to.clone(),
            LogRecord::Grasp { action, .. } if action == "attach" || action == "reject" => {
                assert_eq!(phase, "grasp")
            }
            LogRecord::Grasp { action, .. } if action == "release" => assert_eq!(phase, "transport"),
            _ => {}
        }
    }
}

#[test]
fn zero_noise_mission_completes() {
    let mut cfg = shipped();
    cfg.sensors = SensorSuiteConfig::default();
    cfg.environment.current_velocity = [0.0; 3];
    let (sim, records) = run_checked(cfg);
    assert_eq!(sim.outcome(), Some(Outcome::Done));
    assert!(sim.time() < 4000.0);
    let indices = captured_indices(&records);
    assert_eq!(indices, (0..indices.len()).collect::<Vec<_>>());
}

#[test]
fn unreachable_object_times_out_survey() {
    // Nothing to find: the survey finishes, holds its last waypoint and times out.
    let mut cfg = shipped();
    cfg.object.position = [500.0, 500.0, 6004.0];
    cfg.mission.timeouts.survey = 600.0;
    let (sim, _) = run_checked(cfg);
    let outcome = sim.outcome().unwrap();
    assert_eq!(outcome.exit_code(), 2);
    assert_eq!(sim.executive().phase().to_string(), "abort(timeout:survey)");
}
