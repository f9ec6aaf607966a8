//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fail.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use hadal_sim::control::{
    allocate_thrusters, body_to_world, pid_step, world_to_body, Frame, PidGains, PidState, PositionController,
    WrenchCommand,
};
use hadal_sim::dynamics::{step_vehicle, VehicleState};
use hadal_sim::geometry::Pose4;
use hadal_sim::harness::{load_scenario_file, read_csv, run_to_dir, LogKind, Outcome, RunSummary, ScenarioConfig};
use hadal_sim::manipulator::{
    accel_feedforward, forward_kinematics, integrate_joint_command, inverse_kinematics, ArmControlGains, ArmGeometry,
    JointState, QuinticMove,
};
use hadal_sim::mission::{
    is_declared_edge, plan_lawnmower, transition, AbortReason, MissionEvent, MissionPhase, PhaseKind, RetryBudget,
    StartCorner, SurveyBounds,
};
use hadal_sim::sensing::{ins_update, InsEstimate, SensorSuite, SensorSuiteConfig};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/hadal_recovery")
}

fn ik_fk_round_trip() -> Verdict {
    let geom = ArmGeometry {
        l1: 0.4,
        l2: 0.3,
        mount_position: [0.0; 3],
        mount_yaw: 0.0,
        joint_limits: [[-PI, PI], [-PI, PI], [-PI, 0.0]],
        joint_accel_limit: [2.0; 3],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (r_min, r_max) = (geom.min_reach(), geom.max_reach());
    let started = Instant::now();
    let mut max_err: f64 = 0.0;
    let mut elbow_ok = true;
    let mut failures = 0;
    for _ in 0..10_000 {
        // Uniform in the reachable spherical shell.
        let u: f64 = rng.random();
        let r = (r_min.powi(3) + u * (r_max.powi(3) - r_min.powi(3))).cbrt();
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(-PI..PI);
        let s = (1.0 - z * z).sqrt();
        let target = Vector3::new(r * s * phi.cos(), r * s * phi.sin(), r * z);
        match inverse_kinematics(&geom, &target) {
            Ok(q) => {
                elbow_ok &= (-PI..=0.0).contains(&q[2]);
                max_err = max_err.max((forward_kinematics(&geom, &q) - target).norm());
            }
            Err(_) => failures += 1,
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        failures == 0 && max_err < 1e-9 && elbow_ok && elapsed < 1.0,
        format!("max error {max_err:.3e} m, unreachable {failures}, elbow down {elbow_ok}, {elapsed:.3} s"),
    )
}

fn feedforward_tracking() -> Verdict {
    let geom = ArmGeometry::default();
    let gains = ArmControlGains {
        kp_joint: [4.0; 3],
        kv_joint: [2.0; 3],
    };
    let start = [-1.0, -0.5, -2.5];
    let goal = [1.5, 1.8, -0.4];
    let motion = QuinticMove::new(start, goal, 10.0);
    let dt = 0.01;
    let started = Instant::now();
    let mut state = JointState::at_rest(start);
    let mut within_limits = true;
    let steps = 1000;
    for k in 0..steps {
        let reference = motion.sample(k as f64 * dt);
        let cmd = accel_feedforward(&gains, &reference, &state, &geom);
        within_limits &= cmd.iter().zip(geom.joint_accel_limit).all(|(a, l)| a.abs() <= l);
        state = integrate_joint_command(&state, &cmd, &geom, dt);
    }
    let elapsed = started.elapsed().as_secs_f64();
    let err = (0..3).map(|j| (state.q[j] - goal[j]).abs()).fold(0.0, f64::max);
    verdict(
        err < 1e-3 && within_limits && elapsed < 1.0,
        format!("terminal error {err:.3e} rad, accelerations within limits {within_limits}, {elapsed:.3} s"),
    )
}

fn pid_contract() -> Verdict {
    let gains = PidGains::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut state = PidState::default();
    let mut windup_ok = true;
    for _ in 0..100_000 {
        let error: [f64; 4] = std::array::from_fn(|_| rng.random_range(-50.0..50.0));
        let dt = rng.random_range(1e-3..1.0);
        state = pid_step(&gains, &state, error, dt).1;
        windup_ok &= (0..4).all(|i| state.integral[i].abs() <= gains.integral_limit[i]);
    }

    let mut deadband_ok = true;
    for _ in 0..10_000 {
        let error: [f64; 4] = std::array::from_fn(|i| {
            let d = gains.deadband[i];
            rng.random_range(-d..d) * 0.999
        });
        let (w, _) = pid_step(&gains, &state, error, 0.1);
        deadband_ok &= w.as_array() == [0.0; 4];
    }

    let mut max_rot: f64 = 0.0;
    for _ in 0..10_000 {
        let w = WrenchCommand::world(
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        );
        let yaw = rng.random_range(-4.0 * PI..4.0 * PI);
        let b = world_to_body(&w, yaw);
        let back = body_to_world(&b, yaw);
        let round = (0..4)
            .map(|i| (back.as_array()[i] - w.as_array()[i]).abs())
            .fold(0.0, f64::max);
        max_rot = max_rot.max((b.norm() - w.norm()).abs()).max(round);
    }
    verdict(
        windup_ok && deadband_ok && max_rot < 1e-12,
        format!("integral clamp held {windup_ok}, deadband exact zero {deadband_ok}, rotation error {max_rot:.3e}"),
    )
}

fn allocation_consistency() -> Verdict {
    let layout = ScenarioConfig::default().thruster_layout().expect("default layout");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_rel: f64 = 0.0;
    for _ in 0..10_000 {
        let f: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let unscaled = layout.pseudo_inverse() * nalgebra::Vector4::from(f);
        // Scale into the thrust envelope so the clamp never binds.
        let scale = rng.random_range(0.01..1.0) * layout.thrust_limits()[0][1] / unscaled.amax();
        let f = WrenchCommand::body(f[0] * scale, f[1] * scale, f[2] * scale, f[3] * scale);
        let u = allocate_thrusters(&layout, &f).expect("body wrench");
        let back = layout.wrench_from(&u);
        let diff = (0..4)
            .map(|i| (back.as_array()[i] - f.as_array()[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        max_rel = max_rel.max(diff / f.norm());
    }
    let heave = allocate_thrusters(&layout, &WrenchCommand::body(0.0, 0.0, 8.0, 0.0)).expect("body wrench");
    let exact = heave[..4].iter().all(|u| *u == 2.0);
    verdict(
        max_rel < 1e-9 && exact,
        format!(
            "max relative residual {max_rel:.3e}, heave 8 N -> vertical thrusts {:?}",
            &heave[..4]
        ),
    )
}

fn ins_drift_law() -> Verdict {
    let cfg = ScenarioConfig {
        start: Pose4::new(0.0, 0.0, 6000.0, 0.0),
        ..ScenarioConfig::default()
    };
    let env = cfg.environment.clone();
    let mut sensors = SensorSuite::new(SensorSuiteConfig {
        dvl_velocity_bias: [0.01, 0.0, 0.0],
        ..cfg.sensors.ideal()
    });
    let mut controller = PositionController::new(cfg.pid.clone(), cfg.thruster_layout().expect("layout"));
    let setpoint = cfg.start;
    let mut truth = VehicleState::at_rest(cfg.start);
    let mut ins = InsEstimate::from_truth(&truth);
    let mut wrench = WrenchCommand::zero(Frame::Body);
    let (physics_dt, control_dt) = (0.01, 0.1);
    let mut down_err: f64 = 0.0;
    for k in 0..60_000u64 {
        truth.time = k as f64 * physics_dt;
        if k % 10 == 0 {
            let frame = sensors.sample_all(&truth, &env);
            if k > 0 {
                ins = ins_update(&ins, &frame, &env, control_dt).expect("fresh frame");
            }
            down_err = down_err.max((ins.position.z - truth.position.z).abs());
            wrench = controller
                .update(&setpoint, &ins.pose(), control_dt)
                .expect("allocation")
                .applied;
        }
        truth = step_vehicle(&truth, &cfg.vehicle, &env, &wrench, physics_dt).expect("finite step");
    }
    truth.time = 600.0;
    let frame = sensors.sample_all(&truth, &env);
    ins = ins_update(&ins, &frame, &env, control_dt).expect("fresh frame");
    let north_err = ins.position.x - truth.position.x;
    down_err = down_err.max((ins.position.z - truth.position.z).abs());
    // Zero pressure noise leaves only floating-point rounding at 6000 m.
    verdict(
        (north_err - 6.0).abs() <= 0.01 && down_err < 1e-9,
        format!("north error {north_err:.6} m (oracle 6.0), max |down error| {down_err:.3e} m"),
    )
}

struct EndToEnd {
    summary: RunSummary,
    dir: tempfile::TempDir,
    rerun_identical: Result<(), String>,
}

fn end_to_end_runs() -> Result<EndToEnd, String> {
    let cfg = load_scenario_file(&scenario_dir()).map_err(|e| e.to_string())?;
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    let summary = run_to_dir(&cfg, first.path()).map_err(|e| e.to_string())?;
    run_to_dir(&cfg, second.path()).map_err(|e| e.to_string())?;
    let mut rerun_identical = Ok(());
    let mut names: Vec<String> = LogKind::ALL.iter().map(|k| k.file_name()).collect();
    names.push("records.jsonl".into());
    names.push("run_meta.json".into());
    for name in names {
        let a = std::fs::read(first.path().join(&name)).map_err(|e| format!("{name}: {e}"))?;
        let b = std::fs::read(second.path().join(&name)).map_err(|e| format!("{name}: {e}"))?;
        if a != b {
            rerun_identical = Err(name);
            break;
        }
    }
    Ok(EndToEnd {
        summary,
        dir: first,
        rerun_identical,
    })
}

fn depth_capture(run: &EndToEnd) -> Verdict {
    let target = 6000.0;
    let load = |kind: LogKind| read_csv(&run.dir.path().join(kind.file_name()));
    let (Ok(phases), Ok(truth)) = (load(LogKind::Phase), load(LogKind::Truth)) else {
        return verdict(false, "cannot read logs".into());
    };
    let when = |to: &str| {
        phases
            .rows
            .iter()
            .find(|r| r[2] == to)
            .map(|r| r[0].parse::<f64>().unwrap())
    };
    let Some(survey_start) = when("survey") else {
        return verdict(false, "survey never started".into());
    };
    let survey_end = phases
        .rows
        .iter()
        .find(|r| r[1] == "survey" && r[2] != "survey")
        .map_or(f64::INFINITY, |r| r[0].parse().unwrap());
    let rows = truth.numeric().expect("numeric truth log");
    let down = truth.column("down").expect("down column");
    let held: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] >= survey_start && r[0] <= survey_end)
        .map(|r| (r[down] - target).abs())
        .collect();
    let worst = held.iter().copied().fold(0.0, f64::max);
    verdict(
        !held.is_empty() && worst <= 0.5,
        format!(
            "captured at t={survey_start:.1} s, max |depth - 6000| {worst:.3} m over {} samples to t={survey_end:.1} s",
            held.len()
        ),
    )
}

fn end_to_end(run: &EndToEnd, grasp_gap: f64) -> Verdict {
    let s = &run.summary;
    let waypoints = read_csv(&run.dir.path().join(LogKind::Waypoint.file_name()))
        .map(|t| t.rows.len())
        .unwrap_or(0);
    let gap_ok = s.attach_gap.is_some_and(|g| g <= grasp_gap);
    let fast = s.wall_time <= s.sim_time / 20.0;
    let pass = s.outcome == Outcome::Done
        && s.waypoints_captured == s.waypoints_total
        && waypoints == s.waypoints_total
        && gap_ok
        && s.dropoff_distance < 0.5
        && run.rerun_identical.is_ok()
        && fast;
    let determinism = match &run.rerun_identical {
        Ok(()) => "identical".to_string(),
        Err(name) => format!("{name} differs"),
    };
    verdict(
        pass,
        format!(
            "outcome {:?}, waypoints {}/{}, attach gap {:?} m, dropoff distance {:.3} m, rerun {determinism}, wall {:.2} s for {:.0} s simulated",
            s.outcome, s.waypoints_captured, s.waypoints_total, s.attach_gap, s.dropoff_distance, s.wall_time, s.sim_time
        ),
    )
}

fn all_phases() -> Vec<MissionPhase> {
    let mut phases: Vec<MissionPhase> = PhaseKind::ALL.iter().map(|k| MissionPhase::from_kind(*k)).collect();
    phases.push(MissionPhase::Done);
    for kind in PhaseKind::ALL {
        phases.push(MissionPhase::Abort(AbortReason::Timeout { phase: kind }));
    }
    phases.push(MissionPhase::Abort(AbortReason::GraspFailed { attempts: 3 }));
    phases.push(MissionPhase::Abort(AbortReason::ArmUnreachable { repositions: 5 }));
    phases.push(MissionPhase::Abort(AbortReason::NonFiniteState));
    phases
}

fn state_machine_walk() -> Verdict {
    let mut pairs = 0;
    let mut undeclared = Vec::new();
    for max in 0..4u32 {
        for attempts in 0..=max + 2 {
            let budget = RetryBudget {
                grasp_attempts: attempts,
                max_grasp_retries: max,
                repositions: 0,
            };
            for phase in all_phases() {
                for event in MissionEvent::ALL {
                    pairs += 1;
                    match transition(phase, event, &budget) {
                        Ok(next) if is_declared_edge(&phase, &next) => {}
                        Ok(next) => undeclared.push(format!("{phase} --{event:?}--> {next}")),
                        Err(e) if e.from == phase && e.event == event => {}
                        Err(_) => undeclared.push(format!("{phase} --{event:?}--> malformed error")),
                    }
                }
            }
        }
    }

    // Reject every grasp until the mission gives up.
    let mut worst_excess = 0i64;
    for max in 0..6u32 {
        let mut phase = MissionPhase::StabilizeHover;
        let mut budget = RetryBudget {
            grasp_attempts: 0,
            max_grasp_retries: max,
            repositions: 0,
        };
        for _ in 0..100 {
            let event = match phase {
                MissionPhase::StabilizeHover => MissionEvent::HoverStable,
                MissionPhase::ArmDeploy => MissionEvent::PreGraspReached,
                MissionPhase::Grasp => MissionEvent::AttachRejected,
                _ => break,
            };
            let next = transition(phase, event, &budget).expect("declared edge");
            if next == MissionPhase::Grasp {
                budget.grasp_attempts += 1;
            }
            phase = next;
        }
        let ok = phase
            == MissionPhase::Abort(AbortReason::GraspFailed {
                attempts: budget.grasp_attempts,
            });
        if !ok {
            undeclared.push(format!("max {max}: ended in {phase}"));
        }
        worst_excess = worst_excess.max(budget.grasp_attempts as i64 - (max as i64 + 1));
    }
    verdict(
        undeclared.is_empty() && worst_excess <= 0,
        format!(
            "{pairs} pairs checked, {} undeclared, attempts beyond max+1: {worst_excess}",
            undeclared.len()
        ),
    )
}

fn coverage_property() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut samples = 0;
    let corners = [
        StartCorner::SouthWest,
        StartCorner::SouthEast,
        StartCorner::NorthWest,
        StartCorner::NorthEast,
    ];
    for i in 0..1000 {
        let north_min = rng.random_range(-500.0..500.0);
        let east_min = rng.random_range(-500.0..500.0);
        let bounds = SurveyBounds {
            north_min,
            north_max: north_min + rng.random_range(0.5..200.0),
            east_min,
            east_max: east_min + rng.random_range(0.5..200.0),
        };
        let spacing = rng.random_range(0.2..30.0);
        let plan = match plan_lawnmower(&bounds, spacing, 100.0, corners[i % 4]) {
            Ok(p) => p,
            Err(e) => return verdict(false, format!("rectangle {i}: {e}")),
        };
        for _ in 0..200 {
            let n = rng.random_range(bounds.north_min..=bounds.north_max);
            let e = rng.random_range(bounds.east_min..=bounds.east_max);
            worst = worst.max(plan.distance_to_nearest_lane(n, e) - spacing / 2.0);
            samples += 1;
        }
    }
    verdict(
        worst <= 1e-9,
        format!("{samples} samples, worst (distance - spacing/2) {worst:.3e} m"),
    )
}

fn main() {
    let mut results: Vec<(&str, Verdict)> = vec![
        ("ik_fk_round_trip", ik_fk_round_trip()),
        ("feedforward_tracking", feedforward_tracking()),
        ("pid_contract", pid_contract()),
        ("allocation_consistency", allocation_consistency()),
        ("ins_drift_law", ins_drift_law()),
    ];
    let grasp_gap = load_scenario_file(&scenario_dir()).map_or(0.0, |c| c.mission.grasp_gap);
    match end_to_end_runs() {
        Ok(run) => {
            results.push(("depth_capture", depth_capture(&run)));
            results.push(("end_to_end_mission", end_to_end(&run, grasp_gap)));
        }
        Err(e) => {
            results.push(("depth_capture", verdict(false, format!("run failed: {e}"))));
            results.push(("end_to_end_mission", verdict(false, format!("run failed: {e}"))));
        }
    }
    results.push(("state_machine_walk", state_machine_walk()));
    results.push(("coverage_property", coverage_property()));

    let mut failed = 0;
    for (name, v) in &results {
        println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
