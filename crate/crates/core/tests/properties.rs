use std::f64::consts::PI;

use hadal_sim::control::{
    allocate_thrusters, body_to_world, pid_step, world_to_body, PidGains, PidState, ThrusterLayout, WrenchCommand,
};
use hadal_sim::dynamics::{
    attach_object, carry_object, net_buoyancy_force, step_vehicle, Environment, FreeObject, VehicleParams, VehicleState,
};
use hadal_sim::geometry::{wrap_angle, Pose4};
use hadal_sim::manipulator::{end_effector_pose, forward_kinematics, inverse_kinematics, ArmGeometry, QuinticMove};
use hadal_sim::mission::{plan_lawnmower, StartCorner, SurveyBounds};
use hadal_sim::sensing::{ins_update, InsEstimate, SensorSuite, SensorSuiteConfig};
use nalgebra::Vector3;
use proptest::prelude::*;

fn layout() -> ThrusterLayout {
    ThrusterLayout::symmetric_default(0.6, 0.4, 150.0).unwrap()
}

fn arr4(range: std::ops::Range<f64>) -> impl Strategy<Value = [f64; 4]> {
    [range.clone(), range.clone(), range.clone(), range]
}

fn neutral() -> (VehicleParams, Environment) {
    let env = Environment {
        density_gradient: 0.0,
        ..Environment::default()
    };
    let params = VehicleParams {
        hull_bulk_modulus: f64::INFINITY,
        mass: env.water_density_surface * 0.5,
        hull_volume_surface: 0.5,
        ..VehicleParams::default()
    };
    (params, env)
}

fn state_strategy() -> impl Strategy<Value = VehicleState> {
    (
        -100.0..100.0f64,
        -100.0..100.0f64,
        10.0..5000.0f64,
        -PI..PI,
        arr4(-2.0..2.0),
    )
        .prop_map(|(n, e, d, yaw, v)| VehicleState {
            body_velocity: v,
            ..VehicleState::at_rest(Pose4::new(n, e, d, yaw))
        })
}

proptest! {
    #[test]
    fn integral_never_exceeds_limit(
        errors in prop::collection::vec((arr4(-100.0..100.0), 1e-3..1.0f64), 1..200),
    ) {
        let gains = PidGains::default();
        let mut state = PidState::default();
        for (e, dt) in errors {
            state = pid_step(&gains, &state, e, dt).1;
            for i in 0..4 {
                prop_assert!(state.integral[i].abs() <= gains.integral_limit[i]);
            }
        }
    }

    #[test]
    fn errors_inside_deadband_give_zero_wrench(
        fractions in arr4(-0.999..0.999),
        integral in arr4(-1.0..1.0),
        previous in arr4(-1.0..1.0),
    ) {
        let gains = PidGains::default();
        let state = PidState { integral, previous_error: previous, initialized: true };
        let error = std::array::from_fn(|i| fractions[i] * gains.deadband[i]);
        let (w, next) = pid_step(&gains, &state, error, 0.1);
        prop_assert_eq!(w.as_array(), [0.0; 4]);
        prop_assert_eq!(next.integral, integral);
    }

    #[test]
    fn rotation_round_trip(w in arr4(-1000.0..1000.0), yaw in -10.0..10.0f64) {
        let world = WrenchCommand::world(w[0], w[1], w[2], w[3]);
        let body = world_to_body(&world, yaw);
        let back = body_to_world(&body, yaw);
        for (b, w) in back.as_array().iter().zip(w) {
            prop_assert!((b - w).abs() < 1e-12 * (1.0 + w.abs()));
        }
        prop_assert!((body.norm() - world.norm()).abs() <= 1e-12 * (1.0 + world.norm()));
    }

    #[test]
    fn feasible_wrench_is_reproduced(u in prop::array::uniform8(-150.0..150.0f64)) {
        let layout = layout();
        let f = layout.wrench_from(&u);
        prop_assume!(f.norm() > 1e-6);
        // Feasible: the unclamped minimum-norm allocation is within the limits.
        let raw = layout.pseudo_inverse() * nalgebra::Vector4::from(f.as_array());
        prop_assume!(raw.amax() <= 150.0);
        let alloc = allocate_thrusters(&layout, &f).unwrap();
        let back = layout.wrench_from(&alloc);
        let residual: f64 = (0..4).map(|i| (back.as_array()[i] - f.as_array()[i]).powi(2)).sum::<f64>().sqrt();
        prop_assert!(residual / f.norm() < 1e-9);
    }

    #[test]
    fn ik_fk_round_trip(q1 in -PI..PI, q2 in -1.2..2.8f64, q3 in -3.1..-0.01f64) {
        let geom = ArmGeometry::default();
        let target = forward_kinematics(&geom, &[q1, q2, q3]);
        let q = inverse_kinematics(&geom, &target).unwrap();
        prop_assert!((-PI..=0.0).contains(&q[2]));
        prop_assert!((forward_kinematics(&geom, &q) - target).norm() < 1e-9);
        prop_assert!((q[2] - q3).abs() < 1e-6);
    }

    #[test]
    fn quintic_velocity_matches_finite_difference(
        start in prop::array::uniform3(-2.0..2.0f64),
        goal in prop::array::uniform3(-2.0..2.0f64),
        // Central-difference error is h²/24·|q'''|, below 1e-6 for these moves.
        duration in 3.0..20.0f64,
        frac in 0.01..0.99f64,
    ) {
        let m = QuinticMove::new(start, goal, duration);
        let (t, h) = (frac * duration, 1e-3);
        let (a, b, mid) = (m.sample(t - h / 2.0), m.sample(t + h / 2.0), m.sample(t));
        for j in 0..3 {
            let fd = (b.q_target[j] - a.q_target[j]) / h;
            prop_assert!((fd - mid.q_dot_target[j]).abs() < 1e-6);
        }
    }

    #[test]
    fn lanes_cover_the_rectangle(
        n0 in -100.0..100.0f64,
        e0 in -100.0..100.0f64,
        h in 0.5..80.0f64,
        w in 0.5..80.0f64,
        spacing in 0.2..20.0f64,
        corner in 0usize..4,
        samples in prop::collection::vec((0.0..=1.0f64, 0.0..=1.0f64), 50),
    ) {
        let bounds = SurveyBounds { north_min: n0, north_max: n0 + h, east_min: e0, east_max: e0 + w };
        let start = [StartCorner::SouthWest, StartCorner::SouthEast, StartCorner::NorthWest, StartCorner::NorthEast][corner];
        let plan = plan_lawnmower(&bounds, spacing, 50.0, start).unwrap();
        for wp in &plan.waypoints {
            prop_assert!(bounds.contains(wp.north, wp.east));
        }
        for (a, b) in samples {
            let d = plan.distance_to_nearest_lane(n0 + a * h, e0 + b * w);
            prop_assert!(d <= spacing / 2.0 + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kinetic_energy_does_not_grow_without_thrust(state in state_strategy(), dt in 1e-3..0.1f64) {
        let (params, env) = neutral();
        let zero = WrenchCommand::body(0.0, 0.0, 0.0, 0.0);
        let mut s = state;
        for _ in 0..50 {
            let next = step_vehicle(&s, &params, &env, &zero, dt).unwrap();
            prop_assert!(next.kinetic_energy(&params) <= s.kinetic_energy(&params));
            s = next;
        }
    }

    #[test]
    fn yaw_stays_wrapped(state in state_strategy(), moments in prop::collection::vec(-500.0..500.0f64, 1..100)) {
        let (params, env) = (VehicleParams::default(), Environment::default());
        let mut s = state;
        for m in moments {
            s = step_vehicle(&s, &params, &env, &WrenchCommand::body(0.0, 0.0, 0.0, m), 0.1).unwrap();
            prop_assert!(s.yaw > -PI && s.yaw <= PI);
        }
    }

    #[test]
    fn dynamics_are_deterministic(state in state_strategy(), wrenches in prop::collection::vec(arr4(-300.0..300.0), 1..50)) {
        let (params, env) = (VehicleParams::default(), Environment::default());
        let run = || {
            let mut s = state;
            let mut out = Vec::new();
            for w in &wrenches {
                s = step_vehicle(&s, &params, &env, &WrenchCommand::body(w[0], w[1], w[2], w[3]), 0.01).unwrap();
                out.push(s);
            }
            out
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn incompressible_buoyancy_is_depth_independent(depths in prop::collection::vec(0.0..6000.0f64, 2..20)) {
        let params = VehicleParams { hull_bulk_modulus: f64::INFINITY, ..VehicleParams::default() };
        let env = Environment { density_gradient: 0.0, ..Environment::default() };
        let surface = net_buoyancy_force(&params, &env, 0.0);
        for d in depths {
            prop_assert_eq!(net_buoyancy_force(&params, &env, d), surface);
        }
    }

    #[test]
    fn attached_object_moves_rigidly(
        q in (-PI..PI, -1.2..2.8f64, -3.0..-0.1f64),
        poses in prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64, 0.0..6000.0f64, -PI..PI), 1..100),
    ) {
        let geom = ArmGeometry::default();
        let q = [q.0, q.1, q.2];
        let ee0 = end_effector_pose(&geom, &q, &Pose4::new(0.0, 0.0, 100.0, 0.0));
        let object = attach_object(&FreeObject::resting_at(ee0.position + Vector3::new(0.01, 0.0, 0.02)), &ee0, 0.08).unwrap();
        let offset0 = object.relative_to(&ee0);
        let mut obj = object;
        for (n, e, d, yaw) in poses {
            let ee = end_effector_pose(&geom, &q, &Pose4::new(n, e, d, yaw));
            obj = carry_object(&obj, &ee);
            prop_assert!((obj.relative_to(&ee) - offset0).norm() < 1e-9);
        }
    }

    #[test]
    fn sensor_stream_is_a_function_of_seed(seed in any::<u64>(), state in state_strategy()) {
        let cfg = SensorSuiteConfig {
            imu_yaw_noise_std: 0.01,
            dvl_velocity_noise_std: 0.01,
            pressure_noise_std: 100.0,
            rng_seed: seed,
            ..SensorSuiteConfig::default()
        };
        let env = Environment::default();
        let frames = || {
            let mut suite = SensorSuite::new(cfg.clone());
            let mut s = state;
            (0..20)
                .map(|k| {
                    s.time = k as f64 * 0.1;
                    s.position.x += 0.01;
                    suite.sample_all(&s, &env)
                })
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(frames(), frames());
    }

    #[test]
    fn drift_grows_strictly_with_any_bias(
        bias in (0.001..0.1f64, -0.1..0.1f64),
        yaw in -PI..PI,
    ) {
        let env = Environment::default();
        let cfg = SensorSuiteConfig { dvl_velocity_bias: [bias.0, bias.1, 0.0], ..SensorSuiteConfig::default() };
        let mut suite = SensorSuite::new(cfg);
        let mut truth = VehicleState::at_rest(Pose4::new(0.0, 0.0, 1000.0, yaw));
        let mut ins = InsEstimate::from_truth(&truth);
        let mut last = 0.0;
        for k in 1..=100 {
            truth.time = k as f64 * 0.1;
            let frame = suite.sample_all(&truth, &env);
            ins = ins_update(&ins, &frame, &env, 0.1).unwrap();
            let err = (ins.position.x - truth.position.x).hypot(ins.position.y - truth.position.y);
            prop_assert!(err > last);
            last = err;
        }
    }

    #[test]
    fn single_axis_bias_stays_on_its_axis(b in 0.001..0.1f64, axis in 0usize..2, steps in 1usize..200) {
        let env = Environment::default();
        let mut bias = [0.0; 3];
        bias[axis] = b;
        let mut suite = SensorSuite::new(SensorSuiteConfig { dvl_velocity_bias: bias, ..SensorSuiteConfig::default() });
        let mut truth = VehicleState::at_rest(Pose4::new(5.0, -3.0, 2000.0, 0.0));
        let mut ins = InsEstimate::from_truth(&truth);
        for k in 1..=steps {
            truth.time = k as f64 * 0.1;
            let frame = suite.sample_all(&truth, &env);
            ins = ins_update(&ins, &frame, &env, 0.1).unwrap();
        }
        let err = [ins.position.x - truth.position.x, ins.position.y - truth.position.y];
        prop_assert_eq!(err[1 - axis], 0.0);
        prop_assert!((err[axis] - b * truth.time).abs() < 1e-9);
    }

    #[test]
    fn zero_defect_ins_tracks_truth(state in state_strategy(), wrenches in prop::collection::vec(arr4(-300.0..300.0), 1..40)) {
        let (params, env) = (VehicleParams::default(), Environment::default());
        let mut suite = SensorSuite::new(SensorSuiteConfig::default());
        let mut truth = state;
        truth.time = 0.0;
        suite.sample_all(&truth, &env);
        let mut ins = InsEstimate::from_truth(&truth);
        for w in wrenches {
            let wrench = WrenchCommand::body(w[0], w[1], w[2], w[3]);
            for _ in 0..10 {
                truth = step_vehicle(&truth, &params, &env, &wrench, 0.01).unwrap();
            }
            let frame = suite.sample_all(&truth, &env);
            ins = ins_update(&ins, &frame, &env, 0.1).unwrap();
            prop_assert!((ins.position - truth.position).norm() < 1e-9);
            prop_assert!(wrap_angle(ins.yaw - truth.yaw).abs() < 1e-12);
        }
    }
}
