//! Dead-reckoning drift from a DVL surge bias. A vehicle holding still at
//! depth sees its INS walk north at exactly the bias rate; pressure keeps the
//! depth channel bounded.

use hadal_sim::dynamics::{Environment, VehicleState};
use hadal_sim::geometry::Pose4;
use hadal_sim::sensing::{ins_update, InsEstimate, SensorSuite, SensorSuiteConfig};

/// Returns the North error after 600 s [m].
pub fn run() -> f64 {
    let env = Environment::default();
    let bias = 0.01;
    let mut sensors = SensorSuite::new(SensorSuiteConfig {
        dvl_velocity_bias: [bias, 0.0, 0.0],
        pressure_noise_std: 50.0,
        rng_seed: 7,
        ..SensorSuiteConfig::default()
    });
    let mut truth = VehicleState::at_rest(Pose4::new(0.0, 0.0, 6000.0, 0.0));
    let mut ins = InsEstimate::from_truth(&truth);
    let dt = 0.1;

    println!("{:>5} {:>10} {:>10} {:>10}", "t_s", "north_m", "b*t_m", "down_m");
    for k in 1..=6000 {
        truth.time = k as f64 * dt;
        let frame = sensors.sample_all(&truth, &env);
        ins = ins_update(&ins, &frame, &env, dt).unwrap();
        if k % 600 == 0 {
            println!(
                "{:>5.0} {:>10.4} {:>10.4} {:>10.4}",
                truth.time,
                ins.position.x - truth.position.x,
                bias * truth.time,
                ins.position.z - truth.position.z
            );
        }
    }
    ins.position.x - truth.position.x
}

#[allow(dead_code)]
fn main() {
    run();
}
