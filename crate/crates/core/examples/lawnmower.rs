//! Plan the survey pattern for the default 30 m x 12 m box and check that
//! every point of the box is within half a lane spacing of a lane.

use hadal_sim::mission::{plan_lawnmower, StartCorner, SurveyBounds};

/// Returns the worst distance from a grid point to the nearest lane [m].
pub fn run() -> f64 {
    let bounds = SurveyBounds::default();
    let spacing = 4.0;
    let plan = plan_lawnmower(&bounds, spacing, 6000.0, StartCorner::SouthWest).unwrap();
    println!("{} lanes, {} waypoints", plan.lane_count(), plan.waypoints.len());
    for (i, wp) in plan.waypoints.iter().enumerate() {
        println!("  {i:>2}: N {:>6.1}  E {:>5.1}  yaw {:>5.2}", wp.north, wp.east, wp.yaw);
    }

    let mut worst: f64 = 0.0;
    for i in 0..=60 {
        for j in 0..=24 {
            let north = bounds.north_min + bounds.height() * f64::from(i) / 60.0;
            let east = bounds.east_min + bounds.width() * f64::from(j) / 24.0;
            worst = worst.max(plan.distance_to_nearest_lane(north, east));
        }
    }
    println!(
        "worst grid distance to a lane {worst:.3} m (half spacing {:.1} m)",
        spacing / 2.0
    );
    worst
}

#[allow(dead_code)]
fn main() {
    run();
}
