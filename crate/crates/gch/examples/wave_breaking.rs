//! Detect wave breaking: the slope monitor stops a steepening run.
//!
//! Solutions of the family stay bounded while their slope blows up in finite
//! time (wave breaking), so the integrator watches min u_x and stops once it
//! drops below -slope_threshold. This run starts from a tall cosine under
//! classical CH, tracks the steepening front, and stops mid-run with the
//! dedicated stop reason; the final state is still finite and usable.
//!
//! Run with: cargo run --release --example wave_breaking

use gch::model::ModelParams;
use gch::spectral::{Field, Grid};
use gch::timestep::{integrate, MonitorConfig, StepMethod, StepperConfig, StopReason};

fn main() -> gch::Result<()> {
    let grid = Grid::new(256, 2.0 * std::f64::consts::PI)?;
    let params = ModelParams::camassa_holm();
    let u0 = Field::from_fn(&grid, 0.0, |x| 2.0 * x.cos());

    let stepper = StepperConfig {
        method: StepMethod::Rk4Doubling,
        dt: 1e-3,
        t_end: 5.0,
        tolerance: 1e-9,
        ..Default::default()
    };
    let monitor = MonitorConfig {
        slope_threshold: 12.0,
        check_stride: 20,
        ..Default::default()
    };

    println!("u0 = 2 cos x, classical CH, adaptive RK4, slope threshold {}", monitor.slope_threshold);
    println!();
    println!("{:>8}  {:>12}  {:>10}", "t", "min u_x", "max |u|");

    let result = integrate(&grid, &u0, &params, &stepper, &monitor, None)?;
    for record in result.trail.iter().step_by(4) {
        println!("{:>8.3}  {:>12.4}  {:>10.5}", record.time, record.min_slope, record.max_abs_u);
    }
    let last = result.trail.last().unwrap();
    if *result.trail.last().map(|r| &r.time).unwrap() != result.stop_time {
        println!("{:>8.3}  {:>12.4}  {:>10.5}", last.time, last.min_slope, last.max_abs_u);
    }

    println!();
    match result.stop_reason {
        StopReason::WaveBreakingDetected => {
            println!(
                "wave breaking detected at t = {:.4} after {} steps:",
                result.stop_time, result.steps_taken
            );
            println!(
                "the slope reached {:.2} while max |u| stayed at {:.4} - the hallmark",
                last.min_slope,
                result.final_state.max_abs()
            );
            println!("of breaking: bounded waves, unbounded steepness.");
        }
        other => println!("run ended with {other} at t = {:.4}", result.stop_time),
    }
    Ok(())
}
