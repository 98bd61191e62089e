//! Manufactured-solution order study for the RK4 stepper.
//!
//! The exact solution u*(x, t) = 0.5 cos(x - t) is forced into the equation:
//! F = u*_t - rhs(u*), evaluated spectrally at every stage time, makes u*
//! solve the forced system exactly. Halving dt should divide the endpoint
//! error by 16, and the observed slope of log error against log dt is the
//! temporal order.
//!
//! Run with: cargo run --example temporal_convergence

use gch::config::RunConfig;
use gch::harness::converge_study;

fn main() -> gch::Result<()> {
    let config = RunConfig::from_json(
        r#"{
            "grid": {"n": 128},
            "converge": {
                "amplitude": 0.5,
                "speed": 1.0,
                "dts": [8e-3, 4e-3, 2e-3, 1e-3],
                "t_end": 0.5
            }
        }"#,
        "inline",
    )?;

    let study = converge_study(&config)?;

    println!("forced traveling wave u* = 0.5 cos(x - t), classical CH, n = 128");
    println!();
    println!("{:>10}  {:>14}  {:>8}", "dt", "max error", "ratio");
    let mut previous: Option<f64> = None;
    for point in &study.points {
        match previous {
            Some(p) => println!("{:>10.1e}  {:>14.6e}  {:>8.2}", point.dt, point.error, p / point.error),
            None => println!("{:>10.1e}  {:>14.6e}  {:>8}", point.dt, point.error, "-"),
        }
        previous = Some(point.error);
    }
    println!();
    println!("observed temporal order: {:.3} (RK4 target: 4)", study.observed_order);
    println!("spatial error floor at the smallest step: {:.3e}", study.floor);
    println!("study passed: {}", study.passed);
    Ok(())
}
