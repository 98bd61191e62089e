//! Sample the operator inequalities behind local well-posedness.
//!
//! The evolution is quasilinear: u_t + A(u) u = 0 with the frozen-velocity
//! operator A(u) w = (a+b) u w_x + b (1 - L d_xx)^{-1} [L d_xx, u] w_x. The
//! well-posedness machinery rests on a commutator estimate, an accretivity
//! pairing, Lipschitz dependence of A on u, a similarity bound for
//! B(u) = Gamma A(u) Gamma^{-1} - A(u), and the exact isometry of Gamma
//! between weighted norms. Each suite samples its ratio on random
//! band-limited fields at two resolutions; band-limited sampling makes the
//! arithmetic exact, so a sound inequality shows a stability factor of 1.
//!
//! Degenerate inputs are structural zeros, not small numbers: a multiplier
//! commuted past a constant cancels coefficient by coefficient.
//!
//! Run with: cargo run --release --example kato_verification

use gch::model::ModelParams;
use gch::spectral::{Grid, Spectrum};
use gch::verify::*;
use num_complex::Complex64;

fn main() -> gch::Result<()> {
    let grid = Grid::new(128, 2.0 * std::f64::consts::PI)?;
    let params = ModelParams::camassa_holm();
    let spec = SampleSpec::new(40, 16, 2.0, 2024);
    let s = 4.0 + params.operator.order();

    println!("classical CH, {} samples at band {}, norm index s = {s}", spec.count, spec.band);
    println!();
    println!("{:<24} {:>12} {:>12} {:>10}  {}", "suite", "max ratio", "doubled", "stability", "verdict");
    let reports = [
        commutator_suite(&grid, &spec, 1.0, 1.0, 2.0)?,
        accretivity_suite(&grid, &spec, &params, s)?,
        lipschitz_suite(&grid, &spec, &params, s)?,
        b_bound_suite(&grid, &spec, &params, s)?,
        isometry_suite(&grid, &spec, &params.operator, s)?,
        frozen_growth_suite(&grid, &spec, &params, 0.1, 1e-3)?,
    ];
    for report in &reports {
        println!(
            "{:<24} {:>12.4e} {:>12.4e} {:>10.6}  {}",
            report.name,
            report.max_ratio,
            report.max_ratio_doubled,
            report.stability_factor,
            if report.passed { "PASS" } else { "FAIL" }
        );
    }

    // The accretivity suite also reports the single kappa with every
    // pairing ratio bounded by kappa * ||u||_s.
    println!();
    println!("accretivity constant kappa = {:.6e}", reports[1].constant.unwrap());

    // Structural zeros for degenerate inputs.
    println!();
    let w = spec.realize(&grid, 0, SampleRole::State)?;
    let mut constant = Spectrum::zeros(&grid, 0.0);
    constant.set_pair(0, Complex64::new(1.7, 0.0));
    let ratio = commutator_estimate_ratio(&grid, &constant, &w, 1.0, 1.0, 2.0)?;
    println!("commutator ratio with constant f: {ratio:e} (exact zero)");

    let u = spec.realize(&grid, 0, SampleRole::Velocity)?;
    match lipschitz_ratio(&grid, &u, &u, &w, &params, s) {
        Err(e) => println!("lipschitz ratio with u = v: {e}"),
        Ok(r) => println!("lipschitz ratio with u = v: {r} (unexpected)"),
    }

    let pairing = accretivity_pairing(&grid, &constant, &w, &params)?;
    println!("L2 pairing with frozen constant velocity: {pairing:e}");
    Ok(())
}
