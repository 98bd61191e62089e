//! Tour of the dispersion operators L and the norms they induce.
//!
//! Each operator is a Fourier multiplier l(k) >= 0 of some order p; the
//! momentum map is multiplication by 1 + k^2 l(k) and the smoothing family
//! Gamma^sigma is its power sigma / (p + 2). The preset catalog covers the
//! classical equation (l = 1), a weakly smoothed variant (l = 0.25), two
//! fourth-order cases, and a fractional one.
//!
//! Run with: cargo run --example operator_presets

use gch::harness::preset_catalog;
use gch::model::{inverse_helmholtz, momentum};
use gch::operator::OperatorL;
use gch::spectral::{Field, Grid};

fn main() -> gch::Result<()> {
    let grid = Grid::new(64, 2.0 * std::f64::consts::PI)?;

    println!("symbol l(k) per preset:");
    println!("{:>12}  {:>9}  {:>9} {:>9} {:>9} {:>10}", "preset", "order p", "l(1)", "l(2)", "l(4)", "l(8)");
    for preset in preset_catalog() {
        let op = &preset.operator;
        println!(
            "{:>12}  {:>9}  {:>9.3} {:>9.3} {:>9.3} {:>10.3}",
            preset.name,
            op.order(),
            op.symbol(1.0),
            op.symbol(2.0),
            op.symbol(4.0),
            op.symbol(8.0),
        );
    }

    // The parse grammar accepts preset names and explicit coefficient lists.
    println!();
    println!("parse grammar:");
    for text in ["identity", "alpha2:0.5", "helmholtz", "poly:1,0,2", "bessel:2.5,0.7"] {
        let op = OperatorL::parse(text)?;
        println!("  {:<14} -> {:<16} order {}", text, op.describe(), op.order());
    }

    // Momentum and its inverse are exact mutual inverses on the grid.
    println!();
    let u = Field::from_fn(&grid, 0.0, |x| x.cos() + 0.3 * (3.0 * x).sin());
    for preset in preset_catalog() {
        let m = momentum(&grid, &u, &preset.operator)?;
        let back = inverse_helmholtz(&grid, &m, &preset.operator)?;
        let round_trip = u
            .values
            .iter()
            .zip(&back.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!(
            "{:>12}: max |m| = {:>10.4}, momentum round trip error {:.2e}",
            preset.name,
            m.max_abs(),
            round_trip
        );
    }
    Ok(())
}
