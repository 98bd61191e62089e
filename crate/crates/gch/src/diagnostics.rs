//! Conserved-quantity tracking and the CSV / JSON output formats.
//!
//! Along the flow, d/dt int m = (b - a) int m u_x and the pairing int m u_x
//! vanishes identically for real periodic fields with even symbols, so both
//! int u and int m are conserved for every (a, b). The energy E = int u m
//! obeys dE/dt = (4b - 2a) int u u_x m and is conserved exactly when a = 2b.
//! `conserved_quantities` evaluates all of these plus the monitor inputs.

use serde::Serialize;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{momentum, ModelParams};
use crate::operator::{sobolev_norm, NormFamily};
use crate::spectral::{Field, Grid};

pub const TIMESERIES_HEADER: &str = "t,mean_u,mean_m,energy,norm_h1g,min_slope,max_abs_u";
pub const SNAPSHOT_HEADER: &str = "x,u";

/// One row of the diagnostics trail. `mean_u` and `mean_m` are the integrals
/// int u dx and int m dx (the names follow the timeseries columns), `energy`
/// is int u m dx, and `norm_h1g` is the order-1 norm in the dispersion-
/// weighted family, the quantity the norm-cap monitor watches.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub mean_u: f64,
    pub mean_m: f64,
    pub energy: f64,
    pub norm_h1g: f64,
    pub min_slope: f64,
    pub max_abs_u: f64,
}

impl DiagnosticsRecord {
    pub fn is_finite(&self) -> bool {
        [
            self.time,
            self.mean_u,
            self.mean_m,
            self.energy,
            self.norm_h1g,
            self.min_slope,
            self.max_abs_u,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Evaluate the conserved quantities and monitor inputs for a velocity field.
pub fn conserved_quantities(grid: &Grid, u: &Field, params: &ModelParams) -> Result<DiagnosticsRecord> {
    let m = momentum(grid, u, &params.operator)?;
    let ux = grid.derivative(u, 1)?;
    let record = DiagnosticsRecord {
        time: u.time,
        mean_u: grid.quadrature(u)?,
        mean_m: grid.quadrature(&m)?,
        energy: grid.quadrature_inner(u, &m)?,
        norm_h1g: sobolev_norm(grid, u, 1.0, NormFamily::GammaWeighted(&params.operator))?,
        min_slope: ux.values.iter().cloned().fold(f64::INFINITY, f64::min),
        max_abs_u: u.max_abs(),
    };
    if record.is_finite() {
        Ok(record)
    } else {
        Err(Error::NonFinite("diagnostics record"))
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write the diagnostics trail as CSV with full double precision
/// (17 significant digits round-trip exactly).
pub fn write_timeseries(path: &Path, trail: &[DiagnosticsRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut emit = |line: String| -> Result<()> {
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))
    };
    emit(TIMESERIES_HEADER.to_string())?;
    for r in trail {
        emit(format!(
            "{},{},{},{},{},{},{}",
            fmt17(r.time),
            fmt17(r.mean_u),
            fmt17(r.mean_m),
            fmt17(r.energy),
            fmt17(r.norm_h1g),
            fmt17(r.min_slope),
            fmt17(r.max_abs_u),
        ))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Write a field snapshot as `x,u` rows over the grid nodes.
pub fn write_snapshot(path: &Path, grid: &Grid, u: &Field) -> Result<()> {
    if u.len() != grid.len() {
        return Err(Error::GridMismatch {
            expected: grid.len(),
            found: u.len(),
        });
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{SNAPSHOT_HEADER}").map_err(|e| Error::io(path, e))?;
    for (x, v) in grid.nodes().iter().zip(&u.values) {
        writeln!(w, "{},{}", fmt17(*x), fmt17(*v)).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read back a snapshot written by [`write_snapshot`]: (nodes, values).
pub fn read_snapshot(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if idx == 0 {
            if line.trim() != SNAPSHOT_HEADER {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: 1,
                    message: format!("expected header `{SNAPSHOT_HEADER}`, got `{line}`"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = |name: &str| -> Result<f64> {
            parts
                .next()
                .ok_or(())
                .and_then(|s| s.trim().parse::<f64>().map_err(|_| ()))
                .map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("missing or malformed {name}"),
                })
        };
        xs.push(next("x")?);
        us.push(next("u")?);
    }
    Ok((xs, us))
}

/// Serialize any report as pretty JSON; used for the verification suites.
pub fn write_report_json<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    writeln!(w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn grid64() -> Grid {
        Grid::new(64, 2.0 * PI).unwrap()
    }

    #[test]
    fn quantities_of_simple_fields() {
        let g = grid64();
        let params = ModelParams::camassa_holm();

        let zero = Field::zeros(&g);
        let r = conserved_quantities(&g, &zero, &params).unwrap();
        assert_eq!(r.mean_u, 0.0);
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.max_abs_u, 0.0);
        assert_eq!(r.min_slope, 0.0);

        let one = Field::constant(&g, 1.0, 0.0);
        let r = conserved_quantities(&g, &one, &params).unwrap();
        assert_abs_diff_eq!(r.mean_u, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(r.mean_m, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(r.energy, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(r.norm_h1g, (2.0 * PI).sqrt(), epsilon = 1e-12);

        let u = Field::from_fn(&g, 0.25, f64::cos);
        let r = conserved_quantities(&g, &u, &params).unwrap();
        assert_eq!(r.time, 0.25);
        assert!(r.mean_u.abs() < 1e-13);
        assert!(r.mean_m.abs() < 1e-13);
        assert_abs_diff_eq!(r.energy, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(r.norm_h1g, (2.0 * PI).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.min_slope, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.max_abs_u, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_matches_spectral_evaluation() {
        let g = grid64();
        let params = ModelParams::new(2.0, 1.0, crate::operator::OperatorL::helmholtz()).unwrap();
        let u = Field::from_fn(&g, 0.0, |x| 0.4 + x.cos() - 0.2 * (3.0 * x).sin());
        let r = conserved_quantities(&g, &u, &params).unwrap();

        let hat = g.to_spectrum(&u).unwrap();
        let mean_spectral = 2.0 * PI * hat.coeff(0).re;
        assert_abs_diff_eq!(r.mean_u, mean_spectral, epsilon = 1e-12 * mean_spectral.abs());

        let energy_spectral = g
            .weighted_norm(&u, |k| params.operator.momentum_symbol(k))
            .unwrap()
            .powi(2);
        assert_abs_diff_eq!(
            r.energy,
            energy_spectral,
            epsilon = 1e-12 * energy_spectral.abs()
        );
    }

    #[test]
    fn timeseries_format_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ts.csv");
        write_timeseries(&path, &[]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, format!("{TIMESERIES_HEADER}\n"));

        let rec = DiagnosticsRecord {
            time: PI,
            mean_u: 0.0,
            mean_m: -1.5,
            energy: 2.0 * PI,
            norm_h1g: 1.0 / 3.0,
            min_slope: -1.0,
            max_abs_u: 1.0,
        };
        write_timeseries(&path, &[rec.clone()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let row = text.lines().nth(1).unwrap();
        let cols: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(cols[0], PI);
        assert_eq!(cols[3], 2.0 * PI);
        assert_eq!(cols[4], 1.0 / 3.0);
    }

    #[test]
    fn snapshot_round_trip_is_exact() {
        let g = grid64();
        let u = Field::from_fn(&g, 0.0, |x| x.cos() + 0.1 * (5.0 * x).sin());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        write_snapshot(&path, &g, &u).unwrap();
        let (xs, us) = read_snapshot(&path).unwrap();
        assert_eq!(xs.len(), g.len());
        for (a, b) in xs.iter().zip(g.nodes()) {
            assert_eq!(a, b);
        }
        for (a, b) in us.iter().zip(&u.values) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn snapshot_reader_rejects_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("other.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(matches!(
            read_snapshot(&path).unwrap_err(),
            Error::Parse { .. }
        ));
    }
}
