//! Periodic pseudospectral machinery on a uniform grid over [0, period).
//!
//! Fields are real samples at the nodes x_j = j * period / n. Spectra hold the
//! coefficients of u(x) = sum_k u_hat(k) exp(i k x) over the wavenumbers
//! k_j = (2 pi / period) * j with j in {-n/2+1, ..., n/2}, so a pure cosine of
//! unit amplitude carries 1/2 at +-k. Every operation that returns a real
//! field projects the spectrum back onto Hermitian symmetry first; the
//! unpaired Nyquist mode loses any imaginary residue it picked up, which is
//! the usual convention for odd-order spectral derivatives.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Smallest grid the library accepts; below this the 2/3 dealiasing band is
/// too narrow to hold even a single quadratic interaction.
pub const MIN_GRID: usize = 8;

/// Real field sampled on the nodes of a [`Grid`], tagged with the model time
/// it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn new(values: Vec<f64>, time: f64) -> Self {
        Field { values, time }
    }

    /// Sample a closure of x on the grid nodes.
    pub fn from_fn(grid: &Grid, time: f64, f: impl Fn(f64) -> f64) -> Self {
        Field {
            values: grid.nodes.iter().map(|&x| f(x)).collect(),
            time,
        }
    }

    pub fn constant(grid: &Grid, value: f64, time: f64) -> Self {
        Field {
            values: vec![value; grid.n],
            time,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Field::constant(grid, 0.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Fourier coefficients in FFT storage order (index m holds wavenumber
/// j = m for m <= n/2 and j = m - n above). Kept Hermitian by construction:
/// the only mutators pair +-j, and outputs of grid operations are projected.
#[derive(Debug, Clone)]
pub struct Spectrum {
    coeffs: Vec<Complex64>,
    period: f64,
    pub time: f64,
}

impl Spectrum {
    pub fn zeros(grid: &Grid, time: f64) -> Self {
        Spectrum {
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n],
            period: grid.period,
            time,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Coefficient at signed integer index j (wavenumber k = 2 pi j / period).
    pub fn coeff(&self, j: i64) -> Complex64 {
        let n = self.coeffs.len() as i64;
        assert!(j > -n / 2 && j <= n / 2, "mode {j} outside grid");
        self.coeffs[(j.rem_euclid(n)) as usize]
    }

    /// Set the pair (+j, -j) from the coefficient at +j, preserving realness.
    /// j = 0 and the Nyquist index keep only the real part.
    pub fn set_pair(&mut self, j: i64, value: Complex64) {
        let n = self.coeffs.len() as i64;
        assert!(j >= 0 && j <= n / 2, "mode {j} outside 0..=n/2");
        if j == 0 || j == n / 2 {
            self.coeffs[j as usize] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[j as usize] = value;
            self.coeffs[(n - j) as usize] = value.conj();
        }
    }

    /// Zero every mode with |j| > n/3 (the 2/3 rule: |k| > (2/3) k_max).
    pub fn dealias(&mut self) {
        let n = self.coeffs.len();
        for m in 0..n {
            let j = signed_index(m, n);
            if 3 * j.unsigned_abs() as usize > n {
                self.coeffs[m] = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Coefficient-wise difference with another spectrum of the same shape.
    pub fn difference(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::GridMismatch {
                expected: self.coeffs.len(),
                found: other.coeffs.len(),
            });
        }
        Ok(Spectrum {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            period: self.period,
            time: self.time,
        })
    }

    /// Largest |j| carrying a coefficient above `floor` in magnitude.
    pub fn active_band(&self, floor: f64) -> usize {
        let n = self.coeffs.len();
        let mut band = 0usize;
        for m in 0..n {
            if self.coeffs[m].norm() > floor {
                band = band.max(signed_index(m, n).unsigned_abs() as usize);
            }
        }
        band
    }

    fn project_hermitian(&mut self) {
        let n = self.coeffs.len();
        for m in 1..n / 2 {
            let avg = 0.5 * (self.coeffs[m] + self.coeffs[n - m].conj());
            self.coeffs[m] = avg;
            self.coeffs[n - m] = avg.conj();
        }
        self.coeffs[0] = Complex64::new(self.coeffs[0].re, 0.0);
        self.coeffs[n / 2] = Complex64::new(self.coeffs[n / 2].re, 0.0);
    }
}

pub(crate) fn signed_index(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Uniform periodic grid with cached FFT plans. Cloning shares the plans.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    period: f64,
    nodes: Vec<f64>,
    wavenumbers: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("period", &self.period)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.period == other.period
    }
}

impl Grid {
    pub fn new(n: usize, period: f64) -> Result<Self> {
        if n < MIN_GRID {
            return Err(Error::config(format!(
                "grid.n: must be at least {MIN_GRID} (got {n})"
            )));
        }
        if n % 2 != 0 {
            return Err(Error::config(format!("grid.n: must be even (got {n})")));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::config(format!(
                "grid.period: must be positive and finite (got {period})"
            )));
        }
        let dx = period / n as f64;
        let nodes = (0..n).map(|j| j as f64 * dx).collect();
        let fundamental = 2.0 * std::f64::consts::PI / period;
        let wavenumbers = (0..n)
            .map(|m| fundamental * signed_index(m, n) as f64)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Grid {
            n,
            period,
            nodes,
            wavenumbers,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Wavenumbers in FFT storage order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Smallest positive wavenumber, 2 pi / period.
    pub fn fundamental(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.period
    }

    /// Largest integer mode index that survives [`Spectrum::dealias`].
    pub fn dealias_band(&self) -> usize {
        self.n / 3
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::GridMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }

    pub fn to_spectrum(&self, field: &Field) -> Result<Spectrum> {
        self.check_len(field.len())?;
        let mut buf: Vec<Complex64> = field
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Ok(Spectrum {
            coeffs: buf,
            period: self.period,
            time: field.time,
        })
    }

    pub fn to_field(&self, spectrum: &Spectrum) -> Result<Field> {
        self.check_len(spectrum.len())?;
        let mut buf = spectrum.coeffs.clone();
        self.inv.process(&mut buf);
        Ok(Field {
            values: buf.iter().map(|c| c.re).collect(),
            time: spectrum.time,
        })
    }

    /// Multiply a spectrum by a wavenumber symbol and restore Hermitian
    /// symmetry, so the result still represents a real field.
    pub fn spectrum_symbol(
        &self,
        spectrum: &Spectrum,
        symbol: impl Fn(f64) -> Complex64,
    ) -> Result<Spectrum> {
        self.check_len(spectrum.len())?;
        let mut out = spectrum.clone();
        for (m, c) in out.coeffs.iter_mut().enumerate() {
            let k = self.wavenumbers[m];
            let s = symbol(k);
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(Error::NonFiniteSymbol { k });
            }
            *c *= s;
        }
        out.project_hermitian();
        Ok(out)
    }

    /// Field-level version of [`Grid::spectrum_symbol`].
    pub fn apply_symbol(
        &self,
        field: &Field,
        symbol: impl Fn(f64) -> Complex64,
    ) -> Result<Field> {
        let hat = self.to_spectrum(field)?;
        self.to_field(&self.spectrum_symbol(&hat, symbol)?)
    }

    /// Apply a real, even symbol such as a dispersion weight.
    pub fn apply_real_symbol(&self, field: &Field, symbol: impl Fn(f64) -> f64) -> Result<Field> {
        self.apply_symbol(field, |k| Complex64::new(symbol(k), 0.0))
    }

    /// Spectral derivative of the given order via the multiplier (i k)^order.
    pub fn derivative(&self, field: &Field, order: u32) -> Result<Field> {
        if order > 6 {
            return Err(Error::config(format!(
                "derivative order {order} exceeds the supported maximum of 6"
            )));
        }
        self.apply_symbol(field, |k| Complex64::new(0.0, k).powi(order as i32))
    }

    pub(crate) fn derivative_spectrum(&self, spectrum: &Spectrum, order: u32) -> Result<Spectrum> {
        self.spectrum_symbol(spectrum, |k| Complex64::new(0.0, k).powi(order as i32))
    }

    /// Trapezoid quadrature over one period; exact for the periodic grid.
    pub fn quadrature(&self, field: &Field) -> Result<f64> {
        self.check_len(field.len())?;
        Ok(self.spacing() * field.values.iter().sum::<f64>())
    }

    /// L2-type inner product dx * sum f g over the nodes.
    pub fn quadrature_inner(&self, f: &Field, g: &Field) -> Result<f64> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        Ok(self.spacing()
            * f.values
                .iter()
                .zip(&g.values)
                .map(|(a, b)| a * b)
                .sum::<f64>())
    }

    /// Weighted spectral norm sqrt(period * sum w(k) |u_hat(k)|^2).
    pub fn weighted_norm(&self, field: &Field, weight: impl Fn(f64) -> f64) -> Result<f64> {
        let hat = self.to_spectrum(field)?;
        self.weighted_norm_spectrum(&hat, weight)
    }

    pub fn weighted_norm_spectrum(
        &self,
        spectrum: &Spectrum,
        weight: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        self.check_len(spectrum.len())?;
        let mut total = 0.0;
        for (m, c) in spectrum.coeffs.iter().enumerate() {
            let w = weight(self.wavenumbers[m]);
            if !w.is_finite() {
                return Err(Error::NonFiniteSymbol {
                    k: self.wavenumbers[m],
                });
            }
            total += w * c.norm_sqr();
        }
        Ok((self.period * total).sqrt())
    }

    /// Weighted spectral inner product period * sum w(k) Re(f_hat conj(g_hat)).
    pub fn weighted_inner(
        &self,
        f: &Field,
        g: &Field,
        weight: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        let fh = self.to_spectrum(f)?;
        let gh = self.to_spectrum(g)?;
        let mut total = 0.0;
        for m in 0..self.n {
            let w = weight(self.wavenumbers[m]);
            if !w.is_finite() {
                return Err(Error::NonFiniteSymbol {
                    k: self.wavenumbers[m],
                });
            }
            total += w * (fh.coeffs[m] * gh.coeffs[m].conj()).re;
        }
        Ok(self.period * total)
    }
}

/// Pointwise product of two fields followed by a dealiased spectrum, the
/// basic quadratic interaction of every evolution operator.
pub fn product_spectrum(grid: &Grid, f: &Field, g: &Field) -> Result<Spectrum> {
    if f.len() != g.len() {
        return Err(Error::GridMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    let prod = Field::new(
        f.values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| a * b)
            .collect(),
        f.time,
    );
    let mut hat = grid.to_spectrum(&prod)?;
    hat.dealias();
    Ok(hat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    pub(crate) fn max_diff(a: &Field, b: &Field) -> f64 {
        a.values
            .iter()
            .zip(&b.values)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn grid_layout_matches_convention() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        assert_abs_diff_eq!(g.nodes()[1], PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.nodes()[7], 7.0 * PI / 4.0, epsilon = 1e-14);
        let mut ks: Vec<f64> = g.wavenumbers().to_vec();
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0];
        for (k, e) in ks.iter().zip(expect) {
            assert_abs_diff_eq!(*k, e, epsilon = 1e-14);
        }
    }

    #[test]
    fn grid_layout_scales_with_period() {
        let g = Grid::new(8, 4.0 * PI).unwrap();
        assert_abs_diff_eq!(g.spacing(), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.fundamental(), 0.5, epsilon = 1e-15);
        let mut ks: Vec<f64> = g.wavenumbers().to_vec();
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(ks[0], -1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(ks[7], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(Grid::new(7, 2.0 * PI).is_err());
        assert!(Grid::new(4, 2.0 * PI).is_err());
        assert!(Grid::new(64, 0.0).is_err());
        assert!(Grid::new(64, -1.0).is_err());
        assert!(Grid::new(64, f64::NAN).is_err());
    }

    #[test]
    fn cosine_splits_into_half_coefficients() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, 0.0, f64::cos);
        let hat = g.to_spectrum(&u).unwrap();
        assert_abs_diff_eq!(hat.coeff(1).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(hat.coeff(-1).re, 0.5, epsilon = 1e-14);
        assert!(hat.coeff(1).im.abs() < 1e-14);
        for j in 2..=32i64 {
            assert!(hat.coeff(j).norm() < 1e-14, "leak at mode {j}");
        }
        let one = Field::constant(&g, 1.0, 0.0);
        let hat1 = g.to_spectrum(&one).unwrap();
        assert_abs_diff_eq!(hat1.coeff(0).re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn symbol_application_matches_hand_values() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, 0.0, f64::cos);
        let lap = g.apply_real_symbol(&u, |k| -k * k).unwrap();
        let expect = Field::from_fn(&g, 0.0, |x| -x.cos());
        // Tolerance allows for transform roundoff amplified by k^2 <= 1024.
        assert!(max_diff(&lap, &expect) < 1e-12);

        let v = Field::from_fn(&g, 0.0, |x| (2.0 * x).sin());
        let h = g.apply_real_symbol(&v, |k| 1.0 + k * k).unwrap();
        let expect = Field::from_fn(&g, 0.0, |x| 5.0 * (2.0 * x).sin());
        assert!(max_diff(&h, &expect) < 1e-12);
    }

    #[test]
    fn symbol_rejects_non_finite_values() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, 0.0, f64::cos);
        let err = g.apply_real_symbol(&u, |k| 1.0 / k).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSymbol { .. }));
    }

    #[test]
    fn derivatives_of_cosine() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, 0.0, f64::cos);
        let d1 = g.derivative(&u, 1).unwrap();
        assert!(max_diff(&d1, &Field::from_fn(&g, 0.0, |x| -x.sin())) < 1e-13);
        let d2 = g.derivative(&u, 2).unwrap();
        assert!(max_diff(&d2, &Field::from_fn(&g, 0.0, |x| -x.cos())) < 1e-12);
        let d0 = g.derivative(&u, 0).unwrap();
        assert!(max_diff(&d0, &u) < 1e-15);
        let c = Field::constant(&g, 3.0, 0.0);
        assert!(g.derivative(&c, 1).unwrap().max_abs() < 1e-14);
        assert!(g.derivative(&u, 7).is_err());
    }

    #[test]
    fn odd_derivative_zeroes_the_nyquist_mode() {
        // cos(4x) on n = 8 lives exactly at the unpaired Nyquist index; its
        // spectral first derivative is the zero field by projection.
        let g = Grid::new(8, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, 0.0, |x| (4.0 * x).cos());
        let d1 = g.derivative(&u, 1).unwrap();
        assert!(d1.max_abs() < 1e-13);
        // Even orders keep it: second derivative is -16 cos(4x).
        let d2 = g.derivative(&u, 2).unwrap();
        let expect = Field::from_fn(&g, 0.0, |x| -16.0 * (4.0 * x).cos());
        assert!(max_diff(&d2, &expect) < 1e-12);
    }

    #[test]
    fn dealias_keeps_resolved_band_and_kills_the_rest() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, 0.0, f64::cos);
        let mut hat = g.to_spectrum(&u).unwrap();
        let before = hat.clone();
        hat.dealias();
        // Kept modes are untouched bit for bit; everything above the 2/3
        // cutoff (including transform roundoff) is exactly zero.
        for j in -21..=21i64 {
            assert_eq!(hat.coeff(j), before.coeff(j));
        }
        for j in 22..=32i64 {
            assert_eq!(hat.coeff(j).norm(), 0.0);
            if j < 32 {
                assert_eq!(hat.coeff(-j).norm(), 0.0);
            }
        }

        let mut edge = Spectrum::zeros(&g, 0.0);
        edge.set_pair(21, Complex64::new(1.0, 0.5)); // 3*21 = 63 <= 64: kept
        edge.set_pair(22, Complex64::new(1.0, 0.5)); // 3*22 = 66 > 64: dropped
        edge.set_pair(32, Complex64::new(1.0, 0.0)); // Nyquist: dropped
        edge.dealias();
        assert!(edge.coeff(21).norm() > 0.9);
        assert_eq!(edge.coeff(22).norm(), 0.0);
        assert_eq!(edge.coeff(32).norm(), 0.0);
    }

    #[test]
    fn weighted_norm_frozen_values() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let one = Field::constant(&g, 1.0, 0.0);
        let n0 = g.weighted_norm(&one, |_| 1.0).unwrap();
        assert_abs_diff_eq!(n0, (2.0 * PI).sqrt(), epsilon = 1e-13);

        let u = Field::from_fn(&g, 0.0, f64::cos);
        let l2 = g.weighted_norm(&u, |_| 1.0).unwrap();
        assert_abs_diff_eq!(l2, PI.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn quadrature_of_cosine_squared() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, 0.0, |x| x.cos() * x.cos());
        assert_abs_diff_eq!(g.quadrature(&u).unwrap(), PI, epsilon = 1e-13);
        let c = Field::from_fn(&g, 0.0, f64::cos);
        assert_abs_diff_eq!(g.quadrature_inner(&c, &c).unwrap(), PI, epsilon = 1e-13);
    }

    fn band_limited_field(grid: &Grid, amps: &[(f64, f64)]) -> Field {
        // Mode j gets amplitude a and phase p: sum a cos(j x + p).
        Field::from_fn(grid, 0.0, |x| {
            amps.iter()
                .enumerate()
                .map(|(j, (a, p))| a * ((j as f64 + 1.0) * x + p).cos())
                .sum()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn transform_round_trip_is_tight(
            amps in prop::collection::vec((-2.0f64..2.0, 0.0f64..6.28), 1..12)
        ) {
            let g = Grid::new(64, 2.0 * PI).unwrap();
            let u = band_limited_field(&g, &amps);
            let back = g.to_field(&g.to_spectrum(&u).unwrap()).unwrap();
            let tol = 1e-12 * (1.0 + u.max_abs());
            prop_assert!(max_diff(&u, &back) <= tol);
        }

        #[test]
        fn parseval_ties_quadrature_to_spectrum(
            amps in prop::collection::vec((-2.0f64..2.0, 0.0f64..6.28), 1..12)
        ) {
            let g = Grid::new(64, 2.0 * PI).unwrap();
            let u = band_limited_field(&g, &amps);
            let spectral = g.weighted_norm(&u, |_| 1.0).unwrap().powi(2);
            let physical = g.quadrature_inner(&u, &u).unwrap();
            let scale = spectral.max(1e-30);
            prop_assert!((spectral - physical).abs() / scale <= 1e-10);
        }
    }
}
