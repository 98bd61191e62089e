//! The dispersion operator L and the scales built from it.
//!
//! L is a constant-coefficient, self-adjoint operator of even order p >= 0
//! acting through a positive even Fourier symbol ell(k). The momentum map is
//! m = (1 - L d_xx) u, with multiplier 1 + k^2 ell(k), and the fractional
//! smoothing family Gamma^sigma = (1 - L d_xx)^(sigma/(p+2)) interpolates
//! between the identity (sigma = 0) and the full momentum map (sigma = p+2).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

/// Dispersion operator, either a polynomial symbol in k^2 or a fractional
/// Bessel-type power.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorL {
    /// ell(k) = sum_j coeffs[j] * k^(2j); order p = 2 * (highest index).
    Polynomial { coeffs: Vec<f64> },
    /// ell(k) = amplitude * (1 + k^2)^(exponent / 2); order p = exponent.
    BesselPower { amplitude: f64, exponent: f64 },
}

/// Default strength of the `alpha2` preset, ell(k) = 1/4.
pub const DEFAULT_ALPHA_SQUARED: f64 = 0.25;

impl OperatorL {
    /// L = Id: the classical Camassa-Holm momentum m = u - u_xx.
    pub fn identity() -> Self {
        OperatorL::Polynomial { coeffs: vec![1.0] }
    }

    /// L = alpha^2 Id: momentum m = u - alpha^2 u_xx.
    pub fn alpha_squared(a2: f64) -> Result<Self> {
        if !(a2.is_finite() && a2 > 0.0) {
            return Err(Error::config(format!(
                "operator alpha2: strength must be positive and finite (got {a2})"
            )));
        }
        Ok(OperatorL::Polynomial { coeffs: vec![a2] })
    }

    /// L = 1 - d_xx, so the momentum multiplier is 1 + k^2 + k^4
    /// (m = u - u_xx + u_xxxx).
    pub fn helmholtz() -> Self {
        OperatorL::Polynomial {
            coeffs: vec![1.0, 1.0],
        }
    }

    /// L = 2 - d_xx, ell(k) = 2 + k^2.
    pub fn example_vi() -> Self {
        OperatorL::Polynomial {
            coeffs: vec![2.0, 1.0],
        }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::config("operator poly: needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::config("operator poly: coefficients must be finite"));
        }
        let lead = *coeffs.last().unwrap();
        if lead <= 0.0 {
            return Err(Error::config(format!(
                "operator poly: leading coefficient must be positive (got {lead})"
            )));
        }
        Ok(OperatorL::Polynomial { coeffs })
    }

    pub fn bessel_power(exponent: f64, amplitude: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent >= 0.0) {
            return Err(Error::config(format!(
                "operator bessel: order must be a nonnegative real (got {exponent})"
            )));
        }
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::config(format!(
                "operator bessel: amplitude must be positive (got {amplitude})"
            )));
        }
        Ok(OperatorL::BesselPower {
            amplitude,
            exponent,
        })
    }

    /// Parse an operator descriptor:
    /// `identity`, `alpha2`, `alpha2:V`, `helmholtz`, `example-vi`,
    /// `bessel:p,amplitude`, `poly:c0,c1,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "identity" => return Ok(OperatorL::identity()),
            "alpha2" => return OperatorL::alpha_squared(DEFAULT_ALPHA_SQUARED),
            "helmholtz" => return Ok(OperatorL::helmholtz()),
            "example-vi" => return Ok(OperatorL::example_vi()),
            _ => {}
        }
        if let Some(rest) = text.strip_prefix("alpha2:") {
            let a2 = parse_float("operator alpha2", rest)?;
            return OperatorL::alpha_squared(a2);
        }
        if let Some(rest) = text.strip_prefix("bessel:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::config(format!(
                    "operator bessel: expected `bessel:p,amplitude` (got `{text}`)"
                )));
            }
            let p = parse_float("operator bessel order", parts[0])?;
            let a2 = parse_float("operator bessel amplitude", parts[1])?;
            return OperatorL::bessel_power(p, a2);
        }
        if let Some(rest) = text.strip_prefix("poly:") {
            let coeffs = rest
                .split(',')
                .map(|s| parse_float("operator poly coefficient", s))
                .collect::<Result<Vec<f64>>>()?;
            return OperatorL::polynomial(coeffs);
        }
        Err(Error::config(format!(
            "operator: unknown descriptor `{text}`; expected identity, alpha2[:v], \
             helmholtz, example-vi, bessel:p,amplitude or poly:c0,c1,..."
        )))
    }

    /// Canonical descriptor string, the inverse of [`OperatorL::parse`].
    pub fn describe(&self) -> String {
        match self {
            OperatorL::Polynomial { coeffs } => match coeffs.as_slice() {
                [c] if *c == 1.0 => "identity".to_string(),
                [c] => format!("alpha2:{c}"),
                [a, b] if *a == 1.0 && *b == 1.0 => "helmholtz".to_string(),
                [a, b] if *a == 2.0 && *b == 1.0 => "example-vi".to_string(),
                _ => format!(
                    "poly:{}",
                    coeffs
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            },
            OperatorL::BesselPower {
                amplitude,
                exponent,
            } => format!("bessel:{exponent},{amplitude}"),
        }
    }

    /// The symbol ell(k).
    pub fn symbol(&self, k: f64) -> f64 {
        match self {
            OperatorL::Polynomial { coeffs } => {
                let k2 = k * k;
                // Horner in k^2.
                coeffs.iter().rev().fold(0.0, |acc, c| acc * k2 + c)
            }
            OperatorL::BesselPower {
                amplitude,
                exponent,
            } => amplitude * (1.0 + k * k).powf(exponent / 2.0),
        }
    }

    /// The operator order p.
    pub fn order(&self) -> f64 {
        match self {
            OperatorL::Polynomial { coeffs } => {
                let top = coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
                (2 * top) as f64
            }
            OperatorL::BesselPower { exponent, .. } => *exponent,
        }
    }

    /// Multiplier of the momentum map m = (1 - L d_xx) u.
    pub fn momentum_symbol(&self, k: f64) -> f64 {
        1.0 + k * k * self.symbol(k)
    }

    /// Exponent base of the Gamma family, (1 + k^2 ell(k))^(1/(p+2)).
    pub fn gamma_weight(&self, k: f64, sigma: f64) -> f64 {
        self.momentum_symbol(k).powf(sigma / (self.order() + 2.0))
    }

    /// Ensure ell(k) > 0 at every wavenumber the grid can represent.
    pub fn validate_on(&self, grid: &Grid) -> Result<()> {
        for &k in grid.wavenumbers() {
            let v = self.symbol(k);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!(
                    "operator: symbol must be positive on the grid, got {v} at k = {k}"
                )));
            }
        }
        Ok(())
    }
}

fn parse_float(what: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::config(format!("{what}: `{text}` is not a number")))
}

/// Fractional smoothing Gamma^sigma u = (1 - L d_xx)^(sigma/(p+2)) u.
pub fn gamma_power(grid: &Grid, field: &Field, sigma: f64, op: &OperatorL) -> Result<Field> {
    grid.apply_symbol(field, |k| {
        Complex64::new(op.gamma_weight(k, sigma), 0.0)
    })
}

/// Which weight enters a Sobolev-type norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormFamily<'a> {
    /// Classical weight (1 + k^2)^s.
    Bessel,
    /// Weight (1 + k^2 ell(k))^(2s/(p+2)); for L = Id this is Bessel again.
    GammaWeighted(&'a OperatorL),
}

impl NormFamily<'_> {
    pub fn weight(&self, k: f64, s: f64) -> f64 {
        match self {
            NormFamily::Bessel => (1.0 + k * k).powf(s),
            NormFamily::GammaWeighted(op) => op.gamma_weight(k, 2.0 * s),
        }
    }
}

/// Weighted norm of order s in the chosen family.
pub fn sobolev_norm(grid: &Grid, field: &Field, s: f64, family: NormFamily) -> Result<f64> {
    grid.weighted_norm(field, |k| family.weight(k, s))
}

/// Weighted inner product of order s in the chosen family.
pub fn sobolev_inner(
    grid: &Grid,
    f: &Field,
    g: &Field,
    s: f64,
    family: NormFamily,
) -> Result<f64> {
    grid.weighted_inner(f, g, |k| family.weight(k, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn max_diff(a: &Field, b: &Field) -> f64 {
        a.values
            .iter()
            .zip(&b.values)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn preset_symbols_frozen_values() {
        assert_eq!(OperatorL::identity().symbol(3.0), 1.0);
        assert_eq!(OperatorL::identity().order(), 0.0);

        let h = OperatorL::helmholtz();
        assert_eq!(h.symbol(1.0), 2.0);
        assert_eq!(h.order(), 2.0);
        // momentum multiplier 1 + k^2 + k^4
        assert_eq!(h.momentum_symbol(1.0), 3.0);
        assert_eq!(h.momentum_symbol(2.0), 21.0);

        let vi = OperatorL::example_vi();
        assert_eq!(vi.symbol(0.0), 2.0);
        assert_eq!(vi.order(), 2.0);

        let a = OperatorL::parse("alpha2").unwrap();
        assert_eq!(a.symbol(5.0), DEFAULT_ALPHA_SQUARED);
        assert_eq!(a.order(), 0.0);

        let b = OperatorL::parse("bessel:3,2.0").unwrap();
        assert_abs_diff_eq!(b.symbol(1.0), 2.0 * 2.0f64.powf(1.5), epsilon = 1e-14);
        assert_eq!(b.order(), 3.0);

        let p = OperatorL::parse("poly:1,0,2").unwrap();
        assert_eq!(p.symbol(1.0), 3.0);
        assert_eq!(p.order(), 4.0);
    }

    #[test]
    fn parser_round_trips_and_rejects_junk() {
        for name in ["identity", "helmholtz", "example-vi"] {
            let op = OperatorL::parse(name).unwrap();
            assert_eq!(op.describe(), name);
            assert_eq!(OperatorL::parse(&op.describe()).unwrap(), op);
        }
        // The bare name resolves to the default strength, and the canonical
        // descriptor spells that strength out.
        let a = OperatorL::parse("alpha2").unwrap();
        assert_eq!(a.describe(), "alpha2:0.25");
        assert_eq!(OperatorL::parse(&a.describe()).unwrap(), a);
        let b = OperatorL::parse("bessel:2,1.5").unwrap();
        assert_eq!(OperatorL::parse(&b.describe()).unwrap(), b);

        assert!(OperatorL::parse("fourier").is_err());
        assert!(OperatorL::parse("bessel:").is_err());
        assert!(OperatorL::parse("bessel:1").is_err());
        assert!(OperatorL::parse("bessel:1,x").is_err());
        assert!(OperatorL::parse("bessel:-1,1").is_err());
        assert!(OperatorL::parse("bessel:1,0").is_err());
        assert!(OperatorL::parse("poly:").is_err());
        assert!(OperatorL::parse("poly:1,-1,0").is_err());
        assert!(OperatorL::parse("alpha2:-3").is_err());
    }

    #[test]
    fn grid_validation_catches_sign_changes() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        // 1 - k^2 goes negative at |k| >= 2.
        let bad = OperatorL::polynomial(vec![1.0, -0.9, 0.1]).unwrap();
        assert!(bad.validate_on(&g).is_err());
        for name in ["identity", "alpha2", "helmholtz", "example-vi"] {
            OperatorL::parse(name).unwrap().validate_on(&g).unwrap();
        }
    }

    #[test]
    fn gamma_power_frozen_values() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let id = OperatorL::identity();

        // sigma = 2 with L = Id multiplies mode 1 by (1 + 1)^(2/2) = 2.
        let u = Field::from_fn(&g, 0.0, f64::cos);
        let up = gamma_power(&g, &u, 2.0, &id).unwrap();
        assert!(max_diff(&up, &Field::from_fn(&g, 0.0, |x| 2.0 * x.cos())) < 1e-12);

        // sigma = -2 divides mode 2 by (1 + 4) = 5.
        let v = Field::from_fn(&g, 0.0, |x| (2.0 * x).sin());
        let vm = gamma_power(&g, &v, -2.0, &id).unwrap();
        assert!(max_diff(&vm, &Field::from_fn(&g, 0.0, |x| (2.0 * x).sin() / 5.0)) < 1e-13);

        // sigma = 0 is the identity.
        let v0 = gamma_power(&g, &v, 0.0, &id).unwrap();
        assert!(max_diff(&v0, &v) < 1e-14);

        // sigma = p + 2 recovers the momentum multiplier: helmholtz at k = 1
        // scales by 1 + 1 * 2 = 3. The multiplier reaches ~1e6 at the highest
        // mode, so the tolerance leaves room for amplified roundoff.
        let h = OperatorL::helmholtz();
        let uh = gamma_power(&g, &u, 4.0, &h).unwrap();
        assert!(max_diff(&uh, &Field::from_fn(&g, 0.0, |x| 3.0 * x.cos())) < 1e-9);
    }

    #[test]
    fn sobolev_norm_frozen_values() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let one = Field::constant(&g, 1.0, 0.0);
        let u = Field::from_fn(&g, 0.0, f64::cos);

        for fam in [
            NormFamily::Bessel,
            NormFamily::GammaWeighted(&OperatorL::helmholtz()),
        ] {
            for s in [-1.0, 0.0, 1.5, 4.0] {
                let n = sobolev_norm(&g, &one, s, fam).unwrap();
                assert_abs_diff_eq!(n, (2.0 * PI).sqrt(), epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(
            sobolev_norm(&g, &u, 0.0, NormFamily::Bessel).unwrap(),
            PI.sqrt(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            sobolev_norm(&g, &u, 1.0, NormFamily::Bessel).unwrap(),
            (2.0 * PI).sqrt(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn gamma_family_of_identity_operator_is_bessel() {
        let g = Grid::new(64, 2.0 * PI).unwrap();
        let id = OperatorL::identity();
        let u = Field::from_fn(&g, 0.0, |x| x.cos() + 0.3 * (3.0 * x).sin());
        for s in [-1.0, 0.5, 2.0, 4.0] {
            let a = sobolev_norm(&g, &u, s, NormFamily::Bessel).unwrap();
            let b = sobolev_norm(&g, &u, s, NormFamily::GammaWeighted(&id)).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn gamma_powers_compose_as_a_semigroup(
            s1 in -3.0f64..3.0,
            s2 in -3.0f64..3.0,
            amps in prop::collection::vec((-1.5f64..1.5, 0.0f64..6.28), 1..8)
        ) {
            let g = Grid::new(64, 2.0 * PI).unwrap();
            let u = Field::from_fn(&g, 0.0, |x| {
                amps.iter()
                    .enumerate()
                    .map(|(j, (a, p))| a * ((j as f64 + 1.0) * x + p).cos())
                    .sum()
            });
            for op in [OperatorL::identity(), OperatorL::helmholtz()] {
                let two_step = gamma_power(&g, &gamma_power(&g, &u, s1, &op).unwrap(), s2, &op).unwrap();
                let one_step = gamma_power(&g, &u, s1 + s2, &op).unwrap();
                let tol = 1e-12 * (1.0 + one_step.max_abs());
                prop_assert!(max_diff(&two_step, &one_step) <= tol);
            }
        }

        #[test]
        fn gamma_is_an_isometry_between_adjacent_orders(
            s in 0.5f64..5.0,
            amps in prop::collection::vec((-1.5f64..1.5, 0.0f64..6.28), 1..8)
        ) {
            let g = Grid::new(64, 2.0 * PI).unwrap();
            let u = Field::from_fn(&g, 0.0, |x| {
                amps.iter()
                    .enumerate()
                    .map(|(j, (a, p))| a * ((j as f64 + 1.0) * x + p).cos())
                    .sum()
            });
            for op in [OperatorL::identity(), OperatorL::helmholtz(), OperatorL::example_vi()] {
                let shifted = gamma_power(&g, &u, 1.0, &op).unwrap();
                let a = sobolev_norm(&g, &shifted, s - 1.0, NormFamily::GammaWeighted(&op)).unwrap();
                let b = sobolev_norm(&g, &u, s, NormFamily::GammaWeighted(&op)).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-30));
            }
        }
    }
}
