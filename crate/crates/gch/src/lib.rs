//! Periodic pseudospectral tools for a two-parameter family of
//! Camassa-Holm type equations
//!
//! ```text
//! m_t + b u m_x + a m u_x = 0,    m = (1 - L d_xx) u,
//! ```
//!
//! where L is a positive, even Fourier multiplier chosen from a small preset
//! catalog (identity, scaled identity, Helmholtz-squared, polynomial, Bessel
//! powers). The classical Camassa-Holm equation is a = 2, b = 1, L = 1.
//!
//! The crate has two halves:
//!
//! * a solver: spectral grids, the model right-hand side in velocity and
//!   momentum form, RK4 stepping with wave-breaking monitors, CSV/JSON
//!   diagnostics ([`spectral`], [`operator`], [`model`], [`timestep`],
//!   [`diagnostics`]);
//! * a verifier: randomized numerical checks of the operator inequalities
//!   underlying local well-posedness, e.g. commutator estimates, accretivity
//!   pairings, Lipschitz bounds for the frozen-coefficient evolution
//!   ([`verify`]).
//!
//! Start from the examples directory: each example is a runnable tour of one
//! capability. The `gch` binary wraps the same entry points behind a small
//! config-file driven CLI.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod model;
pub mod operator;
pub mod spectral;
pub mod timestep;
pub mod verify;

pub use error::{Error, Result};
