//! Special functions and quadrature primitives.
//!
//! Everything is pure and reentrant. Double precision throughout, with
//! log-domain or exponentially-scaled variants where the plain forms would
//! overflow.

mod bessel;
mod expint;
mod gamma;
pub mod oscillatory;
pub mod quad;

pub use bessel::{bessel_j0, bessel_j1, bessel_k0, bessel_k1, j0_zero, j1_zero, BesselError};
pub use expint::{expint_e1, expint_e1_scaled, ExpIntError};
pub use gamma::{gamma, ln_gamma, ln_gamma_complex, GammaError};
pub use quad::{integrate, Domain, QuadError, QuadKind, QuadResult, QuadratureSpec};
