//! Secrecy analysis of backscatter-assisted wiretap channels.
//!
//! A transmitter talks to a receiver while a passive eavesdropper listens.
//! `K` ambient backscatter devices near the receiver re-radiate the incident
//! signal with a pattern known only to the legitimate side, so they act as
//! passive relays for the receiver and as jammers for the eavesdropper. This
//! crate evaluates the resulting secrecy outage probability (SOP) along
//! several independent routes and cross-validates them:
//!
//! * [`montecarlo`] — trial-level simulation of the fading model with
//!   reproducible counter-based substreams (the ground-truth oracle),
//! * [`analytic`] — exact SINR distributions and the master SOP integral by
//!   direct quadrature, a fast Mellin–Barnes contour route, the high-SNR
//!   asymptote, and the secrecy diversity order,
//! * [`foxh`] — a general Fox-H (Mellin–Barnes) evaluator and the Lauricella
//!   `F_D` function,
//! * [`specfun`] — the special functions and quadrature primitives everything
//!   else is built on,
//! * [`sweep`] — parameter sweeps, figure presets, CSV/JSON emission and the
//!   self-validation report.
//!
//! Start from [`sysmodel::SystemConfig`], derive the large-scale parameters
//! with [`sysmodel::derive`], then call into `analytic` or `montecarlo`. The
//! `examples/` directory has one runnable example per capability; the thin
//! `ambsec` binary exposes the same operations as subcommands.

// Domain guards use `!(x > 0)` deliberately: unlike `x <= 0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod foxh;
pub mod montecarlo;
pub mod specfun;
pub mod sweep;
pub mod sysmodel;

/// Version string embedded in emitted dataset metadata.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
