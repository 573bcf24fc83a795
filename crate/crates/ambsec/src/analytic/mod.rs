//! Exact and asymptotic performance formulas, each paired with an
//! independent reference evaluator.
//!
//! The single-integral master form of the secrecy outage probability,
//!
//! ```text
//! P_sop = ∫_0^∞ F_r(Θ(1+x) − 1) f_e(x) dx
//! ```
//!
//! evaluated by direct quadrature over the reference legitimate CDF is the
//! source of truth. The Mellin–Barnes contour route is a validated fast path
//! that must agree with it or get flagged. The high-SNR asymptote and the
//! secrecy diversity order sit on top.

mod eve;
mod legit;
mod sop;

pub use eve::{eve_cdf, eve_pdf, eve_sf, gamma_e_bar, gamma_e_bar_high_power, interference_laplace};
pub use legit::{legit_cdf, legit_pdf, LegitDistribution, SinrDistRoute};
pub use sop::{
    sdo_estimate, sop_asymptotic, sop_asymptotic_with, sop_contour, sop_exact, sop_master,
    EveMeanVariant, SecrecyResult, SopParams, SopSettings,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Quad(#[from] crate::specfun::QuadError),
    #[error(transparent)]
    SpecialFunction(#[from] crate::specfun::ExpIntError),
    #[error(transparent)]
    FoxH(#[from] crate::foxh::FoxHError),
    #[error("evaluation did not converge in {what}: value={value}, err_estimate={err}")]
    NonConvergent { what: String, value: f64, err: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid result: {0}")]
    InvalidResult(String),
}

/// Which pipeline produced a secrecy result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalRoute {
    /// Mellin–Barnes contour closed form (fast path).
    FoxhClosedForm,
    /// Nested quadrature of the master integral (reference).
    MasterIntegral,
    /// First-order high-SNR expansion.
    Asymptotic,
}

impl std::fmt::Display for EvalRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EvalRoute::FoxhClosedForm => "foxh-closed-form",
            EvalRoute::MasterIntegral => "master-integral",
            EvalRoute::Asymptotic => "asymptotic",
        };
        f.write_str(s)
    }
}
