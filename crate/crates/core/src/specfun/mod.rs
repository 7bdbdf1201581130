//! Special functions and numerical integration.

pub mod gamma;
pub mod gil_pelaez;
pub mod hyper;
pub mod incgamma;
pub mod kernels;
pub mod quad;

pub use gamma::{beta_fn, gamma, ln_gamma, recip_gamma};
pub use gil_pelaez::{gil_pelaez_cdf, CdfEstimate, CharacteristicFunction, FnCharacteristic, Support};
pub use hyper::gauss_2f1;
pub use incgamma::{lower_inc_gamma, upper_inc_gamma};
pub use kernels::{cn_kernel, expint_p, sbs_kernel, sbs_kernel_coefficient};
pub use quad::{integrate, integrate_vec, integrate_vec_best, Estimate, QuadSettings};

/// Relative accuracy the series and continued fractions aim for.
pub const TARGET_RTOL: f64 = 1e-11;

/// Failures of the special-function layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("{function}: {reason}")]
    Domain { function: &'static str, reason: String },
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },
    #[error("{routine} did not converge (estimate {estimate:e}, error {error:e})")]
    NonConvergence {
        routine: &'static str,
        estimate: f64,
        error: f64,
    },
}

impl SpecFunError {
    pub(crate) fn domain(function: &'static str, reason: String) -> Self {
        SpecFunError::Domain { function, reason }
    }
}
