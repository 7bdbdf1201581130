//! Analytic evaluation: Laplace transforms, Gil-Pelaez coverage and the
//! Rayleigh closed forms.

pub mod closed_form;
pub mod coverage;
pub mod laplace;
pub mod rejection;

pub use closed_form::{
    access_coverage_approx, access_coverage_rayleigh, distributed_mode_fraction, q_balance, q_star,
    Fraction, Intensities, MixtureModel, Variant,
};
pub use coverage::{
    access_coverage, access_coverage_with_ir, backhaul_coverage, backhaul_coverage_given_load,
    rate_coverage, rate_coverage_with_ir, AnalyticSettings, Estimate,
};
pub use laplace::{laplace_i_cs, laplace_i_cu, laplace_i_ss, laplace_i_su};
