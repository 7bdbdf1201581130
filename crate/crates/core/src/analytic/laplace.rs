//! Laplace transforms of the four interference terms.
//!
//! The `*_exponent` functions return ln L(s) for complex s with Re s >= 0;
//! the characteristic function of each term is L(-jw).

use crate::error::Result;
use crate::model::{DerivedModel, NetworkParams};
use crate::specfun::{
    beta_fn, cn_kernel, gamma, gauss_2f1, sbs_kernel, sbs_kernel_coefficient, upper_inc_gamma,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// ln L of SBS interference at a user whose serving SBS is at distance `r`
/// (interferers lie beyond r).
pub fn sbs_user_exponent(
    s: Complex64,
    r: f64,
    lambda_bar: f64,
    p: &NetworkParams,
) -> Result<Complex64> {
    if lambda_bar == 0.0 || s == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let theta = 1.0 / p.k_user;
    let u = s * (p.p_s * theta / r.powf(p.beta));
    Ok(sbs_kernel(p.k_user, p.delta(), u)? * (-PI * lambda_bar * r * r))
}

/// ln L of CN interference at a user (no exclusion region).
pub fn cn_user_exponent(s: Complex64, lambda_c: f64, p: &NetworkParams) -> Result<Complex64> {
    let d = p.delta();
    Ok((s * p.p_c).powf(d) * (-PI * lambda_c * gamma(1.0 - d)?))
}

/// ln L of SBS interference at an SBS receiver (no exclusion region).
pub fn sbs_sbs_exponent(s: Complex64, lambda_bar: f64, p: &NetworkParams) -> Result<Complex64> {
    if lambda_bar == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let d = p.delta();
    let ck = sbs_kernel_coefficient(p.k_sbs, d)?;
    Ok((s * (p.p_s / p.k_sbs)).powf(d) * (-PI * lambda_bar * ck))
}

/// ln L of CN interference at an SBS whose serving CN is at distance `r`.
pub fn cn_sbs_exponent(s: Complex64, r: f64, lambda_c: f64, p: &NetworkParams) -> Result<Complex64> {
    let u = s * (p.p_c / r.powf(p.beta));
    Ok(cn_kernel(p.delta(), u)? * (-PI * lambda_c * r * r))
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(crate::error::invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// L_{I_su}(t) for IBFD interferers beyond the serving distance `r_su`.
pub fn laplace_i_su(t: f64, r_su: f64, d: &DerivedModel, p: &NetworkParams) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 || d.lambda_bar_si == 0.0 {
        return Ok(1.0);
    }
    let theta = 1.0 / p.k_user;
    let z = -t * p.p_s * theta / r_su.powf(p.beta);
    let f = gauss_2f1(p.k_user, -p.delta(), 1.0 - p.delta(), z)?;
    Ok((-PI * d.lambda_bar_si * r_su * r_su * (f - 1.0)).exp())
}

/// L_{I_cu}(t).
pub fn laplace_i_cu(t: f64, d: &DerivedModel, p: &NetworkParams) -> Result<f64> {
    check_t(t)?;
    let dl = p.delta();
    Ok((-PI * d.lambda_c * (t * p.p_c).powf(dl) * gamma(1.0 - dl)?).exp())
}

/// Coefficient of (tPθ)^δ in the SBS-to-SBS exponent, |δ B(k+δ, -δ)|, which
/// reduces to (πδ)/sin(πδ) for Rayleigh fading.
pub fn sbs_sbs_coefficient(k: f64, delta: f64) -> Result<f64> {
    if k == 1.0 {
        return Ok(PI * delta / (PI * delta).sin());
    }
    Ok(-delta * beta_fn(k + delta, -delta)?)
}

/// L_{I_ss}(t).
pub fn laplace_i_ss(t: f64, d: &DerivedModel, p: &NetworkParams) -> Result<f64> {
    check_t(t)?;
    let dl = p.delta();
    let c = sbs_sbs_coefficient(p.k_sbs, dl)?;
    Ok((-PI * d.lambda_bar_si * c * (t * p.p_s / p.k_sbs).powf(dl)).exp())
}

/// L_{I_cs}(t) for CN interferers beyond the serving-CN distance `r_cs`.
pub fn laplace_i_cs(t: f64, r_cs: f64, d: &DerivedModel, p: &NetworkParams) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let dl = p.delta();
    let u = t * p.p_c / r_cs.powf(p.beta);
    let bracket = (gamma(1.0 - dl)? + dl * upper_inc_gamma(-dl, u)?) * (t * p.p_c).powf(dl) - r_cs * r_cs;
    Ok((-PI * d.lambda_c * bracket).exp())
}
