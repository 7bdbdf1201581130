//! Coverage probabilities by Gil-Pelaez inversion, averaged over the
//! serving-distance law.

use super::rejection::RejectionTable;
use super::laplace::{cn_sbs_exponent, cn_user_exponent, sbs_sbs_exponent, sbs_user_exponent};
use crate::error::{Error, Result};
use crate::model::{backhaul_threshold, DerivedModel, LoadDistribution, Mode, NetworkParams};
use crate::report::{CoverageReport, Method};
use crate::specfun::{
    gil_pelaez_cdf, integrate_vec, CdfEstimate, FnCharacteristic, QuadSettings,
    SpecFunError, Support,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tail mass of the serving-distance law that the outer integral drops.
pub const DISTANCE_TAIL_MASS: f64 = 1e-8;

/// Largest inner error accepted from a Gil-Pelaez evaluation that hit its
/// budget; the estimate is then used and its error carried forward.
const INNER_ERROR_CEILING: f64 = 1e-4;

/// Quadrature settings for the nested integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSettings {
    /// Gil-Pelaez inversion
    pub inner: QuadSettingsDef,
    /// serving-distance average
    pub outer: QuadSettingsDef,
}

/// Serializable mirror of [`QuadSettings`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSettingsDef {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl From<QuadSettingsDef> for QuadSettings {
    fn from(s: QuadSettingsDef) -> Self {
        QuadSettings { rel_tol: s.rel_tol, abs_tol: s.abs_tol, max_subdivisions: s.max_subdivisions }
    }
}

impl From<QuadSettings> for QuadSettingsDef {
    fn from(s: QuadSettings) -> Self {
        QuadSettingsDef { rel_tol: s.rel_tol, abs_tol: s.abs_tol, max_subdivisions: s.max_subdivisions }
    }
}

impl Default for AnalyticSettings {
    fn default() -> Self {
        Self {
            inner: QuadSettings::default().into(),
            outer: QuadSettingsDef { rel_tol: 1e-6, abs_tol: 1e-7, max_subdivisions: 400 },
        }
    }
}

/// A probability with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn neg_jw(w: f64) -> Complex64 {
    Complex64::new(0.0, -w)
}

fn tolerate(r: std::result::Result<CdfEstimate, SpecFunError>) -> Result<CdfEstimate> {
    match r {
        Ok(e) => Ok(e),
        Err(SpecFunError::NonConvergence { estimate, error, .. })
            if error.is_finite() && error <= INNER_ERROR_CEILING =>
        {
            Ok(CdfEstimate { value: estimate, error })
        }
        Err(e) => Err(e.into()),
    }
}

// ∫_0^V e^{-v} g(v) dv with V = -ln(tail): the Rayleigh serving-distance law
// in the variable v = πλr².
fn rayleigh_average<G>(g: G, settings: &AnalyticSettings) -> Result<Estimate>
where
    G: Fn(f64) -> Result<CdfEstimate>,
{
    let vmax = -DISTANCE_TAIL_MASS.ln();
    let mut failure: Option<Error> = None;
    let est = integrate_vec(
        |v| {
            if failure.is_some() {
                return Ok([0.0, 0.0]);
            }
            match g(v) {
                Ok(c) => {
                    let w = (-v).exp();
                    Ok([w * c.value, w * c.error])
                }
                Err(e) => {
                    failure = Some(e);
                    Ok([0.0, 0.0])
                }
            }
        },
        0.0,
        vmax,
        &settings.outer.into(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;
    Ok(Estimate {
        value: est.value[0].clamp(0.0, 1.0),
        error: est.error + est.value[1] + DISTANCE_TAIL_MASS,
    })
}

/// How CN interference enters the access link.
#[derive(Debug, Clone, Copy)]
enum CnTerm<'a> {
    Absent,
    Full,
    /// nearest CN removed, others beyond it
    Rejected(&'a RejectionTable),
}

fn access_cdf(
    r: f64,
    mode: Mode,
    cn: CnTerm<'_>,
    d: &DerivedModel,
    p: &NetworkParams,
    inner: &QuadSettings,
) -> Result<CdfEstimate> {
    let gamma_a = d.gamma_a(mode);
    if gamma_a == 0.0 {
        return Ok(CdfEstimate { value: 1.0, error: 0.0 });
    }
    let lambda_bar = d.lambda_bar(mode);
    let c = p.p_s / (r.powf(p.beta) * gamma_a);
    let theta = 1.0 / p.k_user;
    let phi = FnCharacteristic::new(
        |w: f64| {
            let s = neg_jw(w);
            let mut ln = sbs_user_exponent(s, r, lambda_bar, p).map_err(unwrap_numeric)?;
            ln += match cn {
                CnTerm::Absent => Complex64::new(0.0, 0.0),
                CnTerm::Full => cn_user_exponent(s, d.lambda_c, p).map_err(unwrap_numeric)?,
                CnTerm::Rejected(_) => cn_user_exponent(s, d.lambda_c, p).map_err(unwrap_numeric)?,
            };
            let removed = match cn {
                CnTerm::Rejected(t) => t.ratio(w),
                _ => Complex64::new(1.0, 0.0),
            };
            // desired-signal fading enters through L_F(jwc) = (1 + jwcθ)^{-k}
            let fading = Complex64::new(1.0, w * c * theta).powf(-p.k_user);
            let noise = Complex64::from_polar(1.0, w * p.noise_power);
            Ok(ln.exp() * removed * fading * noise)
        },
        Support::Real,
    );
    tolerate(gil_pelaez_cdf(&phi, 0.0, inner))
}

fn unwrap_numeric(e: Error) -> SpecFunError {
    match e {
        Error::Numerical(s) => s,
        other => SpecFunError::Domain { function: "characteristic function", reason: other.to_string() },
    }
}

fn access_generic(mode: Mode, cn: CnTerm<'_>, d: &DerivedModel, p: &NetworkParams, s: &AnalyticSettings) -> Result<Estimate> {
    let inner: QuadSettings = s.inner.into();
    rayleigh_average(
        |v| {
            let r = (v / (PI * d.lambda_s)).sqrt();
            if r == 0.0 {
                return Ok(CdfEstimate { value: 1.0, error: 0.0 });
            }
            access_cdf(r, mode, cn, d, p, &inner)
        },
        s,
    )
}

/// Access-link coverage P(SINR_a > γ_a) of a typical user.
pub fn access_coverage(mode: Mode, d: &DerivedModel, p: &NetworkParams, s: &AnalyticSettings) -> Result<Estimate> {
    let cn = match mode {
        Mode::Ibfd => CnTerm::Full,
        Mode::Obfd => CnTerm::Absent,
    };
    access_generic(mode, cn, d, p, s)
}

/// IBFD access coverage when the CN serving the user's SBS is nulled towards
/// the user. That CN's distance is modelled by the nearest-CN law.
pub fn access_coverage_with_ir(d: &DerivedModel, p: &NetworkParams, s: &AnalyticSettings) -> Result<Estimate> {
    let table = RejectionTable::new(d, p)?;
    access_generic(Mode::Ibfd, CnTerm::Rejected(&table), d, p, s)
}

/// Backhaul coverage of an SBS whose CN serves exactly `n` SBSs.
pub fn backhaul_coverage_given_load(
    n: u32,
    mode: Mode,
    d: &DerivedModel,
    p: &NetworkParams,
    s: &AnalyticSettings,
) -> Result<Estimate> {
    let gamma_b = backhaul_threshold(n, p, mode)?;
    if gamma_b == 0.0 {
        return Ok(Estimate { value: 1.0, error: 0.0 });
    }
    let i_si = match mode {
        Mode::Ibfd => d.i_si,
        Mode::Obfd => 0.0,
    };
    let inner: QuadSettings = s.inner.into();
    rayleigh_average(
        |v| {
            let r = (v / (PI * d.lambda_c)).sqrt();
            if r == 0.0 {
                return Ok(CdfEstimate { value: 1.0, error: 0.0 });
            }
            let x = p.p_c / (gamma_b * r.powf(p.beta)) - i_si;
            if x <= 0.0 {
                return Ok(CdfEstimate { value: 0.0, error: 0.0 });
            }
            let phi = FnCharacteristic::new(
                |w: f64| {
                    let sj = neg_jw(w);
                    let ln = sbs_sbs_exponent(sj, d.lambda_bar_si, p).map_err(unwrap_numeric)?
                        + cn_sbs_exponent(sj, r, d.lambda_c, p).map_err(unwrap_numeric)?;
                    Ok(ln.exp())
                },
                Support::NonNegative,
            );
            tolerate(gil_pelaez_cdf(&phi, x, &inner))
        },
        s,
    )
}

/// Backhaul coverage averaged over the load of the serving CN, conditioned
/// on that CN serving at least one SBS.
pub fn backhaul_coverage(
    mode: Mode,
    d: &DerivedModel,
    p: &NetworkParams,
    load: &LoadDistribution,
    s: &AnalyticSettings,
) -> Result<Estimate> {
    let terms = load.conditioned_nonempty();
    for &(n, _) in &terms {
        backhaul_threshold(n, p, mode)?;
    }
    let parts: Vec<Result<(f64, Estimate)>> = terms
        .par_iter()
        .map(|&(n, w)| Ok((w, backhaul_coverage_given_load(n, mode, d, p, s)?)))
        .collect();
    let mut value = 0.0;
    let mut error = 0.0;
    for part in parts {
        let (w, e) = part?;
        value += w * e.value;
        error += w * e.error;
    }
    Ok(Estimate { value: value.clamp(0.0, 1.0), error: error + LoadDistribution::TAIL_MASS })
}

/// Full analytic report for the current q.
pub fn rate_coverage(
    d: &DerivedModel,
    p: &NetworkParams,
    load: &LoadDistribution,
    s: &AnalyticSettings,
) -> Result<CoverageReport> {
    let ((ai, ao), (bi, bo)) = rayon::join(
        || rayon::join(|| access_coverage(Mode::Ibfd, d, p, s), || access_coverage(Mode::Obfd, d, p, s)),
        || {
            rayon::join(
                || backhaul_coverage(Mode::Ibfd, d, p, load, s),
                || backhaul_coverage(Mode::Obfd, d, p, load, s),
            )
        },
    );
    let (ai, ao, bi, bo) = (ai?, ao?, bi?, bo?);
    let error = ai.error + ao.error + bi.error + bo.error;
    Ok(CoverageReport::compose(ai.value, ao.value, bi.value, bo.value, p.q, Method::AnalyticExact, error))
}

/// Report with the IBFD access term replaced by its interference-rejection
/// counterpart.
pub fn rate_coverage_with_ir(
    d: &DerivedModel,
    p: &NetworkParams,
    load: &LoadDistribution,
    s: &AnalyticSettings,
) -> Result<CoverageReport> {
    let base = rate_coverage(d, p, load, s)?;
    let ir = access_coverage_with_ir(d, p, s)?;
    Ok(CoverageReport::compose(
        ir.value,
        base.c_access_o,
        base.c_backhaul_i,
        base.c_backhaul_o,
        p.q,
        Method::AnalyticExact,
        base.error + ir.error,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_model;

    #[test]
    fn rejection_sits_between_full_and_absent_cn_interference() {
        let p = NetworkParams::default();
        let d = derive_model(&p).unwrap();
        let s = AnalyticSettings::default();
        let full = access_coverage(Mode::Ibfd, &d, &p, &s).unwrap().value;
        let ir = access_coverage_with_ir(&d, &p, &s).unwrap().value;
        let none = access_generic(Mode::Ibfd, CnTerm::Absent, &d, &p, &s).unwrap().value;
        assert!(full < ir && ir < none, "{full} {ir} {none}");
    }
}
