//! CN interference at a user when the nearest CN is removed.
//!
//! With v = πλ_c r² for the removed CN and u(v) = s P_c (πλ_c / v)^{1/δ},
//! the Laplace transform averaged over the removed distance is
//!   L_cu(s) · R(s),  R(s) = ∫_0^∞ exp(-δ v E_{1+δ}(u(v))) dv,
//! where L_cu is the transform with no exclusion. R does not depend on the
//! serving SBS distance, so it is tabulated once along s = -jw.

use crate::error::Result;
use crate::model::{DerivedModel, NetworkParams};
use crate::specfun::{cn_kernel, expint_p, gamma, integrate_vec_best, QuadSettings, SpecFunError};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

const POINTS_PER_DECADE: f64 = 48.0;
const V_MAX: f64 = 34.0;

/// R(-jw) on a log-spaced grid with cubic interpolation in ln w.
#[derive(Debug, Clone)]
pub struct RejectionTable {
    ln_w_min: f64,
    step: f64,
    values: Vec<Complex64>,
}

fn ratio_at(w: f64, d: &DerivedModel, p: &NetworkParams) -> Result<Complex64> {
    let delta = p.delta();
    let a = Complex64::new(0.0, -w) * p.p_c * (PI * d.lambda_c).powf(1.0 / delta);
    let k = a.powf(delta) * gamma(1.0 - delta)?;
    let settings = QuadSettings { rel_tol: 1e-9, abs_tol: 1e-11, max_subdivisions: 800 };
    let (est, converged) = integrate_vec_best(
        |v: f64| {
            if v == 0.0 {
                return Ok([1.0, 0.0]);
            }
            let u = a * v.powf(-1.0 / delta);
            let r = u.norm();
            // |E_p(u)| <= 1/|u| on the right half plane
            let g = if delta * v / r < 1e-15 {
                Complex64::new(0.0, 0.0)
            } else if r > 4.0 {
                expint_p(1.0 + delta, u)? * (delta * v)
            } else {
                (cn_kernel(delta, u)? + 1.0) * v - k
            };
            let val = (-g).exp();
            Ok([val.re, val.im])
        },
        0.0,
        V_MAX,
        &settings,
    )?;
    // only the product with L_cu = exp(-k) is used
    if !converged && est.error * (-k.re).exp() > 1e-8 {
        return Err(SpecFunError::NonConvergence {
            routine: "rejection ratio",
            estimate: est.value[0],
            error: est.error,
        }
        .into());
    }
    Ok(Complex64::new(est.value[0], est.value[1]))
}

impl RejectionTable {
    pub fn new(d: &DerivedModel, p: &NetworkParams) -> Result<Self> {
        let delta = p.delta();
        // |ln L_cu| = c w^δ; below c w^δ = 1e-11 the ratio is 1 to that
        // accuracy, above Re ln L_cu = -80 the product is negligible
        let c = PI * d.lambda_c * gamma(1.0 - delta)? * p.p_c.powf(delta);
        let w_min = (1e-11 / c).powf(1.0 / delta);
        let w_max = (80.0 / (c * (PI * delta / 2.0).cos())).powf(1.0 / delta);
        let ln_w_min = w_min.ln();
        let step = std::f64::consts::LN_10 / POINTS_PER_DECADE;
        let n = ((w_max.ln() - ln_w_min) / step).ceil() as usize + 2;
        let values = (0..n)
            .into_par_iter()
            .map(|i| ratio_at((ln_w_min + i as f64 * step).exp(), d, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ln_w_min, step, values })
    }

    /// R(-jw) for w >= 0.
    pub fn ratio(&self, w: f64) -> Complex64 {
        if w <= 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let x = (w.ln() - self.ln_w_min) / self.step;
        if x <= 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let n = self.values.len();
        if x >= (n - 1) as f64 {
            return self.values[n - 1];
        }
        let i = x.floor() as usize;
        let t = x - i as f64;
        let at = |j: isize| -> Complex64 {
            if j < 0 {
                Complex64::new(1.0, 0.0)
            } else {
                self.values[(j as usize).min(n - 1)]
            }
        };
        let i = i as isize;
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        // Catmull-Rom
        let t2 = t * t;
        let t3 = t2 * t;
        p1 * (1.5 * t3 - 2.5 * t2 + 1.0) + p2 * (-1.5 * t3 + 2.0 * t2 + 0.5 * t)
            + p0 * (-0.5 * t3 + t2 - 0.5 * t)
            + p3 * (0.5 * t3 - 0.5 * t2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_model;

    #[test]
    fn interpolation_matches_direct_quadrature() {
        let p = NetworkParams::default();
        let d = derive_model(&p).unwrap();
        let t = RejectionTable::new(&d, &p).unwrap();
        for &w in &[3.3e-9, 1.7e-7, 2.2e-6, 4.1e-5, 3.9e-4] {
            let direct = ratio_at(w, &d, &p).unwrap();
            assert!((t.ratio(w) - direct).norm() < 1e-6, "w={w}");
        }
    }

    #[test]
    fn ratio_is_one_at_low_frequency() {
        let p = NetworkParams::default();
        let d = derive_model(&p).unwrap();
        let t = RejectionTable::new(&d, &p).unwrap();
        // R - 1 vanishes like w^δ
        assert!((t.ratio(1e-30) - 1.0).norm() < 1e-10);
        assert_eq!(t.ratio(1e-40), Complex64::new(1.0, 0.0));
        let r1 = ratio_at(1e-20, &d, &p).unwrap() - 1.0;
        let r2 = ratio_at(1e-24, &d, &p).unwrap() - 1.0;
        assert!((r1.norm() / r2.norm() - 100.0).abs() < 1e-3, "{r1} {r2}");
    }
}
