//! CDF inversion from a characteristic function:
//! F(x) = 1/2 - (1/π) ∫_0^∞ Im[φ(w) e^{-jwx}] / w dw.

use super::quad::{integrate_vec_best, QuadSettings, Wynn};
use super::SpecFunError;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Support of the random variable being inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    Real,
    NonNegative,
}

/// A characteristic function φ(w) = E[e^{jwX}] = L(-jw).
pub trait CharacteristicFunction {
    fn eval(&self, w: f64) -> Result<Complex64, SpecFunError>;

    fn support(&self) -> Support {
        Support::Real
    }

    /// Frequency at which |φ| has roughly halved, if known.
    fn scale_hint(&self) -> Option<f64> {
        None
    }
}

/// Closure adapter.
pub struct FnCharacteristic<F> {
    f: F,
    support: Support,
    scale: Option<f64>,
}

impl<F> FnCharacteristic<F>
where
    F: Fn(f64) -> Result<Complex64, SpecFunError>,
{
    pub fn new(f: F, support: Support) -> Self {
        Self { f, support, scale: None }
    }

    pub fn with_scale(mut self, w: f64) -> Self {
        self.scale = Some(w);
        self
    }
}

impl<F> CharacteristicFunction for FnCharacteristic<F>
where
    F: Fn(f64) -> Result<Complex64, SpecFunError>,
{
    fn eval(&self, w: f64) -> Result<Complex64, SpecFunError> {
        (self.f)(w)
    }
    fn support(&self) -> Support {
        self.support
    }
    fn scale_hint(&self) -> Option<f64> {
        self.scale
    }
}

/// CDF value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfEstimate {
    pub value: f64,
    pub error: f64,
}

const MAX_PANELS: usize = 2_000;
const QUIET_PANELS: usize = 3;

fn decay_scale<C: CharacteristicFunction + ?Sized>(phi: &C) -> Result<Option<f64>, SpecFunError> {
    if let Some(s) = phi.scale_hint() {
        return Ok(Some(s));
    }
    // walk a quarter-decade grid outwards from w = 1
    let step = 10f64.powf(0.25);
    let mut w = 1.0;
    if phi.eval(w)?.norm() > 0.5 {
        for _ in 0..160 {
            w *= step;
            if phi.eval(w)?.norm() <= 0.5 {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }
    for _ in 0..160 {
        let lower = w / step;
        if phi.eval(lower)?.norm() > 0.5 {
            return Ok(Some(w));
        }
        w = lower;
    }
    Ok(Some(w))
}

/// Gil-Pelaez inversion. Returns the CDF clamped to [0, 1].
pub fn gil_pelaez_cdf<C: CharacteristicFunction + ?Sized>(
    phi: &C,
    x: f64,
    settings: &QuadSettings,
) -> Result<CdfEstimate, SpecFunError> {
    if x.is_nan() {
        return Err(SpecFunError::domain("gil_pelaez_cdf", "NaN threshold".into()));
    }
    if phi.support() == Support::NonNegative && x < 0.0 {
        return Ok(CdfEstimate { value: 0.0, error: 0.0 });
    }
    if x.is_infinite() {
        return Ok(CdfEstimate { value: if x > 0.0 { 1.0 } else { 0.0 }, error: 0.0 });
    }
    let ws = decay_scale(phi)?;
    let half_period = if x != 0.0 { PI / x.abs() } else { f64::INFINITY };
    let ws = match ws {
        Some(w) => w,
        None if x != 0.0 => 1.0 / x.abs(),
        None => 1.0,
    };
    let w0 = ws.min(half_period);

    let panel_settings = QuadSettings {
        rel_tol: settings.rel_tol,
        abs_tol: settings.abs_tol / 8.0,
        max_subdivisions: settings.max_subdivisions,
    };
    let mut budget = settings.max_subdivisions;
    let mut error = 0.0;

    // [Im φ(w)e^{-jwx}/w, |φ(w)|/w]
    let integrand = |w: f64| -> Result<[f64; 2], SpecFunError> {
        let p = phi.eval(w)?;
        let v = p * Complex64::from_polar(1.0, -w * x);
        Ok([v.im / w, p.norm() / w])
    };
    // a panel that ran out of budget still contributes its best estimate;
    // its error is carried and the budget check below ends the inversion
    let panel = |a: f64, b: f64, budget: &mut usize| -> Result<([f64; 2], f64), SpecFunError> {
        let s = QuadSettings { max_subdivisions: *budget, ..panel_settings };
        let (est, converged) = integrate_vec_best(&integrand, a, b, &s)?;
        *budget = if converged { budget.saturating_sub(est.subdivisions) } else { 0 };
        Ok((est.value, est.error))
    };

    // Low panel with w = w0 s^2 to soften the w^{δ-1} behaviour at 0.
    let low = {
        let s = QuadSettings { max_subdivisions: budget, ..panel_settings };
        let (est, converged) = integrate_vec_best(
            |s: f64| {
                let w = w0 * s * s;
                if w == 0.0 {
                    return Ok([0.0, 0.0]);
                }
                let v = integrand(w)?;
                Ok([v[0] * 2.0 * w0 * s, v[1] * 2.0 * w0 * s])
            },
            0.0,
            1.0,
            &s,
        )?;
        budget = if converged { budget.saturating_sub(est.subdivisions) } else { 0 };
        est
    };
    let mut sum = low.value[0];
    error += low.error;

    // Dyadic panels while a panel spans at most about one period.
    let mut a = w0;
    let mut quiet = 0;
    let mut panels = 0;
    let tail_tol = settings.abs_tol.max(settings.rel_tol * sum.abs().max(1e-300)) / 4.0;
    loop {
        let b = 2.0 * a;
        if b - a > 2.0 * half_period {
            break;
        }
        let (v, e) = panel(a, b, &mut budget)?;
        sum += v[0];
        error += e;
        panels += 1;
        if v[1] < tail_tol {
            quiet += 1;
            if quiet >= QUIET_PANELS {
                return Ok(finish(sum, error, x));
            }
        } else {
            quiet = 0;
        }
        if panels >= MAX_PANELS || !b.is_finite() || budget == 0 {
            return Err(SpecFunError::NonConvergence {
                routine: "gil_pelaez_cdf",
                estimate: finish(sum, error, x).value,
                error: f64::INFINITY,
            });
        }
        a = b;
    }

    // Oscillatory tail: half-period panels with Wynn extrapolation.
    let h = half_period;
    let mut wynn = Wynn::new();
    wynn.push(sum);
    let mut last_limit = f64::NAN;
    let mut agree = 0;
    quiet = 0;
    for i in 0..MAX_PANELS {
        let lo = a + i as f64 * h;
        let (v, e) = panel(lo, lo + h, &mut budget)?;
        sum += v[0];
        error += e;
        wynn.push(sum);
        if v[1] < tail_tol {
            quiet += 1;
            if quiet >= QUIET_PANELS {
                return Ok(finish(sum, error, x));
            }
        } else {
            quiet = 0;
        }
        if wynn.len() >= 8 {
            let (l, le) = wynn.limit().expect("non-empty");
            let tol = settings.abs_tol.max(settings.rel_tol * l.abs());
            if (l - last_limit).abs() <= tol && le <= 10.0 * tol {
                agree += 1;
                if agree >= 2 {
                    return Ok(finish(l, error + (l - last_limit).abs(), x));
                }
            } else {
                agree = 0;
            }
            last_limit = l;
        }
        if budget == 0 {
            break;
        }
    }
    let (l, le) = wynn.limit().expect("non-empty");
    Err(SpecFunError::NonConvergence {
        routine: "gil_pelaez_cdf",
        estimate: finish(l, error, x).value,
        error: le / PI,
    })
}

fn finish(integral: f64, error: f64, _x: f64) -> CdfEstimate {
    let v = 0.5 - integral / PI;
    CdfEstimate { value: v.clamp(0.0, 1.0), error: error / PI }
}
