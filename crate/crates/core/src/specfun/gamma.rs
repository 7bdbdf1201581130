//! Real gamma and beta functions.

use super::SpecFunError;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// True when `x` is 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

// ln Γ(x) for x >= 0.5 via Lanczos.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Returns `(ln|Γ(x)|, sign Γ(x))`. At poles returns `(+inf, NaN)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, f64::NAN);
    }
    if x >= 0.5 {
        return (ln_gamma_lanczos(x), 1.0);
    }
    // Reflection: Γ(x)Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    let lg = PI.ln() - s.abs().ln() - ln_gamma_lanczos(1.0 - x);
    (lg, s.signum())
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::domain("ln_gamma", format!("argument {x} must be positive")));
    }
    Ok(ln_gamma_signed(x).0)
}

/// sin(πx) with exact zeros at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    (PI * r).sin()
}

/// Γ(x) for any real `x` that is not a non-positive integer.
pub fn gamma(x: f64) -> Result<f64, SpecFunError> {
    if x.is_nan() {
        return Err(SpecFunError::domain("gamma", "NaN argument".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::Pole { function: "gamma", at: x });
    }
    if x >= 0.5 {
        if x == x.round() && x <= 23.0 {
            let mut f = 1.0;
            let mut k = 2.0;
            while k < x {
                f *= k;
                k += 1.0;
            }
            return Ok(f);
        }
        return Ok(ln_gamma_lanczos(x).exp());
    }
    Ok(PI / (sin_pi(x) * ln_gamma_lanczos(1.0 - x).exp()))
}

/// 1/Γ(x); zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    let (lg, s) = ln_gamma_signed(x);
    s * (-lg).exp()
}

/// Euler beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b), including negative
/// non-integer arguments.
pub fn beta_fn(a: f64, b: f64) -> Result<f64, SpecFunError> {
    for v in [a, b, a + b] {
        if v.is_nan() {
            return Err(SpecFunError::domain("beta_fn", "NaN argument".into()));
        }
        if is_nonpositive_integer(v) {
            return Err(SpecFunError::Pole { function: "beta_fn", at: v });
        }
    }
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    let (lab, sab) = ln_gamma_signed(a + b);
    Ok(sa * sb * sab * (la + lb - lab).exp())
}

/// Product Γ(n1)Γ(n2)... / (Γ(d1)Γ(d2)...) evaluated in log space. Any
/// denominator pole yields zero; numerator poles are an error.
pub(crate) fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64, SpecFunError> {
    let mut l = 0.0;
    let mut s = 1.0;
    for &v in num {
        if is_nonpositive_integer(v) {
            return Err(SpecFunError::Pole { function: "gamma", at: v });
        }
        let (lg, sg) = ln_gamma_signed(v);
        l += lg;
        s *= sg;
    }
    for &v in den {
        if is_nonpositive_integer(v) {
            return Ok(0.0);
        }
        let (lg, sg) = ln_gamma_signed(v);
        l -= lg;
        s *= sg;
    }
    Ok(s * l.exp())
}
