//! Shot-noise exponent kernels at complex argument.
//!
//! `sbs_kernel(k, δ, u) = ₂F₁(k, -δ; 1-δ; -u) - 1 = δ ∫_0^1 (1 - (1+uy)^{-k}) y^{-δ-1} dy`
//!
//! `cn_kernel(δ, u) = δ ∫_0^1 (1 - e^{-uy}) y^{-δ-1} dy = u^δ Γ(1-δ) + δ E_{1+δ}(u) - 1`
//!
//! Both are evaluated for Re u >= 0, which covers real Laplace arguments and
//! the imaginary axis used by characteristic functions.

use super::gamma::gamma;
use super::hyper::series_complex;
use super::SpecFunError;
use num_complex::Complex64;

const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 5_000;

fn check(u: Complex64, routine: &'static str) -> Result<(), SpecFunError> {
    if !u.re.is_finite() || !u.im.is_finite() {
        return Err(SpecFunError::domain(routine, format!("non-finite argument {u}")));
    }
    if u.re < -1e-12 * u.norm() {
        return Err(SpecFunError::domain(routine, format!("argument {u} has negative real part")));
    }
    Ok(())
}

/// Γ(1-δ)Γ(k+δ)/Γ(k), the coefficient of u^δ in the large-u behaviour of
/// [`sbs_kernel`].
pub fn sbs_kernel_coefficient(k: f64, delta: f64) -> Result<f64, SpecFunError> {
    Ok(gamma(1.0 - delta)? * gamma(k + delta)? / gamma(k)?)
}

/// ₂F₁(k, -δ; 1-δ; -u) - 1 for complex u with Re u >= 0, k > 0, 0 < δ < 1.
pub fn sbs_kernel(k: f64, delta: f64, u: Complex64) -> Result<Complex64, SpecFunError> {
    check(u, "sbs_kernel")?;
    let r = u.norm();
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if r < 0.5 {
        // Gauss series without its leading 1: (-δ)_n/(1-δ)_n = -δ/(n-δ).
        let mut p = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 1..MAX_TERMS {
            let nf = n as f64;
            p *= -u * ((k + nf - 1.0) / nf);
            let t = p * (-delta / (nf - delta));
            sum += t;
            if t.norm() <= EPS * sum.norm() {
                return Ok(sum);
            }
        }
        return Err(SpecFunError::NonConvergence {
            routine: "sbs_kernel small-argument series",
            estimate: sum.re,
            error: f64::NAN,
        });
    }
    if r <= 2.0 {
        // Pfaff: (1+u)^δ ₂F₁(1-δ-k, -δ; 1-δ; u/(1+u))
        let one = Complex64::new(1.0, 0.0);
        let w = u / (one + u);
        let f = series_complex(1.0 - delta - k, -delta, 1.0 - delta, w)?;
        return Ok((one + u).powf(delta) * f - one);
    }
    // Large |u|: C_k u^δ - 1 + δ Σ_m binom(-k, m) u^{-k-m} / (k+m+δ)
    let ck = sbs_kernel_coefficient(k, delta)?;
    let iu = u.inv();
    let mut p = iu.powf(k);
    let mut sum = p / (k + delta);
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        p *= -iu * ((k + mf - 1.0) / mf);
        let t = p / (k + mf + delta);
        sum += t;
        if t.norm() <= EPS * sum.norm() {
            return Ok(u.powf(delta) * ck - 1.0 + sum * delta);
        }
    }
    Err(SpecFunError::NonConvergence {
        routine: "sbs_kernel asymptotic series",
        estimate: sum.re,
        error: f64::NAN,
    })
}

/// Generalised exponential integral E_p(u) = ∫_1^∞ e^{-ut} t^{-p} dt for
/// Re u >= 0, |u| >= 1, by continued fraction.
pub fn expint_p(p: f64, u: Complex64) -> Result<Complex64, SpecFunError> {
    check(u, "expint_p")?;
    let tiny = Complex64::new(1e-30, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut b = u + p;
    let mut c = one / tiny;
    let mut d = one / b;
    let mut h = d;
    for i in 1..MAX_TERMS * 4 {
        let fi = i as f64;
        let an = -fi * (p - 1.0 + fi);
        b += 2.0;
        d = d * an + b;
        if d.norm() < 1e-30 {
            d = tiny;
        }
        d = d.inv();
        c = b + c.inv() * an;
        if c.norm() < 1e-30 {
            c = tiny;
        }
        let del = c * d;
        h *= del;
        if (del - one).norm() < 1e-15 {
            return Ok(h * (-u).exp());
        }
    }
    Err(SpecFunError::NonConvergence {
        routine: "expint_p continued fraction",
        estimate: h.re,
        error: f64::NAN,
    })
}

/// u^δ Γ(1-δ) + δ E_{1+δ}(u) - 1, i.e. δ ∫_0^1 (1 - e^{-uy}) y^{-δ-1} dy.
pub fn cn_kernel(delta: f64, u: Complex64) -> Result<Complex64, SpecFunError> {
    check(u, "cn_kernel")?;
    let r = u.norm();
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if r <= 4.0 {
        // -δ Σ_{n>=1} (-u)^n / (n! (n-δ))
        let mut p = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 1..MAX_TERMS {
            let nf = n as f64;
            p *= -u / nf;
            let t = p / (nf - delta);
            sum += t;
            if t.norm() <= EPS * sum.norm() && nf > r {
                return Ok(sum * (-delta));
            }
        }
        return Err(SpecFunError::NonConvergence {
            routine: "cn_kernel series",
            estimate: sum.re,
            error: f64::NAN,
        });
    }
    let g = gamma(1.0 - delta)?;
    Ok(u.powf(delta) * g + expint_p(1.0 + delta, u)? * delta - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sbs_kernel_is_continuous_across_branches() {
        let (k, d) = (2.0, 0.5);
        for &(a, b) in &[(0.5, 2.0)] {
            for &ang in &[0.0, 0.7, 1.5707963] {
                let below = sbs_kernel(k, d, Complex64::from_polar(a - 1e-9, ang)).unwrap();
                let above = sbs_kernel(k, d, Complex64::from_polar(a + 1e-9, ang)).unwrap();
                assert!((below - above).norm() < 1e-8);
                let below = sbs_kernel(k, d, Complex64::from_polar(b - 1e-9, ang)).unwrap();
                let above = sbs_kernel(k, d, Complex64::from_polar(b + 1e-9, ang)).unwrap();
                assert!((below - above).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn sbs_kernel_rayleigh_closed_form() {
        // k = 1, δ = 1/2: F(1,-1/2;1/2;-x^2) - 1 = x atan x
        for &x in &[0.1_f64, 0.9, 1.3, 5.0, 40.0] {
            let g = sbs_kernel(1.0, 0.5, c(x * x, 0.0)).unwrap();
            assert!((g.re - x * x.atan()).abs() < 1e-12 * (1.0 + g.re));
            assert!(g.im.abs() < 1e-12);
        }
    }

    #[test]
    fn cn_kernel_continuous_at_switch() {
        for &ang in &[0.0, -0.8, -1.5707963] {
            let a = cn_kernel(0.5, Complex64::from_polar(4.0 - 1e-9, ang)).unwrap();
            let b = cn_kernel(0.5, Complex64::from_polar(4.0 + 1e-9, ang)).unwrap();
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_left_half_plane() {
        assert!(sbs_kernel(1.0, 0.5, c(-1.0, 0.0)).is_err());
        assert!(cn_kernel(0.5, c(-1.0, 0.2)).is_err());
    }
}
