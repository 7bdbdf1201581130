//! Incomplete gamma functions of real argument.

use super::gamma::{gamma, is_nonpositive_integer, EULER_GAMMA};
use super::SpecFunError;

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

// Σ x^n / (a (a+1) ... (a+n)), so that γ(a,x) = x^a e^{-x} * series.
fn lower_series(a: f64, x: f64) -> Result<f64, SpecFunError> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NonConvergence {
        routine: "lower_inc_gamma series",
        estimate: sum,
        error: del.abs(),
    })
}

// Legendre continued fraction for Γ(a,x) e^{x} x^{-a}; modified Lentz.
fn upper_cf(a: f64, x: f64) -> Result<f64, SpecFunError> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(SpecFunError::NonConvergence {
        routine: "upper_inc_gamma continued fraction",
        estimate: h,
        error: f64::NAN,
    })
}

fn prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x).exp()
}

/// Lower incomplete gamma γ(a, x) for a > 0, x >= 0.
pub fn lower_inc_gamma(a: f64, x: f64) -> Result<f64, SpecFunError> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(SpecFunError::domain(
            "lower_inc_gamma",
            format!("need a > 0 and x >= 0, got a = {a}, x = {x}"),
        ));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(prefactor(a, x) * lower_series(a, x)?)
    } else {
        Ok(gamma(a)? - prefactor(a, x) * upper_cf(a, x)?)
    }
}

// E1(x) for 0 < x < ~2 from its power series.
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < EPS * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Upper incomplete gamma Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt for any real
/// `a` and x > 0 (x = 0 allowed when a > 0).
pub fn upper_inc_gamma(a: f64, x: f64) -> Result<f64, SpecFunError> {
    if a.is_nan() || !(x >= 0.0) {
        return Err(SpecFunError::domain(
            "upper_inc_gamma",
            format!("need x >= 0, got a = {a}, x = {x}"),
        ));
    }
    if x == 0.0 {
        if a > 0.0 {
            return gamma(a);
        }
        return Err(SpecFunError::domain(
            "upper_inc_gamma",
            format!("diverges at x = 0 for a = {a} <= 0"),
        ));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if a > 0.0 {
        if x < a + 1.0 {
            return Ok(gamma(a)? - prefactor(a, x) * lower_series(a, x)?);
        }
        return Ok(prefactor(a, x) * upper_cf(a, x)?);
    }
    if x >= 1.0 {
        return Ok(prefactor(a, x) * upper_cf(a, x)?);
    }
    // Small x, a <= 0: start from a0 in (0, 1] (or 0) and recur downwards with
    // Γ(a, x) = (Γ(a+1, x) - x^a e^{-x}) / a.
    let steps = (-a).floor() as i64 + if is_nonpositive_integer(a) { 0 } else { 1 };
    let a0 = a + steps as f64;
    let mut g = if a0 == 0.0 {
        e1_series(x)
    } else {
        gamma(a0)? - prefactor(a0, x) * lower_series(a0, x)?
    };
    let mut ak = a0;
    for _ in 0..steps {
        ak -= 1.0;
        g = (g - prefactor(ak, x)) / ak;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_special_case() {
        // Γ(1, x) = e^{-x}
        for &x in &[0.1, 1.0, 3.0, 20.0] {
            assert!((upper_inc_gamma(1.0, x).unwrap() - (-x).exp()).abs() < 1e-14);
            assert!((lower_inc_gamma(1.0, x).unwrap() - (1.0 - (-x).exp())).abs() < 1e-14);
        }
    }

    #[test]
    fn integer_zero_is_e1() {
        // E1(1) = 0.219383934395520...
        assert!((upper_inc_gamma(0.0, 1.0).unwrap() - 0.219_383_934_395_520_3).abs() < 1e-13);
        assert!((upper_inc_gamma(0.0, 0.3).unwrap() - 0.905_676_651_675_847).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(upper_inc_gamma(-0.5, 0.0).is_err());
        assert!(upper_inc_gamma(1.0, -1.0).is_err());
        assert!(lower_inc_gamma(-1.0, 1.0).is_err());
    }
}
