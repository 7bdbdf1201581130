//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real parameters and
//! real z <= 1.

use super::gamma::{gamma_ratio, is_nonpositive_integer};
use super::SpecFunError;
use num_complex::Complex64;

pub(crate) const SERIES_MAX_TERMS: usize = 20_000;
const SERIES_EPS: f64 = 1e-16;
// Parameter differences closer than this to an integer are treated through
// the perturbation path of the connection formulas.
const NEAR_INTEGER: f64 = 2.5e-3;
const PERTURB: f64 = 5e-3;

/// Plain Gauss series Σ (a)_n (b)_n / ((c)_n n!) z^n for complex z,
/// |z| < 1.
pub(crate) fn series_complex(
    a: f64,
    b: f64,
    c: f64,
    z: Complex64,
) -> Result<Complex64, SpecFunError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= z * ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)));
        sum += term;
        if term.norm() <= SERIES_EPS * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NonConvergence {
        routine: "hypergeometric series",
        estimate: sum.re,
        error: term.norm(),
    })
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    Ok(series_complex(a, b, c, Complex64::new(z, 0.0))?.re)
}

fn near_integer(x: f64) -> Option<f64> {
    let d = x - x.round();
    (d.abs() < NEAR_INTEGER).then_some(d)
}

// Symmetric perturbation of `a` by ±h, ±2h, ±3h, Richardson-combined so the
// bias is O(h^6). Used where a connection formula has a removable singularity.
fn perturbed<F>(a: f64, f: F) -> Result<f64, SpecFunError>
where
    F: Fn(f64) -> Result<f64, SpecFunError>,
{
    let avg = |h: f64| -> Result<f64, SpecFunError> { Ok(0.5 * (f(a + h)? + f(a - h)?)) };
    let a1 = avg(PERTURB)?;
    let a2 = avg(2.0 * PERTURB)?;
    let a3 = avg(3.0 * PERTURB)?;
    Ok(1.5 * a1 - 0.6 * a2 + 0.1 * a3)
}

/// ₂F₁(a, b; c; z) for real parameters, c not a non-positive integer and
/// z <= 1.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    if [a, b, c, z].iter().any(|v| v.is_nan()) {
        return Err(SpecFunError::domain("gauss_2f1", "NaN argument".into()));
    }
    if is_nonpositive_integer(c) {
        return Err(SpecFunError::domain(
            "gauss_2f1",
            format!("c = {c} is a non-positive integer"),
        ));
    }
    if z > 1.0 {
        return Err(SpecFunError::domain(
            "gauss_2f1",
            format!("z = {z} > 1 lies on the branch cut"),
        ));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return Ok(polynomial(a, b, c, z));
    }
    if z == 1.0 {
        let s = c - a - b;
        if s > 0.0 {
            return gamma_ratio(&[c, s], &[c - a, c - b]);
        }
        return Err(SpecFunError::domain(
            "gauss_2f1",
            format!("series diverges at z = 1 when c - a - b = {s} <= 0"),
        ));
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        if w <= 0.75 {
            // Pfaff: (1-z)^{-b} F(c-a, b; c; z/(z-1))
            return Ok((1.0 - z).powf(-b) * forward_unit(c - a, b, c, w)?);
        }
        return inverse_z(a, b, c, z);
    }
    forward_unit(a, b, c, z)
}

fn polynomial(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let n = if is_nonpositive_integer(a) && is_nonpositive_integer(b) {
        (-a).min(-b)
    } else if is_nonpositive_integer(a) {
        -a
    } else {
        -b
    } as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    sum
}

// 0 <= z < 1.
fn forward_unit(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    if z <= 0.75 {
        return series(a, b, c, z);
    }
    let s = c - a - b;
    match near_integer(s) {
        None => one_minus_z(a, b, c, z),
        Some(_) => perturbed(a, |ap| one_minus_z(ap, b, c, z)),
    }
}

// Connection to 1 - z, valid when c - a - b is not an integer.
fn one_minus_z(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    let s = c - a - b;
    let y = 1.0 - z;
    let t1 = gamma_ratio(&[c, s], &[c - a, c - b])?;
    let t2 = gamma_ratio(&[c, -s], &[a, b])?;
    let f1 = if t1 == 0.0 { 0.0 } else { series(a, b, 1.0 - s, y)? };
    let f2 = if t2 == 0.0 { 0.0 } else { series(c - a, c - b, 1.0 + s, y)? };
    Ok(t1 * f1 + t2 * y.powf(s) * f2)
}

// z < -3: connection to 1/z, valid when a - b is not an integer.
fn inverse_z(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    match near_integer(a - b) {
        None => inverse_z_regular(a, b, c, z),
        Some(_) => perturbed(a, |ap| inverse_z_regular(ap, b, c, z)),
    }
}

fn inverse_z_regular(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    let t1 = gamma_ratio(&[c, b - a], &[b, c - a])?;
    let t2 = gamma_ratio(&[c, a - b], &[a, c - b])?;
    let iz = 1.0 / z;
    let f1 = if t1 == 0.0 { 0.0 } else { gauss_2f1(a, a - c + 1.0, a - b + 1.0, iz)? };
    let f2 = if t2 == 0.0 { 0.0 } else { gauss_2f1(b, b - c + 1.0, b - a + 1.0, iz)? };
    Ok(t1 * (-z).powf(-a) * f1 + t2 * (-z).powf(-b) * f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_closed_forms() {
        // F(1,1;2;z) = -ln(1-z)/z
        for &z in &[-5.0, -0.5, 0.3, 0.9, 0.99] {
            let f = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
            let e = -(1.0 - z).ln() / z;
            assert!((f - e).abs() < 1e-10 * e.abs(), "z={z}: {f} vs {e}");
        }
        // F(a,b;b;z) = (1-z)^{-a}
        for &z in &[-20.0, -2.0, 0.5, 0.95] {
            let f = gauss_2f1(0.7, 1.3, 1.3, z).unwrap();
            let e = (1.0 - z).powf(-0.7);
            assert!((f - e).abs() < 1e-10 * e.abs(), "z={z}: {f} vs {e}");
        }
    }

    #[test]
    fn polynomial_case() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, c, z) = (1.5, 2.5, -3.0);
        let e = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!((gauss_2f1(-2.0, b, c, z).unwrap() - e).abs() < 1e-12);
    }

    #[test]
    fn unit_argument() {
        assert_eq!(gauss_2f1(0.5, -0.5, 0.5, 1.0).unwrap(), 0.0);
        assert!(gauss_2f1(1.0, 1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn domain() {
        assert!(gauss_2f1(1.0, 1.0, -1.0, 0.5).is_err());
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.5).is_err());
    }
}
