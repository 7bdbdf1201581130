//! Adaptive Gauss-Kronrod quadrature and Wynn epsilon extrapolation.

use super::SpecFunError;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub subdivisions: usize,
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<const N: usize> Eq for Segment<N> {}
impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const N: usize> Ord for Segment<N> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Segment<N>, SpecFunError>
where
    F: FnMut(f64) -> Result<[f64; N], SpecFunError>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for i in 0..N {
        k[i] = fc[i] * WGK[7];
        g[i] = fc[i] * WG[3];
    }
    // error proxy uses component 0 only, plus an absolute-value envelope
    let mut abs0 = (fc[0] * WGK[7]).abs();
    let mut samples = [0.0f64; 15];
    samples[7] = fc[0];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        samples[j] = f1[0];
        samples[14 - j] = f2[0];
        for i in 0..N {
            k[i] += WGK[j] * (f1[i] + f2[i]);
            if j % 2 == 1 {
                g[i] += WG[j / 2] * (f1[i] + f2[i]);
            }
        }
        abs0 += WGK[j] * (f1[0].abs() + f2[0].abs());
    }
    let mean = k[0] * 0.5;
    let mut asc = WGK[7] * (fc[0] - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((samples[j] - mean).abs() + (samples[14 - j] - mean).abs());
    }
    let mut err = ((k[0] - g[0]) * h).abs();
    let resasc = asc * h.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let resabs = abs0 * h.abs();
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    for i in 0..N {
        k[i] *= h;
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(SpecFunError::domain(
            "integrate",
            format!("non-finite integrand on [{a}, {b}]"),
        ));
    }
    Ok(Segment { a, b, value: k, error: err })
}

/// Adaptive G7/K15 integration of a vector-valued integrand on [a, b].
/// Error control is on component 0; further components ride along on the
/// same mesh.
pub fn integrate_vec<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadSettings,
) -> Result<Estimate<N>, SpecFunError>
where
    F: FnMut(f64) -> Result<[f64; N], SpecFunError>,
{
    let (est, converged) = integrate_vec_best(f, a, b, settings)?;
    if !converged {
        return Err(SpecFunError::NonConvergence {
            routine: "integrate",
            estimate: est.value[0],
            error: est.error,
        });
    }
    Ok(est)
}

/// Like [`integrate_vec`] but hands back the best estimate when the budget
/// runs out, with a flag saying whether the tolerance was met.
pub fn integrate_vec_best<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    settings: &QuadSettings,
) -> Result<(Estimate<N>, bool), SpecFunError>
where
    F: FnMut(f64) -> Result<[f64; N], SpecFunError>,
{
    if a == b {
        return Ok((Estimate { value: [0.0; N], error: 0.0, subdivisions: 0 }, true));
    }
    let first = kronrod(&mut f, a, b)?;
    let mut total = first.value;
    let mut err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0;
    loop {
        let tol = settings.abs_tol.max(settings.rel_tol * total[0].abs());
        if err <= tol {
            return Ok((Estimate { value: total, error: err, subdivisions }, true));
        }
        if subdivisions >= settings.max_subdivisions {
            return Ok((Estimate { value: total, error: err, subdivisions }, false));
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            return Ok((Estimate { value: total, error: err, subdivisions }, false));
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        for i in 0..N {
            total[i] += left.value[i] + right.value[i] - worst.value[i];
        }
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // re-sum to stop drift from the running updates
            err = heap.iter().map(|s| s.error).sum();
            total = [0.0; N];
            for s in heap.iter() {
                for i in 0..N {
                    total[i] += s.value[i];
                }
            }
        }
    }
}

/// Scalar adaptive integration on [a, b].
pub fn integrate<F>(mut f: F, a: f64, b: f64, settings: &QuadSettings) -> Result<(f64, f64), SpecFunError>
where
    F: FnMut(f64) -> Result<f64, SpecFunError>,
{
    let est = integrate_vec(|x| Ok([f(x)?]), a, b, settings)?;
    Ok((est.value[0], est.error))
}

/// Wynn epsilon table for accelerating a sequence of partial sums.
#[derive(Debug, Default, Clone)]
pub struct Wynn {
    sums: Vec<f64>,
}

impl Wynn {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: f64) {
        self.sums.push(s);
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// Best extrapolated limit and a crude error estimate from the last two
    /// even-column diagonals.
    pub fn limit(&self) -> Option<(f64, f64)> {
        let n = self.sums.len();
        if n < 3 {
            return self.sums.last().map(|&s| (s, f64::INFINITY));
        }
        // Only the most recent window to keep the table small.
        let window = &self.sums[n.saturating_sub(40)..];
        let m = window.len();
        let mut prev = vec![0.0; m + 1];
        let mut cur: Vec<f64> = window.to_vec();
        let mut best = *window.last().unwrap();
        let mut best_err = (window[m - 1] - window[m - 2]).abs();
        let mut last_even: Option<f64> = None;
        let mut col = 0;
        while cur.len() > 1 {
            let mut next = Vec::with_capacity(cur.len() - 1);
            for i in 0..cur.len() - 1 {
                let d = cur[i + 1] - cur[i];
                let v = if d == 0.0 || !d.is_finite() { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
                next.push(v);
            }
            prev = cur;
            cur = next;
            col += 1;
            if col % 2 == 0 {
                let l = cur.len();
                if l >= 2 && cur[l - 1].is_finite() && cur[l - 2].is_finite() {
                    let e = (cur[l - 1] - cur[l - 2]).abs();
                    let e = match last_even {
                        Some(p) => e.max((cur[l - 1] - p).abs()),
                        None => e,
                    };
                    if e < best_err {
                        best_err = e;
                        best = cur[l - 1];
                    }
                    last_even = Some(cur[l - 1]);
                } else {
                    break;
                }
            }
        }
        Some((best, best_err))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, _) = integrate(|x| Ok(x * x * x - 2.0 * x), 0.0, 3.0, &QuadSettings::default()).unwrap();
        assert!((v - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let s = QuadSettings { rel_tol: 1e-10, abs_tol: 1e-12, ..Default::default() };
        let (v, _) = integrate(|x| Ok(1.0 / x.sqrt()), 0.0, 1.0, &s).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn vector_components_share_mesh() {
        let est = integrate_vec(|x| Ok([x.sin(), x.cos()]), 0.0, 1.0, &QuadSettings::default()).unwrap();
        assert!((est.value[0] - (1.0 - 1f64.cos())).abs() < 1e-12);
        assert!((est.value[1] - 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let s = QuadSettings { max_subdivisions: 2, ..Default::default() };
        match integrate(|x| Ok((1.0 / x).sin()), 1e-6, 1.0, &s) {
            Err(SpecFunError::NonConvergence { estimate, .. }) => assert!(estimate.is_finite()),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut w = Wynn::new();
        let mut s = 0.0;
        for n in 1..=20 {
            s += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
            w.push(s);
        }
        let (l, _) = w.limit().unwrap();
        assert!((l - 2f64.ln()).abs() < 1e-10, "{l}");
    }
}
