//! Coverage estimation over independent drops.

use super::drop::{evaluate_drop, DropResult, MitigationConfig, Scheme};
use super::rng::{mix, Stream};
use super::topology::{associate, sample_topology};
use crate::analytic::{distributed_mode_fraction, Intensities};
use crate::error::{invalid, Error, Result};
use crate::model::{derive_model, Mode, NetworkParams};
use crate::report::{CoverageReport, McDiagnostics, Method};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Fewest drops accepted for an estimate.
pub const MIN_DROPS: u64 = 100;

/// Redraws allowed for one drop before giving up on the parameters.
const MAX_RESAMPLE: u32 = 1000;

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub drops: u64,
    pub seed: u64,
    /// overrides [`default_region_radius`]
    pub region_radius: Option<f64>,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self { drops: 20_000, seed: 1, region_radius: None }
    }
}

/// Five mean nearest-neighbour distances of the sparser tier.
pub fn default_region_radius(p: &NetworkParams) -> f64 {
    let r = |l: f64| 5.0 / (PI * l).sqrt();
    r(p.lambda_c_raw).max(r(p.lambda_s_raw))
}

fn radius(p: &NetworkParams, s: &SimSettings) -> Result<f64> {
    let r = s.region_radius.unwrap_or_else(|| default_region_radius(p));
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("region_radius", format!("must be positive, got {r}")));
    }
    Ok(r)
}

/// Seed of the `attempt`-th topology of drop `index`.
pub fn drop_seed(master: u64, index: u64, attempt: u32) -> u64 {
    mix(&[master, index, attempt as u64])
}

/// Chance that an interfering SBS is marked IBFD.
fn mark_probability(p: &NetworkParams, m: &MitigationConfig) -> Result<f64> {
    if m.scheme == Scheme::DistributedModeSelection {
        let d = derive_model(p)?;
        distributed_mode_fraction(m.tau, &d, p, Intensities::Raw)
    } else {
        Ok(p.q)
    }
}

/// Samples, associates and evaluates drop `index`, redrawing empty regions.
pub fn simulate_drop(
    p: &NetworkParams,
    m: &MitigationConfig,
    radius: f64,
    master: u64,
    index: u64,
) -> Result<DropResult> {
    let q_mark = mark_probability(p, m)?;
    for attempt in 0..MAX_RESAMPLE {
        let t = match sample_topology(p, radius, drop_seed(master, index, attempt), q_mark) {
            Ok(t) => t,
            Err(Error::DegenerateTopology(_)) => continue,
            Err(e) => return Err(e),
        };
        let a = associate(&t, p);
        let mut r = evaluate_drop(&t, &a, p, m)?;
        r.drop = index;
        r.resampled = attempt;
        return Ok(r);
    }
    Err(Error::DegenerateTopology(format!(
        "drop {index}: region of radius {radius} empty in {MAX_RESAMPLE} attempts"
    )))
}

/// Runs all drops; results come back in drop order whatever the thread count.
pub fn simulate(p: &NetworkParams, m: &MitigationConfig, s: &SimSettings) -> Result<Vec<DropResult>> {
    p.validate()?;
    m.validate()?;
    if s.drops < MIN_DROPS {
        return Err(invalid("drops", format!("need at least {MIN_DROPS}, got {}", s.drops)));
    }
    let r = radius(p, s)?;
    (0..s.drops).into_par_iter().map(|i| simulate_drop(p, m, r, s.seed, i)).collect()
}

fn half_width(p: f64, n: f64) -> f64 {
    Z95 * (p * (1.0 - p) / n).sqrt()
}

/// Empirical coverage from drop records. Per-mode rate coverage is the
/// product of the access and backhaul marginals, mixed by the mode fraction.
pub fn summarize(p: &NetworkParams, results: &[DropResult]) -> Result<CoverageReport> {
    if results.is_empty() {
        return Err(invalid("drops", "no drop results"));
    }
    let n = results.len() as f64;
    let mut counts = [0u64; 4];
    let mut ibfd = 0u64;
    let mut resampled = 0u64;
    for r in results {
        for (c, hit) in counts.iter_mut().zip(r.indicators()) {
            *c += hit as u64;
        }
        ibfd += (r.mode == Mode::Ibfd) as u64;
        resampled += r.resampled as u64;
    }
    let [ai, ao, bi, bo] = counts.map(|c| c as f64 / n);
    let distributed = results[0].scheme == Scheme::DistributedModeSelection;
    let realized = ibfd as f64 / n;
    let q = if distributed { realized } else { p.q };
    let mut report = CoverageReport::compose(ai, ao, bi, bo, q, Method::Montecarlo, 0.0);

    // delta-method half-widths, treating the marginals as independent
    let var = |x: f64| x * (1.0 - x) / n;
    let var_i = bi * bi * var(ai) + ai * ai * var(bi);
    let var_o = bo * bo * var(ao) + ao * ao * var(bo);
    let var_u = q * q * var_i + (1.0 - q) * (1.0 - q) * var_o;
    let half_widths = [
        half_width(ai, n),
        half_width(ao, n),
        half_width(bi, n),
        half_width(bo, n),
        Z95 * var_i.sqrt(),
        Z95 * var_o.sqrt(),
        Z95 * var_u.sqrt(),
    ];
    report.error = half_widths[6];
    report.mc = Some(McDiagnostics {
        drops: results.len() as u64,
        resampled,
        half_widths,
        realized_q: distributed.then_some(realized),
    });
    Ok(report)
}

/// Monte Carlo coverage report; deterministic in (p, m, drops, seed).
pub fn estimate_coverage(p: &NetworkParams, m: &MitigationConfig, s: &SimSettings) -> Result<CoverageReport> {
    summarize(p, &simulate(p, m, s)?)
}

/// Fraction of typical users whose SBS picks IBFD under the ratio test,
/// with its 95% half-width. Only the links to the user are drawn.
pub fn estimate_mode_fraction(p: &NetworkParams, tau: f64, s: &SimSettings) -> Result<(f64, f64)> {
    p.validate()?;
    MitigationConfig { scheme: Scheme::DistributedModeSelection, tau, pilot_contamination: false }.validate()?;
    if s.drops < MIN_DROPS {
        return Err(invalid("drops", format!("need at least {MIN_DROPS}, got {}", s.drops)));
    }
    let r = radius(p, s)?;
    let picks: Vec<bool> = (0..s.drops)
        .into_par_iter()
        .map(|i| -> Result<bool> {
            for attempt in 0..MAX_RESAMPLE {
                let t = match sample_topology(p, r, drop_seed(s.seed, i, attempt), p.q) {
                    Ok(t) => t,
                    Err(Error::DegenerateTopology(_)) => continue,
                    Err(e) => return Err(e),
                };
                let sbs = (0..t.sbss.len())
                    .map(|k| {
                        let d2 = t.sbss[k].pos[0].powi(2) + t.sbss[k].pos[1].powi(2);
                        t.channels.ln_shadow(Stream::ShadowSbsUser, k, 0) - 0.5 * p.beta * d2.ln()
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                let cn = (0..t.cns.len()).map(|j| t.cn_user_gain(j, p.beta).ln()).fold(f64::NEG_INFINITY, f64::max);
                return Ok(sbs + p.p_s.ln() - cn - p.p_c.ln() >= tau.ln());
            }
            Err(Error::DegenerateTopology(format!("drop {i}: empty region")))
        })
        .collect::<Result<_>>()?;
    let n = picks.len() as f64;
    let f = picks.iter().filter(|&&b| b).count() as f64 / n;
    Ok((f, half_width(f, n)))
}
