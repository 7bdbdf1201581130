//! Poisson drops in a disc around the typical user, and average-power
//! association.

use super::rng::{mix, Channels, Stream};
use crate::error::{Error, Result};
use crate::model::{Mode, NetworkParams};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use std::f64::consts::PI;

/// A small cell with its duplexing mark.
#[derive(Debug, Clone, PartialEq)]
pub struct Sbs {
    pub pos: [f64; 2],
    pub mode: Mode,
}

/// One realisation of the network; the typical user sits at the origin.
/// Channel gains are drawn lazily from `seed`.
#[derive(Debug, Clone)]
pub struct Topology {
    pub radius: f64,
    pub seed: u64,
    pub cns: Vec<[f64; 2]>,
    pub sbss: Vec<Sbs>,
    pub(crate) channels: Channels,
}

/// Result of strongest-average-power association.
#[derive(Debug, Clone, PartialEq)]
pub struct Association {
    /// SBS serving the typical user
    pub serving_sbs: usize,
    /// serving CN of every SBS
    pub sbs_cn: Vec<usize>,
    /// number of SBSs associated with each CN
    pub loads: Vec<u32>,
    /// whether each SBS got one of its CN's streams
    pub served: Vec<bool>,
    /// S·r^-β from every SBS to the user
    pub user_gain: Vec<f64>,
    /// S·r^-β from each SBS's serving CN to it
    pub cn_gain: Vec<f64>,
}

pub(crate) fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}

fn uniform_in_disc<R: Rng>(rng: &mut R, radius: f64) -> [f64; 2] {
    let r = radius * rng.random::<f64>().sqrt();
    let th = 2.0 * PI * rng.random::<f64>();
    [r * th.cos(), r * th.sin()]
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> Result<usize> {
    let d = Poisson::new(mean)
        .map_err(|e| crate::error::invalid("region_radius", format!("bad Poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as usize)
}

/// Draws CN and SBS positions and modes. `ibfd_prob` is the chance an SBS is
/// marked IBFD.
pub fn sample_topology(p: &NetworkParams, radius: f64, seed: u64, ibfd_prob: f64) -> Result<Topology> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(crate::error::invalid("region_radius", format!("must be positive, got {radius}")));
    }
    let area = PI * radius * radius;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(&[seed, Stream::Points as u64]));
    let n_c = poisson_count(&mut rng, p.lambda_c_raw * area)?;
    let n_s = poisson_count(&mut rng, p.lambda_s_raw * area)?;
    let channels = Channels::new(seed, p.shadow_mu, p.shadow_sigma, p.k_user, p.k_sbs);
    let cns = (0..n_c).map(|_| uniform_in_disc(&mut rng, radius)).collect();
    let sbss = (0..n_s)
        .map(|i| {
            let pos = uniform_in_disc(&mut rng, radius);
            let mode = if channels.uniform(Stream::ModeMark, i, 0) < ibfd_prob { Mode::Ibfd } else { Mode::Obfd };
            Sbs { pos, mode }
        })
        .collect();
    let t = Topology { radius, seed, cns, sbss, channels };
    if t.sbss.is_empty() || t.cns.is_empty() {
        return Err(Error::DegenerateTopology(format!(
            "{} SBSs and {} CNs in the region",
            t.sbss.len(),
            t.cns.len()
        )));
    }
    Ok(t)
}

/// ln(S r^-β) for a link with shadowing draw `ln_s` over squared distance `d2`.
fn ln_gain(ln_s: f64, d2: f64, beta: f64) -> f64 {
    ln_s - 0.5 * beta * d2.ln()
}

impl Topology {
    /// Linear S·r^-β from CN `j` to SBS `k`.
    pub(crate) fn cn_sbs_gain(&self, j: usize, k: usize, beta: f64) -> f64 {
        let d2 = dist2(self.cns[j], self.sbss[k].pos);
        ln_gain(self.channels.ln_shadow(Stream::ShadowCnSbs, j, k), d2, beta).exp()
    }

    /// Linear S·r^-β from CN `j` to the user.
    pub(crate) fn cn_user_gain(&self, j: usize, beta: f64) -> f64 {
        let d2 = dist2(self.cns[j], [0.0, 0.0]);
        ln_gain(self.channels.ln_shadow(Stream::ShadowCnUser, j, 0), d2, beta).exp()
    }

    /// Linear S·h·r^-β from SBS `k` to SBS `i`, fading included.
    pub(crate) fn sbs_sbs_gain(&self, k: usize, i: usize, beta: f64) -> f64 {
        let d2 = dist2(self.sbss[k].pos, self.sbss[i].pos);
        let s = ln_gain(self.channels.ln_shadow(Stream::ShadowSbsSbs, k, i), d2, beta).exp();
        s * self.channels.fade(Stream::FadeSbsSbs, k, i)
    }

    /// Fading on the link from SBS `k` to the user.
    pub(crate) fn user_fade(&self, k: usize) -> f64 {
        self.channels.fade(Stream::FadeSbsUser, k, 0)
    }

    pub(crate) fn uniform(&self, stream: Stream, i: usize, j: usize) -> f64 {
        self.channels.uniform(stream, i, j)
    }
}

/// Strongest-average-power association for the user and every SBS, then
/// the per-CN stream allocation.
pub fn associate(t: &Topology, p: &NetworkParams) -> Association {
    let beta = p.beta;
    let mut sbs_cn = Vec::with_capacity(t.sbss.len());
    let mut cn_gain = Vec::with_capacity(t.sbss.len());
    for (k, s) in t.sbss.iter().enumerate() {
        let mut best = (0, f64::NEG_INFINITY);
        for (j, &c) in t.cns.iter().enumerate() {
            let g = ln_gain(t.channels.ln_shadow(Stream::ShadowCnSbs, j, k), dist2(c, s.pos), beta);
            if g > best.1 {
                best = (j, g);
            }
        }
        sbs_cn.push(best.0);
        cn_gain.push(best.1.exp());
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); t.cns.len()];
    for (k, &j) in sbs_cn.iter().enumerate() {
        members[j].push(k);
    }
    let loads = members.iter().map(|m| m.len() as u32).collect();
    let s_max = p.max_streams as usize;
    let mut served = vec![true; t.sbss.len()];
    for (j, m) in members.iter().enumerate() {
        if m.len() > s_max {
            for &k in m {
                served[k] = false;
            }
            let mut rng = t.channels.rng(Stream::ServedSubset, j, 0);
            for idx in sample(&mut rng, m.len(), s_max) {
                served[m[idx]] = true;
            }
        }
    }

    let user_gain: Vec<f64> = t
        .sbss
        .iter()
        .enumerate()
        .map(|(k, s)| ln_gain(t.channels.ln_shadow(Stream::ShadowSbsUser, k, 0), dist2(s.pos, [0.0, 0.0]), beta).exp())
        .collect();
    let serving_sbs = user_gain
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (k, &g)| if g > b.1 { (k, g) } else { b })
        .0;

    Association { serving_sbs, sbs_cn, loads, served, user_gain, cn_gain }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain() -> NetworkParams {
        NetworkParams { shadow_sigma: 0.0, shadow_mu: 0.0, ..Default::default() }
    }

    #[test]
    fn same_seed_same_topology() {
        let p = NetworkParams::default();
        let a = sample_topology(&p, 1.0, 11, 0.5).unwrap();
        let b = sample_topology(&p, 1.0, 11, 0.5).unwrap();
        assert_eq!(a.cns, b.cns);
        assert_eq!(a.sbss, b.sbss);
        assert_eq!(associate(&a, &p), associate(&b, &p));
        let c = sample_topology(&p, 1.0, 12, 0.5).unwrap();
        assert_ne!(a.cns, c.cns);
    }

    #[test]
    fn without_shadowing_the_nearest_node_wins() {
        let p = plain();
        for seed in 0..20 {
            let t = match sample_topology(&p, 0.8, seed, 0.5) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let a = associate(&t, &p);
            let nearest = (0..t.sbss.len())
                .min_by(|&x, &y| dist2(t.sbss[x].pos, [0.0; 2]).total_cmp(&dist2(t.sbss[y].pos, [0.0; 2])))
                .unwrap();
            assert_eq!(a.serving_sbs, nearest);
            for (k, s) in t.sbss.iter().enumerate() {
                let nc = (0..t.cns.len())
                    .min_by(|&x, &y| dist2(t.cns[x], s.pos).total_cmp(&dist2(t.cns[y], s.pos)))
                    .unwrap();
                assert_eq!(a.sbs_cn[k], nc);
            }
        }
    }

    #[test]
    fn single_cn_takes_every_sbs_and_caps_streams() {
        let p = NetworkParams { max_streams: 7, ..Default::default() };
        let mut t = sample_topology(&p, 1.0, 3, 0.5).unwrap();
        t.cns.truncate(1);
        let a = associate(&t, &p);
        assert!(a.sbs_cn.iter().all(|&j| j == 0));
        assert_eq!(a.loads, vec![t.sbss.len() as u32]);
        assert_eq!(a.served.iter().filter(|&&s| s).count(), 7.min(t.sbss.len()));
    }

    #[test]
    fn empty_region_is_degenerate() {
        let p = NetworkParams { lambda_c_raw: 1e-9, ..Default::default() };
        assert!(matches!(sample_topology(&p, 0.5, 1, 0.5), Err(Error::DegenerateTopology(_))));
    }

    #[test]
    fn mean_counts_match_intensity() {
        // unit-area region
        let p = NetworkParams::default();
        let r = (1.0 / PI).sqrt();
        let n = 2000;
        let total: usize = (0..n).map(|s| sample_topology(&p, r, s, 0.5).unwrap().sbss.len()).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 50.0).abs() < 0.5, "{mean}");
    }
}
