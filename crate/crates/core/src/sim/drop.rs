//! SINR evaluation of one drop for the typical user and its SBS.

use super::rng::Stream;
use super::topology::{dist2, Association, Topology};
use crate::error::{invalid, Result};
use crate::model::{backhaul_threshold, derive_model, DerivedModel, Mode, NetworkParams};
use serde::{Deserialize, Serialize};

/// Backhaul-interference mitigation applied in a drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    None,
    /// the user's SBS's CN is nulled towards the user
    InterferenceRejection,
    /// the user's SBS's CN lowers its IBFD stream powers
    BiaServingOnly,
    /// every CN lowers its IBFD stream powers
    BiaAllCns,
    /// SBSs pick their mode by a received-power ratio test
    DistributedModeSelection,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::None => "none",
            Scheme::InterferenceRejection => "interference-rejection",
            Scheme::BiaServingOnly => "bia-serving-only",
            Scheme::BiaAllCns => "bia-all-cns",
            Scheme::DistributedModeSelection => "distributed-mode-selection",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            Scheme::None,
            Scheme::InterferenceRejection,
            Scheme::BiaServingOnly,
            Scheme::BiaAllCns,
            Scheme::DistributedModeSelection,
        ]
        .into_iter()
        .find(|x| x.as_str() == s)
        .ok_or_else(|| format!("unknown scheme '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MitigationConfig {
    pub scheme: Scheme,
    /// received-power ratio threshold of distributed mode selection
    pub tau: f64,
    pub pilot_contamination: bool,
}

impl Default for MitigationConfig {
    fn default() -> Self {
        Self { scheme: Scheme::None, tau: 1.0, pilot_contamination: false }
    }
}

impl MitigationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scheme == Scheme::DistributedModeSelection && !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid("tau", format!("must be positive, got {}", self.tau)));
        }
        Ok(())
    }
}

/// Everything measured in one drop. SINRs are linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DropResult {
    pub drop: u64,
    /// topologies redrawn before this one was usable
    pub resampled: u32,
    pub scheme: Scheme,
    /// mode of the user's SBS
    pub mode: Mode,
    pub sinr_access_i: f64,
    pub sinr_access_o: f64,
    pub sir_backhaul_i: f64,
    pub sir_backhaul_o: f64,
    pub threshold_backhaul_i: f64,
    pub threshold_backhaul_o: f64,
    /// user to serving SBS
    pub r_access: f64,
    /// serving SBS to its CN
    pub r_backhaul: f64,
    /// SBSs associated with the serving CN
    pub load: u32,
    /// served SBSs of that CN over its load
    pub alpha: f64,
    /// power the serving CN radiates towards the user, after mitigation
    pub serving_cn_power: f64,
    pub covered_access_i: bool,
    pub covered_access_o: bool,
    pub covered_backhaul_i: bool,
    pub covered_backhaul_o: bool,
}

impl DropResult {
    /// Four coverage indicators in report order.
    pub fn indicators(&self) -> [bool; 4] {
        [self.covered_access_i, self.covered_access_o, self.covered_backhaul_i, self.covered_backhaul_o]
    }
}

/// Context shared by the per-SBS interference sums.
struct Eval<'a> {
    t: &'a Topology,
    a: &'a Association,
    p: &'a NetworkParams,
    d: DerivedModel,
    /// mode of every SBS after any override of the user's SBS
    modes: Vec<Mode>,
}

impl Eval<'_> {
    /// SBS-to-SBS interference at receiver `i` from served IBFD SBSs.
    fn sbs_interference(&self, i: usize) -> f64 {
        (0..self.t.sbss.len())
            .filter(|&k| k != i && self.a.served[k] && self.modes[k] == Mode::Ibfd)
            .map(|k| self.p.p_s * self.t.sbs_sbs_gain(k, i, self.p.beta))
            .sum()
    }

    /// CN interference at SBS `i` from every CN but its own, at `powers`.
    fn cn_interference(&self, i: usize, powers: &[f64]) -> f64 {
        let own = self.a.sbs_cn[i];
        (0..self.t.cns.len())
            .filter(|&j| j != own)
            .map(|j| powers[j] * self.t.cn_sbs_gain(j, i, self.p.beta))
            .sum()
    }

    /// Interference through pilot reuse at SBS `i`: each other CN shares
    /// the pilot with probability m/S and leaks with gain (M-m+1)/m.
    fn pilot_interference(&self, i: usize) -> f64 {
        let own = self.a.sbs_cn[i];
        let s = self.p.max_streams;
        let mut total = 0.0;
        for j in 0..self.t.cns.len() {
            let m = self.a.loads[j].min(s);
            if j == own || m == 0 {
                continue;
            }
            if self.t.uniform(Stream::PilotShare, j, i) < m as f64 / s as f64 {
                let gain = (self.p.antennas as f64 - m as f64 + 1.0) / m as f64;
                total += self.p.p_c * gain * self.t.cn_sbs_gain(j, i, self.p.beta);
            }
        }
        total
    }

    /// Full-power IBFD backhaul interference at SBS `i`.
    fn backhaul_interference(&self, i: usize, pilots: bool) -> f64 {
        let full = vec![self.p.p_c; self.t.cns.len()];
        let mut v = self.sbs_interference(i) + self.cn_interference(i, &full) + self.d.i_si;
        if pilots {
            v += self.pilot_interference(i);
        }
        v
    }

    /// Single-pass reduced power of CN `j`: each IBFD stream gets just enough
    /// power for its SBS to meet the IBFD threshold under full-power
    /// interference, capped at P_c; the CN radiates the mean stream power.
    /// Returns (CN power, per-SBS stream powers).
    fn bia_power(&self, j: usize, members: &[usize], pilots: bool) -> Result<(f64, Vec<(usize, f64)>)> {
        let streams: Vec<usize> = members.iter().copied().filter(|&k| self.a.served[k]).collect();
        if streams.is_empty() {
            return Ok((self.p.p_c, Vec::new()));
        }
        let gamma_b = backhaul_threshold(self.a.loads[j], self.p, Mode::Ibfd)?;
        let mut out = Vec::with_capacity(streams.len());
        for &k in &streams {
            let power = if self.modes[k] == Mode::Ibfd {
                let need = gamma_b * self.backhaul_interference(k, pilots) * (1.0 + 1e-9) / self.a.cn_gain[k];
                need.min(self.p.p_c)
            } else {
                self.p.p_c
            };
            out.push((k, power));
        }
        let mean = out.iter().map(|x| x.1).sum::<f64>() / out.len() as f64;
        Ok((mean, out))
    }
}

/// Evaluates access and backhaul SINRs of the typical user's SBS in both
/// modes under the given mitigation.
pub fn evaluate_drop(
    t: &Topology,
    a: &Association,
    p: &NetworkParams,
    m: &MitigationConfig,
) -> Result<DropResult> {
    m.validate()?;
    let d = derive_model(p)?;
    let beta = p.beta;
    let i0 = a.serving_sbs;
    let j0 = a.sbs_cn[i0];
    let n_cn = t.cns.len();
    let cn_user: Vec<f64> = (0..n_cn).map(|j| t.cn_user_gain(j, beta)).collect();

    let mut modes: Vec<Mode> = t.sbss.iter().map(|s| s.mode).collect();
    if m.scheme == Scheme::DistributedModeSelection {
        let strongest_cn = cn_user.iter().cloned().fold(0.0, f64::max);
        let ratio = p.p_s * a.user_gain[i0] / (p.p_c * strongest_cn);
        modes[i0] = if ratio >= m.tau { Mode::Ibfd } else { Mode::Obfd };
    }
    let mode = modes[i0];
    let mut ev = Eval { t, a, p, d, modes };

    // CN powers; BIA evaluates the user's SBS as an IBFD receiver
    let mut cn_power = vec![p.p_c; n_cn];
    let mut own_stream = p.p_c;
    if matches!(m.scheme, Scheme::BiaServingOnly | Scheme::BiaAllCns) {
        ev.modes[i0] = Mode::Ibfd;
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_cn];
        for (k, &j) in a.sbs_cn.iter().enumerate() {
            members[j].push(k);
        }
        let cns: Vec<usize> = if m.scheme == Scheme::BiaAllCns { (0..n_cn).collect() } else { vec![j0] };
        for j in cns {
            let (power, streams) = ev.bia_power(j, &members[j], m.pilot_contamination)?;
            cn_power[j] = power;
            if let Some(&(_, s)) = streams.iter().find(|x| x.0 == i0) {
                own_stream = s;
            }
        }
        ev.modes[i0] = mode;
    }

    // access link
    let signal = p.p_s * a.user_gain[i0] * t.user_fade(i0);
    let mut sbs_i = 0.0;
    let mut sbs_o = 0.0;
    for k in 0..t.sbss.len() {
        if k == i0 || !a.served[k] {
            continue;
        }
        let v = p.p_s * a.user_gain[k] * t.user_fade(k);
        match ev.modes[k] {
            Mode::Ibfd => sbs_i += v,
            Mode::Obfd => sbs_o += v,
        }
    }
    let cn_i: f64 = (0..n_cn)
        .filter(|&j| !(m.scheme == Scheme::InterferenceRejection && j == j0))
        .map(|j| cn_power[j] * cn_user[j])
        .sum();
    let sinr_access_i = signal / (sbs_i + cn_i + p.noise_power);
    let sinr_access_o = signal / (sbs_o + p.noise_power);

    // backhaul link of the user's SBS
    let load = a.loads[j0];
    let served_count = a.sbs_cn.iter().zip(&a.served).filter(|(&j, &s)| j == j0 && s).count();
    let alpha = served_count as f64 / load as f64;
    let threshold_backhaul_i = backhaul_threshold(load, p, Mode::Ibfd)?;
    let threshold_backhaul_o = backhaul_threshold(load, p, Mode::Obfd)?;
    let shared = ev.sbs_interference(i0)
        + ev.cn_interference(i0, &cn_power)
        + if m.pilot_contamination { ev.pilot_interference(i0) } else { 0.0 };
    let sir_backhaul_i = own_stream * a.cn_gain[i0] / (shared + ev.d.i_si);
    let sir_backhaul_o = p.p_c * a.cn_gain[i0] / shared;

    Ok(DropResult {
        drop: 0,
        resampled: 0,
        scheme: m.scheme,
        mode,
        sinr_access_i,
        sinr_access_o,
        sir_backhaul_i,
        sir_backhaul_o,
        threshold_backhaul_i,
        threshold_backhaul_o,
        r_access: dist2(t.sbss[i0].pos, [0.0, 0.0]).sqrt(),
        r_backhaul: dist2(t.sbss[i0].pos, t.cns[j0]).sqrt(),
        load,
        alpha,
        serving_cn_power: if m.scheme == Scheme::InterferenceRejection { 0.0 } else { cn_power[j0] },
        covered_access_i: sinr_access_i > ev.d.gamma_a_i,
        covered_access_o: sinr_access_o > ev.d.gamma_a_o,
        covered_backhaul_i: sir_backhaul_i > threshold_backhaul_i,
        covered_backhaul_o: sir_backhaul_o > threshold_backhaul_o,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::topology::{associate, sample_topology, Sbs};

    // one SBS at (1, 0) serving the user, one CN at (1, 1): unit distances
    fn unit_pair() -> (NetworkParams, Topology) {
        let p = NetworkParams { shadow_mu: 0.0, shadow_sigma: 0.0, k_user: 1e12, k_sbs: 1e12, ..Default::default() };
        let mut t = sample_topology(&p, 5.0, 1, 1.0).unwrap();
        t.cns = vec![[1.0, 1.0]];
        t.sbss = vec![Sbs { pos: [1.0, 0.0], mode: Mode::Ibfd }];
        (p, t)
    }

    #[test]
    fn one_sbs_one_cn_access_sinr() {
        let (p, t) = unit_pair();
        let a = associate(&t, &p);
        let r = evaluate_drop(&t, &a, &p, &MitigationConfig::default()).unwrap();
        // distance from the CN to the user is sqrt(2)
        let want = p.p_s / (p.p_c * 2f64.sqrt().powf(-p.beta));
        assert!((r.sinr_access_i - want).abs() < 1e-5 * want, "{}", r.sinr_access_i);
        assert!(r.sinr_access_o.is_infinite());
        assert_eq!((r.load, r.alpha), (1, 1.0));

        let ir = MitigationConfig { scheme: Scheme::InterferenceRejection, ..Default::default() };
        let r = evaluate_drop(&t, &a, &p, &ir).unwrap();
        assert!(r.sinr_access_i.is_infinite());
        assert_eq!(r.serving_cn_power, 0.0);
    }

    #[test]
    fn unit_distance_access_sinr_is_power_ratio() {
        let (p, mut t) = unit_pair();
        t.cns = vec![[-1.0, 0.0]];
        let a = associate(&t, &p);
        let r = evaluate_drop(&t, &a, &p, &MitigationConfig::default()).unwrap();
        // fading with a huge shape is one to about 1e-6
        assert!((r.sinr_access_i - 0.2).abs() < 1e-5, "{}", r.sinr_access_i);
    }

    #[test]
    fn mitigation_never_hurts_the_drop() {
        let p = NetworkParams::default();
        for seed in 0..30 {
            let t = match sample_topology(&p, 0.9, seed, p.q) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let a = associate(&t, &p);
            let none = evaluate_drop(&t, &a, &p, &MitigationConfig::default()).unwrap();
            let with = |s| evaluate_drop(&t, &a, &p, &MitigationConfig { scheme: s, ..Default::default() }).unwrap();
            let ir = with(Scheme::InterferenceRejection);
            let bia = with(Scheme::BiaServingOnly);
            let all = with(Scheme::BiaAllCns);
            assert!(ir.sinr_access_i >= bia.sinr_access_i);
            assert!(bia.sinr_access_i >= none.sinr_access_i);
            assert!(all.sinr_access_i >= none.sinr_access_i);
            for r in [&bia, &all] {
                assert!(r.serving_cn_power <= p.p_c);
                if none.covered_backhaul_i {
                    assert!(r.covered_backhaul_i, "seed {seed}");
                }
            }
            assert_eq!(ir.sinr_access_o, none.sinr_access_o);
            assert_eq!(ir.sir_backhaul_i, none.sir_backhaul_i);
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in ["none", "interference-rejection", "bia-serving-only", "bia-all-cns", "distributed-mode-selection"] {
            assert_eq!(s.parse::<Scheme>().unwrap().as_str(), s);
        }
        assert!("bia".parse::<Scheme>().is_err());
        let bad = MitigationConfig { scheme: Scheme::DistributedModeSelection, tau: 0.0, pilot_contamination: false };
        assert!(bad.validate().is_err());
    }
}
