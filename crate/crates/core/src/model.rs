//! Network parameters and the deterministic quantities derived from them.

use crate::error::{invalid, Error, Result};
use crate::specfun::gamma::ln_gamma_signed;
use serde::{Deserialize, Serialize};

/// Shape of the gamma approximation to the Voronoi cell area.
pub const LOAD_SHAPE: f64 = 3.575;

/// Duplexing mode of a small cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// in-band: access and backhaul share one band
    Ibfd,
    /// out-of-band: access and backhaul on orthogonal halves of the spectrum
    Obfd,
}

/// Raw deployment and channel parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// CN intensity before shadowing displacement
    pub lambda_c_raw: f64,
    /// SBS intensity before shadowing displacement
    pub lambda_s_raw: f64,
    /// user intensity; carried for completeness, no formula consumes it
    pub lambda_u_raw: Option<f64>,
    pub p_c: f64,
    pub p_s: f64,
    pub beta: f64,
    /// self-interference cancellation in dB
    pub xi_db: f64,
    /// CN antennas
    pub antennas: u32,
    /// maximum backhaul streams per CN
    pub max_streams: u32,
    /// target rate in bit/s/Hz
    pub rate_threshold: f64,
    /// fraction of SBSs in IBFD mode
    pub q: f64,
    /// log-normal shadowing (natural-log scale)
    pub shadow_mu: f64,
    pub shadow_sigma: f64,
    /// Gamma fading shapes; scale is 1/k so the mean power is one
    pub k_user: f64,
    pub k_sbs: f64,
    pub noise_power: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        Self {
            lambda_c_raw: 10.0,
            lambda_s_raw: 50.0,
            lambda_u_raw: None,
            p_c: 10.0,
            p_s: 2.0,
            beta: 4.0,
            xi_db: 120.0,
            antennas: 500,
            max_streams: 50,
            rate_threshold: 1.0,
            q: 0.5,
            shadow_mu: 1.0,
            shadow_sigma: 2.0,
            k_user: 2.0,
            k_sbs: 0.5,
            noise_power: 0.0,
        }
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(field, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        positive("lambda_c_raw", self.lambda_c_raw)?;
        positive("lambda_s_raw", self.lambda_s_raw)?;
        if let Some(l) = self.lambda_u_raw {
            positive("lambda_u_raw", l)?;
        }
        positive("p_c", self.p_c)?;
        positive("p_s", self.p_s)?;
        if !(self.beta > 2.0) || !self.beta.is_finite() {
            return Err(invalid("beta", format!("must exceed 2, got {}", self.beta)));
        }
        if !self.xi_db.is_finite() {
            return Err(invalid("xi_db", "must be finite"));
        }
        if self.antennas < 1 {
            return Err(invalid("antennas", "must be at least 1"));
        }
        if self.max_streams < 1 {
            return Err(invalid("max_streams", "must be at least 1"));
        }
        if !(self.rate_threshold >= 0.0) || !self.rate_threshold.is_finite() {
            return Err(invalid("rate_threshold", "must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(invalid("q", format!("must lie in [0, 1], got {}", self.q)));
        }
        if !self.shadow_mu.is_finite() {
            return Err(invalid("shadow_mu", "must be finite"));
        }
        if !(self.shadow_sigma >= 0.0) || !self.shadow_sigma.is_finite() {
            return Err(invalid("shadow_sigma", "must be non-negative"));
        }
        positive("k_user", self.k_user)?;
        positive("k_sbs", self.k_sbs)?;
        if !(self.noise_power >= 0.0) || !self.noise_power.is_finite() {
            return Err(invalid("noise_power", "must be non-negative"));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        2.0 / self.beta
    }
}

/// E[S^{2/β}] for log-normal S = e^{N(μ, σ²)}.
pub fn lognormal_fractional_moment(mu: f64, sigma: f64, beta: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(invalid("beta", format!("must exceed 2, got {beta}")));
    }
    if !(sigma >= 0.0) {
        return Err(invalid("shadow_sigma", format!("must be non-negative, got {sigma}")));
    }
    let d = 2.0 / beta;
    Ok((d * mu + 0.5 * (d * sigma).powi(2)).exp())
}

/// Quantities derived once from [`NetworkParams`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedModel {
    pub delta: f64,
    pub lambda_c: f64,
    pub lambda_s: f64,
    pub lambda_bar_si: f64,
    pub lambda_bar_so: f64,
    pub mean_load: f64,
    /// residual self-interference P_s / ξ
    pub i_si: f64,
    pub gamma_a_i: f64,
    pub gamma_a_o: f64,
    /// min(λ_s/λ_c, S)·λ_c, the intensity of backhaul-served SBSs
    pub served_intensity: f64,
}

impl DerivedModel {
    pub fn lambda_bar(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Ibfd => self.lambda_bar_si,
            Mode::Obfd => self.lambda_bar_so,
        }
    }

    pub fn gamma_a(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Ibfd => self.gamma_a_i,
            Mode::Obfd => self.gamma_a_o,
        }
    }
}

pub fn derive_model(p: &NetworkParams) -> Result<DerivedModel> {
    p.validate()?;
    let m = lognormal_fractional_moment(p.shadow_mu, p.shadow_sigma, p.beta)?;
    let lambda_c = p.lambda_c_raw * m;
    let lambda_s = p.lambda_s_raw * m;
    let mean_load = lambda_s / lambda_c;
    let served = mean_load.min(p.max_streams as f64) * lambda_c;
    Ok(DerivedModel {
        delta: p.delta(),
        lambda_c,
        lambda_s,
        lambda_bar_si: p.q * served,
        lambda_bar_so: (1.0 - p.q) * served,
        mean_load,
        i_si: p.p_s / 10f64.powf(p.xi_db / 10.0),
        gamma_a_i: 2f64.powf(p.rate_threshold) - 1.0,
        gamma_a_o: 2f64.powf(2.0 * p.rate_threshold) - 1.0,
        served_intensity: served,
    })
}

/// P(N_s = n) under the gamma cell-area approximation.
pub fn load_pmf(mean_load: f64, n: u32) -> Result<f64> {
    positive("mean_load", mean_load)?;
    let b = LOAD_SHAPE;
    let nf = n as f64;
    let ln = b * b.ln() + ln_gamma_signed(nf + b).0 + nf * mean_load.ln()
        - ln_gamma_signed(nf + 1.0).0
        - ln_gamma_signed(b).0
        - (nf + b) * (b + mean_load).ln();
    Ok(ln.exp())
}

/// Truncated load PMF.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadDistribution {
    pub mean_load: f64,
    /// P(N_s = n) for n = 0..=n_max
    pub pmf: Vec<f64>,
}

impl LoadDistribution {
    pub const TAIL_MASS: f64 = 1e-6;

    pub fn new(mean_load: f64) -> Result<Self> {
        positive("mean_load", mean_load)?;
        let cap = (64.0 * mean_load).ceil().max(1.0) as u32;
        let mut pmf = Vec::new();
        let mut total = 0.0;
        for n in 0..=cap {
            let v = load_pmf(mean_load, n)?;
            pmf.push(v);
            total += v;
            if total >= 1.0 - Self::TAIL_MASS {
                break;
            }
        }
        Ok(Self { mean_load, pmf })
    }

    pub fn n_max(&self) -> u32 {
        (self.pmf.len() - 1) as u32
    }

    /// (n, P(N_s = n | N_s >= 1)) for n = 1..=n_max.
    pub fn conditioned_nonempty(&self) -> Vec<(u32, f64)> {
        let mass: f64 = self.pmf[1..].iter().sum();
        self.pmf
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &p)| (n as u32, p / mass))
            .collect()
    }
}

/// Probability that an SBS whose CN serves `n_s` SBSs gets a stream.
pub fn backhaul_access_prob(n_s: u32, s_max: u32) -> Result<f64> {
    if n_s == 0 {
        return Err(invalid("n_s", "load must be at least 1"));
    }
    if s_max == 0 {
        return Err(invalid("max_streams", "must be at least 1"));
    }
    Ok((s_max as f64 / n_s as f64).min(1.0))
}

/// Backhaul SIR threshold for a CN serving `n_s` SBSs.
pub fn backhaul_threshold(n_s: u32, p: &NetworkParams, mode: Mode) -> Result<f64> {
    let alpha = backhaul_access_prob(n_s, p.max_streams)?;
    let m = n_s.min(p.max_streams);
    if p.antennas <= m {
        return Err(Error::Assumption(format!(
            "massive-MIMO regime needs M > min(N_s, S): M = {}, min(N_s, S) = {m}",
            p.antennas
        )));
    }
    let factor = m as f64 / (p.antennas - m + 1) as f64;
    let rate = match mode {
        Mode::Ibfd => p.rate_threshold,
        Mode::Obfd => 2.0 * p.rate_threshold,
    };
    Ok(factor * (2f64.powf(rate / alpha) - 1.0))
}

/// Intensity of CNs that reuse a given pilot.
pub fn pilot_contamination_intensity(d: &DerivedModel, load: &LoadDistribution, s_max: u32) -> f64 {
    let s = s_max as f64;
    let idle: f64 = load
        .pmf
        .iter()
        .enumerate()
        .take(s_max as usize + 1)
        .map(|(n, &p)| (1.0 - n as f64 / s) * p)
        .sum();
    // mass truncated from the PMF belongs to loads above S, which always reuse
    d.lambda_c * (1.0 - idle).clamp(0.0, 1.0)
}
