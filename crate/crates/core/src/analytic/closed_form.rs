//! Rayleigh-fading closed forms under perfect backhaul, and the IBFD
//! fractions derived from them.

use crate::error::{Error, Result};
use crate::model::{DerivedModel, Mode, NetworkParams};
use crate::specfun::{gamma, gauss_2f1};
use serde::{Deserialize, Serialize};

/// Exact hypergeometric form or its linearisation ₂F₁ - 1 ≈ 2γ/(β-2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Exact,
    Approx,
}

fn require_rayleigh(p: &NetworkParams) -> Result<()> {
    if p.k_user != 1.0 {
        return Err(Error::Assumption(format!(
            "closed forms need Rayleigh access fading (k_user = 1), got k_user = {}",
            p.k_user
        )));
    }
    Ok(())
}

/// ₂F₁(1, -δ; 1-δ; -γ) - 1.
pub fn rayleigh_kernel(gamma_th: f64, delta: f64) -> Result<f64> {
    Ok(gauss_2f1(1.0, -delta, 1.0 - delta, -gamma_th)? - 1.0)
}

/// CN interference constant A = Γ(1-δ) λ_c (γ P_c / (P_s θ))^δ; independent of q.
pub fn cn_constant(d: &DerivedModel, p: &NetworkParams) -> Result<f64> {
    let delta = p.delta();
    let theta = 1.0 / p.k_user;
    Ok(gamma(1.0 - delta)? * d.lambda_c * (d.gamma_a_i * p.p_c / (p.p_s * theta)).powf(delta))
}

/// Access coverage under Rayleigh fading, no noise.
pub fn access_coverage_rayleigh(d: &DerivedModel, p: &NetworkParams, mode: Mode) -> Result<f64> {
    require_rayleigh(p)?;
    let g = d.gamma_a(mode);
    let a = match mode {
        Mode::Ibfd => cn_constant(d, p)?,
        Mode::Obfd => 0.0,
    };
    let kernel = rayleigh_kernel(g, p.delta())?;
    Ok(d.lambda_s / (d.lambda_bar(mode) * kernel + d.lambda_s + a))
}

/// Access coverage with the linearised hypergeometric term.
pub fn access_coverage_approx(d: &DerivedModel, p: &NetworkParams, mode: Mode) -> Result<f64> {
    require_rayleigh(p)?;
    let g = d.gamma_a(mode);
    let a = match mode {
        Mode::Ibfd => cn_constant(d, p)?,
        Mode::Obfd => 0.0,
    };
    Ok(d.lambda_s / (d.lambda_bar(mode) * 2.0 / (p.beta - 2.0) * g + d.lambda_s + a))
}

/// A fraction that may have been clamped into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub value: f64,
    pub unclamped: f64,
    pub clamped: bool,
}

impl Fraction {
    fn new(raw: f64) -> Self {
        let value = raw.clamp(0.0, 1.0);
        Self { value, unclamped: raw, clamped: value != raw }
    }
}

/// Perfect-backhaul user coverage as a function of q:
/// c_u(q) = q λ_s/(q c g_I + λ_s + A) + (1-q) λ_s/((1-q) c g_O + λ_s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel {
    pub a: f64,
    pub lambda_s: f64,
    pub c: f64,
    pub g_i: f64,
    pub g_o: f64,
}

impl MixtureModel {
    pub fn new(d: &DerivedModel, p: &NetworkParams, variant: Variant) -> Result<Self> {
        require_rayleigh(p)?;
        let (c, g_i, g_o) = match variant {
            Variant::Approx => (2.0 * d.served_intensity / (p.beta - 2.0), d.gamma_a_i, d.gamma_a_o),
            Variant::Exact => (
                d.served_intensity,
                rayleigh_kernel(d.gamma_a_i, p.delta())?,
                rayleigh_kernel(d.gamma_a_o, p.delta())?,
            ),
        };
        Ok(Self { a: cn_constant(d, p)?, lambda_s: d.lambda_s, c, g_i, g_o })
    }

    pub fn coverage_i(&self, q: f64) -> f64 {
        self.lambda_s / (q * self.c * self.g_i + self.lambda_s + self.a)
    }

    pub fn coverage_o(&self, q: f64) -> f64 {
        self.lambda_s / ((1.0 - q) * self.c * self.g_o + self.lambda_s)
    }

    pub fn user_coverage(&self, q: f64) -> f64 {
        q * self.coverage_i(q) + (1.0 - q) * self.coverage_o(q)
    }

    /// q equalising the two per-mode coverages.
    pub fn q_balance(&self) -> Fraction {
        Fraction::new((self.g_o - self.a / self.c) / (self.g_i + self.g_o))
    }

    /// Stationary point of `user_coverage` on the feasible branch.
    pub fn q_star(&self) -> Fraction {
        // d/dq of the mixture vanishes when
        //   (λ+A)/(q c g_I + λ + A)^2 = λ/((1-q) c g_O + λ)^2;
        // taking square roots on the feasible branch and solving the linear
        // equation in q.
        let l = self.lambda_s;
        let sa = (l + self.a).sqrt();
        let sl = l.sqrt();
        let num = (self.c * self.g_o + l) * sa - (l + self.a) * sl;
        let den = self.c * self.g_o * sa + self.c * self.g_i * sl;
        if den == 0.0 {
            // flat mixture: every q is optimal
            return Fraction::new(0.5);
        }
        Fraction::new(num / den)
    }
}

pub fn q_balance(d: &DerivedModel, p: &NetworkParams, variant: Variant) -> Result<Fraction> {
    Ok(MixtureModel::new(d, p, variant)?.q_balance())
}

pub fn q_star(d: &DerivedModel, p: &NetworkParams, variant: Variant) -> Result<Fraction> {
    Ok(MixtureModel::new(d, p, variant)?.q_star())
}

/// Which intensities enter the distributed-selection fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Intensities {
    Raw,
    Displaced,
}

/// Fraction of SBSs choosing IBFD under the received-power ratio rule with
/// threshold `tau`.
pub fn distributed_mode_fraction(
    tau: f64,
    d: &DerivedModel,
    p: &NetworkParams,
    which: Intensities,
) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(crate::error::invalid("tau", format!("must be positive, got {tau}")));
    }
    let ratio = match which {
        Intensities::Raw => p.lambda_c_raw / p.lambda_s_raw,
        Intensities::Displaced => d.lambda_c / d.lambda_s,
    };
    Ok(1.0 / (1.0 + ratio * (tau * p.p_c / p.p_s).powf(p.delta())))
}
