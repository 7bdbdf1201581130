use serde::{Deserialize, Serialize};

/// Which evaluation path produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    AnalyticExact,
    AnalyticRayleigh,
    AnalyticApprox,
    Montecarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::AnalyticExact => "analytic-exact",
            Method::AnalyticRayleigh => "analytic-rayleigh",
            Method::AnalyticApprox => "analytic-approx",
            Method::Montecarlo => "montecarlo",
        }
    }
}

/// Simulation bookkeeping attached to Monte Carlo reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McDiagnostics {
    pub drops: u64,
    /// drops redrawn because the region held no SBS or no CN
    pub resampled: u64,
    /// 95% normal-approximation half-widths in report order
    /// (access_I, access_O, backhaul_I, backhaul_O, c_I, c_O, c_u)
    pub half_widths: [f64; 7],
    /// fraction of drops whose serving SBS chose IBFD (distributed selection)
    pub realized_q: Option<f64>,
}

/// Access, backhaul and end-to-end rate coverage for both modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    #[serde(rename = "c_access_I")]
    pub c_access_i: f64,
    #[serde(rename = "c_access_O")]
    pub c_access_o: f64,
    #[serde(rename = "c_backhaul_I")]
    pub c_backhaul_i: f64,
    #[serde(rename = "c_backhaul_O")]
    pub c_backhaul_o: f64,
    #[serde(rename = "c_I")]
    pub c_i: f64,
    #[serde(rename = "c_O")]
    pub c_o: f64,
    pub c_u: f64,
    pub q: f64,
    pub method: Method,
    /// absolute error estimate (analytic) or 95% half-width of c_u (Monte Carlo)
    pub error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mc: Option<McDiagnostics>,
}

impl CoverageReport {
    /// Builds the per-mode products and the q-mixture.
    pub fn compose(
        access_i: f64,
        access_o: f64,
        backhaul_i: f64,
        backhaul_o: f64,
        q: f64,
        method: Method,
        error: f64,
    ) -> Self {
        let c_i = access_i * backhaul_i;
        let c_o = access_o * backhaul_o;
        Self {
            c_access_i: access_i,
            c_access_o: access_o,
            c_backhaul_i: backhaul_i,
            c_backhaul_o: backhaul_o,
            c_i,
            c_o,
            c_u: q * c_i + (1.0 - q) * c_o,
            q,
            method,
            error,
            mc: None,
        }
    }

    pub fn probabilities(&self) -> [f64; 7] {
        [
            self.c_access_i,
            self.c_access_o,
            self.c_backhaul_i,
            self.c_backhaul_o,
            self.c_i,
            self.c_o,
            self.c_u,
        ]
    }
}
