//! Run configuration: a flat `key = value` file split into sections named
//! after the library modules. Every key is optional and defaults to the
//! reference deployment, so an empty file is a valid configuration.
//!
//! ```text
//! [network-model]
//! lambda_s_raw = 100
//! xi_db = 110
//!
//! [montecarlo-sim]
//! drops = 5000
//!
//! [cli]
//! method = both
//! sweep = q:0:1:21:linear
//! ```

use crate::analytic::{AnalyticSettings, Intensities};
use crate::error::Error;
use crate::model::NetworkParams;
use crate::sim::{MitigationConfig, Scheme, SimSettings, MIN_DROPS};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

/// Parse or validation failure. `line` is 1-based; 0 means the offending
/// value did not come from the file (defaults or command-line overrides).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: ", self.line)?;
        }
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn err(line: usize, field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { line, field: field.into(), message: message.into() }
}

/// Which evaluation paths a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluation {
    Analytic,
    Montecarlo,
    Both,
}

impl Evaluation {
    pub fn analytic(self) -> bool {
        self != Evaluation::Montecarlo
    }

    pub fn montecarlo(self) -> bool {
        self != Evaluation::Analytic
    }
}

impl std::str::FromStr for Evaluation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "analytic" => Ok(Evaluation::Analytic),
            "mc" | "montecarlo" => Ok(Evaluation::Montecarlo),
            "both" => Ok(Evaluation::Both),
            _ => Err(format!("expected analytic, mc or both, got '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("expected csv or json, got '{s}'")),
        }
    }
}

/// Parameters a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Q,
    LambdaSRaw,
    LambdaCRaw,
    XiDb,
    PC,
    Tau,
}

impl SweepParam {
    pub const ALL: [SweepParam; 6] = [
        SweepParam::Q,
        SweepParam::LambdaSRaw,
        SweepParam::LambdaCRaw,
        SweepParam::XiDb,
        SweepParam::PC,
        SweepParam::Tau,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Q => "q",
            SweepParam::LambdaSRaw => "lambda_s_raw",
            SweepParam::LambdaCRaw => "lambda_c_raw",
            SweepParam::XiDb => "xi_db",
            SweepParam::PC => "p_c",
            SweepParam::Tau => "tau",
        }
    }

    /// Sets this parameter on `cfg`.
    pub fn apply(self, cfg: &mut RunConfig, v: f64) {
        match self {
            SweepParam::Q => cfg.network.q = v,
            SweepParam::LambdaSRaw => cfg.network.lambda_s_raw = v,
            SweepParam::LambdaCRaw => cfg.network.lambda_c_raw = v,
            SweepParam::XiDb => cfg.network.xi_db = v,
            SweepParam::PC => cfg.network.p_c = v,
            SweepParam::Tau => cfg.mitigation.tau = v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// One sweep dimension, written `name:start:stop:steps[:linear|log]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

/// Keeps a typo from allocating a billion sweep points.
pub const MAX_SWEEP_STEPS: usize = 10_000;

impl SweepAxis {
    /// Grid points from `start` to `stop` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                // exact end points, ln/exp would round them
                if i == 0 {
                    return self.start;
                }
                if i == n {
                    return self.stop;
                }
                let t = i as f64 / n as f64;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + t * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        };
        write!(f, "{}:{}:{}:{}:{s}", self.param.as_str(), self.start, self.stop, self.steps)
    }
}

/// Parses one sweep axis; `line` only labels errors.
pub fn parse_sweep_axis(text: &str, line: usize) -> Result<SweepAxis, ConfigError> {
    let bad = |m: String| err(line, "sweep", m);
    let parts: Vec<&str> = text.trim().split(':').map(str::trim).collect();
    if !(4..=5).contains(&parts.len()) {
        return Err(bad(format!("expected name:start:stop:steps[:linear|log], got '{}'", text.trim())));
    }
    let param = SweepParam::ALL.into_iter().find(|p| p.as_str() == parts[0]).ok_or_else(|| {
        let names: Vec<_> = SweepParam::ALL.iter().map(|p| p.as_str()).collect();
        bad(format!("cannot sweep '{}', choose one of {}", parts[0], names.join(", ")))
    })?;
    let num = |s: &str, what: &str| -> Result<f64, ConfigError> {
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(bad(format!("{what} '{s}' is not a finite number"))),
        }
    };
    let start = num(parts[1], "start")?;
    let stop = num(parts[2], "stop")?;
    let steps: usize = parts[3].parse().map_err(|_| bad(format!("steps '{}' is not a count", parts[3])))?;
    let spacing = match parts.get(4).copied().unwrap_or("linear") {
        "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        s => return Err(bad(format!("spacing must be linear or log, got '{s}'"))),
    };
    if !(start < stop) {
        return Err(bad(format!("start {start} must be below stop {stop}")));
    }
    if !(2..=MAX_SWEEP_STEPS).contains(&steps) {
        return Err(bad(format!("steps must lie in 2..={MAX_SWEEP_STEPS}, got {steps}")));
    }
    if spacing == Spacing::Log && !(start > 0.0) {
        return Err(bad("log spacing needs a positive start".into()));
    }
    Ok(SweepAxis { param, start, stop, steps, spacing })
}

/// Everything a CLI run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub network: NetworkParams,
    pub analytic: AnalyticSettings,
    /// intensities used by the distributed-selection fraction
    pub intensities: Intensities,
    /// the closed-form solvers assume every backhaul link succeeds; they
    /// refuse to run until this is set
    pub perfect_backhaul: bool,
    pub mitigation: MitigationConfig,
    pub sim: SimSettings,
    pub method: Evaluation,
    pub sweep: Vec<SweepAxis>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// write the generation time and per-row wall times
    pub timestamp: bool,
    /// line each key was read from
    #[serde(skip)]
    pub lines: BTreeMap<String, usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            network: NetworkParams::default(),
            analytic: AnalyticSettings::default(),
            intensities: Intensities::Raw,
            perfect_backhaul: false,
            mitigation: MitigationConfig::default(),
            sim: SimSettings::default(),
            method: Evaluation::Analytic,
            sweep: Vec::new(),
            out: None,
            format: OutputFormat::Csv,
            timestamp: true,
            lines: BTreeMap::new(),
        }
    }
}

pub const SECTIONS: [&str; 4] = ["network-model", "analytic-coverage", "montecarlo-sim", "cli"];

fn parse_num<T: std::str::FromStr>(v: &str, line: usize, key: &str, what: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| err(line, key, format!("expected {what}, got '{v}'")))
}

fn parse_real(v: &str, line: usize, key: &str) -> Result<f64, ConfigError> {
    let x: f64 = parse_num(v, line, key, "a number")?;
    if !x.is_finite() {
        return Err(err(line, key, format!("expected a finite number, got '{v}'")));
    }
    Ok(x)
}

fn parse_bool(v: &str, line: usize, key: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(err(line, key, format!("expected true or false, got '{v}'"))),
    }
}

impl RunConfig {
    fn set(&mut self, section: &str, key: &str, v: &str, line: usize) -> Result<(), ConfigError> {
        let real = |v: &str| parse_real(v, line, key);
        let n = &mut self.network;
        match (section, key) {
            ("network-model", "lambda_c_raw") => n.lambda_c_raw = real(v)?,
            ("network-model", "lambda_s_raw") => n.lambda_s_raw = real(v)?,
            ("network-model", "lambda_u_raw") => n.lambda_u_raw = Some(real(v)?),
            ("network-model", "p_c") => n.p_c = real(v)?,
            ("network-model", "p_s") => n.p_s = real(v)?,
            ("network-model", "beta") => n.beta = real(v)?,
            ("network-model", "xi_db") => n.xi_db = real(v)?,
            ("network-model", "antennas") => n.antennas = parse_num(v, line, key, "a count")?,
            ("network-model", "max_streams") => n.max_streams = parse_num(v, line, key, "a count")?,
            ("network-model", "rate_threshold") => n.rate_threshold = real(v)?,
            ("network-model", "q") => n.q = real(v)?,
            ("network-model", "shadow_mu") => n.shadow_mu = real(v)?,
            ("network-model", "shadow_sigma") => n.shadow_sigma = real(v)?,
            ("network-model", "k_user") => n.k_user = real(v)?,
            ("network-model", "k_sbs") => n.k_sbs = real(v)?,
            ("network-model", "noise_power") => n.noise_power = real(v)?,

            ("analytic-coverage", "inner_rel_tol") => self.analytic.inner.rel_tol = real(v)?,
            ("analytic-coverage", "inner_abs_tol") => self.analytic.inner.abs_tol = real(v)?,
            ("analytic-coverage", "inner_max_subdivisions") => {
                self.analytic.inner.max_subdivisions = parse_num(v, line, key, "a count")?
            }
            ("analytic-coverage", "outer_rel_tol") => self.analytic.outer.rel_tol = real(v)?,
            ("analytic-coverage", "outer_abs_tol") => self.analytic.outer.abs_tol = real(v)?,
            ("analytic-coverage", "outer_max_subdivisions") => {
                self.analytic.outer.max_subdivisions = parse_num(v, line, key, "a count")?
            }
            ("analytic-coverage", "intensities") => {
                self.intensities = match v {
                    "raw" => Intensities::Raw,
                    "displaced" => Intensities::Displaced,
                    _ => return Err(err(line, key, format!("expected raw or displaced, got '{v}'"))),
                }
            }
            ("analytic-coverage", "perfect_backhaul") => self.perfect_backhaul = parse_bool(v, line, key)?,

            ("montecarlo-sim", "drops") => self.sim.drops = parse_num(v, line, key, "a count")?,
            ("montecarlo-sim", "seed") => self.sim.seed = parse_num(v, line, key, "an unsigned integer")?,
            ("montecarlo-sim", "region_radius") => self.sim.region_radius = Some(real(v)?),
            ("montecarlo-sim", "scheme") => {
                self.mitigation.scheme = v.parse::<Scheme>().map_err(|m| err(line, key, m))?
            }
            ("montecarlo-sim", "tau") => self.mitigation.tau = real(v)?,
            ("montecarlo-sim", "pilot_contamination") => {
                self.mitigation.pilot_contamination = parse_bool(v, line, key)?
            }

            ("cli", "method") => self.method = v.parse().map_err(|m| err(line, key, m))?,
            ("cli", "format") => self.format = v.parse().map_err(|m| err(line, key, m))?,
            ("cli", "out") => self.out = Some(PathBuf::from(v)),
            ("cli", "timestamp") => self.timestamp = parse_bool(v, line, key)?,
            ("cli", "sweep") => self.sweep.push(parse_sweep_axis(v, line)?),

            _ => return Err(err(line, key, format!("unknown key in section [{section}]"))),
        }
        Ok(())
    }

    fn line_of(&self, field: &str) -> usize {
        self.lines.get(field).copied().unwrap_or(0)
    }

    fn from_model_error(&self, e: Error) -> ConfigError {
        match e {
            Error::InvalidParameter { field, reason } => err(self.line_of(field), field, reason),
            other => err(0, "config", other.to_string()),
        }
    }

    /// Cross-field checks; run again after command-line overrides.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.network.validate().map_err(|e| self.from_model_error(e))?;
        self.mitigation.validate().map_err(|e| self.from_model_error(e))?;
        for (name, q) in [("inner", self.analytic.inner), ("outer", self.analytic.outer)] {
            for (key, v) in [("rel_tol", q.rel_tol), ("abs_tol", q.abs_tol)] {
                let field = format!("{name}_{key}");
                if !(v > 0.0) {
                    return Err(err(self.line_of(&field), field, "must be positive"));
                }
            }
            if q.max_subdivisions == 0 {
                let field = format!("{name}_max_subdivisions");
                return Err(err(self.line_of(&field), field, "must be at least 1"));
            }
        }
        if self.sim.drops < MIN_DROPS {
            return Err(err(self.line_of("drops"), "drops", format!("must be at least {MIN_DROPS}")));
        }
        if let Some(r) = self.sim.region_radius {
            if !(r > 0.0) {
                return Err(err(self.line_of("region_radius"), "region_radius", "must be positive"));
            }
        }
        if self.method.analytic() {
            if matches!(self.mitigation.scheme, Scheme::BiaServingOnly | Scheme::BiaAllCns) {
                return Err(err(
                    self.line_of("scheme"),
                    "scheme",
                    "BIA has no analytic model, use method = mc",
                ));
            }
            if self.mitigation.pilot_contamination {
                return Err(err(
                    self.line_of("pilot_contamination"),
                    "pilot_contamination",
                    "pilot contamination has no analytic model, use method = mc",
                ));
            }
        }
        if self.sweep.len() > 2 {
            return Err(err(self.line_of("sweep"), "sweep", "at most two sweep axes are supported"));
        }
        if self.sweep.len() == 2 && self.sweep[0].param == self.sweep[1].param {
            return Err(err(self.line_of("sweep"), "sweep", "the two axes sweep the same parameter"));
        }
        for axis in &self.sweep {
            // both ends must give a valid model; the range in between then
            // does too since every whitelisted bound is an interval
            for v in [axis.start, axis.stop] {
                let mut c = self.clone();
                c.sweep.clear();
                axis.param.apply(&mut c, v);
                if let Err(e) = c.network.validate().and_then(|_| c.mitigation.validate()) {
                    let e = c.from_model_error(e);
                    return Err(err(
                        self.line_of("sweep"),
                        "sweep",
                        format!("{} = {v} is invalid: {}: {}", axis.param.as_str(), e.field, e.message),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section: Option<&str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line, "section", format!("unterminated header '{body}'")))?
                .trim();
            let name = SECTIONS
                .into_iter()
                .find(|s| *s == name)
                .ok_or_else(|| err(line, "section", format!("unknown section [{name}]")))?;
            section = Some(name);
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(line, body, "expected 'key = value'"))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err(line, "key", "missing key before '='"));
        }
        let section = section.ok_or_else(|| err(line, key, "key appears before any [section] header"))?;
        if value.is_empty() {
            return Err(err(line, key, "missing value"));
        }
        if key != "sweep" {
            if let Some(prev) = cfg.lines.get(key) {
                return Err(err(line, key, format!("already set on line {prev}")));
            }
        }
        cfg.set(section, key, value, line)?;
        cfg.lines.insert(key.to_string(), line);
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c.network, NetworkParams::default());
        assert_eq!(c.method, Evaluation::Analytic);
        assert!(c.sweep.is_empty());
    }

    #[test]
    fn axes_round_trip_through_display() {
        let a = parse_sweep_axis("lambda_s_raw:10:1000:10:log", 1).unwrap();
        assert_eq!(parse_sweep_axis(&a.to_string(), 1).unwrap(), a);
        let v = a.values();
        assert_eq!(v.len(), 10);
        assert!((v[1] / v[0] - 10f64.powf(2.0 / 9.0)).abs() < 1e-12);
        assert_eq!(v[9], 1000.0);
    }
}
