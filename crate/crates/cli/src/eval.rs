//! Evaluation of sweep points and solver requests into output rows.

use backhaul_core::analytic::{
    distributed_mode_fraction, rate_coverage, rate_coverage_with_ir, MixtureModel, Variant,
};
use backhaul_core::config::RunConfig;
use backhaul_core::model::LoadDistribution;
use backhaul_core::sim::{estimate_coverage, Scheme};
use backhaul_core::{derive_model, CoverageReport, Result};
use rayon::prelude::*;
use serde_json::Value;
use std::time::Instant;

/// One output row: ordered columns, `Null` for missing values.
pub type Row = Vec<(String, Value)>;

pub const PROBABILITY_COLUMNS: [&str; 7] =
    ["c_access_I", "c_access_O", "c_backhaul_I", "c_backhaul_O", "c_I", "c_O", "c_u"];

pub fn analytic_report(cfg: &RunConfig) -> Result<CoverageReport> {
    let mut p = cfg.network.clone();
    if cfg.mitigation.scheme == Scheme::DistributedModeSelection {
        let d = derive_model(&p)?;
        p.q = distributed_mode_fraction(cfg.mitigation.tau, &d, &p, cfg.intensities)?;
    }
    let d = derive_model(&p)?;
    let load = LoadDistribution::new(d.mean_load)?;
    match cfg.mitigation.scheme {
        Scheme::InterferenceRejection => rate_coverage_with_ir(&d, &p, &load, &cfg.analytic),
        _ => rate_coverage(&d, &p, &load, &cfg.analytic),
    }
}

pub fn montecarlo_report(cfg: &RunConfig) -> Result<CoverageReport> {
    estimate_coverage(&cfg.network, &cfg.mitigation, &cfg.sim)
}

fn timed(f: impl FnOnce() -> Result<CoverageReport>) -> (Result<CoverageReport>, f64) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed().as_secs_f64())
}

fn num(v: f64) -> Value {
    Value::from(v)
}

/// Appends the report block; `prefix` distinguishes the two paths of a
/// `both` run.
fn push_report(row: &mut Row, prefix: &str, r: &std::result::Result<CoverageReport, String>, wall: Option<f64>) {
    let ok = r.as_ref().ok();
    let probs = ok.map(|r| r.probabilities());
    for (i, name) in PROBABILITY_COLUMNS.iter().enumerate() {
        row.push((format!("{prefix}{name}"), probs.map_or(Value::Null, |p| num(p[i]))));
    }
    row.push((format!("{prefix}q"), ok.map_or(Value::Null, |r| num(r.q))));
    row.push((format!("{prefix}error"), ok.map_or(Value::Null, |r| num(r.error))));
    row.push((format!("{prefix}wall_time"), wall.map_or(Value::Null, num)));
}

/// Evaluates one configuration into a row. Numerical failures become a
/// failed status rather than an error.
pub fn evaluate_point(cfg: &RunConfig, axes: &[(String, f64)]) -> Row {
    let mut row: Row = axes.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    let analytic = cfg.method.analytic().then(|| timed(|| analytic_report(cfg)));
    let mc = cfg.method.montecarlo().then(|| timed(|| montecarlo_report(cfg)));
    let wall = |w: f64| cfg.timestamp.then_some(w);
    let mut failures = Vec::new();
    let mut method = Vec::new();
    let mut blocks = Vec::new();
    for (label, res, prefix) in [("analytic", analytic, ""), ("mc", mc, "mc_")] {
        let Some((res, secs)) = res else { continue };
        if let Ok(r) = &res {
            method.push(r.method.as_str());
        } else {
            method.push(if label == "mc" { "montecarlo" } else { "analytic-exact" });
        }
        let res = res.map_err(|e| e.to_string());
        if let Err(e) = &res {
            failures.push(format!("{label}: {e}"));
        }
        blocks.push((prefix, res, wall(secs)));
    }
    // a lone Monte Carlo run reports in the unprefixed columns
    if blocks.len() == 1 {
        blocks[0].0 = "";
    }
    row.push(("method".into(), Value::from(method.join("+"))));
    let status = if failures.is_empty() { "ok".to_string() } else { format!("failed: {}", failures.join("; ")) };
    row.push(("status".into(), Value::from(status)));
    for (prefix, res, wall) in &blocks {
        push_report(&mut row, prefix, res, *wall);
    }
    row
}

/// Expands the sweep axes into per-point configurations, first axis
/// outermost.
pub fn sweep_points(cfg: &RunConfig) -> Vec<(RunConfig, Vec<(String, f64)>)> {
    let mut points = vec![(cfg.clone(), Vec::new())];
    for axis in &cfg.sweep {
        let values = axis.values();
        points = points
            .into_iter()
            .flat_map(|(c, labels)| {
                values.iter().map(move |&v| {
                    let mut c = c.clone();
                    axis.param.apply(&mut c, v);
                    let mut labels = labels.clone();
                    labels.push((axis.param.as_str().to_string(), v));
                    (c, labels)
                })
            })
            .collect();
    }
    points
}

/// Rows in sweep order regardless of completion order.
pub fn run_sweep(cfg: &RunConfig) -> Vec<Row> {
    sweep_points(cfg).par_iter().map(|(c, labels)| evaluate_point(c, labels)).collect()
}

pub fn row_failed(row: &Row) -> bool {
    row.iter().any(|(k, v)| k == "status" && v.as_str() != Some("ok"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    QStar,
    QBalance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolveVariant {
    Exact,
    Approx,
}

/// Grid resolution of the solver cross-check.
pub const SOLVE_GRID_STEP: f64 = 1e-3;

/// Closed-form optimiser plus a grid search over the same perfect-backhaul
/// model as a check.
pub fn solve(cfg: &RunConfig, target: Target, variant: SolveVariant) -> Result<Row> {
    let p = &cfg.network;
    let d = derive_model(p)?;
    let variant = match variant {
        SolveVariant::Exact => Variant::Exact,
        SolveVariant::Approx => Variant::Approx,
    };
    let m = MixtureModel::new(&d, p, variant)?;
    let f = match target {
        Target::QStar => m.q_star(),
        Target::QBalance => m.q_balance(),
    };
    let n = (1.0 / SOLVE_GRID_STEP).round() as usize;
    let score = |q: f64| match target {
        Target::QStar => m.user_coverage(q),
        Target::QBalance => -(m.coverage_i(q) - m.coverage_o(q)).abs(),
    };
    let grid_q = (0..=n)
        .map(|i| i as f64 * SOLVE_GRID_STEP)
        .max_by(|a, b| score(*a).total_cmp(&score(*b)))
        .expect("grid is non-empty");
    let q = f.value;
    let target_name = match target {
        Target::QStar => "q-star",
        Target::QBalance => "q-balance",
    };
    let variant_name = match variant {
        Variant::Exact => "exact",
        Variant::Approx => "approx",
    };
    Ok(vec![
        ("target".into(), Value::from(target_name)),
        ("variant".into(), Value::from(variant_name)),
        ("q".into(), num(q)),
        ("unclamped".into(), num(f.unclamped)),
        ("clamped".into(), Value::from(f.clamped)),
        ("c_I".into(), num(m.coverage_i(q))),
        ("c_O".into(), num(m.coverage_o(q))),
        ("c_u".into(), num(m.user_coverage(q))),
        ("grid_q".into(), num(grid_q)),
        ("grid_c_u".into(), num(m.user_coverage(grid_q))),
        ("grid_gap".into(), num((grid_q - q).abs())),
    ])
}
