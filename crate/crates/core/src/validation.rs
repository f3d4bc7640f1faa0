//! Executable acceptance checks for one experiment.
//!
//! The report is a pure function of the config: every number in it comes
//! from deterministic sampling and integration, so repeated runs serialize
//! to identical bytes.

use serde::Serialize;

use crate::error::Result;
use crate::experiment::ExperimentConfig;
use crate::fields::{self, GridSpec};
use crate::interference::DoubleSlitConfig;
use crate::oracle;
use crate::tolerances as tol;
use crate::trajectories::{self, OrderingViolation, Trajectory};

/// Flux between neighbours is checked at this many evenly spaced lattice times.
const FLUX_CHECK_TIMES: usize = 40;
/// Rows and columns of the mass-conservation grid.
const MASS_GRID_ROWS: usize = 65;
const MASS_GRID_COLUMNS: usize = 4096;
/// Width of the mass-conservation window in σ(t_max).
const MASS_WINDOW_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    /// Inclusive bounds the value must respect.
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub passed: bool,
}

impl CheckResult {
    fn at_most(name: &str, value: f64, max: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            value,
            min: None,
            max: Some(max),
            passed: value <= max,
        }
    }

    fn within(name: &str, value: f64, min: f64, max: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            value,
            min: Some(min),
            max: Some(max),
            passed: (min..=max).contains(&value),
        }
    }

    fn flag(name: &str, ok: bool) -> Self {
        CheckResult {
            name: name.to_string(),
            value: if ok { 1.0 } else { 0.0 },
            min: Some(1.0),
            max: None,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub oracle_max_rel_error: f64,
    pub continuity_interior_max: f64,
    pub continuity_ratios: Vec<f64>,
    pub mass_drift: f64,
    pub no_crossing: bool,
    pub first_ordering_violation: Option<OrderingViolation>,
    pub flux_max_drift: f64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report always serializes");
        text.push('\n');
        text
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("validation: {}\n", self.label);
        for c in &self.checks {
            let bound = match (c.min, c.max) {
                (Some(lo), Some(hi)) => format!("in [{lo}, {hi}]"),
                (None, Some(hi)) => format!("<= {hi:e}"),
                (Some(lo), None) => format!(">= {lo}"),
                (None, None) => String::new(),
            };
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {verdict}  {:<28} {:<24e} {bound}\n", c.name, c.value));
        }
        out.push_str(if self.passed {
            "result: PASS\n"
        } else {
            "result: FAIL\n"
        });
        out
    }
}

/// Max relative difference between classical and complex-amplitude currents
/// on cells brighter than `1e-12` of the grid peak.
pub fn oracle_current_error(cfg: &DoubleSlitConfig, spec: &GridSpec) -> f64 {
    let intensity = fields::sample_intensity(cfg, spec);
    let classical = fields::sample_current(cfg, spec);
    let quantum = fields::sample_grid(spec, |t, x| oracle::quantum_current(cfg, t, x));
    let peak = intensity.values().iter().copied().fold(0.0, f64::max);
    let floor = tol::ORACLE_INTENSITY_FLOOR * peak;
    intensity
        .values()
        .iter()
        .zip(classical.values().iter().zip(quantum.values()))
        .filter(|(&p, _)| p > floor)
        .map(|(_, (&c, &q))| (c - q).norm() / q.norm())
        .fold(0.0, f64::max)
}

/// Interior max residual on successively halved grids, coarsest first.
pub fn continuity_levels(cfg: &DoubleSlitConfig, base: &GridSpec, refinements: usize) -> Result<Vec<f64>> {
    let mut spec = *base;
    let mut levels = Vec::with_capacity(refinements + 1);
    for _ in 0..=refinements {
        let residual = fields::continuity_residual_map(cfg, &spec)?;
        levels.push(fields::interior_norms(&residual).max);
        spec = spec.refined();
    }
    Ok(levels)
}

/// Relative spread `(max − min)/first` of the Riemann mass over rows
/// covering `±10σ(t_max)` of every channel.
pub fn mass_drift(cfg: &DoubleSlitConfig, window: (f64, f64)) -> Result<f64> {
    let (a0, b0) = cfg.support(window.0, MASS_WINDOW_SIGMAS);
    let (a1, b1) = cfg.support(window.1, MASS_WINDOW_SIGMAS);
    let spec = GridSpec::new(
        a0.min(a1),
        b0.max(b1),
        MASS_GRID_COLUMNS,
        window.0,
        window.1,
        MASS_GRID_ROWS,
    )?;
    let masses = fields::row_masses(&fields::sample_intensity(cfg, &spec));
    let lo = masses.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = masses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((hi - lo) / masses[0])
}

/// Largest relative change of the mass between neighbouring flux lines
/// (ordered by seed), sampled at evenly spaced lattice times.
pub fn flux_drift(cfg: &DoubleSlitConfig, trajs: &[Trajectory], checks: usize) -> Result<f64> {
    let mut ordered: Vec<&Trajectory> = trajs.iter().collect();
    ordered.sort_by(|a, b| a.initial_position().total_cmp(&b.initial_position()));
    let Some(first) = ordered.first() else {
        return Ok(0.0);
    };
    let times: Vec<f64> = first.times().collect();
    let stride = ((times.len() - 1) / checks.max(1)).max(1);
    let mut worst: f64 = 0.0;
    for pair in ordered.windows(2) {
        let initial = trajectories::flux_between(cfg, pair[0], pair[1], times[0])?;
        if initial <= 0.0 {
            continue;
        }
        for &t in times.iter().skip(stride).step_by(stride) {
            let now = trajectories::flux_between(cfg, pair[0], pair[1], t)?;
            worst = worst.max((now - initial).abs() / initial);
        }
    }
    Ok(worst)
}

pub fn run_validation(label: &str, exp: &ExperimentConfig) -> Result<ValidationReport> {
    let cfg = &exp.slits;
    let window = exp.window();
    let mut checks = Vec::new();

    let oracle_spec = exp.grid.with_resolution(tol::ORACLE_GRID, tol::ORACLE_GRID)?;
    let oracle_max_rel_error = oracle_current_error(cfg, &oracle_spec);
    checks.push(CheckResult::at_most(
        "oracle_current_rel",
        oracle_max_rel_error,
        tol::ORACLE_REL,
    ));

    let base = exp
        .grid
        .with_resolution(tol::CONTINUITY_BASE_POINTS, tol::CONTINUITY_BASE_POINTS)?;
    let levels = continuity_levels(cfg, &base, tol::CONTINUITY_REFINEMENTS)?;
    let continuity_ratios: Vec<f64> = levels.windows(2).map(|w| w[0] / w[1]).collect();
    for (k, &r) in continuity_ratios.iter().enumerate() {
        checks.push(CheckResult::within(
            &format!("continuity_ratio_{}", k + 1),
            r,
            tol::CONTINUITY_RATIO_MIN,
            tol::CONTINUITY_RATIO_MAX,
        ));
    }

    let drift = mass_drift(cfg, window)?;
    checks.push(CheckResult::at_most("mass_drift", drift, tol::MASS_DRIFT));

    let seeds = trajectories::seed_positions(cfg, &exp.seeds)?;
    let trajs = trajectories::integrate_all(cfg, &seeds, window, &exp.integrator)?;
    let ordering = trajectories::ordering_check(&trajs)?;
    checks.push(CheckResult::flag("no_crossing", ordering.passed));

    let flux_max_drift = flux_drift(cfg, &trajs, FLUX_CHECK_TIMES)?;
    checks.push(CheckResult::at_most("flux_drift", flux_max_drift, tol::FLUX_DRIFT));

    let passed = checks.iter().all(|c| c.passed);
    Ok(ValidationReport {
        label: label.to_string(),
        oracle_max_rel_error,
        continuity_interior_max: levels[levels.len() - 1],
        continuity_ratios,
        mass_drift: drift,
        no_crossing: ordering.passed,
        first_ordering_violation: ordering.first_violation,
        flux_max_drift,
        checks,
        passed,
    })
}
