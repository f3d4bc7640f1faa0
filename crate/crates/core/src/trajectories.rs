//! Flux lines of the total velocity field.
//!
//! Each line solves `dx/dt = J_x/P` with classical RK4 on a fixed base-step
//! lattice, so every trajectory of a batch shares the same sample times.
//! A base step is split into `2^k` equal sub-steps when a stage lands below
//! the intensity floor, moves farther than `σ_min/50`, or exceeds the speed
//! cap. Splitting stops at `max_substeps`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::DoubleSlitConfig;
use crate::quadrature::{self, Tolerance};

/// Fraction of the narrowest packet width one sub-step may cover.
const STEP_WIDTH_FRACTION: f64 = 1.0 / 50.0;

/// Default speed cap in units of the forward speed.
pub const DEFAULT_SPEED_CAP_FACTOR: f64 = 50.0;

/// Default number of base steps across the time window.
pub const DEFAULT_STEPS_PER_WINDOW: f64 = 2000.0;

pub const DEFAULT_MAX_SUBSTEPS: u32 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedStrategy {
    /// Uniformly spaced across the span.
    Equidistant,
    /// Quantiles of the initial intensity: equal mass between neighbours.
    EqualFlux,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedSpec {
    count: usize,
    strategy: SeedStrategy,
    span: (f64, f64),
}

impl SeedSpec {
    pub fn new(count: usize, strategy: SeedStrategy, span: (f64, f64)) -> Result<Self> {
        if count < 1 {
            return Err(Error::invalid("seeds.count", "must be >= 1"));
        }
        let (lo, hi) = span;
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::DegenerateSpan(lo, hi));
        }
        Ok(SeedSpec { count, strategy, span })
    }

    /// `count` equidistant seeds across `±(X + 3σ₀)`, taken per packet.
    pub fn default_for(cfg: &DoubleSlitConfig, count: usize) -> Result<Self> {
        Self::new(count, SeedStrategy::Equidistant, cfg.support(0.0, 3.0))
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn strategy(&self) -> SeedStrategy {
        self.strategy
    }

    pub fn span(&self) -> (f64, f64) {
        self.span
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorSettings {
    base_step: f64,
    max_substeps: u32,
    speed_cap: f64,
}

impl IntegratorSettings {
    pub fn new(base_step: f64, max_substeps: u32, speed_cap: f64) -> Result<Self> {
        if !(base_step.is_finite() && base_step > 0.0) {
            return Err(Error::invalid("integrator.base_step", "must be finite and > 0"));
        }
        if max_substeps < 1 {
            return Err(Error::invalid("integrator.max_substeps", "must be >= 1"));
        }
        if !(speed_cap.is_finite() && speed_cap > 0.0) {
            return Err(Error::invalid("integrator.speed_cap", "must be finite and > 0"));
        }
        Ok(IntegratorSettings {
            base_step,
            max_substeps,
            speed_cap,
        })
    }

    /// `T/2000` base step, 1024 sub-steps, cap at 50× the forward speed.
    pub fn default_for(cfg: &DoubleSlitConfig, t_span: (f64, f64)) -> Self {
        IntegratorSettings {
            base_step: (t_span.1 - t_span.0).abs() / DEFAULT_STEPS_PER_WINDOW,
            max_substeps: DEFAULT_MAX_SUBSTEPS,
            speed_cap: DEFAULT_SPEED_CAP_FACTOR * cfg.forward_speed(),
        }
    }

    pub fn with_base_step(self, base_step: f64) -> Result<Self> {
        Self::new(base_step, self.max_substeps, self.speed_cap)
    }

    pub fn base_step(&self) -> f64 {
        self.base_step
    }

    pub fn max_substeps(&self) -> u32 {
        self.max_substeps
    }

    pub fn speed_cap(&self) -> f64 {
        self.speed_cap
    }
}

/// Time-ordered transverse positions of one flux line; `y = v_y·t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    samples: Vec<(f64, f64)>,
}

impl Trajectory {
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn initial_position(&self) -> f64 {
        self.samples[0].1
    }

    pub fn final_position(&self) -> f64 {
        self.samples[self.samples.len() - 1].1
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Position at a lattice time.
    pub fn position_at(&self, t: f64) -> Option<f64> {
        let tol = 1e-12 * t.abs().max(1.0);
        let idx = self.samples.partition_point(|s| s.0 < t - tol);
        self.samples.get(idx).filter(|s| (s.0 - t).abs() <= tol).map(|s| s.1)
    }
}

pub fn seed_positions(cfg: &DoubleSlitConfig, spec: &SeedSpec) -> Result<Vec<f64>> {
    let (lo, hi) = spec.span;
    if !(hi > lo) {
        return Err(Error::DegenerateSpan(lo, hi));
    }
    let n = spec.count;
    match spec.strategy {
        SeedStrategy::Equidistant => {
            if n == 1 {
                return Ok(vec![0.5 * (lo + hi)]);
            }
            let last = (n - 1) as f64;
            Ok((0..n)
                .map(|i| {
                    if i + 1 == n {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / last
                    }
                })
                .collect())
        }
        SeedStrategy::EqualFlux => equal_flux_seeds(cfg, lo, hi, n),
    }
}

/// Positions splitting the initial intensity on `[lo, hi]` into `n + 1` equal masses.
fn equal_flux_seeds(cfg: &DoubleSlitConfig, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    let tol = Tolerance::default();
    let density = |x: f64| cfg.total_intensity(0.0, x);
    let total = quadrature::integrate(density, lo, hi, tol);
    if !(total > 0.0) {
        return Err(Error::DegenerateSpan(lo, hi));
    }
    let mut seeds = Vec::with_capacity(n);
    let (mut anchor, mut anchor_mass) = (lo, 0.0);
    for i in 1..=n {
        let target = total * i as f64 / (n + 1) as f64;
        let (mut a, mut b) = (anchor, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let mass = anchor_mass + quadrature::integrate(density, anchor, mid, tol);
            if mass < target {
                a = mid;
            } else {
                b = mid;
            }
        }
        let x = 0.5 * (a + b);
        anchor_mass += quadrature::integrate(density, anchor, x, tol);
        anchor = x;
        seeds.push(x);
    }
    Ok(seeds)
}

/// Shared lattice time `k` of `n` across `t_span`.
fn lattice_time(t_span: (f64, f64), k: usize, n: usize) -> f64 {
    if k == n {
        t_span.1
    } else {
        t_span.0 + (t_span.1 - t_span.0) * k as f64 / n as f64
    }
}

/// Number of base steps the settings imply for a window.
pub fn lattice_steps(t_span: (f64, f64), settings: &IntegratorSettings) -> usize {
    (((t_span.1 - t_span.0).abs() / settings.base_step).round() as usize).max(1)
}

enum Refine {
    Singular,
    Resolution,
}

/// Transverse velocity with the sub-step acceptance rules applied.
fn stage_velocity(
    cfg: &DoubleSlitConfig,
    settings: &IntegratorSettings,
    t: f64,
    x: f64,
    dt: f64,
    enforce: bool,
) -> Result<f64, Refine> {
    let v = cfg.total_velocity(t, x).map_err(|_| Refine::Singular)?;
    if !v.x.is_finite() {
        return Err(Refine::Singular);
    }
    if enforce && (v.x.abs() * dt.abs() > STEP_WIDTH_FRACTION * cfg.sigma_min(t) || v.norm() > settings.speed_cap) {
        return Err(Refine::Resolution);
    }
    Ok(v.x)
}

fn rk4_substeps(
    cfg: &DoubleSlitConfig,
    settings: &IntegratorSettings,
    ta: f64,
    tb: f64,
    x0: f64,
    subs: u32,
    enforce: bool,
) -> Result<f64, Refine> {
    let h = (tb - ta) / subs as f64;
    let mut x = x0;
    for s in 0..subs {
        let t = ta + h * s as f64;
        let k1 = stage_velocity(cfg, settings, t, x, h, enforce)?;
        let k2 = stage_velocity(cfg, settings, t + 0.5 * h, x + 0.5 * h * k1, h, enforce)?;
        let k3 = stage_velocity(cfg, settings, t + 0.5 * h, x + 0.5 * h * k2, h, enforce)?;
        let k4 = stage_velocity(cfg, settings, t + h, x + h * k3, h, enforce)?;
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !x.is_finite() {
            return Err(Refine::Singular);
        }
    }
    Ok(x)
}

fn advance(cfg: &DoubleSlitConfig, settings: &IntegratorSettings, ta: f64, tb: f64, x: f64) -> Result<f64> {
    let mut subs = 1u32;
    loop {
        let last = subs.saturating_mul(2) > settings.max_substeps;
        match rk4_substeps(cfg, settings, ta, tb, x, subs, true) {
            Ok(next) => return Ok(next),
            Err(_) if !last => subs *= 2,
            Err(Refine::Singular) => return Err(Error::StuckAtNode { t: ta, x }),
            // Out of refinement budget on the resolution rule only: accept the finest split.
            Err(Refine::Resolution) => {
                return rk4_substeps(cfg, settings, ta, tb, x, subs, false).map_err(|_| Error::StuckAtNode { t: ta, x })
            }
        }
    }
}

/// Integrates one flux line from `x0` across `t_span`.
pub fn integrate(
    cfg: &DoubleSlitConfig,
    x0: f64,
    t_span: (f64, f64),
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 != t0) {
        return Err(Error::invalid("t_span", format!("degenerate window [{t0}, {t1}]")));
    }
    if !(x0.is_finite() && cfg.total_intensity(t0, x0) > cfg.intensity_floor(t0)) {
        return Err(Error::InvalidSeed { x0, t: t0 });
    }
    let n = lattice_steps(t_span, settings);
    let mut samples = Vec::with_capacity(n + 1);
    samples.push((t0, x0));
    let mut x = x0;
    for k in 0..n {
        let ta = lattice_time(t_span, k, n);
        let tb = lattice_time(t_span, k + 1, n);
        x = advance(cfg, settings, ta, tb, x)?;
        samples.push((tb, x));
    }
    Ok(Trajectory { samples })
}

/// Integrates a family of seeds in parallel; results come back in seed order.
pub fn integrate_all(
    cfg: &DoubleSlitConfig,
    seeds: &[f64],
    t_span: (f64, f64),
    settings: &IntegratorSettings,
) -> Result<Vec<Trajectory>> {
    seeds
        .par_iter()
        .map(|&x0| integrate(cfg, x0, t_span, settings))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingViolation {
    pub t: f64,
    /// Indices into the checked slice; `first` started to the left of `second`.
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingReport {
    pub passed: bool,
    pub first_violation: Option<OrderingViolation>,
}

/// Checks that the x-ordering of all trajectories is the same at every shared time.
pub fn ordering_check(trajs: &[Trajectory]) -> Result<OrderingReport> {
    let Some(reference) = trajs.first() else {
        return Ok(OrderingReport {
            passed: true,
            first_violation: None,
        });
    };
    for tr in trajs {
        if tr.len() != reference.len() || tr.times().zip(reference.times()).any(|(a, b)| a != b) {
            return Err(Error::MismatchedSampling);
        }
    }
    let mut order: Vec<usize> = (0..trajs.len()).collect();
    order.sort_by(|&a, &b| trajs[a].initial_position().total_cmp(&trajs[b].initial_position()));
    let initial: Vec<Ordering> = order
        .windows(2)
        .map(|w| {
            trajs[w[0]]
                .initial_position()
                .total_cmp(&trajs[w[1]].initial_position())
        })
        .collect();
    for k in 0..reference.len() {
        for (w, expected) in order.windows(2).zip(&initial) {
            let a = trajs[w[0]].samples[k].1;
            let b = trajs[w[1]].samples[k].1;
            if a.total_cmp(&b) != *expected {
                return Ok(OrderingReport {
                    passed: false,
                    first_violation: Some(OrderingViolation {
                        t: reference.samples[k].0,
                        first: w[0],
                        second: w[1],
                    }),
                });
            }
        }
    }
    Ok(OrderingReport {
        passed: true,
        first_violation: None,
    })
}

/// Probability mass between two flux lines at lattice time `t`.
pub fn flux_between(cfg: &DoubleSlitConfig, a: &Trajectory, b: &Trajectory, t: f64) -> Result<f64> {
    let xa = a.position_at(t).ok_or(Error::OutOfRange(t))?;
    let xb = b.position_at(t).ok_or(Error::OutOfRange(t))?;
    Ok(cfg.mass_between(t, xa, xb))
}

/// Number of sign changes of the transverse velocity along a trajectory.
pub fn transverse_sign_changes(cfg: &DoubleSlitConfig, traj: &Trajectory) -> usize {
    let signs = traj.samples.iter().filter_map(|&(t, x)| {
        let v = cfg.total_velocity(t, x).ok()?.x;
        (v != 0.0).then_some(v > 0.0)
    });
    let mut changes = 0;
    let mut prev = None;
    for s in signs {
        if prev.is_some_and(|p| p != s) {
            changes += 1;
        }
        prev = Some(s);
    }
    changes
}
