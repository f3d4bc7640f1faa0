//! Sampling of intensity, current, velocity and continuity residuals on
//! rectangular `(t, x)` lattices.
//!
//! Rows are fixed-`t` slices evaluated independently; the output is
//! assembled in row order, so grids are bit-identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interference::DoubleSlitConfig;
use crate::vector::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_min: f64, t_max: f64, nt: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::invalid("grid.x_max", "must exceed grid.x_min"));
        }
        if !(t_min.is_finite() && t_max.is_finite() && t_max > t_min) {
            return Err(Error::invalid("grid.t_max", "must exceed grid.t_min"));
        }
        if nx < 2 {
            return Err(Error::invalid("grid.nx", "must be >= 2"));
        }
        if nt < 2 {
            return Err(Error::invalid("grid.nt", "must be >= 2"));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            nx,
            t_min,
            t_max,
            nt,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.nt - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        if j + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + (self.x_max - self.x_min) * j as f64 / (self.nx - 1) as f64
        }
    }

    pub fn t(&self, i: usize) -> f64 {
        if i + 1 == self.nt {
            self.t_max
        } else {
            self.t_min + (self.t_max - self.t_min) * i as f64 / (self.nt - 1) as f64
        }
    }

    /// Same window with both steps halved.
    pub fn refined(&self) -> Self {
        GridSpec {
            nx: 2 * (self.nx - 1) + 1,
            nt: 2 * (self.nt - 1) + 1,
            ..*self
        }
    }

    pub fn with_resolution(&self, nx: usize, nt: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, nx, self.t_min, self.t_max, nt)
    }
}

/// Row-major `nt × nx` samples; row `i` is time `spec.t(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid<T> {
    spec: GridSpec,
    values: Vec<T>,
}

impl<T> FieldGrid<T> {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.values[i * self.spec.nx + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.spec.nx..(i + 1) * self.spec.nx]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.spec.nx)
    }
}

/// Evaluates `f(t, x)` on every lattice point.
pub fn sample_grid<T, F>(spec: &GridSpec, f: F) -> FieldGrid<T>
where
    T: Send,
    F: Fn(f64, f64) -> T + Sync,
{
    let values = (0..spec.nt)
        .into_par_iter()
        .flat_map_iter(|i| {
            let t = spec.t(i);
            let f = &f;
            (0..spec.nx).map(move |j| f(t, spec.x(j)))
        })
        .collect();
    FieldGrid { spec: *spec, values }
}

pub fn sample_intensity(cfg: &DoubleSlitConfig, spec: &GridSpec) -> FieldGrid<f64> {
    sample_grid(spec, |t, x| cfg.total_intensity(t, x))
}

pub fn sample_current(cfg: &DoubleSlitConfig, spec: &GridSpec) -> FieldGrid<Vec2> {
    sample_grid(spec, |t, x| cfg.total_current(t, x))
}

/// Velocity samples with a mask of cells below the intensity floor.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    /// Masked cells hold the zero vector.
    pub grid: FieldGrid<Vec2>,
    pub mask: Vec<bool>,
}

impl VelocityField {
    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.grid.spec.nx + j]
    }

    pub fn masked_fraction(&self) -> f64 {
        self.mask.iter().filter(|&&m| m).count() as f64 / self.mask.len() as f64
    }
}

pub fn sample_velocity(cfg: &DoubleSlitConfig, spec: &GridSpec) -> VelocityField {
    let raw = sample_grid(spec, |t, x| cfg.total_velocity(t, x).ok());
    let mask = raw.values.iter().map(Option::is_none).collect();
    let values = raw.values.into_iter().map(Option::unwrap_or_default).collect();
    VelocityField {
        grid: FieldGrid { spec: *spec, values },
        mask,
    }
}

/// Riemann mass `Σ P·Δx` of every row.
pub fn row_masses(grid: &FieldGrid<f64>) -> Vec<f64> {
    let dx = grid.spec.dx();
    grid.rows().map(|row| row.iter().sum::<f64>() * dx).collect()
}

/// Second-order derivative along one axis: central inside, one-sided at the ends.
fn derivative(values: impl Fn(usize) -> f64, n: usize, k: usize, h: f64) -> f64 {
    if k == 0 {
        (-3.0 * values(0) + 4.0 * values(1) - values(2)) / (2.0 * h)
    } else if k + 1 == n {
        (3.0 * values(n - 1) - 4.0 * values(n - 2) + values(n - 3)) / (2.0 * h)
    } else {
        (values(k + 1) - values(k - 1)) / (2.0 * h)
    }
}

/// `∂P/∂t + ∂J_x/∂x` by finite differences of sampled fields.
pub fn continuity_residual_from<P, J>(spec: &GridSpec, intensity: P, current_x: J) -> Result<FieldGrid<f64>>
where
    P: Fn(f64, f64) -> f64 + Sync,
    J: Fn(f64, f64) -> f64 + Sync,
{
    if spec.nx < 5 || spec.nt < 5 {
        return Err(Error::invalid("grid", "continuity residual needs nx, nt >= 5"));
    }
    let p = sample_grid(spec, intensity);
    let jx = sample_grid(spec, current_x);
    let (nx, nt) = (spec.nx, spec.nt);
    let (dx, dt) = (spec.dx(), spec.dt());
    let values = (0..nt)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (p, jx) = (&p, &jx);
            (0..nx).map(move |j| {
                let dp_dt = derivative(|k| *p.get(k, j), nt, i, dt);
                let dj_dx = derivative(|k| *jx.get(i, k), nx, j, dx);
                dp_dt + dj_dx
            })
        })
        .collect();
    Ok(FieldGrid { spec: *spec, values })
}

pub fn continuity_residual_map(cfg: &DoubleSlitConfig, spec: &GridSpec) -> Result<FieldGrid<f64>> {
    continuity_residual_from(spec, |t, x| cfg.total_intensity(t, x), |t, x| cfg.total_current(t, x).x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub max: f64,
    pub mean: f64,
}

/// Max and mean absolute value over interior cells (boundary rows and columns excluded).
pub fn interior_norms(grid: &FieldGrid<f64>) -> ResidualNorms {
    let (nx, nt) = (grid.spec.nx, grid.spec.nt);
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 1..nt.saturating_sub(1) {
        for &v in &grid.row(i)[1..nx - 1] {
            max = max.max(v.abs());
            sum += v.abs();
            count += 1;
        }
    }
    ResidualNorms {
        max,
        mean: if count > 0 { sum / count as f64 } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::{GaussianPacket, PhysicalScales};

    fn symmetric() -> DoubleSlitConfig {
        DoubleSlitConfig::symmetric(5.0, -0.25, 1.0, PhysicalScales::natural(), 1.0).unwrap()
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(1.0, 0.0, 10, 0.0, 1.0, 10).is_err());
        assert!(GridSpec::new(0.0, 1.0, 1, 0.0, 1.0, 10).is_err());
        assert!(GridSpec::new(0.0, 1.0, 10, 0.0, 0.0, 10).is_err());
        let g = GridSpec::new(-1.0, 1.0, 5, 0.0, 2.0, 3).unwrap();
        assert_eq!(g.x(0), -1.0);
        assert_eq!(g.x(4), 1.0);
        assert_eq!(g.x(2), 0.0);
        assert_eq!(g.t(1), 1.0);
        let r = g.refined();
        assert_eq!((r.nx, r.nt), (9, 5));
        assert_eq!(r.dx(), 0.5 * g.dx());
    }

    #[test]
    fn symmetric_rows_are_even() {
        let cfg = symmetric();
        let spec = GridSpec::new(-30.0, 30.0, 121, 0.0, 20.0, 11).unwrap();
        let grid = sample_intensity(&cfg, &spec);
        for row in grid.rows() {
            for j in 0..spec.nx {
                let (a, b) = (row[j], row[spec.nx - 1 - j]);
                assert!((a - b).abs() <= 1e-12 * a.max(b).max(1e-300));
                assert!(a >= 0.0);
            }
        }
    }

    #[test]
    fn riemann_mass_is_unity() {
        let cfg = symmetric();
        let (lo, hi) = cfg.support(20.0, 10.0);
        let spec = GridSpec::new(lo, hi, 1024, 0.0, 20.0, 9).unwrap();
        for m in row_masses(&sample_intensity(&cfg, &spec)) {
            assert!((m - 1.0).abs() < 1e-4, "mass {m}");
        }
    }

    #[test]
    fn late_maximum_on_central_fringe() {
        let cfg = DoubleSlitConfig::symmetric(3.0, 0.0, 1.0, PhysicalScales::natural(), 1.0).unwrap();
        let spec = GridSpec::new(-20.0, 20.0, 401, 0.0, 12.0, 7).unwrap();
        let grid = sample_intensity(&cfg, &spec);
        let last = grid.row(spec.nt - 1);
        let argmax = (0..spec.nx).max_by(|&a, &b| last[a].total_cmp(&last[b])).unwrap();
        assert_eq!(argmax, 200);
    }

    #[test]
    fn velocity_centre_column_and_single_channel() {
        let cfg = symmetric();
        let spec = GridSpec::new(-10.0, 10.0, 41, 0.0, 20.0, 21).unwrap();
        let v = sample_velocity(&cfg, &spec);
        for i in 0..spec.nt {
            assert!(!v.is_masked(i, 20));
            assert_eq!(v.grid.get(i, 20).x, 0.0);
        }

        let s = PhysicalScales::natural();
        let p1 = GaussianPacket::unit(1.0, 0.3, 1.0).unwrap();
        let lone = DoubleSlitConfig::new(p1, GaussianPacket::new(0.0, 0.0, 1.0, 0.0).unwrap(), s, 1.0).unwrap();
        let v = sample_velocity(&lone, &spec);
        for i in 0..spec.nt {
            for j in 0..spec.nx {
                if v.is_masked(i, j) {
                    assert_eq!(*v.grid.get(i, j), Vec2::default());
                    continue;
                }
                let expect = p1.convective_velocity(&s, spec.t(i), spec.x(j));
                assert!((v.grid.get(i, j).x - expect).abs() <= 1e-12 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn residual_requires_five_points() {
        let spec = GridSpec::new(-1.0, 1.0, 4, 0.0, 1.0, 10).unwrap();
        assert!(continuity_residual_map(&symmetric(), &spec).is_err());
    }

    #[test]
    fn interior_norms_skip_boundary() {
        let spec = GridSpec::new(0.0, 1.0, 5, 0.0, 1.0, 5).unwrap();
        let grid = sample_grid(&spec, |t, x| if t == 0.0 || x == 1.0 { 100.0 } else { -2.0 });
        let n = interior_norms(&grid);
        assert_eq!(n, ResidualNorms { max: 2.0, mean: 2.0 });
    }
}
