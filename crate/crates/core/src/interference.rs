//! Superposition of the two slit channels.
//!
//! The phase difference comes from the per-packet action phases,
//! `φ = (S₁ − S₂)/ħ`. With it the channels combine into the intensity
//! `N²(P₁ + P₂ + 2√(P₁P₂)·cos φ)` and into the averaged current, whose
//! transverse part mixes the convective fields through `cos φ` and the
//! osmotic fields through `sin φ`.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::packets::{GaussianPacket, PhysicalScales};
use crate::quadrature::{self, Tolerance};
use crate::vector::Vec2;

/// Intensity floor relative to the instantaneous peak.
pub const EPS_FLOOR_REL: f64 = 1e-12;

/// Half-width of the normalization window, in initial widths.
const NORMALIZATION_SIGMAS: f64 = 10.0;

/// Two slit channels sharing one forward speed.
///
/// By convention packet 1 sits at `+X` and packet 2 at `−X`; packets that
/// approach each other have `drift₁ < 0 < drift₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleSlitConfig {
    packet1: GaussianPacket,
    packet2: GaussianPacket,
    scales: PhysicalScales,
    forward_speed: f64,
    normalization: f64,
}

/// The additive pieces of the transverse current at one point (before `N²`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentTerms {
    /// `P₁v₁ + P₂v₂`
    pub direct: f64,
    /// `√(P₁P₂)(v₁ + v₂)·cos φ`
    pub coherent: f64,
    /// `√(P₁P₂)(u₂ − u₁)·sin φ`
    pub osmotic: f64,
}

impl CurrentTerms {
    pub fn sum(&self) -> f64 {
        self.direct + self.coherent + self.osmotic
    }
}

#[derive(Debug, Clone, Copy)]
struct Channel {
    amplitude: f64,
    convective: f64,
    osmotic: f64,
}

impl DoubleSlitConfig {
    /// Builds the config and fixes the normalization at `t = 0`.
    pub fn new(
        packet1: GaussianPacket,
        packet2: GaussianPacket,
        scales: PhysicalScales,
        forward_speed: f64,
    ) -> Result<Self> {
        packet1.validate()?;
        packet2.validate()?;
        if !(forward_speed.is_finite() && forward_speed > 0.0) {
            return Err(Error::invalid(
                "forward_speed",
                format!("must be finite and > 0, got {forward_speed}"),
            ));
        }
        let normalization = compute_normalization(&packet1, &packet2, &scales)?;
        Ok(DoubleSlitConfig {
            packet1,
            packet2,
            scales,
            forward_speed,
            normalization,
        })
    }

    /// Mirrored pair: packet 1 at `+center` with `drift`, packet 2 at `−center` with `−drift`.
    pub fn symmetric(center: f64, drift: f64, sigma0: f64, scales: PhysicalScales, forward_speed: f64) -> Result<Self> {
        Self::new(
            GaussianPacket::unit(center, drift, sigma0)?,
            GaussianPacket::unit(-center, -drift, sigma0)?,
            scales,
            forward_speed,
        )
    }

    pub fn packet1(&self) -> &GaussianPacket {
        &self.packet1
    }

    pub fn packet2(&self) -> &GaussianPacket {
        &self.packet2
    }

    pub fn packets(&self) -> [&GaussianPacket; 2] {
        [&self.packet1, &self.packet2]
    }

    pub fn scales(&self) -> &PhysicalScales {
        &self.scales
    }

    pub fn forward_speed(&self) -> f64 {
        self.forward_speed
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Same config with the packets swapped and everything mirrored through `x = 0`.
    pub fn mirrored(&self) -> Self {
        let flip = |p: &GaussianPacket| GaussianPacket {
            center: -p.center,
            drift: -p.drift,
            ..*p
        };
        DoubleSlitConfig {
            packet1: flip(&self.packet2),
            packet2: flip(&self.packet1),
            ..*self
        }
    }

    fn channel(&self, packet: &GaussianPacket, t: f64, x: f64) -> Channel {
        Channel {
            amplitude: packet.amplitude(&self.scales, t, x),
            convective: packet.convective_velocity(&self.scales, t, x),
            osmotic: packet.osmotic_velocity(&self.scales, t, x),
        }
    }

    /// `φ(x, t) = (S₁ − S₂)/ħ`.
    pub fn phase_difference(&self, t: f64, x: f64) -> f64 {
        let s1 = self.packet1.action_phase(&self.scales, t, x);
        let s2 = self.packet2.action_phase(&self.scales, t, x);
        (s1 - s2) / self.scales.hbar()
    }

    /// `N²(P₁ + P₂ + 2√(P₁P₂)·cos φ)`.
    pub fn total_intensity(&self, t: f64, x: f64) -> f64 {
        let r1 = self.packet1.amplitude(&self.scales, t, x);
        let r2 = self.packet2.amplitude(&self.scales, t, x);
        let phi = self.phase_difference(t, x);
        self.normalization * self.normalization * combine_intensity(r1, r2, phi)
    }

    /// Transverse current split into its direct, coherent and osmotic parts (without `N²`).
    pub fn current_terms(&self, t: f64, x: f64) -> CurrentTerms {
        let c1 = self.channel(&self.packet1, t, x);
        let c2 = self.channel(&self.packet2, t, x);
        let phi = self.phase_difference(t, x);
        let (sin_phi, cos_phi) = phi.sin_cos();
        let cross = c1.amplitude * c2.amplitude;
        let p1 = c1.amplitude * c1.amplitude;
        let p2 = c2.amplitude * c2.amplitude;
        CurrentTerms {
            direct: p1 * c1.convective + p2 * c2.convective,
            coherent: cross * (c1.convective + c2.convective) * cos_phi,
            osmotic: cross * (c2.osmotic - c1.osmotic) * sin_phi,
        }
    }

    /// Averaged total current `(J_x, J_y)`.
    ///
    /// The forward component is `v_y` times the intensity, since both
    /// channels carry the same forward speed.
    pub fn total_current(&self, t: f64, x: f64) -> Vec2 {
        let n2 = self.normalization * self.normalization;
        let jx = n2 * self.current_terms(t, x).sum();
        let jy = self.total_intensity(t, x) * self.forward_speed;
        Vec2::new(jx, jy)
    }

    /// Largest intensity the superposition can reach at time `t`,
    /// `N²(√max P₁ + √max P₂)²`.
    pub fn peak_bound(&self, t: f64) -> f64 {
        let a = self.packet1.peak_density(&self.scales, t).sqrt();
        let b = self.packet2.peak_density(&self.scales, t).sqrt();
        self.normalization * self.normalization * (a + b) * (a + b)
    }

    /// Intensity below which the velocity field is treated as singular.
    pub fn intensity_floor(&self, t: f64) -> f64 {
        EPS_FLOOR_REL * self.peak_bound(t)
    }

    /// Flux-line velocity `J / P`.
    pub fn total_velocity(&self, t: f64, x: f64) -> Result<Vec2> {
        let intensity = self.total_intensity(t, x);
        let floor = self.intensity_floor(t);
        if !(intensity > floor) {
            return Err(Error::NodeSingularity { t, x, intensity, floor });
        }
        let n2 = self.normalization * self.normalization;
        let jx = n2 * self.current_terms(t, x).sum();
        Ok(Vec2::new(jx / intensity, self.forward_speed))
    }

    /// Transverse wavenumber `k_x = m(v₁ − v₂)/2ħ` of one channel relative to the midpoint.
    ///
    /// Where the dispersive part of `φ` is negligible, `φ ≈ 2k_x·x`, so the
    /// dark fringes sit at [`dark_nodes`]`(k_x, ..)`.
    pub fn transverse_wavenumber(&self) -> f64 {
        0.5 * self.scales.mass() * (self.packet1.drift - self.packet2.drift) / self.scales.hbar()
    }

    /// Narrowest packet width among channels with nonzero weight.
    pub fn sigma_min(&self, t: f64) -> f64 {
        self.active_packets()
            .map(|p| p.sigma_t(&self.scales, t))
            .fold(f64::INFINITY, f64::min)
    }

    fn active_packets(&self) -> impl Iterator<Item = &GaussianPacket> {
        self.packets().into_iter().filter(|p| p.weight > 0.0)
    }

    /// Hull of `centre ± n_sigma·σ(t)` over the active channels.
    pub fn support(&self, t: f64, n_sigma: f64) -> (f64, f64) {
        envelope_hull(self.active_packets(), &self.scales, t, n_sigma)
    }

    /// `∫ intensity dx` over the ±10σ(t) hull.
    pub fn mass(&self, t: f64) -> f64 {
        let (lo, hi) = self.support(t, NORMALIZATION_SIGMAS);
        self.mass_between(t, lo, hi)
    }

    /// `∫ intensity dx` between two positions (either order; always ≥ 0).
    pub fn mass_between(&self, t: f64, a: f64, b: f64) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        quadrature::integrate(|x| self.total_intensity(t, x), lo, hi, Tolerance::default())
    }
}

fn envelope_hull<'a>(
    packets: impl Iterator<Item = &'a GaussianPacket>,
    scales: &PhysicalScales,
    t: f64,
    n_sigma: f64,
) -> (f64, f64) {
    packets.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let c = p.moving_center(t);
        let w = n_sigma * p.sigma_t(scales, t);
        (lo.min(c - w), hi.max(c + w))
    })
}

/// `R₁² + R₂² + 2R₁R₂·cos φ`, arranged as `(R₁ − R₂)² + 4R₁R₂·cos²(φ/2)` so
/// that dark fringes are not computed by cancellation.
fn combine_intensity(r1: f64, r2: f64, phi: f64) -> f64 {
    let diff = r1 - r2;
    let half = (0.5 * phi).cos();
    diff * diff + 4.0 * r1 * r2 * half * half
}

/// `N` such that the intensity integrates to one at `t = 0`.
pub fn compute_normalization(
    packet1: &GaussianPacket,
    packet2: &GaussianPacket,
    scales: &PhysicalScales,
) -> Result<f64> {
    if packet1.weight == 0.0 && packet2.weight == 0.0 {
        return Err(Error::DegenerateConfig);
    }
    let active = [packet1, packet2].into_iter().filter(|p| p.weight > 0.0);
    let (lo, hi) = envelope_hull(active, scales, 0.0, NORMALIZATION_SIGMAS);
    let raw = |x: f64| {
        let r1 = packet1.amplitude(scales, 0.0, x);
        let r2 = packet2.amplitude(scales, 0.0, x);
        let phi = (packet1.action_phase(scales, 0.0, x) - packet2.action_phase(scales, 0.0, x)) / scales.hbar();
        combine_intensity(r1, r2, phi)
    };
    let tol = Tolerance {
        panels: 256,
        ..Tolerance::default()
    };
    let mass = quadrature::integrate(raw, lo, hi, tol);
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::DegenerateConfig);
    }
    Ok(1.0 / mass.sqrt())
}

/// Dark-fringe positions `x_n = (n + ½)π/k` for every `n` in the range.
pub fn dark_nodes(wavenumber: f64, n_range: RangeInclusive<i64>) -> Result<Vec<f64>> {
    if wavenumber == 0.0 || !wavenumber.is_finite() {
        return Err(Error::ZeroWavenumber);
    }
    Ok(n_range
        .map(|n| (n as f64 + 0.5) * std::f64::consts::PI / wavenumber)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_like() -> DoubleSlitConfig {
        DoubleSlitConfig::symmetric(5.0, -0.25, 1.0, PhysicalScales::natural(), 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn phase_is_odd_in_x_for_symmetric_pair() {
        let cfg = fig2_like();
        for t in [0.0, 3.0, 11.0] {
            assert_eq!(cfg.phase_difference(t, 0.0), 0.0);
            for x in [0.4, 2.0, 7.5] {
                let a = cfg.phase_difference(t, x);
                let b = cfg.phase_difference(t, -x);
                assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn symmetric_phase_matches_product_form() {
        // φ = 2m v_x x/ħ − (X + v_x t)·x·(ħ/2m)·t/(σ²σ₀²)
        let s = PhysicalScales::new(1.3, 0.7).unwrap();
        let (big_x, vx, s0) = (4.0, -0.3, 1.2);
        let cfg = DoubleSlitConfig::symmetric(big_x, vx, s0, s, 1.0).unwrap();
        let (hbar, m) = (s.hbar(), s.mass());
        let mut seed = 0x2545_f491_4f6c_dd1d_u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let x = -20.0 + 40.0 * next();
            let t = 30.0 * next();
            let sig2 = cfg.packet1().sigma_sq(&s, t);
            let closed = 2.0 * m * vx * x / hbar - (big_x + vx * t) * x * (hbar / (2.0 * m)) * t / (sig2 * s0 * s0);
            let got = cfg.phase_difference(t, x);
            assert!(
                (got - closed).abs() <= 1e-9 * closed.abs().max(1e-3),
                "t={t} x={x}: {got} vs {closed}"
            );
        }
    }

    #[test]
    fn dispersive_phase_vanishes_when_centres_meet() {
        // X = −v_x t: φ = 2k_x x exactly
        let cfg = fig2_like();
        let t = 20.0;
        let k = cfg.scales().mass() * cfg.packet1().drift / cfg.scales().hbar();
        for x in [-3.0, 0.5, 6.0] {
            assert!(rel(cfg.phase_difference(t, x), 2.0 * k * x) < 1e-12);
        }
    }

    #[test]
    fn single_slit_limits() {
        let s = PhysicalScales::natural();
        let p1 = GaussianPacket::new(1.0, 0.2, 0.8, 1.0).unwrap();
        let p2 = GaussianPacket::new(-3.0, -0.1, 1.1, 0.0).unwrap();
        let cfg = DoubleSlitConfig::new(p1, p2, s, 1.5).unwrap();
        let n2 = cfg.normalization().powi(2);
        assert!(rel(cfg.normalization(), 1.0) < 1e-10);
        for (t, x) in [(0.0, 0.3), (2.0, -1.0), (5.0, 4.0)] {
            assert!(rel(cfg.total_intensity(t, x), n2 * p1.density(&s, t, x)) < 1e-13);
            let j = cfg.total_current(t, x);
            let p = n2 * p1.density(&s, t, x);
            assert!(rel(j.x, p * p1.convective_velocity(&s, t, x)) < 1e-13);
            assert!(rel(j.y, p * 1.5) < 1e-13);
            let v = cfg.total_velocity(t, x).unwrap();
            assert!(rel(v.x, p1.convective_velocity(&s, t, x)) < 1e-13);
            assert_eq!(v.y, 1.5);
        }
    }

    #[test]
    fn centerline_of_symmetric_config() {
        let cfg = fig2_like();
        for t in [0.0, 1.0, 7.0, 19.5] {
            assert_eq!(cfg.total_current(t, 0.0).x, 0.0);
            assert_eq!(cfg.current_terms(t, 0.0).osmotic, 0.0);
            let v = cfg.total_velocity(t, 0.0).unwrap();
            assert_eq!(v, Vec2::new(0.0, 1.0));
            for x in [0.8, 3.3, 12.0] {
                assert!(rel(cfg.total_intensity(t, x), cfg.total_intensity(t, -x)) < 1e-12);
            }
        }
    }

    #[test]
    fn mirror_covariance() {
        let s = PhysicalScales::natural();
        let cfg = DoubleSlitConfig::new(
            GaussianPacket::new(5.0, -0.1, 3.0, 2.0).unwrap(),
            GaussianPacket::new(-5.0, 0.4, 1.0, 1.0).unwrap(),
            s,
            1.0,
        )
        .unwrap();
        let m = cfg.mirrored();
        for (t, x) in [(0.0, 1.0), (4.0, -2.5), (13.0, 6.0)] {
            assert!(rel(m.total_intensity(t, -x), cfg.total_intensity(t, x)) < 1e-10);
            let a = cfg.total_current(t, x).x;
            let b = m.total_current(t, -x).x;
            assert!((a + b).abs() <= 1e-10 * a.abs().max(1e-12));
        }
    }

    #[test]
    fn intensity_bounds() {
        let s = PhysicalScales::natural();
        let cfg = DoubleSlitConfig::new(
            GaussianPacket::new(2.0, -0.3, 1.0, 2.0).unwrap(),
            GaussianPacket::new(-2.0, 0.5, 0.5, 1.0).unwrap(),
            s,
            1.0,
        )
        .unwrap();
        let n2 = cfg.normalization().powi(2);
        for i in 0..200 {
            let t = 0.1 * i as f64;
            let x = -8.0 + 0.08 * i as f64;
            let p = cfg.total_intensity(t, x);
            let r1 = cfg.packet1().amplitude(&s, t, x);
            let r2 = cfg.packet2().amplitude(&s, t, x);
            assert!(p >= 0.0);
            assert!(p <= n2 * (r1 + r2).powi(2) * (1.0 + 1e-12));
            assert!(p <= cfg.peak_bound(t) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn normalization_examples() {
        let s = PhysicalScales::natural();
        let far = DoubleSlitConfig::symmetric(50.0, 0.0, 1.0, s, 1.0).unwrap();
        assert!(rel(far.normalization(), 1.0 / 2f64.sqrt()) < 1e-10);
        let overlap = DoubleSlitConfig::symmetric(0.7, -0.4, 1.0, s, 1.0).unwrap();
        assert!((overlap.mass(0.0) - 1.0).abs() < 1e-8);
        let none = GaussianPacket::new(0.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(
            DoubleSlitConfig::new(none, none, s, 1.0).unwrap_err(),
            Error::DegenerateConfig
        );
    }

    #[test]
    fn dark_node_examples() {
        let pi = std::f64::consts::PI;
        assert_eq!(dark_nodes(pi, 0..=0).unwrap(), vec![0.5]);
        assert_eq!(dark_nodes(pi, -1..=-1).unwrap(), vec![-0.5]);
        assert_eq!(dark_nodes(0.0, 0..=3).unwrap_err(), Error::ZeroWavenumber);
        let nodes = dark_nodes(2.0, -3..=2).unwrap();
        for (a, b) in nodes.iter().zip(nodes.iter().rev()) {
            assert!((a + b).abs() < 1e-15);
        }
    }

    #[test]
    fn velocity_rejects_points_below_floor() {
        let cfg = fig2_like();
        let err = cfg.total_velocity(0.0, 400.0).unwrap_err();
        assert!(matches!(err, Error::NodeSingularity { .. }));
    }
}
