//! Complex-amplitude reference for the classical engine.
//!
//! Each slit is the textbook freely evolving Gaussian `Ψ_j`; the pair
//! superposes as `N(Ψ₁ + Ψ₂)`. Intensity, current and velocity are taken
//! from `Ψ` and its closed-form spatial derivative only. Nothing here calls
//! into the density or velocity code of [`crate::packets`] or
//! [`crate::interference`]; the config supplies parameters and `N`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interference::{DoubleSlitConfig, EPS_FLOOR_REL};
use crate::packets::{GaussianPacket, PhysicalScales};
use crate::vector::Vec2;

/// Value of `Ψ` at a point, in units of length^(−1/2).
pub type ComplexAmplitude = Complex64;

/// Complex width `σ₀ + i·D·t/σ₀`; its modulus is `σ(t)`.
fn complex_width(packet: &GaussianPacket, scales: &PhysicalScales, t: f64) -> Complex64 {
    Complex64::new(packet.sigma0, scales.diffusivity() * t / packet.sigma0)
}

/// `Ψ` and `∂Ψ/∂x` of one freely evolving packet.
pub fn packet_wavefunction_with_gradient(
    packet: &GaussianPacket,
    scales: &PhysicalScales,
    t: f64,
    x: f64,
) -> (ComplexAmplitude, ComplexAmplitude) {
    let width = complex_width(packet, scales, t);
    let k = scales.mass() * packet.drift / scales.hbar();
    let xi = x - packet.center - packet.drift * t;
    let envelope = 1.0 / (4.0 * packet.sigma0 * width);
    let exponent = -envelope * xi * xi + Complex64::i() * (k * (x - packet.center - 0.5 * packet.drift * t));
    let prefactor = (packet.weight.sqrt() * (2.0 * PI).powf(-0.25)) / width.sqrt();
    let psi = prefactor * exponent.exp();
    let log_slope = -2.0 * envelope * xi + Complex64::i() * k;
    (psi, psi * log_slope)
}

/// Freely evolving Gaussian amplitude, `|Ψ|²` equal to the packet density.
pub fn packet_wavefunction(packet: &GaussianPacket, scales: &PhysicalScales, t: f64, x: f64) -> ComplexAmplitude {
    packet_wavefunction_with_gradient(packet, scales, t, x).0
}

/// `N(Ψ₁ + Ψ₂)` and its spatial derivative.
pub fn superposed_with_gradient(cfg: &DoubleSlitConfig, t: f64, x: f64) -> (ComplexAmplitude, ComplexAmplitude) {
    let (a, da) = packet_wavefunction_with_gradient(cfg.packet1(), cfg.scales(), t, x);
    let (b, db) = packet_wavefunction_with_gradient(cfg.packet2(), cfg.scales(), t, x);
    let n = cfg.normalization();
    ((a + b) * n, (da + db) * n)
}

pub fn superposed_wavefunction(cfg: &DoubleSlitConfig, t: f64, x: f64) -> ComplexAmplitude {
    superposed_with_gradient(cfg, t, x).0
}

/// `|Ψ_tot|²`.
pub fn oracle_intensity(cfg: &DoubleSlitConfig, t: f64, x: f64) -> f64 {
    superposed_wavefunction(cfg, t, x).norm_sqr()
}

/// Probability current `((ħ/m)·Im{Ψ*∂Ψ}, |Ψ|²·v_y)`.
pub fn quantum_current(cfg: &DoubleSlitConfig, t: f64, x: f64) -> Vec2 {
    let (psi, dpsi) = superposed_with_gradient(cfg, t, x);
    let s = cfg.scales();
    let jx = s.hbar() / s.mass() * (psi.conj() * dpsi).im;
    Vec2::new(jx, psi.norm_sqr() * cfg.forward_speed())
}

/// Upper bound on `|Ψ_tot|²` at time `t`, from the moduli of the complex widths.
fn oracle_peak_bound(cfg: &DoubleSlitConfig, t: f64) -> f64 {
    let modulus = |p: &GaussianPacket| {
        let w = complex_width(p, cfg.scales(), t).norm();
        (p.weight / ((2.0 * PI).sqrt() * w)).sqrt()
    };
    let n = cfg.normalization();
    let sum = modulus(cfg.packet1()) + modulus(cfg.packet2());
    n * n * sum * sum
}

/// `−(iħ/2m)[∇Ψ/Ψ − ∇Ψ*/Ψ*]` in x, plus the common forward speed in y.
pub fn quantum_velocity(cfg: &DoubleSlitConfig, t: f64, x: f64) -> Result<Vec2> {
    let (psi, dpsi) = superposed_with_gradient(cfg, t, x);
    let intensity = psi.norm_sqr();
    let floor = EPS_FLOOR_REL * oracle_peak_bound(cfg, t);
    if !(intensity > floor) {
        return Err(Error::NodeSingularity { t, x, intensity, floor });
    }
    let s = cfg.scales();
    let ratio = dpsi / psi;
    let vx = (Complex64::new(0.0, -0.5 * s.hbar() / s.mass()) * (ratio - ratio.conj())).re;
    Ok(Vec2::new(vx, cfg.forward_speed()))
}
