//! Closed-form kinematics of a single freely dispersing Gaussian packet.
//!
//! A packet is one slit channel. Its density spreads ballistically,
//! `σ²(t) = σ₀² + u₀²t²` with `u₀ = D/σ₀` and `D = ħ/2m`, while its centre
//! moves with the drift velocity. Two velocity fields live on top of the
//! density: the convective field `v = ∇S/m` (drift plus dispersive
//! stretching) and the osmotic field `u = D·∇ln P`, which points away
//! from the moving centre.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Action and mass scales. `diffusivity` is always `hbar / (2 mass)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalScales {
    hbar: f64,
    mass: f64,
    diffusivity: f64,
}

impl PhysicalScales {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::invalid("hbar", format!("must be finite and > 0, got {hbar}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::invalid("mass", format!("must be finite and > 0, got {mass}")));
        }
        Ok(PhysicalScales {
            hbar,
            mass,
            diffusivity: hbar / (2.0 * mass),
        })
    }

    /// ħ = m = 1, so D = 1/2.
    pub fn natural() -> Self {
        PhysicalScales {
            hbar: 1.0,
            mass: 1.0,
            diffusivity: 0.5,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn diffusivity(&self) -> f64 {
        self.diffusivity
    }
}

impl Default for PhysicalScales {
    fn default() -> Self {
        Self::natural()
    }
}

/// One slit channel at `t = 0`.
///
/// `weight` scales the density, so the amplitude is `sqrt(weight · gaussian)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub center: f64,
    pub drift: f64,
    pub sigma0: f64,
    pub weight: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, drift: f64, sigma0: f64, weight: f64) -> Result<Self> {
        let packet = GaussianPacket {
            center,
            drift,
            sigma0,
            weight,
        };
        packet.validate()?;
        Ok(packet)
    }

    /// Unit-weight packet.
    pub fn unit(center: f64, drift: f64, sigma0: f64) -> Result<Self> {
        Self::new(center, drift, sigma0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(Error::invalid("center", "must be finite"));
        }
        if !self.drift.is_finite() {
            return Err(Error::invalid("drift", "must be finite"));
        }
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(Error::invalid(
                "sigma0",
                format!("must be finite and > 0, got {}", self.sigma0),
            ));
        }
        if !(self.weight.is_finite() && self.weight >= 0.0) {
            return Err(Error::invalid(
                "weight",
                format!("must be finite and >= 0, got {}", self.weight),
            ));
        }
        Ok(())
    }

    /// Initial osmotic speed scale `u₀ = D/σ₀`.
    pub fn u0(&self, scales: &PhysicalScales) -> f64 {
        scales.diffusivity() / self.sigma0
    }

    /// `σ²(t) = σ₀² + u₀²t²`.
    pub fn sigma_sq(&self, scales: &PhysicalScales, t: f64) -> f64 {
        let spread = self.u0(scales) * t;
        self.sigma0 * self.sigma0 + spread * spread
    }

    /// `σ(t) = σ₀·sqrt(1 + D²t²/σ₀⁴)`.
    pub fn sigma_t(&self, scales: &PhysicalScales, t: f64) -> f64 {
        self.sigma_sq(scales, t).sqrt()
    }

    /// Time-dependent diffusivity of ballistic diffusion, `D(t) = u₀²t`.
    pub fn ballistic_diffusivity(&self, scales: &PhysicalScales, t: f64) -> f64 {
        let u0 = self.u0(scales);
        u0 * u0 * t
    }

    /// `σ̇/σ = u₀²t/σ²(t)`: the rate at which the packet stretches.
    pub fn stretch_rate(&self, scales: &PhysicalScales, t: f64) -> f64 {
        self.ballistic_diffusivity(scales, t) / self.sigma_sq(scales, t)
    }

    /// Position of the density maximum, `X + v_x·t`.
    pub fn moving_center(&self, t: f64) -> f64 {
        self.center + self.drift * t
    }

    /// Offset from the moving centre.
    fn offset(&self, t: f64, x: f64) -> f64 {
        x - self.center - self.drift * t
    }

    pub fn density(&self, scales: &PhysicalScales, t: f64, x: f64) -> f64 {
        let var = self.sigma_sq(scales, t);
        let xi = self.offset(t, x);
        self.weight * (-xi * xi / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
    }

    /// Largest value the density takes at time `t`.
    pub fn peak_density(&self, scales: &PhysicalScales, t: f64) -> f64 {
        self.weight / (2.0 * PI * self.sigma_sq(scales, t)).sqrt()
    }

    /// `R = sqrt(density)`.
    pub fn amplitude(&self, scales: &PhysicalScales, t: f64, x: f64) -> f64 {
        self.density(scales, t, x).sqrt()
    }

    /// `u = −(ħ/m)·∇R/R = D·(x − X − v_x t)/σ²(t)`, outward from the centre.
    pub fn osmotic_velocity(&self, scales: &PhysicalScales, t: f64, x: f64) -> f64 {
        scales.diffusivity() * self.offset(t, x) / self.sigma_sq(scales, t)
    }

    /// `v = v_x + (x − X − v_x t)·u₀²t/σ²(t)`.
    pub fn convective_velocity(&self, scales: &PhysicalScales, t: f64, x: f64) -> f64 {
        self.drift + self.offset(t, x) * self.stretch_rate(scales, t)
    }

    /// Action phase `S(x, t)` whose gradient over `m` is the convective velocity.
    ///
    /// The last term is the spatially uniform Gouy phase `−(ħ/2)·atan(u₀t/σ₀)`.
    pub fn action_phase(&self, scales: &PhysicalScales, t: f64, x: f64) -> f64 {
        let m = scales.mass();
        let xi = self.offset(t, x);
        let plane = m * self.drift * (x - self.center - 0.5 * self.drift * t);
        let stretch = 0.5 * m * xi * xi * self.stretch_rate(scales, t);
        let gouy = 0.5 * scales.hbar() * (self.u0(scales) * t / self.sigma0).atan();
        plane + stretch - gouy
    }
}
