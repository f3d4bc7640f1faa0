//! Named configurations mirroring the double-slit figures.
//!
//! Only the relations between the two packets are prescribed; absolute
//! values are chosen in natural units (ħ = m = 1): slits at ±5, σ₀ = 1,
//! forward speed 1, window `t ∈ [0, 20]`.
//!
//! | name    | drifts (1, 2)  | widths (1, 2) | weights (1, 2) |
//! |---------|----------------|---------------|----------------|
//! | `fig2`  | (−0.25, 0.25)  | (1, 1)        | (1, 1)         |
//! | `fig3`  | (0, 0)         | (1, 1)        | (1, 1)         |
//! | `fig2b` | (−0.1, 0.4)    | (1, 1)        | (1, 1)         |
//! | `fig2c` | (−0.1, 0.4)    | (3, 1)        | (1, 1)         |
//! | `fig2d` | (−0.1, 0.4)    | (3, 1)        | (2, 1)         |

use crate::error::{Error, Result};
use crate::experiment::ExperimentConfig;
use crate::interference::DoubleSlitConfig;
use crate::packets::{GaussianPacket, PhysicalScales};

pub const PRESET_NAMES: [&str; 5] = ["fig2", "fig3", "fig2b", "fig2c", "fig2d"];

const SLIT_OFFSET: f64 = 5.0;

struct Channels {
    drifts: (f64, f64),
    widths: (f64, f64),
    weights: (f64, f64),
}

fn channels(name: &str) -> Option<Channels> {
    let fig2b = Channels {
        drifts: (-0.1, 0.4),
        widths: (1.0, 1.0),
        weights: (1.0, 1.0),
    };
    Some(match name {
        "fig2" => Channels {
            drifts: (-0.25, 0.25),
            ..fig2b
        },
        "fig3" => Channels {
            drifts: (0.0, 0.0),
            ..fig2b
        },
        "fig2b" => fig2b,
        "fig2c" => Channels {
            widths: (3.0, 1.0),
            ..fig2b
        },
        "fig2d" => Channels {
            widths: (3.0, 1.0),
            weights: (2.0, 1.0),
            ..fig2b
        },
        _ => return None,
    })
}

/// The two-slit part of a preset.
pub fn preset_slits(name: &str) -> Result<DoubleSlitConfig> {
    let c = channels(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    DoubleSlitConfig::new(
        GaussianPacket::new(SLIT_OFFSET, c.drifts.0, c.widths.0, c.weights.0)?,
        GaussianPacket::new(-SLIT_OFFSET, c.drifts.1, c.widths.1, c.weights.1)?,
        PhysicalScales::natural(),
        1.0,
    )
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::with_defaults(preset_slits(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_relations_hold() {
        let fig2 = preset("fig2").unwrap().slits;
        assert_eq!(fig2.packet1().drift, -fig2.packet2().drift);
        let fig3 = preset("fig3").unwrap().slits;
        assert_eq!((fig3.packet1().drift, fig3.packet2().drift), (0.0, 0.0));
        let fig2b = preset("fig2b").unwrap().slits;
        assert_eq!(fig2b.packet2().drift, -4.0 * fig2b.packet1().drift);
        let fig2c = preset("fig2c").unwrap().slits;
        assert_eq!(fig2c.packet1().sigma0, 3.0 * fig2c.packet2().sigma0);
        assert_eq!(fig2c.packet2().drift, -4.0 * fig2c.packet1().drift);
        let fig2d = preset("fig2d").unwrap().slits;
        assert_eq!(fig2d.packet1().weight, 2.0 * fig2d.packet2().weight);
        assert_eq!(fig2d.packet1().sigma0, 3.0 * fig2d.packet2().sigma0);
    }

    #[test]
    fn presets_are_normalized() {
        for name in PRESET_NAMES {
            let cfg = preset(name).unwrap();
            assert!((cfg.slits.mass(0.0) - 1.0).abs() < 1e-8, "{name}");
        }
    }

    #[test]
    fn unknown_preset() {
        assert_eq!(preset("fig9").unwrap_err(), Error::UnknownPreset("fig9".into()));
    }
}
