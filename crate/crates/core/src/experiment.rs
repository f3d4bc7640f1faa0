//! File form of an experiment: a TOML document with optional sections.
//!
//! ```toml
//! forward_speed = 1.0          # optional, default 1
//!
//! [scales]                     # optional, default hbar = mass = 1
//! hbar = 1.0
//! mass = 1.0
//!
//! [[packets]]                  # exactly two; packet 1 first
//! center = 5.0
//! drift = -0.25
//! sigma0 = 1.0
//! weight = 1.0                 # optional, default 1
//!
//! [[packets]]
//! center = -5.0
//! drift = 0.25
//! sigma0 = 1.0
//!
//! [grid]                       # optional
//! x_min = -30.0
//! x_max = 30.0
//! nx = 512
//! t_min = 0.0
//! t_max = 20.0
//! nt = 512
//!
//! [seeds]                      # optional
//! count = 20
//! strategy = "equidistant"     # or "equal_flux"
//! span = [-8.0, 8.0]
//!
//! [integrator]                 # optional
//! base_step = 0.01
//! max_substeps = 1024
//! speed_cap = 50.0
//!
//! [render]                     # optional, every key optional
//! width_px = 512
//! height_px = 512
//! colormap = "white_yellow_orange"
//! trajectory_color = "#ff0000"
//! ```
//!
//! Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::GridSpec;
use crate::interference::DoubleSlitConfig;
use crate::packets::{GaussianPacket, PhysicalScales};
use crate::trajectories::{IntegratorSettings, SeedSpec, SeedStrategy};

pub const DEFAULT_WINDOW: (f64, f64) = (0.0, 20.0);
pub const DEFAULT_GRID_POINTS: usize = 512;
pub const DEFAULT_SEED_COUNT: usize = 20;
/// Half-width of the default x window, in packet widths at the window edges.
const DEFAULT_GRID_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Colormap {
    /// White through yellow to orange with rising intensity.
    #[default]
    WhiteYellowOrange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RenderSettings {
    pub width_px: u32,
    pub height_px: u32,
    pub colormap: Colormap,
    pub trajectory_color: [u8; 3],
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            width_px: 512,
            height_px: 512,
            colormap: Colormap::WhiteYellowOrange,
            trajectory_color: [255, 0, 0],
        }
    }
}

/// Fully validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub slits: DoubleSlitConfig,
    pub grid: GridSpec,
    pub seeds: SeedSpec,
    pub integrator: IntegratorSettings,
    pub render: RenderSettings,
}

impl ExperimentConfig {
    /// Applies the default grid, seeds, integrator and render settings.
    pub fn with_defaults(slits: DoubleSlitConfig) -> Result<Self> {
        let grid = default_grid(&slits, DEFAULT_WINDOW)?;
        Ok(ExperimentConfig {
            slits,
            grid,
            seeds: SeedSpec::default_for(&slits, DEFAULT_SEED_COUNT)?,
            integrator: IntegratorSettings::default_for(&slits, (grid.t_min, grid.t_max)),
            render: RenderSettings::default(),
        })
    }

    pub fn window(&self) -> (f64, f64) {
        (self.grid.t_min, self.grid.t_max)
    }

    /// File form of this config; parsing it back yields an equal config.
    pub fn to_toml(&self) -> String {
        let s = self.slits.scales();
        let packet = |p: &GaussianPacket| PacketSection {
            center: p.center,
            drift: p.drift,
            sigma0: p.sigma0,
            weight: Some(p.weight),
        };
        let file = ConfigFile {
            forward_speed: Some(self.slits.forward_speed()),
            scales: Some(ScalesSection {
                hbar: s.hbar(),
                mass: s.mass(),
            }),
            packets: vec![packet(self.slits.packet1()), packet(self.slits.packet2())],
            grid: Some(GridSection {
                x_min: self.grid.x_min,
                x_max: self.grid.x_max,
                nx: self.grid.nx,
                t_min: self.grid.t_min,
                t_max: self.grid.t_max,
                nt: self.grid.nt,
            }),
            seeds: Some(SeedsSection {
                count: self.seeds.count(),
                strategy: self.seeds.strategy(),
                span: Some(self.seeds.span()),
            }),
            integrator: Some(IntegratorSection {
                base_step: self.integrator.base_step(),
                max_substeps: self.integrator.max_substeps(),
                speed_cap: self.integrator.speed_cap(),
            }),
            render: Some(RenderSection {
                width_px: Some(self.render.width_px),
                height_px: Some(self.render.height_px),
                colormap: Some(self.render.colormap),
                trajectory_color: Some(format_color(self.render.trajectory_color)),
            }),
        };
        toml::to_string(&file).expect("config sections always serialize")
    }
}

/// Default x window: `centre ± 3σ` of every channel at both ends of the time window.
pub fn default_grid(slits: &DoubleSlitConfig, window: (f64, f64)) -> Result<GridSpec> {
    let (a0, b0) = slits.support(window.0, DEFAULT_GRID_SIGMAS);
    let (a1, b1) = slits.support(window.1, DEFAULT_GRID_SIGMAS);
    GridSpec::new(
        a0.min(a1),
        b0.max(b1),
        DEFAULT_GRID_POINTS,
        window.0,
        window.1,
        DEFAULT_GRID_POINTS,
    )
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    forward_speed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scales: Option<ScalesSection>,
    packets: Vec<PacketSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seeds: Option<SeedsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integrator: Option<IntegratorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    render: Option<RenderSection>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalesSection {
    hbar: f64,
    mass: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PacketSection {
    center: f64,
    drift: f64,
    sigma0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    x_min: f64,
    x_max: f64,
    nx: usize,
    t_min: f64,
    t_max: f64,
    nt: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedsSection {
    count: usize,
    strategy: SeedStrategy,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<(f64, f64)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegratorSection {
    base_step: f64,
    max_substeps: u32,
    speed_cap: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RenderSection {
    width_px: Option<u32>,
    height_px: Option<u32>,
    colormap: Option<Colormap>,
    trajectory_color: Option<String>,
}

fn format_color([r, g, b]: [u8; 3]) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn parse_color(text: &str) -> Result<[u8; 3]> {
    let bad = || Error::invalid("render.trajectory_color", format!("expected #rrggbb, got {text:?}"));
    let hex = text.strip_prefix('#').ok_or_else(bad)?;
    if hex.len() != 6 || !hex.is_ascii() {
        return Err(bad());
    }
    let channel = |k: usize| u8::from_str_radix(&hex[2 * k..2 * k + 2], 16).map_err(|_| bad());
    Ok([channel(0)?, channel(1)?, channel(2)?])
}

/// Prefixes the field name of a validation error with its section.
fn in_section(prefix: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::InvalidParameter { field, reason } if !field.contains('.') => Error::InvalidParameter {
            field: format!("{prefix}.{field}"),
            reason,
        },
        other => other,
    }
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;

    let scales = match &file.scales {
        Some(s) => PhysicalScales::new(s.hbar, s.mass).map_err(in_section("scales"))?,
        None => PhysicalScales::natural(),
    };
    if file.packets.len() != 2 {
        return Err(Error::invalid(
            "packets",
            format!("exactly two packets required, got {}", file.packets.len()),
        ));
    }
    let mut packets = Vec::with_capacity(2);
    for (i, p) in file.packets.iter().enumerate() {
        let packet = GaussianPacket::new(p.center, p.drift, p.sigma0, p.weight.unwrap_or(1.0))
            .map_err(in_section(&format!("packets[{i}]")))?;
        packets.push(packet);
    }
    let slits = DoubleSlitConfig::new(packets[0], packets[1], scales, file.forward_speed.unwrap_or(1.0))?;

    let grid = match &file.grid {
        Some(g) => GridSpec::new(g.x_min, g.x_max, g.nx, g.t_min, g.t_max, g.nt)?,
        None => default_grid(&slits, DEFAULT_WINDOW)?,
    };
    let seeds = match &file.seeds {
        Some(s) => {
            let span = s.span.unwrap_or_else(|| slits.support(0.0, 3.0));
            SeedSpec::new(s.count, s.strategy, span)?
        }
        None => SeedSpec::default_for(&slits, DEFAULT_SEED_COUNT)?,
    };
    let integrator = match &file.integrator {
        Some(i) => IntegratorSettings::new(i.base_step, i.max_substeps, i.speed_cap)?,
        None => IntegratorSettings::default_for(&slits, (grid.t_min, grid.t_max)),
    };
    let mut render = RenderSettings::default();
    if let Some(r) = &file.render {
        if let Some(w) = r.width_px {
            render.width_px = w;
        }
        if let Some(h) = r.height_px {
            render.height_px = h;
        }
        if let Some(c) = r.colormap {
            render.colormap = c;
        }
        if let Some(c) = &r.trajectory_color {
            render.trajectory_color = parse_color(c)?;
        }
        if render.width_px == 0 {
            return Err(Error::invalid("render.width_px", "must be >= 1"));
        }
        if render.height_px == 0 {
            return Err(Error::invalid("render.height_px", "must be >= 1"));
        }
    }

    Ok(ExperimentConfig {
        slits,
        grid,
        seeds,
        integrator,
        render,
    })
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[[packets]]
center = 5.0
drift = -0.25
sigma0 = 1.0

[[packets]]
center = -5.0
drift = 0.25
sigma0 = 1.0
"#;

    #[test]
    fn minimal_file_gets_defaults() {
        let cfg = parse_config_str(MINIMAL).unwrap();
        assert_eq!(cfg.slits.forward_speed(), 1.0);
        assert_eq!(*cfg.slits.scales(), PhysicalScales::natural());
        assert_eq!(cfg.slits.packet2().weight, 1.0);
        assert_eq!((cfg.grid.nx, cfg.grid.nt), (512, 512));
        assert_eq!((cfg.grid.t_min, cfg.grid.t_max), (0.0, 20.0));
        assert_eq!(cfg.seeds.count(), 20);
        assert_eq!(cfg.seeds.span(), (-8.0, 8.0));
        assert_eq!(cfg.integrator.base_step(), 0.01);
        assert_eq!(cfg.integrator.speed_cap(), 50.0);
        assert_eq!(cfg.render, RenderSettings::default());
    }

    #[test]
    fn zero_width_names_sigma0() {
        let text = MINIMAL.replacen("sigma0 = 1.0", "sigma0 = 0.0", 1);
        match parse_config_str(&text).unwrap_err() {
            Error::InvalidParameter { field, .. } => assert_eq!(field, "packets[0].sigma0"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text =
            format!("{MINIMAL}\n[grid]\nx_min = -1.0\nx_max = 1.0\nnx = 4\nt_min = 0.0\nt_max = 1.0\nnt = 4\nnz = 3\n");
        assert!(matches!(parse_config_str(&text), Err(Error::Parse(_))));
        let text = MINIMAL.replacen("sigma0 = 1.0", "sigma0 = 1.0\nsigma = 2.0", 1);
        assert!(matches!(parse_config_str(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn malformed_and_structural_errors() {
        assert!(matches!(parse_config_str("packets = ["), Err(Error::Parse(_))));
        let one = MINIMAL
            .split("[[packets]]")
            .take(2)
            .collect::<Vec<_>>()
            .join("[[packets]]");
        match parse_config_str(&one).unwrap_err() {
            Error::InvalidParameter { field, .. } => assert_eq!(field, "packets"),
            other => panic!("unexpected {other:?}"),
        }
        let text = format!("{MINIMAL}\n[render]\ntrajectory_color = \"red\"\n");
        assert!(parse_config_str(&text)
            .unwrap_err()
            .to_string()
            .contains("trajectory_color"));
    }

    #[test]
    fn toml_round_trip() {
        let mut text = MINIMAL.to_string();
        text.push_str("\n[seeds]\ncount = 5\nstrategy = \"equal_flux\"\n\n[render]\ntrajectory_color = \"#10a0ff\"\n");
        let cfg = parse_config_str(&text).unwrap();
        assert_eq!(cfg.seeds.strategy(), SeedStrategy::EqualFlux);
        assert_eq!(cfg.render.trajectory_color, [0x10, 0xa0, 0xff]);
        assert_eq!(parse_config_str(&cfg.to_toml()).unwrap(), cfg);
    }
}
