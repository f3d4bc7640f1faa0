//! Heatmap of the intensity field with flux lines drawn on top.
//!
//! Columns run along x, rows along t with time increasing upward.

use image::{Rgb, RgbImage};
use slitflow::experiment::{Colormap, ExperimentConfig};
use slitflow::fields::{self, GridSpec};
use slitflow::trajectories::Trajectory;

/// Control points of the white→yellow→orange ramp.
const WHITE_YELLOW_ORANGE: [(f64, [u8; 3]); 3] = [(0.0, [255, 255, 255]), (0.5, [255, 255, 0]), (1.0, [255, 140, 0])];

/// Colour for an intensity already normalized to `[0, 1]`.
pub fn colour(map: Colormap, level: f64) -> [u8; 3] {
    let stops = match map {
        Colormap::WhiteYellowOrange => &WHITE_YELLOW_ORANGE,
    };
    let level = level.clamp(0.0, 1.0);
    let k = stops
        .windows(2)
        .position(|w| level <= w[1].0)
        .unwrap_or(stops.len() - 2);
    let ((a, ca), (b, cb)) = (stops[k], stops[k + 1]);
    let f = (level - a) / (b - a);
    let mut rgb = [0u8; 3];
    for c in 0..3 {
        rgb[c] = (ca[c] as f64 + f * (cb[c] as f64 - ca[c] as f64)).round() as u8;
    }
    rgb
}

/// Pixel grid: one sample per pixel centre column/row at the grid's extent.
fn pixel_grid(exp: &ExperimentConfig) -> anyhow::Result<GridSpec> {
    let r = &exp.render;
    Ok(exp.grid.with_resolution(r.width_px as usize, r.height_px as usize)?)
}

pub fn render(exp: &ExperimentConfig, trajs: &[Trajectory]) -> anyhow::Result<RgbImage> {
    let spec = pixel_grid(exp)?;
    let intensity = fields::sample_intensity(&exp.slits, &spec);
    let peak = intensity.values().iter().copied().fold(0.0, f64::max);
    let scale = if peak > 0.0 { 1.0 / peak } else { 0.0 };
    let (w, h) = (exp.render.width_px, exp.render.height_px);
    let mut img = RgbImage::new(w, h);
    for i in 0..spec.nt {
        let py = h - 1 - i as u32;
        for (j, &v) in intensity.row(i).iter().enumerate() {
            img.put_pixel(j as u32, py, Rgb(colour(exp.render.colormap, v * scale)));
        }
    }
    let to_pixel = |t: f64, x: f64| {
        let px = (x - spec.x_min) / spec.dx();
        let py = (h - 1) as f64 - (t - spec.t_min) / spec.dt();
        (px, py)
    };
    let ink = Rgb(exp.render.trajectory_color);
    for traj in trajs {
        for pair in traj.samples().windows(2) {
            let a = to_pixel(pair[0].0, pair[0].1);
            let b = to_pixel(pair[1].0, pair[1].1);
            draw_segment(&mut img, a, b, ink);
        }
    }
    Ok(img)
}

fn draw_segment(img: &mut RgbImage, a: (f64, f64), b: (f64, f64), ink: Rgb<u8>) {
    let steps = (b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil().max(1.0) as usize;
    for s in 0..=steps {
        let f = s as f64 / steps as f64;
        let (x, y) = ((a.0 + f * (b.0 - a.0)).round(), (a.1 + f * (b.1 - a.1)).round());
        if x >= 0.0 && y >= 0.0 && x < img.width() as f64 && y < img.height() as f64 {
            img.put_pixel(x as u32, y as u32, ink);
        }
    }
}
