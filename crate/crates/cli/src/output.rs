//! CSV formatting and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use slitflow::fields::FieldGrid;
use slitflow::trajectories::Trajectory;

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("staging {}", path.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// 17 significant digits, enough to round-trip any f64.
fn num(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").unwrap();
}

pub fn intensity_csv(grid: &FieldGrid<f64>) -> String {
    let spec = grid.spec();
    let mut out = String::with_capacity(64 * spec.nx * spec.nt + 16);
    out.push_str("t,x,value\n");
    for i in 0..spec.nt {
        let t = spec.t(i);
        for (j, &v) in grid.row(i).iter().enumerate() {
            num(&mut out, t);
            out.push(',');
            num(&mut out, spec.x(j));
            out.push(',');
            num(&mut out, v);
            out.push('\n');
        }
    }
    out
}

/// `y` is the forward distance `v_y·(t − t₀)` travelled since the slits.
pub fn trajectories_csv(trajs: &[Trajectory], forward_speed: f64) -> String {
    let mut out = String::from("seed_index,t,x,y\n");
    for (index, traj) in trajs.iter().enumerate() {
        let t0 = traj.samples()[0].0;
        for &(t, x) in traj.samples() {
            write!(out, "{index},").unwrap();
            num(&mut out, t);
            out.push(',');
            num(&mut out, x);
            out.push(',');
            num(&mut out, forward_speed * (t - t0));
            out.push('\n');
        }
    }
    out
}
