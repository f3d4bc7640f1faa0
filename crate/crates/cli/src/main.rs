mod output;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use slitflow::experiment::{parse_config, ExperimentConfig};
use slitflow::trajectories::{self, SeedSpec, Trajectory};
use slitflow::{fields, presets, validation};

#[derive(Parser)]
#[command(name = "slitflow", version, about = "Double-slit intensity fields and flux lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the intensity field and write intensity.csv.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
        /// Grid resolution as `nx,nt`.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Integrate flux lines and write trajectories.csv.
    Trajectories {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
        /// Number of seeds (strategy and span come from the config).
        #[arg(long)]
        seeds: Option<usize>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the acceptance checks and write validation.json.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Draw the intensity heatmap with flux lines to render.png.
    Render {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        seeds: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Experiment file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset: fig2, fig3, fig2b, fig2c or fig2d.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Directory for output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (nx, nt) = s.split_once(',').ok_or("expected nx,nt")?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(nx)?, parse(nt)?))
}

impl Source {
    fn load(&self) -> Result<(String, ExperimentConfig)> {
        match (&self.config, &self.preset) {
            (Some(path), _) => {
                let exp = parse_config(path).with_context(|| format!("loading {}", path.display()))?;
                Ok((path.display().to_string(), exp))
            }
            (None, Some(name)) => Ok((name.clone(), presets::preset(name)?)),
            (None, None) => bail!("one of --config or --preset is required"),
        }
    }
}

fn with_seed_count(mut exp: ExperimentConfig, seeds: Option<usize>) -> Result<ExperimentConfig> {
    if let Some(n) = seeds {
        exp.seeds = SeedSpec::new(n, exp.seeds.strategy(), exp.seeds.span())?;
    }
    Ok(exp)
}

fn flux_lines(exp: &ExperimentConfig) -> Result<Vec<Trajectory>> {
    let seeds = trajectories::seed_positions(&exp.slits, &exp.seeds)?;
    Ok(trajectories::integrate_all(
        &exp.slits,
        &seeds,
        exp.window(),
        &exp.integrator,
    )?)
}

fn announce(path: &Path) {
    println!("wrote {}", path.display());
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate {
            source,
            out,
            grid,
            format: Format::Csv,
        } => {
            let (_, mut exp) = source.load()?;
            if let Some((nx, nt)) = grid {
                exp.grid = exp.grid.with_resolution(nx, nt)?;
            }
            let intensity = fields::sample_intensity(&exp.slits, &exp.grid);
            let path = out.out.join("intensity.csv");
            output::write_atomic(&path, output::intensity_csv(&intensity).as_bytes())?;
            announce(&path);
        }
        Command::Trajectories {
            source,
            out,
            seeds,
            format: Format::Csv,
        } => {
            let exp = with_seed_count(source.load()?.1, seeds)?;
            let trajs = flux_lines(&exp)?;
            let path = out.out.join("trajectories.csv");
            let csv = output::trajectories_csv(&trajs, exp.slits.forward_speed());
            output::write_atomic(&path, csv.as_bytes())?;
            announce(&path);
        }
        Command::Validate { source, out } => {
            let (label, exp) = source.load()?;
            let report = validation::run_validation(&label, &exp)?;
            let path = out.out.join("validation.json");
            output::write_atomic(&path, report.to_json().as_bytes())?;
            print!("{}", report.to_text());
            announce(&path);
            return Ok(report.passed);
        }
        Command::Render { source, out, seeds } => {
            let exp = with_seed_count(source.load()?.1, seeds)?;
            let trajs = flux_lines(&exp)?;
            let img = render::render(&exp, &trajs)?;
            let mut png = Vec::new();
            img.write_to(&mut std::io::Cursor::new(&mut png), image::ImageFormat::Png)?;
            let path = out.out.join("render.png");
            output::write_atomic(&path, &png)?;
            announce(&path);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
