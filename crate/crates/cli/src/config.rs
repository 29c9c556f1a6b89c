//! Command-line flags and their validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use squeezelab::{OscillatorFrame, SqueezedCoherentSpec};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "squeezelab",
    version,
    about = "Squeezed-coherent states of the harmonic oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the closed-form position and momentum wavefunctions.
    Eval(RunArgs),
    /// Compare the closed form, the number-basis series and the truncated operator engine.
    Verify(RunArgs),
    /// Write one frame per time step of the freely evolving state.
    Animate(RunArgs),
    /// Sweep the exponential operator identities over random draws.
    Identities(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Squeeze magnitude.
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    /// Squeeze phase.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Mean position.
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// Mean momentum.
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Coherent amplitude, e.g. `3+3i`.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Lower end of the grid, in units of `sqrt(ħ/mω)`.
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    /// Upper end of the grid, in units of `sqrt(ħ/mω)`.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 401)]
    pub grid_points: usize,
    /// Fock dimension for the operator engine (verify) or the identity sweep.
    /// Chosen by the amplitude-mass rule when omitted.
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Tolerance for comparisons against the operator engine.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Tolerance for the number-basis series against the closed form.
    #[arg(long, default_value_t = 1e-8)]
    pub series_tol: f64,
    /// Highest order kept in the number-basis series; summed to `--series-tol` when omitted.
    #[arg(long)]
    pub series_terms: Option<usize>,
    /// Largest last-decile mass accepted for a truncated state.
    #[arg(long, default_value_t = squeezelab::operators::DEFAULT_MASS_TOL)]
    pub mass_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = squeezelab::identities::DEFAULT_SEED)]
    pub seed: u64,
    /// Random draws in the identity sweep.
    #[arg(long, default_value_t = 200)]
    pub draws: usize,
    /// Number of time steps; `frames + 1` frames are written, both ends included.
    #[arg(long, default_value_t = 64)]
    pub frames: usize,
    /// Fraction of the period `2π/ω` spanned by the frames.
    #[arg(long, default_value_t = 1.0)]
    pub period_fraction: f64,
    /// Explicit frame times, comma separated; overrides `--frames`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub operator: f64,
    pub series: f64,
    pub mass: f64,
}

/// Validated run configuration shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: SqueezedCoherentSpec,
    pub frame: OscillatorFrame,
    pub grid: GridSpec,
    pub truncation: Option<usize>,
    pub tol: Tolerances,
    pub series_terms: Option<usize>,
    pub format: Format,
    pub out: PathBuf,
    pub seed: u64,
    pub draws: usize,
    pub frames: usize,
    pub period_fraction: f64,
    pub times: Option<Vec<f64>>,
}

/// Relative agreement required when both `(x0, p0)` and `alpha` are given.
const CONSISTENCY_TOL: f64 = 1e-12;

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let frame = OscillatorFrame::new(self.mass, self.omega, self.hbar).map_err(CliError::from_config)?;
        let alpha = self
            .alpha
            .as_deref()
            .map(|s| {
                s.trim()
                    .replace('j', "i")
                    .parse::<Complex64>()
                    .map_err(|_| CliError::Config(format!("cannot parse alpha '{s}' as a complex number")))
            })
            .transpose()?;
        let spec = match (alpha, self.x0, self.p0) {
            (Some(a), x0, p0) => {
                let spec =
                    SqueezedCoherentSpec::from_alpha(self.r, self.phi, a, &frame).map_err(CliError::from_config)?;
                for (name, given, implied) in [("x0", x0, spec.x0()), ("p0", p0, spec.p0())] {
                    if let Some(g) = given {
                        if (g - implied).abs() > CONSISTENCY_TOL * implied.abs().max(1.0) {
                            return Err(CliError::Config(format!(
                                "{name} = {g} disagrees with alpha, which implies {implied}"
                            )));
                        }
                    }
                }
                spec
            }
            (None, x0, p0) => SqueezedCoherentSpec::new(self.r, self.phi, x0.unwrap_or(0.0), p0.unwrap_or(0.0))
                .map_err(CliError::from_config)?,
        };
        if self.grid_points < 2 {
            return Err(CliError::Config(format!(
                "grid needs at least 2 points, got {}",
                self.grid_points
            )));
        }
        if !(self.grid_min.is_finite() && self.grid_max.is_finite() && self.grid_min < self.grid_max) {
            return Err(CliError::Config(format!(
                "grid bounds must be finite with min < max, got [{}, {}]",
                self.grid_min, self.grid_max
            )));
        }
        positive("tol", self.tol)?;
        positive("series-tol", self.series_tol)?;
        positive("mass-tol", self.mass_tol)?;
        positive("period-fraction", self.period_fraction)?;
        if self.frames == 0 {
            return Err(CliError::Config("frames must be at least 1".into()));
        }
        if self.truncation.is_some_and(|n| n < 2) {
            return Err(CliError::Config("truncation must be at least 2".into()));
        }
        if self.series_terms == Some(0) {
            return Err(CliError::Config("series-terms must be at least 1".into()));
        }
        if let Some(ts) = &self.times {
            if ts.is_empty() || ts.iter().any(|t| !t.is_finite()) {
                return Err(CliError::Config(
                    "times must be a nonempty list of finite values".into(),
                ));
            }
        }
        Ok(RunConfig {
            spec,
            frame,
            grid: GridSpec {
                min: self.grid_min,
                max: self.grid_max,
                points: self.grid_points,
            },
            truncation: self.truncation,
            tol: Tolerances {
                operator: self.tol,
                series: self.series_tol,
                mass: self.mass_tol,
            },
            series_terms: self.series_terms,
            format: self.format,
            out: self.out.clone(),
            seed: self.seed,
            draws: self.draws,
            frames: self.frames,
            period_fraction: self.period_fraction,
            times: self.times.clone(),
        })
    }
}
