use serde::Serialize;
use squeezelab::closedform::{momentum_wavefunction, position_wavefunction, sample, uncertainties, UncertaintyReport};
use squeezelab::dynamics::{animation_frames, frame_times, Band};
use squeezelab::fockexp::{series_on_grid, series_wavefunction_adaptive, DEFAULT_TERM_CAP};
use squeezelab::identities::{run_sweep, SweepConfig, SweepReport};
use squeezelab::operators::{
    squeezed_coherent_vector, squeezed_coherent_vector_auto, synthesize_wavefunction, window_for, DEFAULT_MAX_DIM,
    WINDOW_TABLE,
};
use squeezelab::parallel::{map_ordered, threads_from_env};
use squeezelab::sampled::{phase_aligned_deviation, uniform_grid};
use squeezelab::{
    Complex64, CoordinateKind, Error, FockVector, OscillatorFrame, SampledWavefunction, SqueezedCoherentSpec,
};

use crate::config::{GridSpec, RunConfig, Tolerances};
use crate::error::CliError;
use crate::output::{json_bytes, spec_hash, write_file, write_samples};

fn scaled_grid(grid: &GridSpec, scale: f64) -> Result<Vec<f64>, CliError> {
    Ok(uniform_grid(grid.min, grid.max, grid.points)?
        .into_iter()
        .map(|u| u * scale)
        .collect())
}

#[derive(Serialize)]
struct HashInput<'a, T: Serialize> {
    spec: &'a SqueezedCoherentSpec,
    frame: &'a OscillatorFrame,
    grid: &'a GridSpec,
    extra: T,
}

#[derive(Serialize)]
struct EvalFiles {
    position: String,
    momentum: String,
}

#[derive(Serialize)]
struct EvalSidecar<'a> {
    spec: &'a SqueezedCoherentSpec,
    frame: &'a OscillatorFrame,
    grid: &'a GridSpec,
    method: &'static str,
    /// Trapezoid norm of the emitted position samples.
    norm: f64,
    momentum_norm: f64,
    uncertainties: UncertaintyReport,
    files: EvalFiles,
    spec_hash: String,
}

pub fn eval(cfg: &RunConfig) -> Result<String, CliError> {
    let (spec, frame) = (&cfg.spec, &cfg.frame);
    let x = scaled_grid(&cfg.grid, frame.x_scale())?;
    let p = scaled_grid(&cfg.grid, frame.p_scale())?;
    let psi = sample(
        &position_wavefunction(spec, frame),
        CoordinateKind::Position,
        x,
        spec,
        0.0,
    )?;
    let phi = sample(
        &momentum_wavefunction(spec, frame),
        CoordinateKind::Momentum,
        p,
        spec,
        0.0,
    )?;
    let files = EvalFiles {
        position: write_samples(&cfg.out, "position", &psi, cfg.format)?,
        momentum: write_samples(&cfg.out, "momentum", &phi, cfg.format)?,
    };
    let sidecar = EvalSidecar {
        spec,
        frame,
        grid: &cfg.grid,
        method: "closed_form",
        norm: psi.trapezoid_norm(),
        momentum_norm: phi.trapezoid_norm(),
        uncertainties: uncertainties(spec, frame, 0.0),
        files,
        spec_hash: spec_hash(&HashInput {
            spec,
            frame,
            grid: &cfg.grid,
            extra: (),
        })?,
    };
    write_file(&cfg.out.join("eval.json"), &json_bytes(&sidecar)?)?;
    Ok(format!(
        "norm {:.12} delta_x {:.12e} delta_p {:.12e}\n",
        sidecar.norm, sidecar.uncertainties.delta_x, sidecar.uncertainties.delta_p
    ))
}

#[derive(Serialize)]
struct Comparison {
    pair: &'static str,
    deviation: Option<f64>,
    tolerance: f64,
    passed: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    spec: &'a SqueezedCoherentSpec,
    frame: &'a OscillatorFrame,
    grid: &'a GridSpec,
    tolerances: &'a Tolerances,
    /// Fixed series order, or `null` when each point was summed to `series` tolerance.
    series_terms: Option<usize>,
    max_series_terms_used: usize,
    truncation: usize,
    leaked: f64,
    warnings: Vec<String>,
    comparisons: Vec<Comparison>,
    passed: bool,
}

fn compare(pair: &'static str, a: &[Complex64], b: Result<&SampledWavefunction, &Error>, tolerance: f64) -> Comparison {
    match b {
        Ok(b) => {
            let d = phase_aligned_deviation(a, b.values());
            Comparison {
                pair,
                deviation: Some(d),
                tolerance,
                passed: d <= tolerance,
                error: None,
            }
        }
        Err(e) => Comparison {
            pair,
            deviation: None,
            tolerance,
            passed: false,
            error: Some(e.to_string()),
        },
    }
}

/// Operator-engine state: at the requested dimension, or chosen by the mass rule and
/// then enlarged if needed so the whole grid lies inside the synthesis window.
fn operator_state(cfg: &RunConfig, max_u: f64, warnings: &mut Vec<String>) -> Result<(FockVector, f64), CliError> {
    let (spec, frame) = (&cfg.spec, &cfg.frame);
    if let Some(n) = cfg.truncation {
        let t = squeezed_coherent_vector(spec, frame, n)?;
        let leaked = t.leaked;
        if let Err(e) = t.clone().check(n, cfg.tol.mass) {
            warnings.push(e.to_string());
        }
        return Ok((t.value, leaked));
    }
    let v = squeezed_coherent_vector_auto(spec, frame, cfg.tol.mass, DEFAULT_MAX_DIM)?;
    let n = v.dim();
    if window_for(n).is_some_and(|w| w >= max_u) {
        let leaked = v.last_decile_mass();
        return Ok((v, leaked));
    }
    let wider = WINDOW_TABLE
        .iter()
        .find(|(d, w)| *d >= n && *w >= max_u)
        .map(|(d, _)| *d)
        .ok_or_else(|| CliError::Config(format!("grid reaches |u| = {max_u}, beyond every synthesis window")))?;
    let t = squeezed_coherent_vector(spec, frame, wider)?;
    Ok((t.value, t.leaked))
}

pub fn verify(cfg: &RunConfig) -> Result<String, CliError> {
    let (spec, frame) = (&cfg.spec, &cfg.frame);
    let series_terms = cfg.series_terms;
    let threads = threads_from_env();
    let x = scaled_grid(&cfg.grid, frame.x_scale())?;
    let p = scaled_grid(&cfg.grid, frame.p_scale())?;
    let closed_x = sample(
        &position_wavefunction(spec, frame),
        CoordinateKind::Position,
        x.clone(),
        spec,
        0.0,
    )?;
    let closed_p = sample(
        &momentum_wavefunction(spec, frame),
        CoordinateKind::Momentum,
        p.clone(),
        spec,
        0.0,
    )?;

    let (series, max_terms) = match series_terms {
        Some(n) => (series_on_grid(spec, frame, &x, n, threads)?, n + 1),
        None => {
            let evals: Result<Vec<_>, Error> = map_ordered(&x, threads, |&xi| {
                series_wavefunction_adaptive(spec, frame, xi, cfg.tol.series, DEFAULT_TERM_CAP)
            })
            .into_iter()
            .collect();
            let evals = evals?;
            let used = evals.iter().map(|e| e.terms_used).max().unwrap_or(0);
            (evals.iter().map(|e| e.value()).collect(), used)
        }
    };

    let mut warnings = Vec::new();
    let max_u = cfg.grid.min.abs().max(cfg.grid.max.abs());
    let (state, leaked) = operator_state(cfg, max_u, &mut warnings)?;
    let op_x = synthesize_wavefunction(&state, x, frame, CoordinateKind::Position);
    let op_p = synthesize_wavefunction(&state, p, frame, CoordinateKind::Momentum);

    let series_w = SampledWavefunction::new(
        CoordinateKind::Position,
        closed_x.grid().to_vec(),
        series,
        closed_x.meta.clone(),
    )?;
    let comparisons = vec![
        compare("closed_vs_series", closed_x.values(), Ok(&series_w), cfg.tol.series),
        compare("closed_vs_operator", closed_x.values(), op_x.as_ref(), cfg.tol.operator),
        compare("series_vs_operator", series_w.values(), op_x.as_ref(), cfg.tol.operator),
        compare(
            "closed_vs_operator_momentum",
            closed_p.values(),
            op_p.as_ref(),
            cfg.tol.operator,
        ),
    ];
    let passed = warnings.is_empty() && comparisons.iter().all(|c| c.passed);
    let report = VerifyReport {
        spec,
        frame,
        grid: &cfg.grid,
        tolerances: &cfg.tol,
        series_terms,
        max_series_terms_used: max_terms,
        truncation: state.dim(),
        leaked,
        warnings,
        comparisons,
        passed,
    };
    write_file(&cfg.out.join("verify.json"), &json_bytes(&report)?)?;

    let mut text = String::new();
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for c in &report.comparisons {
        let dev = c.deviation.map_or_else(|| "n/a".to_string(), |d| format!("{d:.3e}"));
        let status = if c.passed { "pass" } else { "FAIL" };
        text.push_str(&format!(
            "{:<28} {dev:>10}  tol {:.1e}  {status}\n",
            c.pair, c.tolerance
        ));
        if let Some(e) = &c.error {
            text.push_str(&format!("    {e}\n"));
        }
    }
    text.push_str(&format!(
        "truncation N = {}, leaked {:.3e}\n",
        report.truncation, report.leaked
    ));
    if passed {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Failed("verification failed".into()))
    }
}

#[derive(Serialize)]
struct BandPair {
    position: BandOut,
    momentum: BandOut,
}

#[derive(Serialize)]
struct BandOut {
    center: f64,
    half_width: f64,
    lower: f64,
    upper: f64,
}

impl From<Band> for BandOut {
    fn from(b: Band) -> Self {
        Self {
            center: b.center,
            half_width: b.half_width,
            lower: b.lower(),
            upper: b.upper(),
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    spec: &'a SqueezedCoherentSpec,
    frame: &'a OscillatorFrame,
    /// Frame coordinates are `x/sqrt(ħ/mω)` and `p/sqrt(mωħ)`.
    grid: &'a GridSpec,
    times: &'a [f64],
    bands: Vec<BandPair>,
    global_phase: Vec<Complex64>,
    evolved: Vec<SqueezedCoherentSpec>,
    uncertainties: Vec<UncertaintyReport>,
    position_files: Vec<String>,
    momentum_files: Vec<String>,
    spec_hash: String,
}

pub fn animate(cfg: &RunConfig) -> Result<String, CliError> {
    let (spec, frame) = (&cfg.spec, &cfg.frame);
    let times = match &cfg.times {
        Some(t) => t.clone(),
        None => frame_times(cfg.frames, cfg.period_fraction, frame).map_err(CliError::from_config)?,
    };
    let grid = uniform_grid(cfg.grid.min, cfg.grid.max, cfg.grid.points)?;
    let frames = animation_frames(spec, frame, &times, &grid, &grid, threads_from_env())?;
    let mut position_files = Vec::new();
    let mut momentum_files = Vec::new();
    for f in &frames {
        let stem = format!("frame_{:05}", f.index);
        position_files.push(format!(
            "position/{}",
            write_samples(&cfg.out.join("position"), &stem, &f.position, cfg.format)?
        ));
        momentum_files.push(format!(
            "momentum/{}",
            write_samples(&cfg.out.join("momentum"), &stem, &f.momentum, cfg.format)?
        ));
    }
    let manifest = Manifest {
        spec,
        frame,
        grid: &cfg.grid,
        times: &times,
        bands: frames
            .iter()
            .map(|f| BandPair {
                position: f.position_band.into(),
                momentum: f.momentum_band.into(),
            })
            .collect(),
        global_phase: frames.iter().map(|f| f.snapshot.global_phase).collect(),
        evolved: frames.iter().map(|f| f.snapshot.spec).collect(),
        uncertainties: frames.iter().map(|f| f.snapshot.uncertainty).collect(),
        position_files,
        momentum_files,
        spec_hash: spec_hash(&HashInput {
            spec,
            frame,
            grid: &cfg.grid,
            extra: &times,
        })?,
    };
    write_file(&cfg.out.join("manifest.json"), &json_bytes(&manifest)?)?;
    Ok(format!("{} frames written to {}\n", frames.len(), cfg.out.display()))
}

pub fn identities(cfg: &RunConfig) -> Result<String, CliError> {
    let sweep = SweepConfig {
        draws: cfg.draws,
        seed: cfg.seed,
        fock_dim: cfg.truncation.unwrap_or(SweepConfig::default().fock_dim),
        threads: threads_from_env(),
        ..SweepConfig::default()
    };
    let report: SweepReport = run_sweep(&sweep).map_err(|e| match e {
        Error::InvalidParameter(_) => CliError::from_config(e),
        other => CliError::Numerical(other),
    })?;
    write_file(&cfg.out.join("identities.json"), &json_bytes(&report)?)?;
    let mut text = String::new();
    for c in &report.summary {
        let max = c.max_residual.map_or_else(|| "n/a".to_string(), |m| format!("{m:.3e}"));
        let status = if c.passed { "pass" } else { "FAIL" };
        text.push_str(&format!(
            "{:<6} {:<24} evaluated {:>4}  max {max:>10}  tol {:.1e}  {status}\n",
            c.rep.label(),
            c.identity.label(),
            c.evaluated,
            c.tolerance
        ));
    }
    text.push_str(&format!(
        "algebra residual 2x2 {:.3e}, 3x3 {:.3e}\n",
        report.algebra_residual_2x2, report.algebra_residual_3x3
    ));
    if report.passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Failed("identity sweep has failing cells".into()))
    }
}
