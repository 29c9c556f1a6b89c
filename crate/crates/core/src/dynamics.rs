//! Free evolution under `H = ħω(a†a + 1/2)`, overlaps between states, and the
//! per-frame data behind an animation of `|ψ(x, t)|²` and `|ψ̃(p, t)|²`.
//!
//! `e^{−iHt/ħ} D(α) S(ξ)|0⟩ = e^{−iωt/2} D(αe^{−iωt}) S(ξe^{−2iωt})|0⟩`, so a
//! squeezed-coherent state stays one, with rotated parameters and a global phase.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closedform::{momentum_wavefunction, position_wavefunction, sample, uncertainties, UncertaintyReport};
use crate::error::{Error, Result};
use crate::frame::OscillatorFrame;
use crate::gaussian::GaussianWaveform;
use crate::parallel::map_ordered;
use crate::sampled::{CoordinateKind, SampledWavefunction};
use crate::state::{reduce_angle, SqueezedCoherentSpec};

/// `ωt` within this relative distance of a multiple of `π/2` is treated as exactly
/// that multiple, so whole periods return the initial spec bit for bit.
pub const QUARTER_PERIOD_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionSnapshot {
    pub time: f64,
    pub spec: SqueezedCoherentSpec,
    /// `e^{−iωt/2}`
    pub global_phase: Complex64,
    pub uncertainty: UncertaintyReport,
}

impl EvolutionSnapshot {
    /// `ψ(x, t)` including the global phase.
    pub fn position_wavefunction(&self, frame: &OscillatorFrame) -> GaussianWaveform {
        position_wavefunction(&self.spec, frame).scaled_by_exp(Complex64::new(0.0, self.global_phase.arg()))
    }

    /// `ψ̃(p, t)` including the global phase.
    pub fn momentum_wavefunction(&self, frame: &OscillatorFrame) -> GaussianWaveform {
        momentum_wavefunction(&self.spec, frame).scaled_by_exp(Complex64::new(0.0, self.global_phase.arg()))
    }
}

/// `(cos ωt, sin ωt, quarter)` where `quarter = Some(k)` when `ωt` was snapped to `kπ/2`.
fn rotation(wt: f64) -> (f64, f64, Option<i64>) {
    let q = wt / FRAC_PI_2;
    let k = q.round();
    if (q - k).abs() <= QUARTER_PERIOD_SNAP * q.abs().max(1.0) && k.abs() < 9.0e15 {
        let k = k as i64;
        let (c, s) = match k.rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        return (c, s, Some(k));
    }
    (wt.cos(), wt.sin(), None)
}

/// Parameters and global phase of `e^{−iHt/ħ}D(α)S(ξ)|0⟩`.
pub fn evolve(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame, t: f64) -> Result<EvolutionSnapshot> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be finite, got {t}")));
    }
    let wt = frame.omega() * t;
    let mw = frame.mass() * frame.omega();
    let (c, s, quarter) = rotation(wt);
    let x0 = spec.x0() * c + spec.p0() / mw * s;
    let p0 = spec.p0() * c - mw * spec.x0() * s;
    let (phi, global_phase) = match quarter {
        Some(k) => {
            // φ − 2ωt = φ − kπ and e^{−iωt/2} = e^{−ikπ/4}
            let phi = if k.rem_euclid(2) == 0 {
                spec.phi()
            } else {
                reduce_angle(spec.phi() - PI)
            };
            let phase = if k.rem_euclid(2) == 0 {
                match (k / 2).rem_euclid(4) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, -1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, 1.0),
                }
            } else {
                Complex64::from_polar(1.0, -(k as f64) * PI / 4.0)
            };
            (phi, phase)
        }
        None => (
            reduce_angle(spec.phi() - 2.0 * wt),
            Complex64::from_polar(1.0, -0.5 * wt),
        ),
    };
    let evolved = spec.with_phase_space(phi, x0, p0)?;
    let mut uncertainty = uncertainties(&evolved, frame, 0.0);
    uncertainty.time = t;
    Ok(EvolutionSnapshot {
        time: t,
        spec: evolved,
        global_phase,
        uncertainty,
    })
}

/// `⟨A|B⟩ = ∫ conj(ψ_A(x)) ψ_B(x) dx`, in closed form.
pub fn overlap(a: &SqueezedCoherentSpec, b: &SqueezedCoherentSpec, frame: &OscillatorFrame) -> Complex64 {
    position_wavefunction(a, frame).inner_product(&position_wavefunction(b, frame))
}

/// Uncertainties at each time; the sequence has period `π/ω`.
pub fn uncertainty_trajectory(
    spec: &SqueezedCoherentSpec,
    frame: &OscillatorFrame,
    times: &[f64],
) -> Result<Vec<UncertaintyReport>> {
    times.iter().map(|&t| Ok(evolve(spec, frame, t)?.uncertainty)).collect()
}

/// `frames + 1` equally spaced times from 0 to `period_fraction · 2π/ω`, both ends
/// included.
pub fn frame_times(frames: usize, period_fraction: f64, frame: &OscillatorFrame) -> Result<Vec<f64>> {
    if frames == 0 {
        return Err(Error::InvalidParameter("frame count must be at least 1".into()));
    }
    if !(period_fraction.is_finite() && period_fraction > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "period fraction must be positive, got {period_fraction}"
        )));
    }
    let span = period_fraction * TAU / frame.omega();
    Ok((0..=frames).map(|k| span * k as f64 / frames as f64).collect())
}

/// `[center − half_width, center + half_width]` in plotting units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub center: f64,
    pub half_width: f64,
}

impl Band {
    pub fn lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width
    }
}

/// One animation frame. Coordinates are `x/x_scale` and `p/p_scale`, amplitudes are
/// scaled so each density integrates to 1 in those units, and the global phase is
/// left in `snapshot`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnimationFrame {
    pub index: usize,
    pub snapshot: EvolutionSnapshot,
    pub position: SampledWavefunction,
    pub momentum: SampledWavefunction,
    pub position_band: Band,
    pub momentum_band: Band,
}

/// Frames at the given times, ordered by time index.
pub fn animation_frames(
    spec: &SqueezedCoherentSpec,
    frame: &OscillatorFrame,
    times: &[f64],
    grid_x: &[f64],
    grid_p: &[f64],
    threads: usize,
) -> Result<Vec<AnimationFrame>> {
    let indexed: Vec<(usize, f64)> = times.iter().copied().enumerate().collect();
    map_ordered(&indexed, threads, |&(index, t)| {
        let snapshot = evolve(spec, frame, t)?;
        let (xs, ps) = (frame.x_scale(), frame.p_scale());
        let g = position_wavefunction(&snapshot.spec, frame).in_units(xs);
        let h = momentum_wavefunction(&snapshot.spec, frame).in_units(ps);
        let position = sample(&g, CoordinateKind::Position, grid_x.to_vec(), &snapshot.spec, t)?;
        let momentum = sample(&h, CoordinateKind::Momentum, grid_p.to_vec(), &snapshot.spec, t)?;
        Ok(AnimationFrame {
            index,
            position,
            momentum,
            position_band: Band {
                center: snapshot.spec.x0() / xs,
                half_width: snapshot.uncertainty.delta_x / xs,
            },
            momentum_band: Band {
                center: snapshot.spec.p0() / ps,
                half_width: snapshot.uncertainty.delta_p / ps,
            },
            snapshot,
        })
    })
    .into_iter()
    .collect()
}
