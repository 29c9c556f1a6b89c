//! Exact position and momentum wavefunctions of `D(α)S(ξ)|0⟩`, the ground-state
//! overlap and the position/momentum uncertainties.
//!
//! Every square root below has an argument `cosh r ± e^{iφ} sinh r` whose real
//! part is at least `cosh r − sinh r = e^{−r} > 0`, so principal branches are
//! continuous over the whole parameter space.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::frame::OscillatorFrame;
use crate::gaussian::GaussianWaveform;
use crate::sampled::{CoordinateKind, Method, SampleMeta, SampledWavefunction};
use crate::state::{squeeze_factors, squeeze_ratio, SqueezedCoherentSpec};

/// Relative tolerance on `Δx·Δp − ħ/2` used for the minimality flag.
pub const MINIMAL_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub delta_x: f64,
    pub delta_p: f64,
    pub product: f64,
    pub is_minimal: bool,
    pub time: f64,
}

fn i(v: f64) -> Complex64 {
    Complex64::new(0.0, v)
}

/// `ψ(x) = ⟨x|D(α)S(ξ)|0⟩` as an exact complex Gaussian.
pub fn position_wavefunction(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame) -> GaussianWaveform {
    let (minus, plus) = squeeze_factors(spec.r(), spec.phi());
    let hbar = frame.hbar();
    let c2 = -0.5 * frame.inv_length_sq() * plus / minus;
    let offset = normalization_log(spec, frame) + i(spec.p0() * spec.x0() / hbar);
    GaussianWaveform::centered(spec.x0(), offset, i(spec.p0() / hbar), c2).expect("Re(c2) < 0 for every valid spec")
}

/// `ψ̃(p) = ⟨p|D(α)S(ξ)|0⟩`, with `⟨p|x⟩ = e^{−ipx/ħ}/sqrt(2πħ)`.
pub fn momentum_wavefunction(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame) -> GaussianWaveform {
    let (minus, plus) = squeeze_factors(spec.r(), spec.phi());
    let hbar = frame.hbar();
    let mwh = frame.mass() * frame.omega() * hbar;
    let c2 = -0.5 / mwh * minus / plus;
    let xp = spec.x0() * spec.p0() / hbar;
    let offset = i(0.5 * xp) + Complex64::from(-0.25 * (PI * mwh).ln()) - 0.5 * plus.ln() - i(xp);
    GaussianWaveform::centered(spec.p0(), offset, i(-spec.x0() / hbar), c2).expect("Re(c2) < 0 for every valid spec")
}

/// `ln c` for `c = e^{−ix0p0/2ħ}(mω/πħ)^{1/4}/sqrt(cosh r − e^{iφ} sinh r)`.
fn normalization_log(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame) -> Complex64 {
    let (minus, _) = squeeze_factors(spec.r(), spec.phi());
    i(-0.5 * spec.x0() * spec.p0() / frame.hbar()) + 0.25 * (frame.inv_length_sq() / PI).ln() - 0.5 * minus.ln()
}

/// The constant `c` multiplying the centred Gaussian, assembled in the rationalized
/// split form `|M|^{−1/2} · sqrt(M*)/|M*|^{1/2} · e^{−ix0p0/2ħ} · (mω/πħ)^{1/4}`
/// with `M = cosh r − e^{iφ} sinh r`.
pub fn normalization_phase_constant(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame) -> Complex64 {
    let (minus, _) = squeeze_factors(spec.r(), spec.phi());
    let modulus = minus.norm();
    let unimodular = minus.conj().sqrt() / modulus.sqrt();
    let plane = Complex64::from_polar(1.0, -0.5 * spec.x0() * spec.p0() / frame.hbar());
    unimodular * plane * ((frame.inv_length_sq() / PI).powf(0.25) / modulus.sqrt())
}

/// `⟨0|D(α)S(ξ)|0⟩ = exp(−(|α|² + e^{iφ} tanh r·α*²)/2)/sqrt(cosh r)`.
pub fn ground_overlap(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame) -> Complex64 {
    let alpha = spec.alpha(frame);
    let z = squeeze_ratio(spec.r(), spec.phi());
    let r = spec.r();
    let ln_cosh = r + (-2.0 * r).exp().ln_1p() - std::f64::consts::LN_2;
    (-0.5 * (alpha.norm_sqr() + z * alpha.conj() * alpha.conj()) - 0.5 * ln_cosh).exp()
}

/// Squared widths `(Δx², Δp²)` at squeeze angle `θ = φ − 2ωt`.
fn variances(r: f64, theta: f64, frame: &OscillatorFrame) -> (f64, f64) {
    let (s, c) = (0.5 * theta).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let (ep, em) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let hbar = frame.hbar();
    let mw = frame.mass() * frame.omega();
    let vx = 0.5 * hbar / mw * (ep * s2 + em * c2);
    let vp = 0.5 * hbar * mw * (ep * c2 + em * s2);
    (vx, vp)
}

/// `sinh²2r · sin²θ`, the excess of `(Δx Δp)²` over `(ħ/2)²` in units of `(ħ/2)²`.
fn excess(r: f64, theta: f64) -> f64 {
    (2.0 * r).sinh().powi(2) * theta.sin().powi(2)
}

pub fn uncertainties(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame, t: f64) -> UncertaintyReport {
    let theta = spec.phi() - 2.0 * frame.omega() * t;
    let (vx, vp) = variances(spec.r(), theta, frame);
    let half = 0.5 * frame.hbar();
    let s = excess(spec.r(), theta);
    let residual = half * s / ((1.0 + s).sqrt() + 1.0);
    UncertaintyReport {
        delta_x: vx.sqrt(),
        delta_p: vp.sqrt(),
        product: half * (1.0 + s).sqrt(),
        is_minimal: residual <= MINIMAL_REL_TOL * half,
        time: t,
    }
}

/// `Δx·Δp − ħ/2`, evaluated without cancellation.
pub fn minimum_uncertainty_residual(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame, t: f64) -> f64 {
    let theta = spec.phi() - 2.0 * frame.omega() * t;
    let s = excess(spec.r(), theta);
    0.5 * frame.hbar() * s / ((1.0 + s).sqrt() + 1.0)
}

/// If `other` equals `reference` up to a constant unimodular factor, return that
/// factor (`other = u·reference`).
pub fn convention_phase(reference: &GaussianWaveform, other: &GaussianWaveform, tol: f64) -> Option<Complex64> {
    let scale = reference.c2.norm().max(reference.c1.norm()).max(1.0);
    if (reference.c2 - other.c2).norm() > tol * scale || (reference.c1 - other.c1).norm() > tol * scale {
        return None;
    }
    let d = other.c0 - reference.c0;
    if d.re.abs() > tol {
        return None;
    }
    Some(Complex64::from_polar(1.0, d.im))
}

/// Sample a Gaussian waveform on `grid` with closed-form provenance.
pub fn sample(
    g: &GaussianWaveform,
    kind: CoordinateKind,
    grid: Vec<f64>,
    spec: &SqueezedCoherentSpec,
    time: f64,
) -> Result<SampledWavefunction> {
    let meta = SampleMeta {
        method: Method::ClosedForm,
        truncation: None,
        time,
        spec: Some(*spec),
    };
    SampledWavefunction::from_fn(kind, grid, meta, |u| g.eval(u))
}

/// Momentum amplitudes from position samples by the trapezoid rule,
/// `ψ̃(p) ≈ (2πħ)^{−1/2} Σ_j w_j e^{−ipx_j/ħ} ψ(x_j)`.
///
/// Accurate when the samples resolve `ψ` and it has decayed at both ends of the grid.
pub fn fourier_from_samples(
    psi: &SampledWavefunction,
    p_grid: Vec<f64>,
    frame: &OscillatorFrame,
) -> Result<SampledWavefunction> {
    let x = psi.grid();
    let v = psi.values();
    let n = x.len();
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let h = 0.5 * (x[k + 1] - x[k]);
        w[k] += h;
        w[k + 1] += h;
    }
    let hbar = frame.hbar();
    let norm = (2.0 * PI * hbar).sqrt().recip();
    let mut meta = psi.meta.clone();
    meta.method = Method::ClosedForm;
    SampledWavefunction::from_fn(CoordinateKind::Momentum, p_grid, meta, |p| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += Complex64::from_polar(w[j], -p * x[j] / hbar) * v[j];
        }
        acc * norm
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gaussian_norm_and_moments;

    fn fig1() -> SqueezedCoherentSpec {
        SqueezedCoherentSpec::from_alpha(2.0, 0.0, Complex64::new(3.0, 3.0), &OscillatorFrame::unit()).unwrap()
    }

    #[test]
    fn vacuum_is_ground_state() {
        let f = OscillatorFrame::unit();
        let g = position_wavefunction(&SqueezedCoherentSpec::vacuum(), &f);
        for x in [-3.0f64, -0.4, 0.0, 1.7] {
            let want = PI.powf(-0.25) * (-0.5 * x * x).exp();
            assert!((g.eval(x) - want).norm() < 1e-15);
        }
        let gp = momentum_wavefunction(&SqueezedCoherentSpec::vacuum(), &f);
        assert!((gp.eval(0.8) - PI.powf(-0.25) * (-0.32f64).exp()).norm() < 1e-15);
    }

    #[test]
    fn fig1_position_width() {
        let g = position_wavefunction(&fig1(), &OscillatorFrame::unit());
        let w = (-1.0 / (4.0 * g.c2)).re.sqrt();
        assert!((w - (-2.0f64).exp() / 2f64.sqrt()).abs() < 1e-15);
        assert!((g.center() - fig1().x0()).abs() < 1e-14);
    }

    #[test]
    fn constant_matches_gaussian_offset() {
        let f = OscillatorFrame::new(1.3, 0.7, 0.9).unwrap();
        for (r, phi, x0, p0) in [
            (0.0, 0.0, 0.0, 0.0),
            (2.0, 0.0, 0.0, 0.0),
            (1.0, PI / 2.0, 0.4, -1.1),
            (2.5, 5.0, -2.0, 3.0),
        ] {
            let s = SqueezedCoherentSpec::new(r, phi, x0, p0).unwrap();
            let c = normalization_phase_constant(&s, &f);
            let direct = normalization_log(&s, &f).exp();
            assert!((c - direct).norm() < 1e-14 * c.norm(), "{c} vs {direct}");
        }
        let s = SqueezedCoherentSpec::new(2.0, 0.0, 0.0, 0.0).unwrap();
        let c = normalization_phase_constant(&s, &OscillatorFrame::unit());
        assert!((c - PI.powf(-0.25) * 1f64.exp()).norm() < 1e-14);
    }

    #[test]
    fn unit_norm_in_closed_form() {
        let f = OscillatorFrame::new(2.0, 3.0, 0.5).unwrap();
        for (r, phi) in [(0.0, 0.0), (1.0, PI / 2.0), (3.0, 1.0), (2.0, PI)] {
            let s = SqueezedCoherentSpec::new(r, phi, 0.3, -0.8).unwrap();
            for g in [position_wavefunction(&s, &f), momentum_wavefunction(&s, &f)] {
                let m = gaussian_norm_and_moments(&g).unwrap();
                assert!((m.norm - 1.0).abs() < 1e-12, "{r} {phi}: {}", m.norm);
            }
        }
    }

    #[test]
    fn means_are_phase_space_centre() {
        let f = OscillatorFrame::new(2.0, 3.0, 0.5).unwrap();
        let s = SqueezedCoherentSpec::new(1.2, 2.0, 0.3, -0.8).unwrap();
        let mx = gaussian_norm_and_moments(&position_wavefunction(&s, &f)).unwrap();
        let mp = gaussian_norm_and_moments(&momentum_wavefunction(&s, &f)).unwrap();
        assert!((mx.mean - 0.3).abs() < 1e-15);
        assert!((mp.mean + 0.8).abs() < 1e-15);
    }

    #[test]
    fn overlap_special_values() {
        let f = OscillatorFrame::unit();
        assert_eq!(
            ground_overlap(&SqueezedCoherentSpec::vacuum(), &f),
            Complex64::new(1.0, 0.0)
        );
        let coh = SqueezedCoherentSpec::from_alpha(0.0, 0.0, Complex64::new(3.0, 3.0), &f).unwrap();
        assert!((ground_overlap(&coh, &f) - (-9.0f64).exp()).norm() < 1e-18);
    }

    #[test]
    fn uncertainty_cases() {
        let f = OscillatorFrame::new(2.0, 0.5, 0.3).unwrap();
        let coh = SqueezedCoherentSpec::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let u = uncertainties(&coh, &f, 0.7);
        assert!(u.is_minimal);
        assert!((u.product - 0.15).abs() < 1e-16);

        let s = SqueezedCoherentSpec::new(2.0, 0.0, 0.0, 0.0).unwrap();
        let u = uncertainties(&s, &f, 0.0);
        assert!((u.delta_x / (f.x_scale() / 2f64.sqrt()) - (-2.0f64).exp()).abs() < 1e-15);
        assert!((u.delta_p / (f.p_scale() / 2f64.sqrt()) - 2.0f64.exp()).abs() < 1e-14);
        assert!(u.is_minimal);

        let s = SqueezedCoherentSpec::new(1.0, PI / 2.0, 0.0, 0.0).unwrap();
        let u = uncertainties(&s, &OscillatorFrame::unit(), 0.0);
        assert!((u.delta_x - u.delta_p).abs() < 1e-15);
        assert!((u.product - 0.5 * 2f64.cosh()).abs() < 1e-14);
        assert!(!u.is_minimal);
        let res = minimum_uncertainty_residual(&s, &OscillatorFrame::unit(), 0.0);
        assert!((res - 0.5 * (2f64.cosh() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn residual_vanishes_on_schedule() {
        let f = OscillatorFrame::new(1.0, 2.0, 1.0).unwrap();
        let s = SqueezedCoherentSpec::new(1.5, PI, 0.0, 0.0).unwrap();
        assert!(minimum_uncertainty_residual(&s, &f, PI / (2.0 * 2.0)) < 1e-12);
        assert!(minimum_uncertainty_residual(&s, &f, 0.0) < 1e-12);
        assert!(minimum_uncertainty_residual(&s, &f, 0.3) > 0.1);
    }

    #[test]
    fn convention_phase_detects_global_factor() {
        let g = position_wavefunction(&fig1(), &OscillatorFrame::unit());
        let h = g.scaled_by_exp(i(0.7));
        let u = convention_phase(&g, &h, 1e-12).unwrap();
        assert!((u - Complex64::from_polar(1.0, 0.7)).norm() < 1e-15);
        let other = position_wavefunction(&SqueezedCoherentSpec::vacuum(), &OscillatorFrame::unit());
        assert!(convention_phase(&g, &other, 1e-12).is_none());
    }
}
