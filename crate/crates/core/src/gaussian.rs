//! Complex Gaussians `ψ(u) = exp(c0 + c1·u + c2·u²)` and their closed-form integrals.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWaveform {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

/// Closed-form statistics of the density `|ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMoments {
    pub norm: f64,
    pub mean: f64,
    pub variance: f64,
}

impl GaussianWaveform {
    pub fn new(c0: Complex64, c1: Complex64, c2: Complex64) -> Result<Self> {
        if !(c2.re < 0.0) {
            return Err(Error::NonNormalizable { re_c2: c2.re });
        }
        Ok(Self { c0, c1, c2 })
    }

    /// Gaussian written around a centre: `exp(c0' + c1'·(u − center) + c2·(u − center)²)`
    /// re-expanded into the polynomial coefficients.
    pub(crate) fn centered(center: f64, offset: Complex64, linear: Complex64, c2: Complex64) -> Result<Self> {
        Self::new(
            offset - linear * center + c2 * center * center,
            linear - 2.0 * c2 * center,
            c2,
        )
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        (self.c0 + self.c1 * u + self.c2 * u * u).exp()
    }

    pub fn log_eval(&self, u: f64) -> Complex64 {
        self.c0 + self.c1 * u + self.c2 * u * u
    }

    /// Centre of `|ψ|²`.
    pub fn center(&self) -> f64 {
        self.c1.re / (-2.0 * self.c2.re)
    }

    /// Standard deviation of `|ψ|²`.
    pub fn width(&self) -> f64 {
        (1.0 / (-4.0 * self.c2.re)).sqrt()
    }

    /// Phase of the amplitude at the centre of `|ψ|²`.
    pub fn phase_at_center(&self) -> f64 {
        self.log_eval(self.center()).im
    }

    /// Norm, mean and variance of `|ψ|²`, which is the real Gaussian
    /// `exp(2Re c2·u² + 2Re c1·u + 2Re c0)`.
    pub fn norm_and_moments(&self) -> Result<GaussianMoments> {
        gaussian_norm_and_moments(self)
    }

    /// `∫ conj(self(u))·other(u) du`, evaluated in closed form.
    pub fn inner_product(&self, other: &GaussianWaveform) -> Complex64 {
        let a2 = self.c2.conj() + other.c2;
        let a1 = self.c1.conj() + other.c1;
        let a0 = self.c0.conj() + other.c0;
        // Re(−a2) > 0, so the principal root is the analytic continuation of the real integral.
        (Complex64::new(PI, 0.0) / (-a2)).sqrt() * (a0 - a1 * a1 / (4.0 * a2)).exp()
    }

    /// The same state against the coordinate `v = u/scale`: `√scale·ψ(scale·v)`,
    /// which keeps `∫|ψ|²` unchanged.
    pub fn in_units(&self, scale: f64) -> Self {
        Self {
            c0: self.c0 + 0.5 * scale.ln(),
            c1: self.c1 * scale,
            c2: self.c2 * scale * scale,
        }
    }

    /// Multiply by a constant `e^{w}`.
    pub fn scaled_by_exp(&self, w: Complex64) -> Self {
        Self {
            c0: self.c0 + w,
            ..*self
        }
    }
}

pub fn gaussian_norm_and_moments(g: &GaussianWaveform) -> Result<GaussianMoments> {
    if !(g.c2.re < 0.0) {
        return Err(Error::NonNormalizable { re_c2: g.c2.re });
    }
    let a = -2.0 * g.c2.re;
    let b = 2.0 * g.c1.re;
    let c = 2.0 * g.c0.re;
    let mean = b / (2.0 * a);
    let norm = (PI / a).sqrt() * (c + b * b / (4.0 * a)).exp();
    Ok(GaussianMoments {
        norm,
        mean,
        variance: 1.0 / (2.0 * a),
    })
}
