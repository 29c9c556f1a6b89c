use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::OscillatorFrame;

/// Reduce an angle to `[0, 2π)`. A value that rounds to exactly `2π` maps to 0.
pub fn reduce_angle(phi: f64) -> f64 {
    let a = phi.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Parameters of the squeezed-coherent state `D(α)S(ξ)|0⟩` with `ξ = r e^{iφ}`.
///
/// The displacement is stored as the phase-space centre `(x0, p0)`; the
/// complex amplitude `α` depends on the frame and is derived on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedCoherentSpec {
    r: f64,
    phi: f64,
    x0: f64,
    p0: f64,
}

impl SqueezedCoherentSpec {
    pub fn new(r: f64, phi: f64, x0: f64, p0: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "squeeze magnitude r must be finite and nonnegative, got {r}"
            )));
        }
        if !(phi.is_finite() && x0.is_finite() && p0.is_finite()) {
            return Err(Error::InvalidParameter("phi, x0 and p0 must be finite".into()));
        }
        Ok(Self {
            r,
            phi: reduce_angle(phi),
            x0,
            p0,
        })
    }

    /// Build from the ladder-operator displacement `α`.
    pub fn from_alpha(r: f64, phi: f64, alpha: Complex64, frame: &OscillatorFrame) -> Result<Self> {
        let x0 = alpha.re * (2.0 * frame.hbar() / (frame.mass() * frame.omega())).sqrt();
        let p0 = alpha.im * (2.0 * frame.mass() * frame.omega() * frame.hbar()).sqrt();
        Self::new(r, phi, x0, p0)
    }

    pub fn vacuum() -> Self {
        Self {
            r: 0.0,
            phi: 0.0,
            x0: 0.0,
            p0: 0.0,
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// `ξ = r e^{iφ}`
    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    /// `α = sqrt(mω/2ħ) x0 + i p0 / sqrt(2mωħ)`
    pub fn alpha(&self, frame: &OscillatorFrame) -> Complex64 {
        Complex64::new(
            self.x0 * (frame.mass() * frame.omega() / (2.0 * frame.hbar())).sqrt(),
            self.p0 / (2.0 * frame.mass() * frame.omega() * frame.hbar()).sqrt(),
        )
    }

    /// Mean occupation `|α|² + sinh² r` of the state.
    pub fn mean_occupation(&self, frame: &OscillatorFrame) -> f64 {
        self.alpha(frame).norm_sqr() + self.r.sinh().powi(2)
    }

    pub fn with_phase_space(&self, phi: f64, x0: f64, p0: f64) -> Result<Self> {
        Self::new(self.r, phi, x0, p0)
    }

    /// `(cosh r − e^{iφ} sinh r, cosh r + e^{iφ} sinh r)`.
    ///
    /// Real parts are formed as `e^{∓r}cos²(φ/2) + e^{±r}sin²(φ/2)`, a sum of
    /// positive terms, so neither factor suffers cancellation at large `r`.
    /// Both real parts are at least `e^{−r} > 0`.
    pub fn squeeze_factors(&self) -> (Complex64, Complex64) {
        squeeze_factors(self.r, self.phi)
    }
}

pub(crate) fn squeeze_factors(r: f64, phi: f64) -> (Complex64, Complex64) {
    let (s, c) = (0.5 * phi).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let (ep, em) = (r.exp(), (-r).exp());
    let im = phi.sin() * r.sinh();
    let minus = Complex64::new(em * c2 + ep * s2, -im);
    let plus = Complex64::new(ep * c2 + em * s2, im);
    (minus, plus)
}

/// `e^{iφ} tanh r`, the complex squeeze ratio that recurs throughout.
pub(crate) fn squeeze_ratio(r: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(r.tanh(), phi)
}
