use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of the oscillator, `H = p²/2m + mω²x²/2`.
///
/// The dimensionless frame `m = ω = ħ = 1` is the default; every routine in
/// the crate accepts an arbitrary frame and works in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorFrame {
    mass: f64,
    omega: f64,
    hbar: f64,
}

impl OscillatorFrame {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { mass, omega, hbar })
    }

    pub const fn unit() -> Self {
        Self {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `mω/ħ`, the inverse squared length scale.
    pub fn inv_length_sq(&self) -> f64 {
        self.mass * self.omega / self.hbar
    }

    /// `sqrt(ħ/mω)`
    pub fn x_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// `sqrt(mωħ)`
    pub fn p_scale(&self) -> f64 {
        (self.mass * self.omega * self.hbar).sqrt()
    }
}

impl Default for OscillatorFrame {
    fn default() -> Self {
        Self::unit()
    }
}
