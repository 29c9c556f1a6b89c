//! Oscillator eigenfunctions, `L_n^{(-1/2)}` and the Kummer series.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::OscillatorFrame;

const FOURTH_ROOT_INV_PI: f64 = 0.751_125_544_464_942_5;
const RESCALE_ABOVE: f64 = 1e150;

/// Normalized oscillator eigenfunction `φ_n(x)` in physical units.
pub fn ho_eigenfunction(n: usize, x: f64, frame: &OscillatorFrame) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("coordinate must be finite, got {x}")));
    }
    let xt = x * frame.inv_length_sq().sqrt();
    let (h, log_scale) = hermite_function_scaled(n, xt);
    finish(h, log_scale + 0.25 * frame.inv_length_sq().ln())
}

/// `φ_0 … φ_{n_max}` at one point, in physical units.
pub fn ho_eigenfunctions(n_max: usize, x: f64, frame: &OscillatorFrame) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("coordinate must be finite, got {x}")));
    }
    let xt = x * frame.inv_length_sq().sqrt();
    let jac = frame.inv_length_sq().powf(0.25);
    let mut out = hermite_functions(n_max, xt)?;
    for v in &mut out {
        *v *= jac;
    }
    Ok(out)
}

/// Dimensionless Hermite functions `h_n(u) = H_n(u) e^{−u²/2} / sqrt(2^n n! √π)` for `n ≤ n_max`.
pub fn hermite_functions(n_max: usize, u: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut log_scale = -0.5 * u * u;
    let mut prev = 0.0;
    let mut cur = FOURTH_ROOT_INV_PI;
    out.push(finish(cur, log_scale)?);
    for k in 0..n_max {
        let next = u * (2.0 / (k as f64 + 1.0)).sqrt() * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            log_scale += RESCALE_ABOVE.ln();
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
        }
        out.push(finish(cur, log_scale)?);
    }
    Ok(out)
}

/// `h_n(u)` as mantissa and natural-log scale, so that `h_n = mantissa·e^{scale}`.
fn hermite_function_scaled(n: usize, u: f64) -> (f64, f64) {
    let mut log_scale = -0.5 * u * u;
    let mut prev = 0.0;
    let mut cur = FOURTH_ROOT_INV_PI;
    for k in 0..n {
        let next = u * (2.0 / (k as f64 + 1.0)).sqrt() * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            log_scale += RESCALE_ABOVE.ln();
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
        }
    }
    (cur, log_scale)
}

fn finish(mantissa: f64, log_scale: f64) -> Result<f64> {
    if mantissa == 0.0 {
        return Ok(0.0);
    }
    let log_mag = mantissa.abs().ln() + log_scale;
    if log_mag > f64::MAX.ln() {
        return Err(Error::OverflowGuard(format!(
            "eigenfunction magnitude e^{log_mag:.1} exceeds f64 range"
        )));
    }
    Ok(mantissa.signum() * log_mag.exp())
}

/// Generalized Laguerre polynomial `L_n^{(−1/2)}(y)`.
pub fn laguerre_half(n: usize, y: f64) -> f64 {
    let mut it = LaguerreHalf::new(y);
    let mut v = it.next_value();
    for _ in 0..n {
        v = it.next_value();
    }
    v
}

/// `L_0^{(−1/2)}(y) … L_{n_max}^{(−1/2)}(y)`.
pub fn laguerre_half_sequence(n_max: usize, y: f64) -> Vec<f64> {
    let mut it = LaguerreHalf::new(y);
    (0..=n_max).map(|_| it.next_value()).collect()
}

/// Streaming three-term recurrence for `L_n^{(−1/2)}(y)`, yielding `n = 0, 1, 2, …`.
#[derive(Debug, Clone)]
pub(crate) struct LaguerreHalf {
    y: f64,
    n: usize,
    prev: f64,
    cur: f64,
}

impl LaguerreHalf {
    pub(crate) fn new(y: f64) -> Self {
        Self {
            y,
            n: 0,
            prev: 0.0,
            cur: 1.0,
        }
    }

    pub(crate) fn next_value(&mut self) -> f64 {
        let out = self.cur;
        // L_{k} = ((2k − 1 + a − y) L_{k−1} − (k − 1 + a) L_{k−2}) / k with a = −1/2, k = n + 1
        let k = (self.n + 1) as f64;
        let next = ((2.0 * k - 1.5 - self.y) * self.cur - (k - 1.5) * self.prev) / k;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        out
    }
}

/// Default term cap for [`kummer_1f1`].
pub const KUMMER_MAX_TERMS: usize = 100_000;

/// Confluent hypergeometric `₁F₁(a; c; z)` by partial sums, stopped once a
/// geometric bound on the remaining tail falls below `tol`.
pub fn kummer_1f1(a: f64, c: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    kummer_1f1_capped(a, c, z, tol, KUMMER_MAX_TERMS)
}

pub fn kummer_1f1_capped(a: f64, c: f64, z: Complex64, tol: f64, max_terms: usize) -> Result<Complex64> {
    if c <= 0.0 && c == c.round() {
        return Err(Error::InvalidParameter(format!("c = {c} is a nonpositive integer")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let zn = z.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= z * ((a + kf) / ((c + kf) * (kf + 1.0)));
        sum += term;
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
        // For j > k every later ratio |t_{j+1}/t_j| is at most
        // (1 + |a − c|/(c + k + 1))·|z|/(k + 2) once c + k + 1 > 0.
        let j = kf + 1.0;
        if c + j > 0.0 {
            let ratio = (1.0 + (a - c).abs() / (c + j)) * zn / (j + 1.0);
            if ratio < 1.0 && term.norm() * ratio / (1.0 - ratio) <= tol {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence { terms: max_terms })
}
