//! Number-basis route to the position wavefunction.
//!
//! `S(ξ)|0⟩` contains only the even states `(a†)^{2n}|0⟩`, and after displacement the
//! wavefunction becomes a coherent-state Gaussian times `Σ_n (z^n/n!)(−1/4)^n H_{2n}(x̃)`
//! with `z = e^{iφ} tanh r`. Through `H_{2n}(x̃) = (−1)^n 4^n n! L_n^{(−1/2)}(x̃²)` the
//! terms are simply `z^n L_n^{(−1/2)}(y)`, which is what is summed here. The closed sum
//! is the generating function `(1 − z)^{−1/2} exp(−yz/(1 − z))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::OscillatorFrame;
use crate::parallel::map_ordered;
use crate::special::LaguerreHalf;
use crate::state::{squeeze_ratio, SqueezedCoherentSpec};

/// Above this squeeze magnitude the series is flagged as slowly convergent.
pub const SLOW_SQUEEZE: f64 = 2.5;

/// Default hard cap on the adaptive series order.
pub const DEFAULT_TERM_CAP: usize = 20_000;

/// `ln` of the smallest positive normal `f64`; prefactors below `e^{this}` are treated as zero.
const LOG_UNDERFLOW: f64 = -708.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEvaluation {
    /// Wavefunction partial sums, prefactor included, for orders `0..=terms_used − 1`.
    pub partial_sums: Vec<Complex64>,
    pub terms_used: usize,
    /// Estimated magnitude of the omitted tail (geometric bound, prefactor included).
    pub tail_bound: f64,
    /// The Gaussian prefactor underflowed; every partial sum is exactly zero.
    pub prefactor_underflow: bool,
    pub diagnostic: Option<String>,
}

impl SeriesEvaluation {
    pub fn value(&self) -> Complex64 {
        *self.partial_sums.last().expect("at least one term")
    }
}

/// `y = (mω/ħ)(x − x0)²`
fn laguerre_argument(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame, x: f64) -> f64 {
    let d = x - spec.x0();
    frame.inv_length_sq() * d * d
}

/// Natural log of `(mω/πħ)^{1/4} e^{−y/2 + ip0x/ħ − ip0x0/2ħ}/sqrt(cosh r)`.
fn log_prefactor(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame, x: f64) -> Complex64 {
    let r = spec.r();
    let ln_cosh = r + (-2.0 * r).exp().ln_1p() - std::f64::consts::LN_2;
    let y = laguerre_argument(spec, frame, x);
    let phase = spec.p0() * (x - 0.5 * spec.x0()) / frame.hbar();
    Complex64::new(
        0.25 * (frame.inv_length_sq() / PI).ln() - 0.5 * y - 0.5 * ln_cosh,
        phase,
    )
}

fn slow_diagnostic(r: f64) -> Option<String> {
    (r > SLOW_SQUEEZE).then(|| format!("r = {r} > {SLOW_SQUEEZE}: terms decay like tanh(r)^n; prefer the closed form"))
}

/// Partial sums through order `n_max` (so `n_max + 1` terms).
pub fn series_wavefunction(
    spec: &SqueezedCoherentSpec,
    frame: &OscillatorFrame,
    x: f64,
    n_max: usize,
) -> Result<SeriesEvaluation> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("coordinate must be finite, got {x}")));
    }
    let lp = log_prefactor(spec, frame, x);
    let z = squeeze_ratio(spec.r(), spec.phi());
    if lp.re < LOG_UNDERFLOW {
        return Ok(SeriesEvaluation {
            partial_sums: vec![Complex64::new(0.0, 0.0); n_max + 1],
            terms_used: n_max + 1,
            tail_bound: 0.0,
            prefactor_underflow: true,
            diagnostic: slow_diagnostic(spec.r()),
        });
    }
    let pre = lp.exp();
    let y = laguerre_argument(spec, frame, x);
    let mut lag = LaguerreHalf::new(y);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut partial_sums = Vec::with_capacity(n_max + 1);
    let mut recent = [0.0f64; 3];
    for n in 0..=n_max {
        let term = zn * lag.next_value();
        sum += term;
        partial_sums.push(sum * pre);
        recent[n % 3] = term.norm();
        zn *= z;
    }
    Ok(SeriesEvaluation {
        partial_sums,
        terms_used: n_max + 1,
        tail_bound: tail_estimate(&recent, z.norm()) * pre.norm(),
        prefactor_underflow: false,
        diagnostic: slow_diagnostic(spec.r()),
    })
}

/// Sum until three consecutive terms fall below `1e-3·tol·|partial sum|`, or fail
/// with [`Error::NonConvergence`] at `cap` terms.
pub fn series_wavefunction_adaptive(
    spec: &SqueezedCoherentSpec,
    frame: &OscillatorFrame,
    x: f64,
    tol: f64,
    cap: usize,
) -> Result<SeriesEvaluation> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("coordinate must be finite, got {x}")));
    }
    let lp = log_prefactor(spec, frame, x);
    let z = squeeze_ratio(spec.r(), spec.phi());
    if lp.re < LOG_UNDERFLOW {
        return Ok(SeriesEvaluation {
            partial_sums: vec![Complex64::new(0.0, 0.0)],
            terms_used: 1,
            tail_bound: 0.0,
            prefactor_underflow: true,
            diagnostic: slow_diagnostic(spec.r()),
        });
    }
    let pre = lp.exp();
    let y = laguerre_argument(spec, frame, x);
    let (partial, recent) = adaptive_laguerre_sum(y, z, tol, cap)?;
    Ok(SeriesEvaluation {
        terms_used: partial.len(),
        partial_sums: partial.into_iter().map(|s| s * pre).collect(),
        tail_bound: tail_estimate(&recent, z.norm()) * pre.norm(),
        prefactor_underflow: false,
        diagnostic: slow_diagnostic(spec.r()),
    })
}

fn adaptive_laguerre_sum(y: f64, z: Complex64, tol: f64, cap: usize) -> Result<(Vec<Complex64>, [f64; 3])> {
    let mut lag = LaguerreHalf::new(y);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut partial = Vec::new();
    let mut recent = [0.0f64; 3];
    let mut small_run = 0;
    for n in 0..cap {
        let term = zn * lag.next_value();
        sum += term;
        partial.push(sum);
        recent[n % 3] = term.norm();
        if term.norm() <= 1e-3 * tol * sum.norm() {
            small_run += 1;
            if small_run == 3 {
                return Ok((partial, recent));
            }
        } else {
            small_run = 0;
        }
        zn *= z;
        if zn == Complex64::new(0.0, 0.0) && n > 0 {
            return Ok((partial, recent));
        }
    }
    Err(Error::NonConvergence { terms: cap })
}

/// Geometric tail estimate from the envelope of the last three terms.
fn tail_estimate(recent: &[f64; 3], ratio: f64) -> f64 {
    let env = recent.iter().copied().fold(0.0, f64::max);
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        env * ratio / (1.0 - ratio)
    }
}

/// `Σ_n z^n L_n^{(−1/2)}(y)` for `n ≤ n_max`, without any prefactor.
pub fn laguerre_generating_sum(y: f64, z: Complex64, n_max: usize) -> Complex64 {
    let mut lag = LaguerreHalf::new(y);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..=n_max {
        sum += zn * lag.next_value();
        zn *= z;
    }
    sum
}

/// Adaptive version of [`laguerre_generating_sum`]; returns the sum and the number of terms.
pub fn laguerre_generating_sum_adaptive(y: f64, z: Complex64, tol: f64, cap: usize) -> Result<(Complex64, usize)> {
    let (partial, _) = adaptive_laguerre_sum(y, z, tol, cap)?;
    Ok((*partial.last().expect("nonempty"), partial.len()))
}

/// Closed form of the generating sum, `(1 − z)^{−1/2} exp(−yz/(1 − z))`, for `|z| < 1`.
pub fn laguerre_generating_closed(y: f64, z: Complex64) -> Complex64 {
    let one_minus = Complex64::new(1.0, 0.0) - z;
    (-y * z / one_minus).exp() / one_minus.sqrt()
}

/// The `n_max → ∞` limit of [`series_wavefunction`], written through the exponential
/// form of `₁F₁(1/2; 1/2; ·)`.
pub fn erdelyi_resummation(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame, x: f64) -> Complex64 {
    let z = squeeze_ratio(spec.r(), spec.phi());
    let y = laguerre_argument(spec, frame, x);
    let one_minus = Complex64::new(1.0, 0.0) - z;
    (log_prefactor(spec, frame, x) - y * z / one_minus).exp() / one_minus.sqrt()
}

/// [`series_wavefunction`] at every grid point, results ordered by grid index.
pub fn series_on_grid(
    spec: &SqueezedCoherentSpec,
    frame: &OscillatorFrame,
    grid: &[f64],
    n_max: usize,
    threads: usize,
) -> Result<Vec<Complex64>> {
    map_ordered(grid, threads, |&x| {
        series_wavefunction(spec, frame, x, n_max).map(|s| s.value())
    })
    .into_iter()
    .collect()
}
