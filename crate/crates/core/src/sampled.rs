//! Carriers for sampled wavefunctions and truncated Fock-space states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::SqueezedCoherentSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinateKind {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    FockSeries,
    OperatorEngine,
    Evolved,
    Loaded,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::FockSeries => "fock_series",
            Method::OperatorEngine => "operator_engine",
            Method::Evolved => "evolved",
            Method::Loaded => "loaded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub method: Method,
    /// Fock dimension or series order, when one was used.
    pub truncation: Option<usize>,
    pub time: f64,
    pub spec: Option<SqueezedCoherentSpec>,
}

impl SampleMeta {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            truncation: None,
            time: 0.0,
            spec: None,
        }
    }
}

/// Complex amplitudes on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledWavefunction {
    kind: CoordinateKind,
    grid: Vec<f64>,
    values: Vec<Complex64>,
    pub meta: SampleMeta,
}

impl SampledWavefunction {
    pub fn new(kind: CoordinateKind, grid: Vec<f64>, values: Vec<Complex64>, meta: SampleMeta) -> Result<Self> {
        validate_grid(&grid)?;
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            kind,
            grid,
            values,
            meta,
        })
    }

    /// Sample `f` on `grid`.
    pub fn from_fn<F>(kind: CoordinateKind, grid: Vec<f64>, meta: SampleMeta, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        validate_grid(&grid)?;
        let values = grid.iter().map(|&u| f(u)).collect();
        Ok(Self {
            kind,
            grid,
            values,
            meta,
        })
    }

    pub fn kind(&self) -> CoordinateKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `∫|ψ|²` by the trapezoid rule over the samples.
    pub fn trapezoid_norm(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0].norm_sqr() + v[1].norm_sqr()))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|g| !g.is_finite()) {
        return Err(Error::InvalidParameter("grid contains non-finite values".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `points` equally spaced values from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "grid needs finite min < max and at least 2 points, got [{min}, {max}] with {points}"
        )));
    }
    let h = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| if k + 1 == points { max } else { min + h * k as f64 })
        .collect())
}

/// Unimodular `u` minimizing `‖a − u·b‖`, or 1 when `b` is orthogonal to `a`.
pub fn best_phase(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let dot: Complex64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    if dot.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        dot / dot.norm()
    }
}

/// `max |a − u·b| / max |a|` after choosing the best global phase `u`.
pub fn phase_aligned_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "sample sets differ in length");
    let u = best_phase(a, b);
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let dev = a.iter().zip(b).map(|(x, y)| (x - u * y).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        dev
    } else {
        dev / scale
    }
}

/// Amplitudes `v_n = ⟨n|ψ⟩` in a Fock space truncated to `n < N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("Fock vector needs N >= 1".into()));
        }
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidParameter("Fock vector has non-finite entries".into()));
        }
        Ok(Self { amplitudes })
    }

    /// Number state `|n⟩` in dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidParameter(format!(
                "|{n}> does not fit in dimension {dim}"
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩` over the common leading block.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability mass in the top tenth of the basis, a truncation diagnostic.
    pub fn last_decile_mass(&self) -> f64 {
        let n = self.dim();
        let start = n - n.div_ceil(10);
        self.amplitudes[start..].iter().map(|a| a.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_must_increase() {
        let meta = SampleMeta::new(Method::ClosedForm);
        let bad = SampledWavefunction::new(
            CoordinateKind::Position,
            vec![0.0, 0.0],
            vec![Complex64::new(0.0, 0.0); 2],
            meta.clone(),
        );
        assert!(bad.is_err());
        let short = SampledWavefunction::new(
            CoordinateKind::Position,
            vec![0.0, 1.0],
            vec![Complex64::new(0.0, 0.0)],
            meta,
        );
        assert!(short.is_err());
    }

    #[test]
    fn uniform_grid_hits_endpoints() {
        let g = uniform_grid(-3.0, 7.0, 11).unwrap();
        assert_eq!(g[0], -3.0);
        assert_eq!(g[10], 7.0);
        assert!((g[5] - 2.0).abs() < 1e-15);
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn phase_alignment_removes_global_phase() {
        let a: Vec<Complex64> = (0..5).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let u = Complex64::from_polar(1.0, 2.1);
        let b: Vec<Complex64> = a.iter().map(|v| v * u).collect();
        assert!(phase_aligned_deviation(&a, &b) < 1e-15);
        assert!((best_phase(&a, &b) - u.conj()).norm() < 1e-15);
    }

    #[test]
    fn fock_vector_basics() {
        let e2 = FockVector::basis(2, 10).unwrap();
        assert_eq!(e2.norm(), 1.0);
        assert_eq!(e2.last_decile_mass(), 0.0);
        let e9 = FockVector::basis(9, 10).unwrap();
        assert_eq!(e9.last_decile_mass(), 1.0);
        assert_eq!(e2.inner(&e9), Complex64::new(0.0, 0.0));
        assert!(FockVector::new(vec![Complex64::new(f64::NAN, 0.0)]).is_err());
    }
}
