//! Truncated Fock-space realizations of `a`, `a†`, `D(α)`, `S(ξ)` and `e^{−iHt/ħ}`,
//! the operator-built position and momentum eigenvectors, and wavefunction synthesis.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::OscillatorFrame;
use crate::linalg::{expm_action, matrix_exponential, Matrix, SparseMatrix};
use crate::parallel::map_ordered;
use crate::sampled::{CoordinateKind, FockVector, Method, SampleMeta, SampledWavefunction};
use crate::special::hermite_functions;
use crate::state::SqueezedCoherentSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Accuracy target for dense exponentials built here.
pub const EXPM_TOL: f64 = 1e-15;
/// Relative tolerance of the Taylor steps in exponential-times-vector products.
pub const ACTION_TOL: f64 = 1e-17;
/// Default bound on last-decile probability mass for the truncation rule.
pub const DEFAULT_MASS_TOL: f64 = 1e-12;
/// Largest dimension the truncation rule will try.
pub const DEFAULT_MAX_DIM: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorLabel {
    Ladder,
    Displacement,
    Squeeze,
    Evolution,
    Custom,
}

/// Dense `N × N` operator on the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub label: OperatorLabel,
    pub matrix: Matrix,
}

impl FockOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.dim() != self.dim() {
            return Err(Error::InvalidParameter(format!(
                "vector dimension {} does not match operator dimension {}",
                v.dim(),
                self.dim()
            )));
        }
        let out = self.matrix.dot(&ndarray::ArrayView1::from(v.amplitudes()));
        FockVector::new(out.to_vec())
    }

    /// `U|0⟩`
    pub fn column0(&self) -> FockVector {
        FockVector::new(self.matrix.column(0).to_vec()).expect("finite operator")
    }
}

/// A truncated result together with its estimated leaked norm (last-decile mass of the
/// state it produces from `|0⟩`).
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    pub leaked: f64,
}

impl<T> Truncated<T> {
    /// Accept the value only if the leak estimate is at most `mass_tol`.
    pub fn check(self, dim: usize, mass_tol: f64) -> Result<T> {
        if self.leaked > mass_tol {
            Err(Error::TruncationWarning {
                dim,
                leaked: self.leaked,
            })
        } else {
            Ok(self.value)
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "Fock dimension must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Lowering and raising matrices, `a[n−1, n] = √n`.
pub fn ladder_matrices(n: usize) -> Result<(FockOperator, FockOperator)> {
    check_dim(n)?;
    let a = lowering(n);
    let ad = a.t().to_owned();
    Ok((
        FockOperator {
            label: OperatorLabel::Ladder,
            matrix: a,
        },
        FockOperator {
            label: OperatorLabel::Ladder,
            matrix: ad,
        },
    ))
}

pub(crate) fn lowering(n: usize) -> Matrix {
    let mut a = Matrix::zeros((n, n));
    for k in 1..n {
        a[[k - 1, k]] = Complex64::from((k as f64).sqrt());
    }
    a
}

/// `α a† − α* a`
pub fn displacement_generator(alpha: Complex64, n: usize) -> Matrix {
    displacement_generator_sparse(alpha, n).to_dense()
}

pub fn displacement_generator_sparse(alpha: Complex64, n: usize) -> SparseMatrix {
    let mut t = Vec::with_capacity(2 * n);
    for k in 1..n {
        let s = (k as f64).sqrt();
        t.push((k, k - 1, alpha * s));
        t.push((k - 1, k, -alpha.conj() * s));
    }
    SparseMatrix::from_triplets(n, t)
}

/// `−ξ (a†)²/2 + ξ* a²/2`
pub fn squeeze_generator(xi: Complex64, n: usize) -> Matrix {
    squeeze_generator_sparse(xi, n).to_dense()
}

pub fn squeeze_generator_sparse(xi: Complex64, n: usize) -> SparseMatrix {
    let mut t = Vec::with_capacity(2 * n);
    for k in 2..n {
        // (a²)[k−2, k] = sqrt(k(k−1))
        let s = ((k * (k - 1)) as f64).sqrt();
        t.push((k, k - 2, -0.5 * xi * s));
        t.push((k - 2, k, 0.5 * xi.conj() * s));
    }
    SparseMatrix::from_triplets(n, t)
}

fn leak_of(m: &Matrix) -> f64 {
    let n = m.nrows();
    let start = n - n.div_ceil(10);
    (start..n).map(|k| m[[k, 0]].norm_sqr()).sum()
}

/// Dense `D(α) = e^{αa† − α*a}`.
pub fn displacement_operator(alpha: Complex64, n: usize) -> Result<Truncated<FockOperator>> {
    check_dim(n)?;
    let m = matrix_exponential(&displacement_generator(alpha, n), EXPM_TOL)?;
    Ok(Truncated {
        leaked: leak_of(&m),
        value: FockOperator {
            label: OperatorLabel::Displacement,
            matrix: m,
        },
    })
}

/// Dense `S(ξ) = e^{−ξ(a†)²/2 + ξ*a²/2}`.
pub fn squeeze_operator(xi: Complex64, n: usize) -> Result<Truncated<FockOperator>> {
    check_dim(n)?;
    let m = matrix_exponential(&squeeze_generator(xi, n), EXPM_TOL)?;
    Ok(Truncated {
        leaked: leak_of(&m),
        value: FockOperator {
            label: OperatorLabel::Squeeze,
            matrix: m,
        },
    })
}

/// `e^{−iHt/ħ}`, diagonal with entries `e^{−iω t (n + 1/2)}`.
pub fn evolution_operator(n: usize, frame: &OscillatorFrame, t: f64) -> Result<FockOperator> {
    check_dim(n)?;
    let phases = evolution_phases(n, frame, t);
    Ok(FockOperator {
        label: OperatorLabel::Evolution,
        matrix: Array2::from_diag(&ndarray::Array1::from(phases)),
    })
}

fn evolution_phases(n: usize, frame: &OscillatorFrame, t: f64) -> Vec<Complex64> {
    let wt = frame.omega() * t;
    (0..n)
        .map(|k| Complex64::from_polar(1.0, -wt * (k as f64 + 0.5)))
        .collect()
}

/// Apply `e^{−iHt/ħ}` to a state.
pub fn evolve_vector(v: &FockVector, frame: &OscillatorFrame, t: f64) -> FockVector {
    let ph = evolution_phases(v.dim(), frame, t);
    FockVector::new(v.amplitudes().iter().zip(ph).map(|(a, p)| a * p).collect()).expect("finite")
}

/// `D(α)S(ξ)|0⟩` in dimension `n`, built by exponential actions on `|0⟩`.
pub fn squeezed_coherent_vector(
    spec: &SqueezedCoherentSpec,
    frame: &OscillatorFrame,
    n: usize,
) -> Result<Truncated<FockVector>> {
    check_dim(n)?;
    let mut e0 = vec![ZERO; n];
    e0[0] = ONE;
    let s = squeeze_generator_sparse(spec.xi(), n);
    let v = expm_action(&s, &e0, ACTION_TOL)?;
    let d = displacement_generator_sparse(spec.alpha(frame), n);
    let v = FockVector::new(expm_action(&d, &v, ACTION_TOL)?)?;
    Ok(Truncated {
        leaked: v.last_decile_mass(),
        value: v,
    })
}

/// Initial dimension of the truncation rule, `⌈4(|α|² + sinh²r) + 60⌉`.
pub fn initial_truncation(spec: &SqueezedCoherentSpec, frame: &OscillatorFrame) -> usize {
    (4.0 * spec.mean_occupation(frame) + 60.0).ceil() as usize
}

/// Build `D(α)S(ξ)|0⟩`, doubling the dimension from [`initial_truncation`] until the
/// last-decile mass is below `mass_tol`.
pub fn squeezed_coherent_vector_auto(
    spec: &SqueezedCoherentSpec,
    frame: &OscillatorFrame,
    mass_tol: f64,
    max_dim: usize,
) -> Result<FockVector> {
    let mut n = initial_truncation(spec, frame);
    if n > max_dim {
        // not attempted: the mean occupation alone already exceeds the cap
        return Err(Error::TruncationWarning {
            dim: max_dim,
            leaked: f64::INFINITY,
        });
    }
    loop {
        let t = squeezed_coherent_vector(spec, frame, n)?;
        if t.leaked <= mass_tol {
            return Ok(t.value);
        }
        if 2 * n > max_dim {
            return Err(Error::TruncationWarning {
                dim: n,
                leaked: t.leaked,
            });
        }
        n *= 2;
    }
}

/// Validated `(dimension, max |u|)` windows for the operator-built eigenvectors and for
/// synthesis, with `u` the dimensionless coordinate `x/x_scale` or `p/p_scale`.
/// The smallest listed dimension at least `N` applies.
pub const WINDOW_TABLE: [(usize, f64); 4] = [(64, 10.0), (256, 16.0), (1024, 24.0), (4096, 32.0)];

/// Window half-width for dimension `n`, or `None` beyond the table.
pub fn window_for(n: usize) -> Option<f64> {
    WINDOW_TABLE.iter().find(|(d, _)| n <= *d).map(|(_, w)| *w)
}

fn check_window(u: f64, n: usize, scale: f64) -> Result<()> {
    match window_for(n) {
        Some(w) if u.abs() <= w => Ok(()),
        Some(w) => Err(Error::WindowExceeded {
            coordinate: u * scale,
            limit: w * scale,
            dim: n,
        }),
        None => Err(Error::WindowExceeded {
            coordinate: u * scale,
            limit: 0.0,
            dim: n,
        }),
    }
}

/// Internal dimension used to build an eigenvector whose first `n` components are kept.
///
/// Truncating `D(β)` corrupts components within roughly `1.5|u|·sqrt(M) + 30` of the
/// top of an `M`-dimensional space; `M` is the smallest size keeping that zone above `n`,
/// plus a margin.
pub fn guard_dimension(n: usize, u: f64) -> usize {
    let b = 1.5 * u.abs();
    let c = (n + 30) as f64;
    let root = 0.5 * (b + (b * b + 4.0 * c).sqrt());
    (root * root).ceil() as usize + 40
}

/// `e^{−(a†)²/2}|0⟩` (or `e^{+(a†)²/2}|0⟩`), whose even coefficients are
/// `(∓1/2)^k sqrt((2k)!)/k!`, written out directly.
fn gaussian_seed(m: usize, sign: f64) -> Vec<Complex64> {
    let mut v = vec![ZERO; m];
    let mut c = 1.0;
    let mut k = 0usize;
    while 2 * k < m {
        v[2 * k] = Complex64::from(c);
        let kf = k as f64;
        c *= sign * 0.5 * ((2.0 * kf + 1.0) * (2.0 * kf + 2.0)).sqrt() / (kf + 1.0);
        k += 1;
    }
    v
}

/// `(mω/πħ)^{1/4} e^{−x sqrt(mω/2ħ)(a − a†)} e^{−(a†)²/2}|0⟩`, first `n` components.
///
/// The components are `⟨n|x⟩ = φ_n(x)`. The vector is not normalizable; it is only
/// meaningful contracted against states concentrated at low occupation.
pub fn position_eigenvector(x: f64, n: usize, frame: &OscillatorFrame) -> Result<FockVector> {
    check_dim(n)?;
    let u = x / frame.x_scale();
    check_window(u, n, frame.x_scale())?;
    let m = guard_dimension(n, u);
    let seed = gaussian_seed(m, -1.0);
    let beta = Complex64::from(u / std::f64::consts::SQRT_2);
    let g = displacement_generator_sparse(beta, m);
    let v = expm_action(&g, &seed, ACTION_TOL)?;
    let pre = (frame.inv_length_sq() / std::f64::consts::PI).powf(0.25);
    FockVector::new(v[..n].iter().map(|c| c * pre).collect())
}

/// `(1/πmωħ)^{1/4} e^{ip(a + a†)/sqrt(2mωħ)} e^{+(a†)²/2}|0⟩`, first `n` components.
///
/// With this phase choice `⟨0|p⟩` is real and positive and `⟨n|p⟩ = iⁿ φ_n(p)`,
/// where `φ_n(p)` is the oscillator eigenfunction in momentum units.
pub fn momentum_eigenvector(p: f64, n: usize, frame: &OscillatorFrame) -> Result<FockVector> {
    check_dim(n)?;
    let u = p / frame.p_scale();
    check_window(u, n, frame.p_scale())?;
    let m = guard_dimension(n, u);
    let seed = gaussian_seed(m, 1.0);
    let beta = Complex64::new(0.0, u / std::f64::consts::SQRT_2);
    let g = displacement_generator_sparse(beta, m);
    let v = expm_action(&g, &seed, ACTION_TOL)?;
    let pre = (1.0 / (std::f64::consts::PI * frame.mass() * frame.omega() * frame.hbar())).powf(0.25);
    FockVector::new(v[..n].iter().map(|c| c * pre).collect())
}

/// Eigenvectors at every grid point, ordered by grid index.
pub fn eigenvectors_on_grid(
    kind: CoordinateKind,
    grid: &[f64],
    n: usize,
    frame: &OscillatorFrame,
    threads: usize,
) -> Result<Vec<FockVector>> {
    map_ordered(grid, threads, |&u| match kind {
        CoordinateKind::Position => position_eigenvector(u, n, frame),
        CoordinateKind::Momentum => momentum_eigenvector(u, n, frame),
    })
    .into_iter()
    .collect()
}

/// `⟨u|ψ⟩` at every grid point from precomputed eigenvectors.
pub fn project(eigen: &[FockVector], v: &FockVector) -> Vec<Complex64> {
    eigen.iter().map(|e| e.inner(v)).collect()
}

/// `Σ_n v_n ⟨u|n⟩` on a grid: `φ_n(x)` for positions and `(−i)ⁿ φ_n(p)` for momenta.
pub fn synthesize_wavefunction(
    v: &FockVector,
    grid: Vec<f64>,
    frame: &OscillatorFrame,
    kind: CoordinateKind,
) -> Result<SampledWavefunction> {
    let n = v.dim();
    let scale = match kind {
        CoordinateKind::Position => frame.x_scale(),
        CoordinateKind::Momentum => frame.p_scale(),
    };
    for &g in &grid {
        check_window(g / scale, n, scale)?;
    }
    let jac = scale.powf(-0.5);
    // (−i)^n cycles through 1, −i, −1, i
    let cycle = [ONE, Complex64::new(0.0, -1.0), -ONE, Complex64::new(0.0, 1.0)];
    let values: Result<Vec<Complex64>> = grid
        .iter()
        .map(|&g| {
            let h = hermite_functions(n - 1, g / scale)?;
            let mut acc = ZERO;
            for (k, (amp, hk)) in v.amplitudes().iter().zip(&h).enumerate() {
                let w = match kind {
                    CoordinateKind::Position => ONE,
                    CoordinateKind::Momentum => cycle[k % 4],
                };
                acc += amp * w * *hk;
            }
            Ok(acc * jac)
        })
        .collect();
    let meta = SampleMeta {
        method: Method::OperatorEngine,
        truncation: Some(n),
        time: 0.0,
        spec: None,
    };
    SampledWavefunction::new(kind, grid, values?, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{block_residual, commutator, dagger, identity};
    use crate::special::ho_eigenfunction;

    #[test]
    fn two_level_ladder() {
        let (a, ad) = ladder_matrices(2).unwrap();
        assert_eq!(a.matrix[[0, 1]], ONE);
        assert_eq!(a.matrix[[1, 0]], ZERO);
        assert_eq!(ad.matrix, dagger(&a.matrix));
        assert!(ladder_matrices(1).is_err());
    }

    #[test]
    fn commutator_boundary_defect() {
        let n = 12;
        let (a, ad) = ladder_matrices(n).unwrap();
        let c = commutator(&a.matrix, &ad.matrix);
        let mut want = identity(n);
        want[[n - 1, n - 1]] = Complex64::from(-((n - 1) as f64));
        assert!(crate::linalg::residual(&c, &want) < 1e-15);
        let e0 = FockVector::basis(0, n).unwrap();
        assert_eq!(a.apply(&e0).unwrap().norm(), 0.0);
    }

    #[test]
    fn zero_displacement_is_identity() {
        let d = displacement_operator(ZERO, 10).unwrap();
        assert_eq!(d.value.matrix, identity(10));
        assert_eq!(d.leaked, 0.0);
    }

    #[test]
    fn squeezed_vacuum_is_even() {
        let s = squeeze_operator(Complex64::from_polar(0.8, 1.0), 40).unwrap().value;
        let col = s.column0();
        for (k, c) in col.amplitudes().iter().enumerate() {
            if k % 2 == 1 {
                assert_eq!(*c, ZERO);
            }
        }
        let unitary = dagger(&s.matrix).dot(&s.matrix);
        assert!(block_residual(&unitary, &identity(40), 20) < 1e-12);
    }

    #[test]
    fn vector_matches_dense_product() {
        let f = OscillatorFrame::unit();
        let spec = SqueezedCoherentSpec::new(0.6, 2.0, 0.5, -0.3).unwrap();
        let n = 60;
        let v = squeezed_coherent_vector(&spec, &f, n).unwrap();
        let d = displacement_operator(spec.alpha(&f), n).unwrap().value;
        let s = squeeze_operator(spec.xi(), n).unwrap().value;
        let dense = d.matrix.dot(&s.matrix).column(0).to_owned();
        let err = v
            .value
            .amplitudes()
            .iter()
            .zip(dense.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13, "{err}");
        assert!(v.leaked < 1e-12);
    }

    #[test]
    fn truncation_rule_grows_and_reports() {
        let f = OscillatorFrame::unit();
        let spec = SqueezedCoherentSpec::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let n0 = initial_truncation(&spec, &f);
        assert_eq!(n0, (4.0 * 1f64.sinh().powi(2) + 60.0).ceil() as usize);
        let v = squeezed_coherent_vector_auto(&spec, &f, 1e-14, DEFAULT_MAX_DIM).unwrap();
        assert!(v.last_decile_mass() <= 1e-14);
        let big = SqueezedCoherentSpec::new(2.0, 0.0, 0.0, 0.0).unwrap();
        let e = squeezed_coherent_vector_auto(&big, &f, 1e-12, 200).unwrap_err();
        assert!(matches!(e, Error::TruncationWarning { .. }));
        let e = squeezed_coherent_vector(&big, &f, 16)
            .unwrap()
            .check(16, 1e-12)
            .unwrap_err();
        assert!(matches!(e, Error::TruncationWarning { dim: 16, .. }));
    }

    #[test]
    fn evolution_is_diagonal_phase() {
        let f = OscillatorFrame::new(1.0, 2.0, 1.0).unwrap();
        let u = evolution_operator(5, &f, 0.25).unwrap();
        assert!((u.matrix[[3, 3]] - Complex64::from_polar(1.0, -0.5 * 3.5)).norm() < 1e-15);
        assert_eq!(u.matrix[[1, 2]], ZERO);
    }

    #[test]
    fn seed_coefficients() {
        let v = gaussian_seed(7, -1.0);
        // (−1/2)·sqrt(2)/1 and (1/4)·sqrt(24)/2
        assert!((v[2].re + 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert!((v[4].re - 0.125 * 24f64.sqrt()).abs() < 1e-15);
        assert_eq!(v[3], ZERO);
    }

    #[test]
    fn eigenvector_components_are_eigenfunctions() {
        let f = OscillatorFrame::new(1.7, 0.6, 1.2).unwrap();
        let n = 120;
        for u in [-9.0, -2.5, 0.0, 0.7, 6.0] {
            let x = u * f.x_scale();
            let v = position_eigenvector(x, n, &f).unwrap();
            let p = u * f.p_scale();
            let w = momentum_eigenvector(p, n, &f).unwrap();
            let i_pow = [ONE, Complex64::new(0.0, 1.0), -ONE, Complex64::new(0.0, -1.0)];
            for k in 0..n {
                let phi = ho_eigenfunction(k, x, &f).unwrap();
                assert!(
                    (v.amplitudes()[k] - phi).norm() < 1e-10 * (f.inv_length_sq().powf(0.25)),
                    "x {u} n {k}"
                );
                let phip = hermite_functions(k, u).unwrap()[k] / f.p_scale().sqrt();
                assert!(
                    (w.amplitudes()[k] - i_pow[k % 4] * phip).norm() < 1e-10 / f.p_scale().sqrt(),
                    "p {u} n {k}"
                );
            }
        }
    }

    #[test]
    fn window_is_enforced() {
        let f = OscillatorFrame::unit();
        let e = position_eigenvector(10.5, 64, &f).unwrap_err();
        assert!(matches!(e, Error::WindowExceeded { dim: 64, .. }));
        assert!(position_eigenvector(1.0, 5000, &f).is_err());
        let v = FockVector::basis(0, 64).unwrap();
        assert!(synthesize_wavefunction(&v, vec![0.0, 11.0], &f, CoordinateKind::Position).is_err());
    }

    #[test]
    fn synthesis_of_ground_state() {
        let f = OscillatorFrame::new(2.0, 1.5, 0.5).unwrap();
        let v = FockVector::basis(0, 8).unwrap();
        let grid = vec![-1.0, 0.0, 0.3];
        let s = synthesize_wavefunction(&v, grid.clone(), &f, CoordinateKind::Position).unwrap();
        for (x, val) in grid.iter().zip(s.values()) {
            let want = ho_eigenfunction(0, *x, &f).unwrap();
            assert!((val - want).norm() < 1e-15);
        }
    }
}
