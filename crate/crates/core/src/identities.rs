//! Exponential operator identities of the two-photon algebra, checked numerically.
//!
//! The generators `K₊ = (a†)²/2`, `K₋ = a²/2`, `K₀ = (a†a + aa†)/4` close under
//! `[K₀, K±] = ±K±`, `[K₊, K₋] = −2K₀`. Identities proven with the 2×2 matrices hold
//! in every representation; here they are evaluated in the 2×2 and 3×3 matrix
//! representations and in truncated Fock space, where only a guarded low-occupation
//! block is compared.
//!
//! Residuals are the largest entry difference over the compared block divided by the
//! largest entry of either side (see [`block_residual`]).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    block_residual, commutator, expm_action, identity, matrix_exponential, max_abs, residual, Matrix, SparseMatrix,
};
use crate::operators::{displacement_generator_sparse, lowering, squeeze_generator_sparse, ACTION_TOL, EXPM_TOL};
use crate::parallel::map_ordered;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Double commutators of a Weyl pair must vanish to this level, relative to
/// `max|A|·max|B|·max(max|A|, max|B|)`.
pub const WEYL_HYPOTHESIS_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Two,
    Three,
    Fock(usize),
}

impl Representation {
    pub fn label(&self) -> String {
        match self {
            Self::Two => "2x2".into(),
            Self::Three => "3x3".into(),
            Self::Fock(n) => format!("fock({n})"),
        }
    }
}

/// `K₊, K₀, K₋` in one representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationTriple {
    pub rep: Representation,
    pub k_plus: Matrix,
    pub k_zero: Matrix,
    pub k_minus: Matrix,
}

impl RepresentationTriple {
    pub fn dim(&self) -> usize {
        self.k_zero.nrows()
    }

    /// `g₊K₊ + g₀K₀ + g₋K₋`
    pub fn element(&self, g: &Su11Element) -> Matrix {
        let mut m = self.k_plus.mapv(|v| v * g.plus);
        m.scaled_add(g.zero, &self.k_zero);
        m.scaled_add(g.minus, &self.k_minus);
        m
    }

    /// Largest block residual among the three commutation relations, over the
    /// leading `block` rows and columns (the whole matrix when `None`).
    pub fn algebra_residual(&self, block: Option<usize>) -> f64 {
        let b = block.unwrap_or(self.dim());
        let r1 = block_residual(&commutator(&self.k_zero, &self.k_plus), &self.k_plus, b);
        let r2 = block_residual(&commutator(&self.k_zero, &self.k_minus), &(-&self.k_minus), b);
        let r3 = block_residual(
            &commutator(&self.k_plus, &self.k_minus),
            &self.k_zero.mapv(|v| v * -2.0),
            b,
        );
        r1.max(r2).max(r3)
    }
}

/// The 2×2 matrices, the 3×3 matrices, or the Fock realization truncated at `N`.
///
/// In Fock space `K₀` is stored as its exact diagonal `(2n+1)/4`; `K₊` and `K₋` are
/// the exact restrictions of `(a†)²/2` and `a²/2`. `[K₊, K₋] = −2K₀` then holds on
/// rows and columns `n ≤ N − 3`.
pub fn symplectic_rep(rep: Representation) -> Result<RepresentationTriple> {
    let c = |v: f64| Complex64::from(v);
    let (k_plus, k_zero, k_minus) = match rep {
        Representation::Two => {
            let mut kp = Matrix::zeros((2, 2));
            kp[[1, 0]] = c(-1.0);
            let mut km = Matrix::zeros((2, 2));
            km[[0, 1]] = c(1.0);
            let mut k0 = Matrix::zeros((2, 2));
            k0[[0, 0]] = c(-0.5);
            k0[[1, 1]] = c(0.5);
            (kp, k0, km)
        }
        Representation::Three => {
            let s = std::f64::consts::SQRT_2;
            let mut kp = Matrix::zeros((3, 3));
            kp[[0, 1]] = c(s);
            kp[[1, 2]] = c(s);
            let mut km = Matrix::zeros((3, 3));
            km[[1, 0]] = c(-s);
            km[[2, 1]] = c(-s);
            let mut k0 = Matrix::zeros((3, 3));
            k0[[0, 0]] = c(1.0);
            k0[[2, 2]] = c(-1.0);
            (kp, k0, km)
        }
        Representation::Fock(n) => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "Fock dimension must be at least 2, got {n}"
                )));
            }
            let a = lowering(n);
            let km = a.dot(&a).mapv(|v| v * 0.5);
            let kp = km.t().to_owned();
            let k0 = Matrix::from_diag(&ndarray::Array1::from_iter((0..n).map(|k| c((2 * k + 1) as f64 / 4.0))));
            (kp, k0, km)
        }
    };
    Ok(RepresentationTriple {
        rep,
        k_plus,
        k_zero,
        k_minus,
    })
}

/// Coefficients of `g₊K₊ + g₀K₀ + g₋K₋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su11Element {
    pub plus: Complex64,
    pub zero: Complex64,
    pub minus: Complex64,
}

impl Su11Element {
    pub fn new(plus: Complex64, zero: Complex64, minus: Complex64) -> Self {
        Self { plus, zero, minus }
    }

    /// The squeeze generator `−ξ(a†)²/2 + ξ*a²/2 = −ξK₊ + ξ*K₋`.
    pub fn squeeze(xi: Complex64) -> Self {
        Self::new(-xi, ZERO, xi.conj())
    }

    /// Sparse Fock matrix of this element in dimension `n`.
    pub fn fock_sparse(&self, n: usize) -> SparseMatrix {
        let mut t = Vec::with_capacity(3 * n);
        for k in 0..n {
            t.push((k, k, self.zero * ((2 * k + 1) as f64 / 4.0)));
            if k >= 2 {
                let s = 0.5 * ((k * (k - 1)) as f64).sqrt();
                t.push((k, k - 2, self.plus * s));
                t.push((k - 2, k, self.minus * s));
            }
        }
        SparseMatrix::from_triplets(n, t)
    }
}

/// Exponents of the normal-ordered product `e^{aK₊} e^{cK₀} e^{bK₋}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisentangleCoefficients {
    pub a_plus: Complex64,
    pub c_zero: Complex64,
    pub b_minus: Complex64,
}

impl DisentangleCoefficients {
    /// `e^{aK₊} e^{cK₀} e^{bK₋}` in the given representation.
    pub fn product(&self, triple: &RepresentationTriple) -> Result<Matrix> {
        let p = exact_factor(&triple.k_plus.mapv(|v| v * self.a_plus))?;
        let z = exact_factor(&triple.k_zero.mapv(|v| v * self.c_zero))?;
        let m = exact_factor(&triple.k_minus.mapv(|v| v * self.b_minus))?;
        Ok(p.dot(&z).dot(&m))
    }
}

/// Exponential of a diagonal or nilpotent matrix without Padé rounding; anything
/// else goes through [`matrix_exponential`].
fn exact_factor(m: &Matrix) -> Result<Matrix> {
    let n = m.nrows();
    let diagonal = m.indexed_iter().all(|((i, j), v)| i == j || *v == ZERO);
    if diagonal {
        return Ok(Matrix::from_diag(&m.diag().mapv(|v| v.exp())));
    }
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=n {
        term = term.dot(m).mapv(|v| v / k as f64);
        if term.iter().all(|v| *v == ZERO) {
            return Ok(sum);
        }
        sum += &term;
    }
    matrix_exponential(m, EXPM_TOL)
}

/// `exp(−ξK₊ + ξ*K₋) = e^{aK₊} e^{cK₀} e^{bK₋}` with `a = −(ξ/|ξ|) tanh|ξ|`,
/// `b = (ξ*/|ξ|) tanh|ξ|`, `c = −2 ln cosh|ξ|`.
pub fn disentangle_squeeze(xi: Complex64) -> DisentangleCoefficients {
    let r = xi.norm();
    if r == 0.0 {
        return DisentangleCoefficients {
            a_plus: ZERO,
            c_zero: ZERO,
            b_minus: ZERO,
        };
    }
    let u = xi / r;
    let t = r.tanh();
    // ln cosh r = r + ln(1 + e^{−2r}) − ln 2
    let ln_cosh = r + (-2.0 * r).exp().ln_1p() - std::f64::consts::LN_2;
    DisentangleCoefficients {
        a_plus: -u * t,
        c_zero: Complex64::from(-2.0 * ln_cosh),
        b_minus: u.conj() * t,
    }
}

/// Which quadratic is exponentiated in `exp(−(z/2)·Q)`, `z = e^{iφ} tanh r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadraticSign {
    /// `Q = (a† − a)²`, generator `−zK₊ + 2zK₀ − zK₋`.
    Difference,
    /// `Q = (a† + a)²`, generator `−zK₊ − 2zK₀ − zK₋`.
    Sum,
}

impl QuadraticSign {
    /// `s` in `Q = (a† − s·a)²`.
    pub fn s(&self) -> f64 {
        match self {
            Self::Difference => 1.0,
            Self::Sum => -1.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Difference => "difference",
            Self::Sum => "sum",
        }
    }

    /// The generator `−(z/2)(a† − s·a)²` as an algebra element.
    pub fn generator(&self, phi: f64, r: f64) -> Su11Element {
        let z = Complex64::from_polar(r.tanh(), phi);
        Su11Element::new(-z, z * (2.0 * self.s()), -z)
    }

    /// `exp(−(z/2)Q)` is a contraction on Fock space exactly when `Re(s·z) ≤ 0`:
    /// `(a† − a)²` is negative semidefinite and `(a† + a)²` positive semidefinite.
    pub fn is_contraction(&self, phi: f64, r: f64) -> bool {
        self.s() * r.tanh() * phi.cos() <= 0.0
    }
}

/// `exp(−(z/2)(a† − s·a)²) = e^{aK₊} e^{cK₀} e^{bK₋}` with
/// `a = b = −z/(1 − s·z)` and `c = −2 ln(1 − s·z)`.
pub fn disentangle_shifted_quadratic(sign: QuadraticSign, phi: f64, r: f64) -> Result<DisentangleCoefficients> {
    if !(phi.is_finite() && r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite parameters phi = {phi}, r = {r}"
        )));
    }
    let z = Complex64::from_polar(r.tanh(), phi);
    let d = ONE - z * sign.s();
    if d == ZERO {
        return Err(Error::SingularFactorization { z });
    }
    let a = -z / d;
    Ok(DisentangleCoefficients {
        a_plus: a,
        c_zero: d.ln() * -2.0,
        b_minus: a,
    })
}

/// `‖e^{G} − e^{aK₊}e^{cK₀}e^{bK₋}‖` in a finite representation, with `e^G` from
/// [`matrix_exponential`].
pub fn reconstruction_residual(
    generator: &Su11Element,
    coeffs: &DisentangleCoefficients,
    triple: &RepresentationTriple,
) -> Result<f64> {
    let lhs = matrix_exponential(&triple.element(generator), EXPM_TOL)?;
    Ok(residual(&lhs, &coeffs.product(triple)?))
}

/// Fock-space reconstruction residual on the leading `block × block` corner.
///
/// The left side is the truncated exponential `e^{G_N}` applied column by column;
/// the right side uses the terminating series of the triangular factors, which
/// equal the untruncated operators on that corner.
pub fn fock_reconstruction_residual(
    generator: &Su11Element,
    coeffs: &DisentangleCoefficients,
    n: usize,
    block: usize,
) -> Result<f64> {
    let block = block.min(n);
    let g = generator.fock_sparse(n);
    let kp = Su11Element::new(ONE, ZERO, ZERO).fock_sparse(n);
    let km = Su11Element::new(ZERO, ZERO, ONE).fock_sparse(n);
    let mut lhs = Matrix::zeros((block, block));
    let mut rhs = Matrix::zeros((block, block));
    for j in 0..block {
        let e = basis(j, n);
        let l = expm_action(&g, &e, ACTION_TOL)?;
        let mut v = nilpotent_action(&km, coeffs.b_minus, &e);
        for (k, x) in v.iter_mut().enumerate() {
            *x *= (coeffs.c_zero * ((2 * k + 1) as f64 / 4.0)).exp();
        }
        let r = nilpotent_action(&kp, coeffs.a_plus, &v);
        for i in 0..block {
            lhs[[i, j]] = l[i];
            rhs[[i, j]] = r[i];
        }
    }
    Ok(block_residual(&lhs, &rhs, block))
}

fn basis(j: usize, n: usize) -> Vec<Complex64> {
    let mut e = vec![ZERO; n];
    e[j] = ONE;
    e
}

/// `e^{cK} v` for nilpotent `K`; the Taylor series is summed until a term vanishes.
fn nilpotent_action(k: &SparseMatrix, c: Complex64, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = v.to_vec();
    let mut term = v.to_vec();
    let mut next = vec![ZERO; v.len()];
    for j in 1..=v.len() {
        k.matvec(&term, &mut next);
        let f = c / j as f64;
        for t in next.iter_mut() {
            *t *= f;
        }
        std::mem::swap(&mut term, &mut next);
        if term.iter().all(|t| *t == ZERO) {
            break;
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
    }
    out
}

/// How a Hadamard series ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "order")]
pub enum SeriesTermination {
    /// Nested commutators vanish identically beyond this order.
    Exact(usize),
    /// Two consecutive terms fell below unit roundoff relative to the sum.
    Converged(usize),
    /// `order_cap` was reached first.
    Capped(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HadamardSeries {
    pub matrix: Matrix,
    pub termination: SeriesTermination,
}

/// `e^A B e^{−A} = B + [A,B] + [A,[A,B]]/2! + …`, summed through `order_cap`
/// nested commutators.
pub fn hadamard_conjugation(a: &Matrix, b: &Matrix, order_cap: usize) -> Result<HadamardSeries> {
    if !a.is_square() || a.dim() != b.dim() {
        return Err(Error::InvalidParameter(format!(
            "Hadamard series needs square matrices of equal size, got {:?} and {:?}",
            a.dim(),
            b.dim()
        )));
    }
    let sa = SparseMatrix::from_dense(a);
    let mut sum = b.clone();
    let mut term = b.clone();
    let mut small = 0;
    for k in 1..=order_cap {
        term = (sa.mul_dense(&term) - sa.left_mul_dense(&term)).mapv(|v| v / k as f64);
        if term.iter().all(|v| *v == ZERO) {
            return Ok(HadamardSeries {
                matrix: sum,
                termination: SeriesTermination::Exact(k - 1),
            });
        }
        sum += &term;
        if max_abs(term.view()) <= crate::linalg::UNIT_ROUNDOFF * max_abs(sum.view()) {
            small += 1;
            if small == 2 {
                return Ok(HadamardSeries {
                    matrix: sum,
                    termination: SeriesTermination::Converged(k),
                });
            }
        } else {
            small = 0;
        }
    }
    Ok(HadamardSeries {
        matrix: sum,
        termination: SeriesTermination::Capped(order_cap),
    })
}

/// The function moved through the exponential in [`exponential_reordering_check`].
#[derive(Debug, Clone, PartialEq)]
pub enum ReorderFunction {
    /// `f(X) = Σ c_k X^k`
    Polynomial(Vec<Complex64>),
    /// `f(X) = e^X`
    Exponential,
}

impl ReorderFunction {
    fn apply(&self, x: &Matrix) -> Result<Matrix> {
        match self {
            Self::Exponential => matrix_exponential(x, EXPM_TOL),
            Self::Polynomial(c) => {
                let n = x.nrows();
                let mut acc = Matrix::zeros((n, n));
                for ck in c.iter().rev() {
                    acc = acc.dot(x);
                    for i in 0..n {
                        acc[[i, i]] += ck;
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// `‖e^A f(B) − f(e^A B e^{−A}) e^A‖` over the leading block (everything when `None`).
pub fn exponential_reordering_check(a: &Matrix, b: &Matrix, f: &ReorderFunction, block: Option<usize>) -> Result<f64> {
    if !a.is_square() || a.dim() != b.dim() {
        return Err(Error::InvalidParameter(
            "reordering needs square matrices of equal size".into(),
        ));
    }
    let ea = matrix_exponential(a, EXPM_TOL)?;
    let ema = matrix_exponential(&(-a), EXPM_TOL)?;
    let lhs = ea.dot(&f.apply(b)?);
    let rhs = f.apply(&ea.dot(b).dot(&ema))?.dot(&ea);
    Ok(block_residual(&lhs, &rhs, block.unwrap_or(a.nrows())))
}

/// `‖e^{A+B} − e^A e^B e^{−[A,B]/2}‖` over the leading block, after confirming
/// `[A,[A,B]] = [B,[A,B]] = 0` on that block.
pub fn weyl_bch_check(a: &Matrix, b: &Matrix, block: Option<usize>) -> Result<f64> {
    if !a.is_square() || a.dim() != b.dim() {
        return Err(Error::InvalidParameter(
            "Weyl check needs square matrices of equal size".into(),
        ));
    }
    let blk = block.unwrap_or(a.nrows()).min(a.nrows());
    let c = commutator(a, b);
    let corner = |m: &Matrix| max_abs(m.slice(ndarray::s![..blk, ..blk]));
    let (na, nb) = (corner(a), corner(b));
    let scale = na * nb * na.max(nb);
    let double = corner(&commutator(a, &c)).max(corner(&commutator(b, &c)));
    if double > WEYL_HYPOTHESIS_TOL * scale.max(f64::MIN_POSITIVE) && double > 0.0 {
        return Err(Error::HypothesisViolated { residual: double });
    }
    let lhs = matrix_exponential(&(a + b), EXPM_TOL)?;
    let rhs = matrix_exponential(a, EXPM_TOL)?
        .dot(&matrix_exponential(b, EXPM_TOL)?)
        .dot(&matrix_exponential(&c.mapv(|v| v * -0.5), EXPM_TOL)?);
    Ok(block_residual(&lhs, &rhs, blk))
}

/// Weyl form for `A = λa†`, `B = μa` in Fock space, where `[A, B] = −λμ` on the
/// leading block. The left side is the truncated `e^{λa† + μa}`.
pub fn fock_weyl_residual(lambda: Complex64, mu: Complex64, n: usize, block: usize) -> Result<f64> {
    let block = block.min(n);
    let mut t = Vec::with_capacity(2 * n);
    let mut up = Vec::with_capacity(n);
    let mut down = Vec::with_capacity(n);
    for k in 1..n {
        let s = (k as f64).sqrt();
        t.push((k, k - 1, lambda * s));
        t.push((k - 1, k, mu * s));
        up.push((k, k - 1, Complex64::from(s)));
        down.push((k - 1, k, Complex64::from(s)));
    }
    let g = SparseMatrix::from_triplets(n, t);
    let ad = SparseMatrix::from_triplets(n, up);
    let a = SparseMatrix::from_triplets(n, down);
    let scalar = (lambda * mu * 0.5).exp();
    let mut lhs = Matrix::zeros((block, block));
    let mut rhs = Matrix::zeros((block, block));
    for j in 0..block {
        let e = basis(j, n);
        let l = expm_action(&g, &e, ACTION_TOL)?;
        let r = nilpotent_action(&ad, lambda, &nilpotent_action(&a, mu, &e));
        for i in 0..block {
            lhs[[i, j]] = l[i];
            rhs[[i, j]] = r[i] * scalar;
        }
    }
    Ok(block_residual(&lhs, &rhs, block))
}

/// `e^{−iHt/ħ} D(α) S(ξ) = D(αe^{−iωt}) S(ξe^{−2iωt}) e^{−iHt/ħ}` in Fock space,
/// compared on the leading block. `wt` is `ωt`.
pub fn fock_evolution_reordering_residual(
    alpha: Complex64,
    xi: Complex64,
    wt: f64,
    n: usize,
    block: usize,
) -> Result<f64> {
    let block = block.min(n);
    let phase = |k: usize| Complex64::from_polar(1.0, -wt * (k as f64 + 0.5));
    let d = displacement_generator_sparse(alpha, n);
    let s = squeeze_generator_sparse(xi, n);
    let d_t = displacement_generator_sparse(alpha * Complex64::from_polar(1.0, -wt), n);
    let s_t = squeeze_generator_sparse(xi * Complex64::from_polar(1.0, -2.0 * wt), n);
    let mut lhs = Matrix::zeros((block, block));
    let mut rhs = Matrix::zeros((block, block));
    for j in 0..block {
        let e = basis(j, n);
        let l = expm_action(&d, &expm_action(&s, &e, ACTION_TOL)?, ACTION_TOL)?;
        let r = expm_action(&d_t, &expm_action(&s_t, &e, ACTION_TOL)?, ACTION_TOL)?;
        for i in 0..block {
            lhs[[i, j]] = l[i] * phase(i);
            rhs[[i, j]] = r[i] * phase(j);
        }
    }
    Ok(block_residual(&lhs, &rhs, block))
}

/// `e^{A} a e^{−A}` for the squeeze generator `A = −ξ(a†)²/2 + ξ*a²/2`, summed as a
/// Hadamard series in dimension `n` and compared on the leading block with
/// `cosh|ξ|·a + (ξ/|ξ|) sinh|ξ|·a†`.
pub fn fock_hadamard_squeeze_residual(xi: Complex64, n: usize, block: usize) -> Result<f64> {
    let a = lowering(n);
    let gen = squeeze_generator_sparse(xi, n).to_dense();
    let cap = hadamard_order(xi.norm());
    let series = hadamard_conjugation(&gen, &a, cap)?;
    let r = xi.norm();
    let u = if r == 0.0 { ZERO } else { xi / r };
    let mut want = a.mapv(|v| v * r.cosh());
    want.scaled_add(u * r.sinh(), &a.t().to_owned());
    Ok(block_residual(&series.matrix, &want, block))
}

/// Orders needed before `r^k/k!` drops below `1e-11`.
pub fn hadamard_order(r: f64) -> usize {
    let mut term = 1.0;
    let mut k = 0;
    while term > 1e-11 && k < 400 {
        k += 1;
        term *= r / k as f64;
    }
    k + 1
}

/// Block for the Fock Hadamard comparison: `⌊4/r²⌋` clamped to `[2, 32]`.
///
/// Rounding in `AX − XA` leaves entries of order `ε` where the exact commutator
/// vanishes, and each further nesting multiplies them by roughly `r·n`, so the
/// compared block has to shrink as `r` grows.
pub fn hadamard_fock_block(r: f64) -> usize {
    if r <= 0.0 {
        return 32;
    }
    (4.0 / (r * r)).floor().clamp(2.0, 32.0) as usize
}

/// Compare `expm([[0, ξ*], [ξ, 0]])` with
/// `[[cosh|ξ|, (ξ*/|ξ|) sinh|ξ|], [(ξ/|ξ|) sinh|ξ|, cosh|ξ|]]`; at `ξ = 0` the closed
/// form is the identity.
pub fn closed_exponential_check(xi: Complex64) -> Result<f64> {
    let mut m = Matrix::zeros((2, 2));
    m[[0, 1]] = xi.conj();
    m[[1, 0]] = xi;
    let got = matrix_exponential(&m, EXPM_TOL)?;
    let r = xi.norm();
    let u = if r == 0.0 { ZERO } else { xi / r };
    let mut want = Matrix::zeros((2, 2));
    want[[0, 0]] = Complex64::from(r.cosh());
    want[[1, 1]] = Complex64::from(r.cosh());
    want[[0, 1]] = u.conj() * r.sinh();
    want[[1, 0]] = u * r.sinh();
    Ok(residual(&got, &want))
}

/// Leading block of a Fock check at squeeze `r` and dimension `n` that stays clear of
/// the truncation boundary: `⌊(n − 40) / (cosh 2r + 4 sinh 2r)⌋`, at least 1.
pub fn fock_guard_block(r: f64, n: usize) -> usize {
    let spread = (2.0 * r).cosh() + 4.0 * (2.0 * r).sinh();
    ((n.saturating_sub(40)) as f64 / spread).floor().max(1.0) as usize
}

// ---------------------------------------------------------------------------
// Seeded sweep

/// Commutation relations of the matrix representations are exact up to the rounding
/// of `√2·√2` in the 3×3 matrices.
pub const ALGEBRA_TOL: f64 = 4.0 * crate::linalg::UNIT_ROUNDOFF;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_160_314;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    HadamardSqueeze,
    Reordering,
    WeylBch,
    DisentangleSqueeze,
    DisentangleDifference,
    DisentangleSum,
    ClosedExponential,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 7] = [
        Self::HadamardSqueeze,
        Self::Reordering,
        Self::WeylBch,
        Self::DisentangleSqueeze,
        Self::DisentangleDifference,
        Self::DisentangleSum,
        Self::ClosedExponential,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Self::HadamardSqueeze => "hadamard_squeeze",
            Self::Reordering => "reordering",
            Self::WeylBch => "weyl_bch",
            Self::DisentangleSqueeze => "disentangle_squeeze",
            Self::DisentangleDifference => "disentangle_difference",
            Self::DisentangleSum => "disentangle_sum",
            Self::ClosedExponential => "closed_exponential",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Two,
    Three,
    Fock,
}

impl RepKind {
    pub const ALL: [RepKind; 3] = [Self::Two, Self::Three, Self::Fock];

    pub fn label(&self) -> &'static str {
        match self {
            Self::Two => "2x2",
            Self::Three => "3x3",
            Self::Fock => "fock",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub draws: usize,
    pub seed: u64,
    /// Squeeze magnitudes are drawn from `[0, r_max]` for the matrix representations.
    pub r_max: f64,
    pub fock_dim: usize,
    /// Fock cells use `r·fock_r_max/r_max`.
    pub fock_r_max: f64,
    pub finite_tol: f64,
    pub fock_tol: f64,
    pub threads: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            draws: 200,
            seed: DEFAULT_SEED,
            r_max: 3.0,
            fock_dim: 300,
            fock_r_max: 1.5,
            finite_tol: 1e-12,
            fock_tol: 1e-9,
            threads: 1,
        }
    }
}

/// Random parameters of one sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrawParams {
    pub r: f64,
    pub phi: f64,
    /// Random algebra element conjugated or reordered.
    pub target: Su11Element,
    /// Quadratic `f(X) = f0 + f1·X + f2·X²` for the reordering cells.
    pub poly: [Complex64; 3],
    /// Heisenberg-pair entries `(a, b, c)` for each of the two 3×3 Weyl matrices.
    pub heisenberg: [[Complex64; 3]; 2],
    /// `λ, μ` of the Fock Weyl pair `λa†, μa`.
    pub weyl: [Complex64; 2],
    pub alpha: Complex64,
    pub wt: f64,
}

impl DrawParams {
    /// The row with every parameter zero; each identity then reduces to `I = I`.
    pub fn zero() -> Self {
        Self {
            r: 0.0,
            phi: 0.0,
            target: Su11Element::new(ZERO, ZERO, ZERO),
            poly: [ONE, ONE, ONE],
            heisenberg: [[ZERO; 3]; 2],
            weyl: [ZERO; 2],
            alpha: ZERO,
            wt: 0.0,
        }
    }

    fn random(rng: &mut ChaCha8Rng, r_max: f64) -> Self {
        let mut c = |scale: f64| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
        let target = Su11Element::new(c(1.0), c(1.0), c(1.0));
        let poly = [c(1.0), c(1.0), c(1.0)];
        let heisenberg = [[c(1.0), c(1.0), c(1.0)], [c(1.0), c(1.0), c(1.0)]];
        let weyl = [c(1.0), c(1.0)];
        let alpha = c(1.5);
        Self {
            r: rng.random_range(0.0..=r_max),
            phi: rng.random_range(0.0..std::f64::consts::TAU),
            target,
            poly,
            heisenberg,
            weyl,
            alpha,
            wt: rng.random_range(0.0..std::f64::consts::TAU),
        }
    }
}

/// Residuals of one row; `None` marks a cell that does not apply to the draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawResiduals {
    pub params: DrawParams,
    pub cells: Vec<CellResidual>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResidual {
    pub rep: RepKind,
    pub identity: IdentityKind,
    pub residual: Option<f64>,
    /// Compared block for Fock cells.
    pub block: Option<usize>,
    pub note: Option<String>,
}

/// Aggregate over all draws of one (representation, identity) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub rep: RepKind,
    pub identity: IdentityKind,
    pub evaluated: usize,
    pub not_applicable: usize,
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub algebra_residual_2x2: f64,
    pub algebra_residual_3x3: f64,
    pub zero_row: DrawResiduals,
    pub summary: Vec<CellSummary>,
    pub rows: Vec<DrawResiduals>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|c| c.passed)
            && self.algebra_residual_2x2 <= ALGEBRA_TOL
            && self.algebra_residual_3x3 <= ALGEBRA_TOL
            && self.zero_row.cells.iter().all(|c| c.residual.is_none_or(|v| v == 0.0))
    }
}

/// The parameter rows a sweep with this configuration evaluates.
pub fn sweep_draws(config: &SweepConfig) -> Vec<DrawParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.draws)
        .map(|_| DrawParams::random(&mut rng, config.r_max))
        .collect()
}

/// Every identity in every representation for `config.draws` seeded draws.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    if config.fock_dim < 48 {
        return Err(Error::InvalidParameter(format!(
            "Fock dimension must be at least 48, got {}",
            config.fock_dim
        )));
    }
    if !(config.r_max >= 0.0 && config.fock_r_max >= 0.0 && config.r_max.is_finite()) {
        return Err(Error::InvalidParameter(
            "squeeze ranges must be finite and nonnegative".into(),
        ));
    }
    let two = symplectic_rep(Representation::Two)?;
    let three = symplectic_rep(Representation::Three)?;
    let draws = sweep_draws(config);
    let rows = map_ordered(&draws, config.threads, |p| evaluate_row(p, config, &two, &three));
    let rows: Vec<DrawResiduals> = rows.into_iter().collect::<Result<_>>()?;
    let zero_row = evaluate_row(&DrawParams::zero(), config, &two, &three)?;

    let mut summary = Vec::new();
    for (idx, proto) in zero_row.cells.iter().enumerate() {
        let tolerance = if proto.rep == RepKind::Fock {
            config.fock_tol
        } else {
            config.finite_tol
        };
        let values: Vec<f64> = rows.iter().filter_map(|r| r.cells[idx].residual).collect();
        let max_residual = values.iter().copied().reduce(f64::max);
        summary.push(CellSummary {
            rep: proto.rep,
            identity: proto.identity,
            evaluated: values.len(),
            not_applicable: rows.len() - values.len(),
            max_residual,
            tolerance,
            passed: values.iter().all(|v| *v <= tolerance),
            note: rows
                .iter()
                .find_map(|r| r.cells[idx].note.clone())
                .or(proto.note.clone()),
        });
    }
    Ok(SweepReport {
        config: *config,
        algebra_residual_2x2: two.algebra_residual(None),
        algebra_residual_3x3: three.algebra_residual(None),
        zero_row,
        summary,
        rows,
    })
}

fn evaluate_row(
    p: &DrawParams,
    config: &SweepConfig,
    two: &RepresentationTriple,
    three: &RepresentationTriple,
) -> Result<DrawResiduals> {
    let mut cells = Vec::with_capacity(21);
    for rep in RepKind::ALL {
        for identity in IdentityKind::ALL {
            cells.push(match rep {
                RepKind::Two => finite_cell(identity, p, two)?,
                RepKind::Three => finite_cell(identity, p, three)?,
                RepKind::Fock => fock_cell(identity, p, config)?,
            });
        }
    }
    Ok(DrawResiduals { params: *p, cells })
}

fn cell(
    rep: RepKind,
    identity: IdentityKind,
    residual: Option<f64>,
    block: Option<usize>,
    note: Option<&str>,
) -> CellResidual {
    CellResidual {
        rep,
        identity,
        residual,
        block,
        note: note.map(str::to_owned),
    }
}

fn finite_cell(identity: IdentityKind, p: &DrawParams, triple: &RepresentationTriple) -> Result<CellResidual> {
    let rep = match triple.rep {
        Representation::Two => RepKind::Two,
        _ => RepKind::Three,
    };
    let xi = Complex64::from_polar(p.r, p.phi);
    let gen = Su11Element::squeeze(xi);
    let value = match identity {
        IdentityKind::HadamardSqueeze => {
            let a = triple.element(&gen);
            let b = triple.element(&p.target);
            let series = hadamard_conjugation(&a, &b, 400)?;
            let want = matrix_exponential(&a, EXPM_TOL)?
                .dot(&b)
                .dot(&matrix_exponential(&(-&a), EXPM_TOL)?);
            Some(residual(&series.matrix, &want))
        }
        IdentityKind::Reordering => {
            // e^{−iHt/ħ} with H = 2ħωK₀
            let a = triple.k_zero.mapv(|v| v * Complex64::new(0.0, -2.0 * p.wt));
            let b = triple.element(&p.target);
            Some(exponential_reordering_check(
                &a,
                &b,
                &ReorderFunction::Polynomial(p.poly.to_vec()),
                None,
            )?)
        }
        IdentityKind::WeylBch => {
            if rep == RepKind::Two {
                return Ok(cell(
                    rep,
                    identity,
                    None,
                    None,
                    Some("the Heisenberg algebra has no faithful 2x2 representation"),
                ));
            }
            let h = |e: &[Complex64; 3]| {
                let mut m = Matrix::zeros((3, 3));
                m[[0, 1]] = e[0];
                m[[1, 2]] = e[1];
                m[[0, 2]] = e[2];
                m
            };
            Some(weyl_bch_check(&h(&p.heisenberg[0]), &h(&p.heisenberg[1]), None)?)
        }
        IdentityKind::DisentangleSqueeze => Some(reconstruction_residual(&gen, &disentangle_squeeze(xi), triple)?),
        IdentityKind::DisentangleDifference | IdentityKind::DisentangleSum => {
            let sign = quadratic_of(identity);
            let coeffs = disentangle_shifted_quadratic(sign, p.phi, p.r)?;
            Some(reconstruction_residual(&sign.generator(p.phi, p.r), &coeffs, triple)?)
        }
        IdentityKind::ClosedExponential => {
            if rep != RepKind::Two {
                return Ok(cell(rep, identity, None, None, Some("closed form is specific to 2x2")));
            }
            Some(closed_exponential_check(xi)?)
        }
    };
    Ok(cell(rep, identity, value, None, None))
}

fn quadratic_of(identity: IdentityKind) -> QuadraticSign {
    if identity == IdentityKind::DisentangleDifference {
        QuadraticSign::Difference
    } else {
        QuadraticSign::Sum
    }
}

fn fock_cell(identity: IdentityKind, p: &DrawParams, config: &SweepConfig) -> Result<CellResidual> {
    let rep = RepKind::Fock;
    let n = config.fock_dim;
    let r = if config.r_max > 0.0 {
        p.r * config.fock_r_max / config.r_max
    } else {
        0.0
    };
    let xi = Complex64::from_polar(r, p.phi);
    let guard = fock_guard_block(r, n);
    let (value, block) = match identity {
        IdentityKind::HadamardSqueeze => {
            let block = hadamard_fock_block(r).min(n);
            (fock_hadamard_squeeze_residual(xi, n, block)?, block)
        }
        IdentityKind::Reordering => {
            let block = guard.min(FOCK_REORDERING_BLOCK);
            (fock_evolution_reordering_residual(p.alpha, xi, p.wt, n, block)?, block)
        }
        IdentityKind::WeylBch => {
            let block = FOCK_WEYL_BLOCK.min(n / 2);
            (fock_weyl_residual(p.weyl[0], p.weyl[1], n, block)?, block)
        }
        IdentityKind::DisentangleSqueeze => {
            let gen = Su11Element::squeeze(xi);
            (
                fock_reconstruction_residual(&gen, &disentangle_squeeze(xi), n, guard)?,
                guard,
            )
        }
        IdentityKind::DisentangleDifference | IdentityKind::DisentangleSum => {
            let sign = quadratic_of(identity);
            if !sign.is_contraction(p.phi, r) {
                return Ok(cell(
                    rep,
                    identity,
                    None,
                    None,
                    Some("left side is unbounded on Fock space unless Re(s z) <= 0"),
                ));
            }
            let coeffs = disentangle_shifted_quadratic(sign, p.phi, r)?;
            (
                fock_reconstruction_residual(&sign.generator(p.phi, r), &coeffs, n, guard)?,
                guard,
            )
        }
        IdentityKind::ClosedExponential => {
            return Ok(cell(rep, identity, None, None, Some("closed form is specific to 2x2")));
        }
    };
    Ok(cell(rep, identity, Some(value), Some(block), None))
}

/// Leading block of the Fock evolution-reordering cell.
pub const FOCK_REORDERING_BLOCK: usize = 8;
/// Leading block of the Fock Weyl cell.
pub const FOCK_WEYL_BLOCK: usize = 32;
