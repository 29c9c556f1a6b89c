//! Dense complex matrices: Padé scaling-and-squaring exponential, LU solves,
//! block residuals, and a compressed-row form for exponential-times-vector products.

use ndarray::{Array2, ArrayView2, Axis};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix = Array2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Unit roundoff of binary64; the Padé degrees below are selected to reach it.
pub const UNIT_ROUNDOFF: f64 = 1.110_223_024_625_156_5e-16;

pub fn identity(n: usize) -> Matrix {
    Array2::from_diag_elem(n, ONE)
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.t().mapv(|v| v.conj())
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.dot(b) - b.dot(a)
}

/// Largest column sum of absolute values.
pub fn norm1(m: &Matrix) -> f64 {
    m.axis_iter(Axis(1))
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: ArrayView2<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `max |L − R|` over the leading `block × block` corner, divided by the largest
/// entry magnitude of either side there. Zero when both blocks vanish.
pub fn block_residual(l: &Matrix, r: &Matrix, block: usize) -> f64 {
    let rows = block.min(l.nrows()).min(r.nrows());
    let cols = block.min(l.ncols()).min(r.ncols());
    let lb = l.slice(ndarray::s![..rows, ..cols]);
    let rb = r.slice(ndarray::s![..rows, ..cols]);
    let scale = max_abs(lb).max(max_abs(rb));
    if scale == 0.0 {
        return 0.0;
    }
    let diff = lb
        .iter()
        .zip(rb.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    diff / scale
}

/// Full-matrix version of [`block_residual`].
pub fn residual(l: &Matrix, r: &Matrix) -> f64 {
    block_residual(l, r, l.nrows().max(l.ncols()))
}

// Padé coefficients b_k for degrees 3, 5, 7, 9, 13 and the matching 1-norm bounds
// below which the approximant alone reaches unit roundoff (Higham 2005).
const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA13: f64 = 5.371_920_351_148_152;

/// `e^M` by scaling and squaring with a diagonal Padé approximant.
///
/// Degree and scaling are chosen so the backward error is at most unit roundoff;
/// `tol` below that level cannot be met and is reported as such.
pub fn matrix_exponential(m: &Matrix, tol: f64) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::InvalidParameter(
            "matrix_exponential needs a square matrix".into(),
        ));
    }
    if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if tol < UNIT_ROUNDOFF {
        return Err(Error::ToleranceNotMet {
            tol,
            estimate: UNIT_ROUNDOFF,
        });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let nrm = norm1(m);
    if nrm == 0.0 {
        return Ok(identity(n));
    }
    let out = if let Some(&(deg, _)) = THETA.iter().find(|(_, th)| nrm <= *th) {
        let coeffs: &[f64] = match deg {
            3 => &B3,
            5 => &B5,
            7 => &B7,
            _ => &B9,
        };
        pade_low(m, coeffs)?
    } else {
        let s = ((nrm / THETA13).log2().ceil()).max(0.0) as i32;
        let scaled = m.mapv(|v| v * 0.5f64.powi(s));
        let mut r = pade13(&scaled)?;
        for _ in 0..s {
            r = r.dot(&r);
        }
        r
    };
    if out.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::ToleranceNotMet {
            tol,
            estimate: f64::INFINITY,
        });
    }
    Ok(out)
}

fn pade_low(a: &Matrix, b: &[f64]) -> Result<Matrix> {
    let n = a.nrows();
    let id = identity(n);
    let a2 = a.dot(a);
    let mut pow = id.clone();
    let mut u = Matrix::zeros((n, n));
    let mut v = Matrix::zeros((n, n));
    let deg = b.len() - 1;
    for k in (0..=deg).step_by(2) {
        v.scaled_add(Complex64::from(b[k]), &pow);
        if k < deg {
            u.scaled_add(Complex64::from(b[k + 1]), &pow);
        }
        if k + 2 <= deg {
            pow = pow.dot(&a2);
        }
    }
    let u = a.dot(&u);
    solve(&(&v - &u), &(&v + &u))
}

fn pade13(a: &Matrix) -> Result<Matrix> {
    let b = |k: usize| Complex64::from(B13[k]);
    let n = a.nrows();
    let id = identity(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let mut inner_u = Matrix::zeros((n, n));
    inner_u.scaled_add(b(13), &a6);
    inner_u.scaled_add(b(11), &a4);
    inner_u.scaled_add(b(9), &a2);
    let mut u = a6.dot(&inner_u);
    u.scaled_add(b(7), &a6);
    u.scaled_add(b(5), &a4);
    u.scaled_add(b(3), &a2);
    u.scaled_add(b(1), &id);
    let u = a.dot(&u);
    let mut inner_v = Matrix::zeros((n, n));
    inner_v.scaled_add(b(12), &a6);
    inner_v.scaled_add(b(10), &a4);
    inner_v.scaled_add(b(8), &a2);
    let mut v = a6.dot(&inner_v);
    v.scaled_add(b(6), &a6);
    v.scaled_add(b(4), &a4);
    v.scaled_add(b(2), &a2);
    v.scaled_add(b(0), &id);
    solve(&(&v - &u), &(&v + &u))
}

/// Solve `A X = B` by LU with partial pivoting.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[[i, k]].norm()))
            .fold((k, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if pmax == 0.0 {
            return Err(Error::InvalidParameter("singular matrix in LU solve".into()));
        }
        if p != k {
            for j in 0..n {
                lu.swap([k, j], [p, j]);
            }
            for j in 0..x.ncols() {
                x.swap([k, j], [p, j]);
            }
        }
        let piv = lu[[k, k]];
        for i in k + 1..n {
            let f = lu[[i, k]] / piv;
            if f == ZERO {
                continue;
            }
            lu[[i, k]] = f;
            for j in k + 1..n {
                let t = lu[[k, j]];
                lu[[i, j]] -= f * t;
            }
            for j in 0..x.ncols() {
                let t = x[[k, j]];
                x[[i, j]] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let piv = lu[[k, k]];
        for j in 0..x.ncols() {
            let mut acc = x[[k, j]];
            for i in k + 1..n {
                acc -= lu[[k, i]] * x[[i, j]];
            }
            x[[k, j]] = acc / piv;
        }
    }
    Ok(x)
}

/// Compressed sparse row matrix, used for `e^M v` when `M` is a ladder-operator polynomial.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<Complex64>,
}

impl SparseMatrix {
    pub fn from_dense(m: &Matrix) -> Self {
        let n = m.nrows();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in m.axis_iter(Axis(0)) {
            for (j, v) in row.iter().enumerate() {
                if *v != ZERO {
                    indices.push(j);
                    data.push(*v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            n,
            indptr,
            indices,
            data,
        }
    }

    /// Build from `(row, col, value)` entries; duplicates are summed.
    pub fn from_triplets(n: usize, mut entries: Vec<(usize, usize, Complex64)>) -> Self {
        entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0; n + 1];
        let mut indices: Vec<usize> = Vec::with_capacity(entries.len());
        let mut data: Vec<Complex64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            assert!(i < n && j < n, "entry ({i}, {j}) outside dimension {n}");
            if last == Some((i, j)) {
                *data.last_mut().expect("previous entry") += v;
                continue;
            }
            indices.push(j);
            data.push(v);
            indptr[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        Self {
            n,
            indptr,
            indices,
            data,
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros((self.n, self.n));
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                m[[i, self.indices[k]]] += self.data[k];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let mut acc = ZERO;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[k] * v[self.indices[k]];
            }
            *o = acc;
        }
    }

    /// `self · x`
    pub fn mul_dense(&self, x: &Matrix) -> Matrix {
        let mut out = Matrix::zeros((self.n, x.ncols()));
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                let v = self.data[k];
                let src = x.row(self.indices[k]);
                out.row_mut(i).zip_mut_with(&src, |o, s| *o += v * s);
            }
        }
        out
    }

    /// `x · self`
    pub fn left_mul_dense(&self, x: &Matrix) -> Matrix {
        let mut out = Matrix::zeros((x.nrows(), self.n));
        for i in 0..self.n {
            let src = x.column(i);
            for k in self.indptr[i]..self.indptr[i + 1] {
                let v = self.data[k];
                out.column_mut(self.indices[k]).zip_mut_with(&src, |o, s| *o += s * v);
            }
        }
        out
    }

    pub fn norm1(&self) -> f64 {
        let mut cols = vec![0.0; self.n];
        for (j, v) in self.indices.iter().zip(&self.data) {
            cols[*j] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `e^M v` by a scaled Taylor series: `M` is split into `s` steps of 1-norm at most 4
/// and each step's series is summed until two consecutive terms fall below `tol`
/// relative to the running sum.
pub fn expm_action(m: &SparseMatrix, v: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    if v.len() != m.dim() {
        return Err(Error::InvalidParameter(format!(
            "vector length {} does not match matrix dimension {}",
            v.len(),
            m.dim()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    const STEP_NORM: f64 = 4.0;
    const MAX_TERMS: usize = 80;
    let steps = (m.norm1() / STEP_NORM).ceil().max(1.0) as usize;
    let inv = 1.0 / steps as f64;
    let mut b = v.to_vec();
    let mut term = vec![ZERO; v.len()];
    let mut next = vec![ZERO; v.len()];
    for _ in 0..steps {
        term.copy_from_slice(&b);
        let mut small = 0;
        let mut converged = false;
        for k in 1..=MAX_TERMS {
            m.matvec(&term, &mut next);
            let f = inv / k as f64;
            for t in next.iter_mut() {
                *t *= f;
            }
            std::mem::swap(&mut term, &mut next);
            for (bi, ti) in b.iter_mut().zip(&term) {
                *bi += ti;
            }
            if inf_norm(&term) <= tol * inf_norm(&b) {
                small += 1;
                if small == 2 {
                    converged = true;
                    break;
                }
            } else {
                small = 0;
            }
        }
        if !converged {
            return Err(Error::ToleranceNotMet {
                tol,
                estimate: inf_norm(&term) / inf_norm(&b).max(f64::MIN_POSITIVE),
            });
        }
        if b.iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
            return Err(Error::OverflowGuard("exponential action left the f64 range".into()));
        }
    }
    Ok(b)
}
