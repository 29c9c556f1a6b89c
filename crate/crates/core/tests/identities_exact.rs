//! Identity checks against exact arithmetic and against each other.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use squeezelab::identities::{
    closed_exponential_check, disentangle_shifted_quadratic, disentangle_squeeze, exponential_reordering_check,
    fock_reconstruction_residual, reconstruction_residual, symplectic_rep, weyl_bch_check, QuadraticSign,
    ReorderFunction, Representation, Su11Element, ALGEBRA_TOL,
};
use squeezelab::linalg::{matrix_exponential, Matrix};
use squeezelab::Complex64;

/// `a + b√2` with integer parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Sqrt2 {
    a: i64,
    b: i64,
}

impl Sqrt2 {
    const ZERO: Self = Self { a: 0, b: 0 };

    fn mul(self, o: Self) -> Self {
        Self {
            a: self.a * o.a + 2 * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    fn scale(self, k: i64) -> Self {
        Self {
            a: self.a * k,
            b: self.b * k,
        }
    }

    fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * 2f64.sqrt()
    }
}

type Exact3 = [[Sqrt2; 3]; 3];

fn exact_mul(x: &Exact3, y: &Exact3) -> Exact3 {
    let mut out = [[Sqrt2::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] = out[i][j].add(x[i][k].mul(y[k][j]));
            }
        }
    }
    out
}

fn exact_commutator(x: &Exact3, y: &Exact3) -> Exact3 {
    let (xy, yx) = (exact_mul(x, y), exact_mul(y, x));
    let mut out = [[Sqrt2::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = xy[i][j].add(yx[i][j].scale(-1));
        }
    }
    out
}

fn scaled(x: &Exact3, k: i64) -> Exact3 {
    x.map(|row| row.map(|e| e.scale(k)))
}

#[test]
fn three_dimensional_algebra_is_exact() {
    let r2 = Sqrt2 { a: 0, b: 1 };
    let z = Sqrt2::ZERO;
    let one = Sqrt2 { a: 1, b: 0 };
    let kp: Exact3 = [[z, r2, z], [z, z, r2], [z, z, z]];
    let km: Exact3 = [[z, z, z], [r2.scale(-1), z, z], [z, r2.scale(-1), z]];
    let k0: Exact3 = [[one, z, z], [z, z, z], [z, z, one.scale(-1)]];

    assert_eq!(exact_commutator(&k0, &kp), kp);
    assert_eq!(exact_commutator(&k0, &km), scaled(&km, -1));
    assert_eq!(exact_commutator(&kp, &km), scaled(&k0, -2));

    // the floating-point matrices are the correctly rounded exact ones
    let t = symplectic_rep(Representation::Three).unwrap();
    for (exact, float) in [(&kp, &t.k_plus), (&k0, &t.k_zero), (&km, &t.k_minus)] {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(float[[i, j]], Complex64::from(exact[i][j].to_f64()));
            }
        }
    }
    // √2·√2 rounds to 2 + 4.4e-16, which is all the float residual can contain
    let res = t.algebra_residual(None);
    assert!(res <= ALGEBRA_TOL, "{res:e}");
    assert_eq!(symplectic_rep(Representation::Two).unwrap().algebra_residual(None), 0.0);
}

/// `a + ib` with rational parts.
#[derive(Clone, Debug)]
struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn div_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        Self {
            re: &self.re / &k,
            im: &self.im / &k,
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap(), self.im.to_f64().unwrap())
    }
}

#[test]
fn exponential_at_imaginary_unit_against_rational_series() {
    let zero = GaussRat::zero();
    let i = GaussRat {
        re: BigRational::zero(),
        im: BigRational::one(),
    };
    let minus_i = GaussRat {
        re: BigRational::zero(),
        im: -BigRational::one(),
    };
    // [[0, ξ*], [ξ, 0]] at ξ = i
    let m = [[zero.clone(), minus_i], [i, zero.clone()]];
    let mut term = [
        [
            GaussRat {
                re: BigRational::one(),
                im: BigRational::zero(),
            },
            zero.clone(),
        ],
        [
            zero.clone(),
            GaussRat {
                re: BigRational::one(),
                im: BigRational::zero(),
            },
        ],
    ];
    let mut sum = term.clone();
    for k in 1..40 {
        let mut next = [[zero.clone(), zero.clone()], [zero.clone(), zero.clone()]];
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = zero.clone();
                for j in 0..2 {
                    acc = acc.add(&term[r][j].mul(&m[j][c]));
                }
                next[r][c] = acc.div_int(k);
            }
        }
        term = next;
        for r in 0..2 {
            for c in 0..2 {
                sum[r][c] = sum[r][c].add(&term[r][c]);
            }
        }
    }

    let xi = Complex64::new(0.0, 1.0);
    let mut mf = Matrix::zeros((2, 2));
    mf[[0, 1]] = xi.conj();
    mf[[1, 0]] = xi;
    let e = matrix_exponential(&mf, 1e-15).unwrap();
    for r in 0..2 {
        for c in 0..2 {
            assert!((e[[r, c]] - sum[r][c].to_c64()).norm() <= 1e-15, "({r}, {c})");
        }
    }
    // cosh 1 on the diagonal, ∓i sinh 1 off it
    assert!((sum[0][1].to_c64() - Complex64::new(0.0, -1f64.sinh())).norm() < 1e-16);
    assert!(closed_exponential_check(xi).unwrap() <= 1e-15);
    assert!(closed_exponential_check(Complex64::new(0.0, 0.0)).unwrap() <= 1e-15);
}

#[test]
fn squeeze_coefficients_at_real_two() {
    let d = disentangle_squeeze(Complex64::new(2.0, 0.0));
    let t = 2f64.tanh();
    assert!((d.a_plus - Complex64::from(-t)).norm() < 1e-15);
    assert!((d.b_minus - Complex64::from(t)).norm() < 1e-15);
    assert!((d.c_zero - Complex64::from(-2.0 * 2f64.cosh().ln())).norm() < 1e-14);
}

#[test]
fn disentanglings_hold_in_both_matrix_representations() {
    let two = symplectic_rep(Representation::Two).unwrap();
    let three = symplectic_rep(Representation::Three).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = [0.0f64; 2];
    for _ in 0..200 {
        let r = rng.random_range(0.0..3.0);
        let phi = rng.random_range(0.0..TAU);
        let xi = Complex64::from_polar(r, phi);
        let mut cases = vec![(Su11Element::squeeze(xi), disentangle_squeeze(xi))];
        for sign in [QuadraticSign::Difference, QuadraticSign::Sum] {
            cases.push((
                sign.generator(phi, r),
                disentangle_shifted_quadratic(sign, phi, r).unwrap(),
            ));
        }
        for (g, d) in &cases {
            worst[0] = worst[0].max(reconstruction_residual(g, d, &two).unwrap());
            worst[1] = worst[1].max(reconstruction_residual(g, d, &three).unwrap());
        }
    }
    assert!(worst[0] <= 1e-13 && worst[1] <= 1e-13, "{worst:?}");
}

#[test]
fn fock_residual_falls_with_dimension() {
    let xi = Complex64::from_polar(1.0, 0.7);
    let g = Su11Element::squeeze(xi);
    let d = disentangle_squeeze(xi);
    let block = 8;
    let res: Vec<f64> = [16, 24, 32, 48, 64, 96]
        .iter()
        .map(|&n| fock_reconstruction_residual(&g, &d, n, block).unwrap())
        .collect();
    for w in res.windows(2) {
        assert!(w[1] <= w[0] || w[1] <= 1e-14, "{res:?}");
    }
    assert!(res[0] > 1e-6 && *res.last().unwrap() <= 1e-13, "{res:?}");
}

fn random_upper(rng: &mut ChaCha8Rng, strict: bool) -> Matrix {
    let mut m = Matrix::zeros((3, 3));
    for i in 0..3 {
        for j in i..3 {
            if strict && i == j {
                continue;
            }
            m[[i, j]] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    m
}

#[test]
fn reordering_with_triangular_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let a = random_upper(&mut rng, false);
        let b = random_upper(&mut rng, false);
        let f = ReorderFunction::Polynomial(vec![
            Complex64::new(rng.random_range(-1.0..1.0), 0.0),
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            Complex64::new(0.0, rng.random_range(-1.0..1.0)),
        ]);
        let res = exponential_reordering_check(&a, &b, &f, None).unwrap();
        assert!(res <= 1e-13, "{res:e}");
    }
}

#[test]
fn weyl_form_for_heisenberg_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let mut a = random_upper(&mut rng, true);
        let mut b = random_upper(&mut rng, true);
        // [[0, a, c], [0, 0, b], [0, 0, 0]] pairs commute with their commutator
        a[[0, 2]] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        b[[0, 2]] = Complex64::new(0.0, rng.random_range(-1.0..1.0));
        let res = weyl_bch_check(&a, &b, None).unwrap();
        assert!(res <= 1e-14, "{res:e}");
    }
}
