//! Hermite functions and `L_n^{(−1/2)}` against exact rational arithmetic.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use squeezelab::quadrature::integrate;
use squeezelab::special::{ho_eigenfunction, ho_eigenfunctions, laguerre_half};
use squeezelab::{Complex64, OscillatorFrame};

/// `ln|n|` for integers far beyond the `f64` range.
fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * LN_2
}

/// `q^k H_k(p/q)` for `k ≤ n_max`, exactly.
fn scaled_hermite(p: i64, q: i64, n_max: usize) -> Vec<BigInt> {
    let (p, q2) = (BigInt::from(p), BigInt::from(q * q));
    let mut h = vec![BigInt::one(), BigInt::from(2) * &p];
    for n in 1..n_max {
        let next = BigInt::from(2) * &p * &h[n] - BigInt::from(2 * n as i64) * &q2 * &h[n - 1];
        h.push(next);
    }
    h.truncate(n_max + 1);
    h
}

/// `φ_n(p/q)` in the unit frame from the exact Hermite value, combined in logs.
fn hermite_function_oracle(p: i64, q: i64, n_max: usize) -> Vec<f64> {
    let x = p as f64 / q as f64;
    let mut ln_fact = 0.0;
    scaled_hermite(p, q, n_max)
        .iter()
        .enumerate()
        .map(|(n, h)| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            if h.is_zero() {
                return 0.0;
            }
            let ln = ln_abs(h)
                - n as f64 * (q as f64).ln()
                - 0.5 * (n as f64 * LN_2 + ln_fact)
                - 0.25 * PI.ln()
                - 0.5 * x * x;
            let s = if h.is_negative() { -1.0 } else { 1.0 };
            s * ln.exp()
        })
        .collect()
}

/// Largest `|φ_k|` among `k ∈ {n−1, n, n+1}`, the scale against which errors near a
/// node of `φ_n` are measured.
fn envelope(v: &[f64], n: usize) -> f64 {
    let lo = n.saturating_sub(1);
    let hi = (n + 1).min(v.len() - 1);
    v[lo..=hi].iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn ground_state_at_origin() {
    let f = OscillatorFrame::unit();
    let v = ho_eigenfunction(0, 0.0, &f).unwrap();
    assert!((v - PI.powf(-0.25)).abs() < 1e-16);
    assert!((v - 0.751_125_544_464_942_5).abs() < 1e-15);
    let g = OscillatorFrame::new(2.0, 0.3, 1.7).unwrap();
    assert_eq!(ho_eigenfunction(1, 0.0, &g).unwrap(), 0.0);
}

#[test]
fn tenth_state_against_exact_hermite() {
    let want = hermite_function_oracle(13, 10, 10)[10];
    let got = ho_eigenfunction(10, 1.3, &OscillatorFrame::unit()).unwrap();
    assert!((got - want).abs() <= 1e-13 * want.abs(), "{got} vs {want}");
}

#[test]
fn recurrence_matches_exact_evaluation_to_order_200() {
    let f = OscillatorFrame::unit();
    let mut worst = 0.0f64;
    for p in (-80..=80).step_by(4) {
        let oracle = hermite_function_oracle(p, 8, 200);
        let got = ho_eigenfunctions(200, p as f64 / 8.0, &f).unwrap();
        for n in 0..=200 {
            let err = (got[n] - oracle[n]).abs() / envelope(&oracle, n);
            worst = worst.max(err);
        }
    }
    assert!(worst <= 1e-10, "worst envelope-relative error {worst:e}");
}

#[test]
fn general_frame_carries_jacobian() {
    let f = OscillatorFrame::new(3.0, 0.5, 0.25).unwrap();
    let s = f.x_scale();
    let oracle = hermite_function_oracle(-21, 8, 40);
    for n in [0, 7, 40] {
        let got = ho_eigenfunction(n, -21.0 / 8.0 * s, &f).unwrap();
        let want = oracle[n] / s.sqrt();
        assert!((got - want).abs() <= 1e-12 * envelope(&oracle, n) / s.sqrt());
    }
}

/// Coefficients of `H_n` in powers of `x`, exactly.
fn hermite_coefficients(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut h = vec![vec![BigInt::one()], vec![BigInt::zero(), BigInt::from(2)]];
    for n in 1..n_max {
        let mut next = vec![BigInt::zero(); n + 2];
        for (k, c) in h[n].iter().enumerate() {
            next[k + 1] += BigInt::from(2) * c;
        }
        for (k, c) in h[n - 1].iter().enumerate() {
            next[k] -= BigInt::from(2 * n as i64) * c;
        }
        h.push(next);
    }
    h
}

/// `L_n^{(−1/2)}(y) = Σ_k (−1)^k C(n − 1/2, n − k) y^k / k!`.
fn laguerre_oracle(n: usize, y: &BigRational) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let top = BigRational::from_integer(BigInt::from(n as i64)) - &half;
    let mut sum = BigRational::zero();
    for k in 0..=n {
        let m = n - k;
        let mut binom = BigRational::one();
        for j in 0..m {
            binom *= &top - BigRational::from_integer(BigInt::from(j as i64));
            binom /= BigRational::from_integer(BigInt::from(j as i64 + 1));
        }
        let mut term = binom * num_traits::pow(y.clone(), k);
        for j in 1..=k {
            term /= BigRational::from_integer(BigInt::from(j as i64));
        }
        if k % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    sum
}

fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let ln = ln_abs(r.numer()) - ln_abs(r.denom());
    let s = if r.is_negative() { -1.0 } else { 1.0 };
    s * ln.exp()
}

#[test]
fn laguerre_special_values() {
    assert_eq!(laguerre_half(0, 3.7), 1.0);
    assert!((laguerre_half(1, 0.0) - 0.5).abs() < 1e-16);
    // H_2(0) = −2 = (−1)·4·1!·L_1(0)
    let h = hermite_coefficients(6);
    assert_eq!(h[2][0], BigInt::from(-2));

    // H_6(√0.7) through its even coefficients, with x² = 7/10 exact
    let y = BigRational::new(BigInt::from(7), BigInt::from(10));
    let mut h6 = BigRational::zero();
    for (k, c) in h[6].iter().enumerate().filter(|(k, _)| k % 2 == 0) {
        h6 += BigRational::from_integer(c.clone()) * num_traits::pow(y.clone(), k / 2);
    }
    // H_6 = (−1)^3 4^3 3! L_3
    let from_h = to_f64(&h6) / (-384.0);
    let got = laguerre_half(3, 0.7);
    assert!((got - from_h).abs() <= 1e-12 * from_h.abs(), "{got} vs {from_h}");
    assert_eq!(
        h6 / BigRational::from_integer(BigInt::from(-384)),
        laguerre_oracle(3, &y)
    );
}

#[test]
fn even_hermite_conversion_identity() {
    let h = hermite_coefficients(60);
    for p in [0i64, 3, 5, 11, 17, 24, 37] {
        // y = (p/8)²
        let y = BigRational::new(BigInt::from(p * p), BigInt::from(64));
        let yf = (p * p) as f64 / 64.0;
        let mut fact = BigInt::one();
        for n in 0..=30usize {
            if n > 0 {
                fact *= BigInt::from(n as i64);
            }
            let mut h2n = BigRational::zero();
            for (k, c) in h[2 * n].iter().enumerate().filter(|(k, _)| k % 2 == 0) {
                h2n += BigRational::from_integer(c.clone()) * num_traits::pow(y.clone(), k / 2);
            }
            let mut scale = BigInt::from(4).pow(n as u32) * &fact;
            if n % 2 == 1 {
                scale = -scale;
            }
            let exact = laguerre_oracle(n, &y);
            assert_eq!(h2n / BigRational::from_integer(scale), exact, "n = {n}, p = {p}");

            let lo = n.saturating_sub(1);
            let env = (lo..=n + 1)
                .map(|k| to_f64(&laguerre_oracle(k, &y)).abs())
                .fold(0.0, f64::max);
            let got = laguerre_half(n, yf);
            assert!((got - to_f64(&exact)).abs() <= 1e-10 * env, "n = {n}, y = {yf}: {got}");
        }
    }
}

#[test]
fn orthonormality_to_order_60() {
    let f = OscillatorFrame::unit();
    let l = 12.0 + (2.0 * 60.0 + 1.0f64).sqrt() + 4.0;
    let mut worst = 0.0f64;
    for m in 0..=60usize {
        for n in (m..=60).step_by(if m < 10 { 1 } else { 7 }) {
            let v = integrate(
                |x| {
                    let h = ho_eigenfunctions(n, x, &f).unwrap();
                    Complex64::from(h[m] * h[n])
                },
                -l,
                l,
                1e-11,
            )
            .unwrap()
            .re;
            let want = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((v - want).abs());
        }
    }
    assert!(worst <= 1e-8, "worst deviation {worst:e}");
}
