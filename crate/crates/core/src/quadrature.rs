//! Adaptive Simpson quadrature for complex-valued integrands on finite intervals.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Refinement limits for [`integrate_with`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Uniform panels the interval is cut into before adapting.
    pub initial_panels: usize,
    /// Maximum bisection depth below an initial panel.
    pub max_depth: u32,
    /// Hard cap on integrand evaluations.
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            initial_panels: 32,
            max_depth: 40,
            max_evaluations: 20_000_000,
        }
    }
}

/// Result of an adaptive integration, with the accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

/// `∫_a^b f(u) du` to absolute accuracy `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_with(f, a, b, tol, QuadratureOptions::default()).map(|i| i.value)
}

pub fn integrate_with<F>(f: F, a: f64, b: f64, tol: f64, opts: QuadratureOptions) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("integration bounds must be finite".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(Integral {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let panels = opts.initial_panels.max(1);
    let h = (hi - lo) / panels as f64;

    let evals = std::cell::Cell::new(0usize);
    let eval = |u: f64| {
        evals.set(evals.get() + 1);
        f(u)
    };

    let mut stack = Vec::with_capacity(2 * opts.max_depth as usize + panels);
    let mut left = eval(lo);
    for k in 0..panels {
        let pa = lo + h * k as f64;
        let pb = if k + 1 == panels { hi } else { lo + h * (k + 1) as f64 };
        let fm = eval(0.5 * (pa + pb));
        let fb = eval(pb);
        stack.push(Panel {
            a: pa,
            b: pb,
            fa: left,
            fm,
            fb,
            whole: simpson(pa, pb, left, fm, fb),
            tol: tol / panels as f64,
            depth: 0,
        });
        left = fb;
    }
    // pop in reverse so panels are summed left to right
    stack.reverse();

    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut unresolved = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let flm = eval(0.5 * (p.a + m));
        let frm = eval(0.5 * (m + p.b));
        let sl = simpson(p.a, m, p.fa, flm, p.fm);
        let sr = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = sl + sr - p.whole;
        let est = diff.norm() / 15.0;
        if est <= p.tol || p.depth >= opts.max_depth || evals.get() >= opts.max_evaluations {
            if est > p.tol {
                unresolved += est;
            }
            total += sl + sr + diff / 15.0;
            err += est;
            continue;
        }
        let child_tol = 0.5 * p.tol;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: sr,
            tol: child_tol,
            depth: p.depth + 1,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: sl,
            tol: child_tol,
            depth: p.depth + 1,
        });
    }

    if unresolved > 0.0 && err > tol {
        return Err(Error::ToleranceNotMet { tol, estimate: err });
    }
    Ok(Integral {
        value: total * sign,
        error_estimate: err,
        evaluations: evals.get(),
    })
}
