//! Root location for analytic functions evaluated in scaled arithmetic.
//!
//! The determinants this crate hunts roots of span hundreds of orders of
//! magnitude across the spectral plane, so every routine here consumes
//! `Fn(Complex64) -> ScaledComplex` and works with ratios and phases, which
//! are scale-free.

use crate::error::SpectralError;
use crate::scaled::ScaledComplex;
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct NewtonResult {
    pub root: Complex64,
    /// magnitude of the last Newton step, the natural residual proxy
    pub last_step: f64,
    pub iterations: usize,
}

/// Damped-free Newton iteration with a trust radius around the seed.
/// The derivative comes from central differences at a step frozen to the
/// local scale, h = 1e-6 max(1, |lambda|); the Newton step is assembled as a
/// ratio of scaled values so the determinant magnitude never materializes.
pub fn newton_scaled<F: Fn(Complex64) -> ScaledComplex>(
    f: F,
    seed: Complex64,
    step_tol: f64,
    trust_radius: f64,
    max_iter: usize,
) -> Result<NewtonResult, SpectralError> {
    let mut lam = seed;
    for it in 0..max_iter {
        let h = 1e-6 * lam.norm().max(1.0);
        let f0 = f(lam);
        if f0.is_zero() {
            return Ok(NewtonResult { root: lam, last_step: 0.0, iterations: it });
        }
        let fp = f(lam + Complex64::new(h, 0.0));
        let fm = f(lam - Complex64::new(h, 0.0));
        let ratio = f0.div(fp.sub(fm));
        // step = f0 / f' = ratio * 2h; detect a flat derivative before
        // flattening to f64
        if ratio.log_abs() + (2.0 * h).ln() > (10.0 * trust_radius.max(step_tol)).ln() {
            return Err(SpectralError::no_convergence("newton: derivative too flat", it, lam));
        }
        let step = ratio.to_complex() * 2.0 * h;
        lam -= step;
        if (lam - seed).norm() > trust_radius {
            return Err(SpectralError::no_convergence("newton: left trust region", it, lam));
        }
        if step.norm() <= step_tol {
            return Ok(NewtonResult { root: lam, last_step: step.norm(), iterations: it + 1 });
        }
    }
    Err(SpectralError::no_convergence("newton: iteration budget", max_iter, lam))
}

/// Strict local minima of log|f| on an nr x ni grid over the rectangle,
/// returned as seeds for refinement. Rows are evaluated in parallel.
pub fn grid_minima<F: Fn(Complex64) -> ScaledComplex + Sync>(
    f: &F,
    re: (f64, f64),
    im: (f64, f64),
    nr: usize,
    ni: usize,
) -> Vec<Complex64> {
    assert!(nr >= 3 && ni >= 3);
    let x = |i: usize| re.0 + (re.1 - re.0) * i as f64 / (nr - 1) as f64;
    let y = |j: usize| im.0 + (im.1 - im.0) * j as f64 / (ni - 1) as f64;
    let rows: Vec<Vec<f64>> = (0..ni)
        .into_par_iter()
        .map(|j| (0..nr).map(|i| f(Complex64::new(x(i), y(j))).log_abs()).collect())
        .collect();
    let mut out = Vec::new();
    for j in 1..ni - 1 {
        for i in 1..nr - 1 {
            let c = rows[j][i];
            let is_min = (-1..=1).all(|dj: i64| {
                (-1..=1).all(|di: i64| {
                    (di == 0 && dj == 0)
                        || c < rows[(j as i64 + dj) as usize][(i as i64 + di) as usize]
                })
            });
            if is_min {
                out.push(Complex64::new(x(i), y(j)));
            }
        }
    }
    out
}

/// Number of zeros of f inside the rectangle, by the argument principle.
/// The boundary phase is accumulated with adaptive bisection until every
/// increment is below pi/2; a boundary point landing on (or numerically
/// indistinguishable from) a zero triggers up to three retries on a slightly
/// inflated rectangle.
pub fn winding_rect<F: Fn(Complex64) -> ScaledComplex>(
    f: &F,
    re: (f64, f64),
    im: (f64, f64),
    base_steps: usize,
) -> Result<i64, SpectralError> {
    let diag = ((re.1 - re.0).powi(2) + (im.1 - im.0).powi(2)).sqrt();
    for attempt in 0..3 {
        let pad = attempt as f64 * 1.9e-3 * diag;
        let corners = [
            Complex64::new(re.0 - pad, im.0 - pad),
            Complex64::new(re.1 + pad, im.0 - pad),
            Complex64::new(re.1 + pad, im.1 + pad),
            Complex64::new(re.0 - pad, im.1 + pad),
        ];
        match walk_boundary(f, &corners, base_steps) {
            Ok(w) => return Ok(w),
            Err(_) if attempt < 2 => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

fn walk_boundary<F: Fn(Complex64) -> ScaledComplex>(
    f: &F,
    corners: &[Complex64; 4],
    base_steps: usize,
) -> Result<i64, SpectralError> {
    let mut total = 0.0;
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let n = base_steps.max(2);
        let mut z_prev = a;
        let mut f_prev = f(a);
        for s in 1..=n {
            let z = a + (b - a) * (s as f64 / n as f64);
            let fz = f(z);
            total += phase_step(f, z_prev, z, &f_prev, &fz, 0)?;
            z_prev = z;
            f_prev = fz;
        }
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.25 {
        return Err(SpectralError::domain(
            "winding_rect",
            format!("non-integer winding {turns}"),
        ));
    }
    Ok(rounded as i64)
}

fn phase_step<F: Fn(Complex64) -> ScaledComplex>(
    f: &F,
    z0: Complex64,
    z1: Complex64,
    f0: &ScaledComplex,
    f1: &ScaledComplex,
    depth: usize,
) -> Result<f64, SpectralError> {
    if f0.is_zero() || f1.is_zero() {
        return Err(SpectralError::domain(
            "winding_rect",
            format!("boundary point {z0} or {z1} sits on a zero"),
        ));
    }
    let delta = f1.div(*f0).arg();
    if delta.abs() < 0.499 * std::f64::consts::PI {
        return Ok(delta);
    }
    if depth >= 16 {
        return Err(SpectralError::domain(
            "winding_rect",
            format!("phase jump persists near {z0}"),
        ));
    }
    let mid = 0.5 * (z0 + z1);
    let fm = f(mid);
    Ok(phase_step(f, z0, mid, f0, &fm, depth + 1)?
        + phase_step(f, mid, z1, &fm, f1, depth + 1)?)
}
