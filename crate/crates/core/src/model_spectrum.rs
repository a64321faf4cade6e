//! Spectrum of the model problem -i eps y'' = (x - lambda) y, y(+-1) = 0.
//!
//! Three routes into the same object: the exact characteristic determinant
//! built from the Airy-Fock function, closed-form asymptotics along the ray
//! and the two segments of the spectral tie, and counting functions for the
//! distribution of eigenvalues along the tie.

use crate::airy::{airy_fock, airy_real_zeros};
use crate::error::SpectralError;
use crate::rootfind::{grid_minima, newton_scaled};
use crate::scalar_maps::{f_map, node, segment_direction, segment_frame};
use crate::scaled::ScaledComplex;
use crate::{Eigenvalue, Method, ProblemParams};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

/// Half-length of the tie segments: the node sits at distance 2/sqrt(3) from
/// each endpoint.
fn segment_length() -> f64 {
    2.0 / 3.0f64.sqrt()
}

fn f_at_node() -> f64 {
    // (4/3)(2/sqrt 3)^{3/2}, the action at the node
    f_map(node()).expect("node is off the branch cut").re
}

/// Characteristic determinant of the model problem, in scaled arithmetic.
/// Vanishes exactly at the eigenvalues; never overflows, however deep in the
/// plane it is evaluated.
pub fn model_det(lambda: Complex64, params: &ProblemParams) -> ScaledComplex {
    let (t1, t2) = det_terms(lambda, params);
    t1.sub(t2)
}

fn det_terms(lambda: Complex64, params: &ProblemParams) -> (ScaledComplex, ScaledComplex) {
    let s = Complex64::from_polar(params.sigma().recip(), FRAC_PI_6);
    let w = Complex64::from_polar(1.0, -2.0 * FRAC_PI_3);
    let xi1 = s * (Complex64::new(-1.0, 0.0) - lambda);
    let xi2 = s * (Complex64::new(1.0, 0.0) - lambda);
    let t1 = airy_fock(xi1).mul(airy_fock(w * xi2));
    let t2 = airy_fock(w * xi1).mul(airy_fock(xi2));
    (t1, t2)
}

/// |det| divided by the larger product term. Scale-free: near 0 at roots,
/// order 1 away from them.
pub fn det_residual(lambda: Complex64, params: &ProblemParams) -> f64 {
    let (t1, t2) = det_terms(lambda, params);
    let d = t1.sub(t2);
    if d.is_zero() {
        return 0.0;
    }
    (d.log_abs() - t1.log_abs().max(t2.log_abs())).exp()
}

/// Smallest ray index k for which pi k sqrt(eps) clears the action at the
/// node, so that f(-i rho) = pi k sqrt(eps) has a solution on the ray.
pub fn ray_min_index(params: &ProblemParams) -> i64 {
    (f_at_node() / (PI * params.eps.sqrt())).ceil() as i64
}

fn ray_action(mu: f64) -> f64 {
    f_map(Complex64::new(0.0, -mu)).expect("ray avoids the branch cut").re
}

/// Solve f(-i mu) = target on mu >= 1/sqrt(3) by bisection. The action is
/// strictly increasing there, so the root is unique.
fn solve_ray(target: f64) -> f64 {
    let node_mu = 1.0 / 3.0f64.sqrt();
    if target <= f_at_node() {
        return node_mu;
    }
    let mut lo = node_mu;
    let mut hi = (target * target / 4.0).max(1.0);
    while ray_action(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ray_action(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ray eigenvalues lambda_k = -i rho_k, where rho_k solves
/// f(-i rho) = pi k sqrt(eps). Indices below admissibility come back as
/// per-index errors; the rest are still returned.
pub fn ray_eigenvalues(
    params: &ProblemParams,
    k_min: i64,
    k_max: i64,
) -> Vec<(i64, Result<Eigenvalue, SpectralError>)> {
    let threshold = f_at_node();
    let sq = params.eps.sqrt();
    (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let target = PI * k as f64 * sq;
            if target < threshold * (1.0 - 1e-14) {
                return (
                    k,
                    Err(SpectralError::domain(
                        "ray_eigenvalues",
                        format!("index {k} below the admissibility threshold"),
                    )),
                );
            }
            let rho = solve_ray(target);
            (k, Ok(Eigenvalue::asymptotic(Complex64::new(0.0, -rho), k)))
        })
        .collect()
}

/// Upper edge of the segment window: zeros with t beyond
/// 2/sqrt(3) - sqrt(eps) theta ln(1/eps) sit inside the node cutoff and are
/// not resolved by the segment asymptotics.
pub fn segment_window_edge(params: &ProblemParams) -> f64 {
    segment_length() - params.eps.sqrt() * params.theta * (1.0 / params.eps).ln()
}

/// Segment eigenvalues on both tie segments. Left segment:
/// lambda_k = e^{-i pi/6} t_k - 1 with t_k = eps^{1/3} x_k built from the
/// real Airy zeros x_k; right segment by the mirror lambda -> -conj(lambda).
/// The list holds the left family (ascending k) then the right one; an empty
/// window yields an empty list.
pub fn segment_eigenvalues(params: &ProblemParams) -> Vec<Eigenvalue> {
    let edge = segment_window_edge(params);
    let sigma = params.sigma();
    if edge <= 0.0 {
        return Vec::new();
    }
    let x_max = edge / sigma;
    // phase law x_k ~ ((3 pi/2)(k - 1/4))^{2/3} bounds how many zeros can fit
    let n = (x_max.powf(1.5) * 2.0 / (3.0 * PI) + 2.5).ceil() as usize;
    let zeros = airy_real_zeros(n).expect("Airy zero iteration converges");
    let mut out = Vec::new();
    for (i, &x) in zeros.iter().enumerate() {
        let t = sigma * x;
        if t >= edge {
            break;
        }
        let lam = segment_direction() * t - Complex64::new(1.0, 0.0);
        out.push(Eigenvalue::asymptotic(lam, (i + 1) as i64));
    }
    let mirrored: Vec<Eigenvalue> = out
        .iter()
        .map(|e| Eigenvalue::asymptotic(Complex64::new(-e.value.re, e.value.im), e.index.unwrap()))
        .collect();
    out.extend(mirrored);
    out
}

/// On-tie test used by the counting functions: distance to the left segment,
/// its mirror, or the ray must be below 1e-9.
const ON_TIE_TOL: f64 = 1e-9;

/// Counting function along a tie segment, measured from the outer endpoint
/// toward the node: N = (eps^{-1/2}/pi)(2/3) t^{3/2} where t is the arclength
/// from -1 (left) or +1 (right).
pub fn counting_segment(lambda: Complex64, params: &ProblemParams) -> Result<f64, SpectralError> {
    let t = segment_arclength(lambda)?;
    Ok(params.eps.sqrt().recip() / PI * (2.0 / 3.0) * t.powf(1.5))
}

fn segment_arclength(lambda: Complex64) -> Result<f64, SpectralError> {
    for cand in [lambda, Complex64::new(-lambda.re, lambda.im)] {
        let (t, g) = segment_frame(cand);
        if g.abs() <= ON_TIE_TOL && t >= -ON_TIE_TOL && t <= segment_length() + ON_TIE_TOL {
            return Ok(t.clamp(0.0, segment_length()));
        }
    }
    Err(SpectralError::domain(
        "counting_segment",
        format!("{lambda} is not on a tie segment"),
    ))
}

/// Counting function on the ray: N = eps^{-1/2} f(lambda)/pi for
/// lambda = -i mu, mu >= 1/sqrt(3).
pub fn counting_ray(lambda: Complex64, params: &ProblemParams) -> Result<f64, SpectralError> {
    let mu = -lambda.im;
    if lambda.re.abs() > ON_TIE_TOL || mu < 1.0 / 3.0f64.sqrt() - ON_TIE_TOL {
        return Err(SpectralError::domain(
            "counting_ray",
            format!("{lambda} is not on the ray below the node"),
        ));
    }
    Ok(ray_action(mu.max(1.0 / 3.0f64.sqrt())) * params.eps.sqrt().recip() / PI)
}

/// Eigenvalues in the disc of radius delta about the node:
/// N = (eps^{-1/2}/pi)(f(-i/sqrt(3) - i delta) - (4/3)(2/sqrt(3) - delta)^{3/2}).
/// At the shrinking radius delta = sqrt(eps) ln eps^{-theta} this collapses to
/// (2^{1/2} 3^{3/4}/pi) ln eps^{-theta}.
pub fn counting_node(delta: f64, params: &ProblemParams) -> Result<f64, SpectralError> {
    if !(delta > 0.0) {
        return Err(SpectralError::domain("counting_node", format!("radius {delta} must be positive")));
    }
    if delta >= segment_length() {
        return Err(SpectralError::domain(
            "counting_node",
            format!("radius {delta} swallows a whole segment"),
        ));
    }
    let mu = 1.0 / 3.0f64.sqrt() + delta;
    let n = ray_action(mu) - 4.0 / 3.0 * (segment_length() - delta).powf(1.5);
    Ok(n * params.eps.sqrt().recip() / PI)
}

/// Newton-refine a seed on a determinant. Converges to |step| <= tol inside a
/// trust region around the seed; the residual reported is the depth of the
/// |det| dip at the root against its immediate neighborhood.
pub fn refine_root<F: Fn(Complex64) -> ScaledComplex>(
    seed: Complex64,
    det: F,
    tol: f64,
) -> Result<Eigenvalue, SpectralError> {
    assert!(tol > 0.0);
    let trust = 0.5 * seed.norm().max(1.0);
    let r = newton_scaled(&det, seed, tol, trust, 60)?;
    let h = 1e-6 * r.root.norm().max(1.0);
    let f0 = det(r.root);
    let residual = if f0.is_zero() {
        0.0
    } else {
        let near = det(r.root + Complex64::new(h, 0.0))
            .log_abs()
            .max(det(r.root - Complex64::new(h, 0.0)).log_abs());
        (f0.log_abs() - near).exp()
    };
    Ok(Eigenvalue { value: r.root, method: Method::Det, index: None, residual, resolved: None })
}

/// All determinant roots inside a rectangle: seeds from the asymptotic
/// families plus a |det| grid scan (the scan covers the node neighborhood,
/// where the asymptotics are void), refined in parallel, deduplicated, and
/// ordered by (re, im).
pub fn determinant_roots(
    params: &ProblemParams,
    re: (f64, f64),
    im: (f64, f64),
    grid: (usize, usize),
    tol: f64,
) -> Vec<Eigenvalue> {
    let det = |lam: Complex64| model_det(lam, params);
    let mut seeds = grid_minima(&det, re, im, grid.0, grid.1);
    let inside = |v: Complex64| v.re > re.0 && v.re < re.1 && v.im > im.0 && v.im < im.1;
    for e in segment_eigenvalues(params) {
        if inside(e.value) {
            seeds.push(e.value);
        }
    }
    let deepest = -im.0.min(im.1);
    if deepest > 1.0 / 3.0f64.sqrt() {
        let k_hi = (ray_action(deepest) / (PI * params.eps.sqrt())).floor() as i64 + 1;
        for (_, r) in ray_eigenvalues(params, ray_min_index(params), k_hi) {
            if let Ok(e) = r {
                if inside(e.value) {
                    seeds.push(e.value);
                }
            }
        }
    }
    let mut roots: Vec<Eigenvalue> = seeds
        .par_iter()
        .filter_map(|&s| refine_root(s, det, tol).ok())
        .filter(|e| inside(e.value))
        .collect();
    roots.sort_by(|a, b| {
        a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im))
    });
    let mut kept: Vec<Eigenvalue> = Vec::new();
    for r in roots {
        let dup = kept
            .iter()
            .any(|k| (k.value - r.value).norm() < 1e-7 * r.value.norm().max(1.0));
        if !dup {
            kept.push(r);
        }
    }
    kept
}
