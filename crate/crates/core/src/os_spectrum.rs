//! The fourth-order shear-flow problem with linear profile: Airy-integral
//! characteristic determinant, the two limit curves hugging each tie segment
//! (with explicit constants), ray behavior, and the affine change of spectral
//! variable connecting the lambda plane to the matrix pencil.
//!
//! All determinant work runs in scaled arithmetic: the integrands reach
//! e^{+hundreds} in the growth sectors, so every quadrature accumulates
//! against the running maximum magnitude of its own path.

use crate::airy::airy_fock;
use crate::error::SpectralError;
use crate::model_spectrum;
use crate::scalar_maps::{
    curve_constants, node_cutoff, region_contains, segment_direction, Membership, RegionKind,
    RegionSpec,
};
use crate::scaled::ScaledComplex;
use crate::{Eigenvalue, ProblemParams};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Which of the two eigenvalue strings along a segment a sample belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// One point of a limit curve in the segment frame: lambda = -1 + e^{-i pi/6}(t + i gamma).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub gamma: f64,
    #[serde(serialize_with = "crate::serialize_complex")]
    pub lambda: Complex64,
    pub side: Side,
}

impl CurveSample {
    pub fn from_frame(t: f64, gamma: f64, side: Side) -> Self {
        let lambda =
            Complex64::new(-1.0, 0.0) + segment_direction() * Complex64::new(t, gamma);
        CurveSample { t, gamma, lambda, side }
    }
}

/// Hyperbolic weight attached to one sector solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GKind {
    Sh,
    Ch,
}

/// A single Airy integral u_j(xi) = int g_j(sigma z) v(z) dz along a
/// piecewise-straight path.
#[derive(Clone, Copy, Debug)]
pub struct AiryIntegralSpec {
    pub j: usize,
    pub endpoint_from: Complex64,
    pub endpoint_to: Complex64,
    pub kind: GKind,
    pub lambda: Complex64,
    pub params: ProblemParams,
}

// 20-point Gauss-Legendre rule on [-1, 1] (positive half; mirrored in use).
const GL_X: [f64; 10] = [
    0.0765265211334973,
    0.2277858511416451,
    0.3737060887154195,
    0.5108670019508271,
    0.6360536807265150,
    0.7463319064601508,
    0.8391169718222188,
    0.9122344282513259,
    0.9639719272779138,
    0.9931285991850949,
];
const GL_W: [f64; 10] = [
    0.1527533871307258,
    0.1491729864726037,
    0.1420961093183820,
    0.1316886384491766,
    0.1181945319615184,
    0.1019301198172404,
    0.0832767415767048,
    0.0626720483341091,
    0.0406014298003869,
    0.0176140071391521,
];

fn gl_nodes() -> impl Iterator<Item = (f64, f64)> {
    (0..20).map(|i| {
        if i < 10 {
            (-GL_X[9 - i], GL_W[9 - i])
        } else {
            (GL_X[i - 10], GL_W[i - 10])
        }
    })
}

/// Panel count for a straight leg: density grows like sqrt(|z|), tracking the
/// local Airy oscillation wavelength.
fn panel_count(a: Complex64, b: Complex64) -> usize {
    let len = (b - a).norm();
    let reach = a.norm().max(b.norm());
    ((len * (1.0 + reach).sqrt() / 1.2) as usize + 1).max(2)
}

struct QuadOutcome {
    sh: ScaledComplex,
    ch: ScaledComplex,
    converged: bool,
    on_cut: bool,
}

/// A-priori estimate of log|v(z)| from the exponent of the dominant
/// asymptotic branch. Used only to compare candidate routes.
fn growth_log(z: Complex64) -> f64 {
    if z.norm() < 1e-9 {
        return -1.0;
    }
    let re_zeta = (2.0 / 3.0 * z.powf(1.5)).re;
    if z.arg().abs() < 2.0 * PI / 3.0 {
        -re_zeta
    } else {
        re_zeta.abs()
    }
}

fn route_peak(pts: &[Complex64]) -> f64 {
    let mut peak = f64::NEG_INFINITY;
    for leg in pts.windows(2) {
        for i in 0..=16 {
            let z = leg[0] + (leg[1] - leg[0]) * (i as f64 / 16.0);
            peak = peak.max(growth_log(z));
        }
    }
    peak
}

/// A chord is unusable when it crosses the open negative real axis or dips
/// into the 0.1-rad sliver around it more deeply than its own endpoints.
fn chord_legal(from: Complex64, to: Complex64) -> bool {
    let clearance = |z: Complex64| PI - z.arg().abs();
    let end_clear = clearance(from).min(clearance(to));
    let mut prev = from;
    for i in 1..=64 {
        let z = from + (to - from) * (i as f64 / 64.0);
        if z.norm() > 1e-12 {
            if clearance(z) < 0.1 && clearance(z) < end_clear - 1e-12 {
                return false;
            }
            if prev.im.signum() != z.im.signum() && z.re < 0.0 && prev.re < 0.0 {
                return false;
            }
        }
        prev = z;
    }
    true
}

/// Route from `from` to `to`: the direct chord or two legs through the
/// origin, whichever keeps the running maximum of |v| smallest, so the
/// quadrature error stays relative to the value actually accumulated.
/// Radial legs never cross the cut; an endpoint exactly on the open negative
/// axis is flagged.
fn route(from: Complex64, to: Complex64) -> (Vec<Complex64>, bool) {
    let on_cut = [from, to].iter().any(|e| e.im == 0.0 && e.re < 0.0);
    let direct = vec![from, to];
    if from.norm() < 1e-12 || to.norm() < 1e-12 {
        return (direct, on_cut);
    }
    let via_origin = vec![from, Complex64::new(0.0, 0.0), to];
    if !chord_legal(from, to) {
        return (via_origin, on_cut);
    }
    if route_peak(&direct) <= route_peak(&via_origin) {
        (direct, on_cut)
    } else {
        (via_origin, on_cut)
    }
}

/// One straight leg, both hyperbolic kinds at once. The Airy factor is
/// evaluated once per node; the sums run against the leg's own magnitude base.
fn leg_pair<F: Fn(Complex64) -> (Complex64, Complex64)>(
    a: Complex64,
    b: Complex64,
    g2: &F,
    panels: usize,
) -> (ScaledComplex, ScaledComplex, f64) {
    let len = b - a;
    let mut zs: Vec<Complex64> = Vec::with_capacity(20 * panels);
    let mut jac: Vec<Complex64> = Vec::with_capacity(20 * panels);
    for p in 0..panels {
        for (x, w) in gl_nodes() {
            let t = (p as f64 + 0.5 * (x + 1.0)) / panels as f64;
            zs.push(a + len * t);
            jac.push(len * (0.5 * w / panels as f64));
        }
    }
    let vs: Vec<ScaledComplex> = zs.iter().map(|&z| airy_fock(z)).collect();
    let base = vs.iter().map(|v| v.log_abs()).fold(f64::NEG_INFINITY, f64::max);
    if !base.is_finite() {
        return (ScaledComplex::ZERO, ScaledComplex::ZERO, 0.0);
    }
    let mut s_sh = Complex64::new(0.0, 0.0);
    let mut s_ch = Complex64::new(0.0, 0.0);
    for i in 0..zs.len() {
        let v = &vs[i];
        if v.is_zero() {
            continue;
        }
        let rescaled = v.mantissa * (v.log_scale - base).exp();
        let (gs, gc) = g2(zs[i]);
        s_sh += jac[i] * gs * rescaled;
        s_ch += jac[i] * gc * rescaled;
    }
    (ScaledComplex::new(s_sh, base), ScaledComplex::new(s_ch, base), base)
}

/// Composite adaptive quadrature of (g_sh v, g_ch v) along the route,
/// doubling panel counts until the change is below 1e-12 of the largest
/// integrand magnitude seen on the path.
fn quad_pair<F: Fn(Complex64) -> (Complex64, Complex64)>(
    from: Complex64,
    to: Complex64,
    g2: &F,
) -> QuadOutcome {
    let (pts, on_cut) = route(from, to);
    let mut prev: Option<(ScaledComplex, ScaledComplex)> = None;
    let mut out = (ScaledComplex::ZERO, ScaledComplex::ZERO);
    for attempt in 0..6u32 {
        let mut sh = ScaledComplex::ZERO;
        let mut ch = ScaledComplex::ZERO;
        let mut base = f64::NEG_INFINITY;
        for leg in pts.windows(2) {
            let panels = panel_count(leg[0], leg[1]) << attempt;
            let (lsh, lch, lbase) = leg_pair(leg[0], leg[1], g2, panels);
            sh = sh.add(lsh);
            ch = ch.add(lch);
            base = base.max(lbase);
        }
        out = (sh, ch);
        if let Some((psh, pch)) = prev {
            let tol = base + (1e-12f64).ln();
            let dsh = out.0.sub(psh);
            let dch = out.1.sub(pch);
            let settled = |d: &ScaledComplex| d.is_zero() || d.log_abs() <= tol;
            if settled(&dsh) && settled(&dch) {
                return QuadOutcome { sh: out.0, ch: out.1, converged: true, on_cut };
            }
        }
        prev = Some(out);
    }
    QuadOutcome { sh: out.0, ch: out.1, converged: false, on_cut }
}

fn g_both(lambda: Complex64, params: &ProblemParams, j: usize) -> impl Fn(Complex64) -> (Complex64, Complex64) {
    let winv = params.omega(j).conj();
    let sigma = params.sigma();
    let alpha = params.alpha;
    let head = Complex64::new(1.0, 0.0) - lambda;
    move |z: Complex64| {
        let arg = alpha * (head - winv * (sigma * z));
        (arg.sinh(), arg.cosh())
    }
}

/// One Airy integral per its spec. Errors when the path cannot avoid the
/// open negative real axis or the panel doubling fails to settle.
pub fn os_integral(spec: &AiryIntegralSpec) -> Result<ScaledComplex, SpectralError> {
    let g = g_both(spec.lambda, &spec.params, spec.j);
    let q = quad_pair(spec.endpoint_from, spec.endpoint_to, &g);
    if q.on_cut {
        return Err(SpectralError::domain(
            "os_integral",
            "endpoint on the negative real axis".to_string(),
        ));
    }
    if !q.converged {
        return Err(SpectralError::no_convergence("os_integral", 6, spec.endpoint_to));
    }
    Ok(match spec.kind {
        GKind::Sh => q.sh,
        GKind::Ch => q.ch,
    })
}

/// Plain int v(z) dz from `from` to `to`, same engine, unit weight.
pub fn airy_line_integral(from: Complex64, to: Complex64) -> Result<ScaledComplex, SpectralError> {
    let one = |_: Complex64| (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let q = quad_pair(from, to, &one);
    if q.on_cut {
        return Err(SpectralError::domain(
            "airy_line_integral",
            "endpoint on the negative real axis".to_string(),
        ));
    }
    if !q.converged {
        return Err(SpectralError::no_convergence("airy_line_integral", 6, to));
    }
    Ok(q.sh)
}

/// Column of the characteristic determinant for sector j: the pair
/// (U_sh, U_ch) with U = u(xi_j^+) - u(xi_j^-). Basepoint-independent, so it
/// is taken as one sweep from xi_j^- to xi_j^+; splitting it at the origin
/// would difference two O(1) quadratures down to the exponentially small
/// entry and destroy its relative accuracy in the decay sectors.
fn entry_pair(
    lambda: Complex64,
    params: &ProblemParams,
    j: usize,
) -> (ScaledComplex, ScaledComplex) {
    let w = params.omega(j);
    let s = params.sigma().recip();
    let xp = w * ((Complex64::new(1.0, 0.0) - lambda) * s);
    let xm = w * ((Complex64::new(-1.0, 0.0) - lambda) * s);
    let g = g_both(lambda, params, j);
    let q = quad_pair(xm, xp, &g);
    debug_assert!(q.converged);
    (q.sh, q.ch)
}

/// Sector pair for the determinant at this lambda: (0, l) on the Omega sheet
/// l near the left segment, (0, 2) below the tent.
pub fn os_sector_pair(lambda: Complex64, params: &ProblemParams) -> Result<usize, SpectralError> {
    match region_contains(&RegionSpec::omega(params, RegionKind::Omega1), lambda) {
        Membership::Omega1 => Ok(1),
        Membership::Omega2 => Ok(2),
        _ => {
            if region_contains(&RegionSpec::d_eps(params), lambda) == Membership::Inside {
                Ok(2)
            } else {
                Err(SpectralError::domain(
                    "os_det",
                    format!("{lambda} outside the segment neighborhood and the tent"),
                ))
            }
        }
    }
}

/// Characteristic determinant with an explicit sector pair (0, j2). Any pair
/// is characteristic (the zero set does not depend on it); the gated chooser
/// in `os_det` picks the pair whose asymptotics are uniform in that region.
pub fn os_det_pair(lambda: Complex64, params: &ProblemParams, j2: usize) -> ScaledComplex {
    let (t1, t2) = os_det_terms(lambda, params, j2);
    t1.sub(t2)
}

fn os_det_terms(
    lambda: Complex64,
    params: &ProblemParams,
    j2: usize,
) -> (ScaledComplex, ScaledComplex) {
    assert!(j2 == 1 || j2 == 2);
    let (a11, a21) = entry_pair(lambda, params, 0);
    let (a12, a22) = entry_pair(lambda, params, j2);
    (a11.mul(a22), a12.mul(a21))
}

/// Region-gated characteristic determinant.
pub fn os_det(lambda: Complex64, params: &ProblemParams) -> Result<ScaledComplex, SpectralError> {
    let j2 = os_sector_pair(lambda, params)?;
    Ok(os_det_pair(lambda, params, j2))
}

/// |det| against the larger of its two products, with the region-gated pair.
pub fn os_det_residual(lambda: Complex64, params: &ProblemParams) -> Result<f64, SpectralError> {
    let j2 = os_sector_pair(lambda, params)?;
    Ok(os_det_residual_pair(lambda, params, j2))
}

/// Same normalization with an explicit sector pair (no region gate).
pub fn os_det_residual_pair(lambda: Complex64, params: &ProblemParams, j2: usize) -> f64 {
    let (t1, t2) = os_det_terms(lambda, params, j2);
    let d = t1.sub(t2);
    if d.is_zero() {
        return 0.0;
    }
    (d.log_abs() - t1.log_abs().max(t2.log_abs())).exp()
}

/// Newton refinement on the determinant, with the sector pair frozen from the
/// seed's region so the iteration sees one analytic function.
pub fn os_refine(
    seed: Complex64,
    params: &ProblemParams,
    tol: f64,
) -> Result<Eigenvalue, SpectralError> {
    let j2 = os_sector_pair(seed, params)?;
    model_spectrum::refine_root(seed, |z| os_det_pair(z, params, j2), tol)
}

/// Window of validity of the curve formulas along the segment coordinate t.
pub fn curve_window(params: &ProblemParams) -> (f64, f64) {
    (params.eps.powf(0.25), 2.0 / 3.0f64.sqrt() - node_cutoff(params))
}

/// Signed normal offset of the limit curve at t:
/// gamma = +-(sqrt(eps)/sqrt(t)) ln(c(lambda(t,0)) t^{3/4} / eps^{1/4}),
/// with the curve constant taken on the segment (leading order).
pub fn gamma_offset(t: f64, side: Side, params: &ProblemParams) -> f64 {
    assert!(t > 0.0);
    let on_segment = CurveSample::from_frame(t, 0.0, side).lambda;
    let (c, _) = curve_constants(on_segment, params.alpha);
    let mag = (params.eps.sqrt() / t.sqrt())
        * (c * t.powf(0.75) / params.eps.powf(0.25)).ln();
    match side {
        Side::Plus => mag,
        Side::Minus => -mag,
    }
}

/// Paired curve samples at the requested t values; entries outside the window
/// are returned separately as skipped.
pub fn os_curves(params: &ProblemParams, t_grid: &[f64]) -> (Vec<CurveSample>, Vec<f64>) {
    let (t_lo, t_hi) = curve_window(params);
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for &t in t_grid {
        if !(t_lo..=t_hi).contains(&t) {
            skipped.push(t);
            continue;
        }
        for side in [Side::Plus, Side::Minus] {
            samples.push(CurveSample::from_frame(t, gamma_offset(t, side, params), side));
        }
    }
    (samples, skipped)
}

/// Quantization along a curve: t_k^{3/2} = sqrt(eps) 3 pi (k - 1/8 -+ k0),
/// solved by fixed point on k0(lambda(t_k, gamma(t_k))). Indices whose t
/// leaves (0, 2/sqrt(3)] come back as per-index errors.
pub fn os_segment_eigenvalues(
    params: &ProblemParams,
    k_min: i64,
    k_max: i64,
    side: Side,
) -> Vec<(i64, Result<(Eigenvalue, CurveSample), SpectralError>)> {
    (k_min..=k_max)
        .into_par_iter()
        .map(|k| (k, os_segment_index(params, k, side)))
        .collect()
}

fn os_segment_index(
    params: &ProblemParams,
    k: i64,
    side: Side,
) -> Result<(Eigenvalue, CurveSample), SpectralError> {
    let sign = match side {
        Side::Plus => -1.0,
        Side::Minus => 1.0,
    };
    let mut k0 = 0.0;
    let mut t = 0.0;
    for _ in 0..10 {
        let rhs = params.eps.sqrt() * 3.0 * PI * (k as f64 - 0.125 + sign * k0);
        if rhs <= 0.0 {
            return Err(SpectralError::domain(
                "os_segment_eigenvalues",
                format!("index {k} below the first admissible level"),
            ));
        }
        let t_new = rhs.powf(2.0 / 3.0);
        if t_new > 2.0 / 3.0f64.sqrt() + 1e-12 {
            return Err(SpectralError::domain(
                "os_segment_eigenvalues",
                format!("index {k} lands beyond the node"),
            ));
        }
        let sample = CurveSample::from_frame(t_new, gamma_offset(t_new, side, params), side);
        k0 = curve_constants(sample.lambda, params.alpha).1;
        if (t_new - t).abs() < 1e-10 {
            let eig = Eigenvalue::asymptotic(sample.lambda, k);
            return Ok((eig, sample));
        }
        t = t_new;
    }
    Err(SpectralError::no_convergence(
        "os_segment_eigenvalues fixed point",
        10,
        Complex64::new(t, 0.0),
    ))
}

/// Ray predictions: identical to the model ray family (the two quantization
/// conditions differ by an infinitesimal term), re-exported under this name
/// so callers can treat the routes uniformly.
pub fn os_ray_eigenvalues(
    params: &ProblemParams,
    k_min: i64,
    k_max: i64,
) -> Vec<(i64, Result<Eigenvalue, SpectralError>)> {
    model_spectrum::ray_eigenvalues(params, k_min, k_max)
}

/// Counting function per curve: half the model segment count.
pub fn os_counting(lambda: Complex64, params: &ProblemParams) -> Result<f64, SpectralError> {
    model_spectrum::counting_segment(lambda, params).map(|n| 0.5 * n)
}

/// lambda = i eps (alpha^2 - lambda_tilde): from the pencil variable of the
/// fourth-order problem to the spectral plane of the tie.
pub fn lambda_from_pencil(lambda_tilde: Complex64, params: &ProblemParams) -> Complex64 {
    Complex64::new(0.0, params.eps) * (Complex64::new(params.alpha * params.alpha, 0.0) - lambda_tilde)
}

/// Inverse map: lambda_tilde = alpha^2 + i lambda / eps.
pub fn pencil_from_lambda(lambda: Complex64, params: &ProblemParams) -> Complex64 {
    Complex64::new(params.alpha * params.alpha, 0.0) + Complex64::new(0.0, 1.0 / params.eps) * lambda
}
