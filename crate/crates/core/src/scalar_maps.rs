//! Closed-form scalar maps and regions of the spectral plane.
//!
//! The central object is the action integral
//!     f(lambda) = (2/3) e^{-i pi/4} [(1-lambda)^{3/2} - (-1-lambda)^{3/2}],
//! real and positive on the imaginary ray lambda = -i mu, mu > 1/sqrt(3).
//! Around it sit the geometric regions used by the eigenvalue routes:
//! the wedge D_eps below the tent through +-1 and d_eps, and the half-strip
//! Omega_eps around the left segment of the spectral tie, split by that
//! segment into two sheets.

use crate::error::SpectralError;
use crate::ProblemParams;
use num_complex::Complex64;

/// Node of the spectral tie, -i/sqrt(3).
pub fn node() -> Complex64 {
    Complex64::new(0.0, -1.0 / 3.0f64.sqrt())
}

/// Principal w^{3/2} = w sqrt(w); the cut sits on the negative real w axis,
/// which maps to the cuts [1, +inf) and [-1, +inf) of the two terms of f.
fn pow32(w: Complex64) -> Complex64 {
    w * w.sqrt()
}

fn on_ambiguous_segment(lambda: Complex64) -> bool {
    lambda.im == 0.0 && lambda.re > -1.0 && lambda.re < 1.0
}

/// The action map f. Single-valued on the plane minus [-1, +inf); the open
/// real segment (-1, 1) is rejected because the two shore values differ there.
pub fn f_map(lambda: Complex64) -> Result<Complex64, SpectralError> {
    if on_ambiguous_segment(lambda) {
        return Err(SpectralError::domain(
            "f_map",
            format!("lambda = {lambda} lies on the branch segment (-1, 1)"),
        ));
    }
    let rot = Complex64::from_polar(2.0 / 3.0, -std::f64::consts::FRAC_PI_4);
    Ok(rot * (pow32(Complex64::new(1.0, 0.0) - lambda) - pow32(Complex64::new(-1.0, 0.0) - lambda)))
}

/// Analytic derivative of f, same branch structure.
pub fn f_deriv(lambda: Complex64) -> Result<Complex64, SpectralError> {
    if on_ambiguous_segment(lambda) {
        return Err(SpectralError::domain(
            "f_deriv",
            format!("lambda = {lambda} lies on the branch segment (-1, 1)"),
        ));
    }
    let rot = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    Ok(rot
        * ((Complex64::new(-1.0, 0.0) - lambda).sqrt()
            - (Complex64::new(1.0, 0.0) - lambda).sqrt()))
}

/// Depth of the tent vertex: d_eps = -i(1/sqrt(3) + eps^{1/2} ln eps^{-theta}).
pub fn d_epsilon(params: &ProblemParams) -> Complex64 {
    let depth = 1.0 / 3.0f64.sqrt() + params.eps.sqrt() * params.theta * (1.0 / params.eps).ln();
    Complex64::new(0.0, -depth)
}

/// Logarithmic node cutoff 2 eps^{1/2} ln eps^{-theta}, the distance from the
/// node at which segment asymptotics are truncated.
pub fn node_cutoff(params: &ProblemParams) -> f64 {
    2.0 * params.eps.sqrt() * params.theta * (1.0 / params.eps).ln()
}

/// Envelope of the segment decay rates, phi(t) = (4/3) Re (2 e^{i pi/6} - t)^{3/2}.
/// Decreases from 8/3 at the endpoint to exactly 0 at the node end t = 2/sqrt(3).
pub fn phi_envelope(t: f64) -> f64 {
    assert!(
        (0.0..=2.0 / 3.0f64.sqrt() + 1e-12).contains(&t),
        "t = {t} outside [0, 2/sqrt(3)]"
    );
    let w = Complex64::from_polar(2.0, std::f64::consts::FRAC_PI_6) - Complex64::new(t, 0.0);
    4.0 / 3.0 * pow32(w).re
}

/// Curve constants of the eigenvalue strings near the left segment:
/// c = 2 sqrt(pi) |sh[alpha(1-lambda)]| / sh(2 alpha) and
/// k0 = arg sh[alpha(1-lambda)] / (2 pi), principal argument.
pub fn curve_constants(lambda: Complex64, alpha: f64) -> (f64, f64) {
    assert!(alpha > 0.0);
    let sh = (alpha * (Complex64::new(1.0, 0.0) - lambda)).sinh();
    let c = 2.0 * std::f64::consts::PI.sqrt() * sh.norm() / (2.0 * alpha).sinh();
    let k0 = sh.arg() / (2.0 * std::f64::consts::PI);
    (c, k0)
}

/// Which region a point falls in; the Omega kinds also report the sheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Outside,
    Inside,
    /// Omega sheet on the positive-normal side of the segment [-1, node]
    /// (the side the first eigenvalue string lives on).
    Omega1,
    /// Omega sheet on the negative-normal side.
    Omega2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    DEps,
    Omega1,
    Omega2,
    ExtendedAiry,
}

/// Geometric region descriptor. For the Omega kinds, d1 and d2 are the
/// cutoff points on the segment [-1, node]: d1 at distance eps^{1/4} from -1,
/// d2 at distance 2 eps^{1/2} ln eps^{-theta} from the node.
#[derive(Debug, Clone, Copy)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub epsilon: f64,
    pub theta: f64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// Unit direction of the segment from -1 toward the node, e^{-i pi/6}.
pub fn segment_direction() -> Complex64 {
    Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_6)
}

impl RegionSpec {
    pub fn d_eps(params: &ProblemParams) -> RegionSpec {
        RegionSpec {
            kind: RegionKind::DEps,
            epsilon: params.eps,
            theta: params.theta,
            d1: Complex64::new(0.0, 0.0),
            d2: Complex64::new(0.0, 0.0),
        }
    }

    pub fn omega(params: &ProblemParams, kind: RegionKind) -> RegionSpec {
        assert!(matches!(kind, RegionKind::Omega1 | RegionKind::Omega2));
        let dir = segment_direction();
        let d1 = Complex64::new(-1.0, 0.0) + dir * params.eps.powf(0.25);
        let t2 = 2.0 / 3.0f64.sqrt() - node_cutoff(params);
        let d2 = Complex64::new(-1.0, 0.0) + dir * t2;
        RegionSpec {
            kind,
            epsilon: params.eps,
            theta: params.theta,
            d1,
            d2,
        }
    }

    /// Extended Airy domain with the default sliver constant 3/4; callers
    /// needing another constant use `airy::in_extended_domain` directly.
    pub fn extended_airy() -> RegionSpec {
        RegionSpec {
            kind: RegionKind::ExtendedAiry,
            epsilon: 0.0,
            theta: 0.0,
            d1: Complex64::new(0.0, 0.0),
            d2: Complex64::new(0.0, 0.0),
        }
    }
}

/// Segment-frame coordinates of lambda: lambda = -1 + e^{-i pi/6}(t + i gamma).
/// t runs 0 at -1 to 2/sqrt(3) at the node; gamma > 0 is the Omega1 side.
pub fn segment_frame(lambda: Complex64) -> (f64, f64) {
    let w = (lambda + Complex64::new(1.0, 0.0))
        * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_6);
    (w.re, w.im)
}

pub fn region_contains(region: &RegionSpec, lambda: Complex64) -> Membership {
    match region.kind {
        RegionKind::DEps => {
            let depth = 1.0 / 3.0f64.sqrt()
                + region.epsilon.sqrt() * region.theta * (1.0 / region.epsilon).ln();
            // below both tent lines through (+-1, 0) and (0, -depth)
            let inside =
                lambda.re.abs() <= 1.0 && lambda.im <= -depth * (1.0 + lambda.re.abs());
            if inside {
                Membership::Inside
            } else {
                Membership::Outside
            }
        }
        RegionKind::ExtendedAiry => {
            if crate::airy::in_extended_domain(lambda, 0.75) {
                Membership::Inside
            } else {
                Membership::Outside
            }
        }
        RegionKind::Omega1 | RegionKind::Omega2 => {
            // half-strip around the left segment
            if !(-1.0..=0.0).contains(&lambda.re) || lambda.im > 0.0 {
                return Membership::Outside;
            }
            // outside the endpoint disc about -1 through d1
            let r1 = (region.d1 + Complex64::new(1.0, 0.0)).norm();
            if (lambda + Complex64::new(1.0, 0.0)).norm() < r1 {
                return Membership::Outside;
            }
            // on the far side of the chord through d2 and +1 from the node:
            // inside points share the sign of the mid-segment reference
            let chord = region.d2 - Complex64::new(1.0, 0.0);
            let side = |p: Complex64| {
                chord.re * (p.im - 0.0) - chord.im * (p.re - 1.0)
            };
            let reference = side(Complex64::new(-1.0, 0.0) + segment_direction() / 3.0f64.sqrt());
            if side(lambda) * reference < 0.0 {
                return Membership::Outside;
            }
            let (_, gamma) = segment_frame(lambda);
            if gamma >= 0.0 {
                Membership::Omega1
            } else {
                Membership::Omega2
            }
        }
    }
}
