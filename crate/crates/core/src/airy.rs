//! The Airy–Fock function v(z), its derivative, and its real zeros.
//!
//! v solves v'' = z v, decays like exp(-(2/3)z^{3/2}) as z -> +inf, and obeys
//! the connection identity
//!     v(z) = e^{-pi i/3} v(e^{2 pi i/3} z) + e^{pi i/3} v(e^{-2 pi i/3} z),
//! equivalently sum_j e^{2 pi i j/3} v(e^{2 pi i j/3} z) = 0.
//!
//! Evaluation branches:
//!  - |z| <= 8.5: Maclaurin series summed in double-double. The series
//!    cancels by a factor exp((4/3)|z|^{3/2}) (~2e14 at the crossover) in the
//!    decay direction; double-double keeps near-full f64 accuracy through it.
//!  - |z| > 8.5, |arg z| <= 2pi/3: asymptotic expansion, adaptively truncated
//!    at its smallest term. The truncation floor exp(-(4/3)|z|^{3/2}) is
//!    ~5e-15 relative at the crossover and shrinks outward.
//!  - |arg z| > 2pi/3: the connection identity; the rotated arguments land
//!    back in the first two branches.
//!
//! The workhorse entry points return scaled values with the exponent
//! exp(-(2/3)Re z^{3/2}) carried in log_scale; `airy_v` flattens to plain
//! complex numbers and reports overflow instead of returning infinities.

use crate::dd::{Dd, DdComplex};
use crate::error::SpectralError;
use crate::scaled::ScaledComplex;
use num_complex::Complex64;

/// v(0) = 3^{-2/3}/Gamma(2/3), split to double-double precision.
const C1: Dd = Dd { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
/// -v'(0) = 3^{-1/3}/Gamma(1/3), split likewise.
const C2: Dd = Dd { hi: 0.2588194037928068, lo: -2.522243111610832e-17 };

const SERIES_RADIUS: f64 = 8.5;
const TWO_THIRDS_PI: f64 = 2.0 * std::f64::consts::FRAC_PI_3;
// ln(f64::MAX), the flattening limit for unscaled results
const LOG_F64_MAX: f64 = 709.782712893384;

/// Which evaluation branch produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Series,
    Asymptotic,
    Connection,
}

/// Plain (unscaled) evaluation result with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct AiryEval {
    pub value: Complex64,
    pub derivative: Complex64,
    pub regime: Regime,
}

/// v(z) and v'(z) as plain complex numbers.
///
/// Fails with an overflow error carrying the exponent when the magnitude
/// leaves the representable range; use `airy_fock_pair` in that regime.
pub fn airy_v(z: Complex64) -> Result<AiryEval, SpectralError> {
    let (v, dv) = airy_fock_pair(z);
    let worst = v.log_abs().max(dv.log_abs());
    if worst > LOG_F64_MAX {
        return Err(SpectralError::Overflow {
            log_magnitude: worst,
        });
    }
    Ok(AiryEval {
        value: v.to_complex(),
        derivative: dv.to_complex(),
        regime: regime_for(z),
    })
}

fn regime_for(z: Complex64) -> Regime {
    if z.norm() <= SERIES_RADIUS {
        Regime::Series
    } else if z.arg().abs() <= TWO_THIRDS_PI {
        Regime::Asymptotic
    } else {
        Regime::Connection
    }
}

/// v(z) in scaled form.
pub fn airy_fock(z: Complex64) -> ScaledComplex {
    airy_fock_pair(z).0
}

/// (v(z), v'(z)) in scaled form; the derivative shares the dispatch.
pub fn airy_fock_pair(z: Complex64) -> (ScaledComplex, ScaledComplex) {
    airy_v_in_regime(z, regime_for(z))
}

/// Evaluation through a forced branch, for overlap and validity testing.
/// The series and asymptotic regimes are meaningful anywhere they converge;
/// the connection regime is exact everywhere.
pub fn airy_v_in_regime(z: Complex64, regime: Regime) -> (ScaledComplex, ScaledComplex) {
    match regime {
        Regime::Series => series_pair(z),
        Regime::Asymptotic => asymptotic_pair(z),
        Regime::Connection => connection_pair(z),
    }
}

/// The closed-form asymptotic v ~ e^{-zeta}/(2 sqrt(pi) z^{1/4}) * sum,
/// zeta = (2/3) z^{3/2}, adaptively truncated. This is the formula whose
/// validity domain the tests probe; it is also the production branch for
/// large |z| inside the principal sector.
pub fn asymptotic_pair(z: Complex64) -> (ScaledComplex, ScaledComplex) {
    let sq = z.sqrt();
    let zeta = (2.0 / 3.0) * z * sq;
    let inv_zeta = 1.0 / zeta;
    // Sums for v (terms (-1)^k u_k zeta^{-k}) and for v' (u_k replaced by
    // (6k+1)/(1-6k) u_k), sharing one power ladder.
    let mut sum_v = Complex64::new(1.0, 0.0);
    let mut sum_d = Complex64::new(1.0, 0.0);
    let mut u = Complex64::new(1.0, 0.0);
    let mut best = f64::INFINITY;
    for k in 1..=30 {
        let kf = k as f64;
        let coef = (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u = u * coef * inv_zeta;
        let term = if k % 2 == 0 { u } else { -u };
        let mag = term.norm();
        // divergent tail: stop at the smallest term
        if mag >= best {
            break;
        }
        best = mag;
        sum_v += term;
        sum_d += term * ((6.0 * kf + 1.0) / (1.0 - 6.0 * kf));
        if mag < 1e-18 {
            break;
        }
    }
    let quarter = sq.sqrt(); // z^{1/4}, principal
    let pref = 1.0 / (2.0 * std::f64::consts::PI.sqrt());
    // phase of e^{-zeta} stays in the mantissa, the real part in log_scale
    let osc = Complex64::new(0.0, -zeta.im).exp();
    let v = ScaledComplex::new(pref / quarter * osc * sum_v, -zeta.re);
    let dv = ScaledComplex::new(-pref * quarter * osc * sum_d, -zeta.re);
    (v, dv)
}

fn series_pair(z: Complex64) -> (ScaledComplex, ScaledComplex) {
    let (v, dv) = series_pair_dd(DdComplex::from_f64(z.re, z.im));
    (
        ScaledComplex::from_complex(Complex64::new(v.re.to_f64(), v.im.to_f64())),
        ScaledComplex::from_complex(Complex64::new(dv.re.to_f64(), dv.im.to_f64())),
    )
}

/// Maclaurin evaluation carried out entirely in double-double arithmetic.
/// Exposed so identity and differencing tests can work below the f64
/// rounding floor; converges usefully for |z| up to the crossover radius.
pub fn series_pair_dd(zdd: DdComplex) -> (DdComplex, DdComplex) {
    // v = C1 f - C2 g with f = 1 + z^3/6 + ..., g = z + z^4/12 + ...;
    // both solve y'' = z y.
    let z2 = zdd.mul(zdd);
    let z3 = z2.mul(zdd);
    let mut f_term = DdComplex::from_f64(1.0, 0.0);
    let mut g_term = zdd;
    // derivative term ladders: fp_k = 3k a_k z^{3k-1}, gp_k = (3k+1) b_k z^{3k}
    let mut fp_term = DdComplex::ZERO;
    let mut gp_term = DdComplex::from_f64(1.0, 0.0);
    let mut f = f_term;
    let mut g = g_term;
    let mut fp = fp_term;
    let mut gp = gp_term;
    for k in 1..=80 {
        let kf = k as f64;
        // f-ladder: term_k = term_{k-1} * z^3 / ((3k-1)(3k))
        f_term = f_term.mul(z3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        // g-ladder: term_k = term_{k-1} * z^3 / ((3k)(3k+1))
        g_term = g_term.mul(z3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        // fp ratio (k>1): k z^3 / ((k-1)(3k-1)(3k)); seed fp_1 = z^2/2.
        // all scalar factors stay exact integers so the pair precision of the
        // ladder survives
        fp_term = if k == 1 {
            z2.div_f64(2.0)
        } else {
            fp_term
                .mul(z3)
                .mul_dd(Dd::from_f64(kf))
                .div_f64((kf - 1.0) * (3.0 * kf - 1.0) * (3.0 * kf))
        };
        // gp ratio: z^3 / ((3k)(3k-2))
        gp_term = gp_term.mul(z3).div_f64((3.0 * kf) * (3.0 * kf - 2.0));
        f = f.add(f_term);
        g = g.add(g_term);
        fp = fp.add(fp_term);
        gp = gp.add(gp_term);
        let biggest = f.abs_est().max(g.abs_est());
        if f_term.abs_est().max(g_term.abs_est()) < 1e-40 * biggest.max(1.0) {
            break;
        }
    }
    let v = DdComplex::new(
        C1.mul(f.re).sub(C2.mul(g.re)),
        C1.mul(f.im).sub(C2.mul(g.im)),
    );
    let dv = DdComplex::new(
        C1.mul(fp.re).sub(C2.mul(gp.re)),
        C1.mul(fp.im).sub(C2.mul(gp.im)),
    );
    (v, dv)
}

fn connection_pair(z: Complex64) -> (ScaledComplex, ScaledComplex) {
    // rotations land in |arg| <= 2pi/3 whenever |arg z| > 2pi/3
    let w = Complex64::from_polar(1.0, TWO_THIRDS_PI);
    let ph = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let (vp, dvp) = eval_principal(w * z);
    let (vm, dvm) = eval_principal(z / w);
    let v = vp.mul_complex(ph.conj()).add(vm.mul_complex(ph));
    let dv = dvp.mul_complex(ph).add(dvm.mul_complex(ph.conj()));
    (v, dv)
}

fn eval_principal(z: Complex64) -> (ScaledComplex, ScaledComplex) {
    debug_assert!(z.arg().abs() <= TWO_THIRDS_PI + 1e-9);
    if z.norm() <= SERIES_RADIUS {
        series_pair(z)
    } else {
        asymptotic_pair(z)
    }
}

/// Extended validity domain of the single-exponential asymptotic: the whole
/// plane outside the unit disc minus a logarithmic sliver about the negative
/// real axis, |arg z| <= pi - kappa ln|z| / |z|^{3/2}.
pub fn in_extended_domain(z: Complex64, kappa: f64) -> bool {
    assert!(kappa >= 0.75, "the sliver constant must be at least 3/4");
    let r = z.norm();
    if r <= 1.0 {
        return false;
    }
    z.arg().abs() <= std::f64::consts::PI - kappa * r.ln() / r.powf(1.5)
}

/// First n zeros of v(-x), x > 0, strictly increasing.
pub fn airy_real_zeros(n: usize) -> Result<Vec<f64>, SpectralError> {
    (1..=n).map(airy_zero).collect()
}

/// k-th zero of v on the negative real axis, returned as x_k > 0 with
/// v(-x_k) = 0; indexed from 1.
pub fn airy_zero(k: usize) -> Result<f64, SpectralError> {
    assert!(k >= 1, "zeros are indexed from 1");
    // seed from inverting the oscillatory phase, T = (3 pi / 2)(k - 1/4)
    let t = 1.5 * std::f64::consts::PI * (k as f64 - 0.25);
    let t2 = t * t;
    let mut x = t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 / t2 - 5.0 / 36.0 / (t2 * t2));
    // Newton on x -> v(-x); d/dx v(-x) = -v'(-x)
    let mut last_abs = f64::INFINITY;
    for _ in 0..50 {
        let (v, dv) = airy_fock_pair(Complex64::new(-x, 0.0));
        let val = v.to_complex().re;
        let slope = -dv.to_complex().re;
        let mut step = val / slope;
        // damp if the residual failed to shrink
        if val.abs() > last_abs {
            step *= 0.5;
        }
        last_abs = val.abs();
        x -= step;
        if step.abs() < 1e-15 * x {
            // converged; the contract |v| <= 1e-12 |v'| x holds with margin
            return Ok(x);
        }
    }
    Err(SpectralError::no_convergence(
        &format!("airy zero {k}"),
        50,
        Complex64::new(-x, 0.0),
    ))
}
