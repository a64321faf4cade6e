//! Eigenvalues of a shear-flow stability problem and of its second-order model,
//! computed by three independent routes and cross-validated:
//!
//! 1. exact characteristic determinants built from the Airy–Fock function,
//! 2. closed-form asymptotics (ray eigenvalues, segment quantization, limit
//!    curves, counting functions),
//! 3. matrix-discretization oracles (finite differences for the model problem,
//!    Chebyshev collocation for the fourth-order problem).
//!
//! The spectrum concentrates on a "spectral tie": the two segments from the
//! endpoints -1 and +1 to the node -i/sqrt(3), continued by the ray down the
//! negative imaginary axis. Everything here is parametrized by eps = 1/(alpha R)
//! with eps -> 0 the singular limit of interest.

pub mod airy;
pub mod dd;
pub mod discretize;
pub mod error;
pub mod model_spectrum;
pub mod os_spectrum;
pub mod rootfind;
pub mod scaled;
pub mod scalar_maps;

use num_complex::Complex64;
use serde::Serialize;

/// Where an eigenvalue estimate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Root of a characteristic determinant.
    Det,
    /// Closed-form asymptotic prediction.
    Asym,
    /// Matrix-discretization oracle.
    Oracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Det => "det",
            Method::Asym => "asym",
            Method::Oracle => "oracle",
        })
    }
}

/// One eigenvalue estimate with its provenance and quality metadata.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Eigenvalue {
    #[serde(serialize_with = "crate::serialize_complex")]
    pub value: Complex64,
    pub method: Method,
    /// Quantization index where one applies (ray k, segment k); None for
    /// oracle output and scan finds.
    pub index: Option<i64>,
    /// For determinant roots: the final Newton step |delta/delta'| relative to
    /// max(1, |lambda|). For asymptotic predictions: 0 (exact by definition of
    /// the formula). For oracle output: the grid-to-grid movement when known.
    pub residual: f64,
    /// Only the spurious filter sets this; None means "not assessed".
    pub resolved: Option<bool>,
}

impl Eigenvalue {
    pub fn asymptotic(value: Complex64, index: i64) -> Self {
        Eigenvalue { value, method: Method::Asym, index: Some(index), residual: 0.0, resolved: None }
    }
}

/// Smallest admissible node-cutoff exponent, (1/3)(3/4)^{3/4}. Below it the
/// envelope bound at the node cannot absorb the cutoff logarithms.
pub fn theta_floor() -> f64 {
    (3.0f64 / 4.0).powf(0.75) / 3.0
}

/// Problem parameters shared by every route.
///
/// Invariant: eps = 1/(alpha * reynolds); theta > (1/3)(3/4)^{3/4} controls
/// the logarithmic cutoffs around the node.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProblemParams {
    pub eps: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl ProblemParams {
    pub fn new(eps: f64, alpha: f64, theta: f64) -> Self {
        assert!(eps > 0.0 && eps < 1.0 && alpha > 0.0);
        assert!(theta > theta_floor(), "theta must exceed (1/3)(3/4)^(3/4)");
        ProblemParams { eps, alpha, theta }
    }

    /// From the physical pair (alpha, R).
    pub fn from_reynolds(alpha: f64, reynolds: f64, theta: f64) -> Self {
        Self::new(1.0 / (alpha * reynolds), alpha, theta)
    }

    pub fn reynolds(&self) -> f64 {
        1.0 / (self.alpha * self.eps)
    }

    /// sigma = eps^{1/3}, the Airy scaling length.
    pub fn sigma(&self) -> f64 {
        self.eps.cbrt()
    }

    /// omega_j = e^{i(2 pi j/3 + pi/6)}, the three rotated sector directions.
    pub fn omega(&self, j: usize) -> Complex64 {
        assert!(j < 3);
        Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::FRAC_PI_3 * j as f64 + std::f64::consts::FRAC_PI_6,
        )
    }
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}
