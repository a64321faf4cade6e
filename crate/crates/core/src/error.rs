//! Error type shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SpectralError {
    /// A quantity of the form e^x left the representable f64 range; the
    /// natural log of the intended magnitude is carried so callers can fall
    /// back to scaled evaluation.
    #[error("magnitude overflow: |result| = exp({log_magnitude:.3}) not representable")]
    Overflow { log_magnitude: f64 },

    /// An iteration (Newton, fixed point, QR) ran out of its iteration budget.
    /// The last iterate is kept for diagnostics.
    #[error("{context}: no convergence after {iterations} iterations (last iterate {last})")]
    NonConvergence {
        context: String,
        iterations: usize,
        last: Complex64,
    },

    /// An argument lies outside the contract of the operation (branch cut,
    /// region membership, parameter range).
    #[error("domain violation in {context}: {detail}")]
    Domain { context: String, detail: String },

    /// The dense eigensolver hit its iteration budget; the eigenvalues that
    /// did deflate are carried so callers can salvage partial work.
    #[error("eigensolve stalled with {got} of {expected} eigenvalues converged", got = converged.len())]
    PartialSpectrum {
        converged: Vec<Complex64>,
        expected: usize,
    },
}

impl SpectralError {
    pub fn domain(context: &str, detail: impl Into<String>) -> SpectralError {
        SpectralError::Domain {
            context: context.to_string(),
            detail: detail.into(),
        }
    }

    pub fn no_convergence(context: &str, iterations: usize, last: Complex64) -> SpectralError {
        SpectralError::NonConvergence {
            context: context.to_string(),
            iterations,
            last,
        }
    }
}

pub type Result<T> = std::result::Result<T, SpectralError>;
