//! Error types shared by every evaluation routine.

use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of series, product, and quadrature evaluations.
#[derive(Debug, Clone, Error)]
pub enum EllipticError {
    /// The evaluation point lies within the pole-exclusion radius of a pole.
    #[error("pole proximity: z = {z} is {distance:.3e} from the pole at {nearest} (radius {radius:.3e})")]
    PoleProximity {
        z: Complex64,
        nearest: Complex64,
        distance: f64,
        radius: f64,
    },

    /// A series or shell sum hit its term cap before meeting the tolerance.
    #[error("non-convergence: {terms} terms used, tail estimate {tail:.3e} above tolerance {tol:.3e}")]
    NonConvergence { terms: usize, tail: f64, tol: f64 },

    /// A frame coordinate lies outside the validity strip of the requested series.
    #[error("strip violation: {coord} coordinate {value:.6} outside the validity strip of {representation}")]
    StripViolation {
        coord: &'static str,
        value: f64,
        representation: &'static str,
    },

    /// A quadrature node fell too close to a pole of the integrand.
    #[error("quadrature node {node} within {distance:.3e} of integrand pole {pole}")]
    QuadratureNearPole {
        node: Complex64,
        pole: Complex64,
        distance: f64,
    },

    /// The half-period ratio is (numerically) real, so the pair spans no lattice.
    #[error("degenerate lattice: |Im(omega2/omega1)| = {im_ratio:.3e} below minimum {minimum:.3e}")]
    DegenerateLattice { im_ratio: f64, minimum: f64 },

    /// The requested representation does not exist for this function.
    #[error("representation {representation} is not available for {function}")]
    UnsupportedRepresentation {
        representation: &'static str,
        function: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, EllipticError>;
