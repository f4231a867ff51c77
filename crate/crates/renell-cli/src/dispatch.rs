//! One entry point mapping (function, representation, point, lattice) onto
//! the library evaluators. Jacobi-family functions and wpa live on the
//! normalized frame (1, tau): for a general lattice the point is rescaled to
//! z/omega1 and wpa picks up the 1/omega1^2 homogeneity factor.

use num_complex::Complex64;
use renell::eval::Representation;
use renell::jacobi::{jacobi_fourier, Direction};
use renell::qfactor::q_product;
use renell::weierstrass::{wp, wp_tilde};
use renell::{EllipticError, Evaluation, FunctionId, Lattice};

const PRODUCT_TRUNCATION: usize = 2000;

pub fn evaluate(
    fn_id: FunctionId,
    rep: Option<Representation>,
    z: Complex64,
    lat: &Lattice,
    tol: f64,
) -> renell::Result<Evaluation> {
    match fn_id {
        FunctionId::Wpt => wp_tilde(z, lat, rep, tol),
        FunctionId::Wp => wp(z, lat, rep, tol),
        FunctionId::Wpa => {
            if rep == Some(Representation::QProduct) {
                let w1 = lat.omega1();
                let mut ev = q_product(FunctionId::Wpa, z / w1, lat.tau(), PRODUCT_TRUNCATION)?;
                let scale = 1.0 / (w1 * w1);
                ev.value *= scale;
                ev.tail_estimate *= scale.norm();
                Ok(ev)
            } else {
                let mut ev = wp_tilde(z, lat, rep, tol)?;
                let scale = -1.0 / (16.0 * std::f64::consts::PI * std::f64::consts::PI);
                ev.value *= scale;
                ev.tail_estimate *= scale.abs();
                Ok(ev)
            }
        }
        _ => {
            let zn = z / lat.omega1();
            let tau = lat.tau();
            match rep {
                None => match jacobi_fourier(fn_id, zn, tau, Direction::Dir1, tol) {
                    Err(EllipticError::StripViolation { .. }) => {
                        jacobi_fourier(fn_id, zn, tau, Direction::Dir2, tol)
                    }
                    other => other,
                },
                Some(Representation::FourierDir1) => {
                    jacobi_fourier(fn_id, zn, tau, Direction::Dir1, tol)
                }
                Some(Representation::FourierDir2) => {
                    jacobi_fourier(fn_id, zn, tau, Direction::Dir2, tol)
                }
                Some(Representation::QProduct) => q_product(fn_id, zn, tau, PRODUCT_TRUNCATION),
                Some(other) => Err(EllipticError::UnsupportedRepresentation {
                    representation: other.name(),
                    function: fn_id.name(),
                }),
            }
        }
    }
}

pub fn error_name(e: &EllipticError) -> &'static str {
    match e {
        EllipticError::PoleProximity { .. } => "PoleProximity",
        EllipticError::NonConvergence { .. } => "NonConvergence",
        EllipticError::StripViolation { .. } => "StripViolation",
        EllipticError::QuadratureNearPole { .. } => "QuadratureNearPole",
        EllipticError::DegenerateLattice { .. } => "DegenerateLattice",
        EllipticError::UnsupportedRepresentation { .. } => "UnsupportedRepresentation",
    }
}
