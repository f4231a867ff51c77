//! Renormalized Jacobi functions DN, SN, CN, ND, CD, SD, defined purely by
//! their Fourier series on the normalized lattice (1, tau).
//!
//! Each function has a series along each lattice direction. Dir1 series run
//! over harmonics of z and converge for |beta| < 1/2; Dir2 series run over
//! harmonics of z/tau and converge for |alpha| < 1/2 (ND/CD/SD) or
//! alpha in (0,1) (DN/SN/CN, whose natural cell is centered at z = 1/2).
//! Every trigonometric quotient is rewritten in half-nome exponentials
//! E(w) = e^{i pi w} so each term is a ratio of quantities bounded by 1.
//!
//! Points outside a series' strip are first pulled back by the function's
//! quasi-periods: each of the six satisfies F(z+1) = e1 F(z) and
//! F(z+tau) = e2 F(z) with signs e1, e2 in {+1,-1}, so reduction costs only
//! a tracked sign.

use crate::error::{EllipticError, Result};
use crate::eval::{Evaluation, FunctionId, IdentityReport, Representation};
use crate::lattice::Lattice;
use crate::series::{e_half, SeriesSum, SERIES_TERM_CAP};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Dir1,
    Dir2,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Signs (e1, e2) of the quasi-periods F(z+1) = e1 F(z), F(z+tau) = e2 F(z).
fn period_signs(fn_id: FunctionId) -> Result<(f64, f64)> {
    Ok(match fn_id {
        FunctionId::Dn => (1.0, -1.0),
        FunctionId::Sn => (-1.0, 1.0),
        FunctionId::Cn => (-1.0, -1.0),
        FunctionId::Nd => (1.0, -1.0),
        FunctionId::Cd => (-1.0, 1.0),
        FunctionId::Sd => (-1.0, -1.0),
        other => {
            return Err(EllipticError::UnsupportedRepresentation {
                representation: "jacobi series",
                function: other.name(),
            })
        }
    })
}

/// Center of the function's natural cell: DN/SN/CN series live around
/// z = 1/2, the other three around z = 0.
fn cell_center(fn_id: FunctionId) -> f64 {
    match fn_id {
        FunctionId::Dn | FunctionId::Sn | FunctionId::Cn => 0.5,
        _ => 0.0,
    }
}

/// Pole set: DN/SN/CN have poles on Z + (Z+1/2) tau, the reciprocal-style
/// ND/CD/SD on the half-shifted lattice (Z+1/2) + (Z+1/2) tau.
fn pole_shift(fn_id: FunctionId, lat: &Lattice) -> Complex64 {
    match fn_id {
        FunctionId::Dn | FunctionId::Sn | FunctionId::Cn => lat.omega2() / 2.0,
        _ => lat.omega0(),
    }
}

fn require_valid_tau(tau: Complex64) -> Result<()> {
    if !(tau.im > 1e-9) {
        return Err(EllipticError::DegenerateLattice {
            im_ratio: tau.im,
            minimum: 1e-9,
        });
    }
    Ok(())
}

/// Reduces z to the function's natural cell by whole quasi-periods,
/// returning the reduced point and the accumulated sign.
fn quasi_reduce(fn_id: FunctionId, z: Complex64, lat: &Lattice) -> Result<(Complex64, f64)> {
    let (e1, e2) = period_signs(fn_id)?;
    let c = cell_center(fn_id);
    let (w_red, (m1, m2)) = lat.reduce_to_domain(z - c);
    let mut sign = 1.0;
    if m1.rem_euclid(2) == 1 {
        sign *= e1;
    }
    if m2.rem_euclid(2) == 1 {
        sign *= e2;
    }
    Ok((w_red + c, sign))
}

/// One series term. `n` >= 1; families whose paper index starts at zero are
/// shifted by one, and half-integer frequencies use h = n - 1/2. Constant
/// leading terms are handled by `series_seed`.
fn series_term(
    fn_id: FunctionId,
    dir: Direction,
    n: usize,
    z: Complex64,
    tau: Complex64,
) -> Complex64 {
    let nf = n as f64;
    let h = nf - 0.5;
    // (-1)^n for paper indices starting at 1, (-1)^(n-1) for those starting at 0
    let alt1 = if n % 2 == 1 { -1.0 } else { 1.0 };
    let alt0 = -alt1;
    match dir {
        Direction::Dir1 => match fn_id {
            FunctionId::Dn => {
                let num = e_half(nf * (tau + 2.0 * z)) + e_half(nf * (tau - 2.0 * z));
                2.0 * num / (1.0 + e_half(2.0 * nf * tau))
            }
            FunctionId::Nd => {
                let num = e_half(nf * (tau + 2.0 * z)) + e_half(nf * (tau - 2.0 * z));
                2.0 * alt1 * num / (1.0 + e_half(2.0 * nf * tau))
            }
            FunctionId::Sn => {
                let num = e_half(h * (tau - 2.0 * z)) - e_half(h * (tau + 2.0 * z));
                0.5 * I * num / (1.0 - e_half(2.0 * h * tau))
            }
            FunctionId::Cn => {
                let num = e_half(h * (tau + 2.0 * z)) + e_half(h * (tau - 2.0 * z));
                0.5 * num / (1.0 + e_half(2.0 * h * tau))
            }
            FunctionId::Cd => {
                let num = e_half(h * (tau + 2.0 * z)) + e_half(h * (tau - 2.0 * z));
                0.5 * alt0 * num / (1.0 - e_half(2.0 * h * tau))
            }
            FunctionId::Sd => {
                let num = e_half(h * (tau + 2.0 * z)) - e_half(h * (tau - 2.0 * z));
                -0.5 * I * alt0 * num / (1.0 + e_half(2.0 * h * tau))
            }
            _ => unreachable!("filtered by period_signs"),
        },
        Direction::Dir2 => {
            let p = 1.0 / tau;
            match fn_id {
                FunctionId::Dn => {
                    let num = e_half(2.0 * h * (z - 1.0) * p) + e_half(-2.0 * h * z * p);
                    2.0 * I / tau * alt0 * num / (1.0 - e_half(-2.0 * h * p))
                }
                FunctionId::Sn => {
                    let num = e_half(2.0 * nf * (z - 1.0) * p) + e_half(-2.0 * nf * z * p);
                    0.5 * I / tau * alt1 * num / (1.0 + e_half(-2.0 * nf * p))
                }
                FunctionId::Cn => {
                    let num = e_half(2.0 * h * (z - 1.0) * p) - e_half(-2.0 * h * z * p);
                    -0.5 * I / tau * alt0 * num / (1.0 + e_half(-2.0 * h * p))
                }
                FunctionId::Nd => {
                    let num = e_half(h * (2.0 * z - 1.0) * p) + e_half(-h * (2.0 * z + 1.0) * p);
                    2.0 * I / tau * alt0 * num / (1.0 - e_half(-2.0 * h * p))
                }
                FunctionId::Cd => {
                    let num = e_half(nf * (2.0 * z - 1.0) * p) + e_half(-nf * (2.0 * z + 1.0) * p);
                    0.5 * I / tau * alt1 * num / (1.0 + e_half(-2.0 * nf * p))
                }
                FunctionId::Sd => {
                    let num = e_half(h * (2.0 * z - 1.0) * p) - e_half(-h * (2.0 * z + 1.0) * p);
                    0.5 * I / tau * alt0 * num / (1.0 + e_half(-2.0 * h * p))
                }
                _ => unreachable!("filtered by period_signs"),
            }
        }
    }
}

/// Constant leading term of the series (index 0), where the family has one.
fn series_seed(fn_id: FunctionId, dir: Direction, tau: Complex64) -> Complex64 {
    match (fn_id, dir) {
        (FunctionId::Dn, Direction::Dir1) | (FunctionId::Nd, Direction::Dir1) => c64(1.0, 0.0),
        (FunctionId::Sn, Direction::Dir2) | (FunctionId::Cd, Direction::Dir2) => {
            0.25 * I / tau
        }
        _ => c64(0.0, 0.0),
    }
}

fn strip_check(fn_id: FunctionId, dir: Direction, lat: &Lattice, z: Complex64) -> Result<()> {
    let fc = lat.frame_coords(z);
    match dir {
        Direction::Dir1 => {
            if fc.beta.abs() >= 0.5 - 1e-12 {
                return Err(EllipticError::StripViolation {
                    coord: "beta",
                    value: fc.beta,
                    representation: "fourier-dir1",
                });
            }
        }
        Direction::Dir2 => {
            let centered = fc.alpha - cell_center(fn_id);
            if centered.abs() >= 0.5 - 1e-12 {
                return Err(EllipticError::StripViolation {
                    coord: "alpha",
                    value: fc.alpha,
                    representation: "fourier-dir2",
                });
            }
        }
    }
    Ok(())
}

fn pole_check(fn_id: FunctionId, lat: &Lattice, z: Complex64) -> Result<()> {
    let shift = pole_shift(fn_id, lat);
    let (nearest_rel, _) = lat.reduce_to_domain(z - shift);
    let dist = nearest_rel.norm();
    let radius = lat.exclusion_radius();
    if dist < radius {
        return Err(EllipticError::PoleProximity {
            z,
            nearest: z - nearest_rel,
            distance: dist,
            radius,
        });
    }
    Ok(())
}

/// Evaluates one of the six functions by its directional Fourier series.
/// z is reduced by quasi-periods first; the reduced point must lie strictly
/// inside the series' convergence strip.
pub fn jacobi_fourier(
    fn_id: FunctionId,
    z: Complex64,
    tau: Complex64,
    direction: Direction,
    tol: f64,
) -> Result<Evaluation> {
    require_valid_tau(tau)?;
    let lat = Lattice::from_tau(tau)?;
    let (zr, sign) = quasi_reduce(fn_id, z, &lat)?;
    pole_check(fn_id, &lat, zr)?;
    strip_check(fn_id, direction, &lat, zr)?;

    let rep = match direction {
        Direction::Dir1 => Representation::FourierDir1,
        Direction::Dir2 => Representation::FourierDir2,
    };
    let mut acc = SeriesSum::with_start(tol, series_seed(fn_id, direction, tau));
    for n in 1..=SERIES_TERM_CAP {
        if acc.add(series_term(fn_id, direction, n, zr, tau)) {
            break;
        }
    }
    let mut ev = acc.finish(rep)?;
    ev.value *= sign;
    Ok(ev)
}

/// Fixed-truncation partial sum of the directional series (reduction and
/// sign handling as in `jacobi_fourier`), for residue-identity studies.
fn jacobi_partial(
    fn_id: FunctionId,
    z: Complex64,
    tau: Complex64,
    direction: Direction,
    n_terms: usize,
) -> Result<(Complex64, f64)> {
    require_valid_tau(tau)?;
    let lat = Lattice::from_tau(tau)?;
    let (zr, sign) = quasi_reduce(fn_id, z, &lat)?;
    pole_check(fn_id, &lat, zr)?;
    strip_check(fn_id, direction, &lat, zr)?;

    let mut sum = series_seed(fn_id, direction, tau);
    let mut last = 0.0;
    for n in 1..=n_terms {
        let t = series_term(fn_id, direction, n, zr, tau);
        sum += t;
        last = t.norm();
    }
    Ok((sign * sum, last))
}

/// Residue identity for one function: the two directional series represent
/// the same function, so their truncated difference must vanish as N grows.
/// The report carries both partial sums and the larger of the two last-term
/// magnitudes as the dominant tail scale (folded into rel_residual's floor).
pub fn jacobi_residue_identity(
    fn_id: FunctionId,
    z: Complex64,
    tau: Complex64,
    n_terms: usize,
) -> Result<IdentityReport> {
    let (lhs, _t1) = jacobi_partial(fn_id, z, tau, Direction::Dir1, n_terms)?;
    let (rhs, _t2) = jacobi_partial(fn_id, z, tau, Direction::Dir2, n_terms)?;
    Ok(IdentityReport::new(
        format!("{} dir1 vs dir2 (N={})", fn_id.name(), n_terms),
        lhs,
        rhs,
    ))
}

/// Special-value relations tying the functions together at marked points.
/// The sign of the ND relation is the one the series actually satisfy:
/// ND(0) = -4i SD(tau/2), with SD taken on its second-direction strip.
pub fn jacobi_special_relations(tau: Complex64, tol: f64) -> Result<Vec<IdentityReport>> {
    require_valid_tau(tau)?;
    let half = c64(0.5, 0.0);
    let zero = c64(0.0, 0.0);

    let cd0 = jacobi_fourier(FunctionId::Cd, zero, tau, Direction::Dir1, tol)?.value;
    let sd_half_shift = jacobi_fourier(FunctionId::Sd, half, tau + 1.0, Direction::Dir1, tol)?.value;
    let sd_half = jacobi_fourier(FunctionId::Sd, half, tau, Direction::Dir1, tol)?.value;
    let nd0 = jacobi_fourier(FunctionId::Nd, zero, tau, Direction::Dir1, tol)?.value;
    // z = tau/2 sits on the Dir1 strip boundary; Dir2 covers it
    let sd_tau_half = jacobi_fourier(FunctionId::Sd, tau / 2.0, tau, Direction::Dir2, tol)?.value;

    Ok(vec![
        IdentityReport::new("CD(0,tau) = SD(1/2,tau)", cd0, sd_half),
        IdentityReport::new(
            "CD(0,tau) = -i SD(1/2,tau+1)",
            cd0,
            -I * sd_half_shift,
        ),
        IdentityReport::new(
            "ND(0,tau) = -4i SD(tau/2,tau)",
            nd0,
            -4.0 * I * sd_tau_half,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;
    const TI: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    fn ev(fn_id: FunctionId, z: Complex64, tau: Complex64, dir: Direction) -> Complex64 {
        jacobi_fourier(fn_id, z, tau, dir, TOL).unwrap().value
    }

    fn close(a: Complex64, b: Complex64, eps: f64) -> bool {
        (a - b).norm() <= eps
    }

    #[test]
    fn dn_half_period_square_lattice() {
        // frozen reference 0.8346268416740731862814297
        let v = ev(FunctionId::Dn, c64(0.5, 0.0), TI, Direction::Dir1);
        assert!(close(v, c64(0.8346268416740732, 0.0), 1e-12), "{v}");
        let w = ev(FunctionId::Dn, c64(0.5, 0.0), TI, Direction::Dir2);
        assert!(close(w, v, 1e-11));
    }

    #[test]
    fn sd_half_period_square_lattice() {
        // frozen reference 0.2086567104185182965703574
        let v = ev(FunctionId::Sd, c64(0.5, 0.0), TI, Direction::Dir1);
        assert!(close(v, c64(0.20865671041851830, 0.0), 1e-12), "{v}");
    }

    #[test]
    fn trivial_zeros() {
        assert!(ev(FunctionId::Sn, c64(0.0, 0.0), TI, Direction::Dir1).norm() < 1e-14);
        assert!(ev(FunctionId::Cd, c64(0.5, 0.0), TI, Direction::Dir1).norm() < 1e-14);
        assert!(ev(FunctionId::Sd, c64(0.0, 0.0), TI, Direction::Dir1).norm() < 1e-14);
    }

    #[test]
    fn directions_agree_on_overlap() {
        for tau in [TI, c64(0.5, 1.0), c64(0.3, 1.1)] {
            for fn_id in [
                FunctionId::Dn,
                FunctionId::Sn,
                FunctionId::Cn,
                FunctionId::Nd,
                FunctionId::Cd,
                FunctionId::Sd,
            ] {
                let z = c64(0.13, 0.0) + 0.21 * tau + cell_center(fn_id);
                let a = ev(fn_id, z, tau, Direction::Dir1);
                let b = ev(fn_id, z, tau, Direction::Dir2);
                assert!(close(a, b, 1e-10), "{} tau={tau}: {a} vs {b}", fn_id.name());
            }
        }
    }

    #[test]
    fn quasi_period_signs() {
        let tau = c64(0.3, 1.1);
        let z = c64(0.13, 0.0) + 0.21 * tau;
        for (fn_id, e1, e2) in [
            (FunctionId::Dn, 1.0, -1.0),
            (FunctionId::Sn, -1.0, 1.0),
            (FunctionId::Cn, -1.0, -1.0),
            (FunctionId::Nd, 1.0, -1.0),
            (FunctionId::Cd, -1.0, 1.0),
            (FunctionId::Sd, -1.0, -1.0),
        ] {
            let zc = z + cell_center(fn_id);
            let base = ev(fn_id, zc, tau, Direction::Dir1);
            let shifted1 = ev(fn_id, zc + 1.0, tau, Direction::Dir1);
            let shifted2 = ev(fn_id, zc + tau, tau, Direction::Dir1);
            assert!(close(shifted1, e1 * base, 1e-10), "{} +1", fn_id.name());
            assert!(close(shifted2, e2 * base, 1e-10), "{} +tau", fn_id.name());
        }
    }

    #[test]
    fn residue_identity_examples() {
        let r = jacobi_residue_identity(FunctionId::Dn, c64(0.5, 0.0), TI, 30).unwrap();
        assert!(r.abs_residual < 1e-10, "{}", r.abs_residual);
        let r = jacobi_residue_identity(FunctionId::Sn, c64(0.5, 0.1), TI, 40).unwrap();
        assert!(r.abs_residual < 1e-8, "{}", r.abs_residual);
    }

    #[test]
    fn special_relations_square_lattice() {
        for tau in [TI, c64(0.5, 1.0)] {
            for r in jacobi_special_relations(tau, TOL).unwrap() {
                assert!(r.abs_residual < 1e-10, "{}: {}", r.name, r.abs_residual);
            }
        }
    }

    #[test]
    fn strip_violation_at_boundary() {
        // beta = 1/2 exactly for Dir1
        let z = TI / 2.0;
        assert!(matches!(
            jacobi_fourier(FunctionId::Sd, z, TI, Direction::Dir1, TOL),
            Err(EllipticError::StripViolation { .. })
        ));
        // same point is fine under Dir2
        assert!(jacobi_fourier(FunctionId::Sd, z, TI, Direction::Dir2, TOL).is_ok());
    }

    #[test]
    fn pole_rejection() {
        let w0 = c64(0.5, 0.5);
        assert!(matches!(
            jacobi_fourier(FunctionId::Sd, w0, TI, Direction::Dir2, TOL),
            Err(EllipticError::PoleProximity { .. })
        ));
        // DN's poles sit on Z + (Z+1/2) tau instead
        assert!(matches!(
            jacobi_fourier(FunctionId::Dn, TI / 2.0 + c64(1e-9, 0.0), TI, Direction::Dir2, TOL),
            Err(EllipticError::PoleProximity { .. })
        ));
    }

    #[test]
    fn wp_functions_rejected() {
        assert!(matches!(
            jacobi_fourier(FunctionId::Wp, c64(0.3, 0.0), TI, Direction::Dir1, TOL),
            Err(EllipticError::UnsupportedRepresentation { .. })
        ));
    }

    #[test]
    fn zero_sets() {
        let tau = c64(0.3, 1.1);
        // SD vanishes on the lattice, CD on 1/2 + lattice, ND on tau/2 + lattice;
        // each zero is probed through the direction whose strip contains it
        let cases = [
            (FunctionId::Sd, c64(0.0, 0.0) + tau, Direction::Dir1),
            (FunctionId::Cd, c64(0.5, 0.0) + 1.0, Direction::Dir1),
            (FunctionId::Nd, tau / 2.0 + 1.0, Direction::Dir2),
        ];
        for (fn_id, zero, dir) in cases {
            let v = ev(fn_id, zero, tau, dir);
            assert!(v.norm() < 1e-10, "{} at {zero}: {v}", fn_id.name());
            // neighbors at radius 0.05 are clearly nonzero
            for d in [c64(0.05, 0.0), c64(0.0, 0.05)] {
                let w = ev(fn_id, zero + d, tau, dir);
                assert!(w.norm() > 1e-4);
            }
        }
    }
}
