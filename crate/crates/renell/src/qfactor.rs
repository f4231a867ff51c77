//! Infinite q-product factorizations in the full nome q = e^{2 i pi tau}:
//! Dedekind's eta, product forms of the renormalized functions WPA, SD, CD,
//! ND, the sigma_1 odd q-series, the eta-quotient identity, the modular
//! discriminant, and the closed-product half-period values of wpt.
//!
//! wpa denotes the quadratically renormalized function
//! wpa(z,tau) = -wpt(z)/(16 pi^2), which equals SD(z,tau)^2.

use crate::error::{EllipticError, Result};
use crate::eval::{Evaluation, FunctionId, IdentityReport, Representation};
use crate::lattice::Lattice;
use crate::series::{e_half, ProductAccumulator, PRODUCT_FACTOR_CAP};
use crate::weierstrass;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Minimum lattice height for the product forms; below it the factors no
/// longer stay safely away from zero on the strip.
pub const PRODUCT_MIN_IM_TAU: f64 = 0.05;

/// Minimum lattice height for eta evaluation.
pub const ETA_MIN_IM_TAU: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminantRoute {
    EtaPower,
    WpTripleProduct,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn require_im(tau: Complex64, minimum: f64) -> Result<()> {
    if !(tau.im >= minimum) {
        return Err(EllipticError::DegenerateLattice {
            im_ratio: tau.im,
            minimum,
        });
    }
    Ok(())
}

/// Dedekind eta in the standard normalization
/// eta(tau) = e^{i pi tau/12} prod_{n>=1} (1 - e^{2 i pi n tau}).
pub fn dedekind_eta(tau: Complex64, tol: f64) -> Result<Evaluation> {
    require_im(tau, ETA_MIN_IM_TAU)?;
    let mut acc = ProductAccumulator::new(tol);
    for n in 1..=PRODUCT_FACTOR_CAP {
        if acc.multiply(1.0 - e_half(2.0 * n as f64 * tau)) {
            break;
        }
    }
    let mut ev = acc.finish(Representation::QProduct)?;
    ev.value *= e_half(tau / 12.0);
    ev.tail_estimate *= e_half(tau / 12.0).norm();
    Ok(ev)
}

/// The quotient eta(2 tau)^8 / eta(tau)^4, which reproduces wpa(1/2, tau).
pub fn eta_quotient(tau: Complex64, tol: f64) -> Result<Evaluation> {
    let e2 = dedekind_eta(2.0 * tau, tol)?;
    let e1 = dedekind_eta(tau, tol)?;
    let v2 = e2.value;
    let v1 = e1.value;
    let value = v2.powu(8) / v1.powu(4);
    // first-order error propagation through the powers
    let rel = 8.0 * e2.tail_estimate / v2.norm().max(1e-300)
        + 4.0 * e1.tail_estimate / v1.norm().max(1e-300);
    Ok(Evaluation::new(
        value,
        e1.terms_used + e2.terms_used,
        rel * value.norm(),
        Representation::QProduct,
    ))
}

/// Divisor sum sigma_1(n).
pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

/// Partial sum of wpa(1/2,tau) = sum_{n>=0} sigma_1(2n+1) w^{2n+1} in the
/// half nome w = e^{i pi tau}; the series runs through n = n_terms.
pub fn sigma1_qseries(tau: Complex64, n_terms: usize) -> Evaluation {
    let w = e_half(tau);
    let mut sum = c64(0.0, 0.0);
    for n in 0..=n_terms {
        let k = (2 * n + 1) as u64;
        sum += (sigma1(k) as f64) * w.powu(k as u32);
    }
    let next = (2 * n_terms + 3) as u64;
    let tail = (sigma1(next) as f64) * w.norm().powi(next as i32) * 10.0;
    Evaluation::new(sum, n_terms + 1, tail, Representation::QProduct)
}

/// q-product factor sets for WPA, SD, CD, ND at fixed n >= 0,
/// in the full nome q with u = e^{2 i pi z}. q-powers are taken through
/// e_half to keep fractional exponents exact: q^c = e_half(2 c tau).
struct ProductTerms {
    z: Complex64,
    tau: Complex64,
}

impl ProductTerms {
    fn qp(&self, c: f64) -> Complex64 {
        e_half(2.0 * c * self.tau)
    }
    fn u(&self) -> Complex64 {
        e_half(2.0 * self.z)
    }
    fn u_inv(&self) -> Complex64 {
        e_half(-2.0 * self.z)
    }

    /// z-independent leading factor of the product.
    fn prefactor(&self, fn_id: FunctionId) -> Complex64 {
        let pz = PI * self.z;
        match fn_id {
            FunctionId::Wpa => pz.sin().powu(2) * self.qp(0.5),
            FunctionId::Sd => pz.sin() * self.qp(0.25),
            FunctionId::Cd => pz.cos() * self.qp(0.25),
            FunctionId::Nd => c64(1.0, 0.0),
            _ => unreachable!("filtered in q_product"),
        }
    }

    /// n-th combined factor.
    fn factor(&self, fn_id: FunctionId, n: usize) -> Complex64 {
        let nf = n as f64;
        let u = self.u();
        let ui = self.u_inv();
        let q_n1 = self.qp(nf + 1.0);
        let q_nh = self.qp(nf + 0.5);
        // the two z-dependent quotients shared by the factorizations
        let minus_ratio =
            (1.0 - u * q_n1) * (1.0 - ui * q_n1) / ((1.0 + u * q_nh) * (1.0 + ui * q_nh));
        let plus_ratio =
            (1.0 + u * q_n1) * (1.0 + ui * q_n1) / ((1.0 + u * q_nh) * (1.0 + ui * q_nh));
        match fn_id {
            FunctionId::Wpa => {
                let c = self.qp(2.0 * nf + 2.0);
                (1.0 - c).powu(4) * (1.0 - q_nh).powu(4) * minus_ratio * minus_ratio
            }
            FunctionId::Sd => {
                let c = self.qp(2.0 * nf + 2.0);
                (1.0 - c).powu(2) * (1.0 - q_nh).powu(2) * minus_ratio
            }
            FunctionId::Cd => {
                let base = (1.0 - q_n1) / (1.0 - q_nh);
                base * base * plus_ratio
            }
            FunctionId::Nd => {
                let c = self.qp(2.0 * nf + 1.0);
                let odd = (1.0 - c) * (1.0 - q_n1);
                odd * odd * (1.0 - u * q_nh) * (1.0 - ui * q_nh)
                    / ((1.0 + u * q_nh) * (1.0 + ui * q_nh))
            }
            _ => unreachable!("filtered in q_product"),
        }
    }
}

/// Evaluates the q-product factorization of WPA, SD, CD or ND at z.
/// The point must already lie in the strip |beta| < 1/2 (no reduction here;
/// the series evaluators own the quasi-period bookkeeping).
pub fn q_product(
    fn_id: FunctionId,
    z: Complex64,
    tau: Complex64,
    truncation: usize,
) -> Result<Evaluation> {
    match fn_id {
        FunctionId::Wpa | FunctionId::Sd | FunctionId::Cd | FunctionId::Nd => {}
        other => {
            return Err(EllipticError::UnsupportedRepresentation {
                representation: "q-product",
                function: other.name(),
            })
        }
    }
    require_im(tau, PRODUCT_MIN_IM_TAU)?;
    let lat = Lattice::from_tau(tau)?;
    let fc = lat.frame_coords(z);
    // the closed strip: on |beta| = 1/2 the n = 0 factor argument has unit
    // magnitude but the tail factors still converge (zero factors included,
    // where the product vanishes exactly)
    if fc.beta.abs() > 0.5 + 1e-9 {
        return Err(EllipticError::StripViolation {
            coord: "beta",
            value: fc.beta,
            representation: "q-product",
        });
    }
    // all four factorizations have their poles on the half-shifted lattice
    lat.require_off_star(z)?;

    let terms = ProductTerms { z, tau };
    let mut product = terms.prefactor(fn_id);
    let mut used = 0usize;
    let mut dev = f64::INFINITY;
    let mut prev_dev = f64::INFINITY;
    let cap = truncation.min(PRODUCT_FACTOR_CAP).max(1);
    for n in 0..cap {
        let f = terms.factor(fn_id, n);
        product *= f;
        used = n + 1;
        prev_dev = dev;
        dev = (f - 1.0).norm();
        if dev < 1e-16 && prev_dev < 1e-16 {
            break;
        }
    }
    if dev > 1e-12 && prev_dev > 1e-12 && used == cap && cap == PRODUCT_FACTOR_CAP {
        return Err(EllipticError::NonConvergence {
            terms: used,
            tail: dev,
            tol: 1e-12,
        });
    }
    let tail = product.norm() * dev * 10.0;
    Ok(Evaluation::new(product, used, tail, Representation::QProduct))
}

/// wpa(z,tau) = -wpt(z)/(16 pi^2) through any wpt representation, or the
/// direct factorization when rep = QProduct.
pub fn wpa(
    z: Complex64,
    tau: Complex64,
    rep: Option<Representation>,
    tol: f64,
) -> Result<Evaluation> {
    if rep == Some(Representation::QProduct) {
        return q_product(FunctionId::Wpa, z, tau, PRODUCT_FACTOR_CAP);
    }
    require_im(tau, 1e-9)?;
    let lat = Lattice::from_tau(tau)?;
    let mut ev = weierstrass::wp_tilde(z, &lat, rep, tol)?;
    let scale = -1.0 / (16.0 * PI * PI);
    ev.value *= scale;
    ev.tail_estimate *= scale.abs();
    Ok(ev)
}

/// Cross-checks the four routes to wpa(1/2, tau):
/// eta(2 tau)^8/eta(tau)^4, the sigma_1 odd series, -wpt(1/2)/(16 pi^2) from
/// the lattice sum, and the WPA q-product. lhs/rhs hold the first two routes;
/// abs_residual is the maximum pairwise spread of all four.
pub fn verify_eta_quotient(tau: Complex64, n_terms: usize) -> Result<IdentityReport> {
    let quot = eta_quotient(tau, 1e-12)?.value;
    let series = sigma1_qseries(tau, n_terms).value;
    let lattice = wpa(c64(0.5, 0.0), tau, Some(Representation::LatticeSum), 1e-11)?.value;
    let product = wpa(c64(0.5, 0.0), tau, Some(Representation::QProduct), 1e-12)?.value;

    let routes = [quot, series, lattice, product];
    let mut spread: f64 = 0.0;
    for i in 0..routes.len() {
        for j in (i + 1)..routes.len() {
            spread = spread.max((routes[i] - routes[j]).norm());
        }
    }
    let mut report = IdentityReport::new(
        "eta(2t)^8/eta(t)^4 = sum sigma1(2n+1) w^(2n+1) = wpa(1/2)",
        quot,
        series,
    );
    report.abs_residual = spread;
    report.rel_residual = spread / routes.iter().map(|r| r.norm()).fold(1.0, f64::max);
    Ok(report)
}

/// Modular discriminant by either route: the 24th-power q-product
/// q prod (1-q^n)^24, or the square of the triple of wpt half-period values
/// (computed from lattice sums, keeping the routes independent):
/// (1/(256 pi^12)) (wpt_t(1/2) wpt_t(t/2) wpt_{t+1}((t+1)/2))^2.
pub fn modular_discriminant(
    tau: Complex64,
    route: DiscriminantRoute,
    tol: f64,
) -> Result<Evaluation> {
    match route {
        DiscriminantRoute::EtaPower => {
            require_im(tau, ETA_MIN_IM_TAU)?;
            let q = e_half(2.0 * tau);
            let mut acc = ProductAccumulator::new(tol);
            for n in 1..=PRODUCT_FACTOR_CAP {
                if acc.multiply((1.0 - e_half(2.0 * n as f64 * tau)).powu(24)) {
                    break;
                }
            }
            let mut ev = acc.finish(Representation::QProduct)?;
            ev.value *= q;
            ev.tail_estimate *= q.norm();
            Ok(ev)
        }
        DiscriminantRoute::WpTripleProduct => {
            let lat = Lattice::from_tau(tau)?;
            let lat_shift = Lattice::from_tau(tau + 1.0)?;
            let v1 = weierstrass::wp_tilde_lattice_sum(c64(0.5, 0.0), &lat, tol)?;
            let v2 = weierstrass::wp_tilde_lattice_sum(tau / 2.0, &lat, tol)?;
            let v3 = weierstrass::wp_tilde_lattice_sum((tau + 1.0) / 2.0, &lat_shift, tol)?;
            let triple = v1.value * v2.value * v3.value;
            let value = triple * triple / (256.0 * PI.powi(12));
            let rel = 2.0
                * (v1.tail_estimate / v1.value.norm().max(1e-300)
                    + v2.tail_estimate / v2.value.norm().max(1e-300)
                    + v3.tail_estimate / v3.value.norm().max(1e-300));
            Ok(Evaluation::new(
                value,
                v1.terms_used + v2.terms_used + v3.terms_used,
                rel * value.norm(),
                Representation::LatticeSum,
            ))
        }
    }
}

/// Leading q-expansion coefficients of the discriminant: the coefficients of
/// q^1..q^count in q prod_{k>=1} (1-q^k)^24, by truncated integer polynomial
/// expansion.
pub fn delta_q_coefficients(count: usize) -> Vec<i64> {
    let deg = count.max(1);
    // coeffs[j] holds the q^j coefficient of prod (1-q^k)^24, truncated
    let mut coeffs = vec![0i64; deg];
    coeffs[0] = 1;
    for k in 1..deg {
        for _ in 0..24 {
            for j in (k..deg).rev() {
                let (head, tail) = coeffs.split_at_mut(j);
                tail[0] -= head[j - k];
            }
        }
    }
    coeffs
}

/// The three closed-product special values
/// (wpt_tau(1/2), wpt_tau(tau/2), wpt_{tau+1}((tau+1)/2)).
pub fn wp_special_values(tau: Complex64, tol: f64) -> Result<(Complex64, Complex64, Complex64)> {
    require_im(tau, PRODUCT_MIN_IM_TAU)?;
    let qp = |c: f64| e_half(2.0 * c * tau);

    // wpt(1/2) = -16 pi^2 q^{1/2} prod (1-q^{2k+2})^4/(1-q^{2k+1})^4
    let mut acc = ProductAccumulator::new(tol);
    for k in 0..PRODUCT_FACTOR_CAP {
        let kf = k as f64;
        let f = (1.0 - qp(2.0 * kf + 2.0)).powu(4) / (1.0 - qp(2.0 * kf + 1.0)).powu(4);
        if acc.multiply(f) {
            break;
        }
    }
    let v_half = -16.0 * PI * PI * e_half(tau) * acc.finish(Representation::QProduct)?.value;

    // wpt(tau/2) = pi^2 prod (1-q^{k+1/2})^8 (1-q^{k+1})^4
    let mut acc = ProductAccumulator::new(tol);
    for k in 0..PRODUCT_FACTOR_CAP {
        let kf = k as f64;
        let f = (1.0 - qp(kf + 0.5)).powu(8) * (1.0 - qp(kf + 1.0)).powu(4);
        if acc.multiply(f) {
            break;
        }
    }
    let v_tauhalf = PI * PI * acc.finish(Representation::QProduct)?.value;

    // wpt_{tau+1}((tau+1)/2) = pi^2 prod (1-q^{2k+1})^12 (1-q^{2k+2})^4 / (1-q^{k+1/2})^8
    let mut acc = ProductAccumulator::new(tol);
    for k in 0..PRODUCT_FACTOR_CAP {
        let kf = k as f64;
        let f = (1.0 - qp(2.0 * kf + 1.0)).powu(12) * (1.0 - qp(2.0 * kf + 2.0)).powu(4)
            / (1.0 - qp(kf + 0.5)).powu(8);
        if acc.multiply(f) {
            break;
        }
    }
    let v_mixed = PI * PI * acc.finish(Representation::QProduct)?.value;

    Ok((v_half, v_tauhalf, v_mixed))
}

/// Euler's paired product identity
/// prod_{n>=1} (1+q^n) * prod_{n>=0} (1-q^{2n+1}) = 1.
/// The classical display carries an extra factor 2 from including the n=0
/// factor (1+q^0) in the first product; the indexing here starts at n=1.
pub fn euler_product_identity(q: Complex64, factors: usize) -> IdentityReport {
    let mut lhs = c64(1.0, 0.0);
    for n in 1..=factors {
        lhs *= 1.0 + q.powu(n as u32);
    }
    for n in 0..factors {
        lhs *= 1.0 - q.powu((2 * n + 1) as u32);
    }
    IdentityReport::new("prod(1+q^n) prod(1-q^(2n+1)) = 1", lhs, c64(1.0, 0.0))
}
