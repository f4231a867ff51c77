//! Numerically stable building blocks shared by every series in the crate:
//! the half-nome exponential, overflow-safe trigonometric kernels, and the
//! truncation accumulators with their tail estimates.
//!
//! All q-series here are built from `e_half(w) = exp(i*pi*w)`. Arguments are
//! arranged so that the exponent always has nonnegative imaginary part, which
//! keeps every factor bounded by 1 in magnitude and avoids overflow entirely.
//! The raw trigonometric forms (1/sin^2, cos/sin^3, log sin) switch to
//! exponential asymptotics once |Im w| is large enough that e^{|Im w|} would
//! dominate the working precision.

use crate::error::{EllipticError, Result};
use crate::eval::{Evaluation, Representation};
use num_complex::Complex64;

/// Series terms stop once the last two magnitudes fall below tol * max(1, |sum|).
pub const SERIES_TERM_CAP: usize = 5000;
/// Products stop once |factor - 1| < tol/10.
pub const PRODUCT_FACTOR_CAP: usize = 2000;

/// Imaginary-part threshold beyond which trig kernels use exponential asymptotics.
const TRIG_ASYMPTOTIC_IM: f64 = 18.0;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// exp(i*pi*w), the half-nome exponential E(w). |E(w)| <= 1 iff Im w >= 0.
#[inline]
pub fn e_half(w: Complex64) -> Complex64 {
    (I * std::f64::consts::PI * w).exp()
}

/// 1/sin^2(w), stable for arbitrarily large |Im w|.
///
/// For |Im w| > threshold, with u = exp(2i*w*sign(Im w)) (so |u| < 1):
/// 1/sin^2(w) = -4u/(1-u)^2.
pub fn inv_sin_sq(w: Complex64) -> Complex64 {
    if w.im.abs() <= TRIG_ASYMPTOTIC_IM {
        let s = w.sin();
        1.0 / (s * s)
    } else {
        let sign = if w.im > 0.0 { 1.0 } else { -1.0 };
        let u = (2.0 * I * sign * w).exp();
        let d = 1.0 - u;
        -4.0 * u / (d * d)
    }
}

/// cos(w)/sin^3(w), stable for arbitrarily large |Im w|.
///
/// For Im w > threshold, with u = exp(2i*w): cos/sin^3 = 4i*u*(u+1)/(1-u)^3.
/// The function is odd, which handles Im w < -threshold.
pub fn cos_over_sin_cubed(w: Complex64) -> Complex64 {
    if w.im.abs() <= TRIG_ASYMPTOTIC_IM {
        let s = w.sin();
        w.cos() / (s * s * s)
    } else if w.im > 0.0 {
        let u = (2.0 * I * w).exp();
        let d = 1.0 - u;
        4.0 * I * u * (u + 1.0) / (d * d * d)
    } else {
        -cos_over_sin_cubed(-w)
    }
}

/// log(sin(w)) modulo 2*pi*i, overflow-safe.
///
/// The ambiguity in the branch is harmless for integrands of the form
/// exp(sum of logs), which is the only consumer.
pub fn ln_sin(w: Complex64) -> Complex64 {
    if w.im.abs() <= TRIG_ASYMPTOTIC_IM {
        w.sin().ln()
    } else if w.im > 0.0 {
        // sin w = e^{-iw}(u - 1)/(2i), u = e^{2iw}, |u| << 1
        let u = (2.0 * I * w).exp();
        -I * w + (u - 1.0).ln() - (2.0 * I).ln()
    } else {
        // sin w = e^{iw}(1 - u)/(2i), u = e^{-2iw}, |u| << 1
        let u = (-2.0 * I * w).exp();
        I * w + (1.0 - u).ln() - (2.0 * I).ln()
    }
}

/// Running sum with the two-term stopping rule.
///
/// A single small term is not proof of convergence: alternating and lacunary
/// series produce structurally tiny terms mid-stream. The rule demands the
/// last TWO term magnitudes below tol * max(1, |sum|).
pub struct SeriesSum {
    sum: Complex64,
    tol: f64,
    last: f64,
    prev: f64,
    // last two nonzero magnitudes, for the geometric tail bound
    nz_last: f64,
    nz_prev: f64,
    terms: usize,
    converged: bool,
}

impl SeriesSum {
    pub fn new(tol: f64) -> Self {
        SeriesSum {
            sum: Complex64::new(0.0, 0.0),
            tol,
            last: f64::INFINITY,
            prev: f64::INFINITY,
            nz_last: 0.0,
            nz_prev: 0.0,
            terms: 0,
            converged: false,
        }
    }

    pub fn with_start(tol: f64, start: Complex64) -> Self {
        let mut s = SeriesSum::new(tol);
        s.sum = start;
        s
    }

    /// Adds one term; returns true once the stopping rule is met.
    pub fn add(&mut self, term: Complex64) -> bool {
        self.sum += term;
        self.terms += 1;
        let mag = term.norm();
        self.prev = self.last;
        self.last = mag;
        if mag > 0.0 {
            self.nz_prev = self.nz_last;
            self.nz_last = mag;
        }
        let threshold = self.tol * self.sum.norm().max(1.0);
        if self.terms >= 2 && self.last < threshold && self.prev < threshold {
            self.converged = true;
        }
        self.converged
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Geometric tail bound from the last two nonzero magnitudes, safety factor 10.
    pub fn tail_estimate(&self) -> f64 {
        if self.nz_prev == 0.0 || self.nz_last == 0.0 {
            return 0.0;
        }
        let r = (self.nz_last / self.nz_prev).min(0.95);
        10.0 * self.nz_last * r / (1.0 - r)
    }

    pub fn finish(self, representation: Representation) -> Result<Evaluation> {
        if !self.converged {
            return Err(EllipticError::NonConvergence {
                terms: self.terms,
                tail: self.tail_estimate(),
                tol: self.tol,
            });
        }
        Ok(Evaluation::new(
            self.sum,
            self.terms,
            self.tail_estimate(),
            representation,
        ))
    }

    /// Like `finish` but folds an extra absolute error (e.g. from calibration
    /// constants or accelerated lattice constants) into the tail estimate.
    pub fn finish_with_extra_tail(self, representation: Representation, extra: f64) -> Result<Evaluation> {
        let mut ev = self.finish(representation)?;
        ev.tail_estimate += extra.max(0.0);
        Ok(ev)
    }
}

/// Running product with the |factor - 1| stopping rule.
pub struct ProductAccumulator {
    product: Complex64,
    tol: f64,
    last_dev: f64,
    prev_dev: f64,
    factors: usize,
    converged: bool,
}

impl ProductAccumulator {
    pub fn new(tol: f64) -> Self {
        ProductAccumulator {
            product: Complex64::new(1.0, 0.0),
            tol,
            last_dev: f64::INFINITY,
            prev_dev: f64::INFINITY,
            factors: 0,
            converged: false,
        }
    }

    /// Multiplies one factor; returns true once |factor - 1| < tol/10 twice in a row.
    pub fn multiply(&mut self, factor: Complex64) -> bool {
        self.product *= factor;
        self.factors += 1;
        self.prev_dev = self.last_dev;
        self.last_dev = (factor - 1.0).norm();
        let threshold = self.tol / 10.0;
        if self.factors >= 2 && self.last_dev < threshold && self.prev_dev < threshold {
            self.converged = true;
        }
        self.converged
    }

    pub fn value(&self) -> Complex64 {
        self.product
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    /// Remaining factors perturb the product by roughly the geometric tail of
    /// the factor deviations; bound it with the same safety factor 10.
    pub fn tail_estimate(&self) -> f64 {
        if !self.last_dev.is_finite() || !self.prev_dev.is_finite() || self.prev_dev == 0.0 {
            return 0.0;
        }
        let r = (self.last_dev / self.prev_dev).min(0.95);
        10.0 * self.last_dev * r / (1.0 - r) * self.product.norm().max(1.0)
    }

    pub fn finish(self, representation: Representation) -> Result<Evaluation> {
        if !self.converged {
            return Err(EllipticError::NonConvergence {
                terms: self.factors,
                tail: self.tail_estimate(),
                tol: self.tol,
            });
        }
        Ok(Evaluation::new(
            self.product,
            self.factors,
            self.tail_estimate(),
            representation,
        ))
    }
}
