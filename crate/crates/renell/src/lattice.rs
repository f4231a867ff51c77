//! Lattice geometry: orientation normalization, frame coordinates, reduction
//! to the elementary domain, and classification against the lattice and its
//! half-shifted companion.
//!
//! A lattice is spanned by half-periods omega1, omega2 with Im(omega2/omega1) > 0;
//! the constructor flips the sign of omega2 to enforce this (the point set is
//! unchanged). The shifted lattice omega0 + L, with omega0 = (omega1+omega2)/2,
//! carries the poles of the renormalized Weierstrass function, while L itself
//! carries its double zeros.

use crate::error::{EllipticError, Result};
use num_complex::Complex64;

/// Minimum |Im(omega2/omega1)| for geometric validity. Series modules impose
/// their own stricter convergence floors on top of this.
pub const MIN_IM_TAU: f64 = 1e-9;

/// Pole-exclusion radius, in units of min(|omega1|, |omega2|). Double precision
/// loses roughly twelve digits at this distance from a double pole.
pub const POLE_EXCLUSION_RADIUS: f64 = 1e-6;

/// Coordinates of a point in the (omega1, omega2) frame: z = alpha*omega1 + beta*omega2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCoords {
    pub alpha: f64,
    pub beta: f64,
}

/// Proximity classification of a point against the zero and pole sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// Within the exclusion radius of a lattice point (a double zero).
    LatticePoint,
    /// Within the exclusion radius of a shifted-lattice point (a double pole).
    StarPoint,
    Regular,
}

#[derive(Debug, Clone, Copy)]
pub struct PointClass {
    pub kind: PointKind,
    /// Closest lattice or shifted-lattice point.
    pub nearest: Complex64,
    pub distance: f64,
}

/// Half-period pair with normalized orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
}

impl Lattice {
    /// Builds a lattice, flipping omega2 -> -omega2 if needed so that
    /// Im(omega2/omega1) > 0. The generated point set is identical either way.
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Lattice> {
        let ratio = omega2 / omega1;
        if !ratio.im.is_finite() || ratio.im.abs() < MIN_IM_TAU {
            return Err(EllipticError::DegenerateLattice {
                im_ratio: ratio.im,
                minimum: MIN_IM_TAU,
            });
        }
        let omega2 = if ratio.im < 0.0 { -omega2 } else { omega2 };
        Ok(Lattice { omega1, omega2 })
    }

    /// Normalized lattice (1, tau).
    pub fn from_tau(tau: Complex64) -> Result<Lattice> {
        Lattice::new(Complex64::new(1.0, 0.0), tau)
    }

    /// The square lattice (1, i).
    pub fn square() -> Lattice {
        Lattice {
            omega1: Complex64::new(1.0, 0.0),
            omega2: Complex64::new(0.0, 1.0),
        }
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    /// Center of the elementary domain, (omega1+omega2)/2; pole of the
    /// renormalized function.
    pub fn omega0(&self) -> Complex64 {
        (self.omega1 + self.omega2) * 0.5
    }

    /// Half-period ratio omega2/omega1, always in the upper half-plane.
    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    pub fn min_scale(&self) -> f64 {
        self.omega1.norm().min(self.omega2.norm())
    }

    /// Absolute pole-exclusion radius for this lattice.
    pub fn exclusion_radius(&self) -> f64 {
        POLE_EXCLUSION_RADIUS * self.min_scale()
    }

    /// Solves z = alpha*omega1 + beta*omega2 as a real 2x2 linear system.
    pub fn frame_coords(&self, z: Complex64) -> FrameCoords {
        let det = self.omega1.re * self.omega2.im - self.omega1.im * self.omega2.re;
        FrameCoords {
            alpha: (z.re * self.omega2.im - z.im * self.omega2.re) / det,
            beta: (self.omega1.re * z.im - self.omega1.im * z.re) / det,
        }
    }

    pub fn from_frame(&self, alpha: f64, beta: f64) -> Complex64 {
        alpha * self.omega1 + beta * self.omega2
    }

    /// Translates z by lattice vectors into the elementary domain
    /// omega1*[-1/2,1/2[ + omega2*[-1/2,1/2[, returning the representative and
    /// the integer shift applied. Coordinates landing exactly on +1/2 wrap to -1/2.
    pub fn reduce_to_domain(&self, z: Complex64) -> (Complex64, (i64, i64)) {
        let fc = self.frame_coords(z);
        let m1 = (fc.alpha + 0.5).floor() as i64;
        let m2 = (fc.beta + 0.5).floor() as i64;
        let zr = z - (m1 as f64) * self.omega1 - (m2 as f64) * self.omega2;
        (zr, (m1, m2))
    }

    /// Closest lattice point to z and the distance to it.
    pub fn nearest_lattice_point(&self, z: Complex64) -> (Complex64, f64) {
        let (zr, (m1, m2)) = self.reduce_to_domain(z);
        let base = (m1 as f64) * self.omega1 + (m2 as f64) * self.omega2;
        let mut best = base;
        let mut best_d = zr.norm();
        // the frame-coordinate rounding is not the Euclidean nearest for skew
        // lattices; checking the 3x3 neighbor block is
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                let w = (a as f64) * self.omega1 + (b as f64) * self.omega2;
                let d = (zr - w).norm();
                if d < best_d {
                    best_d = d;
                    best = base + w;
                }
            }
        }
        (best, best_d)
    }

    /// Closest shifted-lattice (pole) point to z and the distance to it.
    pub fn nearest_star_point(&self, z: Complex64) -> (Complex64, f64) {
        let w0 = self.omega0();
        let (p, d) = self.nearest_lattice_point(z - w0);
        (p + w0, d)
    }

    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        self.nearest_lattice_point(z).1
    }

    pub fn star_distance(&self, z: Complex64) -> f64 {
        self.nearest_star_point(z).1
    }

    /// Classifies z against both point sets; `radius` is in units of
    /// min(|omega1|, |omega2|), like the pole-exclusion default.
    pub fn classify_point(&self, z: Complex64, radius: f64) -> PointClass {
        let r_abs = radius * self.min_scale();
        let (np, ds) = self.nearest_star_point(z);
        let (nl, dl) = self.nearest_lattice_point(z);
        if ds < r_abs && ds <= dl {
            PointClass {
                kind: PointKind::StarPoint,
                nearest: np,
                distance: ds,
            }
        } else if dl < r_abs {
            PointClass {
                kind: PointKind::LatticePoint,
                nearest: nl,
                distance: dl,
            }
        } else if ds < dl {
            PointClass {
                kind: PointKind::Regular,
                nearest: np,
                distance: ds,
            }
        } else {
            PointClass {
                kind: PointKind::Regular,
                nearest: nl,
                distance: dl,
            }
        }
    }

    /// Errors if z is within the exclusion radius of a pole (shifted lattice).
    pub(crate) fn require_off_star(&self, z: Complex64) -> Result<()> {
        let (nearest, distance) = self.nearest_star_point(z);
        let radius = self.exclusion_radius();
        if distance < radius {
            return Err(EllipticError::PoleProximity {
                z,
                nearest,
                distance,
                radius,
            });
        }
        Ok(())
    }

    /// Errors if z is within the exclusion radius of a lattice point.
    pub(crate) fn require_off_lattice(&self, z: Complex64) -> Result<()> {
        let (nearest, distance) = self.nearest_lattice_point(z);
        let radius = self.exclusion_radius();
        if distance < radius {
            return Err(EllipticError::PoleProximity {
                z,
                nearest,
                distance,
                radius,
            });
        }
        Ok(())
    }

    /// Bit-level key for per-lattice memoization.
    pub(crate) fn cache_key(&self) -> (u64, u64, u64, u64) {
        (
            self.omega1.re.to_bits(),
            self.omega1.im.to_bits(),
            self.omega2.re.to_bits(),
            self.omega2.im.to_bits(),
        )
    }
}
