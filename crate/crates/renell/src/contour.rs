//! Contour machinery for H(s) = s/(sin(omega1 s) sin(omega2 s)): the
//! rectangles C_n threading between the poles of H, numerical quadrature of
//! the closed integral of H(s) e^{2isz}, the closed-form pole residues, and
//! the two-direction residue identity they imply.
//!
//! The integrand is evaluated as exp(ln s - ln sin(omega1 s) - ln sin(omega2 s)
//! + 2isz); the logarithmic form keeps every intermediate bounded even where
//! sin alone would overflow.

use crate::error::{EllipticError, Result};
use crate::eval::{Evaluation, IdentityReport, Representation};
use crate::lattice::Lattice;
use crate::series::{e_half, ln_sin};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Any quadrature node closer than this to a pole of H aborts the quadrature.
pub const POLE_NODE_CLEARANCE: f64 = 1e-3;

/// Hard cap on nodes per contour segment during refinement.
const MAX_NODES_PER_SEGMENT: usize = 1 << 14;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
    Simpson,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Base nodes per panel; composite refinement doubles panel counts.
    pub points_per_segment: usize,
    pub rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            points_per_segment: 16,
            rule: QuadratureRule::GaussLegendre,
        }
    }
}

impl QuadratureSpec {
    fn base_points(&self) -> usize {
        self.points_per_segment.max(8)
    }
}

/// The rectangle C_n with vertices (n+1/2) pi (±omega1^{-1} ± omega2^{-1}),
/// listed counterclockwise, threading exactly between the poles of H.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    pub n: usize,
    pub vertices: [Complex64; 4],
    /// Minimum distance from the contour to any pole of H.
    pub pole_clearance: f64,
}

/// Closed-form residue of H(s) e^{2isz} at one pole.
#[derive(Debug, Clone, Copy)]
pub struct PoleResidue {
    pub location: Complex64,
    pub residue: Complex64,
    pub family: PoleFamily,
    pub index: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleFamily {
    Origin,
    Omega1Axis,
    Omega2Axis,
}

/// Distance from s to the nearest pole of H (0 and the two axis families).
fn pole_distance(s: Complex64, lat: &Lattice) -> f64 {
    let w1 = lat.omega1();
    let w2 = lat.omega2();
    let mut best = s.norm();
    let t1 = s * w1 / PI;
    let k1 = t1.re.round() as i64;
    for k in (k1 - 1)..=(k1 + 1) {
        best = best.min((s - (k as f64) * PI / w1).norm());
    }
    let t2 = s * w2 / PI;
    let k2 = t2.re.round() as i64;
    for k in (k2 - 1)..=(k2 + 1) {
        best = best.min((s - (k as f64) * PI / w2).norm());
    }
    best
}

/// Builds C_n and reports its clearance from the pole set, computed by
/// sampling each side densely.
pub fn build_contour(n: usize, lat: &Lattice) -> Result<ContourSpec> {
    let r = (n as f64 + 0.5) * PI;
    let a = 1.0 / lat.omega1();
    let b = 1.0 / lat.omega2();
    // this order is counterclockwise for every standard-orientation frame:
    // the map (x,y) -> x/omega1 + y/omega2 reverses orientation when
    // Im(omega2/omega1) > 0
    let vertices = [r * (a - b), r * (-a - b), r * (-a + b), r * (a + b)];

    let mut clearance = f64::INFINITY;
    for i in 0..4 {
        let from = vertices[i];
        let to = vertices[(i + 1) % 4];
        let samples = 64 * (n + 1);
        for j in 0..=samples {
            let t = j as f64 / samples as f64;
            let s = from + t * (to - from);
            clearance = clearance.min(pole_distance(s, lat));
        }
    }
    Ok(ContourSpec {
        n,
        vertices,
        pole_clearance: clearance,
    })
}

/// H(s) e^{2isz} in log-domain form.
fn integrand(s: Complex64, z: Complex64, lat: &Lattice) -> Complex64 {
    let w1 = lat.omega1();
    let w2 = lat.omega2();
    (s.ln() - ln_sin(w1 * s) - ln_sin(w2 * s) + 2.0 * I * s * z).exp()
}

static GL_CACHE: Lazy<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Gauss-Legendre nodes and weights on (-1,1), Newton-refined and cached.
fn gl_rule(order: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    if let Some(r) = GL_CACHE.lock().unwrap().get(&order) {
        return Arc::clone(r);
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre P_n and P_n' by upward recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // recompute derivative at the converged node for the weight
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    let rule = Arc::new((nodes, weights));
    GL_CACHE.lock().unwrap().insert(order, Arc::clone(&rule));
    rule
}

/// One segment at a given panel count; checks node clearance against the
/// pole set before evaluating.
fn segment_quadrature(
    from: Complex64,
    to: Complex64,
    panels: usize,
    quad: &QuadratureSpec,
    lat: &Lattice,
    f: &dyn Fn(Complex64) -> Complex64,
    check_poles: bool,
) -> Result<Complex64> {
    let dir = to - from;
    let mut total = c64(0.0, 0.0);
    match quad.rule {
        QuadratureRule::GaussLegendre => {
            let rule = gl_rule(quad.base_points());
            let (nodes, weights) = rule.as_ref();
            for p in 0..panels {
                let a = p as f64 / panels as f64;
                let b = (p + 1) as f64 / panels as f64;
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                let mut acc = c64(0.0, 0.0);
                for (x, w) in nodes.iter().zip(weights.iter()) {
                    let t = mid + half * x;
                    let s = from + t * dir;
                    if check_poles {
                        let d = pole_distance(s, lat);
                        if d < POLE_NODE_CLEARANCE {
                            return Err(EllipticError::QuadratureNearPole {
                                node: s,
                                pole: s, // nearest pole within d of s
                                distance: d,
                            });
                        }
                    }
                    acc += *w * f(s);
                }
                total += acc * half;
            }
        }
        QuadratureRule::Simpson => {
            let m = quad.base_points().max(2) / 2 * 2 * panels;
            let h = 1.0 / m as f64;
            let mut acc = c64(0.0, 0.0);
            for j in 0..=m {
                let t = j as f64 * h;
                let s = from + t * dir;
                if check_poles {
                    let d = pole_distance(s, lat);
                    if d < POLE_NODE_CLEARANCE {
                        return Err(EllipticError::QuadratureNearPole {
                            node: s,
                            pole: s,
                            distance: d,
                        });
                    }
                }
                let w = if j == 0 || j == m {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * f(s);
            }
            total = acc * (h / 3.0);
        }
    }
    Ok(total * dir)
}

/// Closed polyline quadrature with panel-doubling refinement until two levels
/// agree to 1e-10 (relative to max(1,|I|)) or the node cap is reached.
/// Returns (value, nodes_used, refinement_gap).
fn closed_polyline_quadrature(
    vertices: &[Complex64],
    quad: &QuadratureSpec,
    lat: &Lattice,
    f: &dyn Fn(Complex64) -> Complex64,
    check_poles: bool,
) -> Result<(Complex64, usize, f64)> {
    let base = quad.base_points();
    let mut total = c64(0.0, 0.0);
    let mut nodes_used = 0usize;
    let mut gap_sum = 0.0;
    for i in 0..vertices.len() {
        let from = vertices[i];
        let to = vertices[(i + 1) % vertices.len()];
        let mut panels = 1usize;
        let mut prev = segment_quadrature(from, to, panels, quad, lat, f, check_poles)?;
        let mut gap;
        loop {
            panels *= 2;
            let next = segment_quadrature(from, to, panels, quad, lat, f, check_poles)?;
            gap = (next - prev).norm();
            prev = next;
            if gap < 1e-10 * prev.norm().max(1.0) || panels * base >= MAX_NODES_PER_SEGMENT {
                break;
            }
        }
        nodes_used += panels * base;
        gap_sum += gap;
        total += prev;
    }
    Ok((total, nodes_used, gap_sum))
}

/// Closed contour integral of H(s) e^{2isz} over C_n. The expansion point z
/// must lie strictly inside the fundamental cell: max(|alpha|,|beta|) <= 0.49.
pub fn integrate_h(
    n: usize,
    z: Complex64,
    lat: &Lattice,
    quad: &QuadratureSpec,
) -> Result<Evaluation> {
    let fc = lat.frame_coords(z);
    if fc.alpha.abs() > 0.49 || fc.beta.abs() > 0.49 {
        let (coord, value) = if fc.alpha.abs() >= fc.beta.abs() {
            ("alpha", fc.alpha)
        } else {
            ("beta", fc.beta)
        };
        return Err(EllipticError::StripViolation {
            coord,
            value,
            representation: "contour-quadrature",
        });
    }
    let spec = build_contour(n, lat)?;
    let f = |s: Complex64| integrand(s, z, lat);
    let (value, nodes, gap) =
        closed_polyline_quadrature(&spec.vertices, quad, lat, &f, true)?;
    Ok(Evaluation::new(value, nodes, gap, Representation::Quadrature))
}

/// Closed-form residues of H(s) e^{2isz}: 1/(omega1 omega2) at the origin and
/// the two axis families at ±k pi / omega for 1 <= k <= n_max, in stable
/// half-nome exponential form.
pub fn pole_residues(lat: &Lattice, z: Complex64, n_max: usize) -> Vec<PoleResidue> {
    let w1 = lat.omega1();
    let w2 = lat.omega2();
    let tau = lat.tau();
    let zeta = z / w1;
    let p = w1 / w2;
    let zeta2 = z / w2;

    let mut out = Vec::with_capacity(4 * n_max + 1);
    out.push(PoleResidue {
        location: c64(0.0, 0.0),
        residue: 1.0 / (w1 * w2),
        family: PoleFamily::Origin,
        index: 0,
    });
    for k in 1..=(n_max as i64) {
        for sign in [1i64, -1] {
            let kk = sign * k;
            let kf = kk as f64;
            let alt = if k % 2 == 1 { -1.0 } else { 1.0 };

            // omega1 family: residue at k pi/omega1 is
            // (-1)^k k pi / (omega1^2 sin(k pi tau)) e^{2 i k pi z/omega1}
            let inv_sin1 = -2.0 * I * (sign as f64) * e_half((k as f64) * tau)
                / (1.0 - e_half(2.0 * (k as f64) * tau));
            let res1 = alt * kf * PI / (w1 * w1) * e_half(2.0 * kf * zeta) * inv_sin1;
            out.push(PoleResidue {
                location: kf * PI / w1,
                residue: res1,
                family: PoleFamily::Omega1Axis,
                index: kk,
            });

            // omega2 family mirrors with p = omega1/omega2 (Im p < 0)
            let inv_sin2 = 2.0 * I * (sign as f64) * e_half(-(k as f64) * p)
                / (1.0 - e_half(-2.0 * (k as f64) * p));
            let res2 = alt * kf * PI / (w2 * w2) * e_half(2.0 * kf * zeta2) * inv_sin2;
            out.push(PoleResidue {
                location: kf * PI / w2,
                residue: res2,
                family: PoleFamily::Omega2Axis,
                index: kk,
            });
        }
    }
    out
}

/// 2 pi i times the sum of residues enclosed by C_n.
pub fn enclosed_residue_sum(lat: &Lattice, z: Complex64, n: usize) -> Complex64 {
    let sum: Complex64 = pole_residues(lat, z, n)
        .iter()
        .map(|r| r.residue)
        .sum();
    2.0 * PI * I * sum
}

/// The master identity from the residue calculus: the two directional
/// residue-family sums represent the same constant,
/// lhs = (omega2/omega1) sum (-1)^n n cos(2 n pi z/omega1)/sin(n pi omega2/omega1),
/// rhs = -1/(2 pi) - (omega1/omega2) sum (-1)^n n cos(2 n pi z/omega2)/sin(n pi omega1/omega2).
pub fn residue_identity_check(z: Complex64, lat: &Lattice, n_terms: usize) -> Result<IdentityReport> {
    let fc = lat.frame_coords(z);
    if fc.alpha.abs() >= 0.5 || fc.beta.abs() >= 0.5 {
        let (coord, value) = if fc.alpha.abs() >= fc.beta.abs() {
            ("alpha", fc.alpha)
        } else {
            ("beta", fc.beta)
        };
        return Err(EllipticError::StripViolation {
            coord,
            value,
            representation: "residue-series",
        });
    }
    let w1 = lat.omega1();
    let w2 = lat.omega2();
    let tau = lat.tau();
    let zeta = z / w1;
    let p = w1 / w2;
    let zeta_p = z / w2;

    let mut lhs = c64(0.0, 0.0);
    let mut rhs = -1.0 / (2.0 * PI) * c64(1.0, 0.0);
    for n in 1..=n_terms {
        let nf = n as f64;
        let alt = if n % 2 == 1 { -1.0 } else { 1.0 };
        // cos(2 n pi z/omega1)/sin(n pi tau) = -i [E(n(tau+2zeta)) + E(n(tau-2zeta))]/(1-E(2n tau))
        let t1 = -I * (e_half(nf * (tau + 2.0 * zeta)) + e_half(nf * (tau - 2.0 * zeta)))
            / (1.0 - e_half(2.0 * nf * tau));
        lhs += (w2 / w1) * alt * nf * t1;
        // cos(2 n pi z/omega2)/sin(n pi p), Im p < 0:
        // = i [E(n(2 zeta_p - 1) p ... ) ] expressed directly in zeta_p
        let t2 = I
            * (e_half(nf * (2.0 * zeta_p - p)) + e_half(-nf * (2.0 * zeta_p + p)))
            / (1.0 - e_half(-2.0 * nf * p));
        rhs -= (w1 / w2) * alt * nf * t2;
    }
    Ok(IdentityReport::new(
        format!("residue master identity (N={})", n_terms),
        lhs,
        rhs,
    ))
}

/// Boundary integral of wpt around the translated cell
/// base + [0,1] omega1 + [0,1] omega2. With a pole-free boundary the total
/// is the (zero) residue of the double pole inside.
pub fn wpt_boundary_integral(lat: &Lattice, base: Complex64, tol: f64) -> Result<Evaluation> {
    let w1 = lat.omega1();
    let w2 = lat.omega2();
    let vertices = [base, base + w1, base + w1 + w2, base + w2];

    // the integrand's own pole set is the shifted lattice, not H's poles
    let clearance = 0.05 * lat.min_scale();
    for i in 0..4 {
        let from = vertices[i];
        let to = vertices[(i + 1) % 4];
        for j in 0..=64 {
            let t = j as f64 / 64.0;
            let s = from + t * (to - from);
            let d = lat.star_distance(s);
            if d < clearance {
                return Err(EllipticError::QuadratureNearPole {
                    node: s,
                    pole: s,
                    distance: d,
                });
            }
        }
    }
    let quad = QuadratureSpec::default();
    let f = |s: Complex64| {
        crate::weierstrass::wp_tilde(s, lat, None, tol)
            .map(|e| e.value)
            .unwrap_or(c64(f64::NAN, f64::NAN))
    };
    let (value, nodes, gap) = closed_polyline_quadrature(&vertices, &quad, lat, &f, false)?;
    Ok(Evaluation::new(value, nodes, gap, Representation::Quadrature))
}

/// Partial sums of sum (-1)^n n/sinh(n pi): the constant the master identity
/// produces at z=0 on the square lattice, equal to -1/(4 pi).
pub fn sinh_constant_partial(n_terms: usize) -> Complex64 {
    let mut sum = 0.0;
    for n in 1..=n_terms {
        let nf = n as f64;
        let alt = if n % 2 == 1 { -1.0 } else { 1.0 };
        // 1/sinh(n pi) = 2 e^{-n pi}/(1 - e^{-2 n pi})
        sum += alt * nf * 2.0 * (-nf * PI).exp() / (1.0 - (-2.0 * nf * PI).exp());
    }
    c64(sum, 0.0)
}

/// Decay table |integral over C_n| for n in [n_lo, n_hi].
pub fn decay_table(
    z: Complex64,
    lat: &Lattice,
    n_lo: usize,
    n_hi: usize,
    quad: &QuadratureSpec,
) -> Result<Vec<(usize, f64)>> {
    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        let ev = integrate_h(n, z, lat, quad)?;
        rows.push((n, ev.value.norm()));
    }
    Ok(rows)
}
