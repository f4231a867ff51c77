//! Evaluation records and the function/representation selectors.

use num_complex::Complex64;

/// Which representation produced a value.
///
/// Every analytic quantity in this crate is computable at least two independent
/// ways; the selector records the route actually taken (an automatic fallback
/// may differ from the one requested).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Direct summation over lattice shells (the normative reference).
    LatticeSum,
    /// Fourier/q-series expanded along the omega1 direction.
    FourierDir1,
    /// Fourier/q-series expanded along the omega2 direction.
    FourierDir2,
    /// Partial-fraction 1/sin^2 form (valid off the pole set, no strip limit).
    SinInverseSquare,
    /// Infinite q-product factorization.
    QProduct,
    /// Numerical contour quadrature (not selectable as a series route).
    Quadrature,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::LatticeSum => "lattice-sum",
            Representation::FourierDir1 => "fourier-dir1",
            Representation::FourierDir2 => "fourier-dir2",
            Representation::SinInverseSquare => "sin2",
            Representation::QProduct => "q-product",
            Representation::Quadrature => "quadrature",
        }
    }

    /// Accepts both the long names emitted by `name()` and short aliases.
    pub fn parse(s: &str) -> Option<Representation> {
        match s.to_ascii_lowercase().as_str() {
            "lattice" | "lattice-sum" | "latticesum" => Some(Representation::LatticeSum),
            "dir1" | "fourier-dir1" | "fourier1" => Some(Representation::FourierDir1),
            "dir2" | "fourier-dir2" | "fourier2" => Some(Representation::FourierDir2),
            "sin2" | "sininversesquare" | "sin-2" => Some(Representation::SinInverseSquare),
            "product" | "q-product" | "qproduct" => Some(Representation::QProduct),
            _ => None,
        }
    }
}

impl std::fmt::Display for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Named functions evaluable through the CLI and the check suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    /// Classical Weierstrass function (double poles on the lattice).
    Wp,
    /// Renormalized Weierstrass function (poles on the shifted lattice, double zeros on the lattice).
    Wpt,
    /// The scaling -wpt/(16 pi^2); square of SD.
    Wpa,
    Dn,
    Sn,
    Cn,
    Nd,
    Cd,
    Sd,
}

impl FunctionId {
    pub fn name(self) -> &'static str {
        match self {
            FunctionId::Wp => "wp",
            FunctionId::Wpt => "wpt",
            FunctionId::Wpa => "wpa",
            FunctionId::Dn => "dn",
            FunctionId::Sn => "sn",
            FunctionId::Cn => "cn",
            FunctionId::Nd => "nd",
            FunctionId::Cd => "cd",
            FunctionId::Sd => "sd",
        }
    }

    pub fn parse(s: &str) -> Option<FunctionId> {
        match s.to_ascii_lowercase().as_str() {
            "wp" => Some(FunctionId::Wp),
            "wpt" => Some(FunctionId::Wpt),
            "wpa" => Some(FunctionId::Wpa),
            "dn" => Some(FunctionId::Dn),
            "sn" => Some(FunctionId::Sn),
            "cn" => Some(FunctionId::Cn),
            "nd" => Some(FunctionId::Nd),
            "cd" => Some(FunctionId::Cd),
            "sd" => Some(FunctionId::Sd),
            _ => None,
        }
    }
}

impl std::fmt::Display for FunctionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of a single evaluation: the value plus truncation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation {
    pub value: Complex64,
    /// Number of series terms, product factors, shells, or quadrature nodes consumed.
    pub terms_used: usize,
    /// Absolute bound on the truncation/quadrature error (best-effort, >= 0).
    pub tail_estimate: f64,
    /// Representation that actually produced the value.
    pub representation: Representation,
}

impl Evaluation {
    pub fn new(value: Complex64, terms_used: usize, tail_estimate: f64, representation: Representation) -> Self {
        Evaluation {
            value,
            terms_used: terms_used.max(1),
            tail_estimate: tail_estimate.max(0.0),
            representation,
        }
    }
}

/// Comparison record for one identity: both sides plus the residuals.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

impl IdentityReport {
    /// Relative residual uses max(1, |lhs|, |rhs|) as scale, so it degrades to
    /// the absolute residual when both sides are small.
    pub fn new(name: impl Into<String>, lhs: Complex64, rhs: Complex64) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        IdentityReport {
            name: name.into(),
            lhs,
            rhs,
            abs_residual,
            rel_residual: abs_residual / scale,
        }
    }
}
