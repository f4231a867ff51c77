//! Renormalized elliptic functions over a period lattice.
//!
//! The central object is the variant `wpt` of the Weierstrass function whose
//! poles sit on the half-shifted lattice `omega0 + Lambda` and whose zeros
//! are the lattice points themselves, together with the six Jacobi-style
//! quotient functions, eta-style q-products, contour-integral identities, and
//! the modular differential equation satisfied by `wpt`.
//!
//! Every function is available through several independent representations
//! (raw lattice sums, two directional Fourier series, a partial-fraction
//! `1/sin^2` form, q-products); agreement between routes is what the test
//! suite and the CLI `check` command measure.

pub mod contour;
pub mod error;
pub mod eval;
pub mod jacobi;
pub mod lattice;
pub mod modular;
pub mod qfactor;
pub mod series;
pub mod weierstrass;

pub use error::{EllipticError, Result};
pub use eval::{Evaluation, FunctionId, IdentityReport, Representation};
pub use lattice::{FrameCoords, Lattice, PointClass, PointKind};

/// Double-precision complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
