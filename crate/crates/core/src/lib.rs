//! Exact toric integration and the alpha-Futaki character on blow-ups of
//! projective space at a point.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactnum`]: rationals, sparse polynomials, `log b`-linear values and
//!   radial sums in `X = x_1 + ... + x_n`.
//! - [`polytope`]: half-space polytopes with primitive normals, vertex
//!   enumeration, pulling triangulations and the Delzant test.
//! - [`integrate`]: exact integrals over bodies and facets (lattice-normalized
//!   facet measure), the radial integrator for the blow-up slab, and a seeded
//!   Monte Carlo oracle.
//! - [`family`]: the Calabi-symmetric J-equation solution on the blow-up of
//!   `P^n` and its transition map.
//! - [`character`]: boundary and bulk terms, the required coupling ratio and
//!   verdicts.
//! - [`ampleness`]: the Nakai-Moishezon check for line bundles over
//!   `P(O + O(-1)) -> P^1`.
//! - [`verify`]: the reference check suite exposed by the CLI.

pub mod ampleness;
pub mod character;
mod error;
pub mod exactnum;
pub mod family;
pub mod integrate;
mod linalg;
pub mod polytope;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{LogLinear, MultiPoly, RadialSum, Rational};
