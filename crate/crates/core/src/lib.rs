//! Exact computation with torsion-free nilpotent groups and the
//! almost-crystallographic groups built from them.
//!
//! The layers, bottom up:
//!
//! * [`exactmath`]: rational matrices and polynomials, Bareiss determinants,
//!   Sturm and Schur-Cohn root location.
//! * [`unipotent`]: exp/log between nilpotent and unipotent matrices,
//!   truncated BCH, Lie subspaces and differentials of automorphisms.
//! * [`malcev`]: group laws in Mal'cev coordinates with a faithful matrix
//!   model, lattice and isolator membership.
//! * [`affinerep`]: the faithful affine representation of `G ⋊ Aut(G)` for
//!   2-step nilpotent `G`.
//! * [`acg`]: almost-crystallographic groups as lattice cosets; membership,
//!   torsion, self-maps and semi-conjugacies.
//! * [`invariants`]: Lefschetz and Nielsen numbers, Anosov relation,
//!   orientability, expanding/hyperbolic classification and gradings.
//!
//! Matrix and polynomial arithmetic is generic over [`scalar::Field`]; the
//! aliases below fix the scalar to exact rationals, which is what every
//! verdict-producing operation uses.

pub mod acg;
pub mod affinerep;
pub mod error;
pub mod exactmath;
pub mod invariants;
pub mod malcev;
pub mod scalar;
pub mod unipotent;

pub use error::{Error, Result};
pub use scalar::Rational;

pub type QMatrix = exactmath::Matrix<Rational>;
pub type QPoly = exactmath::Poly<Rational>;
