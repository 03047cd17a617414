//! Exact scalars, matrices and polynomials over the rationals, with
//! certified root-location tests.

pub mod bareiss;
pub mod matrix;
pub mod poly;
pub mod roots;

pub use bareiss::{char_poly, det};
pub use matrix::Matrix;
pub use poly::Poly;
pub use roots::{
    all_roots_outside_unit_disk, real_root_count_in_interval, unit_circle_roots_exist, Certified,
    SpectralCertificate, Witness,
};
