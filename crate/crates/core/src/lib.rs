//! Numerical and formal-symbolic toolkit for metaplectic FBI transforms.
//!
//! The crate is `no_std` (with `alloc`). Complex numbers are
//! [`num_complex::Complex64`], matrices are [`nalgebra::DMatrix`].
//!
//! Coordinates on `C^n` are realified as `(Re x_1, .., Re x_n, Im x_1, .., Im x_n)`;
//! phase-space vectors are ordered `(x, ξ)`.

#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cas;
pub mod csymplectic;
mod error;
pub mod fit;
pub mod gaussian;
pub mod grid;
pub mod linalg;
pub mod logc;
pub mod phase;
pub mod poly;
pub mod quad;
pub mod quantize;
pub mod series;
pub mod special;
pub mod transform;
pub mod wavefront;
pub mod wkb;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Complex matrix alias used throughout.
pub type CMat = nalgebra::DMatrix<C64>;
/// Real matrix alias used throughout.
pub type RMat = nalgebra::DMatrix<f64>;
