//! Exact computational machinery for comparing singular, singular Lipschitz and
//! integral-current homology on finite metric simplicial complexes.
//!
//! Everything here is `no_std` (with `alloc`): integer homology via Smith normal
//! form, piecewise-affine Lipschitz chains, polyhedral integral currents, the
//! bracket chain map between them, and the Čech double-complex procedures used to
//! transfer classes from one theory to the other. IO, file formats and the command
//! line front-end live in the `mhom` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod arith;
pub mod bracket;
pub mod cech;
pub mod chains;
pub mod complex;
pub mod currents;
mod error;
pub mod geometry;
pub mod linalg;

pub use error::{Error, Result};
