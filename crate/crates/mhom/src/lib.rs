//! File formats, verification suites and the command-line front end for
//! comparing homology theories on finite metric simplicial complexes.
mod error;
pub mod cli;
pub mod compare;
pub mod format;
pub mod golden;
pub mod homology;
pub mod random;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
