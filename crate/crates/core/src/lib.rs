//! Quantum game laboratory.
//!
//! A small dense qudit simulator (`qstate`), oracle algorithms at desk scale
//! (`qalgo`), classical bimatrix analysis (`cgame`), the quantum games and
//! protocols built on top of them (`qgames`), and mixed-state tools
//! (`density`).
//!
//! Basis ordering is fixed crate-wide: the leftmost subsystem is the most
//! significant digit, so `|10011>` on five qubits is index 19.

pub mod cgame;
pub mod density;
mod error;
pub mod qalgo;
pub mod qgames;
pub mod qstate;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shorthand used throughout for complex literals.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
