//! Numerics for the q-Bessel Fourier transform on the lattice `R_q^+`.
//!
//! * [`qnum`]: q-Pochhammer symbols, lattice windows, Jackson q-integrals.
//! * [`qbessel`]: the normalized Hahn-Exton q-Bessel kernel `j_nu(z, q^2)`.
//! * [`qtransform`]: the windowed transform, inversion and dilation residuals.
//! * [`hardy`]: decay envelopes and the Hardy-type classifier.
//! * [`suites`]: the named checks behind `qfourier verify`.
//! * [`cli`]: argument parsing and table output for the `qfourier` binary.

pub mod cli;
pub mod error;
pub mod hardy;
pub mod qbessel;
pub mod qnum;
pub mod qtransform;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64;
