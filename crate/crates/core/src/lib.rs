//! Forward and inverse spectral toolkit.
//!
//! The crate computes the spectra of two families of boundary-value problems
//! and inverts one of them:
//!
//! * [`neumann`]: eigenvalues of `-y'' + q(x) y = λ y` on `[0, 1]` with
//!   `y'(0) = y'(1) = 0`, by scaled Prüfer shooting, plus free-spectrum
//!   (Ambarzumian) rigidity checks.
//! * [`chardet`]: the characteristic determinant `Δ(λ)` of the problem
//!   `y'' - 3λy' + 2λ²y = 0` whose boundary condition carries an unknown
//!   polynomial `A(λ)`, and an argument-principle root finder for its zeros.
//! * [`reconstruct`]: recovery of the coefficients of `A(λ)` from `s + 1`
//!   distinct nonzero zeros of `Δ` through a Vandermonde system.
//! * [`workbench`]: round-trip and uniqueness experiments, file formats and
//!   report export used by the `invspec` command-line tool.

pub mod chardet;
pub mod domain;
pub mod neumann;
pub mod reconstruct;
pub mod workbench;

pub use domain::{
    lex_cmp, poly_eval, poly_max_abs_diff, spectra_match, spectral_cmp, DomainError, Polynomial,
    Spectrum, SpectrumEntry, Tolerances, C64,
};
