//! Characteristic determinant of the boundary-polynomial problem
//!
//! ```text
//! y'' - 3λ y' + 2λ² y = 0,   Δ(λ) = y2(λ, 1) + A(λ) y1(λ, 1)
//! ```
//!
//! and location of its complex zeros with algebraic multiplicities.

mod determinant;
mod fundamental;
mod roots;

use thiserror::Error;

pub use determinant::{delta_deriv, delta_eval, delta_scaled_eval};
pub use fundamental::{expm1, ode_residual, y1_eval, y1_jet, y2_eval, y2_jet, SERIES_RADIUS};
pub use roots::{count_zeros, find_det_eigenvalues, DetEigenvalue, DetSpectrum, SearchBox};

use crate::domain::{Polynomial, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharDetError {
    #[error("Δ overflows at λ = {lambda}; evaluate the scaled determinant instead")]
    Overflow { lambda: C64 },
    #[error("invalid search box: {0}")]
    InvalidBox(String),
    #[error("determinant vanishes on the box boundary near λ = {near}; perturb the box by cluster_radius")]
    BoundaryZero { near: C64 },
    #[error("winding number {value} is not close to an integer")]
    NonIntegerWinding { value: f64 },
    #[error("more than {max_roots} roots in the box; {} found before stopping", partial.len())]
    TooManyRoots {
        max_roots: usize,
        partial: Vec<DetEigenvalue>,
    },
    #[error("box subdivision kept hitting roots on the cut lines after {retries} retries")]
    Subdivision { retries: usize },
}

/// The problem `y'' - 3λy' + 2λ²y = 0` with boundary polynomial `A(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPolynomialProblem {
    pub a: Polynomial,
}

impl BoundaryPolynomialProblem {
    pub fn new(a: Polynomial) -> Self {
        Self { a }
    }

    pub fn degree(&self) -> usize {
        self.a.degree()
    }
}
