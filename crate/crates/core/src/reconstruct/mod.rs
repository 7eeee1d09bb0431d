//! Recovery of the boundary polynomial `A(λ)` from `s + 1` eigenvalues.
//!
//! At every zero `λ_i` of `Δ`, `A(λ_i) = -(e^{λ_i} - 1) / (λ_i (2 - e^{λ_i}))`.
//! For `s + 1` pairwise distinct nonzero zeros this is a square Vandermonde
//! system in `a_0, …, a_s`, so the coefficients are determined uniquely.

mod vandermonde;

use thiserror::Error;

pub use vandermonde::{bjorck_pereyra, condition_estimate, vandermonde_solve, FALLBACK_CONDITION};

use crate::chardet::{delta_scaled_eval, expm1, BoundaryPolynomialProblem};
use crate::domain::{lex_cmp, Polynomial, Tolerances, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error(
        "node #{index} ({value}) is zero; eigenvalues used for reconstruction must be nonzero"
    )]
    ZeroNode { index: usize, value: C64 },
    #[error(
        "node {value} sits on a pole of the right-hand side (e^λ = 2), so it is not an eigenvalue"
    )]
    Pole { value: C64 },
    #[error("nodes #{first} and #{second} coincide near {value}")]
    DuplicateNodes {
        first: usize,
        second: usize,
        value: C64,
    },
    #[error("{nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },
    #[error("expected {expected} nodes, got {got}")]
    WrongNodeCount { expected: usize, got: usize },
    #[error("Vandermonde system is numerically singular")]
    Singular,
}

/// Reduced right-hand side `-(e^λ - 1) / (λ (2 - e^λ))`.
///
/// Equals `-(e^{2λ} - e^λ) / (-λ e^{2λ} + 2λ e^λ)` without forming `e^{2λ}`.
/// `λ = 0` is an excluded node and `e^λ = 2` a pole (never an eigenvalue).
pub fn rhs_value(lambda: C64, cluster_radius: f64) -> Result<C64, ReconstructError> {
    if lambda.norm() <= cluster_radius {
        return Err(ReconstructError::ZeroNode {
            index: 0,
            value: lambda,
        });
    }
    let e = lambda.exp();
    let denom_factor = 2.0 - e;
    if denom_factor.norm() <= 1e-12 {
        return Err(ReconstructError::Pole { value: lambda });
    }
    Ok(-expm1(lambda) / (lambda * denom_factor))
}

/// Right-hand side in its unreduced two-exponential form.
pub fn rhs_value_unreduced(lambda: C64) -> C64 {
    let e1 = lambda.exp();
    let e2 = (lambda * 2.0).exp();
    -(e2 - e1) / (-lambda * e2 + lambda * e1 * 2.0)
}

/// Which `s + 1` eigenvalues to use when more are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodePolicy {
    /// The `s + 1` of smallest modulus, ties broken by `(re, im)`.
    #[default]
    SmallestModulus,
    /// The first `s + 1` in `(re, im)` order.
    Lexicographic,
}

/// Picks `degree + 1` distinct nonzero nodes from `candidates`.
///
/// Candidates within `cluster_radius` of the origin or of an already chosen
/// node are skipped. Returns `None` when too few remain.
pub fn select_nodes(
    candidates: &[C64],
    degree: usize,
    policy: NodePolicy,
    cluster_radius: f64,
) -> Option<Vec<C64>> {
    let mut pool: Vec<C64> = candidates
        .iter()
        .copied()
        .filter(|z| z.norm() > cluster_radius)
        .collect();
    match policy {
        NodePolicy::SmallestModulus => {
            pool.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then_with(|| lex_cmp(a, b)))
        }
        NodePolicy::Lexicographic => pool.sort_by(lex_cmp),
    }
    let mut chosen: Vec<C64> = Vec::with_capacity(degree + 1);
    for z in pool {
        if chosen.iter().all(|c| (c - z).norm() > cluster_radius) {
            chosen.push(z);
            if chosen.len() == degree + 1 {
                return Some(chosen);
            }
        }
    }
    None
}

/// Exactly `s + 1` pairwise distinct nonzero eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionInput {
    nodes: Vec<C64>,
    degree: usize,
    cluster_radius: f64,
}

impl ReconstructionInput {
    pub fn new(
        nodes: Vec<C64>,
        degree: usize,
        cluster_radius: f64,
    ) -> Result<Self, ReconstructError> {
        if nodes.len() != degree + 1 {
            return Err(ReconstructError::WrongNodeCount {
                expected: degree + 1,
                got: nodes.len(),
            });
        }
        if let Some(index) = nodes.iter().position(|z| z.norm() <= cluster_radius) {
            return Err(ReconstructError::ZeroNode {
                index,
                value: nodes[index],
            });
        }
        vandermonde::check_separation(&nodes, cluster_radius)?;
        Ok(Self {
            nodes,
            degree,
            cluster_radius,
        })
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub coefficients: Polynomial,
    /// `|Δ̂(λ_i)|` with the recovered coefficients, one per node.
    pub node_residuals: Vec<f64>,
    pub vandermonde_condition: f64,
}

impl ReconstructionResult {
    /// Residuals stay below `residual_tol · condition`.
    pub fn residuals_within(&self, residual_tol: f64) -> bool {
        self.node_residuals
            .iter()
            .all(|&r| r <= residual_tol * self.vandermonde_condition)
    }
}

/// Solves the Vandermonde system whose right-hand side is [`rhs_value`] at
/// each node, then re-evaluates `Δ̂` at the nodes with the result.
pub fn reconstruct_coeffs(
    input: &ReconstructionInput,
) -> Result<ReconstructionResult, ReconstructError> {
    let values = input
        .nodes
        .iter()
        .enumerate()
        .map(|(index, &z)| {
            rhs_value(z, input.cluster_radius).map_err(|e| match e {
                ReconstructError::ZeroNode { value, .. } => {
                    ReconstructError::ZeroNode { index, value }
                }
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let coefficients = vandermonde_solve(&input.nodes, &values, input.cluster_radius)?;
    let prob = BoundaryPolynomialProblem::new(coefficients);
    let node_residuals = input
        .nodes
        .iter()
        .map(|&z| delta_scaled_eval(&prob, z).norm())
        .collect();
    Ok(ReconstructionResult {
        coefficients: prob.a,
        node_residuals,
        vandermonde_condition: condition_estimate(&input.nodes),
    })
}

/// Convenience: select nodes from a candidate list and reconstruct.
pub fn reconstruct_from_candidates(
    candidates: &[C64],
    degree: usize,
    policy: NodePolicy,
    tol: &Tolerances,
) -> Result<(Vec<C64>, ReconstructionResult), ReconstructError> {
    let nodes = select_nodes(candidates, degree, policy, tol.cluster_radius).ok_or(
        ReconstructError::WrongNodeCount {
            expected: degree + 1,
            got: candidates.len(),
        },
    )?;
    let input = ReconstructionInput::new(nodes.clone(), degree, tol.cluster_radius)?;
    Ok((nodes, reconstruct_coeffs(&input)?))
}
