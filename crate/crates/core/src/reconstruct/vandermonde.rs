//! Square Vandermonde systems `Σ_j c_j λ_i^j = v_i`.

use nalgebra::{DMatrix, DVector};

use super::ReconstructError;
use crate::domain::{Polynomial, C64};

/// Above this 1-norm condition estimate the solve falls back to a
/// column-pivoted QR factorization of the assembled matrix.
pub const FALLBACK_CONDITION: f64 = 1e12;

/// Björck–Pereyra elimination for the interpolation problem `V c = v`,
/// `V_ij = nodes[i]^j`, in `O(n²)` operations.
///
/// Divided differences build the Newton form, which is then expanded into
/// monomial coefficients.
pub fn bjorck_pereyra(nodes: &[C64], values: &[C64]) -> Vec<C64> {
    let n = nodes.len();
    let mut c = values.to_vec();
    for k in 0..n.saturating_sub(1) {
        for i in (k + 1..n).rev() {
            c[i] = (c[i] - c[i - 1]) / (nodes[i] - nodes[i - k - 1]);
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k..n - 1 {
            let next = c[i + 1];
            c[i] -= nodes[k] * next;
        }
    }
    c
}

pub(crate) fn assemble(nodes: &[C64]) -> DMatrix<C64> {
    let n = nodes.len();
    DMatrix::from_fn(n, n, |i, j| nodes[i].powu(j as u32))
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn vec_one_norm(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

/// 1-norm condition number estimate `‖V‖₁ · est(‖V⁻¹‖₁)`.
///
/// `‖V⁻¹‖₁` comes from Hager's iteration (with Higham's alternating-sign
/// safeguard) using LU solves with `V` and `Vᴴ`. Returns infinity for a
/// numerically singular matrix.
pub fn condition_estimate(nodes: &[C64]) -> f64 {
    let n = nodes.len();
    if n == 0 {
        return 0.0;
    }
    let v = assemble(nodes);
    let lu = v.clone().lu();
    let lu_h = v.adjoint().lu();
    let solve = |b: &DVector<C64>| lu.solve(b);
    let solve_h = |b: &DVector<C64>| lu_h.solve(b);

    let mut x = DVector::from_element(n, C64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let Some(y) = solve(&x) else {
            return f64::INFINITY;
        };
        let new_est = vec_one_norm(&y);
        if iter > 0 && new_est <= est {
            break;
        }
        est = new_est;
        let xi = y.map(|z| {
            if z.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                z / z.norm()
            }
        });
        let Some(z) = solve_h(&xi) else {
            return f64::INFINITY;
        };
        let (j, zj) =
            z.iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold(
                    (0, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        let ztx = z.dotc(&x).re;
        if iter > 0 && (zj <= ztx || j == last_j) {
            break;
        }
        last_j = j;
        x = DVector::from_element(n, C64::new(0.0, 0.0));
        x[j] = C64::new(1.0, 0.0);
    }
    if n > 1 {
        let b = DVector::from_fn(n, |i, _| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            C64::new(sign * (1.0 + i as f64 / (n - 1) as f64), 0.0)
        });
        if let Some(y) = solve(&b) {
            est = f64::max(est, 2.0 * vec_one_norm(&y) / (3.0 * n as f64));
        }
    }
    one_norm(&v) * est
}

fn qr_solve(nodes: &[C64], values: &[C64]) -> Option<Vec<C64>> {
    let v = assemble(nodes);
    let rhs = DVector::from_column_slice(values);
    v.col_piv_qr()
        .solve(&rhs)
        .map(|c| c.iter().copied().collect())
}

/// Pairwise-separation check shared with the reconstruction input.
pub(crate) fn check_separation(nodes: &[C64], min_separation: f64) -> Result<(), ReconstructError> {
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if (nodes[i] - nodes[j]).norm() <= min_separation {
                return Err(ReconstructError::DuplicateNodes {
                    first: i,
                    second: j,
                    value: nodes[i],
                });
            }
        }
    }
    Ok(())
}

/// The unique polynomial of degree `nodes.len() - 1` taking `values` at
/// `nodes`.
///
/// Nodes closer than `min_separation` are rejected as duplicates.
pub fn vandermonde_solve(
    nodes: &[C64],
    values: &[C64],
    min_separation: f64,
) -> Result<Polynomial, ReconstructError> {
    if nodes.len() != values.len() {
        return Err(ReconstructError::LengthMismatch {
            nodes: nodes.len(),
            values: values.len(),
        });
    }
    if nodes.is_empty() {
        return Err(ReconstructError::WrongNodeCount {
            expected: 1,
            got: 0,
        });
    }
    check_separation(nodes, min_separation)?;
    let coeffs = if condition_estimate(nodes) > FALLBACK_CONDITION {
        qr_solve(nodes, values).ok_or(ReconstructError::Singular)?
    } else {
        bjorck_pereyra(nodes, values)
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(ReconstructError::Singular);
    }
    Ok(Polynomial::new(coeffs).expect("nonempty finite coefficients"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn linear_through_two_points() {
        let p = vandermonde_solve(&[r(1.0), r(2.0)], &[r(3.0), r(5.0)], 1e-8).unwrap();
        assert!((p.coeffs()[0] - 1.0).norm() < 1e-15);
        assert!((p.coeffs()[1] - 2.0).norm() < 1e-15);
    }

    #[test]
    fn single_node_is_constant() {
        let v = C64::new(0.3, -2.0);
        let p = vandermonde_solve(&[C64::new(4.0, 1.0)], &[v], 1e-8).unwrap();
        assert_eq!(p.coeffs(), &[v]);
    }

    #[test]
    fn duplicates_are_named() {
        let err = vandermonde_solve(&[r(1.0), r(2.0), r(1.0)], &[r(0.0); 3], 1e-8).unwrap_err();
        assert!(matches!(
            err,
            ReconstructError::DuplicateNodes {
                first: 0,
                second: 2,
                ..
            }
        ));
    }

    #[test]
    fn small_condition_numbers() {
        assert!((condition_estimate(&[r(1.0)]) - 1.0).abs() < 1e-15);
        assert!((condition_estimate(&[r(1.0), r(-1.0)]) - 2.0).abs() < 1e-13);
        // [[1,1],[1,1.001]]: ‖V‖₁ = 2.001, ‖V⁻¹‖₁ = 2001.
        let k = condition_estimate(&[r(1.0), r(1.001)]);
        assert!(k >= 1e3);
        assert!((k - 2.001 * 2001.0).abs() / k < 1e-9);
    }

    #[test]
    fn qr_fallback_agrees_on_moderate_system() {
        let nodes = [r(0.5), C64::new(1.0, 1.0), r(-2.0), C64::new(0.0, -1.5)];
        let values = [r(1.0), C64::new(0.0, 2.0), r(-3.0), C64::new(4.0, 1.0)];
        let bp = bjorck_pereyra(&nodes, &values);
        let qr = qr_solve(&nodes, &values).unwrap();
        for (a, b) in bp.iter().zip(&qr) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
