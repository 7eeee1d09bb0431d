use super::fundamental::{expm1, y1_eval, y2_eval};
use super::{BoundaryPolynomialProblem, CharDetError};
use crate::domain::C64;

/// `Δ(λ) = (e^{2λ} - e^λ)/λ + A(λ)(-e^{2λ} + 2e^λ) = y2(λ, 1) + A(λ) y1(λ, 1)`.
///
/// Continues to `Δ(0) = 1 + a_0` through the series branch of `y2`. Fails with
/// [`CharDetError::Overflow`] once `e^{2λ}` leaves the double range; use
/// [`delta_scaled_eval`] there.
pub fn delta_eval(prob: &BoundaryPolynomialProblem, lambda: C64) -> Result<C64, CharDetError> {
    let value = y2_eval(lambda, 1.0) + prob.a.eval(lambda) * y1_eval(lambda, 1.0);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CharDetError::Overflow { lambda })
    }
}

/// `Δ̂(λ) = λ e^{-2λ} Δ(λ) = (1 - e^{-λ}) + λ A(λ) (2e^{-λ} - 1)`.
///
/// Shares the nonzero zeros of `Δ` with equal multiplicities and has an
/// artificial zero at `λ = 0`.
pub fn delta_scaled_eval(prob: &BoundaryPolynomialProblem, lambda: C64) -> C64 {
    let em = (-lambda).exp();
    -expm1(-lambda) + lambda * prob.a.eval(lambda) * (em * 2.0 - 1.0)
}

/// `Δ̂'(λ) = e^{-λ} + (A + λA')(2e^{-λ} - 1) - 2λA e^{-λ}`.
pub fn delta_deriv(prob: &BoundaryPolynomialProblem, lambda: C64) -> C64 {
    let em = (-lambda).exp();
    let (a, da) = prob.a.eval_with_derivative(lambda);
    em + (a + lambda * da) * (em * 2.0 - 1.0) - lambda * a * em * 2.0
}

/// `e^{-2λ} Δ(λ) = Δ̂(λ)/λ`, entire and free of the artificial zero at 0.
///
/// Its zeros are exactly those of `Δ`, so winding numbers of this function
/// count eigenvalues directly.
pub(crate) fn delta_reduced(prob: &BoundaryPolynomialProblem, lambda: C64) -> C64 {
    let head = if lambda.norm() < 1e-4 {
        // (1 - e^{-λ})/λ = 1 - λ/2 + λ²/6 - λ³/24 + …
        let l = lambda;
        1.0 - l * (0.5 - l * (1.0 / 6.0 - l / 24.0))
    } else {
        -expm1(-lambda) / lambda
    };
    head + prob.a.eval(lambda) * ((-lambda).exp() * 2.0 - 1.0)
}

/// Magnitude scale of the terms in [`delta_reduced`], for zero tests.
pub(crate) fn reduced_scale(prob: &BoundaryPolynomialProblem, lambda: C64) -> f64 {
    (1.0 + prob.a.eval(lambda).norm()) * (1.0 + (-lambda.re).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Polynomial;
    use std::f64::consts::{LN_2, PI};

    fn prob(c: &[f64]) -> BoundaryPolynomialProblem {
        BoundaryPolynomialProblem::new(Polynomial::from_real(c).unwrap())
    }

    #[test]
    fn free_zeros_at_integer_multiples_of_two_pi_i() {
        let p = prob(&[0.0]);
        for k in [-3.0, -1.0, 1.0, 2.0] {
            let l = C64::new(0.0, 2.0 * PI * k);
            assert!(delta_eval(&p, l).unwrap().norm() < 1e-13);
            assert!(delta_scaled_eval(&p, l).norm() < 1e-13);
        }
    }

    #[test]
    fn value_at_origin() {
        for a0 in [0.0, 1.0, -0.3] {
            let p = prob(&[a0, 2.0]);
            let d = delta_eval(&p, C64::new(0.0, 0.0)).unwrap();
            assert!((d - (1.0 + a0)).norm() < 1e-15);
            assert_eq!(
                delta_scaled_eval(&p, C64::new(0.0, 0.0)),
                C64::new(0.0, 0.0)
            );
            assert!((delta_reduced(&p, C64::new(0.0, 0.0)) - (1.0 + a0)).norm() < 1e-15);
        }
    }

    #[test]
    fn ln_two_is_never_a_zero() {
        let l = C64::new(LN_2, 0.0);
        for c in [[1.0, 2.0], [-5.0, 0.5]] {
            assert!((delta_scaled_eval(&prob(&c), l) - 0.5).norm() < 1e-15);
        }
    }

    #[test]
    fn deriv_free_problem() {
        let p = prob(&[0.0, 0.0]);
        assert_eq!(delta_deriv(&p, C64::new(0.0, 0.0)), C64::new(1.0, 0.0));
        let l = C64::new(0.3, -1.7);
        assert!((delta_deriv(&p, l) - (-l).exp()).norm() < 1e-15);
    }

    #[test]
    fn overflow_is_reported() {
        let p = prob(&[1.0]);
        assert!(matches!(
            delta_eval(&p, C64::new(400.0, 0.0)),
            Err(CharDetError::Overflow { .. })
        ));
        assert!(delta_scaled_eval(&p, C64::new(400.0, 0.0)).is_finite());
    }

    #[test]
    fn reduced_matches_scaled_over_lambda() {
        let p = prob(&[0.4, -1.0, 0.25]);
        for l in [
            C64::new(2e-5, 1e-5),
            C64::new(0.5, 3.0),
            C64::new(-4.0, -9.0),
        ] {
            let lhs = delta_reduced(&p, l) * l;
            let rhs = delta_scaled_eval(&p, l);
            assert!((lhs - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
        }
    }
}
