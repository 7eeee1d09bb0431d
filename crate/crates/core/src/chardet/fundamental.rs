//! Closed-form fundamental system of `y'' - 3λ y' + 2λ² y = 0`.
//!
//! The characteristic roots are `λ` and `2λ`, giving
//! `y1 = -e^{2λx} + 2e^{λx}` and `y2 = (e^{2λx} - e^{λx}) / λ` with
//! `y1(0) = 1, y1'(0) = 0, y2(0) = 0, y2'(0) = 1`.

use crate::domain::C64;

/// Below this modulus `y2` switches to its Taylor expansion in `λ`.
pub const SERIES_RADIUS: f64 = 1e-6;

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: C64) -> C64 {
    let (sin, cos) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    C64::new(z.re.exp_m1() * cos - 2.0 * half * half, z.re.exp() * sin)
}

pub fn y1_eval(lambda: C64, x: f64) -> C64 {
    let e1 = (lambda * x).exp();
    -e1 * e1 + e1 * 2.0
}

pub fn y2_eval(lambda: C64, x: f64) -> C64 {
    if lambda.norm() < SERIES_RADIUS {
        let x2 = x * x;
        return x + lambda * (1.5 * x2) + lambda * lambda * (7.0 / 6.0 * x2 * x);
    }
    let t = lambda * x;
    t.exp() * expm1(t) / lambda
}

/// `(y1, y1', y1'')` at `x`, differentiated analytically.
pub fn y1_jet(lambda: C64, x: f64) -> [C64; 3] {
    let e1 = (lambda * x).exp();
    let e2 = e1 * e1;
    let l2 = lambda * lambda;
    [
        -e2 + e1 * 2.0,
        lambda * (e1 - e2) * 2.0,
        l2 * (e1 * 2.0 - e2 * 4.0),
    ]
}

/// `(y2, y2', y2'')` at `x`, differentiated analytically.
pub fn y2_jet(lambda: C64, x: f64) -> [C64; 3] {
    let e1 = (lambda * x).exp();
    let e2 = e1 * e1;
    [y2_eval(lambda, x), e2 * 2.0 - e1, lambda * (e2 * 4.0 - e1)]
}

/// `(|L y1|, |L y2|)` for `L y = y'' - 3λ y' + 2λ² y`.
pub fn ode_residual(lambda: C64, x: f64) -> (f64, f64) {
    let apply =
        |[y, dy, d2y]: [C64; 3]| (d2y - lambda * dy * 3.0 + lambda * lambda * y * 2.0).norm();
    (apply(y1_jet(lambda, x)), apply(y2_jet(lambda, x)))
}
