//! Scaled Prüfer phase for `-y'' + q y = λ y`.
//!
//! With `S y = ρ sin θ`, `y' = ρ cos θ` and a constant scale `S > 0` the phase
//! obeys `θ' = S cos²θ + (λ - q(x)) / S · sin²θ`. Choosing `S² ≈ |λ - q̄|`
//! makes the right-hand side nearly constant for large `λ`, so the integrator
//! can take steps much longer than the oscillation wavelength of `y`.
//!
//! `θ = kπ` marks a zero of `y` and `θ = π/2 + kπ` a zero of `y'`; the
//! Neumann start `y(0) = 1, y'(0) = 0` is `θ(0) = π/2`.

use std::f64::consts::FRAC_PI_2;

use super::potential::Potential;

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepUnderflow {
    pub x: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PhaseShot {
    pub theta: f64,
    pub scale: f64,
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates a scalar ODE on `[x0, x1]` with local error per step ≤ `tol`.
fn dopri5<F>(
    f: &F,
    x0: f64,
    x1: f64,
    y0: f64,
    h_init: f64,
    tol: f64,
) -> Result<(f64, f64), StepUnderflow>
where
    F: Fn(f64, f64) -> f64,
{
    let mut x = x0;
    let mut y = y0;
    let mut h = h_init.min(x1 - x0);
    let mut k1 = f(x, y);
    let h_min = 1e-14 * (1.0 + x1.abs());
    while x < x1 {
        let last = x + h >= x1;
        if last {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, y + h * A21 * k1);
        let k3 = f(x + C3 * h, y + h * (A31 * k1 + A32 * k2));
        let k4 = f(x + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(
            x + C5 * h,
            y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4),
        );
        let k6 = f(
            x + h,
            y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
        );
        let y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let k7 = f(x + h, y_new);
        let err = (h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)).abs();

        if err <= tol {
            x = if last { x1 } else { x + h };
            y = y_new;
            k1 = k7;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if x < x1 && h < h_min {
            return Err(StepUnderflow { x });
        }
    }
    Ok((y, h))
}

/// Scale used for a given `λ`; any positive constant yields the same
/// eigenvalues, this one keeps the phase equation non-stiff.
pub(crate) fn phase_scale(lambda: f64, mean_q: f64) -> f64 {
    (lambda - mean_q).abs().max(1.0).sqrt()
}

/// Prüfer phase at `x = 1` for the Neumann start `θ(0) = π/2`.
pub(crate) fn neumann_phase(
    q: &Potential,
    breakpoints: &[f64],
    mean_q: f64,
    lambda: f64,
    tol: f64,
) -> Result<PhaseShot, StepUnderflow> {
    let s = phase_scale(lambda, mean_q);
    let rhs = |x: f64, theta: f64| {
        let (sin, cos) = theta.sin_cos();
        s * cos * cos + (lambda - q.eval(x)) / s * sin * sin
    };
    let mut theta = FRAC_PI_2;
    let mut h = 0.05 / s;
    for seg in breakpoints.windows(2) {
        let (next, h_next) = dopri5(&rhs, seg[0], seg[1], theta, h, tol)?;
        theta = next;
        h = h_next;
    }
    Ok(PhaseShot { theta, scale: s })
}
