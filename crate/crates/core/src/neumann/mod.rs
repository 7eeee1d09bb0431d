//! Neumann problems `-y'' + q(x) y = λ y`, `y'(0) = y'(1) = 0`.
//!
//! Eigenvalues are located by shooting on the scaled Prüfer phase: the phase
//! at `x = 1` counts eigenvalues below a trial `λ`, which brackets each one,
//! and the same phase minus its target `π/2 + nπ` is refined to a root.

mod potential;
mod prufer;

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

pub use potential::{Potential, PotentialError};

use crate::domain::{DomainError, Spectrum, Tolerances};
use prufer::PhaseShot;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeumannError {
    #[error("invalid potential: {0}")]
    InvalidPotential(#[from] PotentialError),
    #[error("integrator step underflow at x = {x} for λ = {lambda}")]
    StepUnderflow { lambda: f64, x: f64 },
    #[error("λ = {0} is not finite")]
    NonFiniteLambda(f64),
    #[error("could not bracket eigenvalue #{index} in window [{lo}, {hi}]")]
    Bracketing { index: usize, lo: f64, hi: f64 },
    #[error("requested eigenvalue count must be at least 1")]
    ZeroCount,
}

/// First eigenvalues of one Neumann problem, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannSpectrum {
    values: Vec<f64>,
}

impl NeumannSpectrum {
    /// Wraps externally supplied eigenvalues; `None` unless strictly increasing
    /// and finite.
    pub fn from_values(values: Vec<f64>) -> Option<Self> {
        let ok = !values.is_empty()
            && values.iter().all(|v| v.is_finite())
            && values.windows(2).all(|w| w[0] < w[1]);
        ok.then_some(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_spectrum(&self, cluster_radius: f64) -> Result<Spectrum, DomainError> {
        Spectrum::from_real_simple(&self.values, cluster_radius)
    }

    /// Loose asymptotic gate: `|λ_n - (nπ)² - ∫q| ≤ max(1, ∫|q'|)` for `n ≥ 5`.
    pub fn asymptotic_sanity(&self, q: &Potential) -> bool {
        let mean = q.mean();
        let bound = q.total_variation().max(1.0);
        self.values
            .iter()
            .enumerate()
            .skip(5)
            .all(|(n, &l)| (l - free_eigenvalue(n) - mean).abs() <= bound)
    }
}

/// `(nπ)²`, the n-th eigenvalue of the free Neumann problem.
pub fn free_eigenvalue(n: usize) -> f64 {
    let k = n as f64 * PI;
    k * k
}

struct Prepared<'a> {
    q: &'a Potential,
    breakpoints: Vec<f64>,
    mean: f64,
    local_tol: f64,
}

impl<'a> Prepared<'a> {
    fn new(q: &'a Potential, tol: &Tolerances) -> Result<Self, NeumannError> {
        q.validate()?;
        Ok(Self {
            q,
            breakpoints: q.breakpoints(),
            mean: q.mean(),
            local_tol: tol.eig_tol / 100.0,
        })
    }

    fn phase(&self, lambda: f64) -> Result<PhaseShot, NeumannError> {
        if !lambda.is_finite() {
            return Err(NeumannError::NonFiniteLambda(lambda));
        }
        prufer::neumann_phase(self.q, &self.breakpoints, self.mean, lambda, self.local_tol)
            .map_err(|e| NeumannError::StepUnderflow { lambda, x: e.x })
    }

    fn count_below(&self, mu: f64) -> Result<usize, NeumannError> {
        Ok(phase_count(self.phase(mu)?.theta))
    }
}

fn phase_count(theta: f64) -> usize {
    if theta <= FRAC_PI_2 {
        0
    } else {
        ((theta - FRAC_PI_2) / PI).ceil() as usize
    }
}

/// Normalized `y'(1)` of the solution with `y(0) = 1, y'(0) = 0`.
///
/// The solution is rescaled so that `|(y(1), y'(1))| = 1`; the sign and the
/// zero set in `λ` are those of the raw `y'(1)`, so zeros are exactly the
/// Neumann eigenvalues.
pub fn shoot_miss(q: &Potential, lambda: f64, tol: &Tolerances) -> Result<f64, NeumannError> {
    let shot = Prepared::new(q, tol)?.phase(lambda)?;
    let (sin, cos) = shot.theta.sin_cos();
    let y = sin / shot.scale;
    Ok(cos / (y * y + cos * cos).sqrt())
}

/// Number of Neumann eigenvalues strictly below `mu`.
pub fn eigenvalue_count_below(
    q: &Potential,
    mu: f64,
    tol: &Tolerances,
) -> Result<usize, NeumannError> {
    Prepared::new(q, tol)?.count_below(mu)
}

/// The first `count` Neumann eigenvalues of `q`.
pub fn neumann_eigenvalues(
    q: &Potential,
    count: usize,
    tol: &Tolerances,
) -> Result<NeumannSpectrum, NeumannError> {
    if count == 0 {
        return Err(NeumannError::ZeroCount);
    }
    let prep = Prepared::new(q, tol)?;
    let (q_min, q_max) = q.bounds();
    let mut values: Vec<f64> = Vec::with_capacity(count);
    for n in 0..count {
        let target = FRAC_PI_2 + n as f64 * PI;
        let miss = |lambda: f64| prep.phase(lambda).map(|s| s.theta - target);

        // Comparison with constant potentials: (nπ)² + min q ≤ λ_n ≤ (nπ)² + max q.
        let free = free_eigenvalue(n);
        let centre = free + 0.5 * (q_min + q_max);
        let base_half = 0.5 * (q_max - q_min) + 1.0;
        let mut bracket = None;
        for half in [base_half, 10.0 * base_half] {
            let mut lo = centre - half;
            if let Some(&prev) = values.last() {
                lo = lo.max(prev);
            }
            let hi = centre + half;
            let (f_lo, f_hi) = (miss(lo)?, miss(hi)?);
            if f_lo < 0.0 && f_hi > 0.0 {
                bracket = Some((lo, f_lo, hi, f_hi));
                break;
            }
            if f_lo == 0.0 {
                bracket = Some((lo, 0.0, lo, 0.0));
                break;
            }
        }
        let (lo, f_lo, hi, f_hi) = bracket.ok_or(NeumannError::Bracketing {
            index: n,
            lo: centre - 10.0 * base_half,
            hi: centre + 10.0 * base_half,
        })?;
        let lambda = refine_bracket(&miss, lo, f_lo, hi, f_hi, tol.eig_tol)?;
        values.push(lambda);
    }
    Ok(NeumannSpectrum { values })
}

/// Shrinks a sign-change bracket `f(lo) < 0 < f(hi)` of an increasing function
/// to width ≤ `width_tol` (Illinois false position with bisection fallback),
/// then applies one guarded secant step.
fn refine_bracket<F>(
    f: &F,
    mut lo: f64,
    mut f_lo: f64,
    mut hi: f64,
    mut f_hi: f64,
    width_tol: f64,
) -> Result<f64, NeumannError>
where
    F: Fn(f64) -> Result<f64, NeumannError>,
{
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let mut side = 0i8;
    let mut last_width = hi - lo;
    for iter in 0..200 {
        if hi - lo <= width_tol {
            break;
        }
        let width = hi - lo;
        let mut x = if iter % 4 == 3 && width > 0.5 * last_width {
            0.5 * (lo + hi)
        } else {
            (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        };
        if iter % 4 == 3 {
            last_width = width;
        }
        // Keep the probe at least a quarter tolerance inside the bracket so
        // the bracket can collapse around a root sitting on one end.
        let guard = 0.25 * width_tol;
        if !(x > lo + guard && x < hi - guard) {
            x = if x <= lo + guard {
                lo + guard
            } else {
                hi - guard
            };
            if !(x > lo && x < hi) {
                x = 0.5 * (lo + hi);
            }
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    // Illinois halving leaves scaled endpoint values; re-evaluate for the polish.
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    Ok(if secant >= lo && secant <= hi && secant.is_finite() {
        secant
    } else {
        0.5 * (lo + hi)
    })
}

/// Whether the spectrum matches the free spectrum `(nπ)²` entrywise within `tol`.
///
/// On a complete spectrum this verdict forces `q ≡ 0` (Ambarzumian); on a
/// finite prefix it is a proxy.
pub fn free_spectrum_verdict(spectrum: &NeumannSpectrum, tol: f64) -> bool {
    spectrum
        .values
        .iter()
        .enumerate()
        .all(|(n, &l)| (l - free_eigenvalue(n)).abs() <= tol)
}

/// Lowest Neumann eigenvalue together with `∫₀¹ q dx`.
///
/// The constant function as a trial state gives `λ₀ ≤ ∫q`, with equality only
/// for constant potentials.
pub fn rayleigh_mean_gap(q: &Potential, tol: &Tolerances) -> Result<(f64, f64), NeumannError> {
    let lambda0 = neumann_eigenvalues(q, 1, tol)?.values[0];
    Ok((lambda0, q.mean()))
}
