//! Argument-principle zero counting and quadrisection root isolation.

use std::f64::consts::{FRAC_PI_4, PI};

use super::determinant::{delta_deriv, delta_reduced, delta_scaled_eval, reduced_scale};
use super::{BoundaryPolynomialProblem, CharDetError};
use crate::domain::{spectral_cmp, DomainError, Spectrum, Tolerances, C64};

/// Axis-aligned rectangle `[re_min, re_max] × [im_min, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, CharDetError> {
        let b = Self {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), CharDetError> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(CharDetError::InvalidBox(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn centre(&self) -> C64 {
        C64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// Scales the box about its centre.
    pub fn widened(&self, factor: f64) -> Self {
        let c = self.centre();
        let hr = 0.5 * (self.re_max - self.re_min) * factor;
        let hi = 0.5 * (self.im_max - self.im_min) * factor;
        Self {
            re_min: c.re - hr,
            re_max: c.re + hr,
            im_min: c.im - hi,
            im_max: c.im + hi,
        }
    }

    /// Moves every edge outward by `margin`.
    pub fn expanded(&self, margin: f64) -> Self {
        Self {
            re_min: self.re_min - margin,
            re_max: self.re_max + margin,
            im_min: self.im_min - margin,
            im_max: self.im_max + margin,
        }
    }

    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.re_min, self.im_min),
            C64::new(self.re_max, self.im_min),
            C64::new(self.re_max, self.im_max),
            C64::new(self.re_min, self.im_max),
        ]
    }

    /// Four children cut at fractions `(tr, ti)` of the width and height.
    fn split(&self, tr: f64, ti: f64) -> [SearchBox; 4] {
        let xr = self.re_min + tr * (self.re_max - self.re_min);
        let yi = self.im_min + ti * (self.im_max - self.im_min);
        [
            Self {
                re_max: xr,
                im_max: yi,
                ..*self
            },
            Self {
                re_min: xr,
                im_max: yi,
                ..*self
            },
            Self {
                re_min: xr,
                im_min: yi,
                ..*self
            },
            Self {
                re_max: xr,
                im_min: yi,
                ..*self
            },
        ]
    }
}

/// A zero of `Δ` with its algebraic multiplicity and `|Δ̂|` at the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetEigenvalue {
    pub value: C64,
    pub multiplicity: usize,
    pub residual: f64,
}

/// Zeros of `Δ` inside a box, sorted by `(re, im)` via [`spectral_cmp`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetSpectrum {
    pub roots: Vec<DetEigenvalue>,
}

impl DetSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn values(&self) -> Vec<C64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    pub fn to_spectrum(&self, cluster_radius: f64) -> Result<Spectrum, DomainError> {
        Spectrum::from_values(
            self.roots.iter().map(|r| (r.value, r.multiplicity)),
            cluster_radius,
        )
    }
}

/// Coarse boundary sampling step before adaptive refinement.
const EDGE_STEP: f64 = 0.05;
const MAX_EDGE_DEPTH: u32 = 60;

struct Contour<'a> {
    prob: &'a BoundaryPolynomialProblem,
    residual_tol: f64,
}

impl Contour<'_> {
    fn sample(&self, z: C64) -> Result<C64, CharDetError> {
        let g = delta_reduced(self.prob, z);
        if !g.is_finite() || g.norm() <= self.residual_tol * reduced_scale(self.prob, z) {
            return Err(CharDetError::BoundaryZero { near: z });
        }
        Ok(g)
    }

    /// Continuous change of `arg g` from `za` to `zb`, halving the step until
    /// each piece turns by less than π/4.
    fn arg_change(
        &self,
        za: C64,
        zb: C64,
        ga: C64,
        gb: C64,
        depth: u32,
    ) -> Result<f64, CharDetError> {
        let zm = (za + zb) * 0.5;
        let gm = self.sample(zm)?;
        let d1 = (gm / ga).arg();
        let d2 = (gb / gm).arg();
        if d1.abs() < FRAC_PI_4 && d2.abs() < FRAC_PI_4 {
            return Ok(d1 + d2);
        }
        if depth >= MAX_EDGE_DEPTH || (zb - za).norm() <= 1e-13 * (1.0 + za.norm()) {
            return Err(CharDetError::BoundaryZero { near: zm });
        }
        Ok(self.arg_change(za, zm, ga, gm, depth + 1)?
            + self.arg_change(zm, zb, gm, gb, depth + 1)?)
    }

    fn winding(&self, bx: &SearchBox) -> Result<usize, CharDetError> {
        let corners = bx.corners();
        let mut total = 0.0;
        for i in 0..4 {
            let (a, b) = (corners[i], corners[(i + 1) % 4]);
            let pieces = ((b - a).norm() / EDGE_STEP).ceil().max(8.0) as usize;
            let mut z_prev = a;
            let mut g_prev = self.sample(a)?;
            for k in 1..=pieces {
                let z = if k == pieces {
                    b
                } else {
                    a + (b - a) * (k as f64 / pieces as f64)
                };
                let g = self.sample(z)?;
                total += self.arg_change(z_prev, z, g_prev, g, 0)?;
                z_prev = z;
                g_prev = g;
            }
        }
        let w = total / (2.0 * PI);
        let k = w.round();
        if (w - k).abs() > 0.1 || k < 0.0 {
            return Err(CharDetError::NonIntegerWinding { value: w });
        }
        Ok(k as usize)
    }
}

/// Number of zeros of `Δ` inside `bx`, counted with algebraic multiplicity.
///
/// The winding number is taken of `e^{-2λ}Δ(λ)`, which has the zeros of `Δ`
/// and nothing else; the artificial zero of `Δ̂` at the origin is never
/// counted. A value of `|Δ|` below `residual_tol` (relative to the size of its
/// terms) on the boundary is reported as [`CharDetError::BoundaryZero`].
pub fn count_zeros(
    prob: &BoundaryPolynomialProblem,
    bx: &SearchBox,
    tol: &Tolerances,
) -> Result<usize, CharDetError> {
    bx.validate()?;
    Contour {
        prob,
        residual_tol: tol.residual_tol,
    }
    .winding(bx)
}

const SPLITS: [(f64, f64); 6] = [
    (0.5, 0.5),
    (0.5371, 0.4629),
    (0.4471, 0.5813),
    (0.5713, 0.4187),
    (0.4083, 0.5419),
    (0.5923, 0.3851),
];
const RETRIES: usize = SPLITS.len() - 1;

struct Finder<'a> {
    prob: &'a BoundaryPolynomialProblem,
    contour: Contour<'a>,
    tol: &'a Tolerances,
    max_roots: usize,
    found: Vec<DetEigenvalue>,
}

impl Finder<'_> {
    fn newton(&self, start: C64, bx: &SearchBox) -> Option<C64> {
        let mut z = start;
        for _ in 0..100 {
            let d = delta_deriv(self.prob, z);
            if d.norm() == 0.0 {
                return None;
            }
            let step = delta_scaled_eval(self.prob, z) / d;
            if !step.is_finite() {
                return None;
            }
            z -= step;
            if step.norm() <= 1e-13 * (1.0 + z.norm()) {
                // Δ̂ also vanishes at the origin, which is not a zero of Δ.
                if z.norm() <= self.tol.cluster_radius {
                    return None;
                }
                let slack = 1e-9 * bx.diameter();
                return bx.expanded(slack).contains(z).then_some(z);
            }
        }
        None
    }

    fn push(&mut self, value: C64, multiplicity: usize) -> Result<(), CharDetError> {
        let total: usize = self.found.iter().map(|r| r.multiplicity).sum();
        if total + multiplicity > self.max_roots {
            return Err(CharDetError::TooManyRoots {
                max_roots: self.max_roots,
                partial: std::mem::take(&mut self.found),
            });
        }
        self.found.push(DetEigenvalue {
            value,
            multiplicity,
            residual: delta_scaled_eval(self.prob, value).norm(),
        });
        Ok(())
    }

    fn isolate(&mut self, bx: SearchBox, count: usize) -> Result<(), CharDetError> {
        if count == 0 {
            return Ok(());
        }
        if bx.diameter() <= self.tol.cluster_radius {
            let value = if count == 1 {
                self.newton(bx.centre(), &bx).unwrap_or(bx.centre())
            } else {
                bx.centre()
            };
            return self.push(value, count);
        }
        if count == 1 {
            if let Some(z) = self.newton(bx.centre(), &bx) {
                return self.push(z, 1);
            }
        }
        for &(tr, ti) in &SPLITS {
            let children = bx.split(tr, ti);
            let counts: Result<Vec<usize>, CharDetError> =
                children.iter().map(|c| self.contour.winding(c)).collect();
            match counts {
                Ok(counts) if counts.iter().sum::<usize>() == count => {
                    for (child, c) in children.into_iter().zip(counts) {
                        self.isolate(child, c)?;
                    }
                    return Ok(());
                }
                Ok(_)
                | Err(CharDetError::BoundaryZero { .. })
                | Err(CharDetError::NonIntegerWinding { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(CharDetError::Subdivision { retries: RETRIES })
    }
}

/// Zeros of `Δ` inside `bx` with algebraic multiplicities.
///
/// The box is quadrisected until each piece holds at most one zero (or has
/// shrunk below `cluster_radius`, in which case its whole count is reported
/// as one multiple root); simple zeros are polished by Newton's method on
/// `Δ̂`. Values within `cluster_radius` of the origin are dropped.
pub fn find_det_eigenvalues(
    prob: &BoundaryPolynomialProblem,
    bx: &SearchBox,
    max_roots: usize,
    tol: &Tolerances,
) -> Result<DetSpectrum, CharDetError> {
    bx.validate()?;
    let mut finder = Finder {
        prob,
        contour: Contour {
            prob,
            residual_tol: tol.residual_tol,
        },
        tol,
        max_roots,
        found: Vec::new(),
    };
    let mut top = *bx;
    let mut total = None;
    for attempt in 0..=RETRIES {
        match finder.contour.winding(&top) {
            Ok(n) => {
                total = Some(n);
                break;
            }
            Err(CharDetError::BoundaryZero { .. })
            | Err(CharDetError::NonIntegerWinding { .. }) => {
                top = bx.expanded(tol.cluster_radius * (1u32 << attempt) as f64);
            }
            Err(e) => return Err(e),
        }
    }
    let total = total.ok_or(CharDetError::Subdivision { retries: RETRIES })?;
    finder.isolate(top, total)?;

    let mut roots: Vec<DetEigenvalue> = finder
        .found
        .into_iter()
        .filter(|r| r.value.norm() > tol.cluster_radius)
        .collect();
    roots.sort_by(|a, b| spectral_cmp(&a.value, &b.value, tol.cluster_radius));
    Ok(DetSpectrum { roots })
}
