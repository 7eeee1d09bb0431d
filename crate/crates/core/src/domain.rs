//! Shared numeric domain types: boundary polynomials, spectra and tolerances.

use std::cmp::Ordering;

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used for eigenvalue parameters and polynomial coefficients.
pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("polynomial needs at least one coefficient")]
    EmptyPolynomial,
    #[error("coefficient a_{index} is not finite")]
    NonFiniteCoefficient { index: usize },
    #[error("polynomials are incomparable: degree {left} vs degree {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(&'static str),
    #[error("spectrum value #{index} is not finite")]
    NonFiniteSpectrumValue { index: usize },
    #[error("spectrum entry #{index} has zero multiplicity")]
    ZeroMultiplicity { index: usize },
}

/// Boundary polynomial `A(λ) = a_0 + a_1 λ + … + a_s λ^s`.
///
/// The degree `s` is the declared length of the coefficient vector minus one;
/// trailing zero coefficients are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C64>) -> Result<Self, DomainError> {
        if coeffs.is_empty() {
            return Err(DomainError::EmptyPolynomial);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(DomainError::NonFiniteCoefficient { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, DomainError> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// The zero polynomial of declared degree `degree`.
    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![C64::new(0.0, 0.0); degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        poly_eval(self, z)
    }

    /// Value and first derivative at `z` in one Horner sweep.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut value = C64::new(0.0, 0.0);
        let mut deriv = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            deriv = deriv * z + value;
            value = value * z + c;
        }
        (value, deriv)
    }

    /// Coefficient-wise sum; both operands must share the declared degree.
    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, DomainError> {
        if self.degree() != other.degree() {
            return Err(DomainError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// Horner evaluation of `p` at `z`.
pub fn poly_eval(p: &Polynomial, z: C64) -> C64 {
    p.coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Largest coefficient-wise distance `max_k |p_k - q_k|`.
pub fn poly_max_abs_diff(p: &Polynomial, q: &Polynomial) -> Result<f64, DomainError> {
    if p.degree() != q.degree() {
        return Err(DomainError::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(p.coeffs
        .iter()
        .zip(&q.coeffs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Numerical tolerances shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Bracket width at which Neumann eigenvalue refinement stops.
    pub eig_tol: f64,
    /// Floor below which a determinant value counts as zero.
    pub residual_tol: f64,
    /// Radius within which nearby roots are merged into one multiple root.
    pub cluster_radius: f64,
    /// Entrywise tolerance when comparing spectra.
    pub match_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig_tol: 1e-10,
            residual_tol: 1e-10,
            cluster_radius: 1e-8,
            match_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(
        eig_tol: f64,
        residual_tol: f64,
        cluster_radius: f64,
        match_tol: f64,
    ) -> Result<Self, DomainError> {
        let tol = Self {
            eig_tol,
            residual_tol,
            cluster_radius,
            match_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let all = [
            self.eig_tol,
            self.residual_tol,
            self.cluster_radius,
            self.match_tol,
        ];
        if all.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(DomainError::InvalidTolerances(
                "all tolerances must be finite and strictly positive",
            ));
        }
        if self.cluster_radius < self.residual_tol {
            return Err(DomainError::InvalidTolerances(
                "cluster_radius must be at least residual_tol",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: C64,
    pub multiplicity: usize,
}

/// Exact lexicographic `(re, im)` order.
pub fn lex_cmp(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// `(re, im)` order with real parts compared at resolution `quantum`.
///
/// Computed roots on a common vertical line (conjugate pairs, purely
/// imaginary zeros) differ in `re` only by rounding noise; this keeps them
/// ordered by `im`. The key `(round(re / quantum), im, re)` is a total order.
pub fn spectral_cmp(a: &C64, b: &C64, quantum: f64) -> Ordering {
    // `+ 0.0` folds -0.0 into +0.0 so both signs share a bucket.
    let bucket = |z: &C64| (z.re / quantum).round() + 0.0;
    bucket(a)
        .total_cmp(&bucket(b))
        .then(a.im.total_cmp(&b.im))
        .then(a.re.total_cmp(&b.re))
}

/// Eigenvalues with algebraic multiplicities, sorted by [`spectral_cmp`] at
/// the clustering radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    /// Builds a spectrum from an unsorted multiset.
    ///
    /// Values closer than `cluster_radius` (transitively) are merged into one
    /// entry placed at their multiplicity-weighted mean, with multiplicities
    /// summed. Merging repeats until all entries are more than
    /// `cluster_radius` apart.
    pub fn from_values<I>(values: I, cluster_radius: f64) -> Result<Self, DomainError>
    where
        I: IntoIterator<Item = (C64, usize)>,
    {
        let mut entries = Vec::new();
        for (index, (value, multiplicity)) in values.into_iter().enumerate() {
            if !value.is_finite() {
                return Err(DomainError::NonFiniteSpectrumValue { index });
            }
            if multiplicity == 0 {
                return Err(DomainError::ZeroMultiplicity { index });
            }
            entries.push(SpectrumEntry {
                value,
                multiplicity,
            });
        }
        loop {
            let merged = merge_clusters(&entries, cluster_radius);
            let stable = merged.len() == entries.len();
            entries = merged;
            if stable {
                break;
            }
        }
        entries.sort_by(|a, b| spectral_cmp(&a.value, &b.value, cluster_radius));
        Ok(Self { entries })
    }

    /// Simple real eigenvalues, as produced by the Neumann solver.
    pub fn from_real_simple(values: &[f64], cluster_radius: f64) -> Result<Self, DomainError> {
        Self::from_values(
            values.iter().map(|&v| (C64::new(v, 0.0), 1)),
            cluster_radius,
        )
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

fn merge_clusters(entries: &[SpectrumEntry], radius: f64) -> Vec<SpectrumEntry> {
    let n = entries.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (entries[i].value - entries[j].value).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    // Accumulate per root in first-occurrence order.
    let mut slot_of_root = vec![usize::MAX; n];
    let mut sums: Vec<(C64, usize)> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let r = find(&mut parent, i);
        if slot_of_root[r] == usize::MAX {
            slot_of_root[r] = sums.len();
            sums.push((C64::new(0.0, 0.0), 0));
        }
        let slot = &mut sums[slot_of_root[r]];
        slot.0 += e.value * e.multiplicity as f64;
        slot.1 += e.multiplicity;
    }
    sums.into_iter()
        .map(|(sum, m)| SpectrumEntry {
            value: if m == 1 { sum } else { sum / m as f64 },
            multiplicity: m,
        })
        .collect()
}

/// True iff both spectra have the same number of entries and, in order, each
/// pair of values lies within `tol` and carries the same multiplicity.
pub fn spectra_match(a: &Spectrum, b: &Spectrum, tol: f64) -> bool {
    a.len() == b.len()
        && a.entries
            .iter()
            .zip(&b.entries)
            .all(|(x, y)| x.multiplicity == y.multiplicity && (x.value - y.value).norm() <= tol)
}
