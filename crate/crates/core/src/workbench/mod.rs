//! Experiment harness: round trips from coefficients to eigenvalues and back,
//! uniqueness probes, Neumann spectrum comparisons, and file formats.

pub mod io;

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chardet::{
    find_det_eigenvalues, BoundaryPolynomialProblem, CharDetError, DetSpectrum, SearchBox,
};
use crate::domain::{poly_max_abs_diff, spectra_match, DomainError, Polynomial, Tolerances, C64};
use crate::neumann::{
    free_spectrum_verdict, neumann_eigenvalues, NeumannError, NeumannSpectrum, Potential,
};
use crate::reconstruct::{
    reconstruct_coeffs, select_nodes, NodePolicy, ReconstructError, ReconstructionInput,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorkbenchError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Neumann(#[from] NeumannError),
    #[error(transparent)]
    CharDet(#[from] CharDetError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error("{kind} document{}: {message}", location(*line, *column))]
    Parse {
        kind: &'static str,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{kind} document: {message}")]
    Schema { kind: &'static str, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("needed {needed} distinct nonzero eigenvalues, found {}: {found:?}", found.len())]
    NotEnoughRoots { needed: usize, found: Vec<C64> },
}

fn location(line: usize, column: usize) -> String {
    // serde reports line 0 when the position is unknown
    if line == 0 {
        String::new()
    } else {
        format!(", line {line}, column {column}")
    }
}

impl WorkbenchError {
    /// Process exit code: 2 for invalid input, 1 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkbenchError::Parse { .. }
            | WorkbenchError::Schema { .. }
            | WorkbenchError::Io { .. }
            | WorkbenchError::Invalid(_)
            | WorkbenchError::Domain(_)
            | WorkbenchError::Neumann(NeumannError::InvalidPotential(_))
            | WorkbenchError::Neumann(NeumannError::ZeroCount)
            | WorkbenchError::CharDet(CharDetError::InvalidBox(_))
            | WorkbenchError::Reconstruct(ReconstructError::WrongNodeCount { .. })
            | WorkbenchError::Reconstruct(ReconstructError::ZeroNode { .. })
            | WorkbenchError::Reconstruct(ReconstructError::DuplicateNodes { .. }) => 2,
            _ => 1,
        }
    }
}

/// Settings for seeded round-trip suites and probes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub min_degree: usize,
    pub max_degree: usize,
    pub coeff_bound: f64,
    pub search_box: SearchBox,
    pub tolerances: Tolerances,
    pub trials: usize,
    pub max_roots: usize,
    pub node_policy: NodePolicy,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            min_degree: 0,
            max_degree: 3,
            coeff_bound: 2.0,
            search_box: default_box(),
            tolerances: Tolerances::default(),
            trials: 1,
            max_roots: 256,
            node_policy: NodePolicy::SmallestModulus,
        }
    }
}

pub fn default_box() -> SearchBox {
    SearchBox {
        re_min: -8.0,
        re_max: 8.0,
        im_min: -30.0,
        im_max: 30.0,
    }
}

/// Box widening factor and the number of widenings tried before giving up.
pub const WIDEN_FACTOR: f64 = 4.0;
pub const MAX_WIDENINGS: usize = 3;

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), WorkbenchError> {
        if self.trials == 0 {
            return Err(WorkbenchError::Invalid("trials must be at least 1".into()));
        }
        if !(self.coeff_bound.is_finite() && self.coeff_bound > 0.0) {
            return Err(WorkbenchError::Invalid(
                "coeff_bound must be positive".into(),
            ));
        }
        if self.min_degree > self.max_degree {
            return Err(WorkbenchError::Invalid("empty degree range".into()));
        }
        self.search_box.validate()?;
        self.tolerances.validate()?;
        Ok(())
    }

    fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    /// Coefficients for trial `trial`: degree uniform in the configured
    /// range, each coefficient uniform in `[-coeff_bound, coeff_bound]`.
    pub fn random_polynomial(&self, trial: usize) -> Polynomial {
        let mut rng = self.trial_rng(trial);
        let degree = rng.gen_range(self.min_degree..=self.max_degree);
        let coeffs: Vec<f64> = (0..=degree)
            .map(|_| rng.gen_range(-self.coeff_bound..=self.coeff_bound))
            .collect();
        Polynomial::from_real(&coeffs).expect("finite coefficients")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripReport {
    pub true_coeffs: Polynomial,
    pub recovered: Polynomial,
    pub max_coeff_error: f64,
    pub condition: f64,
    pub nodes_used: Vec<C64>,
    /// Box in which the nodes were found, after any widening.
    pub search_box: SearchBox,
    pub wall_time: Duration,
}

impl RoundTripReport {
    /// Equality of everything except the wall-clock time.
    pub fn same_outcome(&self, other: &RoundTripReport) -> bool {
        self.true_coeffs == other.true_coeffs
            && self.recovered == other.recovered
            && self.max_coeff_error.to_bits() == other.max_coeff_error.to_bits()
            && self.condition.to_bits() == other.condition.to_bits()
            && self.nodes_used == other.nodes_used
            && self.search_box == other.search_box
    }

    /// The recovery bound `max_coeff_error ≤ 1e-6 · condition`.
    pub fn within_bound(&self) -> bool {
        self.max_coeff_error <= 1e-6 * self.condition
    }
}

#[cfg(not(target_arch = "wasm32"))]
struct Stopwatch(std::time::Instant);
#[cfg(not(target_arch = "wasm32"))]
impl Stopwatch {
    fn start() -> Self {
        Self(std::time::Instant::now())
    }
    fn elapsed(&self) -> Duration {
        self.0.elapsed()
    }
}

// No monotonic clock on bare wasm; timings read as zero there.
#[cfg(target_arch = "wasm32")]
struct Stopwatch;
#[cfg(target_arch = "wasm32")]
impl Stopwatch {
    fn start() -> Self {
        Self
    }
    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}

/// Roots of `Δ` for `a` in `cfg.search_box`, widening the box by
/// [`WIDEN_FACTOR`] up to [`MAX_WIDENINGS`] times until `degree + 1`
/// admissible nodes exist. Returns the spectrum, the box and the nodes.
pub fn find_nodes(
    a: &Polynomial,
    cfg: &ExperimentConfig,
) -> Result<(DetSpectrum, SearchBox, Vec<C64>), WorkbenchError> {
    let prob = BoundaryPolynomialProblem::new(a.clone());
    let tol = &cfg.tolerances;
    let mut bx = cfg.search_box;
    let mut last = Vec::new();
    for _ in 0..=MAX_WIDENINGS {
        let spectrum = find_det_eigenvalues(&prob, &bx, cfg.max_roots, tol)?;
        let values = spectrum.values();
        if let Some(nodes) = select_nodes(&values, a.degree(), cfg.node_policy, tol.cluster_radius)
        {
            return Ok((spectrum, bx, nodes));
        }
        last = values;
        bx = bx.widened(WIDEN_FACTOR);
    }
    Err(WorkbenchError::NotEnoughRoots {
        needed: a.degree() + 1,
        found: last,
    })
}

/// Coefficients → eigenvalues of `Δ` → reconstructed coefficients.
pub fn roundtrip(
    a: &Polynomial,
    cfg: &ExperimentConfig,
) -> Result<RoundTripReport, WorkbenchError> {
    cfg.validate()?;
    if a.degree() < cfg.min_degree || a.degree() > cfg.max_degree {
        return Err(WorkbenchError::Invalid(format!(
            "degree {} outside configured range {}..={}",
            a.degree(),
            cfg.min_degree,
            cfg.max_degree
        )));
    }
    let clock = Stopwatch::start();
    let (_, search_box, nodes) = find_nodes(a, cfg)?;
    let input = ReconstructionInput::new(nodes.clone(), a.degree(), cfg.tolerances.cluster_radius)?;
    let result = reconstruct_coeffs(&input)?;
    let max_coeff_error = poly_max_abs_diff(a, &result.coefficients)?;
    Ok(RoundTripReport {
        true_coeffs: a.clone(),
        recovered: result.coefficients,
        max_coeff_error,
        condition: result.vandermonde_condition,
        nodes_used: nodes,
        search_box,
        wall_time: clock.elapsed(),
    })
}

/// `cfg.trials` seeded round trips, in trial order.
pub fn roundtrip_suite(cfg: &ExperimentConfig) -> Result<Vec<RoundTripReport>, WorkbenchError> {
    cfg.validate()?;
    (0..cfg.trials)
        .map(|t| roundtrip(&cfg.random_polynomial(t), cfg))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    pub a: RoundTripReport,
    pub b: RoundTripReport,
    /// Whether the two spectra in the configured box agree entrywise.
    pub spectra_match: bool,
    pub passed: bool,
}

/// Checks that two boundary polynomials are told apart by their eigenvalues:
/// either the spectra differ, or each spectrum reconstructs its own
/// generator.
pub fn uniqueness_probe(
    a: &Polynomial,
    b: &Polynomial,
    cfg: &ExperimentConfig,
) -> Result<UniquenessReport, WorkbenchError> {
    if a.degree() != b.degree() {
        return Err(WorkbenchError::Domain(DomainError::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        }));
    }
    let tol = &cfg.tolerances;
    let spectrum_in_box = |p: &Polynomial| {
        find_det_eigenvalues(
            &BoundaryPolynomialProblem::new(p.clone()),
            &cfg.search_box,
            cfg.max_roots,
            tol,
        )
    };
    let sa = spectrum_in_box(a)?.to_spectrum(tol.cluster_radius)?;
    let sb = spectrum_in_box(b)?.to_spectrum(tol.cluster_radius)?;
    let matched = spectra_match(&sa, &sb, tol.match_tol);
    let ra = roundtrip(a, cfg)?;
    let rb = roundtrip(b, cfg)?;
    let passed = !matched || (ra.within_bound() && rb.within_bound());
    Ok(UniquenessReport {
        a: ra,
        b: rb,
        spectra_match: matched,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannComparison {
    pub spectrum_a: NeumannSpectrum,
    pub spectrum_b: NeumannSpectrum,
    /// `λ_n(b) - λ_n(a)` per index.
    pub gaps: Vec<f64>,
    pub spectra_match: bool,
    pub free_a: bool,
    pub free_b: bool,
    /// Both spectra equal the free spectrum, which on a complete spectrum
    /// forces `q ≡ 0`.
    pub zero_potential_proxy: bool,
}

pub fn compare_neumann(
    qa: &Potential,
    qb: &Potential,
    count: usize,
    tol: f64,
    tolerances: &Tolerances,
) -> Result<NeumannComparison, WorkbenchError> {
    let spectrum_a = neumann_eigenvalues(qa, count, tolerances)?;
    let spectrum_b = neumann_eigenvalues(qb, count, tolerances)?;
    let gaps: Vec<f64> = spectrum_a
        .values()
        .iter()
        .zip(spectrum_b.values())
        .map(|(x, y)| y - x)
        .collect();
    let matched = spectra_match(
        &spectrum_a.to_spectrum(tolerances.cluster_radius)?,
        &spectrum_b.to_spectrum(tolerances.cluster_radius)?,
        tol,
    );
    let free_a = free_spectrum_verdict(&spectrum_a, tol);
    let free_b = free_spectrum_verdict(&spectrum_b, tol);
    Ok(NeumannComparison {
        spectrum_a,
        spectrum_b,
        gaps,
        spectra_match: matched,
        free_a,
        free_b,
        zero_potential_proxy: matched && free_a && free_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_polynomials_are_reproducible() {
        let cfg = ExperimentConfig {
            seed: 7,
            ..Default::default()
        };
        assert_eq!(cfg.random_polynomial(3), cfg.random_polynomial(3));
        assert_ne!(cfg.random_polynomial(3), cfg.random_polynomial(4));
        let p = cfg.random_polynomial(0);
        assert!(p.degree() <= 3);
        assert!(p.coeffs().iter().all(|c| c.re.abs() <= 2.0 && c.im == 0.0));
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.coeff_bound = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_polynomial_roundtrip() {
        let a = Polynomial::from_real(&[0.0]).unwrap();
        let r = roundtrip(&a, &ExperimentConfig::default()).unwrap();
        assert!(r.recovered.coeffs()[0].norm() < 1e-12);
        let node = r.nodes_used[0];
        assert!(node.re.abs() < 1e-9 && (node.im.abs() - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(WorkbenchError::Invalid("x".into()).exit_code(), 2);
        assert_eq!(
            WorkbenchError::CharDet(CharDetError::Subdivision { retries: 5 }).exit_code(),
            1
        );
    }
}
