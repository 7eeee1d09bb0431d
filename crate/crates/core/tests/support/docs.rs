//! Seeded documents of every file schema.

use invspec::neumann::Potential;
use invspec::workbench::io::{
    emit, parse, ComparisonFile, ComplexValue, Document, ReconstructionFile, ReportFile,
    SpectrumFile, SpectrumFileEntry, UniquenessFile,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Reals spread over most of the double exponent range, plus exact integers.
pub fn wild(r: &mut ChaCha8Rng) -> f64 {
    match r.gen_range(0..4) {
        0 => r.gen_range(-1000..1000) as f64,
        1 => r.gen_range(-1.0..1.0),
        _ => r.gen_range(-1.0..1.0) * 10f64.powi(r.gen_range(-300..300)),
    }
}

pub fn wild_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| wild(r)).collect()
}

pub fn complex_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<ComplexValue> {
    (0..n)
        .map(|_| ComplexValue {
            re: wild(r),
            im: if r.gen_bool(0.3) { 0.0 } else { wild(r) },
        })
        .collect()
}

pub fn potential(r: &mut ChaCha8Rng) -> Potential {
    match r.gen_range(0..4) {
        0 => Potential::Constant { c: wild(r) },
        1 => Potential::Cosine {
            amplitude: wild(r),
            frequency: r.gen_range(0.5..20.0),
        },
        2 => {
            let n = r.gen_range(1..6);
            Potential::PolyInX {
                coeffs: wild_vec(r, n),
            }
        }
        _ => {
            let n = r.gen_range(2..12);
            let mut inner: Vec<f64> = (0..n - 2).map(|_| r.gen_range(0.0..1.0)).collect();
            inner.sort_by(f64::total_cmp);
            inner.dedup();
            inner.retain(|&x| x > 0.0);
            let mut nodes = vec![0.0];
            nodes.extend(inner);
            nodes.push(1.0);
            let values = wild_vec(r, nodes.len());
            Potential::Grid { nodes, values }
        }
    }
}

/// `parse(emit(doc)) == doc` and a second emit reproduces the text.
pub fn round_trip<T: Document + PartialEq + std::fmt::Debug>(doc: &T) -> Result<(), String> {
    let text = emit(doc);
    let back: T = parse(&text).map_err(|e| format!("{e}\n{text}"))?;
    if &back != doc {
        return Err(format!("{back:?} != {doc:?}"));
    }
    if emit(&back) != text {
        return Err(format!("re-emitted text differs:\n{text}"));
    }
    Ok(())
}

pub fn spectrum(r: &mut ChaCha8Rng) -> SpectrumFile {
    let n = r.gen_range(1..8);
    let entries = (0..n)
        .map(|_| SpectrumFileEntry {
            re: wild(r),
            im: if r.gen_bool(0.5) { 0.0 } else { wild(r) },
            multiplicity: r.gen_range(1..4),
        })
        .collect();
    SpectrumFile { entries }
}

pub fn report(r: &mut ChaCha8Rng) -> ReportFile {
    let k = r.gen_range(1..5);
    ReportFile {
        true_coeffs: complex_vec(r, k),
        recovered: complex_vec(r, k),
        max_coeff_error: wild(r).abs(),
        condition: wild(r).abs(),
        nodes: complex_vec(r, k),
        wall_time_ms: r.gen_range(0.0..1e4),
    }
}

pub fn reconstruction(r: &mut ChaCha8Rng) -> ReconstructionFile {
    let k = r.gen_range(1..5);
    ReconstructionFile {
        degree: k - 1,
        nodes: complex_vec(r, k),
        coefficients: complex_vec(r, k),
        node_residuals: wild_vec(r, k),
        condition: wild(r).abs(),
    }
}

pub fn uniqueness(r: &mut ChaCha8Rng) -> UniquenessFile {
    let k = r.gen_range(1..5);
    UniquenessFile {
        coeffs_a: complex_vec(r, k),
        coeffs_b: complex_vec(r, k),
        spectra_match: r.gen(),
        nodes_a: complex_vec(r, k),
        nodes_b: complex_vec(r, k),
        recovered_a: complex_vec(r, k),
        recovered_b: complex_vec(r, k),
        error_a: wild(r),
        error_b: wild(r),
        passed: r.gen(),
    }
}

pub fn comparison(r: &mut ChaCha8Rng) -> ComparisonFile {
    let n = r.gen_range(1..6);
    ComparisonFile {
        spectra_match: r.gen(),
        eigenvalues_a: wild_vec(r, n),
        eigenvalues_b: wild_vec(r, n),
        gaps: wild_vec(r, n),
        free_spectrum_a: r.gen(),
        free_spectrum_b: r.gen(),
        zero_potential_proxy: r.gen(),
    }
}
