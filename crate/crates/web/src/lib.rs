//! WebAssembly bindings behind `www/index.html`.
//!
//! Each export takes plain strings and numbers and returns a JSON document.
//! The work happens in the `*_json` functions, which also run natively.

use invspec::chardet::{
    delta_scaled_eval, find_det_eigenvalues, BoundaryPolynomialProblem, SearchBox,
};
use invspec::neumann::{neumann_eigenvalues, Potential};
use invspec::workbench::io::{
    emit, parse, parse_coeff_list, parse_real_list, ReportFile, SpectrumFile,
};
use invspec::workbench::{roundtrip, ExperimentConfig};
use invspec::Tolerances;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn search_box(text: &str) -> Result<SearchBox, String> {
    let v = parse_real_list("box", text).map_err(|e| e.to_string())?;
    match v[..] {
        [a, b, c, d] => SearchBox::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!("box: expected 4 numbers, got {}", v.len())),
    }
}

/// Zeros of the determinant in a box, plus `arg Δ̂` sampled on an
/// `nx × ny` grid for shading the plane.
pub fn det_roots_json(coeffs: &str, bx: &str, nx: usize, ny: usize) -> Result<String, String> {
    let a = parse_coeff_list(coeffs).map_err(|e| e.to_string())?;
    let bx = search_box(bx)?;
    if !(2..=400).contains(&nx) || !(2..=400).contains(&ny) {
        return Err("grid: each side must be between 2 and 400".into());
    }
    let prob = BoundaryPolynomialProblem::new(a);
    let spectrum =
        find_det_eigenvalues(&prob, &bx, 256, &Tolerances::default()).map_err(|e| e.to_string())?;
    let mut phase = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let im = bx.im_max - (bx.im_max - bx.im_min) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let re = bx.re_min + (bx.re_max - bx.re_min) * i as f64 / (nx - 1) as f64;
            phase.push(delta_scaled_eval(&prob, invspec::C64::new(re, im)).arg());
        }
    }
    let roots: serde_json::Value =
        serde_json::from_str(&emit(&SpectrumFile::from(&spectrum))).map_err(|e| e.to_string())?;
    Ok(json!({ "roots": roots["entries"], "nx": nx, "ny": ny, "phase": phase }).to_string())
}

/// First `count` Neumann eigenvalues of a potential document.
pub fn neumann_json(potential: &str, count: usize) -> Result<String, String> {
    if count == 0 || count > 200 {
        return Err("count: must be between 1 and 200".into());
    }
    let q: Potential = parse(potential).map_err(|e| e.to_string())?;
    let s = neumann_eigenvalues(&q, count, &Tolerances::default()).map_err(|e| e.to_string())?;
    Ok(json!({ "eigenvalues": s.values(), "mean": q.mean() }).to_string())
}

/// Coefficients to determinant zeros and back.
pub fn roundtrip_json(coeffs: &str) -> Result<String, String> {
    let a = parse_coeff_list(coeffs).map_err(|e| e.to_string())?;
    let cfg = ExperimentConfig {
        min_degree: a.degree(),
        max_degree: a.degree(),
        ..ExperimentConfig::default()
    };
    let report = roundtrip(&a, &cfg).map_err(|e| e.to_string())?;
    Ok(emit(&ReportFile::from(&report)))
}

#[wasm_bindgen]
pub fn det_roots(coeffs: &str, bx: &str, nx: usize, ny: usize) -> Result<String, JsValue> {
    det_roots_json(coeffs, bx, nx, ny).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn neumann(potential: &str, count: usize) -> Result<String, JsValue> {
    neumann_json(potential, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn round_trip(coeffs: &str) -> Result<String, JsValue> {
    roundtrip_json(coeffs).map_err(|e| JsValue::from_str(&e))
}
