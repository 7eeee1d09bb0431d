//! Structured-text file formats.
//!
//! Every document is JSON. Reals are written with 17 significant digits so a
//! parse of an emitted document reproduces every `f64` bit for bit, and
//! emitting again reproduces the text.

use std::io;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::{NeumannComparison, RoundTripReport, UniquenessReport, WorkbenchError};
use crate::chardet::DetSpectrum;
use crate::domain::{Polynomial, C64};
use crate::neumann::{NeumannSpectrum, Potential};
use crate::reconstruct::ReconstructionResult;

/// A document kind with a post-parse validity check.
pub trait Document: Serialize + DeserializeOwned {
    const KIND: &'static str;

    fn validate(&self) -> Result<(), String> {
        Ok(())
    }
}

struct SeventeenDigits<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SeventeenDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn emit<T: Serialize>(doc: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        SeventeenDigits {
            inner: PrettyFormatter::with_indent(b"  "),
        },
    );
    doc.serialize(&mut ser).expect("in-memory serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON output is UTF-8")
}

pub fn parse<T: Document>(text: &str) -> Result<T, WorkbenchError> {
    let parse_error = |path: String, e: serde_json::Error| {
        let (line, column) = (e.line(), e.column());
        let mut message = e.to_string();
        let suffix = format!(" at line {line} column {column}");
        if let Some(stripped) = message.strip_suffix(&suffix) {
            message = stripped.to_string();
        }
        if path != "." {
            message = format!("{path}: {message}");
        }
        WorkbenchError::Parse {
            kind: T::KIND,
            line,
            column,
            message,
        }
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        parse_error(path, e.into_inner())
    })?;
    de.end().map_err(|e| parse_error(".".into(), e))?;
    doc.validate().map_err(|message| WorkbenchError::Schema {
        kind: T::KIND,
        message,
    })?;
    Ok(doc)
}

pub fn read_document<T: Document>(path: &std::path::Path) -> Result<T, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse(&text)
}

pub fn write_document<T: Serialize>(path: &std::path::Path, doc: &T) -> Result<(), WorkbenchError> {
    std::fs::write(path, emit(doc)).map_err(|e| WorkbenchError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

/// Complex number as `{ "re": r, "im": i }`, with `im` omitted when zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub im: f64,
}

impl From<C64> for ComplexValue {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for C64 {
    fn from(v: ComplexValue) -> Self {
        C64::new(v.re, v.im)
    }
}

fn to_values(zs: &[C64]) -> Vec<ComplexValue> {
    zs.iter().map(|&z| z.into()).collect()
}

fn check_finite(field: &str, values: &[ComplexValue]) -> Result<(), String> {
    match values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        Some(i) => Err(format!("{field}[{i}]: value is not finite")),
        None => Ok(()),
    }
}

impl Document for Potential {
    const KIND: &'static str = "potential";

    fn validate(&self) -> Result<(), String> {
        Potential::validate(self).map_err(|e| {
            let field = match &e {
                crate::neumann::PotentialError::Unsorted { index } => format!("nodes[{index}]"),
                crate::neumann::PotentialError::NotSpanning { .. } => "nodes".into(),
                crate::neumann::PotentialError::LengthMismatch { .. } => "values".into(),
                crate::neumann::PotentialError::TooFewNodes(_) => "nodes".into(),
                crate::neumann::PotentialError::EmptyCoefficients => "coeffs".into(),
                crate::neumann::PotentialError::NonFinite { field } => (*field).into(),
            };
            format!("{field}: {e}")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFileEntry {
    pub re: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub im: f64,
    pub multiplicity: usize,
}

/// `{ "entries": [ { "re", "im", "multiplicity" }, … ] }`, at least one entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    pub entries: Vec<SpectrumFileEntry>,
}

impl Document for SpectrumFile {
    const KIND: &'static str = "spectrum";

    fn validate(&self) -> Result<(), String> {
        if self.entries.is_empty() {
            return Err("entries: a spectrum needs at least one entry".into());
        }
        for (i, e) in self.entries.iter().enumerate() {
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(format!("entries[{i}]: value is not finite"));
            }
            if e.multiplicity == 0 {
                return Err(format!("entries[{i}].multiplicity: must be at least 1"));
            }
        }
        Ok(())
    }
}

impl SpectrumFile {
    pub fn values(&self) -> Vec<C64> {
        self.entries.iter().map(|e| C64::new(e.re, e.im)).collect()
    }
}

impl From<&NeumannSpectrum> for SpectrumFile {
    fn from(s: &NeumannSpectrum) -> Self {
        Self {
            entries: s
                .values()
                .iter()
                .map(|&re| SpectrumFileEntry {
                    re,
                    im: 0.0,
                    multiplicity: 1,
                })
                .collect(),
        }
    }
}

impl From<&DetSpectrum> for SpectrumFile {
    fn from(s: &DetSpectrum) -> Self {
        Self {
            entries: s
                .roots
                .iter()
                .map(|r| SpectrumFileEntry {
                    re: r.value.re,
                    im: r.value.im,
                    multiplicity: r.multiplicity,
                })
                .collect(),
        }
    }
}

/// Round-trip report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub true_coeffs: Vec<ComplexValue>,
    pub recovered: Vec<ComplexValue>,
    pub max_coeff_error: f64,
    pub condition: f64,
    pub nodes: Vec<ComplexValue>,
    pub wall_time_ms: f64,
}

impl Document for ReportFile {
    const KIND: &'static str = "report";

    fn validate(&self) -> Result<(), String> {
        if self.true_coeffs.is_empty() {
            return Err("true_coeffs: needs at least one coefficient".into());
        }
        if self.recovered.len() != self.true_coeffs.len() {
            return Err(format!(
                "recovered: {} coefficients but true_coeffs has {}",
                self.recovered.len(),
                self.true_coeffs.len()
            ));
        }
        check_finite("true_coeffs", &self.true_coeffs)?;
        check_finite("recovered", &self.recovered)?;
        check_finite("nodes", &self.nodes)
    }
}

impl From<&RoundTripReport> for ReportFile {
    fn from(r: &RoundTripReport) -> Self {
        Self {
            true_coeffs: to_values(r.true_coeffs.coeffs()),
            recovered: to_values(r.recovered.coeffs()),
            max_coeff_error: r.max_coeff_error,
            condition: r.condition,
            nodes: to_values(&r.nodes_used),
            wall_time_ms: r.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// Output of `invspec reconstruct`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructionFile {
    pub degree: usize,
    pub nodes: Vec<ComplexValue>,
    pub coefficients: Vec<ComplexValue>,
    pub node_residuals: Vec<f64>,
    pub condition: f64,
}

impl Document for ReconstructionFile {
    const KIND: &'static str = "reconstruction";

    fn validate(&self) -> Result<(), String> {
        if self.coefficients.len() != self.degree + 1 {
            return Err(format!(
                "coefficients: expected {} entries for degree {}",
                self.degree + 1,
                self.degree
            ));
        }
        check_finite("coefficients", &self.coefficients)?;
        check_finite("nodes", &self.nodes)
    }
}

impl ReconstructionFile {
    pub fn new(nodes: &[C64], result: &ReconstructionResult) -> Self {
        Self {
            degree: result.coefficients.degree(),
            nodes: to_values(nodes),
            coefficients: to_values(result.coefficients.coeffs()),
            node_residuals: result.node_residuals.clone(),
            condition: result.vandermonde_condition,
        }
    }
}

/// Output of `invspec uniqueness`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessFile {
    pub coeffs_a: Vec<ComplexValue>,
    pub coeffs_b: Vec<ComplexValue>,
    pub spectra_match: bool,
    pub nodes_a: Vec<ComplexValue>,
    pub nodes_b: Vec<ComplexValue>,
    pub recovered_a: Vec<ComplexValue>,
    pub recovered_b: Vec<ComplexValue>,
    pub error_a: f64,
    pub error_b: f64,
    pub passed: bool,
}

impl Document for UniquenessFile {
    const KIND: &'static str = "uniqueness";
}

impl From<&UniquenessReport> for UniquenessFile {
    fn from(u: &UniquenessReport) -> Self {
        Self {
            coeffs_a: to_values(u.a.true_coeffs.coeffs()),
            coeffs_b: to_values(u.b.true_coeffs.coeffs()),
            spectra_match: u.spectra_match,
            nodes_a: to_values(&u.a.nodes_used),
            nodes_b: to_values(&u.b.nodes_used),
            recovered_a: to_values(u.a.recovered.coeffs()),
            recovered_b: to_values(u.b.recovered.coeffs()),
            error_a: u.a.max_coeff_error,
            error_b: u.b.max_coeff_error,
            passed: u.passed,
        }
    }
}

/// Verdict printed by `invspec compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonFile {
    pub spectra_match: bool,
    pub eigenvalues_a: Vec<f64>,
    pub eigenvalues_b: Vec<f64>,
    pub gaps: Vec<f64>,
    pub free_spectrum_a: bool,
    pub free_spectrum_b: bool,
    pub zero_potential_proxy: bool,
}

impl Document for ComparisonFile {
    const KIND: &'static str = "comparison";
}

impl From<&NeumannComparison> for ComparisonFile {
    fn from(c: &NeumannComparison) -> Self {
        Self {
            spectra_match: c.spectra_match,
            eigenvalues_a: c.spectrum_a.values().to_vec(),
            eigenvalues_b: c.spectrum_b.values().to_vec(),
            gaps: c.gaps.clone(),
            free_spectrum_a: c.free_a,
            free_spectrum_b: c.free_b,
            zero_potential_proxy: c.zero_potential_proxy,
        }
    }
}

/// Parses `c0,c1,…` into a real-coefficient polynomial.
pub fn parse_coeff_list(text: &str) -> Result<Polynomial, WorkbenchError> {
    let values = parse_real_list("coeffs", text)?;
    Polynomial::from_real(&values).map_err(|e| WorkbenchError::Invalid(format!("coeffs: {e}")))
}

pub fn parse_real_list(field: &str, text: &str) -> Result<Vec<f64>, WorkbenchError> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    WorkbenchError::Invalid(format!("{field}[{i}]: `{s}` is not a finite real"))
                })
        })
        .collect()
}

/// One CSV row per report with a header; list-valued fields hold compact JSON.
pub fn write_reports_csv<W: io::Write>(
    reports: &[RoundTripReport],
    writer: W,
) -> Result<(), WorkbenchError> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| WorkbenchError::Io {
        path: "csv".into(),
        message: e.to_string(),
    };
    w.write_record([
        "trial",
        "true_coeffs",
        "recovered",
        "max_coeff_error",
        "condition",
        "nodes",
        "wall_time_ms",
    ])
    .map_err(csv_err)?;
    for (trial, report) in reports.iter().enumerate() {
        let file = ReportFile::from(report);
        let list = |v: &[ComplexValue]| serde_json::to_string(v).expect("serializable");
        w.write_record([
            trial.to_string(),
            list(&file.true_coeffs),
            list(&file.recovered),
            format!("{:.16e}", file.max_coeff_error),
            format!("{:.16e}", file.condition),
            list(&file.nodes),
            format!("{:.16e}", file.wall_time_ms),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| WorkbenchError::Io {
        path: "csv".into(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_use_seventeen_digits() {
        let doc = SpectrumFile {
            entries: vec![SpectrumFileEntry {
                re: 0.1,
                im: 0.0,
                multiplicity: 1,
            }],
        };
        let text = emit(&doc);
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(!text.contains("\"im\""));
        let back: SpectrumFile = parse(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn empty_spectrum_rejected() {
        let err = parse::<SpectrumFile>(r#"{"entries": []}"#).unwrap_err();
        assert!(err.to_string().contains("entries"), "{err}");
    }

    #[test]
    fn unsorted_grid_names_index() {
        let text = r#"{"kind": "grid", "nodes": [0, 0.5, 0.25, 1], "values": [0, 0, 0, 0]}"#;
        let err = parse::<Potential>(text).unwrap_err();
        assert!(err.to_string().contains("nodes[2]"), "{err}");
    }

    #[test]
    fn missing_field_is_named() {
        let err =
            parse::<Potential>("{\n  \"kind\": \"cosine\",\n  \"amplitude\": 1\n}").unwrap_err();
        match err {
            WorkbenchError::Parse { message, kind, .. } => {
                assert_eq!(kind, "potential");
                assert!(message.contains("frequency"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coefficient_lists() {
        let p = parse_coeff_list("1, -2.5,3e-1").unwrap();
        assert_eq!(p.degree(), 2);
        assert!(parse_coeff_list("1,x").is_err());
        assert!(parse_coeff_list("1,inf").is_err());
    }
}
