//! Equation files, analysis reports and the displacement CSV export.
//!
//! The equation file is JSON: a degree, `degree + 1` coefficient records
//! (each `{const, cos: [...], sin: [...]}`), optional curve-family records
//! and optional nodes. Reals are accepted either as JSON numbers or as
//! strings (`"p/q"`, `"-1.25"`); when every real in the file is exact
//! (integer, string rational or decimal) the equation also gets an exact
//! rational twin and certification runs on the exact path.

use crate::equation::{AbelEquation, CurveFamily, EquationError};
use crate::flow::{PeriodicSolutionReport, ScanState, StabilityKind};
use crate::hypothesis::{HypothesisCertificate, Pattern, Refusal};
use crate::scalar::{parse_rational, rat_from_f64, Rat, Scalar};
use crate::trig::TrigPoly;
use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

pub const EQUATION_SCHEMA: &str = "abel-equation/1";
pub const REPORT_SCHEMA: &str = "abel-report/1";
pub const CERTIFICATE_SCHEMA: &str = "abel-certificate/1";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("JSON syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> FileError {
    FileError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

/// A real number as written in an equation file: a JSON number or an exact
/// string (`"p/q"` or a decimal). The raw JSON number is kept so files
/// round-trip without lexical changes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum RealSpec {
    Number(serde_json::Number),
    Text(String),
}

impl Default for RealSpec {
    fn default() -> Self {
        RealSpec::Number(serde_json::Number::from(0))
    }
}

impl RealSpec {
    /// Exact rational reading: integers and strings qualify; non-integer
    /// JSON numbers are treated as float-intent.
    pub fn as_exact(&self) -> Option<Rat> {
        match self {
            RealSpec::Number(n) => {
                if let Some(i) = n.as_i64() {
                    return Some(Rat::from_int(i));
                }
                if let Some(u) = n.as_u64() {
                    return rat_from_f64(u as f64);
                }
                None
            }
            RealSpec::Text(s) => parse_rational(s),
        }
    }

    pub fn as_f64(&self, field: &str) -> Result<f64, FileError> {
        match self {
            RealSpec::Number(n) => n
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| invalid(field, format!("non-finite number {n}"))),
            RealSpec::Text(s) => parse_rational(s)
                .map(|r| r.to_f64())
                .ok_or_else(|| invalid(field, format!("cannot parse real '{s}'"))),
        }
    }

    pub fn from_f64(x: f64) -> Self {
        match serde_json::Number::from_f64(x) {
            Some(n) => RealSpec::Number(n),
            None => RealSpec::Text(x.to_string()),
        }
    }
}

/// One coefficient record: constant plus parallel cos/sin harmonic arrays.
#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq)]
pub struct CoeffRecord {
    #[serde(rename = "const", default)]
    pub constant: RealSpec,
    #[serde(default)]
    pub cos: Vec<RealSpec>,
    #[serde(default)]
    pub sin: Vec<RealSpec>,
}

impl CoeffRecord {
    fn validate(&self, field: &str) -> Result<(), FileError> {
        if self.cos.len() != self.sin.len() {
            return Err(invalid(
                field,
                format!(
                    "cos and sin arrays must have equal length (harmonic degree): {} vs {}",
                    self.cos.len(),
                    self.sin.len()
                ),
            ));
        }
        Ok(())
    }

    fn to_f64_trig(&self, field: &str) -> Result<TrigPoly<f64>, FileError> {
        let c = self.constant.as_f64(&format!("{field}.const"))?;
        let cos = self
            .cos
            .iter()
            .enumerate()
            .map(|(i, v)| v.as_f64(&format!("{field}.cos[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let sin = self
            .sin
            .iter()
            .enumerate()
            .map(|(i, v)| v.as_f64(&format!("{field}.sin[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TrigPoly::from_coeffs(c, &cos, &sin))
    }

    fn to_exact_trig(&self) -> Option<TrigPoly<Rat>> {
        let c = self.constant.as_exact()?;
        let cos = self
            .cos
            .iter()
            .map(|v| v.as_exact())
            .collect::<Option<Vec<_>>>()?;
        let sin = self
            .sin
            .iter()
            .map(|v| v.as_exact())
            .collect::<Option<Vec<_>>>()?;
        Some(TrigPoly::from_coeffs(c, &cos, &sin))
    }

    /// Snapshot of a float trig polynomial (used when echoing equations).
    pub fn from_trig(tp: &TrigPoly<f64>) -> Self {
        CoeffRecord {
            constant: RealSpec::from_f64(*tp.constant_part()),
            cos: tp
                .harmonics()
                .iter()
                .map(|h| RealSpec::from_f64(h.cos))
                .collect(),
            sin: tp
                .harmonics()
                .iter()
                .map(|h| RealSpec::from_f64(h.sin))
                .collect(),
        }
    }
}

/// Optional curve family in an equation file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurvesSpec {
    pub a: CoeffRecord,
    pub b: CoeffRecord,
}

/// The equation-file schema.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EquationFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub degree: usize,
    pub coefficients: Vec<CoeffRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<CurvesSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<RealSpec>>,
}

/// A parsed equation: float equation always, exact twin when every real in
/// the file is exact, plus optional nodes and curves.
#[derive(Debug, Clone)]
pub struct ParsedEquation {
    pub file: EquationFile,
    pub float: AbelEquation<f64>,
    pub exact: Option<AbelEquation<Rat>>,
    pub nodes: Option<Vec<f64>>,
    pub nodes_exact: Option<Vec<Rat>>,
    pub curves: Option<CurveFamily<f64>>,
}

impl EquationFile {
    pub fn parse_str(text: &str) -> Result<ParsedEquation, FileError> {
        let file: EquationFile = serde_json::from_str(text)?;
        file.parse()
    }

    pub fn parse(self) -> Result<ParsedEquation, FileError> {
        if let Some(schema) = &self.schema {
            if !schema.starts_with("abel-equation/") {
                return Err(invalid("schema", format!("unknown schema '{schema}'")));
            }
        }
        if self.coefficients.len() != self.degree + 1 {
            return Err(invalid(
                "coefficients",
                format!(
                    "degree {} requires {} coefficient records, found {}",
                    self.degree,
                    self.degree + 1,
                    self.coefficients.len()
                ),
            ));
        }
        let mut float_coeffs = Vec::with_capacity(self.coefficients.len());
        let mut exact_coeffs: Option<Vec<TrigPoly<Rat>>> = Some(Vec::new());
        for (i, rec) in self.coefficients.iter().enumerate() {
            let field = format!("coefficients[{i}]");
            rec.validate(&field)?;
            float_coeffs.push(rec.to_f64_trig(&field)?);
            if let Some(list) = exact_coeffs.as_mut() {
                match rec.to_exact_trig() {
                    Some(tp) => list.push(tp),
                    None => exact_coeffs = None,
                }
            }
        }
        let float = AbelEquation::new(float_coeffs)?;
        let exact = match exact_coeffs {
            Some(coeffs) => Some(AbelEquation::new(coeffs)?),
            None => None,
        };
        let (nodes, nodes_exact) = match &self.nodes {
            Some(list) => {
                let mut vals = Vec::with_capacity(list.len());
                let mut exacts: Option<Vec<Rat>> = Some(Vec::new());
                for (i, v) in list.iter().enumerate() {
                    vals.push(v.as_f64(&format!("nodes[{i}]"))?);
                    if let Some(e) = exacts.as_mut() {
                        match v.as_exact() {
                            Some(r) => e.push(r),
                            None => exacts = None,
                        }
                    }
                }
                (Some(vals), exacts)
            }
            None => (None, None),
        };
        let curves = match &self.curves {
            Some(spec) => {
                spec.a.validate("curves.a")?;
                spec.b.validate("curves.b")?;
                Some(CurveFamily::new(
                    spec.a.to_f64_trig("curves.a")?,
                    spec.b.to_f64_trig("curves.b")?,
                ))
            }
            None => None,
        };
        Ok(ParsedEquation {
            file: self,
            float,
            exact,
            nodes,
            nodes_exact,
            curves,
        })
    }
}

/// Tool provenance echoed into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub timing_ms: u64,
}

impl Provenance {
    pub fn new(seed: u64, config: serde_json::Value, timing_ms: u64) -> Self {
        Self {
            tool: format!("abel {}", env!("CARGO_PKG_VERSION")),
            seed,
            config,
            timing_ms,
        }
    }
}

/// Per-check outcome of the bound evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: usize,
    pub isolated_count: usize,
    pub count_within_bound: bool,
    pub per_component_at_most_one: bool,
    /// Which exterior side the certified pattern excludes.
    pub excluded_exterior: ExcludedExterior,
    pub exterior_exclusion_respected: bool,
    pub satisfied: bool,
}

/// Exterior side on which periodic solutions are provably absent, decided
/// by `sgn(∫a_m)·(−1)^m·σ`: positive excludes the right ray, negative the
/// left, zero mean excludes both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcludedExterior {
    Left,
    Right,
    Both,
    /// All node values vanish identically; the exterior argument is vacuous.
    None,
}

/// Direction of the exterior exclusion for a certified pattern.
pub fn excluded_exterior(
    pattern: Pattern,
    all_nodes_zero: bool,
    degree: usize,
    leading_mean: f64,
) -> ExcludedExterior {
    if all_nodes_zero {
        return ExcludedExterior::None;
    }
    let mean_sign = if leading_mean.abs() <= 1e-12 {
        0
    } else if leading_mean > 0.0 {
        1
    } else {
        -1
    };
    if mean_sign == 0 {
        return ExcludedExterior::Both;
    }
    let parity = if degree % 2 == 0 { 1 } else { -1 };
    let delta = mean_sign * parity * i32::from(pattern.sigma());
    if delta > 0 {
        ExcludedExterior::Right
    } else {
        ExcludedExterior::Left
    }
}

/// Check the certified bound against the located solutions: total count,
/// at most one isolated solution per interior component, and emptiness of
/// the excluded exterior ray.
pub fn evaluate_bound(
    cert: &HypothesisCertificate,
    report: &PeriodicSolutionReport,
    leading_mean: f64,
) -> BoundCheck {
    use crate::flow::ComponentTag;
    let bound = cert.bound;
    let isolated_count = report.solutions.len();
    let count_within_bound = isolated_count <= bound;
    let mut interior = vec![0usize; cert.nodes.len().saturating_sub(1)];
    let mut left = 0usize;
    let mut right = 0usize;
    for s in &report.solutions {
        match s.component {
            Some(ComponentTag::Interior(k)) => {
                if k < interior.len() {
                    interior[k] += 1;
                }
            }
            Some(ComponentTag::ExteriorLeft) => left += 1,
            Some(ComponentTag::ExteriorRight) => right += 1,
            _ => {}
        }
    }
    let per_component_at_most_one = interior.iter().all(|c| *c <= 1);
    let excluded = excluded_exterior(
        cert.pattern,
        cert.all_nodes_identically_zero,
        cert.bound,
        leading_mean,
    );
    let exterior_exclusion_respected = match excluded {
        ExcludedExterior::Left => left == 0,
        ExcludedExterior::Right => right == 0,
        ExcludedExterior::Both => left == 0 && right == 0,
        ExcludedExterior::None => true,
    };
    BoundCheck {
        bound,
        isolated_count,
        count_within_bound,
        per_component_at_most_one,
        excluded_exterior: excluded,
        exterior_exclusion_respected,
        satisfied: count_within_bound && per_component_at_most_one && exterior_exclusion_respected,
    }
}

/// Top-level report written by the `find` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<HypothesisCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<Refusal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<PeriodicSolutionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_satisfied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_check: Option<BoundCheck>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(provenance: Provenance) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            certificate: None,
            refusal: None,
            solutions: None,
            bound_satisfied: None,
            bound_check: None,
            provenance,
        }
    }
}

/// Write the displacement map: header `x0,displacement,dH,outcome`, one row
/// per scan sample in grid order. Escaped rows carry empty displacement and
/// dH columns; samples whose integration failed are marked `failed`.
pub fn write_displacement_csv<W: Write>(
    out: &mut W,
    report: &PeriodicSolutionReport,
) -> std::io::Result<()> {
    writeln!(out, "x0,displacement,dH,outcome")?;
    for s in &report.samples {
        match &s.state {
            ScanState::Returned(d) => writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},returned",
                s.x0,
                d.x1 - s.x0,
                d.dh
            )?,
            ScanState::Escaped { .. } => writeln!(out, "{:.17e},,,escaped", s.x0)?,
            ScanState::Failed => writeln!(out, "{:.17e},,,failed", s.x0)?,
        }
    }
    Ok(())
}

/// Human-readable one-line summary of a located solution (used by examples
/// and the CLI's stderr notes).
pub fn solution_summary(s: &crate::flow::PeriodicSolution) -> String {
    let kind = match s.kind {
        StabilityKind::HyperbolicStable => "stable",
        StabilityKind::HyperbolicUnstable => "unstable",
        StabilityKind::Nonhyperbolic => "nonhyperbolic",
    };
    format!(
        "x0 = {:+.12}  {kind}  log dH = {:+.6e}",
        s.x0, s.log_dh
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    const SAMPLE: &str = r#"{
        "schema": "abel-equation/1",
        "degree": 2,
        "coefficients": [
            {"const": "1/2", "cos": [1], "sin": [0]},
            {"const": -1, "cos": [], "sin": []},
            {"const": 1, "cos": ["3/4"], "sin": ["-0.25"]}
        ],
        "nodes": [-1, "1/2"]
    }"#;

    #[test]
    fn parses_exact_path() {
        let parsed = EquationFile::parse_str(SAMPLE).unwrap();
        let exact = parsed.exact.expect("all reals exact");
        assert_eq!(exact.degree(), 2);
        assert_eq!(
            exact.coefficient(2).harmonics()[0].sin,
            rat(-1, 4)
        );
        assert_eq!(parsed.nodes_exact.unwrap()[1], rat(1, 2));
    }

    #[test]
    fn float_intent_disables_exact_path() {
        let text = SAMPLE.replace("\"1/2\"", "0.5");
        let parsed = EquationFile::parse_str(&text).unwrap();
        assert!(parsed.exact.is_none());
        assert_eq!(parsed.float.degree(), 2);
    }

    #[test]
    fn arity_diagnostic_names_the_field() {
        let text = r#"{"degree": 3, "coefficients": [{"const": 1}, {"const": 1}, {"const": 1}]}"#;
        let err = EquationFile::parse_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("coefficients"), "{msg}");
        assert!(msg.contains("4"), "{msg}");
    }

    #[test]
    fn harmonic_arity_diagnostic() {
        let text = r#"{"degree": 1, "coefficients": [
            {"const": 1, "cos": [1, 2], "sin": [3]},
            {"const": 1}
        ]}"#;
        let err = EquationFile::parse_str(text).unwrap_err();
        assert!(err.to_string().contains("coefficients[0]"));
    }

    #[test]
    fn roundtrip_is_field_identical() {
        let parsed = EquationFile::parse_str(SAMPLE).unwrap();
        let back = serde_json::to_string(&parsed.file).unwrap();
        let a: serde_json::Value = serde_json::from_str(SAMPLE).unwrap();
        let b: serde_json::Value = serde_json::from_str(&back).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exclusion_direction_matches_worked_quartic() {
        // σ = +1, m even, positive mean: the right ray is excluded, which is
        // exactly why the solution at -4 on the left is consistent.
        let d = excluded_exterior(Pattern::AlternatingStartNonpos, false, 4, 1.0);
        assert_eq!(d, ExcludedExterior::Right);
        let d = excluded_exterior(Pattern::AlternatingStartNonneg, false, 3, 1.0);
        assert_eq!(d, ExcludedExterior::Right);
        let d = excluded_exterior(Pattern::AlternatingStartNonneg, false, 3, 0.0);
        assert_eq!(d, ExcludedExterior::Both);
    }
}
