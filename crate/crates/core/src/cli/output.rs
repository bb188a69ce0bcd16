//! CSV tables and JSON summaries, written atomically (temp file + rename).

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::protocols::{argmax_by, Scenario, SweepAxis, SweepRow};

use super::CliError;

/// One curve: a sweep of one configuration along one axis.
#[derive(Debug, Clone)]
pub struct Series {
    pub scenario: Scenario,
    pub ancilla_dim: usize,
    pub n_ancillas: usize,
    pub theta_over_pi: f64,
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
}

impl Series {
    pub fn best_row(&self) -> Option<usize> {
        argmax_by(&self.rows, |r| r.eta_acc).or_else(|| argmax_by(&self.rows, |r| r.eta_joint))
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Formats with 12 significant digits: plain decimal for moderate exponents,
/// scientific otherwise; `inf`, `-inf`, `nan` for non-finite values.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Column layout shared by all series of one table.
fn header(axis_column: &str, with_axis_fixed: (bool, bool)) -> Vec<String> {
    let mut h = vec!["scenario".to_string(), "ancilla_dim".to_string()];
    if with_axis_fixed.0 {
        h.push("n_ancillas".into());
    }
    if with_axis_fixed.1 {
        h.push("theta_over_pi".into());
    }
    h.push(axis_column.into());
    for c in ["eta_joint", "eta_acc", "det_qfim", "trace_qfim", "singular", "is_max_eta_acc", "error"] {
        h.push(c.into());
    }
    h
}

/// Renders all series as one CSV document (header row, LF line endings).
pub fn render_csv(series: &[Series]) -> Result<Vec<u8>, CliError> {
    let axis = series.first().map(|s| s.axis).unwrap_or(SweepAxis::Collision(1));
    if series.iter().any(|s| s.axis != axis) {
        return Err(CliError::Config("all series of one table must share the sweep axis".into()));
    }
    let show_n = axis != SweepAxis::AncillaCount;
    let show_theta = axis != SweepAxis::Theta;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header(&axis.column(), (show_n, show_theta)))?;
    for s in series {
        let best = s.best_row();
        for (i, r) in s.rows.iter().enumerate() {
            let mut rec = vec![s.scenario.name().to_string(), s.ancilla_dim.to_string()];
            if show_n {
                rec.push(s.n_ancillas.to_string());
            }
            if show_theta {
                rec.push(format_number(s.theta_over_pi));
            }
            rec.push(format_number(r.axis_value));
            for v in [r.eta_joint, r.eta_acc, r.det_qfim, r.trace_qfim] {
                rec.push(format_number(v));
            }
            rec.push(r.singular.to_string());
            rec.push((best == Some(i)).to_string());
            rec.push(r.error.clone().unwrap_or_default());
            w.write_record(&rec)?;
        }
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Who produced an output file, from what, and when.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub config_path: Option<String>,
    pub scenario: String,
    pub output_path: String,
    pub seed: u64,
    /// RFC 3339 timestamp.
    pub emitted_at: String,
}

impl RunManifest {
    pub fn new(config_path: Option<&Path>, scenario: &str, output_path: &Path, seed: u64) -> Self {
        Self {
            config_path: config_path.map(|p| p.display().to_string()),
            scenario: scenario.into(),
            output_path: output_path.display().to_string(),
            seed,
            emitted_at: chrono::Utc::now().to_rfc3339(),
        }
    }
}

/// Optimum of one series: the row with the largest η_acc (largest η_joint if
/// η_acc is −∞ everywhere).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimumSummary {
    pub scenario: String,
    pub ancilla_dim: usize,
    pub n_ancillas: usize,
    pub theta_over_pi: f64,
    pub axis: String,
    pub axis_value: f64,
    pub eta_joint: f64,
    /// `null` encodes −∞ (singular QFIM).
    pub eta_acc: Option<f64>,
    pub det_qfim: f64,
    pub trace_qfim: f64,
    pub singular: bool,
    /// Row-major N×N quantum Fisher information matrix.
    pub qfim: Vec<Vec<f64>>,
    pub failed_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub manifest: RunManifest,
    /// Probes relax through their thermalization channel after each of their collisions.
    pub probe_rethermalization: String,
    pub optima: Vec<OptimumSummary>,
}

impl Summary {
    pub fn new(manifest: RunManifest, series: &[Series]) -> Self {
        let optima = series
            .iter()
            .filter_map(|s| {
                let i = s.best_row()?;
                let r = &s.rows[i];
                let q = r.qfim.as_ref()?;
                Some(OptimumSummary {
                    scenario: s.scenario.name().into(),
                    ancilla_dim: s.ancilla_dim,
                    n_ancillas: s.n_ancillas,
                    theta_over_pi: s.theta_over_pi,
                    axis: s.axis.name(),
                    axis_value: r.axis_value,
                    eta_joint: r.eta_joint,
                    eta_acc: r.eta_acc.is_finite().then_some(r.eta_acc),
                    det_qfim: r.det_qfim,
                    trace_qfim: r.trace_qfim,
                    singular: r.singular,
                    qfim: (0..q.nrows()).map(|a| (0..q.ncols()).map(|b| q[(a, b)]).collect()).collect(),
                    failed_points: s.failures(),
                })
            })
            .collect();
        Self { manifest, probe_rethermalization: "after every collision".into(), optima }
    }

    /// Structural checks beyond what the serde schema enforces.
    pub fn validate(&self) -> Result<(), String> {
        for (k, o) in self.optima.iter().enumerate() {
            let n = o.qfim.len();
            if n == 0 || o.qfim.iter().any(|row| row.len() != n) {
                return Err(format!("optima[{k}].qfim is not square"));
            }
            for a in 0..n {
                for b in 0..n {
                    let (x, y) = (o.qfim[a][b], o.qfim[b][a]);
                    if !x.is_finite() || (x - y).abs() > 1e-9 * (1.0 + x.abs()) {
                        return Err(format!("optima[{k}].qfim is not a finite symmetric matrix"));
                    }
                }
            }
            if !(o.eta_joint >= 0.0) || !o.det_qfim.is_finite() || !o.trace_qfim.is_finite() {
                return Err(format!("optima[{k}] has invalid figures of merit"));
            }
        }
        Ok(())
    }
}

/// `x.csv` → `x.json`
pub fn summary_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(bytes).map_err(|e| CliError::Io(e.to_string()))?;
    tmp.as_file().sync_all().map_err(|e| CliError::Io(e.to_string()))?;
    tmp.persist(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Serializes, re-reads through the schema, and writes the summary atomically.
pub fn write_summary(path: &Path, summary: &Summary) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(summary).map_err(|e| CliError::Io(e.to_string()))?;
    let back: Summary = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("summary schema: {e}")))?;
    back.validate().map_err(|e| CliError::Io(format!("summary schema: {e}")))?;
    if &back != summary {
        return Err(CliError::Io("summary did not round-trip".into()));
    }
    write_atomic(path, format!("{text}\n").as_bytes())
}
