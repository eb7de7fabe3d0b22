//! On-disk tables: curve CSV, per-network metrics CSV, fit reports and the
//! batch summary. Every CSV starts with a `# lexnet <kind> v<N>` line.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growthcurve::{CurveSample, GrowthCurve};
use crate::model::{FitParams, ModelParams};

pub const CURVE_VERSION: &str = "# lexnet curve v1";
pub const METRICS_VERSION: &str = "# lexnet metrics v1";
pub const FIT_CURVE_VERSION: &str = "# lexnet fit-curve v1";
pub const REPORT_VERSION: &str = "# lexnet report v1";

const CURVE_HEADER: [&str; 5] = ["text_id", "mode", "N", "mean_L", "realizations"];

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse { line, message: e.to_string() }
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<output>", e)
}

fn write_rows<W: Write, R: Serialize>(mut out: W, version: &str, rows: &[R]) -> Result<()> {
    writeln!(out, "{version}").map_err(io_err)?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    text_id: String,
    mode: String,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "mean_L")]
    mean_l: f64,
    realizations: usize,
}

pub fn write_curve<W: Write>(curve: &GrowthCurve, out: W) -> Result<()> {
    let rows: Vec<CurveRow> = curve
        .samples
        .iter()
        .map(|s| CurveRow {
            text_id: curve.text_id.clone(),
            mode: curve.mode.as_str().to_string(),
            n: s.n,
            mean_l: s.mean_l,
            realizations: s.realizations,
        })
        .collect();
    if rows.is_empty() {
        let mut out = out;
        writeln!(out, "{CURVE_VERSION}\n{}", CURVE_HEADER.join(",")).map_err(io_err)?;
        return Ok(());
    }
    write_rows(out, CURVE_VERSION, &rows)
}

pub fn curve_to_string(curve: &GrowthCurve) -> String {
    let mut buf = Vec::new();
    write_curve(curve, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Parses a curve CSV. The version line is required; rows must share one
/// text id and mode and have strictly increasing N. Standard deviations are
/// not stored and read back as 0.
pub fn parse_curve(text: &str) -> Result<GrowthCurve> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.trim_end() == CURVE_VERSION => {}
        Some(l) if l.starts_with("# lexnet curve") => {
            return Err(Error::Parse { line: 1, message: format!("unsupported curve version {:?}", l.trim_end()) })
        }
        _ => return Err(Error::Parse { line: 1, message: format!("missing {CURVE_VERSION:?} line") }),
    }
    let body = text.split_once('\n').map_or("", |(_, rest)| rest);
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != CURVE_HEADER {
        return Err(Error::Parse { line: 2, message: format!("expected header {}", CURVE_HEADER.join(",")) });
    }
    let mut curve: Option<GrowthCurve> = None;
    for (i, row) in reader.deserialize::<CurveRow>().enumerate() {
        let line = i + 3;
        let row = row.map_err(|e| Error::Parse { line, message: e.to_string() })?;
        let mode = row.mode.parse().map_err(|e: Error| Error::Parse { line, message: e.to_string() })?;
        if !row.mean_l.is_finite() {
            return Err(Error::Parse { line, message: "mean_L is not finite".into() });
        }
        let c = curve.get_or_insert_with(|| GrowthCurve { text_id: row.text_id.clone(), mode, samples: Vec::new() });
        if c.text_id != row.text_id || c.mode != mode {
            return Err(Error::Parse { line, message: "rows mix text ids or modes".into() });
        }
        if c.samples.last().is_some_and(|s| s.n >= row.n) {
            return Err(Error::Parse { line, message: format!("N {} not increasing", row.n) });
        }
        c.samples.push(CurveSample { n: row.n, mean_l: row.mean_l, realizations: row.realizations, std_l: 0.0 });
    }
    curve.ok_or_else(|| Error::CurveTooShort("curve file has no rows".into()))
}

/// One analysed network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub text_id: String,
    pub mode: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "E")]
    pub e: usize,
    pub aspl: f64,
    pub max_degree: usize,
    pub gamma_deg: Option<f64>,
    pub zipf_alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
}

pub fn write_metrics<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    write_rows(out, METRICS_VERSION, rows)
}

/// JSON fit report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub text_id: String,
    pub mode: String,
    pub n_samples: usize,
    #[serde(flatten)]
    pub fit: FitParams,
}

#[derive(Debug, Serialize)]
struct FitCurveRow {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "mean_L")]
    mean_l: f64,
    #[serde(rename = "L_fit")]
    l_fit: f64,
}

/// (N, mean_L, L_fit) for plotting a fit against its data.
pub fn write_fit_curve<W: Write>(curve: &GrowthCurve, params: &ModelParams, out: W) -> Result<()> {
    let rows = curve
        .samples
        .iter()
        .map(|s| Ok(FitCurveRow { n: s.n, mean_l: s.mean_l, l_fit: params.l_fit(s.n as f64)? }))
        .collect::<Result<Vec<_>>>()?;
    write_rows(out, FIT_CURVE_VERSION, &rows)
}

/// One summary line per (text, mode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub text_id: String,
    pub mode: String,
    #[serde(rename = "N_tot")]
    pub n_tot: usize,
    #[serde(rename = "L_N_tot")]
    pub l_n_tot: f64,
    #[serde(rename = "L_max")]
    pub l_max: f64,
    #[serde(rename = "argmax_N")]
    pub argmax_n: usize,
    /// Empty when the fit failed.
    pub asymptote: Option<f64>,
}

impl ReportRow {
    pub fn from_curve(curve: &GrowthCurve, fit: Option<&FitParams>) -> Option<Self> {
        let last = curve.last()?;
        let max = curve.max()?;
        Some(Self {
            text_id: curve.text_id.clone(),
            mode: curve.mode.as_str().to_string(),
            n_tot: last.n,
            l_n_tot: last.mean_l,
            l_max: max.mean_l,
            argmax_n: max.n,
            asymptote: fit.map(|f| f.asymptote),
        })
    }
}

pub fn write_report<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    write_rows(out, REPORT_VERSION, rows)
}
