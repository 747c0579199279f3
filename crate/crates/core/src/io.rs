//! File formats: chart input, jet and form exports, report rendering.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::EstimateReport;
use crate::chart::{build_chart, BSource, ChartOptions, GeodesicChart, Grading};
use crate::codazzi::FundamentalForm;
use crate::error::{Error, Result};
use crate::fixtures::{fixture_by_id, SurfaceFixture};
use crate::jet::{BoundaryJet, Field};
use crate::metric::AnalyticMetric;

/// Chart input file. Sampled charts give `B` either inline (`B_values`) or in
/// a little-endian `f64` sidecar (`B_file`, relative to the JSON file).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChartFile {
    Analytic {
        analytic: String,
        #[serde(default)]
        params: Value,
        #[serde(default)]
        n_s: Option<usize>,
        #[serde(default)]
        n_t: Option<usize>,
    },
    Sampled {
        period: f64,
        t_max: f64,
        n_s: usize,
        n_t: usize,
        #[serde(default = "uniform")]
        grading: Grading,
        #[serde(rename = "B_values", default)]
        b_values: Option<Vec<f64>>,
        #[serde(rename = "B_file", default)]
        b_file: Option<String>,
        #[serde(default)]
        tolerance: Option<f64>,
    },
}

fn uniform() -> Grading {
    Grading::Uniform
}

/// Default analytic chart resolution.
pub const DEFAULT_CHART_RESOLUTION: (usize, usize) = (64, 65);

#[derive(Clone, Debug)]
pub struct LoadedChart {
    pub chart: GeodesicChart,
    /// Set for fixture ids, which carry exact fields.
    pub fixture: Option<SurfaceFixture>,
    pub id: String,
}

fn num(params: &Value, key: &str, default: f64) -> f64 {
    params.get(key).and_then(Value::as_f64).unwrap_or(default)
}

/// Resolve an analytic id: fixture ids first, then bare metrics (`flat`, `skewed`).
pub fn analytic_chart(id: &str, params: &Value, n_s: usize, n_t: usize) -> Result<LoadedChart> {
    match id {
        "flat" => {
            let metric = AnalyticMetric::Flat {
                period: num(params, "period", 2.0 * std::f64::consts::PI),
            };
            Ok(LoadedChart {
                chart: GeodesicChart::analytic(metric, num(params, "t_max", 1.0), n_s, n_t)?,
                fixture: None,
                id: id.into(),
            })
        }
        "skewed" => {
            let metric = AnalyticMetric::Skewed {
                amp: num(params, "amp", 0.5),
            };
            Ok(LoadedChart {
                chart: GeodesicChart::analytic(metric, num(params, "t_max", 1.0), n_s, n_t)?,
                fixture: None,
                id: id.into(),
            })
        }
        _ => {
            let fx = fixture_by_id(id, params)?;
            Ok(LoadedChart {
                chart: fx.chart(n_s, n_t)?,
                fixture: Some(fx),
                id: id.into(),
            })
        }
    }
}

pub fn parse_chart(text: &str, base_dir: &Path) -> Result<LoadedChart> {
    let file: ChartFile = serde_json::from_str(text).map_err(|e| Error::Format(format!("chart file: {e}")))?;
    chart_from_file(&file, base_dir)
}

pub fn chart_from_file(file: &ChartFile, base_dir: &Path) -> Result<LoadedChart> {
    match file {
        ChartFile::Analytic {
            analytic,
            params,
            n_s,
            n_t,
        } => analytic_chart(
            analytic,
            params,
            n_s.unwrap_or(DEFAULT_CHART_RESOLUTION.0),
            n_t.unwrap_or(DEFAULT_CHART_RESOLUTION.1),
        ),
        ChartFile::Sampled {
            period,
            t_max,
            n_s,
            n_t,
            grading,
            b_values,
            b_file,
            tolerance,
        } => {
            let values = match (b_values, b_file) {
                (Some(v), None) => v.clone(),
                (None, Some(f)) => {
                    let bytes = std::fs::read(base_dir.join(f))
                        .map_err(|e| Error::Format(format!("reading B sidecar `{f}`: {e}")))?;
                    read_f64_le(&bytes)?
                }
                _ => return Err(Error::Format("give exactly one of B_values and B_file".into())),
            };
            let opts = ChartOptions {
                grading: Some(*grading),
                tolerance: *tolerance,
                ..Default::default()
            };
            Ok(LoadedChart {
                chart: build_chart(BSource::Grid(values), *period, *t_max, (*n_s, *n_t), &opts)?,
                fixture: None,
                id: "sampled".into(),
            })
        }
    }
}

pub fn load_chart(path: &Path) -> Result<LoadedChart> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    parse_chart(&text, path.parent().unwrap_or(Path::new(".")))
}

pub fn read_f64_le(bytes: &[u8]) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::Format(format!(
            "binary length {} is not a multiple of 8",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

pub fn write_f64_le(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Jet CSV: `m,field,s_index,value` with `value = ∂_t^m field(s_i, 0)`.
pub fn jet_csv(jet: &BoundaryJet, h: &[Vec<f64>]) -> String {
    let mut out = String::from("m,field,s_index,value\n");
    for m in 0..=jet.order + 1 {
        for field in [Field::L, Field::M, Field::N, Field::H] {
            let values = match field {
                Field::H => h.get(m).cloned(),
                f => jet.derivative(f, m),
            };
            if let Some(v) = values {
                for (i, x) in v.iter().enumerate() {
                    let _ = writeln!(out, "{m},{},{i},{x:e}", field.name());
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetJson {
    pub order: usize,
    pub period: f64,
    pub n_s: usize,
    /// `fields[name][m][i] = ∂_t^m field(s_i, 0)`.
    pub l: Vec<Vec<f64>>,
    pub m: Vec<Vec<f64>>,
    pub n: Vec<Vec<f64>>,
    pub h: Vec<Vec<f64>>,
}

pub fn jet_json(jet: &BoundaryJet, h: &[Vec<f64>]) -> JetJson {
    let all = |f: Field, len: usize| (0..len).filter_map(|m| jet.derivative(f, m)).collect();
    JetJson {
        order: jet.order,
        period: jet.period,
        n_s: jet.n_s,
        l: all(Field::L, jet.order + 2),
        m: all(Field::M, jet.order + 1),
        n: all(Field::N, jet.order + 1),
        h: h.to_vec(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormHeader {
    pub fields: Vec<String>,
    pub n_s: usize,
    pub n_t: usize,
    pub period: f64,
    pub t_max: f64,
    /// The `t` nodes (they need not be uniform).
    pub t: Vec<f64>,
}

pub fn form_header(form: &FundamentalForm) -> FormHeader {
    FormHeader {
        fields: ["L", "M", "N", "H"].map(String::from).to_vec(),
        n_s: form.n_s,
        n_t: form.n_t(),
        period: form.period,
        t_max: *form.t.last().unwrap_or(&0.0),
        t: form.t.clone(),
    }
}

/// Fields `L, M, N, H` in order, each row-major `(n_s × n_t)`, little-endian `f64`.
pub fn form_binary(form: &FundamentalForm) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 * 8 * form.l.len());
    for f in [&form.l, &form.m, &form.n, &form.h] {
        out.extend(write_f64_le(f));
    }
    out
}

pub fn read_form(header: &FormHeader, bytes: &[u8]) -> Result<FundamentalForm> {
    let v = read_f64_le(bytes)?;
    let len = header.n_s * header.n_t;
    if v.len() != 4 * len || header.t.len() != header.n_t {
        return Err(Error::Format(format!(
            "form binary holds {} values; header implies {}",
            v.len(),
            4 * len
        )));
    }
    Ok(FundamentalForm {
        period: header.period,
        n_s: header.n_s,
        t: header.t.clone(),
        l: v[..len].to_vec(),
        m: v[len..2 * len].to_vec(),
        n: v[2 * len..3 * len].to_vec(),
        h: v[3 * len..].to_vec(),
    })
}

pub fn form_csv(form: &FundamentalForm) -> String {
    let mut out = String::from("s_index,t,L,M,N,H\n");
    for i in 0..form.n_s {
        for (j, t) in form.t.iter().enumerate() {
            let k = form.idx(i, j);
            let _ = writeln!(
                out,
                "{i},{t:e},{:e},{:e},{:e},{:e}",
                form.l[k], form.m[k], form.n[k], form.h[k]
            );
        }
    }
    out
}

/// Deterministic pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Markdown table of an estimate report.
pub fn report_markdown(report: &EstimateReport) -> String {
    let mut out = format!(
        "### {}\n\n| check | inequality | constant | drift | violations | result |\n|---|---|---|---|---|---|\n",
        report.fixture
    );
    for e in &report.entries {
        let _ = writeln!(
            out,
            "| {} | `{}` | {:.4e} | {:.3} | {} | {} |",
            e.id,
            e.inequality.replace('|', "\\|"),
            e.constant,
            e.drift,
            e.violations,
            if e.pass { "pass" } else { "FAIL" }
        );
    }
    out
}

/// Refinement histories of every entry as normalized polylines, one panel per entry.
pub fn report_svg(report: &EstimateReport) -> String {
    let (w, panel_h, pad) = (640.0, 90.0, 24.0);
    let height = pad + panel_h * report.entries.len() as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{height}\" font-family=\"monospace\" font-size=\"11\">\n"
    );
    let _ = writeln!(out, "<text x=\"8\" y=\"16\">{}</text>", report.fixture);
    for (e_idx, e) in report.entries.iter().enumerate() {
        let top = pad + panel_h * e_idx as f64;
        let vals: Vec<f64> = e.history.iter().map(|h| h.constant).collect();
        let max = vals.iter().copied().filter(|v| v.is_finite()).fold(0.0f64, f64::max);
        let colour = if e.pass { "#2a7" } else { "#c33" };
        let _ = writeln!(
            out,
            "<text x=\"8\" y=\"{:.1}\">{} C={:.3e} drift={:.3}</text>",
            top + 14.0,
            e.id,
            e.constant,
            e.drift
        );
        let x0 = 220.0;
        let span = w - x0 - 20.0;
        let n = vals.len().max(2) - 1;
        let points: Vec<String> = vals
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let frac = if max > 0.0 && v.is_finite() { v / max } else { 0.0 };
                format!(
                    "{:.1},{:.1}",
                    x0 + span * k as f64 / n as f64,
                    top + panel_h - 16.0 - frac * (panel_h - 30.0)
                )
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\" points=\"{}\"/>",
            points.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}
