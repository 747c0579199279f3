use std::fmt::Write as _;
use std::path::PathBuf;

use ansl::analysis::{drift, estimate_suite, SuiteConfig, DEFAULT_ALPHA, STABILITY_DRIFT};
use ansl::chart::{validate_an, AnTolerances, CheckStatus, ValidationReport};
use ansl::codazzi::{codazzi_residuals, default_t0, integrate, taylor_startoff, IntegrateOptions};
use ansl::degenerate::{estimate_ratio, solve_model, truncation_sensitivity, NormKind};
use ansl::io::{self, ChartFile, LoadedChart};
use ansl::jet::{jet_recursion, mean_curvature_jet};
use ansl::{Error, GeodesicChart};
use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;

use crate::config::{ChartRef, FormFormat, RunConfig};
use crate::output::{OutputDir, SUMMARY_FILE};

pub const DEFAULT_JET_ORDER: usize = 3;
pub const DEFAULT_STEPS: usize = 400;
pub const DEFAULT_MIN_ORDER: f64 = 1.9;
/// Hölder exponent for the degenerate study.
pub const DEFAULT_DEGENERATE_ALPHA: f64 = 0.5;

fn chart_file(cfg: &RunConfig) -> Result<(ChartFile, PathBuf)> {
    match cfg.chart.as_ref().context("config has no `chart`")? {
        ChartRef::Inline(f) => Ok((f.clone(), cfg.base_dir.clone())),
        ChartRef::Path(p) => {
            let path = cfg.resolve(p);
            let text =
                std::fs::read_to_string(&path).with_context(|| format!("cannot read chart {}", path.display()))?;
            let file =
                serde_json::from_str(&text).with_context(|| format!("chart {} does not parse", path.display()))?;
            Ok((file, path.parent().map(PathBuf::from).unwrap_or_default()))
        }
    }
}

/// Chart at `n_s` s-nodes: analytic charts are rebuilt, sampled charts must already match.
fn chart_at(file: &ChartFile, base: &std::path::Path, n_s: Option<usize>) -> ansl::Result<LoadedChart> {
    match (file, n_s) {
        (
            ChartFile::Analytic {
                analytic, params, n_t, ..
            },
            Some(n),
        ) => io::analytic_chart(analytic, params, n, n_t.unwrap_or(io::DEFAULT_CHART_RESOLUTION.1)),
        (_, n) => {
            let c = io::chart_from_file(file, base)?;
            match n {
                Some(n) if n != c.chart.n_s() => Err(Error::BadParameters(format!(
                    "sampled chart has {} s-nodes; resolution asks for {n}",
                    c.chart.n_s()
                ))),
                _ => Ok(c),
            }
        }
    }
}

fn validation_markdown(r: &ValidationReport) -> String {
    let mut out = String::from("| check | status | value | detail |\n|---|---|---|---|\n");
    for e in &r.entries {
        let status = match e.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Warn => "warn",
            CheckStatus::NotApplicable => "n/a",
        };
        let value = e.value.map(|v| format!("{v:.4e}")).unwrap_or_default();
        let _ = writeln!(out, "| {} | {status} | {value} | {} |", e.name, e.detail);
    }
    out
}

pub fn validate(cfg: &RunConfig, out: &mut OutputDir) -> Result<bool> {
    let (file, base) = chart_file(cfg)?;
    let loaded = chart_at(&file, &base, None)?;
    let defaults = AnTolerances::default();
    let tol = AnTolerances {
        boundary_k: cfg.tolerances.boundary_k,
        k_t_lower: cfg.tolerances.k_t_lower,
        total_curvature: cfg.tolerances.total_curvature.unwrap_or(defaults.total_curvature),
    };
    let report = validate_an(&loaded.chart, &tol)?;
    out.write_json("validation.json", &report)?;
    let md = validation_markdown(&report);
    print!("{md}");
    out.write("validation.md", format!("### validate: {}\n\n{md}", loaded.id))?;
    Ok(report.passed())
}

pub fn jet(cfg: &RunConfig, out: &mut OutputDir) -> Result<bool> {
    let (file, base) = chart_file(cfg)?;
    let chart = chart_at(&file, &base, None)?.chart;
    let jet = jet_recursion(&chart, cfg.jet_order.unwrap_or(DEFAULT_JET_ORDER))?;
    let h = mean_curvature_jet(&jet, &chart)?;
    out.write("jet.csv", io::jet_csv(&jet, &h))?;
    out.write_json("jet.json", &io::jet_json(&jet, &h))?;
    println!("jet of order {} on {} s-nodes", jet.order, jet.n_s);
    Ok(true)
}

#[derive(Serialize)]
struct IntegrateSummary {
    chart: String,
    n_s: usize,
    steps: usize,
    jet_order: usize,
    t0: f64,
    t_end: f64,
    startoff_truncation: f64,
    max_gauss_residual: f64,
    max_gc1: f64,
    max_gc2: f64,
}

fn integrate_chart(cfg: &RunConfig) -> Result<(GeodesicChart, String, usize)> {
    let (file, base) = chart_file(cfg)?;
    let (n_s, steps) = match cfg.resolutions.last() {
        Some(l) => (Some(l.n_s), l.steps),
        None => (None, DEFAULT_STEPS),
    };
    let loaded = chart_at(&file, &base, n_s)?;
    Ok((loaded.chart, loaded.id, steps))
}

pub fn integrate_cmd(cfg: &RunConfig, out: &mut OutputDir) -> Result<bool> {
    let (chart, id, steps) = integrate_chart(cfg)?;
    let order = cfg.jet_order.unwrap_or(4);
    let jet = jet_recursion(&chart, order)?;
    let t0 = cfg.t0.unwrap_or_else(|| default_t0(&chart).max(1e-2));
    let t_end = cfg.t_end.unwrap_or_else(|| chart.t_max());
    let start = taylor_startoff(&jet, t0)?;
    let mut opts = IntegrateOptions::default();
    if let Some(cap) = cfg.tolerances.gauss_cap {
        opts.gauss_cap = cap;
    }
    let mut res = integrate(&chart, &start, t_end, steps, &opts)?;
    res.form.update_h(&chart)?;
    let cod = codazzi_residuals(&res.form, &chart)?;
    let summary = IntegrateSummary {
        chart: id,
        n_s: res.form.n_s,
        steps,
        jet_order: order,
        t0,
        t_end,
        startoff_truncation: start.truncation,
        max_gauss_residual: res.max_gauss_residual,
        max_gc1: cod.max_gc1,
        max_gc2: cod.max_gc2,
    };
    match cfg.form_format {
        FormFormat::Binary => {
            out.write("form.bin", io::form_binary(&res.form))?;
            out.write_json("form.json", &io::form_header(&res.form))?;
        }
        FormFormat::Csv => out.write("form.csv", io::form_csv(&res.form))?,
    }
    out.write_json("integrate.json", &summary)?;
    let md = format!(
        "### integrate: {}\n\n| n_s | steps | t0 | t_end | Gauss residual | GC1 | GC2 |\n|---|---|---|---|---|---|---|\n| {} | {} | {:.3e} | {:.3} | {:.3e} | {:.3e} | {:.3e} |\n",
        summary.chart, summary.n_s, steps, t0, t_end, summary.max_gauss_residual, summary.max_gc1, summary.max_gc2
    );
    print!("{md}");
    out.write("integrate.md", md)?;
    Ok(true)
}

pub fn verify(cfg: &RunConfig, out: &mut OutputDir) -> Result<bool> {
    let (file, base) = chart_file(cfg)?;
    let levels = cfg.require_resolutions(3)?.to_vec();
    let defaults = SuiteConfig::default();
    let suite = SuiteConfig {
        levels,
        t_end: cfg.t_end.unwrap_or(defaults.t_end),
        t0: cfg.t0.or(defaults.t0),
        jet_order: cfg.jet_order.unwrap_or(defaults.jet_order),
        alpha: cfg.alpha.unwrap_or(DEFAULT_ALPHA),
        delta: cfg.delta.unwrap_or(defaults.delta),
        control: cfg.control,
    };
    let name = match &file {
        ChartFile::Analytic { analytic, .. } => analytic.clone(),
        ChartFile::Sampled { .. } => "sampled".to_string(),
    };
    let report = estimate_suite(&name, |n_s| chart_at(&file, &base, Some(n_s)).map(|c| c.chart), &suite)?;
    out.write_json("estimates.json", &report)?;
    let md = io::report_markdown(&report);
    print!("{md}");
    out.write("estimates.md", &md)?;
    if cfg.plots {
        out.write("estimates.svg", io::report_svg(&report))?;
    }
    Ok(report.passed())
}

#[derive(Serialize)]
struct DegenerateRow {
    n_s: usize,
    n_tau: usize,
    max_error: Option<f64>,
    observed_order: Option<f64>,
    lp2_ratio: f64,
    holder_ratio: f64,
}

#[derive(Serialize)]
struct DegenerateStudy {
    a: f64,
    alpha: f64,
    rows: Vec<DegenerateRow>,
    lp2_drift: f64,
    holder_drift: f64,
    min_order: Option<f64>,
    required_order: f64,
    truncation_sensitivity: f64,
    pass: bool,
}

pub fn degenerate(cfg: &RunConfig, out: &mut OutputDir) -> Result<bool> {
    let problem = cfg.problem.as_ref().context("config has no `problem`")?;
    ensure!(!cfg.meshes.is_empty(), "config needs at least one entry in `meshes`");
    let alpha = cfg.alpha.unwrap_or(DEFAULT_DEGENERATE_ALPHA);
    let mut rows: Vec<DegenerateRow> = Vec::new();
    for &mesh in &cfg.meshes {
        let sol = solve_model(problem, mesh)?;
        let max_error = sol.max_error(problem);
        let observed_order = match (rows.last().and_then(|r| r.max_error), max_error) {
            (Some(prev), Some(e)) if e > 0.0 => Some((prev / e).log2()),
            _ => None,
        };
        rows.push(DegenerateRow {
            n_s: mesh.n_s,
            n_tau: mesh.n_tau,
            max_error,
            observed_order,
            lp2_ratio: estimate_ratio(&sol, NormKind::Lp { p: 2.0 })?,
            holder_ratio: estimate_ratio(&sol, NormKind::Holder { alpha })?,
        });
    }
    let lp2: Vec<f64> = rows.iter().map(|r| r.lp2_ratio).collect();
    let hol: Vec<f64> = rows.iter().map(|r| r.holder_ratio).collect();
    let min_order = rows.iter().filter_map(|r| r.observed_order).reduce(f64::min);
    let required_order = cfg.min_order.unwrap_or(DEFAULT_MIN_ORDER);
    let study = DegenerateStudy {
        a: problem.a,
        alpha,
        lp2_drift: drift(&lp2),
        holder_drift: drift(&hol),
        min_order,
        required_order,
        truncation_sensitivity: truncation_sensitivity(problem, *cfg.meshes.last().expect("non-empty"))?,
        pass: false,
        rows,
    };
    let pass = min_order.is_none_or(|p| p >= required_order)
        && study.lp2_drift < STABILITY_DRIFT
        && study.holder_drift < STABILITY_DRIFT;
    let study = DegenerateStudy { pass, ..study };
    out.write_json("degenerate.json", &study)?;

    let mut md = format!(
        "### degenerate: a = {}\n\n| n_s | n_tau | max error | order | I_2 ratio | I_alpha ratio |\n|---|---|---|---|---|---|\n",
        study.a
    );
    let opt = |v: Option<f64>, f: fn(f64) -> String| v.map(f).unwrap_or_else(|| "-".into());
    for r in &study.rows {
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {:.4} | {:.4} |",
            r.n_s,
            r.n_tau,
            opt(r.max_error, |v| format!("{v:.3e}")),
            opt(r.observed_order, |v| format!("{v:.2}")),
            r.lp2_ratio,
            r.holder_ratio
        );
    }
    let _ = writeln!(
        md,
        "\nI_2 drift {:.3}, I_alpha drift {:.3}, truncation sensitivity {:.2e}: {}",
        study.lp2_drift,
        study.holder_drift,
        study.truncation_sensitivity,
        if pass { "pass" } else { "FAIL" }
    );
    print!("{md}");
    out.write("degenerate.md", md)?;
    Ok(pass)
}

const RENDERINGS: [&str; 4] = ["validation.md", "integrate.md", "estimates.md", "degenerate.md"];

pub fn report(cfg: &RunConfig, out: &mut OutputDir) -> Result<bool> {
    if cfg.runs.is_empty() {
        bail!("config needs at least one directory in `runs`");
    }
    let mut md = String::from("# ansl report\n\n| run | command | result |\n|---|---|---|\n");
    let mut sections = String::new();
    let mut all_pass = true;
    for run in &cfg.runs {
        let dir = cfg.resolve(run);
        let summary_path = dir.join(SUMMARY_FILE);
        let text = std::fs::read_to_string(&summary_path)
            .with_context(|| format!("{} is not an ansl output directory", dir.display()))?;
        let summary: serde_json::Value = serde_json::from_str(&text)?;
        let pass = summary["pass"].as_bool().unwrap_or(false);
        all_pass &= pass;
        let label = run.display().to_string();
        let _ = writeln!(
            md,
            "| {label} | {} | {} |",
            summary["command"].as_str().unwrap_or("?"),
            if pass { "pass" } else { "FAIL" }
        );
        for name in RENDERINGS {
            if let Ok(body) = std::fs::read_to_string(dir.join(name)) {
                let _ = write!(sections, "\n## {label}\n\n{body}");
            }
        }
    }
    md.push_str(&sections);
    out.write("index.html", markdown_page(&md))?;
    out.write("index.md", &md)?;
    print!("{md}");
    Ok(all_pass)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Cells of a pipe-table row; `\|` is a literal pipe.
fn table_cells(row: &str) -> Vec<String> {
    let inner = row.trim().strip_prefix('|').unwrap_or(row);
    let inner = inner.strip_suffix('|').unwrap_or(inner);
    let mut cells = vec![String::new()];
    let mut chars = inner.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' if chars.peek() == Some(&'|') => {
                cells.last_mut().expect("non-empty").push('|');
                chars.next();
            }
            '|' => cells.push(String::new()),
            _ => cells.last_mut().expect("non-empty").push(c),
        }
    }
    cells.iter().map(|c| c.trim().to_string()).collect()
}

/// Minimal HTML rendering: headings and pipe tables, everything else as paragraphs.
fn markdown_page(md: &str) -> String {
    let mut html = String::from("<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>ansl report</title>\n<style>body{font-family:sans-serif;max-width:60em;margin:2em auto}td,th{border:1px solid #ccc;padding:2px 6px}table{border-collapse:collapse}</style></head><body>\n");
    let mut in_table = false;
    for line in md.lines() {
        let t = line.trim();
        if t.starts_with('|') {
            if t.starts_with("|---") {
                continue;
            }
            if !in_table {
                html.push_str("<table>\n");
                in_table = true;
            }
            html.push_str("<tr>");
            for c in table_cells(t) {
                let _ = write!(html, "<td>{}</td>", escape(&c));
            }
            html.push_str("</tr>\n");
            continue;
        }
        if in_table {
            html.push_str("</table>\n");
            in_table = false;
        }
        let level = t.chars().take_while(|&c| c == '#').count();
        if level > 0 {
            let _ = writeln!(html, "<h{level}>{}</h{level}>", escape(t[level..].trim()));
        } else if !t.is_empty() {
            let _ = writeln!(html, "<p>{}</p>", escape(t));
        }
    }
    if in_table {
        html.push_str("</table>\n");
    }
    html.push_str("</body></html>\n");
    html
}
