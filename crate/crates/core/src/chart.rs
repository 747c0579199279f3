//! Geodesic-coordinate collar charts `g = B² ds² + dt²`.
//!
//! A chart is built either from an [`AnalyticMetric`] (exact derivatives via
//! bivariate jets) or from sampled `B` values (spectral in `s`, Fornberg
//! finite differences in `t`). Both routes expose the same evaluators.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::AnalyticMetric;
use crate::quadrature::{nonuniform_simpson_weights, pairwise_sum, weighted_sum};
use crate::spectral::PeriodicGrid;
use crate::stencil::{lagrange_weights, window_around, DiffOperator};
use crate::taylor::{jet2_variables, PartialTable, Taylor};

/// Highest `s`- and `t`-derivative order reconstructed from sampled data.
pub const GRID_S_ORDER: usize = 3;
pub const GRID_T_ORDER: usize = 4;
const INTERP_WIDTH: usize = 6;

/// Placement of the `t` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grading {
    Uniform,
    /// `t_j = t_max (j / (n_t - 1))^p`, clustering nodes near the boundary for `p > 1`.
    Power(f64),
}

impl Grading {
    pub fn nodes(&self, n_t: usize, t_max: f64) -> Vec<f64> {
        let last = (n_t - 1) as f64;
        (0..n_t)
            .map(|j| match self {
                Grading::Uniform => t_max * j as f64 / last,
                Grading::Power(p) => t_max * (j as f64 / last).powf(*p),
            })
            .collect()
    }
}

/// Where `B` comes from.
#[derive(Clone, Debug)]
pub enum BSource {
    Analytic(AnalyticMetric),
    /// Row-major samples `B[i_s * n_t + j_t]` on the chart grid.
    Grid(Vec<f64>),
}

#[derive(Clone, Debug, Default)]
pub struct ChartOptions {
    pub grading: Option<Grading>,
    /// Normalization tolerance; defaults to 1e-10 (analytic) or 1e-6 (grid).
    pub tolerance: Option<f64>,
    /// The chart covers a whole surface, so the total-curvature check applies.
    pub full_surface: bool,
    /// Accuracy order of the `t` stencils for sampled data (default 4).
    pub fd_accuracy: Option<usize>,
}

/// Partial derivatives of `B` and `K` at one point: `table.get(i, j) = ∂_s^i ∂_t^j`.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub b: PartialTable,
    pub k: PartialTable,
}

#[derive(Debug)]
struct GridTables {
    /// `data[a * (GRID_T_ORDER + 1) + b]` holds `∂_s^a ∂_t^b B` on the grid.
    data: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
enum Source {
    Analytic(AnalyticMetric),
    Grid(Arc<GridTables>),
}

#[derive(Clone, Debug)]
pub struct GeodesicChart {
    period: f64,
    t_max: f64,
    grading: Grading,
    s_grid: PeriodicGrid,
    t_nodes: Vec<f64>,
    source: Source,
    b: Vec<f64>,
    k: Vec<f64>,
    tolerance: f64,
    full_surface: bool,
}

/// Sampled periodic function of `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile {
    pub period: f64,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn eval(&self, s: f64) -> f64 {
        PeriodicGrid::new(self.values.len(), self.period).interpolate(&self.values, s)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn build_chart(
    source: BSource,
    period: f64,
    t_max: f64,
    resolution: (usize, usize),
    options: &ChartOptions,
) -> Result<GeodesicChart> {
    let (n_s, n_t) = resolution;
    if !(period > 0.0 && t_max > 0.0) {
        return Err(Error::BadParameters(format!(
            "period and t_max must be positive (got {period}, {t_max})"
        )));
    }
    if n_s < 8 || n_t < 4 {
        return Err(Error::BadParameters(format!(
            "grid must be at least 8 x 4 (got {n_s} x {n_t})"
        )));
    }
    let grading = options.grading.unwrap_or(Grading::Uniform);
    let s_grid = PeriodicGrid::new(n_s, period);
    let t_nodes = grading.nodes(n_t, t_max);
    let s_nodes = s_grid.nodes();

    let (source, b, default_tol) = match source {
        BSource::Analytic(metric) => {
            let mut b = Vec::with_capacity(n_s * n_t);
            for &s in &s_nodes {
                for &t in &t_nodes {
                    b.push(metric.eval(s, t));
                }
            }
            check_periodic(&metric, period, &s_nodes, &t_nodes)?;
            (Source::Analytic(metric), b, 1e-10)
        }
        BSource::Grid(values) => {
            if values.len() != n_s * n_t {
                return Err(Error::BadParameters(format!(
                    "expected {} B samples, got {}",
                    n_s * n_t,
                    values.len()
                )));
            }
            let accuracy = options.fd_accuracy.unwrap_or(4);
            let tables = grid_tables(&values, &s_grid, &t_nodes, accuracy);
            (Source::Grid(Arc::new(tables)), values, 1e-6)
        }
    };
    let tolerance = options.tolerance.unwrap_or(default_tol);

    for (idx, &v) in b.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::NonPositiveB {
                s: s_nodes[idx / n_t],
                t: t_nodes[idx % n_t],
                value: v,
            });
        }
    }
    let deviation = (0..n_s).map(|i| (b[i * n_t] - 1.0).abs()).fold(0.0, f64::max);
    if deviation > tolerance {
        return Err(Error::NormalizationViolation { deviation, tolerance });
    }

    let mut chart = GeodesicChart {
        period,
        t_max,
        grading,
        s_grid,
        t_nodes,
        source,
        b,
        k: Vec::new(),
        tolerance,
        full_surface: options.full_surface,
    };
    chart.k = chart.curvature_grid();
    Ok(chart)
}

fn check_periodic(metric: &AnalyticMetric, period: f64, s_nodes: &[f64], t_nodes: &[f64]) -> Result<()> {
    let ts = [t_nodes[0], t_nodes[t_nodes.len() / 3], t_nodes[t_nodes.len() - 1]];
    let mut mismatch: f64 = 0.0;
    for &s in s_nodes.iter().step_by((s_nodes.len() / 8).max(1)) {
        for &t in &ts {
            let a = metric.eval(s, t);
            let b = metric.eval(s + period, t);
            mismatch = mismatch.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    if mismatch > 1e-10 {
        return Err(Error::NotPeriodic { period, mismatch });
    }
    Ok(())
}

fn grid_tables(values: &[f64], s_grid: &PeriodicGrid, t_nodes: &[f64], accuracy: usize) -> GridTables {
    let n_s = s_grid.len();
    let n_t = t_nodes.len();
    let mut t_derivs = vec![values.to_vec()];
    for b in 1..=GRID_T_ORDER {
        let op = DiffOperator::with_accuracy(t_nodes, b, accuracy);
        t_derivs.push(op.apply_rows(values, n_t));
    }
    let mut data = vec![Vec::new(); (GRID_S_ORDER + 1) * (GRID_T_ORDER + 1)];
    for (b, field) in t_derivs.iter().enumerate() {
        data[b] = field.clone();
        for a in 1..=GRID_S_ORDER {
            let mut out = vec![0.0; n_s * n_t];
            for j in 0..n_t {
                let col: Vec<f64> = (0..n_s).map(|i| field[i * n_t + j]).collect();
                let d = s_grid.derivative(&col, a, None);
                for i in 0..n_s {
                    out[i * n_t + j] = d[i];
                }
            }
            data[a * (GRID_T_ORDER + 1) + b] = out;
        }
    }
    GridTables { data }
}

fn curvature_from_b(b: &PartialTable, s_order: usize, t_order: usize) -> PartialTable {
    let bj = b.to_jet();
    let k = -(bj.derivative().derivative() / bj);
    PartialTable::from_jet(&k, s_order, t_order)
}

fn truncate(table: &PartialTable, s_order: usize, t_order: usize) -> PartialTable {
    let mut out = PartialTable::zeros(s_order, t_order);
    for i in 0..=s_order {
        for j in 0..=t_order {
            out.set(i, j, table.get(i, j));
        }
    }
    out
}

impl GeodesicChart {
    /// Analytic chart on the metric's natural period with a uniform `t` grid.
    pub fn analytic(metric: AnalyticMetric, t_max: f64, n_s: usize, n_t: usize) -> Result<Self> {
        let period = metric.period();
        build_chart(
            BSource::Analytic(metric),
            period,
            t_max,
            (n_s, n_t),
            &ChartOptions::default(),
        )
    }

    /// Grid-only chart reconstructed from samples of an analytic metric.
    pub fn sampled_from(
        metric: &AnalyticMetric,
        t_max: f64,
        n_s: usize,
        n_t: usize,
        options: &ChartOptions,
    ) -> Result<Self> {
        let period = metric.period();
        let grading = options.grading.unwrap_or(Grading::Uniform);
        let s_nodes = PeriodicGrid::new(n_s, period).nodes();
        let t_nodes = grading.nodes(n_t, t_max);
        let values = s_nodes
            .iter()
            .flat_map(|&s| t_nodes.iter().map(move |&t| metric.eval(s, t)))
            .collect();
        build_chart(BSource::Grid(values), period, t_max, (n_s, n_t), options)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_s(&self) -> usize {
        self.s_grid.len()
    }

    pub fn n_t(&self) -> usize {
        self.t_nodes.len()
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn s_grid(&self) -> &PeriodicGrid {
        &self.s_grid
    }

    pub fn s_nodes(&self) -> Vec<f64> {
        self.s_grid.nodes()
    }

    pub fn t_nodes(&self) -> &[f64] {
        &self.t_nodes
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.source, Source::Analytic(_))
    }

    pub fn analytic_metric(&self) -> Option<&AnalyticMetric> {
        match &self.source {
            Source::Analytic(m) => Some(m),
            Source::Grid(_) => None,
        }
    }

    /// True when `B` is known not to depend on `s`.
    pub fn is_rotational(&self) -> bool {
        matches!(&self.source, Source::Analytic(m) if m.is_rotational())
    }

    pub fn is_full_surface(&self) -> bool {
        self.full_surface
    }

    /// Highest `t`-derivative order of `B` the chart can deliver.
    pub fn max_t_order(&self) -> usize {
        match self.source {
            Source::Analytic(_) => usize::MAX,
            Source::Grid(_) => GRID_T_ORDER,
        }
    }

    /// Sampled `B`, row-major `(n_s × n_t)`.
    pub fn b_grid(&self) -> &[f64] {
        &self.b
    }

    /// Installed `K` samples, row-major `(n_s × n_t)`.
    pub fn k_grid(&self) -> &[f64] {
        &self.k
    }

    pub fn b(&self, s: f64, t: f64) -> f64 {
        match &self.source {
            Source::Analytic(m) => m.eval(s, t),
            Source::Grid(_) => self.grid_table(s, t, 0, 0).get(0, 0),
        }
    }

    pub fn k(&self, s: f64, t: f64) -> f64 {
        self.metric_at(s, t, 0, 0).map(|m| m.k.get(0, 0)).unwrap_or(f64::NAN)
    }

    /// Derivatives of `B` and `K` up to the given orders at `(s, t)`.
    pub fn metric_at(&self, s: f64, t: f64, s_order: usize, t_order: usize) -> Result<MetricJet> {
        match &self.source {
            Source::Analytic(m) => {
                let (sj, tj) = jet2_variables(s, t, s_order, t_order + 2);
                let bj = m.eval(sj, tj);
                let k = -(bj.derivative().derivative() / bj.clone());
                Ok(MetricJet {
                    b: PartialTable::from_jet(&bj, s_order, t_order),
                    k: PartialTable::from_jet(&k, s_order, t_order),
                })
            }
            Source::Grid(_) => {
                self.check_grid_orders(s_order, t_order)?;
                let full = self.grid_table(s, t, s_order, t_order + 2);
                Ok(MetricJet {
                    b: truncate(&full, s_order, t_order),
                    k: curvature_from_b(&full, s_order, t_order),
                })
            }
        }
    }

    /// [`Self::metric_at`] for every `s` node at fixed `t`.
    pub fn column(&self, t: f64, s_order: usize, t_order: usize) -> Result<Vec<MetricJet>> {
        let s_nodes = self.s_nodes();
        if self.is_rotational() {
            let m = self.metric_at(0.0, t, s_order, t_order)?;
            return Ok(vec![m; s_nodes.len()]);
        }
        if let Source::Grid(_) = self.source {
            self.check_grid_orders(s_order, t_order)?;
            return Ok((0..s_nodes.len())
                .map(|i| {
                    let full = self.grid_table_node(i, t, s_order, t_order + 2);
                    MetricJet {
                        b: truncate(&full, s_order, t_order),
                        k: curvature_from_b(&full, s_order, t_order),
                    }
                })
                .collect());
        }
        s_nodes
            .iter()
            .map(|&s| self.metric_at(s, t, s_order, t_order))
            .collect()
    }

    /// Normalized `t`-Taylor coefficients of `B` and `K` at `(s_i, 0)`: `B` to
    /// order `order + 2`, `K` to `order`.
    pub fn boundary_t_jet(&self, i: usize, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let s = self.s_grid.nodes()[i];
        let bj: Taylor<f64> = match &self.source {
            Source::Analytic(m) => {
                // s held fixed: a univariate jet in t is enough
                let tj = Taylor::variable(0.0, order + 2);
                m.eval(Taylor::constant(s), tj)
            }
            Source::Grid(_) => {
                if order + 2 > GRID_T_ORDER {
                    return Err(Error::InsufficientSmoothness {
                        required: order + 2,
                        available: GRID_T_ORDER,
                    });
                }
                let tab = self.grid_table_node(i, 0.0, 0, order + 2);
                let mut f = 1.0;
                let coeffs = (0..=order + 2)
                    .map(|j| {
                        if j > 0 {
                            f *= j as f64;
                        }
                        tab.get(0, j) / f
                    })
                    .collect();
                Taylor::from_coeffs(coeffs)
            }
        };
        let k = -(bj.derivative().derivative() / bj.clone());
        Ok((bj.coeffs, k.with_order(order).coeffs))
    }

    fn check_grid_orders(&self, s_order: usize, t_order: usize) -> Result<()> {
        if t_order + 2 > GRID_T_ORDER {
            return Err(Error::InsufficientSmoothness {
                required: t_order + 2,
                available: GRID_T_ORDER,
            });
        }
        if s_order > GRID_S_ORDER {
            return Err(Error::BadParameters(format!(
                "sampled charts provide s-derivatives up to order {GRID_S_ORDER}"
            )));
        }
        Ok(())
    }

    fn tables(&self) -> &GridTables {
        match &self.source {
            Source::Grid(t) => t,
            Source::Analytic(_) => unreachable!("grid tables requested for analytic chart"),
        }
    }

    /// `t`-interpolation weights over a window, or an exact node hit.
    fn t_weights(&self, t: f64) -> Vec<(usize, f64)> {
        let n_t = self.t_nodes.len();
        let j = self.t_nodes.partition_point(|&v| v < t);
        let scale = self.t_max * 1e-13;
        for cand in [j.saturating_sub(1), j.min(n_t - 1)] {
            if (self.t_nodes[cand] - t).abs() <= scale {
                return vec![(cand, 1.0)];
            }
        }
        let start = window_around(&self.t_nodes, t, INTERP_WIDTH);
        let width = INTERP_WIDTH.min(n_t);
        lagrange_weights(t, &self.t_nodes[start..start + width])
            .into_iter()
            .enumerate()
            .map(|(k, w)| (start + k, w))
            .collect()
    }

    fn grid_table_node(&self, i: usize, t: f64, s_order: usize, t_order: usize) -> PartialTable {
        let tables = self.tables();
        let n_t = self.t_nodes.len();
        let weights = self.t_weights(t);
        let mut out = PartialTable::zeros(s_order, t_order);
        for a in 0..=s_order {
            for b in 0..=t_order {
                let field = &tables.data[a * (GRID_T_ORDER + 1) + b];
                let v: f64 = weights.iter().map(|&(j, w)| w * field[i * n_t + j]).sum();
                out.set(a, b, v);
            }
        }
        out
    }

    fn grid_table(&self, s: f64, t: f64, s_order: usize, t_order: usize) -> PartialTable {
        let h = self.s_grid.spacing();
        let x = s.rem_euclid(self.period) / h;
        let i = x.round();
        if (x - i).abs() < 1e-10 {
            return self.grid_table_node(i as usize % self.n_s(), t, s_order, t_order);
        }
        let tables = self.tables();
        let n_s = self.n_s();
        let n_t = self.t_nodes.len();
        let weights = self.t_weights(t);
        let mut out = PartialTable::zeros(s_order, t_order);
        for a in 0..=s_order {
            for b in 0..=t_order {
                // interpolate the t-derivative field in s, then differentiate the interpolant
                let field = &tables.data[b];
                let mut row = vec![0.0; n_s];
                for (ii, r) in row.iter_mut().enumerate() {
                    *r = weights.iter().map(|&(j, w)| w * field[ii * n_t + j]).sum();
                }
                let coeffs = self.s_grid.forward(&row);
                out.set(a, b, self.s_grid.eval_coeffs(&coeffs, s, a));
            }
        }
        out
    }

    fn curvature_grid(&self) -> Vec<f64> {
        let n_s = self.n_s();
        let n_t = self.n_t();
        let mut k = vec![0.0; n_s * n_t];
        match &self.source {
            Source::Analytic(m) => {
                let s_nodes = self.s_nodes();
                for (i, &s) in s_nodes.iter().enumerate() {
                    for (j, &t) in self.t_nodes.iter().enumerate() {
                        let tj = Taylor::variable(t, 2);
                        let bj = m.eval(Taylor::constant(s), tj);
                        k[i * n_t + j] = -2.0 * bj.coeffs[2] / bj.coeffs[0];
                    }
                }
            }
            Source::Grid(tables) => {
                for idx in 0..n_s * n_t {
                    k[idx] = -tables.data[2][idx] / tables.data[0][idx];
                }
            }
        }
        k
    }
}

/// `K = -B_tt / B` on the chart grid (the installed curvature samples).
pub fn gauss_curvature(chart: &GeodesicChart) -> Vec<f64> {
    chart.k.clone()
}

/// `(Γ¹₁₁, Γ¹₁₂, Γ¹₂₂, Γ²₁₁, Γ²₁₂, Γ²₂₂)` at `(s, t)`.
pub fn christoffels(chart: &GeodesicChart, s: f64, t: f64) -> Result<[f64; 6]> {
    let m = chart.metric_at(s, t, 1, 1)?;
    let (b, bs, bt) = (m.b.get(0, 0), m.b.get(1, 0), m.b.get(0, 1));
    Ok([bs / b, bt / b, 0.0, -b * bt, 0.0, 0.0])
}

/// `k_g(s) = -B_t(s, 0)` at the `s` nodes.
pub fn boundary_geodesic_curvature(chart: &GeodesicChart) -> Result<Profile> {
    let col = chart.column(0.0, 0, 1)?;
    Ok(Profile {
        period: chart.period,
        values: col.iter().map(|m| -m.b.get(0, 1)).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Advisory check that failed; does not affect the verdict.
    Warn,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationEntry {
    pub name: String,
    pub status: CheckStatus,
    pub value: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != CheckStatus::Fail)
    }

    pub fn entry(&self, name: &str) -> Option<&ValidationEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct AnTolerances {
    /// Allowed `|K(·,0)|`; defaults to the chart tolerance.
    pub boundary_k: Option<f64>,
    /// Required lower bound for `∂_t K(·,0)`; defaults to the chart tolerance.
    pub k_t_lower: Option<f64>,
    /// Relative tolerance for the total-curvature check.
    pub total_curvature: f64,
}

impl Default for AnTolerances {
    fn default() -> Self {
        Self {
            boundary_k: None,
            k_t_lower: None,
            total_curvature: 1e-3,
        }
    }
}

pub fn validate_an(chart: &GeodesicChart, tol: &AnTolerances) -> Result<ValidationReport> {
    let n_s = chart.n_s();
    let n_t = chart.n_t();
    let k = &chart.k;
    let mut entries = Vec::new();
    let mut push = |name: &str, ok: bool, value: f64, detail: String| {
        entries.push(ValidationEntry {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            value: Some(value),
            detail,
        });
    };

    let interior_min = (0..n_s)
        .flat_map(|i| (1..n_t).map(move |j| k[i * n_t + j]))
        .fold(f64::INFINITY, f64::min);
    push(
        "K>0 interior",
        interior_min > 0.0,
        interior_min,
        "minimum of K over t > 0 nodes".into(),
    );

    let boundary_tol = tol.boundary_k.unwrap_or(chart.tolerance);
    let boundary_max = (0..n_s).map(|i| k[i * n_t].abs()).fold(0.0, f64::max);
    push(
        "K(.,0)=0",
        boundary_max <= boundary_tol,
        boundary_max,
        format!("max abs K(s,0), tolerance {boundary_tol:.1e}"),
    );

    let col = chart.column(0.0, 0, 1)?;
    let kt_lower = tol.k_t_lower.unwrap_or(chart.tolerance);
    let kt_min = col.iter().map(|m| m.k.get(0, 1)).fold(f64::INFINITY, f64::min);
    push(
        "dK/dt(.,0)>0",
        kt_min >= kt_lower,
        kt_min,
        format!("min K_t(s,0), lower bound {kt_lower:.1e}"),
    );

    let kg_max = col.iter().map(|m| -m.b.get(0, 1)).fold(f64::NEG_INFINITY, f64::max);
    push(
        "k_g<0",
        kg_max < 0.0,
        kg_max,
        "max geodesic curvature of the boundary".into(),
    );

    let mut bt_min = f64::INFINITY;
    for &t in chart.t_nodes() {
        for m in chart.column(t, 0, 1)? {
            bt_min = bt_min.min(m.b.get(0, 1));
        }
    }
    entries.push(ValidationEntry {
        name: "B_t>0 collar".into(),
        status: if bt_min > 0.0 {
            CheckStatus::Pass
        } else {
            CheckStatus::Warn
        },
        value: Some(bt_min),
        detail: "min B_t over the collar (advisory; no rescaling is attempted)".into(),
    });

    if chart.full_surface {
        let wt = nonuniform_simpson_weights(chart.t_nodes());
        let rows: Vec<f64> = (0..n_s)
            .map(|i| {
                let f: Vec<f64> = (0..n_t).map(|j| k[i * n_t + j] * chart.b[i * n_t + j]).collect();
                weighted_sum(&f, &wt)
            })
            .collect();
        let total = pairwise_sum(&rows) * chart.s_grid.spacing();
        let target = 4.0 * std::f64::consts::PI;
        let rel = (total - target).abs() / target;
        entries.push(ValidationEntry {
            name: "total curvature 4pi".into(),
            status: if rel <= tol.total_curvature {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            value: Some(total),
            detail: format!("relative deviation {rel:.3e}"),
        });
    } else {
        entries.push(ValidationEntry {
            name: "total curvature 4pi".into(),
            status: CheckStatus::NotApplicable,
            value: None,
            detail: "chart is a boundary collar".into(),
        });
    }
    Ok(ValidationReport { entries })
}
