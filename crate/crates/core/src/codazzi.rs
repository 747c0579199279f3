//! Marching the Codazzi system for `(M, N)` into the collar, closing `L`
//! through the Gauss equation, and Codazzi residuals of sampled forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::{GeodesicChart, MetricJet};
use crate::error::{Error, Result};
use crate::jet::{BoundaryJet, Field};
use crate::spectral::PeriodicGrid;
use crate::stencil::DiffOperator;

/// Grids of `L, M, N, H`, row-major `(n_s × n_t)` with `s` the slow index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForm {
    pub period: f64,
    pub n_s: usize,
    pub t: Vec<f64>,
    pub l: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub h: Vec<f64>,
}

impl FundamentalForm {
    pub fn zeros(period: f64, n_s: usize, t: Vec<f64>) -> Self {
        let len = n_s * t.len();
        Self {
            period,
            n_s,
            t,
            l: vec![0.0; len],
            m: vec![0.0; len],
            n: vec![0.0; len],
            h: vec![0.0; len],
        }
    }

    pub fn n_t(&self) -> usize {
        self.t.len()
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.t.len() + j
    }

    pub fn s_grid(&self) -> PeriodicGrid {
        PeriodicGrid::new(self.n_s, self.period)
    }

    pub fn field(&self, f: Field) -> &[f64] {
        match f {
            Field::L => &self.l,
            Field::M => &self.m,
            Field::N => &self.n,
            Field::H => &self.h,
        }
    }

    /// Recompute `H = (L/B² + N)/2` from the chart.
    pub fn update_h(&mut self, chart: &GeodesicChart) -> Result<()> {
        let n_t = self.n_t();
        for j in 0..n_t {
            let col = metric_column(chart, self.t[j], self.n_s, 0, 0)?;
            for (i, mj) in col.iter().enumerate() {
                let b = mj.b.get(0, 0);
                let k = self.idx(i, j);
                self.h[k] = 0.5 * (self.l[k] / (b * b) + self.n[k]);
            }
        }
        Ok(())
    }

    /// Restrict to the nodes with `t <= t_cut`.
    pub fn truncated(&self, t_cut: f64) -> Self {
        let keep = self.t.partition_point(|&t| t <= t_cut * (1.0 + 1e-12));
        let n_t = self.n_t();
        let pick = |v: &[f64]| -> Vec<f64> {
            (0..self.n_s)
                .flat_map(|i| v[i * n_t..i * n_t + keep].iter().copied())
                .collect()
        };
        Self {
            period: self.period,
            n_s: self.n_s,
            t: self.t[..keep].to_vec(),
            l: pick(&self.l),
            m: pick(&self.m),
            n: pick(&self.n),
            h: pick(&self.h),
        }
    }
}

/// Metric jets at the chart's `s` nodes, checking that form and chart agree.
pub(crate) fn metric_column(chart: &GeodesicChart, t: f64, n_s: usize, so: usize, to: usize) -> Result<Vec<MetricJet>> {
    if chart.n_s() != n_s {
        return Err(Error::BadParameters(format!(
            "form has {n_s} s-nodes but the chart has {}",
            chart.n_s()
        )));
    }
    chart.column(t, so, to)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Startoff {
    pub t0: f64,
    pub l: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    /// Size of the last retained Taylor term.
    pub truncation: f64,
    pub jet: BoundaryJet,
}

fn eval_series(coeffs: &[Vec<f64>], i: usize, t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c[i])
}

/// `(M, N)` (and `L`) at depth `t0` from the truncated boundary jet.
pub fn taylor_startoff(jet: &BoundaryJet, t0: f64) -> Result<Startoff> {
    let n_s = jet.n_s;
    if t0 == 0.0 {
        return Ok(Startoff {
            t0,
            l: jet.l[0].clone(),
            m: jet.m[0].clone(),
            n: jet.n[0].clone(),
            truncation: 0.0,
            jet: jet.clone(),
        });
    }
    let k = jet.order;
    let leading = jet.n[0].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let last = (0..n_s)
        .map(|i| (jet.n[k][i].abs().max(jet.m[k][i].abs())) * t0.powi(k as i32))
        .fold(0.0, f64::max);
    if last > 1e-3 * leading {
        return Err(Error::StartoffTooDeep { last, leading });
    }
    Ok(Startoff {
        t0,
        l: (0..n_s).map(|i| eval_series(&jet.l, i, t0)).collect(),
        m: (0..n_s).map(|i| eval_series(&jet.m, i, t0)).collect(),
        n: (0..n_s).map(|i| eval_series(&jet.n, i, t0)).collect(),
        truncation: last,
        jet: jet.clone(),
    })
}

/// Default start-off depth `max(1e-3 t_max, h_t)`.
pub fn default_t0(chart: &GeodesicChart) -> f64 {
    let h_t = chart.t_nodes()[1] - chart.t_nodes()[0];
    (1e-3 * chart.t_max()).max(h_t)
}

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    /// Largest retained wavenumber for `s`-derivatives and the state filter;
    /// `None` selects the 2/3 rule.
    pub cutoff: Option<usize>,
    /// Filter the state after every step with the same cutoff.
    pub filter_state: bool,
    /// Relative Gauss-equation residual above which a step is rejected.
    pub gauss_cap: f64,
    pub blowup: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            cutoff: None,
            filter_state: true,
            gauss_cap: 1e-4,
            blowup: 1e6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrationResult {
    pub form: FundamentalForm,
    /// Max over the step of `|N L̃ - M² - K B²| / (1 + K B²)`, where `L̃` is
    /// marched with the `L`-equation alongside the closed `L`.
    pub gauss_residual: Vec<f64>,
    pub max_gauss_residual: f64,
    pub steps: usize,
}

struct Coeffs {
    b: Vec<f64>,
    bs: Vec<f64>,
    bt: Vec<f64>,
    k: Vec<f64>,
    kt: Vec<f64>,
}

impl Coeffs {
    fn at(chart: &GeodesicChart, t: f64) -> Result<Self> {
        let col = chart.column(t, 1, 1)?;
        Ok(Self {
            b: col.iter().map(|m| m.b.get(0, 0)).collect(),
            bs: col.iter().map(|m| m.b.get(1, 0)).collect(),
            bt: col.iter().map(|m| m.b.get(0, 1)).collect(),
            k: col.iter().map(|m| m.k.get(0, 0)).collect(),
            kt: col.iter().map(|m| m.k.get(0, 1)).collect(),
        })
    }
}

struct Rhs<'a> {
    grid: &'a PeriodicGrid,
    cutoff: usize,
    blowup: f64,
}

impl Rhs<'_> {
    /// Time derivatives of `(M, N, L̃)`.
    fn eval(&self, c: &Coeffs, t: f64, m: &[f64], n: &[f64], lt: &[f64]) -> Result<[Vec<f64>; 3]> {
        for i in 0..m.len() {
            if !(n[i] > 0.0) || n[i].abs() > self.blowup || m[i].abs() > self.blowup || !m[i].is_finite() {
                return Err(Error::BlowupDetected {
                    t,
                    reason: format!("M = {:.3e}, N = {:.3e} at s-index {i}", m[i], n[i]),
                });
            }
        }
        let ms = self.grid.derivative(m, 1, Some(self.cutoff));
        let ns = self.grid.derivative(n, 1, Some(self.cutoff));
        let len = m.len();
        let out: Vec<(f64, f64, f64)> = (0..len)
            .into_par_iter()
            .map(|i| {
                let (b, bs, bt, k, kt) = (c.b[i], c.bs[i], c.bt[i], c.k[i], c.kt[i]);
                let (mi, ni) = (m[i], n[i]);
                let beta = bt / b;
                let gamma = bs / b;
                let kb2 = k * b * b;
                let l = (mi * mi + kb2) / ni;
                let q = -2.0 * beta * mi * mi - beta * (mi * mi + kb2) + gamma * mi * ni - b * bt * ni * ni
                    + 2.0 * b * bt * k
                    + b * b * kt;
                let m_t = ns[i] - beta * mi;
                let n_t = (2.0 * mi * ns[i] - ni * ms[i] + q) / l;
                let l_t = ms[i] + beta * lt[i] - gamma * mi + b * bt * ni;
                (m_t, n_t, l_t)
            })
            .collect();
        Ok([
            out.iter().map(|v| v.0).collect(),
            out.iter().map(|v| v.1).collect(),
            out.iter().map(|v| v.2).collect(),
        ])
    }
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

/// Fixed-step RK4 from the start-off layer to `t_end`. Nodes below `t0` are
/// filled from the jet on the uniform lattice `j h`; the returned form's
/// `t` grid is that lattice followed by `t0 + n h`.
pub fn integrate(
    chart: &GeodesicChart,
    start: &Startoff,
    t_end: f64,
    steps: usize,
    opts: &IntegrateOptions,
) -> Result<IntegrationResult> {
    let t0 = start.t0;
    if !(t0 < t_end && t_end <= chart.t_max() * (1.0 + 1e-12)) {
        return Err(Error::BadParameters(format!(
            "need t0 < t_end <= t_max (t0 = {t0}, t_end = {t_end}, t_max = {})",
            chart.t_max()
        )));
    }
    if steps == 0 {
        return Err(Error::BadParameters("steps must be positive".into()));
    }
    let n_s = chart.n_s();
    if start.m.len() != n_s {
        return Err(Error::BadParameters("start-off profiles do not match the chart".into()));
    }
    let grid = chart.s_grid().clone();
    let cutoff = opts.cutoff.unwrap_or_else(|| grid.two_thirds_cutoff());
    let rhs = Rhs {
        grid: &grid,
        cutoff,
        blowup: opts.blowup,
    };
    let h = (t_end - t0) / steps as f64;

    let mut t_nodes = Vec::new();
    let mut j = 0usize;
    while (j as f64) * h <= t0 - 0.5 * h {
        t_nodes.push(j as f64 * h);
        j += 1;
    }
    let n_fill = t_nodes.len();
    for n in 0..=steps {
        t_nodes.push(if n == steps { t_end } else { t0 + n as f64 * h });
    }
    let n_t = t_nodes.len();
    let mut form = FundamentalForm::zeros(chart.period(), n_s, t_nodes.clone());
    let jet = &start.jet;
    for (jj, &t) in t_nodes[..n_fill].iter().enumerate() {
        for i in 0..n_s {
            let idx = i * n_t + jj;
            form.l[idx] = eval_series(&jet.l, i, t);
            form.m[idx] = eval_series(&jet.m, i, t);
            form.n[idx] = eval_series(&jet.n, i, t);
        }
    }

    let filter = |v: Vec<f64>| if opts.filter_state { grid.filter(&v, cutoff) } else { v };
    let mut m = filter(start.m.clone());
    let mut n = filter(start.n.clone());
    let mut lt = filter(start.l.clone());
    let mut coeffs_now = Coeffs::at(chart, t0)?;
    let mut residuals = Vec::with_capacity(steps);
    let store = |form: &mut FundamentalForm, col: usize, m: &[f64], n: &[f64], c: &Coeffs| {
        for i in 0..n_s {
            let idx = i * n_t + col;
            form.m[idx] = m[i];
            form.n[idx] = n[i];
            form.l[idx] = (m[i] * m[i] + c.k[i] * c.b[i] * c.b[i]) / n[i];
        }
    };
    store(&mut form, n_fill, &m, &n, &coeffs_now);

    for step in 0..steps {
        let t = t0 + step as f64 * h;
        let t_next = if step + 1 == steps {
            t_end
        } else {
            t0 + (step + 1) as f64 * h
        };
        let coeffs_mid = Coeffs::at(chart, t + 0.5 * h)?;
        let coeffs_next = Coeffs::at(chart, t_next)?;
        let k1 = rhs.eval(&coeffs_now, t, &m, &n, &lt)?;
        let k2 = rhs.eval(
            &coeffs_mid,
            t + 0.5 * h,
            &axpy(&m, 0.5 * h, &k1[0]),
            &axpy(&n, 0.5 * h, &k1[1]),
            &axpy(&lt, 0.5 * h, &k1[2]),
        )?;
        let k3 = rhs.eval(
            &coeffs_mid,
            t + 0.5 * h,
            &axpy(&m, 0.5 * h, &k2[0]),
            &axpy(&n, 0.5 * h, &k2[1]),
            &axpy(&lt, 0.5 * h, &k2[2]),
        )?;
        let k4 = rhs.eval(
            &coeffs_next,
            t_next,
            &axpy(&m, h, &k3[0]),
            &axpy(&n, h, &k3[1]),
            &axpy(&lt, h, &k3[2]),
        )?;
        let combine = |y: &[f64], f: usize| -> Vec<f64> {
            (0..n_s)
                .map(|i| y[i] + h / 6.0 * (k1[f][i] + 2.0 * k2[f][i] + 2.0 * k3[f][i] + k4[f][i]))
                .collect()
        };
        m = filter(combine(&m, 0));
        n = filter(combine(&n, 1));
        lt = filter(combine(&lt, 2));
        coeffs_now = coeffs_next;

        let mut worst: f64 = 0.0;
        for i in 0..n_s {
            let kb2 = coeffs_now.k[i] * coeffs_now.b[i] * coeffs_now.b[i];
            let r = (n[i] * lt[i] - m[i] * m[i] - kb2).abs() / (1.0 + kb2);
            worst = worst.max(r);
        }
        if !(worst <= opts.gauss_cap) {
            return Err(Error::StepRejected {
                t: t_next,
                residual: worst,
                cap: opts.gauss_cap,
            });
        }
        residuals.push(worst);
        store(&mut form, n_fill + step + 1, &m, &n, &coeffs_now);
    }
    form.update_h(chart)?;
    let max_gauss_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(IntegrationResult {
        form,
        gauss_residual: residuals,
        max_gauss_residual,
        steps,
    })
}

/// `L = (M² + K B²) / N` on the form grid.
pub fn close_l(chart: &GeodesicChart, form: &FundamentalForm) -> Result<Vec<f64>> {
    let n_t = form.n_t();
    let mut l = vec![0.0; form.n_s * n_t];
    for j in 0..n_t {
        let col = metric_column(chart, form.t[j], form.n_s, 0, 0)?;
        for i in 0..form.n_s {
            let idx = form.idx(i, j);
            let n = form.n[idx];
            if !(n > 0.0) {
                return Err(Error::NonpositiveN { i, j });
            }
            let b = col[i].b.get(0, 0);
            l[idx] = (form.m[idx].powi(2) + col[i].k.get(0, 0) * b * b) / n;
        }
    }
    Ok(l)
}

#[derive(Clone, Debug, Serialize)]
pub struct CodazziResiduals {
    pub gc1: Vec<f64>,
    pub gc2: Vec<f64>,
    pub max_gc1: f64,
    pub max_gc2: f64,
}

/// Pointwise residuals of the two Codazzi equations with spectral `s`- and
/// fourth-order `t`-differentiation on the form grid.
pub fn codazzi_residuals(form: &FundamentalForm, chart: &GeodesicChart) -> Result<CodazziResiduals> {
    let n_t = form.n_t();
    let n_s = form.n_s;
    let dt = DiffOperator::new(&form.t, 1);
    let l_t = dt.apply_rows(&form.l, n_t);
    let m_t = dt.apply_rows(&form.m, n_t);
    let m_s = s_derivative(form, &form.m, 1);
    let n_s_der = s_derivative(form, &form.n, 1);
    let mut gc1 = vec![0.0; n_s * n_t];
    let mut gc2 = vec![0.0; n_s * n_t];
    for j in 0..n_t {
        let col = metric_column(chart, form.t[j], n_s, 1, 1)?;
        for (i, mj) in col.iter().enumerate() {
            let idx = form.idx(i, j);
            let (b, bs, bt) = (mj.b.get(0, 0), mj.b.get(1, 0), mj.b.get(0, 1));
            gc1[idx] = l_t[idx] - m_s[idx] - (bt / b * form.l[idx] - bs / b * form.m[idx] + b * bt * form.n[idx]);
            gc2[idx] = m_t[idx] - n_s_der[idx] + bt / b * form.m[idx];
        }
    }
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    Ok(CodazziResiduals {
        max_gc1: max_abs(&gc1),
        max_gc2: max_abs(&gc2),
        gc1,
        gc2,
    })
}

/// Spectral `s`-derivative of a form-shaped field.
pub fn s_derivative(form: &FundamentalForm, field: &[f64], order: usize) -> Vec<f64> {
    let grid = form.s_grid();
    let n_t = form.n_t();
    let mut out = vec![0.0; field.len()];
    for j in 0..n_t {
        let col: Vec<f64> = (0..form.n_s).map(|i| field[i * n_t + j]).collect();
        let d = grid.derivative(&col, order, None);
        for i in 0..form.n_s {
            out[i * n_t + j] = d[i];
        }
    }
    out
}
