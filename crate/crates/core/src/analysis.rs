//! Coefficient evaluators, a priori estimate checks with fitted constants,
//! reduced-equation coefficients and the blow-up rescaling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::{GeodesicChart, MetricJet};
use crate::codazzi::{
    default_t0, integrate, metric_column, s_derivative, taylor_startoff, FundamentalForm, IntegrateOptions,
};
use crate::error::{Error, Result};
use crate::jet::jet_recursion;
use crate::quadrature::{nonuniform_simpson_weights, pairwise_sum};
use crate::stencil::{lagrange_weights, window_around, DiffOperator};

/// Relative drift allowed across refinements.
pub const STABILITY_DRIFT: f64 = 0.10;
/// Constants at or below this are treated as exactly zero when judging drift.
pub const NOISE_FLOOR: f64 = 1e-8;
/// Default Hölder exponent for `N`.
pub const DEFAULT_ALPHA: f64 = 1.0 / 6.0;
/// Nodes `t_0 = 0` and the first interior layer are excluded from sup-ratios.
pub const EXCLUDED_LAYERS: usize = 2;

struct Pointwise {
    b: f64,
    bs: f64,
    bt: f64,
    k: f64,
    kt: f64,
}

impl Pointwise {
    fn new(m: &MetricJet) -> Self {
        Self {
            b: m.b.get(0, 0),
            bs: m.b.get(1, 0),
            bt: m.b.get(0, 1),
            k: m.k.get(0, 0),
            kt: m.k.get(0, 1),
        }
    }
}

fn pointwise_map(
    form: &FundamentalForm,
    chart: &GeodesicChart,
    f: impl Fn(&Pointwise, f64, f64, f64) -> f64 + Sync,
) -> Result<Vec<f64>> {
    let n_t = form.n_t();
    let cols: Vec<Vec<MetricJet>> = form
        .t
        .par_iter()
        .map(|&t| metric_column(chart, t, form.n_s, 1, 1))
        .collect::<Result<_>>()?;
    let mut out = vec![0.0; form.n_s * n_t];
    for (j, col) in cols.iter().enumerate() {
        for (i, mj) in col.iter().enumerate() {
            let k = form.idx(i, j);
            out[k] = f(&Pointwise::new(mj), form.l[k], form.m[k], form.n[k]);
        }
    }
    Ok(out)
}

/// `A₂ = 2K_t B² + B B_t N² − (4B_t/B) M² + 4 B B_t K`.
pub fn coefficient_a2(form: &FundamentalForm, chart: &GeodesicChart) -> Result<Vec<f64>> {
    pointwise_map(form, chart, |p, _, m, n| {
        2.0 * p.kt * p.b * p.b + p.b * p.bt * n * n - 4.0 * p.bt / p.b * m * m + 4.0 * p.b * p.bt * p.k
    })
}

/// `Ã₂ = 2K_t B² + (B_s/B) M N − (5B_t/B) M² + 3 B B_t K`.
pub fn coefficient_a2_tilde(form: &FundamentalForm, chart: &GeodesicChart) -> Result<Vec<f64>> {
    pointwise_map(form, chart, |p, _, m, n| {
        2.0 * p.kt * p.b * p.b + p.bs / p.b * m * n - 5.0 * p.bt / p.b * m * m + 3.0 * p.b * p.bt * p.k
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct A2Lower {
    pub c1: f64,
    pub c2: f64,
    pub window: f64,
    pub pass: bool,
}

/// Fits `A₂ ≥ C₁ − C₂ M²` on `t ≤ delta` with `C₂ = sup (4B_t/B)₊`.
pub fn check_a2_lower(form: &FundamentalForm, chart: &GeodesicChart, delta: f64) -> Result<A2Lower> {
    let a2 = coefficient_a2(form, chart)?;
    let coef = pointwise_map(form, chart, |p, _, _, _| (4.0 * p.bt / p.b).max(0.0))?;
    let n_t = form.n_t();
    let mut c2: f64 = 0.0;
    for i in 0..form.n_s {
        for j in 0..n_t {
            if form.t[j] <= delta {
                c2 = c2.max(coef[i * n_t + j]);
            }
        }
    }
    let mut c1 = f64::INFINITY;
    for i in 0..form.n_s {
        for j in 0..n_t {
            if form.t[j] <= delta {
                let k = i * n_t + j;
                c1 = c1.min(a2[k] + c2 * form.m[k] * form.m[k]);
            }
        }
    }
    Ok(A2Lower {
        c1,
        c2,
        window: delta,
        pass: c1 > 0.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualField {
    /// Same layout as the form; the first `skipped_layers` t-nodes hold zero.
    pub values: Vec<f64>,
    pub skipped_layers: usize,
    pub max_abs: f64,
}

/// Residual of the second-order equation for `N` in non-divergence form,
/// with `M_s`, `M_t` eliminated through the first-order system.
pub fn second_order_residual_n(form: &FundamentalForm, chart: &GeodesicChart) -> Result<ResidualField> {
    let n_t = form.n_t();
    let n_s = form.n_s;
    let d1 = DiffOperator::new(&form.t, 1);
    let d2 = DiffOperator::new(&form.t, 2);
    let n_t_f = d1.apply_rows(&form.n, n_t);
    let n_tt = d2.apply_rows(&form.n, n_t);
    let n_s_f = s_derivative(form, &form.n, 1);
    let n_ss = s_derivative(form, &form.n, 2);
    let n_st = s_derivative(form, &n_t_f, 1);
    let skip = 1.min(n_t);
    let cols: Vec<Vec<MetricJet>> = form.t[skip..]
        .par_iter()
        .map(|&t| metric_column(chart, t, n_s, 1, 2))
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; n_s * n_t];
    for (jj, col) in cols.iter().enumerate() {
        let j = jj + skip;
        for (i, mj) in col.iter().enumerate() {
            let idx = form.idx(i, j);
            let (b, bs, bt, btt, bst) = (
                mj.b.get(0, 0),
                mj.b.get(1, 0),
                mj.b.get(0, 1),
                mj.b.get(0, 2),
                mj.b.get(1, 1),
            );
            let (k, kt, ktt) = (mj.k.get(0, 0), mj.k.get(0, 1), mj.k.get(0, 2));
            let (l, m, n) = (form.l[idx], form.m[idx], form.n[idx]);
            let (ns, nt) = (n_s_f[idx], n_t_f[idx]);
            let beta = bt / b;
            let gamma = bs / b;
            let bbt = b * bt;
            let q = -3.0 * beta * m * m + gamma * m * n - bbt * n * n + bbt * k + b * b * kt;
            let m_s = 2.0 * m / n * ns - l / n * nt + q / n;
            let m_t = ns - beta * m;
            let beta_t = btt / b - beta * beta;
            let gamma_t = bst / b - bs * bt / (b * b);
            let beta_s = gamma_t;
            let bbt_t = bt * bt + b * btt;
            let bbtk_t = bbt_t * k + bbt * kt;
            let b2kt_t = 2.0 * bbt * kt + b * b * ktt;
            let q_t = -3.0 * beta_t * m * m - 6.0 * beta * m * m_t + gamma_t * m * n + gamma * m_t * n + gamma * m * nt
                - bbt_t * n * n
                - 2.0 * bbt * n * nt
                + bbtk_t
                + b2kt_t;
            let big_i =
                2.0 * beta * m * ns + 2.0 * q / n * nt + (beta * (m * m + k * b * b) / n - gamma * m + bbt * n) * nt
                    - beta * n * m_s
                    - beta_s * m * n
                    - q_t;
            values[idx] = -l * n_tt[idx] + 2.0 * m * n_st[idx] - n * n_ss[idx] + 2.0 * l / n * nt * nt
                - 4.0 * m / n * ns * nt
                + 2.0 * ns * ns
                - big_i;
        }
    }
    let max_abs = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(ResidualField {
        values,
        skipped_layers: skip,
        max_abs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupBounds {
    pub window: f64,
    pub l_min: f64,
    pub l_max: f64,
    pub m_abs_max: f64,
    pub n_min: f64,
    pub n_max: f64,
    pub pass: bool,
}

/// Extremes of `L`, `|M|`, `N` on `t ≤ delta`.
pub fn sup_bounds(form: &FundamentalForm, delta: f64) -> SupBounds {
    let n_t = form.n_t();
    let mut out = SupBounds {
        window: delta,
        l_min: f64::INFINITY,
        l_max: f64::NEG_INFINITY,
        m_abs_max: 0.0,
        n_min: f64::INFINITY,
        n_max: f64::NEG_INFINITY,
        pass: false,
    };
    for i in 0..form.n_s {
        for j in 0..n_t {
            if form.t[j] > delta {
                continue;
            }
            let k = i * n_t + j;
            out.l_min = out.l_min.min(form.l[k]);
            out.l_max = out.l_max.max(form.l[k]);
            out.m_abs_max = out.m_abs_max.max(form.m[k].abs());
            out.n_min = out.n_min.min(form.n[k]);
            out.n_max = out.n_max.max(form.n[k]);
        }
    }
    out.pass = out.l_min >= -1e-10 && out.n_min >= 1e-6 && out.l_max.is_finite() && out.n_max.is_finite();
    out
}

fn sup_ratio(form: &FundamentalForm, f: impl Fn(usize, usize) -> f64) -> f64 {
    let n_t = form.n_t();
    let mut sup: f64 = 0.0;
    for i in 0..form.n_s {
        for j in EXCLUDED_LAYERS.min(n_t)..n_t {
            let v = f(i, j);
            if v.is_nan() {
                return f64::NAN;
            }
            sup = sup.max(v);
        }
    }
    sup
}

/// `sup |M| / √t`.
pub fn ratio_m_sqrt_t(form: &FundamentalForm) -> f64 {
    sup_ratio(form, |i, j| form.m[form.idx(i, j)].abs() / form.t[j].sqrt())
}

/// `sup |M| / t`.
pub fn ratio_m_t(form: &FundamentalForm) -> f64 {
    sup_ratio(form, |i, j| form.m[form.idx(i, j)].abs() / form.t[j])
}

/// `sup |N − N(·,0)| / t`.
pub fn ratio_n_lip(form: &FundamentalForm) -> f64 {
    holder_ratio_n(form, 1.0)
}

/// `sup |N − N(·,0)| / t^α`.
pub fn holder_ratio_n(form: &FundamentalForm, alpha: f64) -> f64 {
    sup_ratio(form, |i, j| {
        (form.n[form.idx(i, j)] - form.n[form.idx(i, 0)]).abs() / form.t[j].powf(alpha)
    })
}

/// `∫∫ (t N_t² + N_s²) ds dt` over one period and `t ≤ t_end / 2`.
pub fn energy_norm_n(form: &FundamentalForm) -> Result<f64> {
    let n_t = form.n_t();
    let t_end = *form.t.last().ok_or_else(|| Error::BadParameters("empty form".into()))?;
    let keep = form.t.partition_point(|&t| t <= 0.5 * t_end * (1.0 + 1e-12));
    if keep < 3 {
        return Err(Error::BadParameters("too few t-nodes below t_end / 2".into()));
    }
    let d1 = DiffOperator::new(&form.t, 1);
    let n_t_f = d1.apply_rows(&form.n, n_t);
    let n_s_f = s_derivative(form, &form.n, 1);
    let wt = nonuniform_simpson_weights(&form.t[..keep]);
    let hs = form.period / form.n_s as f64;
    let rows: Vec<f64> = (0..form.n_s)
        .map(|i| {
            let terms: Vec<f64> = (0..keep)
                .map(|j| {
                    let k = form.idx(i, j);
                    wt[j] * (form.t[j] * n_t_f[k] * n_t_f[k] + n_s_f[k] * n_s_f[k])
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    Ok(hs * pairwise_sum(&rows))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedCoefficients {
    /// `t`-nodes with `t > 0`; fields are `(n_s × t.len())`, `s` slow.
    pub t: Vec<f64>,
    pub a22_bar: Vec<f64>,
    pub a12: Vec<f64>,
    pub a11: Vec<f64>,
    /// Richardson-extrapolated `ā₂₂(s, 0⁺)` and its predicted value `K_t B²`.
    pub a22_limit: Vec<f64>,
    pub a22_expected: Vec<f64>,
    /// Richardson-extrapolated `a₁₁(s, 0⁺)` and its predicted value `N(s,0)² / K_t(s,0)`.
    pub a11_limit: Vec<f64>,
    pub a11_expected: Vec<f64>,
    pub a22_rel_error: f64,
    pub a11_rel_error: f64,
    pub richardson_tau: f64,
}

/// Richardson base step for the boundary limits.
pub const RICHARDSON_TAU: f64 = 0.05;

fn interp_t(nodes: &[f64], values: &[f64], t: f64) -> f64 {
    let start = window_around(nodes, t, 4);
    let w = lagrange_weights(t, &nodes[start..start + 4]);
    w.iter().zip(&values[start..start + 4]).map(|(a, b)| a * b).sum()
}

/// `ā₂₂ = NL/t`, `a₁₂ = NM/(t ā₂₂)`, `a₁₁ = N²/ā₂₂` at all `t > 0`, plus the
/// boundary limits from second-order Richardson extrapolation at `τ, 2τ, 4τ`.
pub fn reduced_coefficients(form: &FundamentalForm, chart: &GeodesicChart) -> Result<ReducedCoefficients> {
    let n_t = form.n_t();
    let first = form.t.partition_point(|&t| t <= 0.0);
    let t: Vec<f64> = form.t[first..].to_vec();
    let nt_r = t.len();
    let tau = RICHARDSON_TAU.min(*t.last().unwrap_or(&0.0) / 4.0);
    if nt_r < 4 || tau <= t[0] {
        return Err(Error::BadParameters("form too short for boundary extrapolation".into()));
    }
    let mut a22 = vec![0.0; form.n_s * nt_r];
    let mut a12 = vec![0.0; form.n_s * nt_r];
    let mut a11 = vec![0.0; form.n_s * nt_r];
    for i in 0..form.n_s {
        for (jj, &tj) in t.iter().enumerate() {
            let k = i * n_t + first + jj;
            let v = form.n[k] * form.l[k] / tj;
            if !(v >= 1e-10) {
                return Err(Error::DivisionHazard {
                    i,
                    j: first + jj,
                    value: v,
                });
            }
            let o = i * nt_r + jj;
            a22[o] = v;
            a12[o] = form.n[k] * form.m[k] / (tj * v);
            a11[o] = form.n[k] * form.n[k] / v;
        }
    }
    let boundary = metric_column(chart, 0.0, form.n_s, 0, 1)?;
    let rich = |field: &[f64], i: usize| {
        let row = &field[i * nt_r..(i + 1) * nt_r];
        let f = |x: f64| interp_t(&t, row, x);
        (8.0 * f(tau) - 6.0 * f(2.0 * tau) + f(4.0 * tau)) / 3.0
    };
    let mut out = ReducedCoefficients {
        t: t.clone(),
        a22_limit: (0..form.n_s).map(|i| rich(&a22, i)).collect(),
        a11_limit: (0..form.n_s).map(|i| rich(&a11, i)).collect(),
        a22_expected: boundary.iter().map(|m| m.k.get(0, 1) * m.b.get(0, 0).powi(2)).collect(),
        a11_expected: boundary
            .iter()
            .enumerate()
            .map(|(i, m)| form.n[form.idx(i, 0)].powi(2) / m.k.get(0, 1))
            .collect(),
        a22_bar: a22,
        a12,
        a11,
        a22_rel_error: 0.0,
        a11_rel_error: 0.0,
        richardson_tau: tau,
    };
    let rel = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max);
    out.a22_rel_error = rel(&out.a22_limit, &out.a22_expected);
    out.a11_rel_error = rel(&out.a11_limit, &out.a11_expected);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupFrame {
    pub s_k: f64,
    pub t_k: f64,
    pub theta_k: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `(x.len() × y.len())`, `x` slow.
    pub w_bar: Vec<f64>,
    pub m_bar: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupWindow {
    pub x_half_width: f64,
    pub y_max: f64,
    pub n_x: usize,
    pub n_y: usize,
}

impl Default for BlowupWindow {
    fn default() -> Self {
        Self {
            x_half_width: 1.0,
            y_max: 2.0,
            n_x: 17,
            n_y: 16,
        }
    }
}

/// Resample `w = 1/N² − 1/N²(s,0)` and `M` in `x = (s − s_k)/√t_k`,
/// `y = t/t_k`, scaled by `1/(θ_k t_k)`.
pub fn blowup_rescale(
    form: &FundamentalForm,
    center: (f64, f64),
    theta_k: f64,
    window: &BlowupWindow,
) -> Result<BlowupFrame> {
    let (s_k, t_k) = center;
    let t_top = *form.t.last().unwrap_or(&0.0);
    if !(t_k > 0.0) || !(theta_k > 0.0) {
        return Err(Error::WindowOutOfRange(format!(
            "need t_k > 0 and theta_k > 0 (t_k = {t_k})"
        )));
    }
    if window.y_max * t_k > t_top * (1.0 + 1e-12) {
        return Err(Error::WindowOutOfRange(format!(
            "y_max t_k = {} exceeds the form depth {t_top}",
            window.y_max * t_k
        )));
    }
    if 2.0 * window.x_half_width * t_k.sqrt() > form.period {
        return Err(Error::WindowOutOfRange(
            "x-window wraps the boundary more than once".into(),
        ));
    }
    if window.n_x < 2 || window.n_y < 1 || form.n_t() < 4 {
        return Err(Error::BadParameters("blow-up window needs n_x >= 2, n_y >= 1".into()));
    }
    let n_t = form.n_t();
    let grid = form.s_grid();
    let x: Vec<f64> = (0..window.n_x)
        .map(|p| -window.x_half_width + 2.0 * window.x_half_width * p as f64 / (window.n_x - 1) as f64)
        .collect();
    let y: Vec<f64> = (1..=window.n_y)
        .map(|q| window.y_max * q as f64 / window.n_y as f64)
        .collect();
    let w: Vec<f64> = (0..form.n_s)
        .flat_map(|i| {
            let base = form.n[form.idx(i, 0)].powi(-2);
            (0..n_t).map(move |j| (i, j, base))
        })
        .map(|(i, j, base)| form.n[form.idx(i, j)].powi(-2) - base)
        .collect();
    let column = |field: &[f64], j: usize| -> Vec<f64> { (0..form.n_s).map(|i| field[i * n_t + j]).collect() };
    let scale = 1.0 / (theta_k * t_k);
    let mut w_bar = vec![0.0; x.len() * y.len()];
    let mut m_bar = vec![0.0; x.len() * y.len()];
    for (p, &xp) in x.iter().enumerate() {
        let s = s_k + xp * t_k.sqrt();
        let w_s: Vec<f64> = (0..n_t).map(|j| grid.interpolate(&column(&w, j), s)).collect();
        let m_s: Vec<f64> = (0..n_t).map(|j| grid.interpolate(&column(&form.m, j), s)).collect();
        for (q, &yq) in y.iter().enumerate() {
            let t = yq * t_k;
            w_bar[p * y.len() + q] = scale * interp_t(&form.t, &w_s, t);
            m_bar[p * y.len() + q] = scale * interp_t(&form.t, &m_s, t);
        }
    }
    Ok(BlowupFrame {
        s_k,
        t_k,
        theta_k,
        x,
        y,
        w_bar,
        m_bar,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementPoint {
    pub resolution: String,
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateEntry {
    pub id: String,
    pub inequality: String,
    /// Fitted constant on the finest level.
    pub constant: f64,
    /// Finest-level nodes where the ratio exceeds the coarsest-level constant
    /// by more than the drift tolerance.
    pub violations: usize,
    pub history: Vec<RefinementPoint>,
    pub drift: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub fixture: String,
    pub excluded_layers: usize,
    pub alpha: f64,
    pub entries: Vec<EstimateEntry>,
}

impl EstimateReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, id: &str) -> Option<&EstimateEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Relative spread `(max − min)/max` of a refinement history; zero when every
/// constant sits at the noise floor.
pub fn drift(constants: &[f64]) -> f64 {
    let max = constants.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = constants.iter().copied().fold(f64::INFINITY, f64::min);
    if constants.iter().any(|c| !c.is_finite()) {
        return f64::INFINITY;
    }
    if max <= NOISE_FLOOR {
        return 0.0;
    }
    (max - min.max(0.0)) / max
}

/// Field corruptions used as negative controls for the estimate checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativeControl {
    /// `M += 0.1 t^{1/4}`.
    MQuarterPower,
    /// `N += 0.1 t^{1/2}`.
    NSqrt,
    /// `N += 0.5 t^{1/20}`.
    NTinyPower,
    /// `N += 0.05 sin(4 ln t)` for `t > 0`.
    NLogOscillation,
}

impl NegativeControl {
    pub fn all() -> [NegativeControl; 4] {
        [
            NegativeControl::MQuarterPower,
            NegativeControl::NSqrt,
            NegativeControl::NTinyPower,
            NegativeControl::NLogOscillation,
        ]
    }

    pub fn apply(self, form: &mut FundamentalForm) {
        let n_t = form.n_t();
        for i in 0..form.n_s {
            for j in 0..n_t {
                let t = form.t[j];
                let k = i * n_t + j;
                match self {
                    NegativeControl::MQuarterPower => form.m[k] += 0.1 * t.powf(0.25),
                    NegativeControl::NSqrt => form.n[k] += 0.1 * t.sqrt(),
                    NegativeControl::NTinyPower => form.n[k] += 0.5 * t.powf(0.05),
                    NegativeControl::NLogOscillation => {
                        if t > 0.0 {
                            form.n[k] += 0.05 * (4.0 * t.ln()).sin()
                        }
                    }
                }
            }
        }
    }

    /// Estimate entry this corruption is designed to break.
    pub fn target(self) -> &'static str {
        match self {
            NegativeControl::MQuarterPower => "m_sqrt_t",
            NegativeControl::NSqrt => "n_lipschitz",
            NegativeControl::NTinyPower => "n_holder",
            NegativeControl::NLogOscillation => "energy_n",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteLevel {
    pub n_s: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub levels: Vec<SuiteLevel>,
    pub t_end: f64,
    /// `None` uses the integrator default `max(1e-3 t_max, h_t)`, floored at 1e-2.
    pub t0: Option<f64>,
    pub jet_order: usize,
    pub alpha: f64,
    /// Window for the sup bounds and the `A₂` lower bound.
    pub delta: f64,
    pub control: Option<NegativeControl>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            levels: vec![
                SuiteLevel { n_s: 32, steps: 100 },
                SuiteLevel { n_s: 48, steps: 200 },
                SuiteLevel { n_s: 64, steps: 400 },
            ],
            t_end: 0.9,
            t0: Some(1e-2),
            jet_order: 4,
            alpha: DEFAULT_ALPHA,
            delta: 0.3,
            control: None,
        }
    }
}

/// Integrated form at one refinement level, with the optional corruption applied.
pub fn suite_form(chart: &GeodesicChart, cfg: &SuiteConfig, steps: usize) -> Result<FundamentalForm> {
    let jet = jet_recursion(chart, cfg.jet_order)?;
    let t0 = cfg.t0.unwrap_or_else(|| default_t0(chart).max(1e-2));
    let start = taylor_startoff(&jet, t0)?;
    let mut form = integrate(chart, &start, cfg.t_end, steps, &IntegrateOptions::default())?.form;
    if let Some(c) = cfg.control {
        c.apply(&mut form);
    }
    Ok(form)
}

struct LevelValues {
    resolution: String,
    values: Vec<f64>,
}

/// Runs every estimate check at each refinement level. `chart_at(n_s)` builds
/// the chart for a level.
pub fn estimate_suite(
    fixture: &str,
    chart_at: impl Fn(usize) -> Result<GeodesicChart>,
    cfg: &SuiteConfig,
) -> Result<EstimateReport> {
    if cfg.levels.len() < 3 {
        return Err(Error::BadParameters(
            "the stability criterion needs at least 3 refinement levels".into(),
        ));
    }
    let ids: [(&str, &str); 7] = [
        ("sup_bounds", "0 <= L <= C, |M| <= C, 1/C <= N <= C"),
        ("a2_lower", "A2 >= C1 - C2 M^2 (C1 reported)"),
        ("m_sqrt_t", "|M| <= C sqrt(t)"),
        ("m_t", "|M| <= C t"),
        ("n_lipschitz", "|N - N(.,0)| <= C t"),
        ("n_holder", "|N - N(.,0)| <= C t^alpha"),
        ("energy_n", "int (t N_t^2 + N_s^2) <= C"),
    ];
    let mut levels = Vec::with_capacity(cfg.levels.len());
    let mut finest: Option<FundamentalForm> = None;
    for lvl in &cfg.levels {
        let chart = chart_at(lvl.n_s)?;
        let form = suite_form(&chart, cfg, lvl.steps)?;
        let sb = sup_bounds(&form, cfg.delta);
        let sup_const = if sb.pass {
            sb.l_max.max(sb.m_abs_max).max(sb.n_max).max(1.0 / sb.n_min)
        } else {
            f64::INFINITY
        };
        let a2 = check_a2_lower(&form, &chart, cfg.delta)?;
        let values = vec![
            sup_const,
            if a2.pass { a2.c1 } else { f64::INFINITY },
            ratio_m_sqrt_t(&form),
            ratio_m_t(&form),
            ratio_n_lip(&form),
            holder_ratio_n(&form, cfg.alpha),
            energy_norm_n(&form)?,
        ];
        levels.push(LevelValues {
            resolution: format!("{}x{}", form.n_s, form.n_t()),
            values,
        });
        finest = Some(form);
    }
    let finest = finest.expect("at least one level");
    let coarse = &levels[0].values;
    let violations = [
        0,
        0,
        count_exceeding(&finest, coarse[2], |f, i, j| f.m[f.idx(i, j)].abs() / f.t[j].sqrt()),
        count_exceeding(&finest, coarse[3], |f, i, j| f.m[f.idx(i, j)].abs() / f.t[j]),
        count_exceeding(&finest, coarse[4], |f, i, j| {
            (f.n[f.idx(i, j)] - f.n[f.idx(i, 0)]).abs() / f.t[j]
        }),
        count_exceeding(&finest, coarse[5], |f, i, j| {
            (f.n[f.idx(i, j)] - f.n[f.idx(i, 0)]).abs() / f.t[j].powf(cfg.alpha)
        }),
        0,
    ];
    let entries = ids
        .iter()
        .enumerate()
        .map(|(e, (id, ineq))| {
            let history: Vec<RefinementPoint> = levels
                .iter()
                .map(|l| RefinementPoint {
                    resolution: l.resolution.clone(),
                    constant: l.values[e],
                })
                .collect();
            let consts: Vec<f64> = history.iter().map(|h| h.constant).collect();
            let d = drift(&consts);
            let constant = *consts.last().unwrap();
            EstimateEntry {
                id: id.to_string(),
                inequality: ineq.to_string(),
                constant,
                violations: violations[e],
                history,
                drift: d,
                pass: constant.is_finite() && constant >= 0.0 && d < STABILITY_DRIFT,
            }
        })
        .collect();
    Ok(EstimateReport {
        fixture: fixture.to_string(),
        excluded_layers: EXCLUDED_LAYERS,
        alpha: cfg.alpha,
        entries,
    })
}

fn count_exceeding(
    form: &FundamentalForm,
    reference: f64,
    ratio: impl Fn(&FundamentalForm, usize, usize) -> f64,
) -> usize {
    let cap = if reference <= NOISE_FLOOR {
        NOISE_FLOOR
    } else {
        reference * (1.0 + STABILITY_DRIFT)
    };
    let mut count = 0;
    for i in 0..form.n_s {
        for j in EXCLUDED_LAYERS.min(form.n_t())..form.n_t() {
            if !(ratio(form, i, j) <= cap) {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{default_revolution_fixture, torus_fixture};

    fn torus_exact(n_s: usize, n_t: usize, t_max: f64) -> (GeodesicChart, FundamentalForm) {
        let fx = torus_fixture(1.0, 2.0).unwrap();
        let chart = fx.chart(n_s, 8).unwrap();
        let t: Vec<f64> = (0..n_t).map(|j| t_max * j as f64 / (n_t - 1) as f64).collect();
        let form = fx.exact_form(n_s, &t).unwrap();
        (chart, form)
    }

    #[test]
    fn a2_values_on_torus() {
        let (chart, form) = torus_exact(8, 65, std::f64::consts::FRAC_PI_2);
        let a2 = coefficient_a2(&form, &chart).unwrap();
        let a2t = coefficient_a2_tilde(&form, &chart).unwrap();
        assert!((a2[0] - 1.5).abs() < 1e-12);
        assert!((a2t[0] - 1.0).abs() < 1e-12);
        assert!(a2[64].abs() < 1e-12);
        // pointwise difference on an s-independent chart with M = 0
        for j in 0..65 {
            let t = form.t[j];
            let b = 1.0 + 0.5 * t.sin();
            let bt = 0.5 * t.cos();
            let k = t.sin() / (2.0 + t.sin());
            assert!((a2[j] - a2t[j] - b * bt * (1.0 + k)).abs() < 1e-10);
        }
    }

    #[test]
    fn a2_lower_bound() {
        let (chart, form) = torus_exact(8, 33, 0.3);
        let r = check_a2_lower(&form, &chart, 0.3).unwrap();
        assert!(r.pass && r.c1 >= 1.0, "{r:?}");
    }

    #[test]
    fn second_order_residual_exact_and_random() {
        let (chart, form) = torus_exact(16, 161, 1.2);
        let r = second_order_residual_n(&form, &chart).unwrap();
        assert!(r.max_abs < 1e-6, "{}", r.max_abs);
        let fx = default_revolution_fixture().unwrap();
        let chart = fx.chart(8, 8).unwrap();
        let t: Vec<f64> = (0..201).map(|j| 0.9 * j as f64 / 200.0).collect();
        let form = fx.exact_form(8, &t).unwrap();
        let r = second_order_residual_n(&form, &chart).unwrap();
        assert!(r.max_abs < 1e-6, "revolution {}", r.max_abs);
        let mut junk = form.clone();
        for (k, v) in junk.n.iter_mut().enumerate() {
            *v += 0.3 * (0.7 * k as f64).sin();
        }
        assert!(second_order_residual_n(&junk, &chart).unwrap().max_abs > 0.1);
    }

    #[test]
    fn sup_bounds_and_ratios_on_torus() {
        let (_, form) = torus_exact(8, 101, std::f64::consts::FRAC_PI_2);
        let sb = sup_bounds(&form, 10.0);
        assert!(sb.pass);
        assert!((sb.l_max - 0.75).abs() < 1e-12 && sb.l_min.abs() < 1e-15);
        assert_eq!((sb.n_min, sb.n_max, sb.m_abs_max), (1.0, 1.0, 0.0));
        assert_eq!(ratio_m_sqrt_t(&form), 0.0);
        assert_eq!(ratio_n_lip(&form), 0.0);
        assert!(energy_norm_n(&form).unwrap() < 1e-20);
    }

    #[test]
    fn energy_of_linear_n() {
        let (_, mut form) = torus_exact(8, 81, 1.0);
        let n_t = form.n_t();
        for i in 0..form.n_s {
            for j in 0..n_t {
                form.n[i * n_t + j] = 1.0 + form.t[j];
            }
        }
        let e = energy_norm_n(&form).unwrap();
        let exact = form.period * 0.5f64.powi(2) / 2.0;
        assert!((e - exact).abs() < 1e-12, "{e} vs {exact}");
    }

    #[test]
    fn window_monotonicity() {
        let fx = default_revolution_fixture().unwrap();
        let t: Vec<f64> = (0..101).map(|j| 0.9 * j as f64 / 100.0).collect();
        let form = fx.exact_form(8, &t).unwrap();
        let short = form.truncated(0.4);
        assert!(ratio_n_lip(&short) <= ratio_n_lip(&form));
        assert!(holder_ratio_n(&short, 0.5) <= holder_ratio_n(&form, 0.5));
    }

    #[test]
    fn reduced_coefficients_torus_limits() {
        let (chart, form) = torus_exact(8, 101, 1.0);
        let r = reduced_coefficients(&form, &chart).unwrap();
        assert!(
            r.a11_rel_error < 1e-3 && r.a22_rel_error < 1e-3,
            "{} {}",
            r.a11_rel_error,
            r.a22_rel_error
        );
        assert!((r.a11_expected[0] - 2.0).abs() < 1e-12);
        assert!(r.a12.iter().all(|&v| v == 0.0));
        let mut bad = form.clone();
        bad.l.iter_mut().for_each(|v| *v = 0.0);
        assert!(matches!(
            reduced_coefficients(&bad, &chart),
            Err(Error::DivisionHazard { .. })
        ));
    }

    #[test]
    fn blowup_frames() {
        let (_, form) = torus_exact(16, 101, 1.0);
        let f = blowup_rescale(&form, (0.3, 0.1), 1.0, &BlowupWindow::default()).unwrap();
        assert!(f.w_bar.iter().all(|&v| v.abs() < 1e-12));
        assert!(matches!(
            blowup_rescale(&form, (0.0, 2.0), 1.0, &BlowupWindow::default()),
            Err(Error::WindowOutOfRange(_))
        ));
        let fx = default_revolution_fixture().unwrap();
        let t: Vec<f64> = (0..181).map(|j| 0.9 * j as f64 / 180.0).collect();
        let form = fx.exact_form(16, &t).unwrap();
        let frame = blowup_rescale(&form, (0.0, 0.1), 1.0, &BlowupWindow::default()).unwrap();
        // |w| <= (2 / N_min³) |N - N0|, so |w̄| <= C_w y with C_w from the Lipschitz ratio
        let c_w = 2.0 * ratio_n_lip(&form) / form.n.iter().copied().fold(f64::INFINITY, f64::min).powi(3);
        for (p, _) in frame.x.iter().enumerate() {
            for (q, &y) in frame.y.iter().enumerate() {
                assert!(frame.w_bar[p * frame.y.len() + q].abs() <= c_w * y * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn drift_rules() {
        assert_eq!(drift(&[0.0, 1e-12, 0.0]), 0.0);
        assert!((drift(&[1.0, 1.05, 0.98]) - 0.07 / 1.05).abs() < 1e-12);
        assert!(drift(&[1.0, f64::INFINITY]).is_infinite());
    }
}
