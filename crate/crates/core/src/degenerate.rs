//! The model operator `t u_tt + a u_t + κ u_ss = f` on a truncated half-strip,
//! its weighted norms, the weighted Sobolev/Poincaré inequalities and the
//! Liouville check for the blow-up limit equation.
//!
//! The solver works in `τ = 2√t`, where the operator reads
//! `v_ττ + ((2a − 1)/τ) v_τ + κ v_ss`. No condition is imposed at `τ = 0`;
//! the centre row is the symmetric (bounded) limit of the flux form.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, simpson_weights};
use crate::stencil::lagrange_weights;

/// Lower limit of the drift.
pub const MIN_DRIFT: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// `s` periodic with the given period, `0 ≤ t ≤ t_max`.
    Periodic { period: f64, t_max: f64 },
    /// `|s| ≤ half_width` with `u = 0` on the lateral sides.
    Interval { half_width: f64, t_max: f64 },
}

impl Domain {
    pub fn t_max(&self) -> f64 {
        match self {
            Domain::Periodic { t_max, .. } | Domain::Interval { t_max, .. } => *t_max,
        }
    }

    fn with_t_max(&self, t: f64) -> Self {
        match self {
            Domain::Periodic { period, .. } => Domain::Periodic {
                period: *period,
                t_max: t,
            },
            Domain::Interval { half_width, .. } => Domain::Interval {
                half_width: *half_width,
                t_max: t,
            },
        }
    }

    /// `s` nodes: `n` periodic nodes, or `n + 1` nodes including both sides.
    pub fn s_nodes(&self, n: usize) -> Vec<f64> {
        match self {
            Domain::Periodic { period, .. } => (0..n).map(|i| i as f64 * period / n as f64).collect(),
            Domain::Interval { half_width, .. } => (0..=n)
                .map(|i| -half_width + 2.0 * half_width * i as f64 / n as f64)
                .collect(),
        }
    }

    fn s_spacing(&self, n: usize) -> f64 {
        match self {
            Domain::Periodic { period, .. } => period / n as f64,
            Domain::Interval { half_width, .. } => 2.0 * half_width / n as f64,
        }
    }

    /// Wavenumber of the `j`-th manufactured mode (vanishing on the sides for intervals).
    pub fn wavenumber(&self, j: u32) -> f64 {
        match self {
            Domain::Periodic { period, .. } => 2.0 * PI * j as f64 / period,
            Domain::Interval { half_width, .. } => (2 * j - 1) as f64 * PI / (2.0 * half_width),
        }
    }

    fn s_weights(&self, n: usize) -> Vec<f64> {
        let h = self.s_spacing(n);
        match self {
            Domain::Periodic { .. } => vec![h; n],
            Domain::Interval { .. } => simpson_weights(n + 1, h),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Forcing {
    Zero,
    /// Right-hand side of `u = e^{−t} cos(q_j s)`.
    Manufactured {
        mode: u32,
    },
    /// `f = amplitude e^{−t} (1 + cos(q_1 s)) / 2`.
    Bump {
        amplitude: f64,
    },
    /// Samples on the problem's `s` nodes × `n_t` uniform `t` nodes on `[0, t_max]`, `s` slow.
    Grid {
        n_s: usize,
        n_t: usize,
        values: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FarField {
    Zero,
    /// Exact manufactured solution at `t = t_max`.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConditions {
    pub far_field: FarField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerateProblem {
    pub a: f64,
    #[serde(default = "unit")]
    pub kappa: f64,
    pub domain: Domain,
    pub f: Forcing,
    pub bc: BoundaryConditions,
}

fn unit() -> f64 {
    1.0
}

impl DegenerateProblem {
    pub fn manufactured(a: f64, mode: u32, domain: Domain) -> Self {
        Self {
            a,
            kappa: 1.0,
            domain,
            f: Forcing::Manufactured { mode },
            bc: BoundaryConditions {
                far_field: FarField::Exact,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > MIN_DRIFT) {
            return Err(Error::DriftOutOfRange(self.a));
        }
        if !(self.kappa > 0.0) || !(self.domain.t_max() > 0.0) {
            return Err(Error::BadParameters("kappa and t_max must be positive".into()));
        }
        if self.bc.far_field == FarField::Exact && !matches!(self.f, Forcing::Manufactured { .. } | Forcing::Zero) {
            return Err(Error::BadParameters(
                "exact far-field data needs a manufactured forcing".into(),
            ));
        }
        Ok(())
    }

    /// Exact solution for manufactured and zero forcings.
    pub fn exact(&self, s: f64, t: f64) -> Option<f64> {
        match self.f {
            Forcing::Zero => Some(0.0),
            Forcing::Manufactured { mode } => Some((-t).exp() * (self.domain.wavenumber(mode) * s).cos()),
            _ => None,
        }
    }

    fn forcing_at(&self, s_nodes: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(match &self.f {
            Forcing::Zero => vec![0.0; s_nodes.len()],
            Forcing::Manufactured { mode } => {
                let q = self.domain.wavenumber(*mode);
                let c = t - self.a - self.kappa * q * q;
                s_nodes.iter().map(|&s| c * (-t).exp() * (q * s).cos()).collect()
            }
            Forcing::Bump { amplitude } => {
                let q = self.domain.wavenumber(1);
                s_nodes
                    .iter()
                    .map(|&s| amplitude * (-t).exp() * 0.5 * (1.0 + (q * s).cos()))
                    .collect()
            }
            Forcing::Grid { n_s, n_t, values } => {
                if *n_s != s_nodes.len() || values.len() != n_s * n_t || *n_t < 4 {
                    return Err(Error::BadParameters(format!(
                        "forcing grid is {n_s}x{n_t} with {} values; the mesh needs {} s-nodes",
                        values.len(),
                        s_nodes.len()
                    )));
                }
                let ht = self.domain.t_max() / (n_t - 1) as f64;
                let nodes: Vec<f64> = (0..*n_t).map(|j| j as f64 * ht).collect();
                let start = crate::stencil::window_around(&nodes, t, 4);
                let w = lagrange_weights(t, &nodes[start..start + 4]);
                (0..*n_s)
                    .map(|i| (0..4).map(|q| w[q] * values[i * n_t + start + q]).sum())
                    .collect()
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateMesh {
    /// Periodic nodes, or intervals across `[−S, S]`.
    pub n_s: usize,
    /// Uniform intervals on `[0, 2√t_max]`.
    pub n_tau: usize,
}

/// Grid solution with the constituents of `I_p`. Fields are `(s × τ)`, `s` slow.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateSolution {
    pub a: f64,
    pub kappa: f64,
    pub domain: Domain,
    pub mesh: DegenerateMesh,
    pub s: Vec<f64>,
    pub tau: Vec<f64>,
    /// `t_j = τ_j² / 4`.
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
    pub u_ss: Vec<f64>,
    pub sqrt_t_u_st: Vec<f64>,
    pub t_u_tt: Vec<f64>,
    /// Forcing on the same grid.
    pub f: Vec<f64>,
}

impl DegenerateSolution {
    pub fn n_tau_nodes(&self) -> usize {
        self.tau.len()
    }

    /// Largest nodal deviation from the exact solution, if one is known.
    pub fn max_error(&self, problem: &DegenerateProblem) -> Option<f64> {
        let nt = self.tau.len();
        let mut err: f64 = 0.0;
        for (i, &s) in self.s.iter().enumerate() {
            for (j, &t) in self.t.iter().enumerate() {
                err = err.max((self.u[i * nt + j] - problem.exact(s, t)?).abs());
            }
        }
        Some(err)
    }

    fn fields(&self) -> [&[f64]; 5] {
        [&self.u, &self.u_t, &self.u_ss, &self.sqrt_t_u_st, &self.t_u_tt]
    }
}

/// Per-mode eigenvalues of `κ ∂_ss` (second-order differences) and the transforms.
enum SBasis {
    Periodic {
        n: usize,
    },
    /// DST-I on the `n − 1` interior nodes.
    Sine {
        n: usize,
    },
}

impl SBasis {
    fn new(domain: &Domain, n: usize) -> Self {
        match domain {
            Domain::Periodic { .. } => SBasis::Periodic { n },
            Domain::Interval { .. } => SBasis::Sine { n },
        }
    }

    fn eigenvalues(&self, h: f64, kappa: f64) -> Vec<f64> {
        let c = -4.0 * kappa / (h * h);
        match *self {
            SBasis::Periodic { n } => (0..n).map(|k| c * (PI * k as f64 / n as f64).sin().powi(2)).collect(),
            SBasis::Sine { n } => (1..n)
                .map(|k| c * (PI * k as f64 / (2 * n) as f64).sin().powi(2))
                .collect(),
        }
    }

    fn sine_table(n: usize) -> Vec<f64> {
        (0..2 * n).map(|k| (PI * k as f64 / n as f64).sin()).collect()
    }
}

/// Solves `p x = r` for a tridiagonal `p`; returns `None` on a vanishing pivot.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if !(piv.abs() > 1e-300) {
        return None;
    }
    c[0] = upper[0] / piv;
    d[0] = rhs[0] / piv;
    for j in 1..n {
        piv = diag[j] - lower[j] * c[j - 1];
        if !(piv.abs() > 1e-300) || !piv.is_finite() {
            return None;
        }
        c[j] = if j + 1 < n { upper[j] / piv } else { 0.0 };
        d[j] = (rhs[j] - lower[j] * d[j - 1]) / piv;
    }
    let mut x = d;
    for j in (0..n - 1).rev() {
        x[j] -= c[j] * x[j + 1];
    }
    Some(x)
}

/// Radial (τ) part of the discrete operator: rows `0..n_tau`, the last node is Dirichlet.
struct RadialOperator {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl RadialOperator {
    fn new(m: f64, h: f64, n: usize) -> Self {
        let h2 = h * h;
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        diag[0] = -2.0 * (m + 1.0) / h2;
        upper[0] = 2.0 * (m + 1.0) / h2;
        // finite volumes with exact cell averages of τ^m: monotone, and exact
        // on even quadratics
        for j in 1..n {
            let jf = j as f64;
            let vol = ((jf + 0.5).powf(m + 1.0) - (jf - 0.5).powf(m + 1.0)) / (m + 1.0);
            let lo = (jf - 0.5).powf(m) / vol / h2;
            let up = (jf + 0.5).powf(m) / vol / h2;
            lower[j] = lo;
            upper[j] = up;
            diag[j] = -(lo + up);
        }
        Self { lower, diag, upper }
    }

    fn solve(&self, lambda: f64, rhs: &[f64], top: f64) -> Option<Vec<f64>> {
        let n = self.diag.len();
        let diag: Vec<f64> = self.diag.iter().map(|d| d + lambda).collect();
        let mut r = rhs.to_vec();
        r[n - 1] -= self.upper[n - 1] * top;
        let mut v = thomas(&self.lower, &diag, &self.upper, &r)?;
        v.push(top);
        Some(v)
    }
}

/// Solve the model problem on the given mesh.
pub fn solve_model(problem: &DegenerateProblem, mesh: DegenerateMesh) -> Result<DegenerateSolution> {
    problem.validate()?;
    let DegenerateMesh { n_s, n_tau } = mesh;
    if n_s < 4 || n_tau < 4 || n_tau % 2 != 0 || (matches!(problem.domain, Domain::Interval { .. }) && n_s % 2 != 0) {
        return Err(Error::BadParameters(
            "mesh needs n_s >= 4, even n_tau >= 4 (and even n_s on intervals)".into(),
        ));
    }
    let m = 2.0 * problem.a - 1.0;
    let tau_max = 2.0 * problem.domain.t_max().sqrt();
    let h = tau_max / n_tau as f64;
    let tau: Vec<f64> = (0..=n_tau).map(|j| j as f64 * h).collect();
    let t: Vec<f64> = tau.iter().map(|x| x * x / 4.0).collect();
    let s = problem.domain.s_nodes(n_s);
    let hs = problem.domain.s_spacing(n_s);
    let ns_all = s.len();
    let ntn = tau.len();

    // forcing rows f(·, t_j) for j < n_tau, far-field row at j = n_tau
    let f_rows: Vec<Vec<f64>> = t
        .par_iter()
        .map(|&tj| problem.forcing_at(&s, tj))
        .collect::<Result<_>>()?;
    let top: Vec<f64> = match problem.bc.far_field {
        FarField::Zero => vec![0.0; ns_all],
        FarField::Exact => s.iter().map(|&si| problem.exact(si, t[n_tau]).unwrap_or(0.0)).collect(),
    };

    let basis = SBasis::new(&problem.domain, n_s);
    let lambdas = basis.eigenvalues(hs, problem.kappa);
    let radial = RadialOperator::new(m, h, n_tau);
    let singular = || Error::SolverSingular("vanishing pivot in the radial solve".into());

    let u_modes: Vec<Vec<f64>> = match basis {
        SBasis::Periodic { n } => {
            let mut planner = FftPlanner::<f64>::new();
            let fwd = planner.plan_fft_forward(n);
            let inv = planner.plan_fft_inverse(n);
            let to_modes = |row: &[f64]| {
                let mut buf: Vec<Complex64> = row.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fwd.process(&mut buf);
                buf
            };
            let f_hat: Vec<Vec<Complex64>> = f_rows[..n_tau].iter().map(|r| to_modes(r)).collect();
            let top_hat = to_modes(&top);
            let cols: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
                .into_par_iter()
                .map(|k| {
                    let re: Vec<f64> = f_hat.iter().map(|r| r[k].re).collect();
                    let im: Vec<f64> = f_hat.iter().map(|r| r[k].im).collect();
                    let vr = radial.solve(lambdas[k], &re, top_hat[k].re).ok_or_else(singular)?;
                    let vi = radial.solve(lambdas[k], &im, top_hat[k].im).ok_or_else(singular)?;
                    Ok((vr, vi))
                })
                .collect::<Result<_>>()?;
            let mut u = vec![vec![0.0; ntn]; n];
            for j in 0..ntn {
                let mut buf: Vec<Complex64> = cols.iter().map(|(r, i)| Complex64::new(r[j], i[j])).collect();
                inv.process(&mut buf);
                for (i, z) in buf.iter().enumerate() {
                    u[i][j] = z.re / n as f64;
                }
            }
            u
        }
        SBasis::Sine { .. } => {
            let flat = solve_sine(problem, mesh, |j| f_rows[j].clone(), &top)?;
            flat.chunks(ntn).map(|c| c.to_vec()).collect()
        }
    };

    let u: Vec<f64> = u_modes.into_iter().flatten().collect();
    let f: Vec<f64> = (0..ns_all).flat_map(|i| f_rows.iter().map(move |r| r[i])).collect();
    Ok(assemble_solution(problem, mesh, s, tau, t, u, f))
}

fn assemble_solution(
    problem: &DegenerateProblem,
    mesh: DegenerateMesh,
    s: Vec<f64>,
    tau: Vec<f64>,
    t: Vec<f64>,
    u: Vec<f64>,
    f: Vec<f64>,
) -> DegenerateSolution {
    let ntn = tau.len();
    let h = tau[1] - tau[0];
    let hs = problem.domain.s_spacing(mesh.n_s);
    let ns_all = s.len();
    let periodic = matches!(problem.domain, Domain::Periodic { .. });
    let mut v_tau = vec![0.0; u.len()];
    let mut v_tautau = vec![0.0; u.len()];
    for i in 0..ns_all {
        let row = &u[i * ntn..(i + 1) * ntn];
        let d1 = &mut v_tau[i * ntn..(i + 1) * ntn];
        d1[0] = 0.0;
        for j in 1..ntn - 1 {
            d1[j] = (row[j + 1] - row[j - 1]) / (2.0 * h);
        }
        let n = ntn - 1;
        d1[n] = (3.0 * row[n] - 4.0 * row[n - 1] + row[n - 2]) / (2.0 * h);
        let d2 = &mut v_tautau[i * ntn..(i + 1) * ntn];
        d2[0] = 2.0 * (row[1] - row[0]) / (h * h);
        for j in 1..n {
            d2[j] = (row[j + 1] - 2.0 * row[j] + row[j - 1]) / (h * h);
        }
        d2[n] = (2.0 * row[n] - 5.0 * row[n - 1] + 4.0 * row[n - 2] - row[n - 3]) / (h * h);
    }
    let s_second = |field: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; field.len()];
        for j in 0..ntn {
            let at = |i: usize| field[i * ntn + j];
            for i in 0..ns_all {
                out[i * ntn + j] = if periodic {
                    (at((i + 1) % ns_all) - 2.0 * at(i) + at((i + ns_all - 1) % ns_all)) / (hs * hs)
                } else if i == 0 {
                    (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (hs * hs)
                } else if i == ns_all - 1 {
                    (2.0 * at(i) - 5.0 * at(i - 1) + 4.0 * at(i - 2) - at(i - 3)) / (hs * hs)
                } else {
                    (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (hs * hs)
                };
            }
        }
        out
    };
    let s_first = |field: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; field.len()];
        for j in 0..ntn {
            let at = |i: usize| field[i * ntn + j];
            for i in 0..ns_all {
                out[i * ntn + j] = if periodic {
                    (at((i + 1) % ns_all) - at((i + ns_all - 1) % ns_all)) / (2.0 * hs)
                } else if i == 0 {
                    (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * hs)
                } else if i == ns_all - 1 {
                    (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * hs)
                } else {
                    (at(i + 1) - at(i - 1)) / (2.0 * hs)
                };
            }
        }
        out
    };
    let mut u_t = vec![0.0; u.len()];
    let mut t_u_tt = vec![0.0; u.len()];
    for i in 0..ns_all {
        for j in 0..ntn {
            let k = i * ntn + j;
            if j == 0 {
                u_t[k] = 2.0 * v_tautau[k];
                t_u_tt[k] = 0.0;
            } else {
                u_t[k] = 2.0 * v_tau[k] / tau[j];
                t_u_tt[k] = v_tautau[k] - v_tau[k] / tau[j];
            }
        }
    }
    DegenerateSolution {
        a: problem.a,
        kappa: problem.kappa,
        domain: problem.domain.clone(),
        mesh,
        u_ss: s_second(&u),
        sqrt_t_u_st: s_first(&v_tau),
        s,
        tau,
        t,
        u,
        u_t,
        t_u_tt,
        f,
    }
}

/// Grid fields of the exact manufactured solution, on the same layout as [`solve_model`].
pub fn exact_solution(problem: &DegenerateProblem, mesh: DegenerateMesh) -> Result<DegenerateSolution> {
    problem.validate()?;
    let Forcing::Manufactured { mode } = problem.f else {
        return Err(Error::BadParameters(
            "exact fields exist only for manufactured forcings".into(),
        ));
    };
    let q = problem.domain.wavenumber(mode);
    let tau_max = 2.0 * problem.domain.t_max().sqrt();
    let tau: Vec<f64> = (0..=mesh.n_tau)
        .map(|j| j as f64 * tau_max / mesh.n_tau as f64)
        .collect();
    let t: Vec<f64> = tau.iter().map(|x| x * x / 4.0).collect();
    let s = problem.domain.s_nodes(mesh.n_s);
    let mut sol = assemble_solution(
        problem,
        mesh,
        s.clone(),
        tau.clone(),
        t.clone(),
        vec![0.0; s.len() * tau.len()],
        vec![],
    );
    let ntn = tau.len();
    let mut f = vec![0.0; s.len() * ntn];
    for (i, &si) in s.iter().enumerate() {
        let (c, sn) = ((q * si).cos(), (q * si).sin());
        for (j, &tj) in t.iter().enumerate() {
            let e = (-tj).exp();
            let k = i * ntn + j;
            sol.u[k] = e * c;
            sol.u_t[k] = -e * c;
            sol.u_ss[k] = -q * q * e * c;
            sol.sqrt_t_u_st[k] = tj.sqrt() * q * e * sn;
            sol.t_u_tt[k] = tj * e * c;
            f[k] = (tj - problem.a - problem.kappa * q * q) * e * c;
        }
    }
    sol.f = f;
    Ok(sol)
}

fn lp_norm(sol: &DegenerateSolution, field: &[f64], p: f64) -> f64 {
    let ntn = sol.tau.len();
    let ws = sol.domain.s_weights(sol.mesh.n_s);
    let h = sol.tau[1] - sol.tau[0];
    let wt: Vec<f64> = simpson_weights(ntn, h)
        .iter()
        .zip(&sol.tau)
        .map(|(w, x)| w * x / 2.0)
        .collect();
    let rows: Vec<f64> = (0..sol.s.len())
        .map(|i| {
            let terms: Vec<f64> = (0..ntn).map(|j| wt[j] * field[i * ntn + j].abs().powf(p)).collect();
            ws[i] * pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows).powf(1.0 / p)
}

/// `I_p(u) = ‖u‖_p + ‖u_t‖_p + ‖u_ss‖_p + ‖√t u_st‖_p + ‖t u_tt‖_p`, integrated in `τ`.
pub fn norm_ip(sol: &DegenerateSolution, p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::BadParameters(format!("p = {p} must be at least 2")));
    }
    Ok(sol.fields().iter().map(|f| lp_norm(sol, f, p)).sum())
}

/// The five `I_p` terms separately.
pub fn norm_ip_terms(sol: &DegenerateSolution, p: f64) -> [f64; 5] {
    let f = sol.fields();
    [0, 1, 2, 3, 4].map(|k| lp_norm(sol, f[k], p))
}

/// Pair budget for the Hölder seminorms.
pub const HOLDER_PAIR_CAP: usize = 1_000_000;

/// `sup |g(s,t) − g(s',t)| / d(s,s')^α` over `s`-pairs at fixed `t`, with
/// `d` the periodic distance on periodic domains. When every pair would
/// exceed the cap, all base points are kept and the offsets are thinned to a
/// deterministic stratified set that always contains the shortest ones.
pub fn holder_seminorm_s(values: &[f64], s: &[f64], n_t: usize, period: Option<f64>, alpha: f64) -> f64 {
    let n = s.len();
    if n < 2 {
        return 0.0;
    }
    let max_offset = if period.is_some() { n / 2 } else { n - 1 };
    let budget_offsets = (HOLDER_PAIR_CAP / (n * n_t).max(1)).max(1);
    let offsets: Vec<usize> = if max_offset <= budget_offsets {
        (1..=max_offset).collect()
    } else {
        let dense = budget_offsets / 2;
        let mut v: Vec<usize> = (1..=dense.max(1)).collect();
        let rest = budget_offsets - v.len();
        for q in 1..=rest {
            let d = dense + (q * (max_offset - dense)) / rest.max(1);
            if d > *v.last().unwrap() {
                v.push(d);
            }
        }
        v
    };
    let dist = |i: usize, k: usize| -> f64 {
        let d = (s[k] - s[i]).abs();
        match period {
            Some(p) => d.min(p - d),
            None => d,
        }
    };
    (0..n_t)
        .into_par_iter()
        .map(|j| {
            let mut sup: f64 = 0.0;
            for &d in &offsets {
                for i in 0..n {
                    let k = match period {
                        Some(_) => (i + d) % n,
                        None if i + d < n => i + d,
                        None => continue,
                    };
                    let r = (values[i * n_t + j] - values[k * n_t + j]).abs() / dist(i, k).powf(alpha);
                    sup = sup.max(r);
                }
            }
            sup
        })
        .reduce(|| 0.0, f64::max)
}

fn holder_norm_of(sol: &DegenerateSolution, field: &[f64], alpha: f64) -> f64 {
    let period = match sol.domain {
        Domain::Periodic { period, .. } => Some(period),
        Domain::Interval { .. } => None,
    };
    let sup = field.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    sup + holder_seminorm_s(field, &sol.s, sol.tau.len(), period, alpha)
}

/// Sup norms plus `s`-direction Hölder seminorms of the five `I_p` constituents.
pub fn norm_ialpha(sol: &DegenerateSolution, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadParameters(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    Ok(sol.fields().iter().map(|f| holder_norm_of(sol, f, alpha)).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormKind {
    Lp { p: f64 },
    Holder { alpha: f64 },
}

/// `I(K f) / ‖f‖` for the solved problem; zero when `f ≡ 0`.
pub fn estimate_ratio(sol: &DegenerateSolution, norm: NormKind) -> Result<f64> {
    let (num, den) = match norm {
        NormKind::Lp { p } => (norm_ip(sol, p)?, lp_norm(sol, &sol.f, p)),
        NormKind::Holder { alpha } => (norm_ialpha(sol, alpha)?, holder_norm_of(sol, &sol.f, alpha)),
    };
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num / den)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioHistory {
    pub norm: NormKind,
    pub meshes: Vec<DegenerateMesh>,
    pub ratios: Vec<f64>,
    pub drift: f64,
    pub pass: bool,
}

/// Solve on each mesh and report `I(K f)/‖f‖` with its relative drift.
pub fn estimate_ratio_lp_hol(
    problem: &DegenerateProblem,
    meshes: &[DegenerateMesh],
    norm: NormKind,
) -> Result<RatioHistory> {
    let ratios = meshes
        .iter()
        .map(|&m| estimate_ratio(&solve_model(problem, m)?, norm))
        .collect::<Result<Vec<_>>>()?;
    let drift = crate::analysis::drift(&ratios);
    Ok(RatioHistory {
        norm,
        meshes: meshes.to_vec(),
        pass: drift < crate::analysis::STABILITY_DRIFT && ratios.iter().all(|r| r.is_finite()),
        ratios,
        drift,
    })
}

/// Relative change of the `I_2` ratio when `t_max` doubles, zero far-field data.
pub fn truncation_sensitivity(problem: &DegenerateProblem, mesh: DegenerateMesh) -> Result<f64> {
    let mut base = problem.clone();
    base.bc.far_field = FarField::Zero;
    let r1 = estimate_ratio(&solve_model(&base, mesh)?, NormKind::Lp { p: 2.0 })?;
    let mut doubled = base.clone();
    doubled.domain = base.domain.with_t_max(2.0 * base.domain.t_max());
    // keep the τ spacing comparable
    let n_tau = (((mesh.n_tau as f64) * std::f64::consts::SQRT_2 / 2.0).ceil() as usize) * 2;
    let r2 = estimate_ratio(
        &solve_model(&doubled, DegenerateMesh { n_s: mesh.n_s, n_tau })?,
        NormKind::Lp { p: 2.0 },
    )?;
    Ok(if r1 == 0.0 { 0.0 } else { (r2 - r1).abs() / r1 })
}

/// Test functions on the box `G = {|s| < S, 0 < t < T}` with exact first derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Zero,
    Constant {
        value: f64,
    },
    /// `u = t`.
    Linear,
    /// `(1 − (s/S)² − t/T)₊^k`.
    Bump {
        k: u32,
    },
    /// `(1 − (s/S)²)² (1 − t/T)²`.
    SmoothBump,
    /// Zero for `s ≤ s_0 = −S + 2 S fraction`, a C¹ ramp `(1 − cos(π (s − s_0)/(S − s_0)))/2`
    /// times `t`-profile `p` beyond: `p = 0: 1`, `1: 1 + t`, `2: e^{−t}`, `3: 1 − t/(2T)`, `4: 2 + cos(πt/T)`.
    ZeroStrip {
        fraction: f64,
        profile: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedBox {
    pub half_width: f64,
    pub depth: f64,
    /// Intervals per direction.
    pub n: usize,
}

impl Default for WeightedBox {
    fn default() -> Self {
        Self {
            half_width: 1.0,
            depth: 1.0,
            n: 512,
        }
    }
}

impl TestFunction {
    /// `(u, u_s, u_t)`.
    pub fn eval(&self, s: f64, t: f64, g: &WeightedBox) -> (f64, f64, f64) {
        let (sw, d) = (g.half_width, g.depth);
        match *self {
            TestFunction::Zero => (0.0, 0.0, 0.0),
            TestFunction::Constant { value } => (value, 0.0, 0.0),
            TestFunction::Linear => (t, 0.0, 1.0),
            TestFunction::Bump { k } => {
                let base = 1.0 - (s / sw).powi(2) - t / d;
                if base <= 0.0 {
                    return (0.0, 0.0, 0.0);
                }
                let k = k as i32;
                let dk = k as f64 * base.powi(k - 1);
                (base.powi(k), dk * (-2.0 * s / (sw * sw)), dk * (-1.0 / d))
            }
            TestFunction::SmoothBump => {
                let a = 1.0 - (s / sw).powi(2);
                let b = 1.0 - t / d;
                (
                    a * a * b * b,
                    2.0 * a * (-2.0 * s / (sw * sw)) * b * b,
                    a * a * 2.0 * b * (-1.0 / d),
                )
            }
            TestFunction::ZeroStrip { fraction, profile } => {
                let s0 = -sw + 2.0 * sw * fraction;
                if s <= s0 {
                    return (0.0, 0.0, 0.0);
                }
                let w = sw - s0;
                let x = PI * (s - s0) / w;
                let (r, rs) = (0.5 * (1.0 - x.cos()), 0.5 * PI / w * x.sin());
                let (p, pt) = match profile {
                    0 => (1.0, 0.0),
                    1 => (1.0 + t, 1.0),
                    2 => ((-t).exp(), -(-t).exp()),
                    3 => (1.0 - t / (2.0 * d), -1.0 / (2.0 * d)),
                    _ => (2.0 + (PI * t / d).cos(), -PI / d * (PI * t / d).sin()),
                };
                (r * p, rs * p, r * pt)
            }
        }
    }
}

/// Values, `s`-derivatives and `t u_t²` on the `(s, τ)` grid of the box.
struct TauSamples {
    u: Vec<f64>,
    u_s: Vec<f64>,
    t_ut2: Vec<f64>,
    weights: Vec<f64>,
}

fn tau_samples(u: &TestFunction, g: &WeightedBox) -> TauSamples {
    let n = g.n;
    let hs = 2.0 * g.half_width / n as f64;
    let tau_max = 2.0 * g.depth.sqrt();
    let ht = tau_max / n as f64;
    let ws = simpson_weights(n + 1, hs);
    let wt = simpson_weights(n + 1, ht);
    let mut out = TauSamples {
        u: Vec::with_capacity((n + 1) * (n + 1)),
        u_s: Vec::with_capacity((n + 1) * (n + 1)),
        t_ut2: Vec::with_capacity((n + 1) * (n + 1)),
        weights: Vec::with_capacity((n + 1) * (n + 1)),
    };
    for i in 0..=n {
        let s = -g.half_width + i as f64 * hs;
        for j in 0..=n {
            let tau = j as f64 * ht;
            let t = tau * tau / 4.0;
            let (v, vs, vt) = u.eval(s, t, g);
            out.u.push(v);
            out.u_s.push(vs);
            out.t_ut2.push(t * vt * vt);
            out.weights.push(ws[i] * wt[j] * tau / 2.0);
        }
    }
    out
}

fn weighted_total(values: impl Iterator<Item = f64>, weights: &[f64]) -> f64 {
    let terms: Vec<f64> = values.zip(weights).map(|(v, w)| v * w).collect();
    pairwise_sum(&terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalitySides {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, or 0 when both sides vanish.
    pub ratio: f64,
}

fn sides(lhs: f64, rhs: f64) -> InequalitySides {
    InequalitySides {
        lhs,
        rhs,
        ratio: if lhs == 0.0 { 0.0 } else { lhs / rhs },
    }
}

/// Largest `|u|` on the lateral sides and the top of the box.
pub fn boundary_trace(u: &TestFunction, g: &WeightedBox) -> f64 {
    let n = g.n;
    let mut trace: f64 = 0.0;
    for q in 0..=n {
        let t = g.depth * q as f64 / n as f64;
        let s = -g.half_width + 2.0 * g.half_width * q as f64 / n as f64;
        trace = trace
            .max(u.eval(-g.half_width, t, g).0.abs())
            .max(u.eval(g.half_width, t, g).0.abs())
            .max(u.eval(s, g.depth, g).0.abs());
    }
    trace
}

/// `(∫ u⁶)^{1/3}` against `∫ (t u_t² + u_s²)` for `u` vanishing on the sides and top.
pub fn verify_weighted_sobolev(u: &TestFunction, g: &WeightedBox) -> Result<InequalitySides> {
    let trace = boundary_trace(u, g);
    if trace > 1e-8 {
        return Err(Error::BoundaryConditionViolated { trace });
    }
    let smp = tau_samples(u, g);
    let lhs = weighted_total(smp.u.iter().map(|v| v.powi(6)), &smp.weights).powf(1.0 / 3.0);
    let rhs = weighted_total(smp.t_ut2.iter().zip(&smp.u_s).map(|(a, b)| a + b * b), &smp.weights);
    Ok(sides(lhs, rhs))
}

/// Grid measure of `{u = 0}` in the box.
pub fn zero_set_measure(u: &TestFunction, g: &WeightedBox) -> f64 {
    let n = g.n;
    let hs = 2.0 * g.half_width / n as f64;
    let ht = g.depth / n as f64;
    let ws = simpson_weights(n + 1, hs);
    let wt = simpson_weights(n + 1, ht);
    let mut terms = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        let s = -g.half_width + i as f64 * hs;
        for j in 0..=n {
            if u.eval(s, j as f64 * ht, g).0 == 0.0 {
                terms.push(ws[i] * wt[j]);
            }
        }
    }
    pairwise_sum(&terms)
}

/// `∫ u²` against `∫ (t u_t² + u_s²)` when `|{u = 0}| ≥ eps`.
pub fn verify_weighted_poincare(u: &TestFunction, eps: f64, g: &WeightedBox) -> Result<InequalitySides> {
    let measured = zero_set_measure(u, g);
    if measured < eps {
        return Err(Error::ZeroSetTooSmall {
            measured,
            required: eps,
        });
    }
    let smp = tau_samples(u, g);
    let lhs = weighted_total(smp.u.iter().map(|v| v * v), &smp.weights);
    let rhs = weighted_total(smp.t_ut2.iter().zip(&smp.u_s).map(|(a, b)| a + b * b), &smp.weights);
    Ok(sides(lhs, rhs))
}

/// Both sides of the `τ = 2√t` integral identities, and `v(s, τ) = u(s, τ²/4)`
/// on the lifted grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RaisedDimension {
    pub p: f64,
    /// `∫ |u|^p ds dt` on the `t`-grid, and `½ ∫ |v|^p τ ds dτ` on the `τ`-grid.
    pub lp_t: f64,
    pub lp_tau: f64,
    /// `∫ (t u_t² + u_s²) ds dt` and `½ ∫ (v_τ² + v_s²) τ ds dτ`.
    pub energy_t: f64,
    pub energy_tau: f64,
    pub s: Vec<f64>,
    pub tau: Vec<f64>,
    pub v: Vec<f64>,
}

impl RaisedDimension {
    pub fn max_identity_error(&self) -> f64 {
        (self.lp_t - self.lp_tau)
            .abs()
            .max((self.energy_t - self.energy_tau).abs())
    }
}

/// Lift samples `u(s_i, t_j)` to `v(s_i, 2√t_j)`; exact on grid points.
pub fn lift_grid(t: &[f64]) -> Vec<f64> {
    t.iter().map(|x| 2.0 * x.sqrt()).collect()
}

/// Inverse of [`lift_grid`].
pub fn lower_grid(tau: &[f64]) -> Vec<f64> {
    tau.iter().map(|x| x * x / 4.0).collect()
}

pub fn raise_dimension(u: &TestFunction, p: f64, g: &WeightedBox) -> RaisedDimension {
    let n = g.n;
    let hs = 2.0 * g.half_width / n as f64;
    let ht = g.depth / n as f64;
    let ws = simpson_weights(n + 1, hs);
    let wt = simpson_weights(n + 1, ht);
    let mut lp = Vec::with_capacity((n + 1) * (n + 1));
    let mut en = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        let s = -g.half_width + i as f64 * hs;
        for j in 0..=n {
            let t = j as f64 * ht;
            let (v, vs, vt) = u.eval(s, t, g);
            lp.push(ws[i] * wt[j] * v.abs().powf(p));
            en.push(ws[i] * wt[j] * (t * vt * vt + vs * vs));
        }
    }
    let smp = tau_samples(u, g);
    // v_τ² = t u_t² pointwise
    let lp_tau = weighted_total(smp.u.iter().map(|v| v.abs().powf(p)), &smp.weights);
    let energy_tau = weighted_total(smp.t_ut2.iter().zip(&smp.u_s).map(|(a, b)| a + b * b), &smp.weights);
    let tau_max = 2.0 * g.depth.sqrt();
    RaisedDimension {
        p,
        lp_t: pairwise_sum(&lp),
        lp_tau,
        energy_t: pairwise_sum(&en),
        energy_tau,
        s: (0..=n).map(|i| -g.half_width + i as f64 * hs).collect(),
        tau: (0..=n).map(|j| j as f64 * tau_max / n as f64).collect(),
        v: smp.u,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiouvilleData {
    Zero,
    /// `w = y cos x` on the sides and top of the box.
    YCosX,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleRow {
    pub radius: f64,
    pub window_max: f64,
    pub boundary_amplitude: f64,
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleTable {
    pub c: f64,
    pub data: LiouvilleData,
    pub rows: Vec<LiouvilleRow>,
    pub monotone: bool,
}

/// Nodes per unit length in `x` and intervals per unit of `τ` for the Liouville boxes.
pub const LIOUVILLE_X_DENSITY: usize = 16;
pub const LIOUVILLE_TAU_DENSITY: usize = 32;

/// Solve `y w_yy + c w_xx + 3 w_y = 0` on `{|x| ≤ R, 0 ≤ y ≤ R}` with the given
/// side/top data and a bounded closure at `y = 0`, and report `max |w|` on
/// `{|x| ≤ 1, y ≤ 1}` for each radius.
pub fn liouville_limit_check(c: f64, radii: &[f64], data: LiouvilleData) -> Result<LiouvilleTable> {
    if !(c > 0.0) {
        return Err(Error::BadParameters(format!("c = {c} must be positive")));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 1.0) {
            return Err(Error::BadParameters(format!("radius {r} must exceed the unit window")));
        }
        let n_s = ((2.0 * r) as usize * LIOUVILLE_X_DENSITY).max(8) & !1;
        let n_tau = (((2.0 * r.sqrt()) * LIOUVILLE_TAU_DENSITY as f64).ceil() as usize + 1) & !1;
        // w = y cos x + z, with z = 0 on the sides and top
        let domain = Domain::Interval {
            half_width: r,
            t_max: r,
        };
        let xs = domain.s_nodes(n_s);
        let tau_max = 2.0 * r.sqrt();
        let ys: Vec<f64> = (0..=n_tau)
            .map(|j| {
                let tau = j as f64 * tau_max / n_tau as f64;
                tau * tau / 4.0
            })
            .collect();
        let lift = |x: f64, y: f64| match data {
            LiouvilleData::Zero => 0.0,
            LiouvilleData::YCosX => y * x.cos(),
        };
        let forcing: Vec<f64> = xs
            .iter()
            .flat_map(|&x| {
                ys.iter().map(move |&y| match data {
                    LiouvilleData::Zero => 0.0,
                    LiouvilleData::YCosX => (c * y - 3.0) * x.cos(),
                })
            })
            .collect();
        let problem = DegenerateProblem {
            a: 3.0,
            kappa: c,
            domain,
            f: Forcing::Zero,
            bc: BoundaryConditions {
                far_field: FarField::Zero,
            },
        };
        let z = solve_with_samples(&problem, DegenerateMesh { n_s, n_tau }, &forcing)?;
        let ntn = ys.len();
        let mut window_max: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            if x.abs() > 1.0 + 1e-12 {
                continue;
            }
            for (j, &y) in ys.iter().enumerate() {
                if y > 1.0 + 1e-12 {
                    break;
                }
                window_max = window_max.max((lift(x, y) + z[i * ntn + j]).abs());
            }
        }
        let boundary_amplitude = match data {
            LiouvilleData::Zero => 0.0,
            LiouvilleData::YCosX => r,
        };
        rows.push(LiouvilleRow {
            radius: r,
            window_max,
            boundary_amplitude,
            relative: if boundary_amplitude > 0.0 {
                window_max / boundary_amplitude
            } else {
                0.0
            },
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].window_max <= w[0].window_max);
    Ok(LiouvilleTable {
        c,
        data,
        rows,
        monotone,
    })
}

/// [`solve_model`] with the forcing given as samples on the solver's own grid
/// (a uniform `τ` grid is not uniform in `t`, so grid forcings do not fit).
fn solve_with_samples(problem: &DegenerateProblem, mesh: DegenerateMesh, samples: &[f64]) -> Result<Vec<f64>> {
    let ns_all = problem.domain.s_nodes(mesh.n_s).len();
    let ntn = mesh.n_tau + 1;
    solve_sine(
        problem,
        mesh,
        |j| (0..ns_all).map(|i| samples[i * ntn + j]).collect(),
        &vec![0.0; ns_all],
    )
}

/// Lateral-Dirichlet solve: DST-I in `s`, tridiagonal in `τ`. Returns `(s × τ)` values
/// including the zero side rows.
fn solve_sine(
    problem: &DegenerateProblem,
    mesh: DegenerateMesh,
    row: impl Fn(usize) -> Vec<f64> + Sync,
    top: &[f64],
) -> Result<Vec<f64>> {
    let n = mesh.n_s;
    let n_tau = mesh.n_tau;
    let m = 2.0 * problem.a - 1.0;
    let h = 2.0 * problem.domain.t_max().sqrt() / n_tau as f64;
    let hs = problem.domain.s_spacing(n);
    let lambdas = SBasis::Sine { n }.eigenvalues(hs, problem.kappa);
    let radial = RadialOperator::new(m, h, n_tau);
    let table = SBasis::sine_table(n);
    let sine = |i: usize, k: usize| table[(i * k) % (2 * n)];
    let dst = |r: &[f64]| -> Vec<f64> {
        (1..n)
            .map(|k| {
                let terms: Vec<f64> = (1..n).map(|i| r[i] * sine(i, k)).collect();
                pairwise_sum(&terms)
            })
            .collect()
    };
    let f_hat: Vec<Vec<f64>> = (0..n_tau).into_par_iter().map(|j| dst(&row(j))).collect();
    let top_hat = dst(top);
    let cols: Vec<Vec<f64>> = (0..n - 1)
        .into_par_iter()
        .map(|k| {
            let col: Vec<f64> = f_hat.iter().map(|r| r[k]).collect();
            radial
                .solve(lambdas[k], &col, top_hat[k])
                .ok_or_else(|| Error::SolverSingular("vanishing pivot in the radial solve".into()))
        })
        .collect::<Result<_>>()?;
    let ntn = n_tau + 1;
    let scale = 2.0 / n as f64;
    let rows: Vec<Vec<f64>> = (1..n)
        .into_par_iter()
        .map(|i| {
            (0..ntn)
                .map(|j| {
                    let terms: Vec<f64> = (1..n).map(|k| cols[k - 1][j] * sine(i, k)).collect();
                    scale * pairwise_sum(&terms)
                })
                .collect()
        })
        .collect();
    let mut u = vec![0.0; (n + 1) * ntn];
    for (i, r) in rows.into_iter().enumerate() {
        u[(i + 1) * ntn..(i + 2) * ntn].copy_from_slice(&r);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(t_max: f64) -> Domain {
        Domain::Periodic {
            period: 2.0 * PI,
            t_max,
        }
    }

    #[test]
    fn operator_push_forward() {
        // t u_tt + a u_t  ==  v_ττ + (2a−1)/τ v_τ  for u = t^2 e^{-t}, v = u(τ²/4)
        let a = 2.5;
        for &tau in &[0.3, 1.1, 2.4] {
            let t: f64 = tau * tau / 4.0;
            let u = |t: f64| t * t * (-t).exp();
            let ut = (2.0 * t - t * t) * (-t).exp();
            let utt = (2.0 - 4.0 * t + t * t) * (-t).exp();
            let lhs = t * utt + a * ut;
            let v = |x: f64| u(x * x / 4.0);
            let e = 1e-4;
            let vt = (v(tau + e) - v(tau - e)) / (2.0 * e);
            let vtt = (v(tau + e) - 2.0 * v(tau) + v(tau - e)) / (e * e);
            assert!((lhs - (vtt + (2.0 * a - 1.0) / tau * vt)).abs() < 1e-6);
        }
    }

    #[test]
    fn drift_and_zero_forcing() {
        let mut p = DegenerateProblem::manufactured(1.0, 1, strip(4.0));
        let mesh = DegenerateMesh { n_s: 16, n_tau: 16 };
        assert!(matches!(solve_model(&p, mesh), Err(Error::DriftOutOfRange(_))));
        p.a = 3.0;
        p.f = Forcing::Zero;
        p.bc.far_field = FarField::Zero;
        let sol = solve_model(&p, mesh).unwrap();
        assert!(sol.u.iter().all(|&v| v == 0.0));
        assert_eq!(estimate_ratio(&sol, NormKind::Lp { p: 2.0 }).unwrap(), 0.0);
    }

    #[test]
    fn manufactured_converges_second_order() {
        for &a in &[2.0, 3.0, 5.0] {
            let p = DegenerateProblem::manufactured(a, 1, strip(6.0));
            let errs: Vec<f64> = [16usize, 32, 64]
                .iter()
                .map(|&n| {
                    solve_model(&p, DegenerateMesh { n_s: n, n_tau: n })
                        .unwrap()
                        .max_error(&p)
                        .unwrap()
                })
                .collect();
            for w in errs.windows(2) {
                assert!((w[0] / w[1]).log2() >= 1.9, "a = {a}: {errs:?}");
            }
        }
    }

    #[test]
    fn maximum_principle() {
        let p = DegenerateProblem {
            a: 2.0,
            kappa: 1.0,
            domain: Domain::Interval {
                half_width: 3.0,
                t_max: 4.0,
            },
            f: Forcing::Bump { amplitude: -1.0 },
            bc: BoundaryConditions {
                far_field: FarField::Zero,
            },
        };
        let sol = solve_model(&p, DegenerateMesh { n_s: 32, n_tau: 32 }).unwrap();
        assert!(sol.u.iter().all(|&v| v >= 0.0));
        assert!(sol.u.iter().any(|&v| v > 1e-3));
    }

    #[test]
    fn ip_of_exact_fields_matches_closed_form() {
        let t_max: f64 = 6.0;
        let p = DegenerateProblem::manufactured(3.0, 1, strip(t_max));
        let sol = exact_solution(&p, DegenerateMesh { n_s: 64, n_tau: 512 }).unwrap();
        let e = (-2.0 * t_max).exp();
        let i0 = (1.0 - e) / 2.0;
        let i1 = 0.25 - e * (2.0 * t_max + 1.0) / 4.0;
        let i2 = 0.25 - e * (2.0 * t_max * t_max + 2.0 * t_max + 1.0) / 4.0;
        let exact = [PI * i0, PI * i0, PI * i0, PI * i1, PI * i2].map(f64::sqrt);
        let got = norm_ip_terms(&sol, 2.0);
        for k in 0..5 {
            assert!((got[k] - exact[k]).abs() < 1e-6, "term {k}: {} vs {}", got[k], exact[k]);
        }
    }

    #[test]
    fn holder_of_cosine_matches_dense_oracle() {
        let n = 256;
        let s: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let vals: Vec<f64> = s.iter().map(|x| x.cos()).collect();
        let alpha = 0.5;
        let got = holder_seminorm_s(&vals, &s, 1, Some(2.0 * PI), alpha);
        // dense oracle: sup over d of sup_x |cos(x+d) - cos x| / d^α = 2 sin(d/2) / d^α
        let dense = (1..10_000)
            .map(|k| {
                let d = PI * k as f64 / 10_000.0;
                2.0 * (d / 2.0).sin() / d.powf(alpha)
            })
            .fold(0.0, f64::max);
        assert!((got - dense).abs() / dense < 1e-3, "{got} vs {dense}");
        let c = vec![2.0; n];
        assert_eq!(holder_seminorm_s(&c, &s, 1, Some(2.0 * PI), alpha), 0.0);
    }

    #[test]
    fn weighted_inequalities() {
        let g = WeightedBox {
            n: 128,
            ..Default::default()
        };
        assert_eq!(verify_weighted_sobolev(&TestFunction::Zero, &g).unwrap().ratio, 0.0);
        assert!(matches!(
            verify_weighted_sobolev(&TestFunction::Constant { value: 1.0 }, &g),
            Err(Error::BoundaryConditionViolated { .. })
        ));
        let r = verify_weighted_sobolev(&TestFunction::Bump { k: 2 }, &g).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        assert!(matches!(
            verify_weighted_poincare(&TestFunction::Constant { value: 1.0 }, 0.5, &g),
            Err(Error::ZeroSetTooSmall { .. })
        ));
        let half = TestFunction::ZeroStrip {
            fraction: 0.5,
            profile: 1,
        };
        assert!(verify_weighted_poincare(&half, 0.9, &g).unwrap().ratio.is_finite());
    }

    #[test]
    fn raise_dimension_identities() {
        let g = WeightedBox {
            n: 256,
            ..Default::default()
        };
        let one = raise_dimension(&TestFunction::Constant { value: 1.0 }, 2.0, &g);
        assert!((one.lp_t - 2.0).abs() < 1e-12 && (one.lp_tau - 2.0).abs() < 1e-10);
        let lin = raise_dimension(&TestFunction::Linear, 2.0, &g);
        assert!(lin.max_identity_error() < 1e-8, "{}", lin.max_identity_error());
        assert!((lin.energy_t - 1.0).abs() < 1e-12);
        let t = [0.0, 0.3, 1.7];
        for (x, y) in lower_grid(&lift_grid(&t)).iter().zip(&t) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn liouville_zero_data() {
        let t = liouville_limit_check(2.0, &[4.0], LiouvilleData::Zero).unwrap();
        assert_eq!(t.rows[0].window_max, 0.0);
        assert!(liouville_limit_check(0.0, &[4.0], LiouvilleData::YCosX).is_err());
    }
}
