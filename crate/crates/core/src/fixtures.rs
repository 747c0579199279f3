//! Closed-form surfaces used as oracles: the outer torus collar, surfaces of
//! revolution with prescribed curvature profile, and a non-rotational
//! perturbation of the torus (intrinsic data only).

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::chart::GeodesicChart;
use crate::codazzi::FundamentalForm;
use crate::error::{Error, Result};
use crate::metric::{poly_eval, AnalyticMetric, CurvatureProfile, RevolutionMetric};
use crate::spectral::PeriodicGrid;
use crate::taylor::{jet2_variables, PartialTable, Real, Taylor};

const SERIES_ORDER: usize = 30;
const SERIES_SWITCH: f64 = 0.1;

#[derive(Clone, Debug)]
enum Kind {
    Torus { a: f64, r: f64 },
    PerturbedTorus { a: f64, r: f64, eps: f64, mode: u32 },
    Revolution(Arc<RevolutionData>),
    SphereBand,
}

#[derive(Debug)]
struct RevolutionData {
    metric: Arc<RevolutionMetric>,
    rho0: f64,
    /// Taylor series of `L` and `N` about `t = 0`.
    l0: Vec<f64>,
    n0: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SurfaceFixture {
    pub name: String,
    pub is_an: bool,
    pub t_max: f64,
    kind: Kind,
}

pub fn torus_fixture(a: f64, r: f64) -> Result<SurfaceFixture> {
    if !(a > 0.0 && a < r) {
        return Err(Error::BadParameters(format!(
            "torus needs 0 < a < R (got a = {a}, R = {r})"
        )));
    }
    Ok(SurfaceFixture {
        name: format!("torus(a={a},R={r})"),
        is_an: true,
        t_max: a * PI / 2.0,
        kind: Kind::Torus { a, r },
    })
}

/// Torus collar with `B` multiplied by `1 + eps t³ cos(mode s / R)`. No closed-form
/// second fundamental form; used for self-convergence studies.
pub fn perturbed_torus_fixture(a: f64, r: f64, eps: f64, mode: u32) -> Result<SurfaceFixture> {
    let base = torus_fixture(a, r)?;
    Ok(SurfaceFixture {
        name: format!("perturbed_torus(a={a},R={r},eps={eps},mode={mode})"),
        kind: Kind::PerturbedTorus { a, r, eps, mode },
        ..base
    })
}

/// The unit sphere band `B = cos t` around the equator (not AN).
pub fn sphere_band_fixture() -> SurfaceFixture {
    SurfaceFixture {
        name: "sphere_band".into(),
        is_an: false,
        t_max: 1.0,
        kind: Kind::SphereBand,
    }
}

pub fn revolution_fixture(profile: CurvatureProfile, boundary_kg: f64, t_max: f64) -> Result<SurfaceFixture> {
    if !(boundary_kg < 0.0) {
        return Err(Error::ProfileInvalid(format!(
            "k_g must be negative (got {boundary_kg})"
        )));
    }
    if !(t_max > 0.0) {
        return Err(Error::ProfileInvalid("t_max must be positive".into()));
    }
    let k = profile.eval(Taylor::variable(0.0, 1));
    if k.coeffs[0].abs() > 1e-12 {
        return Err(Error::ProfileInvalid(format!("K(0) = {} is not zero", k.coeffs[0])));
    }
    if !(k.coeffs[1] > 0.0) {
        return Err(Error::ProfileInvalid(format!(
            "K'(0) = {} is not positive",
            k.coeffs[1]
        )));
    }
    let metric = Arc::new(RevolutionMetric::new(profile.clone(), boundary_kg, t_max));
    let rho0 = -1.0 / boundary_kg;
    for j in 1..=200 {
        let t = t_max * j as f64 / 200.0;
        let (kv, b, bt) = (profile.eval(t), metric.eval(t), metric.eval_dt(t));
        if !(kv > 0.0 && b > 0.0 && (rho0 * bt).abs() < 1.0) {
            return Err(Error::ProfileInvalid(format!(
                "profile leaves the admissible range at t = {t:.4} (K = {kv:.3e}, B = {b:.3e}, rho0 B_t = {:.6})",
                rho0 * bt
            )));
        }
    }

    // Series about t = 0 with the t² factor of 1 - (rho0 B_t)² removed exactly.
    let order = SERIES_ORDER + 2;
    let b = metric.eval(Taylor::variable(0.0, order));
    let bt = b.derivative();
    let mut u = (Taylor::cst(1.0) - bt.scale(rho0)).coeffs;
    u[0] = 0.0;
    u[1] = 0.0;
    let v = bt.scale(rho0).add_f64(1.0);
    let g = Taylor::from_coeffs(u).shift_down().shift_down() * v.with_order(SERIES_ORDER);
    let z_over_t = g.with_order(SERIES_ORDER).sqrt();
    let k_over_t = profile.eval(Taylor::variable(0.0, SERIES_ORDER + 1)).shift_down();
    let bs = b.with_order(SERIES_ORDER);
    let n0 = (k_over_t * bs.clone()).scale(rho0) / z_over_t.clone();
    let lt = (z_over_t * bs).scale(1.0 / rho0);
    let mut l0 = vec![0.0];
    l0.extend(lt.coeffs.iter().take(SERIES_ORDER));

    let name = match &profile {
        CurvatureProfile::Polynomial { coeffs } => format!("revolution(poly={coeffs:?},kg={boundary_kg})"),
        CurvatureProfile::Torus { a, r } => format!("revolution(torus a={a},R={r},kg={boundary_kg})"),
    };
    Ok(SurfaceFixture {
        name,
        is_an: true,
        t_max,
        kind: Kind::Revolution(Arc::new(RevolutionData {
            metric,
            rho0,
            l0,
            n0: n0.coeffs,
        })),
    })
}

/// The polynomial profile `K = t (1 - t/2)` with `k_g = -1/2` on `[0, 1]`.
pub fn default_revolution_fixture() -> Result<SurfaceFixture> {
    revolution_fixture(
        CurvatureProfile::Polynomial {
            coeffs: vec![0.0, 1.0, -0.5],
        },
        -0.5,
        1.0,
    )
}

/// Fixture registry used by chart files and the CLI.
pub fn fixture_by_id(id: &str, params: &serde_json::Value) -> Result<SurfaceFixture> {
    let num = |key: &str, default: f64| params.get(key).and_then(|v| v.as_f64()).unwrap_or(default);
    match id {
        "torus" => torus_fixture(num("a", 1.0), num("R", 2.0)),
        "perturbed_torus" => {
            perturbed_torus_fixture(num("a", 1.0), num("R", 2.0), num("eps", 0.01), num("mode", 2.0) as u32)
        }
        "revolution" | "revolution_poly" => {
            let coeffs = match params.get("coeffs") {
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Format(e.to_string()))?,
                None => vec![0.0, 1.0, -0.5],
            };
            revolution_fixture(
                CurvatureProfile::Polynomial { coeffs },
                num("kg", -0.5),
                num("t_max", 1.0),
            )
        }
        "revolution_torus" => {
            let (a, r) = (num("a", 1.0), num("R", 2.0));
            revolution_fixture(CurvatureProfile::Torus { a, r }, -1.0 / r, num("t_max", a * PI / 2.0))
        }
        "sphere_band" => Ok(sphere_band_fixture()),
        other => Err(Error::BadParameters(format!("unknown fixture id `{other}`"))),
    }
}

impl SurfaceFixture {
    pub fn metric(&self) -> AnalyticMetric {
        match &self.kind {
            Kind::Torus { a, r } => AnalyticMetric::Torus { a: *a, r: *r },
            Kind::PerturbedTorus { a, r, eps, mode } => AnalyticMetric::PerturbedTorus {
                a: *a,
                r: *r,
                eps: *eps,
                mode: *mode,
            },
            Kind::Revolution(d) => AnalyticMetric::Revolution(d.metric.clone()),
            Kind::SphereBand => AnalyticMetric::SphereBand { period: 2.0 * PI },
        }
    }

    pub fn period(&self) -> f64 {
        self.metric().period()
    }

    pub fn chart(&self, n_s: usize, n_t: usize) -> Result<GeodesicChart> {
        GeodesicChart::analytic(self.metric(), self.t_max, n_s, n_t)
    }

    pub fn has_exact_fields(&self) -> bool {
        !matches!(self.kind, Kind::PerturbedTorus { .. })
    }

    /// Exact `[L, M, N]` at depth `t` (all available fixtures are `s`-independent).
    pub fn exact_lmn<T: Real>(&self, t: T) -> Option<[T; 3]> {
        match &self.kind {
            Kind::Torus { a, r } => {
                let sn = t.scale(1.0 / a).sin();
                let l = (sn.scale(*a).add_f64(*r) * sn).scale(1.0 / (r * r));
                Some([l, t.scale(0.0), T::cst(1.0 / a) + t.scale(0.0)])
            }
            Kind::Revolution(d) => {
                if t.value() <= SERIES_SWITCH {
                    Some([poly_eval(&d.l0, t.clone()), t.scale(0.0), poly_eval(&d.n0, t)])
                } else {
                    let b = d.metric.eval(t.clone());
                    let bt = d.metric.eval_dt(t.clone());
                    let k = d.metric.profile.eval(t.clone());
                    let rb = bt.scale(d.rho0);
                    let zp = (T::cst(1.0) - rb.clone() * rb).sqrt();
                    let n = (k * b.clone()).scale(d.rho0) / zp.clone();
                    let l = (zp * b).scale(1.0 / d.rho0);
                    Some([l, t.scale(0.0), n])
                }
            }
            // the equator band of the unit sphere: umbilic, L = B², N = 1
            Kind::SphereBand => {
                let c = t.cos();
                Some([c.clone() * c, t.scale(0.0), T::cst(1.0) + t.scale(0.0)])
            }
            Kind::PerturbedTorus { .. } => None,
        }
    }

    pub fn exact_h(&self, t: f64) -> Option<f64> {
        let [l, _, n] = self.exact_lmn(t)?;
        let b = self.metric().eval(0.0, t);
        Some(0.5 * (l / (b * b) + n))
    }

    /// Exact form sampled on `n_s` uniform `s` nodes and the given `t` nodes.
    pub fn exact_form(&self, n_s: usize, t_nodes: &[f64]) -> Option<FundamentalForm> {
        let n_t = t_nodes.len();
        let mut form = FundamentalForm::zeros(self.period(), n_s, t_nodes.to_vec());
        for (j, &t) in t_nodes.iter().enumerate() {
            let [l, m, n] = self.exact_lmn(t)?;
            let h = self.exact_h(t)?;
            for i in 0..n_s {
                let idx = i * n_t + j;
                form.l[idx] = l;
                form.m[idx] = m;
                form.n[idx] = n;
                form.h[idx] = h;
            }
        }
        Some(form)
    }

    pub fn has_embedding(&self) -> bool {
        matches!(self.kind, Kind::Torus { .. })
    }

    /// Position vector `r(s, t)` for fixtures with a closed-form embedding.
    pub fn position<T: Real>(&self, s: T, t: T) -> Option<[T; 3]> {
        match &self.kind {
            Kind::Torus { a, r } => {
                // θ = π/2 - t/a, so cos θ = sin(t/a) and sin θ = cos(t/a)
                let u = t.scale(1.0 / a);
                let phi = s.scale(1.0 / r);
                let rad = u.sin().scale(*a).add_f64(*r);
                Some([rad.clone() * phi.cos(), rad * phi.sin(), u.cos().scale(*a)])
            }
            _ => None,
        }
    }

    /// Unit normal matching the sign convention `N > 0`.
    pub fn normal(&self, s: f64, t: f64) -> Option<[f64; 3]> {
        match &self.kind {
            Kind::Torus { a, r } => {
                let (u, phi) = (t / a, s / r);
                Some([-u.sin() * phi.cos(), -u.sin() * phi.sin(), -u.cos()])
            }
            _ => None,
        }
    }
}

/// Sampled position data in the orthonormal frame `(∂_s / B, ∂_t)`.
#[derive(Clone, Debug, Serialize)]
pub struct PositionData {
    pub n_s: usize,
    pub t: Vec<f64>,
    pub rho: Vec<f64>,
    pub grad_rho: Vec<[f64; 2]>,
    pub r_dot_n: Vec<f64>,
    /// `[h11, h12, h22]` of the second fundamental form.
    pub h: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositionReport {
    /// `K h^{ij} ρ_ij + 2H + 2K r·n`.
    pub hessian_trace: f64,
    /// `(r·n)² + |∇ρ|² - |r|²`.
    pub support: f64,
    /// `det(ρ_ij + δ_ij) - K(-2ρ - |∇ρ|²)`.
    pub monge_ampere: f64,
    pub points: usize,
    #[serde(skip)]
    pub data: Option<PositionData>,
}

impl PositionReport {
    pub fn max_residual(&self) -> f64 {
        self.hessian_trace.max(self.support).max(self.monge_ampere)
    }
}

/// Evaluate the three position identities on an `n_s × n_t` grid, with the
/// covariant Hessian of `ρ = -|r|²/2` built from the chart's Christoffel symbols.
/// `h_scale` multiplies the mean curvature (1 for the true field; other values
/// give negative controls).
pub fn position_identities_with(
    fixture: &SurfaceFixture,
    n_s: usize,
    n_t: usize,
    h_scale: f64,
) -> Result<PositionReport> {
    if !fixture.has_embedding() || !fixture.has_exact_fields() {
        return Err(Error::BadParameters(format!(
            "fixture {} has no embedding",
            fixture.name
        )));
    }
    let chart = fixture.chart(n_s.max(8), n_t.max(4))?;
    let s_nodes = PeriodicGrid::new(n_s, fixture.period()).nodes();
    let t_nodes: Vec<f64> = (0..n_t).map(|j| fixture.t_max * j as f64 / (n_t - 1) as f64).collect();
    let mut worst = [0.0f64; 3];
    let mut data = PositionData {
        n_s,
        t: t_nodes.clone(),
        rho: Vec::new(),
        grad_rho: Vec::new(),
        r_dot_n: Vec::new(),
        h: Vec::new(),
    };
    for &s in &s_nodes {
        for &t in &t_nodes {
            let (sj, tj) = jet2_variables(s, t, 2, 2);
            let r = fixture.position(sj, tj).expect("embedding checked above");
            let rho_jet =
                -(r[0].clone() * r[0].clone() + r[1].clone() * r[1].clone() + r[2].clone() * r[2].clone()).scale(0.5);
            let rho = PartialTable::from_jet(&rho_jet, 2, 2);
            let pos = fixture.position(s, t).expect("embedding checked above");
            let nrm = fixture.normal(s, t).expect("embedding checked above");
            let r2: f64 = pos.iter().map(|x| x * x).sum();
            let rn: f64 = pos.iter().zip(&nrm).map(|(a, b)| a * b).sum();

            let m = chart.metric_at(s, t, 1, 1)?;
            let (b, bs, bt) = (m.b.get(0, 0), m.b.get(1, 0), m.b.get(0, 1));
            let k = m.k.get(0, 0);
            let gam = crate::chart::christoffels(&chart, s, t)?;
            let (rs, rt) = (rho.get(1, 0), rho.get(0, 1));
            // ∇²ρ_ab = ∂_ab ρ - Γ^c_ab ∂_c ρ, with (Γ¹₁₁, Γ¹₁₂, Γ¹₂₂, Γ²₁₁, Γ²₁₂, Γ²₂₂)
            let hss = rho.get(2, 0) - gam[0] * rs - gam[3] * rt;
            let hst = rho.get(1, 1) - gam[1] * rs - gam[4] * rt;
            let htt = rho.get(0, 2) - gam[2] * rs - gam[5] * rt;
            debug_assert!((gam[0] - bs / b).abs() < 1e-12 && (gam[1] - bt / b).abs() < 1e-12);
            let (p11, p12, p22) = (hss / (b * b), hst / b, htt);

            let [l, mm, n] = fixture.exact_lmn(t).expect("exact fields checked above");
            let (h11, h12, h22) = (l / (b * b), mm / b, n);
            let mean = h_scale * 0.5 * (h11 + h22);
            let grad2 = rs * rs / (b * b) + rt * rt;

            // K h^{ij} is the cofactor matrix of h
            let lhs1 = h22 * p11 - 2.0 * h12 * p12 + h11 * p22;
            let r1 = (lhs1 + 2.0 * mean + 2.0 * k * rn).abs();
            let r2_res = (rn * rn + grad2 - r2).abs();
            let det = (p11 + 1.0) * (p22 + 1.0) - p12 * p12;
            let r3 = (det - k * (-2.0 * rho.get(0, 0) - grad2)).abs();
            worst[0] = worst[0].max(r1);
            worst[1] = worst[1].max(r2_res);
            worst[2] = worst[2].max(r3);

            data.rho.push(rho.get(0, 0));
            data.grad_rho.push([rs / b, rt]);
            data.r_dot_n.push(rn);
            data.h.push([h11, h12, h22]);
        }
    }
    Ok(PositionReport {
        hessian_trace: worst[0],
        support: worst[1],
        monge_ampere: worst[2],
        points: n_s * n_t,
        data: Some(data),
    })
}

pub fn position_identities(fixture: &SurfaceFixture) -> Result<PositionReport> {
    position_identities_with(fixture, 32, 17, 1.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanCurvatureBound {
    pub applicable: bool,
    pub sup_h: f64,
    /// `max_σ √(|∇K| / |k_g|)`.
    pub boundary_term: f64,
    pub sup_k: f64,
    pub sup_sqrt_laplacian_k: f64,
    /// Length used to make the curvature terms scale like `1/length`.
    pub length_scale: f64,
    /// `sup H / (boundary_term + ℓ (sup K + sup √|ΔK|))`.
    pub implied_c: f64,
    /// `sup H / (boundary_term + sup K + sup √|ΔK|)`, not scale-invariant.
    pub implied_c_unweighted: f64,
}

pub fn mean_curvature_bound_check(fixture: &SurfaceFixture, n_s: usize, n_t: usize) -> Result<MeanCurvatureBound> {
    let length_scale = fixture.period() / 2.0 + fixture.t_max;
    if !fixture.is_an || !fixture.has_exact_fields() {
        return Ok(MeanCurvatureBound {
            applicable: false,
            sup_h: f64::NAN,
            boundary_term: f64::NAN,
            sup_k: f64::NAN,
            sup_sqrt_laplacian_k: f64::NAN,
            length_scale,
            implied_c: f64::NAN,
            implied_c_unweighted: f64::NAN,
        });
    }
    let chart = fixture.chart(n_s, n_t)?;
    let mut sup_h: f64 = 0.0;
    let mut sup_k: f64 = 0.0;
    let mut sup_lap: f64 = 0.0;
    let mut boundary_term: f64 = 0.0;
    for &t in chart.t_nodes() {
        sup_h = sup_h.max(fixture.exact_h(t).expect("exact fields checked above"));
        for m in chart.column(t, 2, 2)? {
            let (b, bs, bt) = (m.b.get(0, 0), m.b.get(1, 0), m.b.get(0, 1));
            let k = &m.k;
            let lap = (k.get(2, 0) / b - k.get(1, 0) * bs / (b * b) + bt * k.get(0, 1) + b * k.get(0, 2)) / b;
            sup_k = sup_k.max(k.get(0, 0));
            sup_lap = sup_lap.max(lap.abs().sqrt());
            if t == 0.0 {
                let grad = (k.get(1, 0).powi(2) / (b * b) + k.get(0, 1).powi(2)).sqrt();
                boundary_term = boundary_term.max((grad / bt.abs()).sqrt());
            }
        }
    }
    Ok(MeanCurvatureBound {
        applicable: true,
        sup_h,
        boundary_term,
        sup_k,
        sup_sqrt_laplacian_k: sup_lap,
        length_scale,
        implied_c: sup_h / (boundary_term + length_scale * (sup_k + sup_lap)),
        implied_c_unweighted: sup_h / (boundary_term + sup_k + sup_lap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_values() {
        let f = torus_fixture(1.0, 2.0).unwrap();
        let [l, m, n] = f.exact_lmn(0.7).unwrap();
        assert!((l - (2.0 + 0.7f64.sin()) * 0.7f64.sin() / 4.0).abs() < 1e-15);
        assert_eq!((m, n), (0.0, 1.0));
        assert!((f.exact_h(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(torus_fixture(2.0, 2.0).is_err());
    }

    #[test]
    fn revolution_torus_profile_matches_torus() {
        let tor = torus_fixture(1.0, 2.0).unwrap();
        let rev = fixture_by_id("revolution_torus", &serde_json::json!({"a": 1.0, "R": 2.0})).unwrap();
        for &t in &[0.0, 0.01, 0.0999, 0.1001, 0.5, 1.2, 1.5] {
            let a = tor.exact_lmn(t).unwrap();
            let b = rev.exact_lmn(t).unwrap();
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-12, "t = {t}, field {k}: {} vs {}", a[k], b[k]);
            }
        }
    }

    #[test]
    fn revolution_gauss_equation_and_continuity() {
        let f = default_revolution_fixture().unwrap();
        let metric = f.metric();
        for &t in &[0.02, 0.1, 0.3, 0.9] {
            let [l, _, n] = f.exact_lmn(t).unwrap();
            let b = metric.eval(0.0, t);
            let k = t * (1.0 - t / 2.0);
            assert!((n * l - k * b * b).abs() < 1e-12);
        }
        let below = f.exact_lmn(SERIES_SWITCH - 1e-12).unwrap();
        let above = f.exact_lmn(SERIES_SWITCH + 1e-12).unwrap();
        assert!((below[2] - above[2]).abs() < 1e-11);
        let n0 = f.exact_lmn(0.0).unwrap()[2];
        let n1 = f.exact_lmn(0.5).unwrap()[2];
        assert!((n0 - 2f64.sqrt()).abs() < 1e-12 && (n1 - n0).abs() > 1e-3);
    }

    #[test]
    fn invalid_profiles_rejected() {
        let flat_start = CurvatureProfile::Polynomial {
            coeffs: vec![0.0, 0.0, 1.0],
        };
        assert!(matches!(
            revolution_fixture(flat_start, -0.5, 1.0),
            Err(Error::ProfileInvalid(_))
        ));
        let pos_kg = CurvatureProfile::Polynomial { coeffs: vec![0.0, 1.0] };
        assert!(revolution_fixture(pos_kg, 0.5, 1.0).is_err());
    }

    #[test]
    fn embedding_reproduces_intrinsic_data() {
        let f = torus_fixture(0.5, 2.0).unwrap();
        for &(s, t) in &[(0.3, 0.1), (4.0, 0.6)] {
            let (sj, tj) = jet2_variables(s, t, 2, 2);
            let r = f.position(sj, tj).unwrap();
            let tabs: Vec<PartialTable> = r.iter().map(|c| PartialTable::from_jet(c, 2, 2)).collect();
            let dot = |a: (usize, usize), b: (usize, usize)| -> f64 {
                tabs.iter().map(|x| x.get(a.0, a.1) * x.get(b.0, b.1)).sum()
            };
            let b = f.metric().eval(s, t);
            assert!((dot((1, 0), (1, 0)) - b * b).abs() < 1e-12);
            assert!(dot((1, 0), (0, 1)).abs() < 1e-12);
            assert!((dot((0, 1), (0, 1)) - 1.0).abs() < 1e-12);
            let n = f.normal(s, t).unwrap();
            let sff = |i: usize, j: usize| -> f64 { tabs.iter().zip(&n).map(|(x, nk)| x.get(i, j) * nk).sum() };
            let [l, m, nn] = f.exact_lmn(t).unwrap();
            assert!((sff(2, 0) - l).abs() < 1e-12);
            assert!((sff(1, 1) - m).abs() < 1e-12);
            assert!((sff(0, 2) - nn).abs() < 1e-12);
        }
    }

    #[test]
    fn position_identities_hold_and_detect_corruption() {
        let f = torus_fixture(1.0, 2.0).unwrap();
        let rep = position_identities(&f).unwrap();
        assert!(rep.max_residual() < 1e-10, "{rep:?}");
        let bad = position_identities_with(&f, 16, 9, 1.1).unwrap();
        assert!(bad.hessian_trace > 1e-2);
        let data = rep.data.unwrap();
        assert!(data.rho.iter().all(|&r| r <= 0.0));
    }

    #[test]
    fn mean_curvature_bound_is_scale_invariant() {
        let c: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&l| {
                mean_curvature_bound_check(&torus_fixture(l, 2.0 * l).unwrap(), 16, 33)
                    .unwrap()
                    .implied_c
            })
            .collect();
        assert!((c[0] - c[1]).abs() / c[1] < 1e-10 && (c[2] - c[1]).abs() / c[1] < 1e-10);
        let sphere = mean_curvature_bound_check(&sphere_band_fixture(), 16, 9).unwrap();
        assert!(!sphere.applicable);
    }
}
