//! Boundary Taylor jets of `(L, M, N)` and of the mean curvature.
//!
//! Coefficients are kept normalized (`c_m = ∂_t^m f(s,0) / m!`) as periodic
//! `s`-profiles; `s`-derivatives of profiles are spectral.

use serde::Serialize;

use crate::chart::GeodesicChart;
use crate::error::{Error, Result};
use crate::taylor::{Real, Taylor};

/// Largest jet order accepted by [`jet_recursion`].
pub const MAX_JET_ORDER: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryJet {
    /// Highest stored order of `M` and `N`; `L` is stored to `order + 1`.
    pub order: usize,
    pub period: f64,
    pub n_s: usize,
    /// `l[m][i]` is the normalized `t^m` coefficient of `L` at `s_i`.
    pub l: Vec<Vec<f64>>,
    pub m: Vec<Vec<f64>>,
    pub n: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Field {
    L,
    M,
    N,
    H,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::L => "L",
            Field::M => "M",
            Field::N => "N",
            Field::H => "H",
        }
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

impl BoundaryJet {
    /// `∂_t^m` of the field at every `s` node.
    pub fn derivative(&self, field: Field, m: usize) -> Option<Vec<f64>> {
        let src = match field {
            Field::L => &self.l,
            Field::M => &self.m,
            Field::N => &self.n,
            Field::H => return None,
        };
        let f = factorial(m);
        src.get(m).map(|c| c.iter().map(|v| v * f).collect())
    }

    /// Normalized coefficient series of a field at node `i`.
    pub fn series(&self, field: Field, i: usize) -> Vec<f64> {
        let src = match field {
            Field::L => &self.l,
            Field::M => &self.m,
            Field::N => &self.n,
            Field::H => return Vec::new(),
        };
        src.iter().map(|c| c[i]).collect()
    }
}

fn boundary_from_tjet(b: &[f64], k: &[f64], s: f64) -> Result<(f64, f64)> {
    let (b_t, k_t) = (b[1], k[1]);
    if !(k_t > 0.0 && b_t > 0.0) {
        return Err(Error::DegenerateBoundaryData { s, k_t, b_t });
    }
    Ok(((k_t / b_t).sqrt(), (k_t * b_t).sqrt()))
}

/// `N(·,0) = √(K_t / B_t)` and `∂_t L(·,0) = √(K_t B_t)`, with `L = M = 0`.
pub fn boundary_values(chart: &GeodesicChart) -> Result<BoundaryJet> {
    let n_s = chart.n_s();
    let s_nodes = chart.s_nodes();
    let mut n0 = vec![0.0; n_s];
    let mut l1 = vec![0.0; n_s];
    for i in 0..n_s {
        let (b, k) = chart.boundary_t_jet(i, 1)?;
        let (n, l) = boundary_from_tjet(&b, &k, s_nodes[i])?;
        n0[i] = n;
        l1[i] = l;
    }
    Ok(BoundaryJet {
        order: 0,
        period: chart.period(),
        n_s,
        l: vec![vec![0.0; n_s], l1],
        m: vec![vec![0.0; n_s]],
        n: vec![n0],
    })
}

/// Cauchy product coefficient `(a b)_m` restricted to index pairs where both are available.
fn conv(a: &[f64], b: &[f64], m: usize) -> f64 {
    (0..=m)
        .filter(|&j| j < a.len() && m - j < b.len())
        .map(|j| a[j] * b[m - j])
        .sum()
}

/// Full boundary jet to order `k` by solving, for `m = 1..=k`, the Codazzi
/// relation for `M_m` and a 2×2 system (Codazzi at `t^m`, Gauss at `t^{m+1}`)
/// for `(L_{m+1}, N_m)`.
pub fn jet_recursion(chart: &GeodesicChart, order: usize) -> Result<BoundaryJet> {
    if order > MAX_JET_ORDER {
        return Err(Error::BadParameters(format!(
            "jet order {order} exceeds the supported maximum {MAX_JET_ORDER}"
        )));
    }
    let required = order + 3;
    if required > chart.max_t_order() {
        return Err(Error::InsufficientSmoothness {
            required,
            available: chart.max_t_order(),
        });
    }
    let n_s = chart.n_s();
    let grid = chart.s_grid();
    let s_nodes = chart.s_nodes();

    // per-node t-series of B, K and derived metric series
    let mut bser = Vec::with_capacity(n_s);
    let mut kser = Vec::with_capacity(n_s);
    for i in 0..n_s {
        let (b, k) = chart.boundary_t_jet(i, order + 1)?;
        bser.push(b);
        kser.push(k);
    }
    let beta: Vec<Vec<f64>> = bser
        .iter()
        .map(|b| {
            let bj = Taylor::from_coeffs(b.clone());
            (bj.derivative() / bj).with_order(order + 1).coeffs
        })
        .collect();
    let bbt: Vec<Vec<f64>> = bser
        .iter()
        .map(|b| {
            let bj = Taylor::from_coeffs(b.clone());
            (bj.clone() * bj.derivative()).with_order(order + 1).coeffs
        })
        .collect();
    let kb2: Vec<Vec<f64>> = bser
        .iter()
        .zip(&kser)
        .map(|(b, k)| {
            let bj = Taylor::from_coeffs(b[..=order + 1].to_vec());
            (Taylor::from_coeffs(k.clone()) * bj.clone() * bj)
                .with_order(order + 1)
                .coeffs
        })
        .collect();
    // B_s / B: s-derivatives of the B coefficient profiles are the coefficients of B_s
    let b_profiles: Vec<Vec<f64>> = (0..=order + 1).map(|m| bser.iter().map(|b| b[m]).collect()).collect();
    let bs_profiles: Vec<Vec<f64>> = b_profiles.iter().map(|p| grid.derivative(p, 1, None)).collect();
    let gamma: Vec<Vec<f64>> = (0..n_s)
        .map(|i| {
            let bs = Taylor::from_coeffs(bs_profiles.iter().map(|p| p[i]).collect());
            (bs / Taylor::from_coeffs(bser[i][..=order + 1].to_vec())).coeffs
        })
        .collect();

    let mut n0 = vec![0.0; n_s];
    let mut l1 = vec![0.0; n_s];
    for i in 0..n_s {
        let (n, l) = boundary_from_tjet(&bser[i], &kser[i], s_nodes[i])?;
        n0[i] = n;
        l1[i] = l;
    }
    let mut l = vec![vec![0.0; n_s], l1];
    let mut mm = vec![vec![0.0; n_s]];
    let mut nn = vec![n0];

    for m in 1..=order {
        // Codazzi (M-equation) at t^{m-1}: m M_m = (N_s)_{m-1} - (β M)_{m-1}
        let ns_prev = grid.derivative(&nn[m - 1], 1, None);
        let mut m_new = vec![0.0; n_s];
        for i in 0..n_s {
            let mcol: Vec<f64> = mm.iter().map(|p| p[i]).collect();
            m_new[i] = (ns_prev[i] - conv(&beta[i], &mcol, m - 1)) / m as f64;
        }
        mm.push(m_new);
        let ms = grid.derivative(&mm[m], 1, None);

        let mut l_new = vec![0.0; n_s];
        let mut n_new = vec![0.0; n_s];
        for i in 0..n_s {
            let lcol: Vec<f64> = l.iter().map(|p| p[i]).collect();
            let mcol: Vec<f64> = mm.iter().map(|p| p[i]).collect();
            let ncol: Vec<f64> = nn.iter().map(|p| p[i]).collect();
            let c0 = bbt[i][0];
            // (B B_t N)_m without the unknown N_m term
            let known_bbtn: f64 = (1..=m).map(|j| bbt[i][j] * ncol[m - j]).sum();
            let r1 = ms[i] + conv(&beta[i], &lcol, m) - conv(&gamma[i], &mcol, m) + known_bbtn;
            // (N L)_{m+1} minus the two unknown terms; L_0 = 0 removes N_{m+1}
            let known_nl: f64 = (1..m).map(|j| ncol[j] * lcol[m + 1 - j]).sum();
            let m2: f64 = (1..=m).map(|j| mcol[j] * mcol[m + 1 - j]).sum();
            let r3 = kb2[i][m + 1] + m2 - known_nl;
            let (a11, a12, a21, a22) = ((m + 1) as f64, -c0, ncol[0], lcol[1]);
            let det = a11 * a22 - a12 * a21;
            if det.abs() < 1e-12 {
                return Err(Error::SingularJetSystem { index: i, det });
            }
            l_new[i] = (r1 * a22 - a12 * r3) / det;
            n_new[i] = (a11 * r3 - a21 * r1) / det;
        }
        l.push(l_new);
        nn.push(n_new);
    }

    Ok(BoundaryJet {
        order,
        period: chart.period(),
        n_s,
        l,
        m: mm,
        n: nn,
    })
}

/// `∂_t^m H(·,0)` for `m = 0..=jet.order`, with `H = (L/B² + N)/2`.
pub fn mean_curvature_jet(jet: &BoundaryJet, chart: &GeodesicChart) -> Result<Vec<Vec<f64>>> {
    let order = jet.order;
    let mut out = vec![vec![0.0; jet.n_s]; order + 1];
    for i in 0..jet.n_s {
        let (b, _) = chart.boundary_t_jet(i, order.saturating_sub(2))?;
        let bj = Taylor::from_coeffs(b[..=order.min(b.len() - 1)].to_vec());
        let lj = Taylor::from_coeffs(jet.series(Field::L, i)[..=order].to_vec());
        let nj = Taylor::from_coeffs(jet.series(Field::N, i));
        let h = ((lj / (bj.clone() * bj)) + nj).scale(0.5).with_order(order);
        for (m, c) in h.coeffs.iter().enumerate() {
            out[m][i] = c * factorial(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{ChartOptions, GeodesicChart};
    use crate::fixtures::{default_revolution_fixture, torus_fixture};
    use crate::metric::AnalyticMetric;
    use crate::taylor::Taylor;

    fn torus(a: f64, r: f64) -> GeodesicChart {
        torus_fixture(a, r).unwrap().chart(16, 16).unwrap()
    }

    #[test]
    fn torus_boundary_values() {
        for &(a, r) in &[(1.0, 2.0), (1.0, 3.0), (0.5, 2.0)] {
            let jet = boundary_values(&torus(a, r)).unwrap();
            assert!(jet.n[0].iter().all(|&n| (n - 1.0 / a).abs() < 1e-12));
            assert!(jet.l[1].iter().all(|&l| (l - 1.0 / (a * r)).abs() < 1e-12));
        }
    }

    #[test]
    fn flat_chart_is_degenerate() {
        let c = GeodesicChart::analytic(AnalyticMetric::Flat { period: 6.0 }, 1.0, 8, 8).unwrap();
        assert!(matches!(boundary_values(&c), Err(Error::DegenerateBoundaryData { .. })));
    }

    #[test]
    fn torus_first_order_jet() {
        let jet = jet_recursion(&torus(1.0, 2.0), 1).unwrap();
        let lt2 = jet.derivative(Field::L, 2).unwrap();
        assert!(lt2.iter().all(|&v| (v - 0.5).abs() < 1e-13));
        assert!(jet.derivative(Field::M, 1).unwrap().iter().all(|&v| v == 0.0));
        assert!(jet.derivative(Field::N, 1).unwrap().iter().all(|&v| v.abs() < 1e-13));
    }

    #[test]
    fn revolution_jet_matches_exact_series() {
        let f = default_revolution_fixture().unwrap();
        let chart = f.chart(8, 16).unwrap();
        let jet = jet_recursion(&chart, 5).unwrap();
        let [l, _, n] = f.exact_lmn(Taylor::variable(0.0, 6)).unwrap();
        for m in 0..=5 {
            assert!((jet.n[m][3] - n.coeffs[m]).abs() < 1e-10, "N_{m}");
            assert!((jet.l[m + 1][3] - l.coeffs[m + 1]).abs() < 1e-10, "L_{}", m + 1);
            assert!(jet.m[m].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn mean_curvature_jet_torus() {
        let c = torus(1.0, 2.0);
        let jet = jet_recursion(&c, 2).unwrap();
        let h = mean_curvature_jet(&jet, &c).unwrap();
        assert!(h[0].iter().all(|&v| (v - 0.5).abs() < 1e-14));
        assert!(h[1].iter().all(|&v| (v - 0.25).abs() < 1e-13));
    }

    #[test]
    fn grid_chart_limits_order() {
        let metric = AnalyticMetric::Torus { a: 1.0, r: 2.0 };
        let g = GeodesicChart::sampled_from(&metric, 1.5, 16, 64, &ChartOptions::default()).unwrap();
        assert!(jet_recursion(&g, 1).is_ok());
        assert!(matches!(
            jet_recursion(&g, 2),
            Err(Error::InsufficientSmoothness { .. })
        ));
        assert!(jet_recursion(&torus(1.0, 2.0), MAX_JET_ORDER + 1).is_err());
    }

    #[test]
    fn perturbed_jet_satisfies_gauss_codazzi_series() {
        let f = crate::fixtures::perturbed_torus_fixture(1.0, 2.0, 0.05, 2).unwrap();
        let chart = f.chart(32, 16).unwrap();
        let k = 4;
        let jet = jet_recursion(&chart, k).unwrap();
        let grid = chart.s_grid();
        // Gauss equation coefficients t^0..t^{k+1}
        for i in 0..chart.n_s() {
            let (b, kk) = chart.boundary_t_jet(i, k + 1).unwrap();
            let bj = Taylor::from_coeffs(b[..=k + 1].to_vec());
            let kb2 = Taylor::from_coeffs(kk) * bj.clone() * bj;
            let nj = Taylor::from_coeffs(jet.series(Field::N, i));
            let lj = Taylor::from_coeffs(jet.series(Field::L, i));
            let mj = Taylor::from_coeffs(jet.series(Field::M, i));
            let res = nj * lj - mj.clone() * mj - kb2;
            for c in 0..=k {
                assert!(res.coeffs[c].abs() < 1e-12, "Gauss t^{c} at {i}: {}", res.coeffs[c]);
            }
        }
        // M-equation at t^0..t^{k-1}
        for m in 0..k {
            let ns = grid.derivative(&jet.n[m], 1, None);
            for i in 0..chart.n_s() {
                let (b, _) = chart.boundary_t_jet(i, k).unwrap();
                let bj = Taylor::from_coeffs(b.clone());
                let beta = (bj.derivative() / bj).coeffs;
                let mcol = jet.series(Field::M, i);
                let lhs = (m + 1) as f64 * mcol[m + 1] - ns[i] + conv(&beta, &mcol, m);
                assert!(lhs.abs() < 1e-12);
            }
        }
        assert!(jet.m[1].iter().any(|&v| v.abs() > 1e-6));
    }
}
