//! Closed-form and semi-analytic sources for the collar metric `B(s, t)`.
//!
//! Every source is generic over [`Real`], so the same code yields values,
//! univariate jets and bivariate jets.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::taylor::{Real, Taylor};

/// Gauss curvature profiles `K(t)` for surfaces of revolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurvatureProfile {
    /// `K(t) = Σ c_j t^j`.
    Polynomial { coeffs: Vec<f64> },
    /// Curvature of the outer torus collar with tube radius `a`, core radius `r`.
    Torus { a: f64, r: f64 },
}

impl CurvatureProfile {
    pub fn eval<T: Real>(&self, t: T) -> T {
        match self {
            CurvatureProfile::Polynomial { coeffs } => poly_eval(coeffs, t),
            CurvatureProfile::Torus { a, r } => {
                let sn = t.scale(1.0 / a).sin();
                sn.clone() / (sn.scale(*a).add_f64(*r)).scale(*a)
            }
        }
    }
}

/// Horner evaluation of `Σ c_j x^j` in any [`Real`].
pub fn poly_eval<T: Real>(coeffs: &[f64], x: T) -> T {
    let mut acc = T::cst(0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x.clone() + T::cst(c);
    }
    acc
}

/// Meridian factor `B(t)` of a surface of revolution, obtained by integrating
/// `B'' = -K B`, `B(0) = 1`, `B'(0) = -k_g` with piecewise Taylor series.
#[derive(Clone, Debug)]
pub struct RevolutionMetric {
    pub profile: CurvatureProfile,
    pub boundary_kg: f64,
    pub t_max: f64,
    step: f64,
    /// Taylor coefficients of `B` about each segment start `j * step`.
    segments: Vec<Vec<f64>>,
}

const REVOLUTION_SERIES_ORDER: usize = 28;
const REVOLUTION_STEP: f64 = 0.05;

impl RevolutionMetric {
    pub fn new(profile: CurvatureProfile, boundary_kg: f64, t_max: f64) -> Self {
        let n_seg = (t_max / REVOLUTION_STEP).ceil() as usize + 2;
        let order = REVOLUTION_SERIES_ORDER;
        let mut segments = Vec::with_capacity(n_seg);
        let (mut b0, mut b1) = (1.0, -boundary_kg);
        for j in 0..n_seg {
            let tj = j as f64 * REVOLUTION_STEP;
            let k = profile.eval(Taylor::variable(tj, order)).coeffs;
            let mut c = vec![0.0; order + 1];
            c[0] = b0;
            c[1] = b1;
            for m in 0..order - 1 {
                let kb: f64 = (0..=m).map(|i| k[i] * c[m - i]).sum();
                c[m + 2] = -kb / ((m + 2) as f64 * (m + 1) as f64);
            }
            let h = REVOLUTION_STEP;
            b0 = c.iter().rev().fold(0.0, |acc, &x| acc * h + x);
            b1 = (1..=order).rev().fold(0.0, |acc, m| acc * h + m as f64 * c[m]);
            segments.push(c);
        }
        Self {
            profile,
            boundary_kg,
            t_max,
            step: REVOLUTION_STEP,
            segments,
        }
    }

    pub fn eval<T: Real>(&self, t: T) -> T {
        let tv = t.value();
        let j = ((tv / self.step).floor().max(0.0) as usize).min(self.segments.len() - 1);
        let offset = t.add_f64(-(j as f64 * self.step));
        poly_eval(&self.segments[j], offset)
    }

    /// `B'(t)`.
    pub fn eval_dt<T: Real>(&self, t: T) -> T {
        let tv = t.value();
        let j = ((tv / self.step).floor().max(0.0) as usize).min(self.segments.len() - 1);
        let offset = t.add_f64(-(j as f64 * self.step));
        let d: Vec<f64> = self.segments[j]
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| m as f64 * c)
            .collect();
        poly_eval(&d, offset)
    }
}

/// Named analytic metrics. `s` is arclength along the boundary curve.
#[derive(Clone, Debug)]
pub enum AnalyticMetric {
    /// `B ≡ 1`.
    Flat { period: f64 },
    /// `B ≡ c` (only normalized for `c = 1`).
    Constant { value: f64, period: f64 },
    /// Outer torus collar: `B = (r + a sin(t/a)) / r`, period `2πr`.
    Torus { a: f64, r: f64 },
    /// Torus collar times `1 + eps t³ cos(mode s / r)`.
    PerturbedTorus { a: f64, r: f64, eps: f64, mode: u32 },
    /// Spherical cap around a geodesic circle: `B = cos t`.
    SphereBand { period: f64 },
    /// `B = 1 + t (1 + amp cos s)`, period `2π`.
    Skewed { amp: f64 },
    /// Surface of revolution with prescribed `K(t)`; period `-2π / k_g`.
    Revolution(Arc<RevolutionMetric>),
}

impl AnalyticMetric {
    pub fn eval<T: Real>(&self, s: T, t: T) -> T {
        match self {
            AnalyticMetric::Flat { .. } => T::cst(1.0) + (s.scale(0.0) + t.scale(0.0)),
            AnalyticMetric::Constant { value, .. } => T::cst(*value) + (s.scale(0.0) + t.scale(0.0)),
            AnalyticMetric::Torus { a, r } => torus_b(*a, *r, t) + s.scale(0.0),
            AnalyticMetric::PerturbedTorus { a, r, eps, mode } => {
                let base = torus_b(*a, *r, t.clone());
                let q = t.powi(3);
                let wave = s.scale(*mode as f64 / r).cos();
                base * (q * wave).scale(*eps).add_f64(1.0)
            }
            AnalyticMetric::SphereBand { .. } => t.cos() + s.scale(0.0),
            AnalyticMetric::Skewed { amp } => {
                let c = s.cos().scale(*amp).add_f64(1.0);
                (t * c).add_f64(1.0)
            }
            AnalyticMetric::Revolution(rev) => rev.eval(t) + s.scale(0.0),
        }
    }

    /// Natural boundary length of the source.
    pub fn period(&self) -> f64 {
        match self {
            AnalyticMetric::Flat { period }
            | AnalyticMetric::Constant { period, .. }
            | AnalyticMetric::SphereBand { period } => *period,
            AnalyticMetric::Torus { r, .. } | AnalyticMetric::PerturbedTorus { r, .. } => 2.0 * PI * r,
            AnalyticMetric::Skewed { .. } => 2.0 * PI,
            AnalyticMetric::Revolution(rev) => -2.0 * PI / rev.boundary_kg,
        }
    }

    /// True when `B` does not depend on `s`.
    pub fn is_rotational(&self) -> bool {
        !matches!(
            self,
            AnalyticMetric::PerturbedTorus { .. } | AnalyticMetric::Skewed { .. }
        )
    }
}

fn torus_b<T: Real>(a: f64, r: f64, t: T) -> T {
    t.scale(1.0 / a).sin().scale(a / r).add_f64(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn revolution_of_torus_profile_matches_closed_form() {
        let rev = RevolutionMetric::new(CurvatureProfile::Torus { a: 1.0, r: 2.0 }, -0.5, 1.6);
        for &t in &[0.0, 0.3, 0.77, 1.2, 1.55] {
            let exact = (2.0 + f64::sin(t)) / 2.0;
            assert!((rev.eval(t) - exact).abs() < 1e-13, "t = {t}");
        }
        let jet = rev.eval(Taylor::variable(0.9, 3));
        assert!((jet.coeffs[1] - 0.9f64.cos() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_profile_satisfies_ode() {
        let rev = RevolutionMetric::new(
            CurvatureProfile::Polynomial {
                coeffs: vec![0.0, 1.0, -0.5],
            },
            -0.5,
            1.0,
        );
        for &t in &[0.1, 0.5, 0.95] {
            let j = rev.eval(Taylor::variable(t, 2));
            let k = t - 0.5 * t * t;
            assert!((2.0 * j.coeffs[2] + k * j.coeffs[0]).abs() < 1e-12);
        }
    }
}
