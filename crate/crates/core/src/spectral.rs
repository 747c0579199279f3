//! Fourier differentiation, filtering and interpolation on a uniform periodic grid.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
pub struct PeriodicGrid {
    n: usize,
    period: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("n", &self.n)
            .field("period", &self.period)
            .finish()
    }
}

impl PeriodicGrid {
    pub fn new(n: usize, period: f64) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            period,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| i as f64 * self.spacing()).collect()
    }

    /// Largest wavenumber kept by the 2/3 rule.
    pub fn two_thirds_cutoff(&self) -> usize {
        self.n / 3
    }

    /// Integer wavenumber of FFT bin `k`.
    fn wavenumber(&self, k: usize) -> i64 {
        if k <= self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(f.len(), self.n);
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    fn inverse_real(&self, mut buf: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.into_iter().map(|z| z.re * scale).collect()
    }

    /// `d^order f / ds^order`, keeping wavenumbers `|k| <= cutoff`
    /// (`None` keeps everything below Nyquist).
    pub fn derivative(&self, f: &[f64], order: usize, cutoff: Option<usize>) -> Vec<f64> {
        let mut buf = self.forward(f);
        let base = 2.0 * PI / self.period;
        let nyquist = self.n.is_multiple_of(2);
        for (k, z) in buf.iter_mut().enumerate() {
            let m = self.wavenumber(k);
            let keep = cutoff.is_none_or(|c| m.unsigned_abs() as usize <= c);
            if !keep || (nyquist && k == self.n / 2 && order % 2 == 1) {
                *z = Complex64::new(0.0, 0.0);
                continue;
            }
            let ik = Complex64::new(0.0, base * m as f64);
            let mut factor = Complex64::new(1.0, 0.0);
            for _ in 0..order {
                factor *= ik;
            }
            *z *= factor;
        }
        self.inverse_real(buf)
    }

    /// Remove all modes with `|k| > cutoff`.
    pub fn filter(&self, f: &[f64], cutoff: usize) -> Vec<f64> {
        if cutoff >= self.n / 2 {
            return f.to_vec();
        }
        let mut buf = self.forward(f);
        for (k, z) in buf.iter_mut().enumerate() {
            if self.wavenumber(k).unsigned_abs() as usize > cutoff {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        self.inverse_real(buf)
    }

    /// Trigonometric interpolant of the samples evaluated at arbitrary `s`.
    pub fn interpolate(&self, f: &[f64], s: f64) -> f64 {
        let coeffs = self.forward(f);
        self.eval_coeffs(&coeffs, s, 0)
    }

    /// Evaluate the `order`-th derivative of the interpolant from precomputed FFT coefficients.
    pub fn eval_coeffs(&self, coeffs: &[Complex64], s: f64, order: usize) -> f64 {
        let base = 2.0 * PI / self.period;
        let n = self.n;
        let mut acc = 0.0;
        for (k, z) in coeffs.iter().enumerate() {
            let m = self.wavenumber(k);
            let mut w = 1.0;
            if n.is_multiple_of(2) && k == n / 2 {
                // split the Nyquist mode symmetrically so the interpolant is real
                w = 0.5;
                let phase = base * m as f64 * s;
                let d = (base * m as f64).powi(order as i32);
                let re = match order % 4 {
                    0 => phase.cos(),
                    1 => -phase.sin(),
                    2 => -phase.cos(),
                    _ => phase.sin(),
                };
                // cos(m s) term from both +m and -m halves
                acc += 2.0 * w * z.re * d * re;
                continue;
            }
            let phase = base * m as f64 * s;
            let e = Complex64::from_polar(1.0, phase);
            let ik = Complex64::new(0.0, base * m as f64);
            let mut factor = Complex64::new(w, 0.0);
            for _ in 0..order {
                factor *= ik;
            }
            acc += (z * e * factor).re;
        }
        acc / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_trig_polynomial_is_exact() {
        let g = PeriodicGrid::new(32, 4.0 * PI);
        let s = g.nodes();
        let f: Vec<f64> = s.iter().map(|&x| (0.5 * x).sin() + 0.25 * (1.5 * x).cos()).collect();
        let d1 = g.derivative(&f, 1, None);
        let d2 = g.derivative(&f, 2, None);
        for (i, &x) in s.iter().enumerate() {
            let e1 = 0.5 * (0.5 * x).cos() - 0.375 * (1.5 * x).sin();
            let e2 = -0.25 * (0.5 * x).sin() - 0.5625 * (1.5 * x).cos();
            assert!((d1[i] - e1).abs() < 1e-13);
            assert!((d2[i] - e2).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_input_has_exactly_zero_derivative() {
        let g = PeriodicGrid::new(256, 4.0 * PI);
        let f = vec![0.731_234_5; 256];
        let d = g.derivative(&f, 1, Some(g.two_thirds_cutoff()));
        assert!(d.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn interpolation_reproduces_band_limited_function() {
        let g = PeriodicGrid::new(16, 2.0 * PI);
        let f: Vec<f64> = g.nodes().iter().map(|&x| (3.0 * x).cos() + x.sin()).collect();
        let c = g.forward(&f);
        for &x in &[0.1, 1.234, 5.9] {
            assert!((g.eval_coeffs(&c, x, 0) - ((3.0 * x).cos() + x.sin())).abs() < 1e-13);
            let d = -3.0 * (3.0 * x).sin() + x.cos();
            assert!((g.eval_coeffs(&c, x, 1) - d).abs() < 1e-12);
        }
    }

    #[test]
    fn filter_removes_high_modes() {
        let g = PeriodicGrid::new(24, 2.0 * PI);
        let f: Vec<f64> = g.nodes().iter().map(|&x| x.cos() + (9.0 * x).sin()).collect();
        let h = g.filter(&f, 4);
        for (i, &x) in g.nodes().iter().enumerate() {
            assert!((h[i] - x.cos()).abs() < 1e-13);
        }
    }
}
