//! Quadrature rules and deterministic reductions.

/// Fixed-order pairwise summation; the result depends only on the input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Composite Simpson weights for `n` uniformly spaced samples with spacing `h`.
/// An even sample count closes the last three intervals with Simpson's 3/8 rule.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 2, "need at least two samples");
    let mut w = vec![0.0; n];
    if n == 2 {
        w[0] = h / 2.0;
        w[1] = h / 2.0;
        return w;
    }
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 4 };
    let mut i = 0;
    while i + 2 <= simpson_end {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
        i += 2;
    }
    if n.is_multiple_of(2) {
        let k = simpson_end;
        let c = 3.0 * h / 8.0;
        w[k] += c;
        w[k + 1] += 3.0 * c;
        w[k + 2] += 3.0 * c;
        w[k + 3] += c;
    }
    w
}

pub fn simpson(values: &[f64], h: f64) -> f64 {
    let w = simpson_weights(values.len(), h);
    let terms: Vec<f64> = values.iter().zip(&w).map(|(v, w)| v * w).collect();
    pairwise_sum(&terms)
}

/// Composite Simpson weights on an arbitrary increasing node set. Pairs of
/// intervals use the three-point quadratic rule; an odd final interval is
/// integrated with the quadratic through the last three nodes.
pub fn nonuniform_simpson_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    assert!(n >= 2, "need at least two nodes");
    let mut w = vec![0.0; n];
    if n == 2 {
        let h = nodes[1] - nodes[0];
        return vec![h / 2.0, h / 2.0];
    }
    let intervals = n - 1;
    let paired = intervals - intervals % 2;
    let mut i = 0;
    while i < paired {
        let h0 = nodes[i + 1] - nodes[i];
        let h1 = nodes[i + 2] - nodes[i + 1];
        let hs = h0 + h1;
        w[i] += hs / 6.0 * (2.0 - h1 / h0);
        w[i + 1] += hs.powi(3) / (6.0 * h0 * h1);
        w[i + 2] += hs / 6.0 * (2.0 - h0 / h1);
        i += 2;
    }
    if intervals % 2 == 1 {
        let k = n - 3;
        let h0 = nodes[k + 1] - nodes[k];
        let h1 = nodes[k + 2] - nodes[k + 1];
        w[k] -= h1.powi(3) / (6.0 * h0 * (h0 + h1));
        w[k + 1] += h1 * (h1 + 3.0 * h0) / (6.0 * h0);
        w[k + 2] += h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1));
    }
    w
}

/// Weighted sum with pairwise accumulation.
pub fn weighted_sum(values: &[f64], weights: &[f64]) -> f64 {
    let terms: Vec<f64> = values.iter().zip(weights).map(|(v, w)| v * w).collect();
    pairwise_sum(&terms)
}

/// Trapezoidal rule on a periodic uniform grid (spectrally accurate for smooth data).
pub fn periodic_trapezoid(values: &[f64], h: f64) -> f64 {
    pairwise_sum(values) * h
}

/// Two-dimensional tensor quadrature of a row-major `(n_s × n_t)` array.
pub fn tensor_integral(values: &[f64], ws: &[f64], wt: &[f64]) -> f64 {
    let n_t = wt.len();
    let rows: Vec<f64> = values
        .chunks(n_t)
        .zip(ws)
        .map(|(row, a)| {
            let terms: Vec<f64> = row.iter().zip(wt).map(|(v, b)| v * b).collect();
            a * pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_cubics_both_parities() {
        for n in [5usize, 6, 9, 12] {
            let h = 2.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3) - i as f64 * h).collect();
            assert!((simpson(&v, h) - (4.0 - 2.0)).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn nonuniform_simpson_exact_on_quadratics() {
        for n in [3usize, 4, 7, 10] {
            let x: Vec<f64> = (0..n).map(|i| (i as f64 / (n - 1) as f64).powf(1.7)).collect();
            let w = nonuniform_simpson_weights(&x);
            let f: Vec<f64> = x.iter().map(|&x| 3.0 * x * x - x + 2.0).collect();
            assert!((weighted_sum(&f, &w) - 2.5).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_degree_2n_minus_1() {
        let (x, w) = gauss_legendre(6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
    }
}
