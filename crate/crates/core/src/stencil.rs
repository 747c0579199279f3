//! Finite-difference weights on arbitrary (possibly graded) node sets.

/// Fornberg's recursion: weights `w[d][j]` such that
/// `f^(d)(x0) ≈ Σ_j w[d][j] f(nodes[j])` for every `d <= max_deriv`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_deriv: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_deriv + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Lagrange interpolation weights (derivative order 0 of Fornberg).
pub fn lagrange_weights(x0: f64, nodes: &[f64]) -> Vec<f64> {
    fornberg_weights(x0, nodes, 0).swap_remove(0)
}

/// A precomputed `d`-th derivative operator on a fixed node set, with at least
/// fourth-order accuracy: centered stencils inside, shifted one-sided stencils
/// near both ends.
#[derive(Clone, Debug)]
pub struct DiffOperator {
    pub order: usize,
    rows: Vec<(usize, Vec<f64>)>,
}

impl DiffOperator {
    pub fn new(nodes: &[f64], order: usize) -> Self {
        Self::with_accuracy(nodes, order, 4)
    }

    pub fn with_accuracy(nodes: &[f64], order: usize, accuracy: usize) -> Self {
        let n = nodes.len();
        let wide = (order + accuracy).min(n);
        // symmetric stencils gain one order, so even-width interiors can drop a point
        let interior = if (order + accuracy).is_multiple_of(2) {
            order + accuracy - 1
        } else {
            order + accuracy
        }
        .min(n);
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let half = interior / 2;
            let (start, width) = if i >= half && i + half < n {
                (i - half, interior)
            } else {
                let half_w = wide / 2;
                let start = i.saturating_sub(half_w).min(n - wide);
                (start, wide)
            };
            let w = fornberg_weights(nodes[i], &nodes[start..start + width], order);
            rows.push((start, w[order].clone()));
        }
        Self { order, rows }
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|(start, w)| w.iter().zip(&f[*start..]).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Apply along the second index of a row-major `(n_rows × n)` array.
    pub fn apply_rows(&self, data: &[f64], n: usize) -> Vec<f64> {
        data.chunks(n).flat_map(|row| self.apply(row)).collect()
    }

    pub fn apply_at(&self, f: &[f64], i: usize) -> f64 {
        let (start, w) = &self.rows[i];
        w.iter().zip(&f[*start..]).map(|(a, b)| a * b).sum()
    }
}

/// Index window of `width` nodes around `x` in a sorted node list.
pub fn window_around(nodes: &[f64], x: f64, width: usize) -> usize {
    let n = nodes.len();
    let width = width.min(n);
    let pos = nodes.partition_point(|&v| v < x);
    pos.saturating_sub(width / 2).min(n - width)
}
