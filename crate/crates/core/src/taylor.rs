//! Truncated Taylor series arithmetic.
//!
//! A [`Taylor<T>`] holds normalized coefficients `c[k] = f^(k)(x0) / k!` of a
//! function of one variable. The coefficient type is itself [`Real`], so
//! `Taylor<Taylor<f64>>` is a bivariate jet: the outer variable is `t`, the
//! inner one is `s` (see [`Jet2`]).
//!
//! Binary operations between series of different lengths pad the shorter one
//! with zeros, i.e. a shorter operand is treated as an exact polynomial. This
//! is what makes `Taylor::constant` mix freely with longer series.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar-like numbers that the jet algebra can be built on.
pub trait Real:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    /// Constant term as a plain double.
    fn value(&self) -> f64;
    fn scale(&self, k: f64) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;

    fn recip(&self) -> Self {
        Self::cst(1.0) / self.clone()
    }

    fn add_f64(&self, k: f64) -> Self {
        self.clone() + Self::cst(k)
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::cst(1.0);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Taylor<T> {
    pub coeffs: Vec<T>,
}

/// Bivariate jet: outer series in `t`, coefficients are series in `s`.
pub type Jet2 = Taylor<Taylor<f64>>;

impl<T: Real> Taylor<T> {
    pub fn constant(v: T) -> Self {
        Self { coeffs: vec![v] }
    }

    /// The identity function expanded about `x0`, truncated at `order`.
    pub fn variable(x0: T, order: usize) -> Self {
        let mut coeffs = vec![T::cst(0.0); order + 1];
        coeffs[0] = x0;
        if order >= 1 {
            coeffs[1] = T::cst(1.0);
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "empty Taylor series");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(|| T::cst(0.0))
    }

    /// Truncate or zero-pad to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, T::cst(0.0));
        Self { coeffs }
    }

    /// Term-wise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(T::cst(0.0));
        }
        let coeffs = (1..self.coeffs.len()).map(|k| self.coeffs[k].scale(k as f64)).collect();
        Self { coeffs }
    }

    /// `(f(x) - f(x0)) / (x - x0)`; requires nothing of `c[0]`, drops it.
    pub fn shift_down(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(T::cst(0.0));
        }
        Self {
            coeffs: self.coeffs[1..].to_vec(),
        }
    }

    /// Evaluate the truncated polynomial at offset `h` from the expansion point.
    pub fn eval(&self, h: f64) -> T {
        let mut acc = T::cst(0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(h) + c.clone();
        }
        acc
    }

    fn zip_pad(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| f(self.coeff(k), rhs.coeff(k))).collect();
        Self { coeffs }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            let mut acc = T::cst(0.0);
            for j in lo..=hi {
                acc = acc + a[j].clone() * b[k - j].clone();
            }
            out.push(acc);
        }
        Self { coeffs: out }
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let b0 = rhs.coeffs[0].clone();
        let mut q: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeff(k);
            for j in 0..k {
                let bj = k - j;
                if bj < rhs.coeffs.len() {
                    acc = acc - q[j].clone() * rhs.coeffs[bj].clone();
                }
            }
            q.push(acc / b0.clone());
        }
        Self { coeffs: q }
    }

    fn sin_cos(&self) -> (Self, Self) {
        let a = &self.coeffs;
        let n = a.len();
        let mut s = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        s.push(a[0].sin());
        c.push(a[0].cos());
        for k in 1..n {
            let mut sk = T::cst(0.0);
            let mut ck = T::cst(0.0);
            for j in 1..=k {
                let w = j as f64 / k as f64;
                sk = sk + (a[j].clone() * c[k - j].clone()).scale(w);
                ck = ck - (a[j].clone() * s[k - j].clone()).scale(w);
            }
            s.push(sk);
            c.push(ck);
        }
        (Self { coeffs: s }, Self { coeffs: c })
    }
}

impl<T: Real> Add for Taylor<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_pad(&rhs, |x, y| x + y)
    }
}

impl<T: Real> Sub for Taylor<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_pad(&rhs, |x, y| x - y)
    }
}

impl<T: Real> Mul for Taylor<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<T: Real> Div for Taylor<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.div_ref(&rhs)
    }
}

impl<T: Real> Neg for Taylor<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Real> Real for Taylor<T> {
    fn cst(v: f64) -> Self {
        Self::constant(T::cst(v))
    }

    fn value(&self) -> f64 {
        self.coeffs[0].value()
    }

    fn scale(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    fn add_f64(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].add_f64(k);
        out
    }

    fn sin(&self) -> Self {
        self.sin_cos().0
    }

    fn cos(&self) -> Self {
        self.sin_cos().1
    }

    fn exp(&self) -> Self {
        let a = &self.coeffs;
        let mut e = Vec::with_capacity(a.len());
        e.push(a[0].exp());
        for k in 1..a.len() {
            let mut acc = T::cst(0.0);
            for j in 1..=k {
                acc = acc + (a[j].clone() * e[k - j].clone()).scale(j as f64 / k as f64);
            }
            e.push(acc);
        }
        Self { coeffs: e }
    }

    fn ln(&self) -> Self {
        let a = &self.coeffs;
        let mut l: Vec<T> = Vec::with_capacity(a.len());
        l.push(a[0].ln());
        for k in 1..a.len() {
            let mut acc = a[k].clone();
            for j in 1..k {
                acc = acc - (l[j].clone() * a[k - j].clone()).scale(j as f64 / k as f64);
            }
            l.push(acc / a[0].clone());
        }
        Self { coeffs: l }
    }

    fn sqrt(&self) -> Self {
        let a = &self.coeffs;
        let mut r: Vec<T> = Vec::with_capacity(a.len());
        r.push(a[0].sqrt());
        let two_r0 = r[0].scale(2.0);
        for k in 1..a.len() {
            let mut acc = a[k].clone();
            for j in 1..k {
                acc = acc - r[j].clone() * r[k - j].clone();
            }
            r.push(acc / two_r0.clone());
        }
        Self { coeffs: r }
    }
}

/// Bivariate jet of `f(s, t)` about `(s0, t0)` truncated at the given orders.
pub fn jet2_variables(s0: f64, t0: f64, s_order: usize, t_order: usize) -> (Jet2, Jet2) {
    let s_inner = Taylor::variable(s0, s_order);
    let s = Taylor::constant(s_inner);
    let mut t_coeffs = vec![Taylor::constant(0.0); t_order + 1];
    t_coeffs[0] = Taylor::constant(t0);
    if t_order >= 1 {
        t_coeffs[1] = Taylor::constant(1.0);
    }
    (s, Taylor::from_coeffs(t_coeffs))
}

/// Table of partial derivatives `d_s^i d_t^j f` extracted from a bivariate jet.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialTable {
    pub s_order: usize,
    pub t_order: usize,
    data: Vec<f64>,
}

impl PartialTable {
    pub fn zeros(s_order: usize, t_order: usize) -> Self {
        Self {
            s_order,
            t_order,
            data: vec![0.0; (s_order + 1) * (t_order + 1)],
        }
    }

    pub fn from_jet(jet: &Jet2, s_order: usize, t_order: usize) -> Self {
        let mut table = Self::zeros(s_order, t_order);
        let mut tfact = 1.0;
        for j in 0..=t_order {
            if j > 0 {
                tfact *= j as f64;
            }
            let inner = jet.coeff(j);
            let mut sfact = 1.0;
            for i in 0..=s_order {
                if i > 0 {
                    sfact *= i as f64;
                }
                table.set(i, j, inner.coeff(i) * sfact * tfact);
            }
        }
        table
    }

    /// Rebuild the normalized bivariate jet from derivative values.
    pub fn to_jet(&self) -> Jet2 {
        let mut outer = Vec::with_capacity(self.t_order + 1);
        let mut tfact = 1.0;
        for j in 0..=self.t_order {
            if j > 0 {
                tfact *= j as f64;
            }
            let mut sfact = 1.0;
            let mut inner = Vec::with_capacity(self.s_order + 1);
            for i in 0..=self.s_order {
                if i > 0 {
                    sfact *= i as f64;
                }
                inner.push(self.get(i, j) / (sfact * tfact));
            }
            outer.push(Taylor::from_coeffs(inner));
        }
        Taylor::from_coeffs(outer)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i > self.s_order || j > self.t_order {
            return f64::NAN;
        }
        self.data[i * (self.t_order + 1) + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * (self.t_order + 1) + j] = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_of_variable_is_factorial_series() {
        let x = Taylor::variable(0.0, 6);
        let e = x.exp();
        let mut f = 1.0;
        for k in 0..=6 {
            if k > 0 {
                f *= k as f64;
            }
            assert_relative_eq!(e.coeffs[k], 1.0 / f, epsilon = 1e-15);
        }
    }

    #[test]
    fn sin_cos_pythagoras() {
        let x = Taylor::variable(0.7, 8);
        let s = x.sin();
        let c = x.cos();
        let one = s.clone() * s + c.clone() * c;
        assert_relative_eq!(one.coeffs[0], 1.0, epsilon = 1e-14);
        for k in 1..=8 {
            assert!(one.coeffs[k].abs() < 1e-14);
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let x = Taylor::variable(2.0, 7).add_f64(0.5);
        let r = x.sqrt();
        let back = r.clone() * r;
        for k in 0..=7 {
            assert_relative_eq!(back.coeff(k), x.coeff(k), epsilon = 1e-13);
        }
    }

    #[test]
    fn ln_inverts_exp() {
        let x = Taylor::variable(0.3, 6).sin();
        let y = x.exp().ln();
        for k in 0..=6 {
            assert_relative_eq!(y.coeff(k), x.coeff(k), epsilon = 1e-13);
        }
    }

    #[test]
    fn quotient_matches_geometric_series() {
        let x = Taylor::variable(0.0, 5);
        let g = Taylor::cst(1.0) / (Taylor::cst(1.0) - x);
        for k in 0..=5 {
            assert_relative_eq!(g.coeffs[k], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn bivariate_mixed_partial() {
        // f = sin(s) * exp(2t): f_st = 2 cos(s) exp(2t)
        let (s, t) = jet2_variables(0.4, 0.1, 2, 3);
        let f = s.sin() * t.scale(2.0).exp();
        let tab = PartialTable::from_jet(&f, 2, 3);
        assert_relative_eq!(tab.get(1, 1), 2.0 * 0.4f64.cos() * 0.2f64.exp(), epsilon = 1e-13);
        assert_relative_eq!(tab.get(2, 3), -8.0 * 0.4f64.sin() * 0.2f64.exp(), epsilon = 1e-12);
        let back = PartialTable::from_jet(&tab.to_jet(), 2, 3);
        assert_eq!(back, tab);
    }
}
