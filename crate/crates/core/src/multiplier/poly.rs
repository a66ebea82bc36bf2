//! Polynomials in the local arc variable `s` and finite sums
//! `sum_k exp(i k theta) P_k(s)` built from them.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense polynomial, coefficients in ascending order. Trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(Vec<Complex64>);

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Poly {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Complex64) -> Poly {
        Poly::new(vec![c])
    }

    pub fn linear(c0: Complex64, c1: Complex64) -> Poly {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match self.0.len() {
            0 => Some(ZERO),
            1 => Some(self.0[0]),
            _ => None,
        }
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * s + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| {
                self.0.get(i).copied().unwrap_or(ZERO) + other.0.get(i).copied().unwrap_or(ZERO)
            })
            .collect();
        Poly::new(v)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::default();
        }
        let mut v = vec![ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.0.iter().map(|&a| a * c).collect())
    }

    /// `s -> P(s + delta)`.
    pub fn shift(&self, delta: f64) -> Poly {
        if delta == 0.0 || self.0.len() <= 1 {
            return self.clone();
        }
        // repeated synthetic division (Taylor shift)
        let mut v = self.0.clone();
        let n = v.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let hi = v[j + 1];
                v[j] += hi * delta;
            }
        }
        Poly::new(v)
    }

    /// `s -> P(len - s)`.
    pub fn reflect(&self, len: f64) -> Poly {
        let neg: Vec<Complex64> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
            .collect();
        // P(-s) evaluated at s - len
        Poly::new(neg).shift(-len)
    }

    /// `int_0^len s^j exp(i w s) ds` for `j = 0..=deg`, by the integration by
    /// parts recurrence.
    pub fn exp_moments(w: f64, len: f64, deg: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(deg + 1);
        if w == 0.0 {
            for j in 0..=deg {
                out.push(Complex64::new(len.powi(j as i32 + 1) / (j + 1) as f64, 0.0));
            }
            return out;
        }
        let iw = Complex64::new(0.0, w);
        let e = Complex64::new(0.0, w * len).exp();
        let mut prev = (e - ONE) / iw;
        out.push(prev);
        for j in 1..=deg {
            let cur = e * len.powi(j as i32) / iw - prev * (j as f64) / iw;
            out.push(cur);
            prev = cur;
        }
        out
    }
}

/// `sum_k exp(i k theta) P_k(s)` with distinct frequencies, sorted by `k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermList(Vec<(i32, Poly)>);

impl TermList {
    pub fn new(terms: Vec<(i32, Poly)>) -> TermList {
        let mut terms: Vec<(i32, Poly)> = terms.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        terms.sort_by_key(|(k, _)| *k);
        let mut merged: Vec<(i32, Poly)> = Vec::with_capacity(terms.len());
        for (k, p) in terms {
            match merged.last_mut() {
                Some((lk, lp)) if *lk == k => *lp = lp.add(&p),
                _ => merged.push((k, p)),
            }
        }
        merged.retain(|(_, p)| !p.is_zero());
        TermList(merged)
    }

    pub fn one() -> TermList {
        TermList(vec![(0, Poly::constant(ONE))])
    }

    pub fn constant(c: Complex64) -> TermList {
        TermList::new(vec![(0, Poly::constant(c))])
    }

    pub fn terms(&self) -> &[(i32, Poly)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].0 == 0 && self.0[0].1.as_constant() == Some(ONE)
    }

    /// `Some((k, c))` when the list is the single monomial `c exp(i k theta)`.
    pub fn as_monomial(&self) -> Option<(i32, Complex64)> {
        if self.0.len() != 1 {
            return None;
        }
        let (k, p) = &self.0[0];
        p.as_constant().map(|c| (*k, c))
    }

    pub fn max_degree(&self) -> usize {
        self.0.iter().map(|(_, p)| p.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, theta: f64, s: f64) -> Complex64 {
        self.0
            .iter()
            .map(|(k, p)| Complex64::new(0.0, *k as f64 * theta).exp() * p.eval(s))
            .sum()
    }

    pub fn add(&self, other: &TermList) -> TermList {
        TermList::new(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn mul(&self, other: &TermList) -> TermList {
        let mut v = Vec::with_capacity(self.0.len() * other.0.len());
        for (ka, pa) in &self.0 {
            for (kb, pb) in &other.0 {
                v.push((ka + kb, pa.mul(pb)));
            }
        }
        TermList::new(v)
    }

    pub fn scale(&self, c: Complex64) -> TermList {
        TermList::new(self.0.iter().map(|(k, p)| (*k, p.scale(c))).collect())
    }

    pub fn shift_frequency(&self, dk: i32) -> TermList {
        TermList(self.0.iter().map(|(k, p)| (k + dk, p.clone())).collect())
    }

    pub fn shift(&self, delta: f64) -> TermList {
        TermList(self.0.iter().map(|(k, p)| (*k, p.shift(delta))).collect())
    }

    /// Terms of `theta -> f(-theta)` on the reflected arc of length `len`.
    pub fn reflect(&self, len: f64) -> TermList {
        TermList::new(self.0.iter().map(|(k, p)| (-k, p.reflect(len))).collect())
    }

    /// Terms of `theta -> f(theta + pi)`.
    pub fn rotate_half_turn(&self) -> TermList {
        TermList::new(
            self.0
                .iter()
                .map(|(k, p)| {
                    (
                        *k,
                        if k.rem_euclid(2) == 1 {
                            p.scale(-ONE)
                        } else {
                            p.clone()
                        },
                    )
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn shift_and_reflect() {
        // P(s) = 1 + 2s + 3s^2
        let p = Poly::new(vec![c(1.0), c(2.0), c(3.0)]);
        let q = p.shift(0.5);
        let r = p.reflect(2.0);
        for s in [-1.0, 0.0, 0.3, 1.7] {
            assert!((q.eval(s) - p.eval(s + 0.5)).norm() < 1e-12);
            assert!((r.eval(s) - p.eval(2.0 - s)).norm() < 1e-12);
        }
    }

    #[test]
    fn moments_match_quadrature() {
        for &(w, len) in &[(0.0, 1.3), (1.0, 6.2), (-3.0, 0.7), (7.0, 2.0)] {
            let m = Poly::exp_moments(w, len, 4);
            for (j, mj) in m.iter().enumerate() {
                let n = 20000;
                let h = len / n as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..=n {
                    let s = i as f64 * h;
                    let wt = if i == 0 || i == n {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    acc += Complex64::new(0.0, w * s).exp() * s.powi(j as i32) * wt;
                }
                acc *= h / 3.0;
                assert!((acc - mj).norm() < 1e-9, "w={w} j={j}");
            }
        }
    }

    #[test]
    fn term_list_merges() {
        let t = TermList::new(vec![
            (1, Poly::constant(c(1.0))),
            (1, Poly::constant(c(-1.0))),
            (2, Poly::constant(c(3.0))),
        ]);
        assert_eq!(t.len(), 1);
        assert_eq!(t.as_monomial(), Some((2, c(3.0))));
        assert!(TermList::one().is_one());
    }
}
