//! Mellin arc functions on the two-point compactified real line.
//!
//! For `1 < p < inf` the functions
//!
//! ```text
//! mu_p(l) = (1 + coth(pi (l + i/p))) / 2,    mu_p(-inf) = 0, mu_p(+inf) = 1
//! nu_p(l) = 1 / (2i sinh(pi (l + i/p))),     nu_p(+-inf) = 0
//! ```
//!
//! trace the circular arcs that fill in the jumps of piecewise continuous
//! symbols. Both are evaluated through exponentials of the argument with the
//! smaller real part, so no intermediate overflows for large `|l|`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real part beyond which `coth` is replaced by its limit `+-1` and `1/sinh` by 0.
const ARG_GUARD: f64 = 45.0;

/// A Hoelder exponent `p` together with its conjugate `q`, `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    p: f64,
    q: f64,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Exponent {
            p,
            q: conjugate_exponent(p)?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The exponent `q` viewed as an exponent in its own right.
    pub fn conjugate(&self) -> Exponent {
        Exponent {
            p: self.q,
            q: self.p,
        }
    }
}

/// Returns `q` with `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p == 2.0 {
        return Ok(2.0);
    }
    Ok(p / (p - 1.0))
}

/// A point of the two-point compactification of the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompactReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl CompactReal {
    /// Maps `u` in `[0, 1]` onto the compactified line by `tan(pi (u - 1/2))`;
    /// the endpoints go to the symbolic infinities.
    pub fn from_unit(u: f64) -> CompactReal {
        if u <= 0.0 {
            CompactReal::NegInf
        } else if u >= 1.0 {
            CompactReal::PosInf
        } else if u == 0.5 {
            CompactReal::Finite(0.0)
        } else {
            CompactReal::Finite((PI * (u - 0.5)).tan())
        }
    }

    /// Inverse of [`CompactReal::from_unit`].
    pub fn to_unit(self) -> f64 {
        match self {
            CompactReal::NegInf => 0.0,
            CompactReal::PosInf => 1.0,
            CompactReal::Finite(l) => 0.5 + l.atan() / PI,
        }
    }

    pub fn is_infinite(self) -> bool {
        !matches!(self, CompactReal::Finite(_))
    }
}

impl std::ops::Neg for CompactReal {
    type Output = CompactReal;

    fn neg(self) -> CompactReal {
        match self {
            CompactReal::NegInf => CompactReal::PosInf,
            CompactReal::PosInf => CompactReal::NegInf,
            CompactReal::Finite(l) => CompactReal::Finite(-l),
        }
    }
}

impl fmt::Display for CompactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactReal::NegInf => write!(f, "-inf"),
            CompactReal::PosInf => write!(f, "+inf"),
            CompactReal::Finite(l) => write!(f, "{l:.16e}"),
        }
    }
}

impl From<f64> for CompactReal {
    fn from(l: f64) -> Self {
        if l == f64::INFINITY {
            CompactReal::PosInf
        } else if l == f64::NEG_INFINITY {
            CompactReal::NegInf
        } else {
            CompactReal::Finite(l)
        }
    }
}

fn coth(z: Complex64) -> Complex64 {
    if z.re > ARG_GUARD {
        return Complex64::new(1.0, 0.0);
    }
    if z.re < -ARG_GUARD {
        return Complex64::new(-1.0, 0.0);
    }
    let one = Complex64::new(1.0, 0.0);
    if z.re >= 0.0 {
        let e = (-2.0 * z).exp();
        (one + e) / (one - e)
    } else {
        let e = (2.0 * z).exp();
        (e + one) / (e - one)
    }
}

fn inv_sinh(z: Complex64) -> Complex64 {
    if z.re.abs() > ARG_GUARD {
        return Complex64::new(0.0, 0.0);
    }
    let one = Complex64::new(1.0, 0.0);
    if z.re >= 0.0 {
        2.0 * (-z).exp() / (one - (-2.0 * z).exp())
    } else {
        -2.0 * z.exp() / (one - (2.0 * z).exp())
    }
}

/// `mu_p(lambda)`.
pub fn mu(p: Exponent, lambda: CompactReal) -> Complex64 {
    match lambda {
        CompactReal::NegInf => Complex64::new(0.0, 0.0),
        CompactReal::PosInf => Complex64::new(1.0, 0.0),
        CompactReal::Finite(l) => {
            let z = Complex64::new(PI * l, PI / p.p());
            (Complex64::new(1.0, 0.0) + coth(z)) * 0.5
        }
    }
}

/// `nu_p(lambda)`.
pub fn nu(p: Exponent, lambda: CompactReal) -> Complex64 {
    match lambda {
        CompactReal::NegInf | CompactReal::PosInf => Complex64::new(0.0, 0.0),
        CompactReal::Finite(l) => {
            let z = Complex64::new(PI * l, PI / p.p());
            inv_sinh(z) / Complex64::new(0.0, 2.0)
        }
    }
}

/// `-inf`, then `n` finite points `tan(pi (j/(n+1) - 1/2))`, then `+inf`.
///
/// The finite points are symmetric about 0 bit for bit.
pub fn lambda_grid(n: usize) -> Vec<CompactReal> {
    let n = n.max(2);
    let mut finite = vec![0.0; n];
    for j in 0..n / 2 {
        let u = (j + 1) as f64 / (n + 1) as f64;
        let l = (PI * (u - 0.5)).tan();
        finite[j] = l;
        finite[n - 1 - j] = -l;
    }
    let mut out = Vec::with_capacity(n + 2);
    out.push(CompactReal::NegInf);
    out.extend(finite.into_iter().map(CompactReal::Finite));
    out.push(CompactReal::PosInf);
    out
}

/// The unit parameters `u_j` behind [`lambda_grid`], including 0 and 1.
pub fn unit_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    let mut out = Vec::with_capacity(n + 2);
    out.push(0.0);
    out.extend((1..=n).map(|j| j as f64 / (n + 1) as f64));
    out.push(1.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
        assert!((conjugate_exponent(4.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((conjugate_exponent(1.5).unwrap() - 3.0).abs() < 1e-14);
        for p in [1.0, 0.5, f64::INFINITY, f64::NAN, -3.0] {
            assert!(conjugate_exponent(p).is_err());
        }
    }

    #[test]
    fn mu_values() {
        let m = mu(e(2.0), CompactReal::Finite(0.0));
        assert!((m - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        for p in [1.2, 2.0, 7.0] {
            assert_eq!(mu(e(p), CompactReal::PosInf), Complex64::new(1.0, 0.0));
            assert_eq!(mu(e(p), CompactReal::NegInf), Complex64::new(0.0, 0.0));
        }
        // (1 + coth(pi + i pi/2)) / 2 = (1 + tanh(pi)) / 2
        let m = mu(e(2.0), CompactReal::Finite(1.0));
        let expect = (1.0 + PI.tanh()) / 2.0;
        assert!((m.re - expect).abs() < 1e-14 && m.im.abs() < 1e-14);
        assert!((m.re - 0.998_136_038_1).abs() < 1e-10);
    }

    #[test]
    fn nu_values() {
        assert_eq!(nu(e(3.0), CompactReal::NegInf), Complex64::new(0.0, 0.0));
        let v = nu(e(2.0), CompactReal::Finite(0.0));
        assert!((v - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        let p = e(3.0);
        let l = CompactReal::Finite(0.4);
        let (m, v) = (mu(p, l), nu(p, l));
        assert!((v * v - m * (1.0 - m)).norm() < 1e-13);
    }

    #[test]
    fn large_arguments_do_not_overflow() {
        let p = e(1.5);
        for l in [-1e6, -100.0, -20.0, 20.0, 100.0, 1e6] {
            let m = mu(p, CompactReal::Finite(l));
            let v = nu(p, CompactReal::Finite(l));
            assert!(m.re.is_finite() && m.im.is_finite());
            assert!(v.re.is_finite() && v.im.is_finite());
        }
        assert!((mu(p, CompactReal::Finite(1e6)) - 1.0).norm() < 1e-15);
        assert!(mu(p, CompactReal::Finite(-1e6)).norm() < 1e-15);
    }

    #[test]
    fn grids() {
        let g = lambda_grid(2);
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], CompactReal::NegInf);
        assert_eq!(g[3], CompactReal::PosInf);
        let t = (PI / 6.0).tan();
        match (g[1], g[2]) {
            (CompactReal::Finite(a), CompactReal::Finite(b)) => {
                assert!((a + t).abs() < 1e-15 && (b - t).abs() < 1e-15)
            }
            _ => panic!(),
        }
        assert_eq!(lambda_grid(3)[2], CompactReal::Finite(0.0));
        let g = lambda_grid(129);
        assert_eq!(g[65], CompactReal::Finite(0.0));
        for w in g.windows(2) {
            assert!(w[0].to_unit() < w[1].to_unit());
        }
    }

    #[test]
    fn unit_round_trip() {
        for u in [0.0, 0.1, 0.5, 0.77, 1.0] {
            assert!((CompactReal::from_unit(u).to_unit() - u).abs() < 1e-14);
        }
    }
}
