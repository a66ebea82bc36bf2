//! Ground truth that does not go through the symbol calculus: finite
//! Toeplitz and Hankel sections, root counting for Laurent polynomials,
//! numerical rank, and the product identities
//!
//! ```text
//! T(ab) = T(a) T(b) + H(a) H(b~)
//! H(ab) = T(a) H(b) + H(a) T(b~)
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{Factor, OperatorExpr};
use crate::error::{Error, Result};
use crate::multiplier::PcMultiplier;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Root moduli within this distance of 1 make the oracle refuse.
pub const CIRCLE_GAP: f64 = 1e-6;
/// Relative residual a polished root must reach.
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// Fourier coefficients `a_k`, `k` from `lowest` to `lowest + coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSpec {
    lowest: i32,
    coeffs: Vec<Complex64>,
}

impl BandedSpec {
    pub fn new(lowest: i32, coeffs: Vec<Complex64>) -> Result<BandedSpec> {
        if coeffs.iter().all(|c| *c == ZERO) {
            return Err(Error::OraclePrecondition(
                "Laurent polynomial is identically zero".into(),
            ));
        }
        Ok(BandedSpec { lowest, coeffs })
    }

    pub fn from_multiplier(a: &PcMultiplier) -> Option<BandedSpec> {
        let (lo, hi) = a.frequency_range()?;
        let coeffs = (lo..=hi).map(|k| a.fourier_coeff(k)).collect();
        BandedSpec::new(lo, coeffs).ok()
    }

    pub fn to_multiplier(&self) -> PcMultiplier {
        let terms: Vec<(i32, Complex64)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.lowest + i as i32, c))
            .collect();
        PcMultiplier::trig(&terms)
    }

    pub fn coeff(&self, k: i32) -> Complex64 {
        let i = k - self.lowest;
        if i < 0 {
            return ZERO;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(ZERO)
    }

    pub fn lowest(&self) -> i32 {
        self.lowest
    }

    pub fn highest(&self) -> i32 {
        self.lowest + self.coeffs.len() as i32 - 1
    }
}

/// `a_{j-k}`.
pub fn toeplitz_entry(a: &PcMultiplier, j: usize, k: usize) -> Complex64 {
    a.fourier_coeff(j as i32 - k as i32)
}

/// `a_{j+k+1}`.
pub fn hankel_entry(a: &PcMultiplier, j: usize, k: usize) -> Complex64 {
    a.fourier_coeff((j + k + 1) as i32)
}

/// Coefficients `a_k` for `|k| <= reach`, looked up by `k`.
struct CoeffTable {
    reach: i32,
    values: Vec<Complex64>,
}

impl CoeffTable {
    fn new(a: &PcMultiplier, reach: usize) -> CoeffTable {
        let reach = reach as i32;
        CoeffTable {
            reach,
            values: (-reach..=reach).map(|k| a.fourier_coeff(k)).collect(),
        }
    }

    fn get(&self, k: i32) -> Complex64 {
        if k.abs() > self.reach {
            ZERO
        } else {
            self.values[(k + self.reach) as usize]
        }
    }
}

pub fn toeplitz_section(a: &PcMultiplier, n: usize) -> DMatrix<Complex64> {
    let t = CoeffTable::new(a, n);
    DMatrix::from_fn(n, n, |j, k| t.get(j as i32 - k as i32))
}

pub fn hankel_section(a: &PcMultiplier, n: usize) -> DMatrix<Complex64> {
    let t = CoeffTable::new(a, 2 * n);
    DMatrix::from_fn(n, n, |j, k| t.get((j + k + 1) as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationMatrix {
    pub matrix: DMatrix<Complex64>,
    pub margin: usize,
    /// Bound on the entries lost by cutting products at size `n + margin`;
    /// 0 when every multiplier is a trigonometric polynomial of bandwidth
    /// at most `margin`.
    pub tail_bound: f64,
    pub label: String,
}

/// Finite section of an expression. Every generator is realized at size
/// `n + margin`, products and sums are formed there, and the result is cut
/// to `n x n`. Compact markers become zero.
pub fn truncate(e: &OperatorExpr, n: usize, margin: usize) -> Result<TruncationMatrix> {
    if n == 0 {
        return Err(Error::OraclePrecondition(
            "section size must be positive".into(),
        ));
    }
    let big = n + margin;
    let mut tail = 0.0f64;
    let mut acc = DMatrix::<Complex64>::zeros(big, big);
    for term in e.terms() {
        let mut prod = DMatrix::<Complex64>::identity(big, big);
        for f in &term.factors {
            match f {
                Factor::Identity => {}
                Factor::Compact => prod.fill(ZERO),
                Factor::Gen(g) => {
                    for m in [&g.a, &g.b] {
                        tail = tail.max(tail_estimate(m, margin));
                    }
                    prod *= toeplitz_section(&g.a, big) + hankel_section(&g.b, big);
                }
            }
        }
        acc += prod * term.weight;
    }
    Ok(TruncationMatrix {
        matrix: acc.view((0, 0), (n, n)).into_owned(),
        margin,
        tail_bound: tail,
        label: format!(
            "section {n} (margin {margin}) of {} term(s)",
            e.terms().len()
        ),
    })
}

/// Coefficients of a bounded-variation function decay like `Var / (pi |k|)`.
fn tail_estimate(a: &PcMultiplier, margin: usize) -> f64 {
    match a.bandwidth() {
        Some(bw) if bw <= margin => 0.0,
        _ => a.total_variation(256) / (std::f64::consts::PI * margin.max(1) as f64),
    }
}

/// `-wind a` for a Laurent polynomial, by counting the roots of
/// `z^m a(z)` inside the unit disk.
pub fn laurent_index_oracle(a: &BandedSpec) -> Result<i64> {
    // z^{-lowest} a(z) = sum coeffs[i] z^i; strip exact zeros at both ends
    let mut c = a.coeffs.clone();
    while c.last() == Some(&ZERO) {
        c.pop();
    }
    let zeros_at_origin = c.iter().take_while(|&&x| x == ZERO).count();
    let c: Vec<Complex64> = c[zeros_at_origin..].to_vec();
    let roots = polynomial_roots(&c)?;
    let mut inside = zeros_at_origin as i64;
    for z in &roots {
        let gap = z.norm() - 1.0;
        if gap.abs() <= CIRCLE_GAP {
            return Err(Error::OraclePrecondition(format!(
                "root {z} lies within {CIRCLE_GAP:e} of the unit circle"
            )));
        }
        if gap < 0.0 {
            inside += 1;
        }
    }
    let m = -(a.lowest as i64);
    Ok(-(inside - m))
}

/// Roots of `sum c[i] z^i` (with `c[0]` and the leading coefficient
/// nonzero) from the eigenvalues of the companion matrix, Newton-polished.
pub fn polynomial_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 0..deg {
        comp[(0, i)] = -c[deg - 1 - i] / lead;
        if i + 1 < deg {
            comp[(i + 1, i)] = Complex64::new(1.0, 0.0);
        }
    }
    let eig = comp
        .eigenvalues()
        .ok_or_else(|| Error::RootFinder("Schur iteration did not converge".into()))?;
    let mut roots = Vec::with_capacity(deg);
    for &z0 in eig.iter() {
        let mut z = z0;
        for _ in 0..4 {
            let (p, dp) = horner_with_derivative(c, z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.norm().is_finite() {
                break;
            }
            z -= step;
        }
        let (p, _) = horner_with_derivative(c, z);
        let scale: f64 = c
            .iter()
            .rev()
            .fold(0.0, |acc, ci| acc * z.norm() + ci.norm());
        if p.norm() > ROOT_RESIDUAL * scale {
            return Err(Error::RootFinder(format!(
                "residual {:.3e} at root {z}",
                p.norm() / scale
            )));
        }
        roots.push(z);
    }
    Ok(roots)
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

/// Number of pivots below `tol` times the largest one, under Gaussian
/// elimination with complete pivoting.
pub fn rank_deficiency(m: &DMatrix<Complex64>, tol: f64) -> usize {
    let n = m.nrows().min(m.ncols());
    let mut a = m.clone();
    let mut largest = 0.0f64;
    let mut small = 0;
    for k in 0..n {
        let mut best = (k, k, -1.0f64);
        for i in k..a.nrows() {
            for j in k..a.ncols() {
                let v = a[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, pv) = best;
        if k == 0 {
            largest = pv;
        }
        if largest == 0.0 || pv <= tol * largest {
            small += 1;
            continue;
        }
        a.swap_rows(k, pi);
        a.swap_columns(k, pj);
        let piv = a[(k, k)];
        for i in k + 1..a.nrows() {
            let f = a[(i, k)] / piv;
            if f == ZERO {
                continue;
            }
            for j in k..a.ncols() {
                let v = a[(k, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    small + m.nrows().max(m.ncols()) - n
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductIdentityResiduals {
    /// `max |T(ab) - T(a)T(b) - H(a)H(b~)|` over the window.
    pub toeplitz: f64,
    /// `max |H(ab) - T(a)H(b) - H(a)T(b~)|` over the window.
    pub hankel: f64,
}

/// Both product identities on `n x n` sections, compared on the window
/// `[0, n - 2w)^2` where `w` is the combined bandwidth.
pub fn identity_e7_check(
    a: &PcMultiplier,
    b: &PcMultiplier,
    n: usize,
) -> Result<ProductIdentityResiduals> {
    let (wa, wb) = match (a.bandwidth(), b.bandwidth()) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(Error::OraclePrecondition(
                "product identities are checked on trigonometric polynomials only".into(),
            ))
        }
    };
    let w = wa + wb;
    if n <= 4 * w {
        return Err(Error::OraclePrecondition(format!(
            "section size {n} must exceed 4 x bandwidth {w}"
        )));
    }
    let ab = a.mul(b)?;
    let bt = b.reflect_tilde();
    let (ta, ha) = (toeplitz_section(a, n), hankel_section(a, n));
    let (tb, hb) = (toeplitz_section(b, n), hankel_section(b, n));
    let (tbt, hbt) = (toeplitz_section(&bt, n), hankel_section(&bt, n));
    let r1 = toeplitz_section(&ab, n) - &ta * &tb - &ha * &hbt;
    let r2 = hankel_section(&ab, n) - &ta * &hb - &ha * &tbt;
    let win = n - 2 * w;
    let worst = |m: &DMatrix<Complex64>| {
        m.view((0, 0), (win, win))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    };
    Ok(ProductIdentityResiduals {
        toeplitz: worst(&r1),
        hankel: worst(&r2),
    })
}
