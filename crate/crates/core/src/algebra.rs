//! Operators in the algebra generated by `T(a) + H(b)` and their symbols.
//!
//! At an interior point `t` of the upper half-circle a generator has the
//! 2x2 symbol
//!
//! ```text
//! [ a(t+) mu + a(t-) (1 - mu)        (b(t+) - b(t-)) nu               ]
//! [ (b(t~-) - b(t~+)) nu             a(t~-) (1 - mu) + a(t~+) mu      ]
//! ```
//!
//! with `t~ = 1/t`, `mu = mu_q(lambda)`, `nu = nu_q(lambda)`; at `t = +-1` it is
//! the scalar `a(t+) mu + a(t-) (1 - mu) + i t (b(t+) - b(t-)) nu`. Sums and
//! products of operators map to sums and products of symbols, in order.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::arcs::{self, CompactReal, Exponent};
use crate::error::{Error, Result};
use crate::multiplier::{merged_jumps, CircPoint, PcMultiplier, Probe, Side, MERGE_TOL};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `T(a) + H(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub a: PcMultiplier,
    pub b: PcMultiplier,
}

impl Generator {
    pub fn new(a: PcMultiplier, b: PcMultiplier) -> Generator {
        Generator { a, b }
    }

    pub fn toeplitz(a: PcMultiplier) -> Generator {
        Generator::new(a, PcMultiplier::zero())
    }

    pub fn hankel(b: PcMultiplier) -> Generator {
        Generator::new(PcMultiplier::zero(), b)
    }

    pub fn identity() -> Generator {
        Generator::toeplitz(PcMultiplier::one())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Gen(Generator),
    Identity,
    /// A compact operator; only its (zero) symbol matters.
    Compact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: Complex64,
    pub factors: Vec<Factor>,
}

/// A finite sum of weighted products of generators.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorExpr {
    terms: Vec<Term>,
}

impl OperatorExpr {
    pub fn zero() -> OperatorExpr {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn identity() -> OperatorExpr {
        OperatorExpr::factor(Factor::Identity)
    }

    pub fn compact() -> OperatorExpr {
        OperatorExpr::factor(Factor::Compact)
    }

    pub fn factor(f: Factor) -> OperatorExpr {
        OperatorExpr {
            terms: vec![Term {
                weight: ONE,
                factors: vec![f],
            }],
        }
    }

    pub fn generator(g: Generator) -> OperatorExpr {
        OperatorExpr::factor(Factor::Gen(g))
    }

    /// `T(a) + H(b)` as an expression.
    pub fn th(a: PcMultiplier, b: PcMultiplier) -> OperatorExpr {
        OperatorExpr::generator(Generator::new(a, b))
    }

    pub fn from_terms(terms: Vec<Term>) -> Result<OperatorExpr> {
        if terms.iter().any(|t| t.factors.is_empty()) {
            return Err(Error::Config("product without factors".into()));
        }
        Ok(OperatorExpr { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn scale(&self, c: Complex64) -> OperatorExpr {
        OperatorExpr {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    weight: t.weight * c,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }

    pub fn plus(&self, other: &OperatorExpr) -> OperatorExpr {
        OperatorExpr {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
    }

    pub fn minus(&self, other: &OperatorExpr) -> OperatorExpr {
        self.plus(&other.scale(-ONE))
    }

    /// Composition `self * other`, distributed over the sums.
    pub fn times(&self, other: &OperatorExpr) -> OperatorExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for x in &self.terms {
            for y in &other.terms {
                terms.push(Term {
                    weight: x.weight * y.weight,
                    factors: x.factors.iter().chain(&y.factors).cloned().collect(),
                });
            }
        }
        OperatorExpr { terms }
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter())
            .filter_map(|f| match f {
                Factor::Gen(g) => Some(g),
                _ => None,
            })
    }

    pub fn multipliers(&self) -> Vec<&PcMultiplier> {
        self.generators().flat_map(|g| [&g.a, &g.b]).collect()
    }

    /// Symbol at an arbitrary site.
    pub fn symbol(&self, exp: Exponent, site: Site, lambda: CompactReal) -> SymbolValue {
        let arc = ArcValues::new(exp, lambda);
        let mut acc = SymbolValue::zero_at(site);
        for term in &self.terms {
            let mut prod = SymbolValue::identity_at(site);
            for f in &term.factors {
                let s = match f {
                    Factor::Identity => continue,
                    Factor::Compact => SymbolValue::zero_at(site),
                    Factor::Gen(g) => generator_symbol(g, site, arc),
                };
                prod = prod * s;
            }
            acc = acc + prod.scale(term.weight);
        }
        acc
    }
}

/// Where a symbol is read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Site {
    /// `t = +1` or `t = -1`: scalar symbol.
    Endpoint(CircPoint),
    /// The 2x2 form at a point or one-sided limit. Limits towards `+-1` are
    /// allowed here; they describe how the interior symbol meets the ends.
    Interior(Probe),
}

impl Site {
    pub fn theta(self) -> f64 {
        match self {
            Site::Endpoint(t) => t.theta(),
            Site::Interior(p) => p.point.theta(),
        }
    }
}

/// Symbol at a point of the half-circle: scalar at the ends, 2x2 inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolValue {
    Scalar(Complex64),
    Matrix2(Matrix2<Complex64>),
}

impl SymbolValue {
    pub fn zero_at(site: Site) -> SymbolValue {
        match site {
            Site::Endpoint(_) => SymbolValue::Scalar(ZERO),
            Site::Interior(_) => SymbolValue::Matrix2(Matrix2::zeros()),
        }
    }

    pub fn identity_at(site: Site) -> SymbolValue {
        match site {
            Site::Endpoint(_) => SymbolValue::Scalar(ONE),
            Site::Interior(_) => SymbolValue::Matrix2(Matrix2::identity()),
        }
    }

    pub fn scale(self, c: Complex64) -> SymbolValue {
        match self {
            SymbolValue::Scalar(z) => SymbolValue::Scalar(z * c),
            SymbolValue::Matrix2(m) => SymbolValue::Matrix2(m * c),
        }
    }

    pub fn det(&self) -> Complex64 {
        match self {
            SymbolValue::Scalar(z) => *z,
            SymbolValue::Matrix2(m) => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        }
    }

    /// Lower right entry (the scalar itself at the ends).
    pub fn a22(&self) -> Complex64 {
        match self {
            SymbolValue::Scalar(z) => *z,
            SymbolValue::Matrix2(m) => m[(1, 1)],
        }
    }

    /// Eigenvalues, by the quadratic formula in the 2x2 case.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        match self {
            SymbolValue::Scalar(z) => vec![*z],
            SymbolValue::Matrix2(m) => {
                let half_tr = (m[(0, 0)] + m[(1, 1)]) * 0.5;
                let root = (half_tr * half_tr - self.det()).sqrt();
                vec![half_tr + root, half_tr - root]
            }
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        match self {
            SymbolValue::Scalar(z) => DMatrix::from_element(1, 1, *z),
            SymbolValue::Matrix2(m) => DMatrix::from_fn(2, 2, |i, j| m[(i, j)]),
        }
    }

    /// Max entrywise distance; `inf` for values of different shapes.
    pub fn distance(&self, other: &SymbolValue) -> f64 {
        match (self, other) {
            (SymbolValue::Scalar(x), SymbolValue::Scalar(y)) => (x - y).norm(),
            (SymbolValue::Matrix2(x), SymbolValue::Matrix2(y)) => {
                (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max)
            }
            _ => f64::INFINITY,
        }
    }
}

impl Add for SymbolValue {
    type Output = SymbolValue;
    fn add(self, rhs: SymbolValue) -> SymbolValue {
        match (self, rhs) {
            (SymbolValue::Scalar(x), SymbolValue::Scalar(y)) => SymbolValue::Scalar(x + y),
            (SymbolValue::Matrix2(x), SymbolValue::Matrix2(y)) => SymbolValue::Matrix2(x + y),
            _ => panic!("adding symbols read at different kinds of sites"),
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        match (self, rhs) {
            (SymbolValue::Scalar(x), SymbolValue::Scalar(y)) => SymbolValue::Scalar(x * y),
            (SymbolValue::Matrix2(x), SymbolValue::Matrix2(y)) => SymbolValue::Matrix2(x * y),
            _ => panic!("multiplying symbols read at different kinds of sites"),
        }
    }
}

/// `mu_q(lambda)` and `nu_q(lambda)` for the exponent in use.
#[derive(Debug, Clone, Copy)]
pub struct ArcValues {
    pub mu: Complex64,
    pub nu: Complex64,
}

impl ArcValues {
    pub fn new(exp: Exponent, lambda: CompactReal) -> ArcValues {
        let q = exp.conjugate();
        ArcValues {
            mu: arcs::mu(q, lambda),
            nu: arcs::nu(q, lambda),
        }
    }
}

/// `(m(t+), m(t-))` as seen by the probe.
pub fn sided_pair(m: &PcMultiplier, probe: Probe) -> (Complex64, Complex64) {
    match probe.side {
        Side::Exact => (m.eval_plus(probe.point), m.eval_minus(probe.point)),
        Side::Below => {
            let v = m.eval_minus(probe.point);
            (v, v)
        }
        Side::Above => {
            let v = m.eval_plus(probe.point);
            (v, v)
        }
    }
}

pub(crate) fn generator_symbol(g: &Generator, site: Site, arc: ArcValues) -> SymbolValue {
    let ArcValues { mu, nu } = arc;
    match site {
        Site::Endpoint(t) => {
            let sign = if t.is_minus_one() { -1.0 } else { 1.0 };
            let (ap, am) = (g.a.eval_plus(t), g.a.eval_minus(t));
            let (bp, bm) = (g.b.eval_plus(t), g.b.eval_minus(t));
            SymbolValue::Scalar(
                ap * mu + am * (ONE - mu) + Complex64::new(0.0, sign) * (bp - bm) * nu,
            )
        }
        Site::Interior(probe) => {
            let (ap, am) = sided_pair(&g.a, probe);
            let (bp, bm) = sided_pair(&g.b, probe);
            let mirrored = probe.conj();
            let (acp, acm) = sided_pair(&g.a, mirrored);
            let (bcp, bcm) = sided_pair(&g.b, mirrored);
            SymbolValue::Matrix2(Matrix2::new(
                ap * mu + am * (ONE - mu),
                (bp - bm) * nu,
                (bcm - bcp) * nu,
                acm * (ONE - mu) + acp * mu,
            ))
        }
    }
}

/// The site a point of the closed upper half-circle stands for.
pub fn site_of(t: CircPoint) -> Result<Site> {
    if !t.in_upper_half() {
        return Err(Error::LowerHalfCircle(t.theta()));
    }
    if t.is_plus_one() || t.is_minus_one() {
        Ok(Site::Endpoint(t))
    } else {
        Ok(Site::Interior(Probe {
            point: t,
            side: Side::Exact,
        }))
    }
}

pub fn smb_generator(
    g: &Generator,
    exp: Exponent,
    t: CircPoint,
    lambda: CompactReal,
) -> Result<SymbolValue> {
    Ok(generator_symbol(
        g,
        site_of(t)?,
        ArcValues::new(exp, lambda),
    ))
}

pub fn smb(
    e: &OperatorExpr,
    exp: Exponent,
    t: CircPoint,
    lambda: CompactReal,
) -> Result<SymbolValue> {
    Ok(e.symbol(exp, site_of(t)?, lambda))
}

/// Anything with a symbol on the half-cylinder whose determinant decides the
/// Fredholm property: operator expressions and block systems of them.
pub trait SymbolSource {
    /// Jump points of every multiplier involved (anywhere on the circle).
    fn jump_points(&self) -> Vec<CircPoint>;

    /// Determinant of the symbol at the site.
    fn symbol_det(&self, exp: Exponent, site: Site, lambda: CompactReal) -> Complex64;

    /// Determinant of the lower right block of the interior symbol.
    fn lower_block_det(&self, exp: Exponent, probe: Probe, lambda: CompactReal) -> Complex64;
}

impl SymbolSource for OperatorExpr {
    fn jump_points(&self) -> Vec<CircPoint> {
        merged_jumps(self.multipliers())
    }

    fn symbol_det(&self, exp: Exponent, site: Site, lambda: CompactReal) -> Complex64 {
        self.symbol(exp, site, lambda).det()
    }

    fn lower_block_det(&self, exp: Exponent, probe: Probe, lambda: CompactReal) -> Complex64 {
        self.symbol(exp, Site::Interior(probe), lambda).a22()
    }
}

/// `L(a) diag P + L(b) diag Q` with `k x k` multiplier matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGenerator {
    k: usize,
    a: Vec<PcMultiplier>,
    b: Vec<PcMultiplier>,
}

impl MatrixGenerator {
    /// Entries in row-major order.
    pub fn new(k: usize, a: Vec<PcMultiplier>, b: Vec<PcMultiplier>) -> Result<MatrixGenerator> {
        if k == 0 || a.len() != k * k || b.len() != k * k {
            return Err(Error::DimensionMismatch(format!(
                "expected two {k}x{k} multiplier arrays, got {} and {} entries",
                a.len(),
                b.len()
            )));
        }
        Ok(MatrixGenerator { k, a, b })
    }

    pub fn scalar(a: PcMultiplier, b: PcMultiplier) -> MatrixGenerator {
        MatrixGenerator {
            k: 1,
            a: vec![a],
            b: vec![b],
        }
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn a(&self, i: usize, j: usize) -> &PcMultiplier {
        &self.a[i * self.k + j]
    }

    pub fn b(&self, i: usize, j: usize) -> &PcMultiplier {
        &self.b[i * self.k + j]
    }

    pub fn jump_points(&self) -> Vec<CircPoint> {
        merged_jumps(self.a.iter().chain(&self.b))
    }

    fn sided(
        &self,
        which: &[PcMultiplier],
        probe: Probe,
    ) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let k = self.k;
        let mut plus = DMatrix::zeros(k, k);
        let mut minus = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let (p, m) = sided_pair(&which[i * k + j], probe);
                plus[(i, j)] = p;
                minus[(i, j)] = m;
            }
        }
        (plus, minus)
    }

    /// `(a(t+), a(t-))` and `(b(t+), b(t-))` as `k x k` matrices.
    pub fn limits(&self, probe: Probe) -> [(DMatrix<Complex64>, DMatrix<Complex64>); 2] {
        [self.sided(&self.a, probe), self.sided(&self.b, probe)]
    }

    pub fn symbol(&self, exp: Exponent, probe: Probe, lambda: CompactReal) -> DMatrix<Complex64> {
        let ArcValues { mu, nu } = ArcValues::new(exp, lambda);
        let k = self.k;
        let [(ap, am), (bp, bm)] = self.limits(probe);
        let mut out = DMatrix::zeros(2 * k, 2 * k);
        out.view_mut((0, 0), (k, k))
            .copy_from(&(&am + (&ap - &am) * mu));
        out.view_mut((0, k), (k, k)).copy_from(&((&bp - &bm) * nu));
        out.view_mut((k, 0), (k, k)).copy_from(&((&ap - &am) * nu));
        out.view_mut((k, k), (k, k))
            .copy_from(&(&bp - (&bp - &bm) * mu));
        out
    }
}

pub fn smb_matrix_generator(
    g: &MatrixGenerator,
    exp: Exponent,
    t: CircPoint,
    lambda: CompactReal,
) -> DMatrix<Complex64> {
    g.symbol(
        exp,
        Probe {
            point: t,
            side: Side::Exact,
        },
        lambda,
    )
}

/// Sampling resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    /// Points per continuity arc.
    pub t_points: usize,
    /// Finite points per lambda sweep.
    pub lambda_points: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            t_points: 256,
            lambda_points: 129,
        }
    }
}

/// One piece of a traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sweep {
    /// `lambda` from `-inf` to `+inf` at a fixed site; parameter `u` in `[0, 1]`.
    Lambda { site: Site },
    /// Counter-clockwise over an arc free of jumps; parameter is the angle.
    /// The ends are read as one-sided limits.
    Arc { lo: f64, hi: f64 },
}

impl Sweep {
    pub fn is_lambda(&self) -> bool {
        matches!(self, Sweep::Lambda { .. })
    }

    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Sweep::Lambda { .. } => (0.0, 1.0),
            Sweep::Arc { lo, hi } => (*lo, *hi),
        }
    }

    /// Initial parameters.
    pub fn grid(&self, res: Resolution) -> Vec<f64> {
        match self {
            Sweep::Lambda { .. } => arcs::unit_grid(res.lambda_points),
            Sweep::Arc { lo, hi } => {
                let n = res.t_points.max(2);
                (0..n)
                    .map(|j| {
                        if j == n - 1 {
                            *hi
                        } else {
                            lo + (hi - lo) * j as f64 / (n - 1) as f64
                        }
                    })
                    .collect()
            }
        }
    }

    /// Site and `lambda` for a parameter value.
    pub fn locate(&self, param: f64) -> (Site, CompactReal) {
        match *self {
            Sweep::Lambda { site } => (site, CompactReal::from_unit(param)),
            Sweep::Arc { lo, hi } => {
                let probe = if param <= lo {
                    Probe::above(lo)
                } else if param >= hi {
                    Probe::below(hi)
                } else {
                    Probe::exact(param)
                };
                (Site::Interior(probe), CompactReal::NegInf)
            }
        }
    }
}

/// Interior special points in `(0, pi)`: jumps and conjugates of jumps.
pub fn upper_special_points(jumps: &[CircPoint]) -> Vec<f64> {
    let mut pts: Vec<f64> = jumps
        .iter()
        .flat_map(|t| [t.theta(), t.conj().theta()])
        .filter(|&th| th > MERGE_TOL && th < PI - MERGE_TOL)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < MERGE_TOL);
    pts
}

/// `+1` sweep, arcs of `T+` with sweeps at special points, `-1` sweep.
pub fn half_circle_plan(jumps: &[CircPoint]) -> Vec<Sweep> {
    let special = upper_special_points(jumps);
    let mut plan = vec![Sweep::Lambda {
        site: Site::Endpoint(CircPoint::ONE),
    }];
    let mut lo = 0.0;
    for &s in &special {
        plan.push(Sweep::Arc { lo, hi: s });
        plan.push(Sweep::Lambda {
            site: Site::Interior(Probe::exact(s)),
        });
        lo = s;
    }
    plan.push(Sweep::Arc { lo, hi: PI });
    plan.push(Sweep::Lambda {
        site: Site::Endpoint(CircPoint::MINUS_ONE),
    });
    plan
}

/// Once around the circle from `1`, with sweeps at every jump.
pub fn full_circle_plan(jumps: &[CircPoint]) -> Vec<Sweep> {
    let mut pts: Vec<f64> = jumps.iter().map(|t| t.theta()).collect();
    pts.sort_by(f64::total_cmp);
    if pts.is_empty() {
        return vec![Sweep::Arc {
            lo: 0.0,
            hi: 2.0 * PI,
        }];
    }
    let mut plan = Vec::with_capacity(2 * pts.len() + 1);
    if pts[0] > 0.0 {
        plan.push(Sweep::Arc {
            lo: 0.0,
            hi: pts[0],
        });
    }
    for (i, &s) in pts.iter().enumerate() {
        plan.push(Sweep::Lambda {
            site: Site::Interior(Probe::exact(s)),
        });
        let hi = pts.get(i + 1).copied().unwrap_or(2.0 * PI);
        if hi > s {
            plan.push(Sweep::Arc { lo: s, hi });
        }
    }
    plan
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fredholmness {
    Yes,
    No,
    Unresolved,
}

/// Outcome of the invertibility scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FredholmVerdict {
    pub status: Fredholmness,
    pub min_abs_det: f64,
    pub max_abs_det: f64,
    /// Angle and `lambda` where the minimum was seen.
    pub witness: (f64, CompactReal),
}

impl FredholmVerdict {
    pub fn is_fredholm(&self) -> bool {
        self.status == Fredholmness::Yes
    }
}

pub const SINGULAR_REL: f64 = 1e-8;
pub const SAFE_REL: f64 = 1e-5;
const REFINE_DEPTH: usize = 12;
const REFINED_CANDIDATES: usize = 4;

/// Scans `|det smb|` over the half-cylinder and classifies the minimum.
pub fn is_fredholm<S: SymbolSource + ?Sized>(
    src: &S,
    exp: Exponent,
    res: Resolution,
) -> FredholmVerdict {
    let plan = half_circle_plan(&src.jump_points());
    scan_plan(&plan, res, |site, lambda| src.symbol_det(exp, site, lambda))
}

/// The scan behind [`is_fredholm`], for any determinant function on a plan.
pub fn scan_plan<F>(plan: &[Sweep], res: Resolution, det: F) -> FredholmVerdict
where
    F: Fn(Site, CompactReal) -> Complex64,
{
    let mut max_abs = 0.0f64;
    // per sweep: (min |det|, param, neighbouring params)
    let mut minima: Vec<(f64, usize, f64, f64, f64)> = Vec::new();
    for (si, sweep) in plan.iter().enumerate() {
        let grid = sweep.grid(res);
        let vals: Vec<f64> = grid
            .iter()
            .map(|&u| {
                let (site, l) = sweep.locate(u);
                det(site, l).norm()
            })
            .collect();
        let (j, &m) = vals
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .expect("sweeps are never empty");
        max_abs = max_abs.max(vals.iter().copied().fold(0.0, f64::max));
        let lo = grid[j.saturating_sub(1)];
        let hi = grid[(j + 1).min(grid.len() - 1)];
        minima.push((m, si, grid[j], lo, hi));
    }
    minima.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = (f64::INFINITY, 0usize, 0.0f64);
    for &(m, si, u, lo, hi) in minima.iter().take(REFINED_CANDIDATES) {
        let sweep = &plan[si];
        let f = |x: f64| {
            let (site, l) = sweep.locate(x);
            det(site, l).norm()
        };
        let (v, x) = refine_minimum(&f, lo, u, hi, m);
        if v < best.0 {
            best = (v, si, x);
        }
    }
    let (min_abs, si, x) = best;
    let (site, lambda) = plan[si].locate(x);
    let scale = max_abs.max(f64::MIN_POSITIVE);
    let status = if !min_abs.is_finite() || min_abs < SINGULAR_REL * scale {
        Fredholmness::No
    } else if min_abs < SAFE_REL * scale {
        Fredholmness::Unresolved
    } else {
        Fredholmness::Yes
    };
    FredholmVerdict {
        status,
        min_abs_det: min_abs,
        max_abs_det: max_abs,
        witness: (site.theta(), lambda),
    }
}

/// Shrinks the bracket `[lo, hi]` around `mid` towards a local minimum.
fn refine_minimum<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut mid: f64,
    mut hi: f64,
    mut fm: f64,
) -> (f64, f64) {
    for _ in 0..REFINE_DEPTH {
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        let left = 0.5 * (lo + mid);
        let right = 0.5 * (mid + hi);
        let (fl, fr) = (f(left), f(right));
        if fl < fm && fl <= fr {
            hi = mid;
            mid = left;
            fm = fl;
        } else if fr < fm {
            lo = mid;
            mid = right;
            fm = fr;
        } else {
            lo = left;
            hi = right;
        }
    }
    (fm, mid)
}

/// A point of the essential spectrum cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub z: Complex64,
    pub theta: f64,
    /// `None` where the symbol does not depend on `lambda`.
    pub lambda: Option<CompactReal>,
}

/// Eigenvalues of the symbol on a uniform grid of `T+` plus full `lambda`
/// sweeps at `+-1` and at every interior jump, ordered by `(t, lambda)`.
pub fn essential_spectrum_cloud(
    e: &OperatorExpr,
    exp: Exponent,
    res: Resolution,
) -> Vec<SpectrumPoint> {
    let special = upper_special_points(&e.jump_points());
    let n = res.t_points.max(2);
    let mut thetas: Vec<(f64, bool)> = (1..n - 1)
        .map(|j| (PI * j as f64 / (n - 1) as f64, false))
        .collect();
    thetas.retain(|(th, _)| special.iter().all(|s| (s - th).abs() >= MERGE_TOL));
    thetas.extend(special.iter().map(|&s| (s, true)));
    thetas.push((0.0, true));
    thetas.push((PI, true));
    thetas.sort_by(|x, y| x.0.total_cmp(&y.0));
    let lambdas = arcs::lambda_grid(res.lambda_points);
    let mut out = Vec::new();
    for (th, sweep) in thetas {
        let t = CircPoint::new(th);
        let site = if th == 0.0 || th == PI {
            Site::Endpoint(t)
        } else {
            Site::Interior(Probe::exact(th))
        };
        if sweep {
            for &l in &lambdas {
                for z in e.symbol(exp, site, l).eigenvalues() {
                    out.push(SpectrumPoint {
                        z,
                        theta: th,
                        lambda: Some(l),
                    });
                }
            }
        } else {
            for z in e.symbol(exp, site, CompactReal::NegInf).eigenvalues() {
                out.push(SpectrumPoint {
                    z,
                    theta: th,
                    lambda: None,
                });
            }
        }
    }
    out
}
